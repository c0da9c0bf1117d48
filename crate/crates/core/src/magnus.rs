//! Truncated Magnus expansion of `F₂`: `x ↦ 1 + X`, `y ↦ 1 + Y` in the
//! algebra of noncommutative polynomials in `X`, `Y` modulo degree `> d`,
//! with coefficients in `ℤ/N`. Units with constant term 1 form a finite
//! nilpotent group, a cheap quotient of `F₂`.

use std::fmt;

use num_traits::PrimInt;

use crate::error::{Error, Result};
use crate::group::Group;

/// A truncated series; coefficient `k` belongs to the monomial encoded by
/// [`MagnusGroup::monomial`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MagnusSeries<T> {
    coefficients: Vec<T>,
}

impl<T: PrimInt + fmt::Display> fmt::Debug for MagnusSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonzero: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c}@{k}"))
            .collect();
        write!(f, "Magnus[{}]", nonzero.join(" "))
    }
}

impl<T: Copy> MagnusSeries<T> {
    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }
}

/// The group of truncated series with constant term 1, coefficients
/// modulo `modulus`, degree at most `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagnusGroup<T> {
    modulus: T,
    degree: usize,
    /// `(length, bits)` of the monomial at each index.
    monomials: Vec<(usize, usize)>,
}

impl<T: PrimInt + fmt::Display> MagnusGroup<T> {
    /// Coefficients modulo `modulus`; products of two residues must fit in `T`.
    pub fn new(modulus: T, degree: usize) -> Result<Self> {
        if modulus < T::one() + T::one() {
            return Err(Error::Invalid(format!("modulus {modulus} must be at least 2")));
        }
        let m1 = modulus - T::one();
        if m1.checked_mul(&m1).is_none() {
            return Err(Error::Invalid(format!("modulus {modulus} too large for exact products")));
        }
        if degree > 16 {
            return Err(Error::Invalid(format!("degree {degree} exceeds 16")));
        }
        let monomials = (0..=degree)
            .flat_map(|len| (0..1usize << len).map(move |bits| (len, bits)))
            .collect();
        Ok(Self {
            modulus,
            degree,
            monomials,
        })
    }

    /// Coefficients in `ℤ/ℓ^k`.
    pub fn prime_power(ell: T, k: u32, degree: usize) -> Result<Self> {
        let modulus = (0..k).try_fold(T::one(), |acc, _| acc.checked_mul(&ell));
        let modulus = modulus.ok_or_else(|| Error::Invalid(format!("{ell}^{k} overflows")))?;
        Self::new(modulus, degree)
    }

    pub fn modulus(&self) -> T {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn index(len: usize, bits: usize) -> usize {
        (1 << len) - 1 + bits
    }

    /// The monomial at `index` as a string over `X`, `Y`.
    pub fn monomial(&self, index: usize) -> String {
        let (len, bits) = self.monomials[index];
        (0..len)
            .rev()
            .map(|k| if bits >> k & 1 == 0 { 'X' } else { 'Y' })
            .collect()
    }

    fn zero_series(&self) -> Vec<T> {
        vec![T::zero(); self.monomials.len()]
    }

    /// `1 + X` for `generator = 1`, `1 + Y` for `generator = 2`.
    pub fn generator(&self, generator: usize) -> Result<MagnusSeries<T>> {
        if !(1..=2).contains(&generator) {
            return Err(Error::IndexOutOfRange {
                index: generator as i64,
                bound: 2,
            });
        }
        let mut c = self.zero_series();
        c[0] = T::one();
        if self.degree >= 1 {
            c[Self::index(1, generator - 1)] = T::one();
        }
        Ok(MagnusSeries { coefficients: c })
    }
}

impl<T: PrimInt + fmt::Display + fmt::Debug + std::hash::Hash> Group for MagnusGroup<T> {
    type Elem = MagnusSeries<T>;

    fn identity(&self) -> MagnusSeries<T> {
        let mut c = self.zero_series();
        c[0] = T::one();
        MagnusSeries { coefficients: c }
    }

    fn mul(&self, a: &MagnusSeries<T>, b: &MagnusSeries<T>) -> MagnusSeries<T> {
        let mut c = self.zero_series();
        for (i, &(la, ba)) in self.monomials.iter().enumerate() {
            let ca = a.coefficients[i];
            if ca.is_zero() {
                continue;
            }
            for (j, &(lb, bb)) in self.monomials.iter().enumerate() {
                if la + lb > self.degree {
                    break;
                }
                let cb = b.coefficients[j];
                if cb.is_zero() {
                    continue;
                }
                let k = Self::index(la + lb, ba << lb | bb);
                let term = (ca * cb) % self.modulus;
                c[k] = mod_add(c[k], term, self.modulus);
            }
        }
        MagnusSeries { coefficients: c }
    }

    fn inv(&self, a: &MagnusSeries<T>) -> MagnusSeries<T> {
        // (1 + u)⁻¹ = Σ (-u)^k, and u^k vanishes past the truncation degree
        let mut neg_u = self.zero_series();
        for (k, &c) in a.coefficients.iter().enumerate().skip(1) {
            neg_u[k] = if c.is_zero() { c } else { self.modulus - c };
        }
        let neg_u = MagnusSeries { coefficients: neg_u };
        let mut power = self.identity();
        let mut sum = self.identity();
        for _ in 0..self.degree {
            power = self.mul(&power, &neg_u);
            for (s, p) in sum.coefficients.iter_mut().zip(&power.coefficients) {
                *s = mod_add(*s, *p, self.modulus);
            }
        }
        sum
    }

    fn eq(&self, a: &MagnusSeries<T>, b: &MagnusSeries<T>) -> bool {
        a == b
    }
}

fn mod_add<T: PrimInt>(a: T, b: T, modulus: T) -> T {
    // both inputs are reduced, so a + b < 2m; avoid overflow near T::max
    if a >= modulus - b {
        a - (modulus - b)
    } else {
        a + b
    }
}
