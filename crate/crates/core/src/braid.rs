//! Braid groups, permutations and the braid operations behind operadic
//! composition of parenthesized braids.
//!
//! Conventions used throughout the crate:
//!
//! * A braid word is read left to right in time: the first letter is the
//!   first crossing. Concatenation `a · b` performs `a` then `b`.
//! * [`BraidWord::permutation`] sends a braid to the permutation `ρ` with
//!   `ρ(q)` = starting position of the strand that ends at position `q`.
//!   With this reading `ρ(a · b) = ρ(a) ∘ ρ(b)`, so it is a homomorphism
//!   onto the symmetric group with ordinary composition.
//! * Equality of braids is decided by the Artin action on the free group of
//!   rank `n`, which is faithful.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::freegroup::{push_reduced, FreeWord};
use crate::group::Group;

/// A permutation of `1..=n`, stored by its images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::Invalid(format!("{images:?} is not a permutation")));
            }
            seen[v - 1] = true;
        }
        Ok(Self { images })
    }

    /// Transposition of `i` and `j` in the symmetric group on `n` letters.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i - 1, j - 1);
        p
    }

    /// The cycle `1 → 2 → … → n → 1`.
    pub fn cycle(n: usize) -> Self {
        Self {
            images: (1..=n).map(|k| k % n + 1).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self(k)` for `k` in `1..=n`.
    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.size() != other.size() {
            return Err(Error::ArityMismatch {
                expected: self.size(),
                got: other.size(),
            });
        }
        Ok(Self {
            images: other.images.iter().map(|&k| self.images[k - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.size()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v - 1] = k + 1;
        }
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// All permutations of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Self {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }

    /// Parses `(2 1 3)`; `()` is the permutation of the empty set.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(1, 1, "permutation must be written as `(a b c)`"))?;
        let mut images = Vec::new();
        for (col, tok) in crate::text::tokens(inner) {
            images.push(
                tok.parse()
                    .map_err(|_| Error::parse(1, col + 1, format!("bad entry `{tok}`")))?,
            );
        }
        Self::from_images(images)
    }
}

/// A word in the Artin generators of the braid group on `strands` strands.
/// Letters `i` and `-i` stand for `σ_i` and `σ_i⁻¹`. Words are kept freely
/// reduced; equality of braids must go through [`BraidWord::equals`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    word: Vec<i32>,
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}", self.strands)?;
        for l in &self.word {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl BraidWord {
    pub fn new(strands: usize, word: &[i32]) -> Result<Self> {
        let mut out = Vec::with_capacity(word.len());
        for &l in word {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::IndexOutOfRange {
                    index: l as i64,
                    bound: strands.saturating_sub(1),
                });
            }
            push_reduced(&mut out, l);
        }
        Ok(Self { strands, word: out })
    }

    pub fn identity(strands: usize) -> Self {
        Self {
            strands,
            word: Vec::new(),
        }
    }

    /// `σ_i` (or `σ_i⁻¹` when `i` is negative).
    pub fn generator(strands: usize, i: i32) -> Result<Self> {
        Self::new(strands, &[i])
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn word(&self) -> &[i32] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    fn check_strands(&self, other: &BraidWord) -> Result<()> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn multiply(&self, other: &BraidWord) -> Result<Self> {
        self.check_strands(other)?;
        let mut word = self.word.clone();
        for &l in &other.word {
            push_reduced(&mut word, l);
        }
        Ok(Self {
            strands: self.strands,
            word,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            strands: self.strands,
            word: self.word.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn pow(&self, exp: i64) -> Self {
        BraidGroup::new(self.strands).pow(self, exp)
    }

    /// Every crossing inverted.
    pub fn mirror(&self) -> Self {
        Self {
            strands: self.strands,
            word: self.word.iter().map(|l| -l).collect(),
        }
    }

    /// Rotation of the braid by a half turn in the plane: `σ_i ↦ σ_{n-i}`.
    pub fn rotate(&self) -> Self {
        let n = self.strands as i32;
        Self {
            strands: self.strands,
            word: self.word.iter().map(|&l| l.signum() * (n - l.abs())).collect(),
        }
    }

    /// Embeds the braid into `total` strands, moving strand `k` to `k + offset`.
    pub fn shift(&self, offset: usize, total: usize) -> Result<Self> {
        if offset + self.strands > total {
            return Err(Error::IndexOutOfRange {
                index: (offset + self.strands) as i64,
                bound: total,
            });
        }
        Ok(Self {
            strands: total,
            word: self
                .word
                .iter()
                .map(|&l| l.signum() * (l.abs() + offset as i32))
                .collect(),
        })
    }

    /// Sum of the exponents (the abelianization `B_n → ℤ`).
    pub fn exponent_sum(&self) -> i64 {
        self.word.iter().map(|l| l.signum() as i64).sum()
    }

    /// The underlying permutation (see module docs for the convention).
    pub fn permutation(&self) -> Permutation {
        let mut images: Vec<usize> = (1..=self.strands).collect();
        for &l in &self.word {
            let i = l.unsigned_abs() as usize;
            images.swap(i - 1, i);
        }
        Permutation { images }
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().is_identity()
    }

    /// A positive braid whose underlying permutation is `p`.
    pub fn from_permutation(p: &Permutation) -> Self {
        let mut v = p.images.clone();
        let mut swaps = Vec::new();
        let n = v.len();
        for pass in 0..n {
            for j in 0..n.saturating_sub(1 + pass) {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    swaps.push((j + 1) as i32);
                }
            }
        }
        swaps.reverse();
        Self {
            strands: n,
            word: swaps,
        }
    }

    /// Images of the free generators `x_1..x_n` under the Artin action of
    /// this braid. `σ_i` sends `x_i ↦ x_i x_{i+1} x_i⁻¹`, `x_{i+1} ↦ x_i`.
    pub fn artin_images(&self) -> Vec<FreeWord> {
        let n = self.strands;
        let mut images: Vec<Vec<i32>> = (1..=n as i32).map(|k| vec![k]).collect();
        for &l in &self.word {
            let i = l.unsigned_abs() as usize - 1;
            let a = std::mem::take(&mut images[i]);
            let b = std::mem::take(&mut images[i + 1]);
            if l > 0 {
                // x_i -> a b a⁻¹, x_{i+1} -> a
                let mut first = a.clone();
                extend_reduced(&mut first, &b);
                extend_reduced_inverse(&mut first, &a);
                images[i] = first;
                images[i + 1] = a;
            } else {
                // x_i -> b, x_{i+1} -> b⁻¹ a b
                let mut second = Vec::with_capacity(2 * b.len() + a.len());
                extend_reduced_inverse(&mut second, &b);
                extend_reduced(&mut second, &a);
                extend_reduced(&mut second, &b);
                images[i] = b;
                images[i + 1] = second;
            }
        }
        images
            .into_iter()
            .map(|w| FreeWord::reduce(&w, n).expect("letters stay in range"))
            .collect()
    }

    /// Decides equality in `B_n` through the Artin action.
    pub fn equals(&self, other: &BraidWord) -> Result<bool> {
        self.check_strands(other)?;
        if self.word == other.word {
            return Ok(true);
        }
        if self.exponent_sum() != other.exponent_sum() || self.permutation() != other.permutation() {
            return Ok(false);
        }
        Ok(self.artin_images() == other.artin_images())
    }

    /// Replaces the strand starting at position `i` by `m` parallel strands.
    /// `m = 0` deletes the strand and `m = 1` leaves the braid unchanged.
    pub fn cable(&self, i: usize, m: usize) -> Result<Self> {
        let n = self.strands;
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange {
                index: i as i64,
                bound: n,
            });
        }
        let total = n + m - 1;
        let mut word = Vec::with_capacity(self.word.len() * m.max(1));
        let mut fat = i;
        for &l in &self.word {
            let sign = l.signum();
            let j = l.unsigned_abs() as usize;
            if j == fat {
                // block at j..j+m-1 moves right past the strand at j+m
                for k in (fat..fat + m).rev() {
                    word.push(sign * k as i32);
                }
                fat += 1;
            } else if j + 1 == fat {
                // strand at j moves right through the block
                for k in j..j + m {
                    word.push(sign * k as i32);
                }
                fat -= 1;
            } else {
                let target = if j < fat { j } else { j + m - 1 };
                word.push(sign * target as i32);
            }
        }
        Self::new(total, &word)
    }

    /// Operadic insertion: `inner` placed on the block of strands
    /// `i..i+m-1`, followed by `self` cabled at strand `i`.
    pub fn insert(&self, i: usize, inner: &BraidWord) -> Result<Self> {
        let m = inner.strands;
        let cabled = self.cable(i, m)?;
        let shifted = inner.shift(i - 1, cabled.strands)?;
        shifted.multiply(&cabled)
    }

    /// `(σ_1 σ_2 ⋯ σ_{n-1})^n`.
    pub fn full_twist(n: usize) -> Self {
        let row: Vec<i32> = (1..n as i32).collect();
        let word: Vec<i32> = row.iter().copied().cycle().take(row.len() * n).collect();
        Self { strands: n, word }
    }

    /// `x_ij = (σ_{j-1} ⋯ σ_{i+1}) σ_i² (σ_{j-1} ⋯ σ_{i+1})⁻¹`.
    pub fn pure_generator(n: usize, i: usize, j: usize) -> Result<Self> {
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::Invalid(format!(
                "pure braid generator needs 1 <= i < j <= n, got i={i}, j={j}, n={n}"
            )));
        }
        let conj: Vec<i32> = (i + 1..j).rev().map(|k| k as i32).collect();
        let mut word = conj.clone();
        word.extend([i as i32, i as i32]);
        word.extend(conj.iter().rev().map(|l| -l));
        Self::new(n, &word)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, strands: usize, len: usize) -> Self {
        if strands < 2 {
            return Self::identity(strands);
        }
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let i = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    i
                } else {
                    -i
                }
            })
            .collect();
        Self::new(strands, &word).expect("in range")
    }

    /// Parses `B<n> i j ...`. Tokens of the form `x[i,j]` expand to the pure
    /// braid generator; a line made only of `x[i,j]@n` tokens is also read.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_line(text, 1)
    }

    pub(crate) fn parse_line(text: &str, line: usize) -> Result<Self> {
        let toks = crate::text::tokens(text);
        let Some(&(col0, head)) = toks.first() else {
            return Err(Error::parse(line, 1, "empty braid"));
        };
        let (strands, rest) = if let Some(n) = head.strip_prefix('B') {
            let n = n
                .parse()
                .map_err(|_| Error::parse(line, col0, format!("bad strand count `{head}`")))?;
            (n, &toks[1..])
        } else {
            let n = pure_token(head)
                .and_then(|(_, _, n)| n)
                .ok_or_else(|| Error::parse(line, col0, "braid must start with `B<n>` or `x[i,j]@n`"))?;
            (n, &toks[..])
        };
        let mut word = Vec::new();
        for &(col, tok) in rest {
            if let Some((i, j, n)) = pure_token(tok) {
                if n.is_some_and(|n| n != strands) {
                    return Err(Error::parse(line, col, "strand count disagrees with header"));
                }
                let x = Self::pure_generator(strands, i, j)
                    .map_err(|e| Error::parse(line, col, e.to_string()))?;
                word.extend_from_slice(&x.word);
                continue;
            }
            let l: i32 = tok
                .parse()
                .map_err(|_| Error::parse(line, col, format!("bad braid letter `{tok}`")))?;
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::parse(
                    line,
                    col,
                    format!("generator {l} out of range for B{strands}"),
                ));
            }
            word.push(l);
        }
        Self::new(strands, &word)
    }
}

/// `x[i,j]` or `x[i,j]@n`.
fn pure_token(tok: &str) -> Option<(usize, usize, Option<usize>)> {
    let body = tok.strip_prefix("x[")?;
    let (inside, tail) = body.split_once(']')?;
    let (i, j) = inside.split_once(',')?;
    let n = match tail {
        "" => None,
        t => Some(t.strip_prefix('@')?.parse().ok()?),
    };
    Some((i.trim().parse().ok()?, j.trim().parse().ok()?, n))
}

/// Display form `x[i,j]@n` of a pure braid generator.
pub fn pure_generator_label(n: usize, i: usize, j: usize) -> String {
    format!("x[{i},{j}]@{n}")
}

fn extend_reduced(out: &mut Vec<i32>, w: &[i32]) {
    for &l in w {
        push_reduced(out, l);
    }
}

fn extend_reduced_inverse(out: &mut Vec<i32>, w: &[i32]) {
    for &l in w.iter().rev() {
        push_reduced(out, -l);
    }
}

/// The braid group on a fixed number of strands as a [`Group`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BraidGroup {
    strands: usize,
}

impl BraidGroup {
    pub fn new(strands: usize) -> Self {
        Self { strands }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }
}

impl Group for BraidGroup {
    type Elem = BraidWord;

    fn identity(&self) -> BraidWord {
        BraidWord::identity(self.strands)
    }

    fn mul(&self, a: &BraidWord, b: &BraidWord) -> BraidWord {
        a.multiply(b).expect("braids share the strand count")
    }

    fn inv(&self, a: &BraidWord) -> BraidWord {
        a.inverse()
    }

    fn eq(&self, a: &BraidWord, b: &BraidWord) -> bool {
        a.equals(b).expect("braids share the strand count")
    }
}

/// The symmetric group on `n` letters as a [`Group`] (ordinary composition).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetricGroup {
    n: usize,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Self {
        Self { n }
    }
}

impl Group for SymmetricGroup {
    type Elem = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.n)
    }

    fn mul(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b).expect("same degree")
    }

    fn inv(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }

    fn eq(&self, a: &Permutation, b: &Permutation) -> bool {
        a == b
    }
}
