//! Words in finitely generated free groups.
//!
//! Letters are 1-based signed generator indices: `i` is the i-th generator
//! and `-i` its inverse. A [`FreeWord`] is always freely reduced, so word
//! equality is group equality.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::Group;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<i32>,
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}[{}]", self.rank, self)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

/// Appends `letter` to an already reduced sequence, cancelling if needed.
#[inline]
pub(crate) fn push_reduced(out: &mut Vec<i32>, letter: i32) {
    if out.last() == Some(&-letter) {
        out.pop();
    } else {
        out.push(letter);
    }
}

impl FreeWord {
    /// Freely reduces a raw letter sequence.
    pub fn reduce(letters: &[i32], rank: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l.unsigned_abs() as usize > rank {
                return Err(Error::IndexOutOfRange {
                    index: l as i64,
                    bound: rank,
                });
            }
            push_reduced(&mut out, l);
        }
        Ok(Self { rank, letters: out })
    }

    pub fn identity(rank: usize) -> Self {
        Self {
            rank,
            letters: Vec::new(),
        }
    }

    /// The i-th generator (1-based).
    pub fn generator(rank: usize, i: usize) -> Result<Self> {
        Self::reduce(&[i as i32], rank)
    }

    /// Commutator `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &FreeWord, b: &FreeWord) -> Result<Self> {
        let ab = a.multiply(b)?;
        ab.multiply(&a.invert())?.multiply(&b.invert())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &FreeWord) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(Self {
            rank: self.rank,
            letters: out,
        })
    }

    pub fn invert(&self) -> Self {
        Self {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn pow(&self, exp: i64) -> Self {
        FreeGroup::new(self.rank).pow(self, exp)
    }

    /// Evaluates the word in `group` with generator `i` sent to `images[i-1]`.
    pub fn substitute<G: Group>(&self, group: &G, images: &[G::Elem]) -> Result<G::Elem> {
        if images.len() != self.rank {
            return Err(Error::ArityMismatch {
                expected: self.rank,
                got: images.len(),
            });
        }
        let inverses: Vec<G::Elem> = images.iter().map(|g| group.inv(g)).collect();
        let mut acc = group.identity();
        for &l in &self.letters {
            let idx = l.unsigned_abs() as usize - 1;
            let factor = if l > 0 { &images[idx] } else { &inverses[idx] };
            acc = group.mul(&acc, factor);
        }
        Ok(acc)
    }

    /// Substitution into a free group, done in one reduced buffer.
    pub fn substitute_words(&self, images: &[FreeWord]) -> Result<FreeWord> {
        if images.len() != self.rank {
            return Err(Error::ArityMismatch {
                expected: self.rank,
                got: images.len(),
            });
        }
        let target = images.first().map_or(0, |w| w.rank);
        if let Some(w) = images.iter().find(|w| w.rank != target) {
            return Err(Error::RankMismatch {
                left: w.rank,
                right: target,
            });
        }
        let mut out = Vec::new();
        for &l in &self.letters {
            let img = &images[l.unsigned_abs() as usize - 1].letters;
            if l > 0 {
                img.iter().for_each(|&x| push_reduced(&mut out, x));
            } else {
                img.iter().rev().for_each(|&x| push_reduced(&mut out, -x));
            }
        }
        Ok(FreeWord {
            rank: target,
            letters: out,
        })
    }

    /// Signed occurrence count of every generator (the abelianized image).
    pub fn exponent_vector(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &l in &self.letters {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    /// Exponent sums of a rank-2 word.
    pub fn exponent_sums(&self) -> Result<(i64, i64)> {
        if self.rank != 2 {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: 2,
            });
        }
        let v = self.exponent_vector();
        Ok((v[0], v[1]))
    }

    /// Parses whitespace-separated signed integers; an empty string is the
    /// identity.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for (column, token) in crate::text::tokens(text) {
            let l: i32 = token.parse().map_err(|_| {
                Error::parse(1, column, format!("expected signed integer, found `{token}`"))
            })?;
            if l == 0 || l.unsigned_abs() as usize > rank {
                return Err(Error::parse(
                    1,
                    column,
                    format!("generator index {l} outside 1..={rank}"),
                ));
            }
            letters.push(l);
        }
        Self::reduce(&letters, rank)
    }
}

/// The free group of a given rank as a [`Group`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        Self { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> Vec<FreeWord> {
        (1..=self.rank)
            .map(|i| FreeWord::generator(self.rank, i).expect("in range"))
            .collect()
    }
}

impl Group for FreeGroup {
    type Elem = FreeWord;

    fn identity(&self) -> FreeWord {
        FreeWord::identity(self.rank)
    }

    fn mul(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.multiply(b).expect("free group elements share the group rank")
    }

    fn inv(&self, a: &FreeWord) -> FreeWord {
        a.invert()
    }

    fn eq(&self, a: &FreeWord, b: &FreeWord) -> bool {
        a == b
    }
}

/// An endomorphism of a free group given by the images of its generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeEndomorphism {
    images: Vec<FreeWord>,
}

impl FreeEndomorphism {
    pub fn new(images: Vec<FreeWord>) -> Result<Self> {
        let rank = images.len();
        if let Some(w) = images.iter().find(|w| w.rank() != rank) {
            return Err(Error::RankMismatch {
                left: w.rank(),
                right: rank,
            });
        }
        Ok(Self { images })
    }

    pub fn identity(rank: usize) -> Self {
        Self {
            images: FreeGroup::new(rank).generators(),
        }
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn apply(&self, w: &FreeWord) -> Result<FreeWord> {
        w.substitute_words(&self.images)
    }

    /// Composite of substitutions: the images of `self` with every generator
    /// replaced by its image under `next`. As functions on words this is
    /// `next ∘ self`, i.e. `self` acts first.
    pub fn then(&self, next: &FreeEndomorphism) -> Result<Self> {
        let images = self
            .images
            .iter()
            .map(|w| next.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::Permutation;
    use crate::group::FiniteGroup;
    use proptest::prelude::*;

    fn w(letters: &[i32]) -> FreeWord {
        FreeWord::reduce(letters, 2).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(w(&[1, 2, -2, 1]).letters(), &[1, 1]);
        assert!(w(&[]).is_identity());
        assert_eq!(w(&[1, -1, 1]).letters(), &[1]);
        assert!(FreeWord::reduce(&[3], 2).is_err());
        assert!(FreeWord::reduce(&[0], 2).is_err());
    }

    #[test]
    fn multiply_and_invert() {
        assert!(w(&[1]).multiply(&w(&[-1])).unwrap().is_identity());
        assert_eq!(w(&[1, 2]).invert().letters(), &[-2, -1]);
        let xy = w(&[1, 2, -1, -2]);
        let yx = w(&[2, 1, -2, -1]);
        assert!(xy.multiply(&yx).unwrap().is_identity());
        assert!(w(&[1]).multiply(&FreeWord::identity(3)).is_err());
    }

    #[test]
    fn substitute_examples() {
        let s3 = FiniteGroup::from_permutations(
            "S3",
            &[
                Permutation::transposition(3, 1, 2),
                Permutation::transposition(3, 2, 3),
            ],
        )
        .unwrap();
        // Locate the two transpositions and the 3-cycles by element order.
        let involutions: Vec<usize> = s3.elements().filter(|&a| s3.element_order(a) == 2).collect();
        let (a, b) = (involutions[0], involutions[1]);
        let comm = w(&[1, 2, -1, -2]);
        let image = comm.substitute(&s3, &[a, b]).unwrap();
        // Direct multiplication: a b a⁻¹ b⁻¹ = (ab)^2 for involutions.
        let ab = s3.op(a, b);
        assert_eq!(image, s3.op(ab, ab));
        assert_eq!(s3.element_order(image), 3);
        for g in s3.elements() {
            assert_eq!(comm.substitute(&s3, &[g, g]).unwrap(), 0);
        }
        let xy = w(&[1, 2]);
        assert_eq!(xy.substitute(&s3, &[a, b]).unwrap(), s3.op(a, b));
        assert!(xy.substitute(&s3, &[a]).is_err());
    }

    #[test]
    fn exponent_sum_examples() {
        assert_eq!(w(&[1, 2, -1, -2]).exponent_sums().unwrap(), (0, 0));
        assert_eq!(w(&[1, 1, 1, -2]).exponent_sums().unwrap(), (3, -1));
        assert_eq!(w(&[]).exponent_sums().unwrap(), (0, 0));
    }

    #[test]
    fn parse_and_print() {
        let word = FreeWord::parse("1 2 -1 -2", 2).unwrap();
        assert_eq!(word.to_string(), "1 2 -1 -2");
        assert!(FreeWord::parse("", 2).unwrap().is_identity());
        match FreeWord::parse("1 x", 2) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(FreeWord::parse("1 3", 2).is_err());
    }

    #[test]
    fn endomorphism_then_is_substitution_composite() {
        let x = w(&[1]);
        let y = w(&[2]);
        let swap = FreeEndomorphism::new(vec![y.clone(), x.clone()]).unwrap();
        let square_x = FreeEndomorphism::new(vec![w(&[1, 1]), y.clone()]).unwrap();
        let comp = swap.then(&square_x).unwrap();
        // swap first, then square x: x -> y -> y, y -> x -> x x
        assert_eq!(comp.images(), &[y, w(&[1, 1])]);
    }

    fn raw_word(max_len: usize) -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..=max_len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reduce_idempotent(raw in raw_word(32)) {
            let once = FreeWord::reduce(&raw, 2).unwrap();
            let twice = FreeWord::reduce(once.letters(), 2).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn group_laws(a in raw_word(32), b in raw_word(32), c in raw_word(32)) {
            let (a, b, c) = (w(&a), w(&b), w(&c));
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert!(a.multiply(&a.invert()).unwrap().is_identity());
            prop_assert!(a.invert().multiply(&a).unwrap().is_identity());
        }

        #[test]
        fn substitute_is_functorial(a in raw_word(12), b in raw_word(12),
                                    g in raw_word(6), h in raw_word(6)) {
            let f2 = FreeGroup::new(2);
            let (a, b) = (w(&a), w(&b));
            let imgs = [w(&g), w(&h)];
            let lhs = a.multiply(&b).unwrap().substitute(&f2, &imgs).unwrap();
            let rhs = a.substitute(&f2, &imgs).unwrap()
                .multiply(&b.substitute(&f2, &imgs).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exponent_sums_additive(a in raw_word(32), b in raw_word(32)) {
            let (a, b) = (w(&a), w(&b));
            let (p, q) = a.exponent_sums().unwrap();
            let (r, s) = b.exponent_sums().unwrap();
            prop_assert_eq!(a.multiply(&b).unwrap().exponent_sums().unwrap(), (p + r, q + s));
        }
    }
}
