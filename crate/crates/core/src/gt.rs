//! Discrete Grothendieck–Teichmüller candidates `(λ, f)` with `λ` odd and
//! `f ∈ F₂`: exact checks of the three defining relations, the monoid
//! product, and the actions on `F₂`, `B₃` and `K₃`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::braid::{BraidGroup, BraidWord};
use crate::error::{Error, Result};
use crate::freegroup::{FreeEndomorphism, FreeGroup, FreeWord};
use crate::group::Group;

/// A pair `(λ, f)` with `λ` odd and `f` a reduced word in `F₂ = ⟨x, y⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GtCandidate {
    lambda: i64,
    f: FreeWord,
}

impl GtCandidate {
    pub fn new(lambda: i64, f: FreeWord) -> Result<Self> {
        if lambda % 2 == 0 {
            return Err(Error::EvenLambda(lambda));
        }
        if f.rank() != 2 {
            return Err(Error::RankMismatch {
                left: f.rank(),
                right: 2,
            });
        }
        Ok(Self { lambda, f })
    }

    /// `(1, 1)`, the unit of the monoid.
    pub fn identity() -> Self {
        Self {
            lambda: 1,
            f: FreeWord::identity(2),
        }
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn f(&self) -> &FreeWord {
        &self.f
    }

    /// `m = (λ - 1) / 2`.
    pub fn m(&self) -> i64 {
        (self.lambda - 1) / 2
    }

    /// `(λ₁λ₂, f₁(f₂ x^{λ₂} f₂⁻¹, y^{λ₂}) f₂)`.
    pub fn multiply(&self, other: &GtCandidate) -> GtCandidate {
        let (x, y) = generators();
        let f2 = &other.f;
        let first = f2.multiply(&x.pow(other.lambda)).and_then(|w| w.multiply(&f2.invert()));
        let f = first
            .and_then(|a| self.f.substitute_words(&[a, y.pow(other.lambda)]))
            .and_then(|w| w.multiply(f2))
            .expect("rank-2 words");
        GtCandidate {
            lambda: self.lambda * other.lambda,
            f,
        }
    }

    /// The endomorphism `x ↦ x^λ`, `y ↦ f⁻¹ y^λ f` of `F₂`. Products map to
    /// substitution composites: `act(c₁ c₂) = act(c₁).then(act(c₂))`.
    pub fn act_on_f2(&self) -> FreeEndomorphism {
        let (x, y) = generators();
        let yi = self.f.invert().multiply(&y.pow(self.lambda)).and_then(|w| w.multiply(&self.f));
        FreeEndomorphism::new(vec![x.pow(self.lambda), yi.expect("rank-2 words")]).expect("rank 2")
    }

    /// `f(σ₂², σ₁²)` in `B₃`.
    fn b3_twist(&self) -> BraidWord {
        let s1sq = BraidWord::new(3, &[1, 1]).expect("valid");
        let s2sq = BraidWord::new(3, &[2, 2]).expect("valid");
        self.f
            .substitute(&BraidGroup::new(3), &[s2sq, s1sq])
            .expect("two images")
    }

    /// Images of `σ₁`, `σ₂`: `σ₁^λ` and `F σ₂^λ F⁻¹` with `F = f(σ₂², σ₁²)`.
    pub fn b3_generator_images(&self) -> [BraidWord; 2] {
        let big_f = self.b3_twist();
        let s1 = BraidWord::generator(3, 1).expect("valid").pow(self.lambda);
        let s2 = big_f
            .multiply(&BraidWord::generator(3, 2).expect("valid").pow(self.lambda))
            .and_then(|w| w.multiply(&big_f.inverse()))
            .expect("three strands");
        [s1, s2]
    }

    /// The action on a braid on three strands, letter by letter.
    pub fn act_on_b3(&self, b: &BraidWord) -> Result<BraidWord> {
        if b.strands() != 3 {
            return Err(Error::StrandMismatch {
                left: b.strands(),
                right: 3,
            });
        }
        let images = self.b3_generator_images();
        let group = BraidGroup::new(3);
        let mut out = BraidWord::identity(3);
        for &l in b.word() {
            let image = &images[l.unsigned_abs() as usize - 1];
            let image = if l > 0 { image.clone() } else { image.inverse() };
            out = group.mul(&out, &image);
        }
        Ok(out)
    }

    /// Whether the images of `σ₁`, `σ₂` satisfy the braid relation, i.e.
    /// whether [`act_on_b3`](Self::act_on_b3) is well defined on `B₃`.
    pub fn b3_action_is_homomorphism(&self) -> bool {
        let [a, b] = self.b3_generator_images();
        let g = BraidGroup::new(3);
        Group::eq(&g, &g.product([&a, &b, &a]), &g.product([&b, &a, &b]))
    }

    /// Images of the generators `σ₁²`, `σ₂²`, `(σ₁σ₂)³` of `K₃ ≅ F₂ × ℤ`.
    pub fn act_on_k3_decomposition(&self) -> K3Images {
        let act = |w: &[i32]| self.act_on_b3(&BraidWord::new(3, w).expect("valid")).expect("three strands");
        K3Images {
            sigma1_squared: act(&[1, 1]),
            sigma2_squared: act(&[2, 2]),
            center: act(&[1, 2, 1, 2, 1, 2]),
        }
    }

    /// Whether the action on `⟨σ₁², σ₂²⟩ ≅ F₂` restricts to
    /// [`act_on_f2`](Self::act_on_f2) under `x ↦ σ₁²`, `y ↦ σ₂²`.
    pub fn k3_restriction_agrees(&self) -> bool {
        let images = self.act_on_k3_decomposition();
        let embed = [
            BraidWord::new(3, &[1, 1]).expect("valid"),
            BraidWord::new(3, &[2, 2]).expect("valid"),
        ];
        let g = BraidGroup::new(3);
        let expected: Vec<BraidWord> = self
            .act_on_f2()
            .images()
            .iter()
            .map(|w| w.substitute(&g, &embed).expect("two images"))
            .collect();
        Group::eq(&g, &expected[0], &images.sigma1_squared) && Group::eq(&g, &expected[1], &images.sigma2_squared)
    }

    /// `f(x, y) f(y, x)`, which relation (1) requires to be trivial.
    pub fn relation1_word(&self) -> FreeWord {
        let (x, y) = generators();
        relation1_in(&FreeGroup::new(2), &self.f, &x, &y)
    }

    /// `f(z,x) z^m f(y,z) y^m f(x,y) x^m` with `z = (xy)⁻¹`.
    pub fn relation2_word(&self) -> FreeWord {
        let (x, y) = generators();
        relation2_in(&FreeGroup::new(2), &self.f, self.m(), &x, &y)
    }

    pub fn check_relation1(&self) -> bool {
        self.relation1_word().is_identity()
    }

    pub fn check_relation2(&self) -> bool {
        self.relation2_word().is_identity()
    }

    /// Relation (3), decided exactly in `B₄`.
    pub fn check_relation3(&self) -> bool {
        let g = BraidGroup::new(4);
        let x = pure_braid_images_b4();
        let (lhs, rhs) = relation3_in(&g, &self.f, &x);
        Group::eq(&g, &lhs, &rhs)
    }

    /// `f` has zero exponent sums, a necessary condition for membership.
    pub fn abelianization_test(&self) -> bool {
        self.f.exponent_sums() == Ok((0, 0))
    }

    pub fn check(&self) -> GtVerdict {
        GtVerdict {
            relation1: self.check_relation1(),
            relation2: self.check_relation2(),
            relation3: self.check_relation3(),
            abelianization: self.abelianization_test(),
        }
    }

    /// Parses `lambda=<odd int> f=<word>`; the word may be empty.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_line(text, 1)
    }

    pub(crate) fn parse_line(text: &str, line: usize) -> Result<Self> {
        let lambda_at = text
            .find("lambda=")
            .ok_or_else(|| Error::parse(line, 1, "expected `lambda=<odd int> f=<word>`"))?;
        let f_at = text
            .find("f=")
            .filter(|&p| p > lambda_at)
            .ok_or_else(|| Error::parse(line, text.len() + 1, "missing `f=`"))?;
        if !text[..lambda_at].trim().is_empty() {
            return Err(Error::parse(line, 1, "unexpected text before `lambda=`"));
        }
        let lambda_text = text[lambda_at + 7..f_at].trim();
        let lambda_col = lambda_at + 8;
        let lambda: i64 = lambda_text
            .parse()
            .map_err(|_| Error::parse(line, lambda_col, format!("expected integer, found `{lambda_text}`")))?;
        if lambda % 2 == 0 {
            return Err(Error::parse(line, lambda_col, format!("lambda must be odd, got {lambda}")));
        }
        let word_start = f_at + 2;
        let f = FreeWord::parse(&text[word_start..], 2).map_err(|e| match e {
            Error::Parse { column, message, .. } => Error::Parse {
                line,
                column: column + word_start,
                message,
            },
            other => other,
        })?;
        Self::new(lambda, f)
    }
}

impl fmt::Display for GtCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda={} f={}", self.lambda, self.f)
    }
}

impl FromStr for GtCandidate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Parses a file of candidates, one per content line.
pub fn parse_candidates(text: &str) -> Result<Vec<GtCandidate>> {
    crate::text::content_lines(text)
        .map(|(line, body)| GtCandidate::parse_line(body.trim_end(), line))
        .collect()
}

/// Relation-by-relation outcome for one candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GtVerdict {
    pub relation1: bool,
    pub relation2: bool,
    pub relation3: bool,
    pub abelianization: bool,
}

impl GtVerdict {
    pub fn all_relations(&self) -> bool {
        self.relation1 && self.relation2 && self.relation3
    }
}

/// Checks a pool of candidates in parallel; results keep the input order.
pub fn check_pool(candidates: &[GtCandidate]) -> Vec<GtVerdict> {
    candidates.par_iter().map(GtCandidate::check).collect()
}

/// Images of `σ₁²`, `σ₂²` and the full twist under the `B₃` action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K3Images {
    pub sigma1_squared: BraidWord,
    pub sigma2_squared: BraidWord,
    pub center: BraidWord,
}

fn generators() -> (FreeWord, FreeWord) {
    (
        FreeWord::generator(2, 1).expect("rank 2"),
        FreeWord::generator(2, 2).expect("rank 2"),
    )
}

/// `f(a, b) f(b, a)` in any group.
pub fn relation1_in<G: Group>(g: &G, f: &FreeWord, a: &G::Elem, b: &G::Elem) -> G::Elem {
    let ab = f.substitute(g, &[a.clone(), b.clone()]).expect("two images");
    let ba = f.substitute(g, &[b.clone(), a.clone()]).expect("two images");
    g.mul(&ab, &ba)
}

/// `f(c,a) c^m f(b,c) b^m f(a,b) a^m` with `c = (ab)⁻¹`, in any group.
pub fn relation2_in<G: Group>(g: &G, f: &FreeWord, m: i64, a: &G::Elem, b: &G::Elem) -> G::Elem {
    let c = g.inv(&g.mul(a, b));
    let ev = |p: &G::Elem, q: &G::Elem| f.substitute(g, &[p.clone(), q.clone()]).expect("two images");
    let factors = [
        ev(&c, a),
        g.pow(&c, m),
        ev(b, &c),
        g.pow(b, m),
        ev(a, b),
        g.pow(a, m),
    ];
    g.product(&factors)
}

/// Images of the pure braid generators `x_ij`, `1 ≤ i < j ≤ 4`, in some
/// group, indexed by [`pure_index`].
pub type PureImages<E> = [E; 6];

/// Position of `x_ij` in a [`PureImages`] array.
pub fn pure_index(i: usize, j: usize) -> usize {
    match (i, j) {
        (1, 2) => 0,
        (1, 3) => 1,
        (1, 4) => 2,
        (2, 3) => 3,
        (2, 4) => 4,
        (3, 4) => 5,
        _ => panic!("no pure generator x_{i}{j} in B4"),
    }
}

/// The pairs `(i, j)` in [`pure_index`] order.
pub const PURE_PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

pub fn pure_braid_images_b4() -> PureImages<BraidWord> {
    PURE_PAIRS.map(|(i, j)| BraidWord::pure_generator(4, i, j).expect("valid pair"))
}

/// Both sides of relation (3),
/// `f(x₁₂, x₂₃x₂₄) f(x₁₃x₂₃, x₃₄)` and
/// `f(x₂₃, x₃₄) f(x₁₂x₁₃, x₂₄x₃₄) f(x₁₂, x₂₃)`, in any group.
pub fn relation3_in<G: Group>(g: &G, f: &FreeWord, x: &PureImages<G::Elem>) -> (G::Elem, G::Elem) {
    relation3_with(g, x, |a, b| f.substitute(g, &[a.clone(), b.clone()]).expect("two images"))
}

/// Relation (3) with `f` given as any two-variable word map.
pub fn relation3_with<G: Group>(
    g: &G,
    x: &PureImages<G::Elem>,
    f: impl Fn(&G::Elem, &G::Elem) -> G::Elem,
) -> (G::Elem, G::Elem) {
    let p = |i, j| &x[pure_index(i, j)];
    let lhs = g.mul(
        &f(p(1, 2), &g.mul(p(2, 3), p(2, 4))),
        &f(&g.mul(p(1, 3), p(2, 3)), p(3, 4)),
    );
    let rhs = g.product(&[
        f(p(2, 3), p(3, 4)),
        f(&g.mul(p(1, 2), p(1, 3)), &g.mul(p(2, 4), p(3, 4))),
        f(p(1, 2), p(2, 3)),
    ]);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cand(lambda: i64, word: &[i32]) -> GtCandidate {
        GtCandidate::new(lambda, FreeWord::reduce(word, 2).unwrap()).unwrap()
    }

    fn commutator() -> GtCandidate {
        cand(1, &[1, 2, -1, -2])
    }

    #[test]
    fn trivial_candidates_pass() {
        for c in [cand(1, &[]), cand(-1, &[])] {
            let v = c.check();
            assert!(v.all_relations() && v.abelianization, "{c}");
        }
    }

    #[test]
    fn commutator_candidate() {
        let c = commutator();
        assert!(c.check_relation1());
        assert!(!c.check_relation2());
        assert!(c.abelianization_test());
        assert!(!cand(1, &[1]).abelianization_test());
    }

    #[test]
    fn commutator_relation3_regression() {
        assert!(!commutator().check_relation3());
    }

    #[test]
    fn even_lambda_rejected() {
        assert!(matches!(
            GtCandidate::new(2, FreeWord::identity(2)),
            Err(Error::EvenLambda(2))
        ));
        assert!(GtCandidate::parse("lambda=4 f=").is_err());
    }

    #[test]
    fn multiplication_examples() {
        let c = cand(3, &[1, 2, -1, -2, 2]);
        assert_eq!(c.multiply(&GtCandidate::identity()), c);
        assert_eq!(GtCandidate::identity().multiply(&c), c);
        assert_eq!(cand(-1, &[]).multiply(&cand(-1, &[])), GtCandidate::identity());
    }

    #[test]
    fn f2_action_examples() {
        assert_eq!(GtCandidate::identity().act_on_f2(), FreeEndomorphism::identity(2));
        let inv = cand(-1, &[]).act_on_f2();
        assert_eq!(inv.images()[0].letters(), &[-1]);
        assert_eq!(inv.images()[1].letters(), &[-2]);
    }

    #[test]
    fn b3_action_examples() {
        let b = BraidWord::new(3, &[1, 2, -1, 2]).unwrap();
        assert_eq!(GtCandidate::identity().act_on_b3(&b).unwrap(), b);
        let s1 = BraidWord::generator(3, 1).unwrap();
        assert_eq!(cand(-1, &[]).act_on_b3(&s1).unwrap().word(), &[-1]);
        assert!(cand(-1, &[]).b3_action_is_homomorphism());
        assert!(cand(-1, &[]).k3_restriction_agrees());
        let k = cand(-1, &[]).act_on_k3_decomposition();
        assert_eq!(k.sigma1_squared.word(), &[-1, -1]);
        assert!(k.center.equals(&BraidWord::full_twist(3).pow(-1)).unwrap());
    }

    #[test]
    fn parse_round_trip_and_errors() {
        for text in ["lambda=1 f=", "lambda=-3 f=1 2 -1 -2", "lambda=5 f=2"] {
            let c = GtCandidate::parse(text).unwrap();
            assert_eq!(c.to_string(), text);
        }
        match GtCandidate::parse("lambda=1 f=1 x") {
            Err(Error::Parse { line: 1, column: 14, .. }) => {}
            other => panic!("{other:?}"),
        }
        let many = parse_candidates("# pool\nlambda=1 f=\n\nlambda=-1 f=1 -1\n").unwrap();
        assert_eq!(many.len(), 2);
        assert!(many[1].f().is_identity());
    }

    fn arb_candidate() -> impl Strategy<Value = GtCandidate> {
        (-2i64..=2, prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 0..=8))
            .prop_map(|(k, w)| cand(2 * k + 1, &w))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn multiply_is_associative(a in arb_candidate(), b in arb_candidate(), c in arb_candidate()) {
            prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
        }

        #[test]
        fn f2_action_is_a_monoid_map(a in arb_candidate(), b in arb_candidate()) {
            let composite = a.act_on_f2().then(&b.act_on_f2()).unwrap();
            prop_assert_eq!(a.multiply(&b).act_on_f2(), composite);
        }

        #[test]
        fn b3_action_preserves_permutation(c in arb_candidate(), w in prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 0..=8)) {
            let b = BraidWord::new(3, &w).unwrap();
            prop_assert_eq!(c.act_on_b3(&b).unwrap().permutation(), b.permutation());
        }

        #[test]
        fn relations_imply_abelianization(c in arb_candidate()) {
            let v = c.check();
            prop_assert!(!v.all_relations() || v.abelianization);
        }
    }

    #[test]
    fn b3_action_respects_braid_equality_for_valid_candidates() {
        for c in [cand(1, &[]), cand(-1, &[]), cand(3, &[]), cand(-5, &[])] {
            if !c.check_relation2() {
                continue;
            }
            let a = BraidWord::new(3, &[1, 2, 1]).unwrap();
            let b = BraidWord::new(3, &[2, 1, 2]).unwrap();
            assert!(c.act_on_b3(&a).unwrap().equals(&c.act_on_b3(&b).unwrap()).unwrap());
        }
    }

    #[test]
    fn center_goes_to_power_of_center() {
        for c in [cand(1, &[]), cand(-1, &[])] {
            let k = c.act_on_k3_decomposition();
            assert!(k.center.equals(&BraidWord::full_twist(3).pow(c.lambda())).unwrap(), "{c}");
        }
    }

    #[test]
    fn pool_check_keeps_order() {
        let pool = vec![cand(1, &[]), commutator(), cand(-1, &[])];
        let verdicts = check_pool(&pool);
        assert!(verdicts[0].all_relations());
        assert!(!verdicts[1].relation2);
        assert!(verdicts[2].all_relations());
    }
}
