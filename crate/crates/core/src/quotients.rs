//! Finite-quotient certification of GT candidates: the relations are
//! transported through every homomorphism from `F₂` or `B₄` to a catalog
//! of finite groups. A failure in any quotient refutes the relation;
//! passing everywhere certifies it only within the catalog.

use std::fmt;

use rayon::prelude::*;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::freegroup::FreeWord;
use crate::group::{FiniteGroup, Group};
use crate::gt::{relation1_in, relation2_in, relation3_with, GtCandidate, PureImages, PURE_PAIRS};
use crate::magnus::MagnusGroup;

/// All `|G|²` homomorphisms `F₂ → G`, as generator images in
/// lexicographic order.
pub fn enumerate_homs_f2(g: &FiniteGroup) -> Vec<(usize, usize)> {
    g.elements().flat_map(|a| g.elements().map(move |b| (a, b))).collect()
}

/// All homomorphisms `B₄ → G` as images `(s₁, s₂, s₃)` of the Artin
/// generators, in lexicographic order.
pub fn enumerate_homs_b4(g: &FiniteGroup) -> Vec<[usize; 3]> {
    let braid = |a: usize, b: usize| g.product(&[a, b, a]) == g.product(&[b, a, b]);
    let mut out = Vec::new();
    for s1 in g.elements() {
        for s2 in g.elements().filter(|&s2| braid(s1, s2)) {
            for s3 in g.elements() {
                if braid(s2, s3) && g.op(s1, s3) == g.op(s3, s1) {
                    out.push([s1, s2, s3]);
                }
            }
        }
    }
    out
}

/// Evaluates a braid word on four strands under `σ_i ↦ s_i`.
pub fn evaluate_b4(g: &FiniteGroup, hom: &[usize; 3], b: &BraidWord) -> usize {
    b.word().iter().fold(g.identity(), |acc, &l| {
        let s = hom[l.unsigned_abs() as usize - 1];
        g.op(acc, if l > 0 { s } else { g.inverse(s) })
    })
}

/// Images of the pure braid generators `x_ij` under a `B₄` homomorphism.
pub fn pure_images(g: &FiniteGroup, hom: &[usize; 3]) -> PureImages<usize> {
    PURE_PAIRS.map(|(i, j)| evaluate_b4(g, hom, &BraidWord::pure_generator(4, i, j).expect("valid pair")))
}

/// A candidate known only through one finite quotient: `λ` and the word
/// map `(a, b) ↦ f(a, b)` on `G`, stored as a `|G|²` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageCandidate {
    pub group: String,
    pub lambda: i64,
    pub table: Vec<usize>,
}

impl ImageCandidate {
    pub fn from_exact(c: &GtCandidate, g: &FiniteGroup) -> Self {
        let table = enumerate_homs_f2(g)
            .into_iter()
            .map(|(a, b)| c.f().substitute(g, &[a, b]).expect("two images"))
            .collect();
        Self {
            group: g.name().to_string(),
            lambda: c.lambda(),
            table,
        }
    }

    fn check(&self, g: &FiniteGroup) -> Result<()> {
        if self.group != g.name() || self.table.len() != g.order() * g.order() {
            return Err(Error::Invalid(format!(
                "image candidate for {} used with {}",
                self.group,
                g.name()
            )));
        }
        if self.lambda % 2 == 0 {
            return Err(Error::EvenLambda(self.lambda));
        }
        Ok(())
    }

    fn f(&self, g: &FiniteGroup, a: usize, b: usize) -> usize {
        self.table[a * g.order() + b]
    }
}

/// A candidate given exactly or through its image in one quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateData {
    Exact(GtCandidate),
    Image(ImageCandidate),
}

impl CandidateData {
    fn lambda(&self) -> i64 {
        match self {
            CandidateData::Exact(c) => c.lambda(),
            CandidateData::Image(i) => i.lambda,
        }
    }

    fn m(&self) -> i64 {
        (self.lambda() - 1) / 2
    }

    fn word_map<'a>(&'a self, g: &'a FiniteGroup) -> Result<Box<dyn Fn(usize, usize) -> usize + 'a>> {
        Ok(match self {
            CandidateData::Exact(c) => Box::new(move |a, b| c.f().substitute(g, &[a, b]).expect("two images")),
            CandidateData::Image(i) => {
                i.check(g)?;
                Box::new(move |a, b| i.f(g, a, b))
            }
        })
    }
}

/// The outcome of one relation under one homomorphism: `element` is the
/// evaluated relator, trivial exactly when the relation holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationVerdict {
    pub relation: u8,
    pub element: usize,
}

impl RelationVerdict {
    pub fn passed(&self) -> bool {
        self.element == 0
    }
}

/// Relations (1) and (2) under `x ↦ a`, `y ↦ b`.
pub fn relations12_in_quotient(c: &CandidateData, g: &FiniteGroup, hom: (usize, usize)) -> Result<[RelationVerdict; 2]> {
    let f = c.word_map(g)?;
    let (a, b) = hom;
    let r1 = g.op(f(a, b), f(b, a));
    let z = g.inverse(g.op(a, b));
    // m only matters modulo the orders of a, b and z
    let m = c.m();
    let r2 = g.product(&[f(z, a), g.pow(&z, m), f(b, z), g.pow(&b, m), f(a, b), g.pow(&a, m)]);
    Ok([
        RelationVerdict { relation: 1, element: r1 },
        RelationVerdict { relation: 2, element: r2 },
    ])
}

/// Relation (3) under a homomorphism `B₄ → G`; the relator is `lhs · rhs⁻¹`.
pub fn relation3_in_quotient(c: &CandidateData, g: &FiniteGroup, hom: &[usize; 3]) -> Result<RelationVerdict> {
    let f = c.word_map(g)?;
    let x = pure_images(g, hom);
    let (lhs, rhs) = relation3_with(g, &x, |a, b| f(*a, *b));
    Ok(RelationVerdict {
        relation: 3,
        element: g.op(lhs, g.inverse(rhs)),
    })
}

/// One line of a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateLine {
    pub group: String,
    pub hom_index: usize,
    pub hom: Vec<usize>,
    pub verdict: RelationVerdict,
}

impl fmt::Display for CertificateLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<String> = self.hom.iter().map(usize::to_string).collect();
        write!(
            f,
            "{} hom={} images=({}) relation={} {}",
            self.group,
            self.hom_index,
            images.join(","),
            self.verdict.relation,
            if self.verdict.passed() {
                "pass".to_string()
            } else {
                format!("FAIL element={}", self.verdict.element)
            }
        )
    }
}

/// Per-quotient verdicts for relations (1)–(3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientCertificate {
    pub candidate: String,
    pub lines: Vec<CertificateLine>,
}

impl QuotientCertificate {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.verdict.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CertificateLine> {
        self.lines.iter().filter(|l| !l.verdict.passed())
    }

    /// Whether `relation` passed under every homomorphism.
    pub fn relation_passed(&self, relation: u8) -> bool {
        self.lines
            .iter()
            .filter(|l| l.verdict.relation == relation)
            .all(|l| l.verdict.passed())
    }

    /// First group (in catalog order) with a failing homomorphism for
    /// `relation`.
    pub fn first_failing_group(&self, relation: u8) -> Option<&str> {
        self.failures()
            .find(|l| l.verdict.relation == relation)
            .map(|l| l.group.as_str())
    }

    pub fn summary(&self) -> String {
        let counts: Vec<String> = (1..=3)
            .map(|r| {
                let total = self.lines.iter().filter(|l| l.verdict.relation == r).count();
                let failed = self.failures().filter(|l| l.verdict.relation == r).count();
                format!("relation {r}: {}/{total} pass", total - failed)
            })
            .collect();
        let status = if self.passed() {
            "pass within catalog".to_string()
        } else {
            format!("fail ({} witnesses)", self.failures().count())
        };
        format!("{}; {}", counts.join(", "), status)
    }

    /// Re-evaluates every failing line and confirms the stored element.
    pub fn replay(&self, c: &CandidateData, groups: &[FiniteGroup]) -> Result<bool> {
        for line in self.failures() {
            let g = groups
                .iter()
                .find(|g| g.name() == line.group)
                .ok_or_else(|| Error::Invalid(format!("group {} not in catalog", line.group)))?;
            let element = match line.verdict.relation {
                3 => relation3_in_quotient(c, g, &[line.hom[0], line.hom[1], line.hom[2]])?.element,
                r => relations12_in_quotient(c, g, (line.hom[0], line.hom[1]))?[r as usize - 1].element,
            };
            if element != line.verdict.element || element == g.identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for QuotientCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "candidate: {}", self.candidate)?;
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        writeln!(f, "summary: {}", self.summary())
    }
}

fn certify_group(c: &CandidateData, g: &FiniteGroup) -> Result<Vec<CertificateLine>> {
    let mut lines = Vec::new();
    let homs = enumerate_homs_f2(g);
    let mut per_relation: [Vec<CertificateLine>; 3] = Default::default();
    for (k, &(a, b)) in homs.iter().enumerate() {
        for v in relations12_in_quotient(c, g, (a, b))? {
            per_relation[v.relation as usize - 1].push(CertificateLine {
                group: g.name().to_string(),
                hom_index: k,
                hom: vec![a, b],
                verdict: v,
            });
        }
    }
    for (k, hom) in enumerate_homs_b4(g).iter().enumerate() {
        per_relation[2].push(CertificateLine {
            group: g.name().to_string(),
            hom_index: k,
            hom: hom.to_vec(),
            verdict: relation3_in_quotient(c, g, hom)?,
        });
    }
    for r in per_relation {
        lines.extend(r);
    }
    Ok(lines)
}

/// Checks relations (1)–(3) under every homomorphism to every group of the
/// catalog. Lines are ordered by catalog position, relation, then
/// homomorphism images; groups are processed in parallel.
pub fn certify(c: &CandidateData, groups: &[FiniteGroup]) -> Result<QuotientCertificate> {
    let per_group: Vec<Result<Vec<CertificateLine>>> = groups.par_iter().map(|g| certify_group(c, g)).collect();
    let mut lines = Vec::new();
    for group_lines in per_group {
        lines.extend(group_lines?);
    }
    let candidate = match c {
        CandidateData::Exact(e) => e.to_string(),
        CandidateData::Image(i) => format!("lambda={} image in {}", i.lambda, i.group),
    };
    Ok(QuotientCertificate { candidate, lines })
}

/// Relations (1) and (2) in the truncated Magnus group modulo `ℓ^k` in
/// degree `≤ d`, under `x ↦ 1 + X`, `y ↦ 1 + Y`.
pub fn magnus_relations12(c: &GtCandidate, ell: u64, k: u32, degree: usize) -> Result<[bool; 2]> {
    let g = MagnusGroup::<u64>::prime_power(ell, k, degree)?;
    let (x, y) = (g.generator(1)?, g.generator(2)?);
    let r1 = relation1_in(&g, c.f(), &x, &y);
    let r2 = relation2_in(&g, c.f(), c.m(), &x, &y);
    Ok([g.is_identity(&r1), g.is_identity(&r2)])
}

/// The candidate `(λ, w)` for a word given as raw letters.
pub fn candidate(lambda: i64, letters: &[i32]) -> Result<GtCandidate> {
    GtCandidate::new(lambda, FreeWord::reduce(letters, 2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Catalog;

    #[test]
    fn hom_counts() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(enumerate_homs_f2(&s3).len(), 36);
        assert_eq!(enumerate_homs_f2(&FiniteGroup::trivial()).len(), 1);
        let homs = enumerate_homs_b4(&s3);
        assert!(homs.contains(&[0, 0, 0]));
        let mut brute = 0;
        for s1 in 0..6 {
            for s2 in 0..6 {
                for s3_ in 0..6 {
                    let w = |v: &[usize]| v.iter().fold(0, |acc, &e| s3.op(acc, e));
                    if w(&[s1, s2, s1]) == w(&[s2, s1, s2])
                        && w(&[s2, s3_, s2]) == w(&[s3_, s2, s3_])
                        && w(&[s1, s3_]) == w(&[s3_, s1])
                    {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(homs.len(), brute);
    }

    #[test]
    fn commutator_vanishes_iff_abelian() {
        let comm = FreeWord::reduce(&[1, 2, -1, -2], 2).unwrap();
        for g in Catalog::Default.groups() {
            let vanish = enumerate_homs_f2(&g)
                .into_iter()
                .all(|(a, b)| comm.substitute(&g, &[a, b]).unwrap() == 0);
            assert_eq!(vanish, g.is_abelian(), "{}", g.name());
        }
    }

    #[test]
    fn pure_images_are_multiplicative() {
        let s4 = FiniteGroup::symmetric(4);
        for hom in enumerate_homs_b4(&s4).into_iter().step_by(7) {
            let x = pure_images(&s4, &hom);
            let b = BraidWord::pure_generator(4, 1, 2)
                .unwrap()
                .multiply(&BraidWord::pure_generator(4, 3, 4).unwrap())
                .unwrap();
            assert_eq!(evaluate_b4(&s4, &hom, &b), s4.op(x[0], x[5]));
        }
    }

    #[test]
    fn trivial_candidates_certify() {
        let groups = Catalog::Small.groups();
        for c in [candidate(1, &[]).unwrap(), candidate(-1, &[]).unwrap()] {
            let cert = certify(&CandidateData::Exact(c), &groups).unwrap();
            assert!(cert.passed(), "{}", cert.summary());
        }
    }

    #[test]
    fn x_fails_in_c2() {
        let groups = Catalog::Small.groups();
        let c = CandidateData::Exact(candidate(1, &[1]).unwrap());
        let cert = certify(&c, &groups).unwrap();
        assert_eq!(cert.first_failing_group(1), Some("C2"));
        assert!(cert.replay(&c, &groups).unwrap());
    }

    #[test]
    fn image_candidates_agree_with_exact() {
        let c = candidate(3, &[1, 2, -1, -2]).unwrap();
        for g in Catalog::Small.groups() {
            let exact = CandidateData::Exact(c.clone());
            let image = CandidateData::Image(ImageCandidate::from_exact(&c, &g));
            let a = certify(&exact, std::slice::from_ref(&g)).unwrap();
            let b = certify(&image, std::slice::from_ref(&g)).unwrap();
            assert_eq!(a.lines, b.lines);
        }
        let wrong = CandidateData::Image(ImageCandidate::from_exact(&c, &FiniteGroup::cyclic(2)));
        assert!(relation3_in_quotient(&wrong, &FiniteGroup::cyclic(3), &[0, 0, 0]).is_err());
    }

    #[test]
    fn magnus_detects_commutator_failure() {
        let trivial = candidate(1, &[]).unwrap();
        assert_eq!(magnus_relations12(&trivial, 2, 3, 4).unwrap(), [true, true]);
        let comm = candidate(1, &[1, 2, -1, -2]).unwrap();
        let [r1, r2] = magnus_relations12(&comm, 3, 2, 3).unwrap();
        assert!(r1);
        assert!(!r2);
        let x = candidate(1, &[1]).unwrap();
        assert!(!magnus_relations12(&x, 2, 1, 1).unwrap()[0]);
    }
}
