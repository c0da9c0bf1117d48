//! Cohomology of finite groupoids: `H⁰` with coefficients in a finite set,
//! cocycles, coboundary action and `H¹` with coefficients in a finite group,
//! the coequalizer description of `H¹`, and the cohomological test for
//! weak equivalences.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::group::FiniteGroup;
use crate::groupoid::{arrow_groupoid, component_functors, for_each_tuple, FiniteGroupoid, GroupoidFunctor};

/// A function `Mor(A) → G` with `u(f ∘ g) = u(f) u(g)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cocycle {
    pub values: Vec<usize>,
}

/// A function `Ob(A) → G`, acting on cocycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coboundary {
    pub values: Vec<usize>,
}

/// `H⁰(A, S)` by definition: functions `Ob(A) → S` constant on components.
pub fn h0(a: &FiniteGroupoid, s: usize) -> Vec<Vec<usize>> {
    let n = a.object_count();
    let mut out = Vec::new();
    for_each_tuple(s, n, |f| {
        let constant = (0..n).all(|x| (0..n).all(|y| a.hom(x, y).is_empty() || f[x] == f[y]));
        if constant {
            out.push(f.to_vec());
        }
    });
    out
}

/// `H⁰(A, S)` as functions on `pi0(A)`, spread back to objects.
pub fn h0_via_pi0(a: &FiniteGroupoid, s: usize) -> Vec<Vec<usize>> {
    let labels = a.component_labels();
    let k = a.pi0().len();
    let mut out = Vec::new();
    for_each_tuple(s, k, |f| out.push(labels.iter().map(|&c| f[c]).collect()));
    out
}

pub fn is_cocycle(a: &FiniteGroupoid, g: &FiniteGroup, u: &Cocycle) -> bool {
    u.values.len() == a.morphism_count()
        && u.values.iter().all(|&v| v < g.order())
        && (0..a.morphism_count()).all(|f| {
            (0..a.object_count()).all(|z| {
                a.hom(a.target(f), z)
                    .iter()
                    .all(|&h| u.values[a.comp(h, f)] == g.op(u.values[h], u.values[f]))
            })
        })
}

/// `Z¹(A, G)`, the functors `A → *//G`, enumerated componentwise from a
/// spanning tree and a vertex-group homomorphism.
pub fn z1(a: &FiniteGroupoid, g: &FiniteGroup) -> Vec<Cocycle> {
    let target = FiniteGroupoid::one_object(g);
    let per: Vec<Vec<Vec<usize>>> = a
        .pi0()
        .iter()
        .map(|comp| {
            component_functors(a, &target, comp)
                .into_iter()
                .map(|(_, m)| m)
                .collect()
        })
        .collect();
    combine(a.morphism_count(), &per)
        .into_iter()
        .map(|values| Cocycle { values })
        .collect()
}

/// Merges one partial assignment per component into total assignments.
fn combine(len: usize, per: &[Vec<Vec<usize>>]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![usize::MAX; len]];
    for options in per {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for base in &out {
            for opt in options {
                let mut v = base.clone();
                for (slot, &x) in v.iter_mut().zip(opt) {
                    if x != usize::MAX {
                        *slot = x;
                    }
                }
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// `(u.φ)(f) = φ(t f)⁻¹ u(f) φ(s f)`.
pub fn b1_act(a: &FiniteGroupoid, g: &FiniteGroup, u: &Cocycle, phi: &Coboundary) -> Cocycle {
    Cocycle {
        values: (0..a.morphism_count())
            .map(|f| {
                let left = g.inverse(phi.values[a.target(f)]);
                g.op(g.op(left, u.values[f]), phi.values[a.source(f)])
            })
            .collect(),
    }
}

/// A partition of `Z¹(A, G)` into classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClasses {
    pub cocycles: Vec<Cocycle>,
    /// Class label per cocycle, numbered by first appearance.
    pub class_of: Vec<usize>,
    pub class_count: usize,
}

impl CohomologyClasses {
    fn from_union_find(cocycles: Vec<Cocycle>, uf: &mut UnionFind) -> Self {
        let mut labels = HashMap::new();
        let class_of: Vec<usize> = (0..cocycles.len())
            .map(|i| {
                let root = uf.find(i);
                let next = labels.len();
                *labels.entry(root).or_insert(next)
            })
            .collect();
        Self {
            cocycles,
            class_count: labels.len(),
            class_of,
        }
    }

    /// One representative per class.
    pub fn representatives(&self) -> Vec<&Cocycle> {
        let mut seen = vec![false; self.class_count];
        self.cocycles
            .iter()
            .zip(&self.class_of)
            .filter(|(_, &c)| !std::mem::replace(&mut seen[c], true))
            .map(|(u, _)| u)
            .collect()
    }

    /// The classes as sets of cocycle values, independent of labels.
    pub fn partition(&self) -> BTreeSet<BTreeSet<Vec<usize>>> {
        let mut classes = vec![BTreeSet::new(); self.class_count];
        for (u, &k) in self.cocycles.iter().zip(&self.class_of) {
            classes[k].insert(u.values.clone());
        }
        classes.into_iter().collect()
    }

    pub fn index_of(&self) -> HashMap<&Cocycle, usize> {
        self.cocycles.iter().enumerate().map(|(i, u)| (u, i)).collect()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// `H¹(A, G) = Z¹(A, G) / B¹(A, G)`: orbits of the coboundary action,
/// generated by the coboundaries concentrated at one object with value a
/// generator of `G`.
pub fn h1(a: &FiniteGroupoid, g: &FiniteGroup) -> CohomologyClasses {
    let cocycles = z1(a, g);
    let index: HashMap<Cocycle, usize> = cocycles.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
    let mut uf = UnionFind::new(cocycles.len());
    let gens = g.generators();
    for (i, u) in cocycles.iter().enumerate() {
        for x in 0..a.object_count() {
            for &s in &gens {
                let mut phi = Coboundary {
                    values: vec![0; a.object_count()],
                };
                phi.values[x] = s;
                let v = b1_act(a, g, u, &phi);
                uf.union(i, index[&v]);
            }
        }
    }
    CohomologyClasses::from_union_find(cocycles, &mut uf)
}

type ComponentClasses = (Vec<usize>, HashMap<Vec<usize>, usize>);

/// `H¹` as the coequalizer of `ev0∘-, ev1∘-: fG(A, (*//G)^{I[1]}) ⇉ Z¹(A, G)`.
/// Functors out of a disjoint union are tuples of functors out of the
/// components, so the relation is generated componentwise.
pub fn h1_via_coequalizer(a: &FiniteGroupoid, g: &FiniteGroup) -> CohomologyClasses {
    let star = Arc::new(FiniteGroupoid::one_object(g));
    let arrow = arrow_groupoid(&star);
    let cocycles = z1(a, g);
    // per component: its objects and the class of each of its cocycles
    let mut local: Vec<ComponentClasses> = Vec::new();
    for comp in a.pi0() {
        let (sub, embed) = a.full_subgroupoid(&comp).expect("full subgroupoid");
        let sub_cocycles = z1(&sub, g);
        let index: HashMap<Vec<usize>, usize> = sub_cocycles
            .iter()
            .enumerate()
            .map(|(i, u)| (u.values.clone(), i))
            .collect();
        let mut uf = UnionFind::new(sub_cocycles.len());
        let everything: Vec<usize> = (0..sub.object_count()).collect();
        for (_, h) in component_functors(&sub, &arrow.groupoid, &everything) {
            let u0: Vec<usize> = h.iter().map(|&m| arrow.ev0.on_morphism(m)).collect();
            let u1: Vec<usize> = h.iter().map(|&m| arrow.ev1.on_morphism(m)).collect();
            uf.union(index[&u0], index[&u1]);
        }
        let classes = CohomologyClasses::from_union_find(sub_cocycles, &mut uf);
        let by_values = classes
            .cocycles
            .iter()
            .zip(&classes.class_of)
            .map(|(u, &c)| (u.values.clone(), c))
            .collect();
        local.push((embed, by_values));
    }
    let mut labels: HashMap<Vec<usize>, usize> = HashMap::new();
    let class_of = cocycles
        .iter()
        .map(|u| {
            let key: Vec<usize> = local
                .iter()
                .map(|(embed, by_values)| {
                    let restricted: Vec<usize> = embed.iter().map(|&f| u.values[f]).collect();
                    by_values[&restricted]
                })
                .collect();
            let next = labels.len();
            *labels.entry(key).or_insert(next)
        })
        .collect();
    CohomologyClasses {
        cocycles,
        class_count: labels.len(),
        class_of,
    }
}

/// The coequalizer computed from every functor `A → (*//G)^{I[1]}` at once,
/// without splitting into components. Exponential in the number of
/// components; used as an oracle on small inputs.
pub fn h1_via_coequalizer_global(a: &Arc<FiniteGroupoid>, g: &FiniteGroup) -> CohomologyClasses {
    let star = Arc::new(FiniteGroupoid::one_object(g));
    let arrow = arrow_groupoid(&star);
    let cocycles = z1(a, g);
    let index: HashMap<Cocycle, usize> = cocycles.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
    let mut uf = UnionFind::new(cocycles.len());
    for h in crate::groupoid::functors(a, &arrow.groupoid) {
        let u0 = h.then(&arrow.ev0).expect("composable");
        let u1 = h.then(&arrow.ev1).expect("composable");
        let i = index[&Cocycle {
            values: u0.morphism_map().to_vec(),
        }];
        let j = index[&Cocycle {
            values: u1.morphism_map().to_vec(),
        }];
        uf.union(i, j);
    }
    CohomologyClasses::from_union_find(cocycles, &mut uf)
}

/// Pulls a cocycle on `B` back along `F: A → B`.
pub fn pullback_cocycle(f: &GroupoidFunctor, u: &Cocycle) -> Cocycle {
    Cocycle {
        values: f.morphism_map().iter().map(|&m| u.values[m]).collect(),
    }
}

/// Pulls a function on `Ob(B)` back along `F`.
pub fn pullback_h0(f: &GroupoidFunctor, s: &[usize]) -> Vec<usize> {
    f.object_map().iter().map(|&y| s[y]).collect()
}

/// The map `H¹(B, G) → H¹(A, G)` on class labels.
pub fn pullback_h1(f: &GroupoidFunctor, on_b: &CohomologyClasses, on_a: &CohomologyClasses) -> Vec<usize> {
    let index = on_a.index_of();
    on_b.representatives()
        .into_iter()
        .map(|u| on_a.class_of[index[&pullback_cocycle(f, u)]])
        .collect()
}

fn is_bijection(map: &[usize], codomain: usize) -> bool {
    let mut hit = vec![false; codomain];
    map.len() == codomain && map.iter().all(|&c| !std::mem::replace(&mut hit[c], true))
}

/// Which coefficient detected a failure of [`cohomological_we`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CohomologyWitness {
    H0 { set_size: usize },
    H1 { group: String },
}

impl fmt::Display for CohomologyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyWitness::H0 { set_size } => write!(f, "H0 with a set of size {set_size}"),
            CohomologyWitness::H1 { group } => write!(f, "H1 with coefficients in {group}"),
        }
    }
}

/// Checks that `F*` is bijective on `H⁰(-, S)` for `|S| ≤ set_bound` and on
/// `H¹(-, G)` for every `G` in `groups`; returns the first failing
/// coefficient.
pub fn cohomological_we_witness(
    f: &GroupoidFunctor,
    set_bound: usize,
    groups: &[FiniteGroup],
) -> Option<CohomologyWitness> {
    let (a, b) = (f.source(), f.target());
    for s in 1..=set_bound {
        let on_a = h0(a, s);
        let on_b = h0(b, s);
        let index: HashMap<&Vec<usize>, usize> = on_a.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let map: Vec<usize> = on_b.iter().map(|x| index[&pullback_h0(f, x)]).collect();
        if !is_bijection(&map, on_a.len()) {
            return Some(CohomologyWitness::H0 { set_size: s });
        }
    }
    for g in groups {
        let on_a = h1(a, g);
        let on_b = h1(b, g);
        if !is_bijection(&pullback_h1(f, &on_b, &on_a), on_a.class_count) {
            return Some(CohomologyWitness::H1 {
                group: g.name().to_string(),
            });
        }
    }
    None
}

pub fn cohomological_we(f: &GroupoidFunctor, set_bound: usize, groups: &[FiniteGroup]) -> bool {
    cohomological_we_witness(f, set_bound, groups).is_none()
}

/// One row of the cohomology report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyRow {
    pub coefficients: String,
    pub h0: usize,
    pub z1: usize,
    pub b1_orbits: usize,
    pub h1: usize,
    /// Whether the orbit and coequalizer partitions of `Z¹` coincide.
    pub partitions_agree: bool,
}

/// Per-coefficient table of `|H⁰|` (coefficients the underlying set of
/// `G`), `|Z¹|`, the number of coboundary orbits and `|H¹|` computed as a
/// coequalizer.
pub fn report(a: &FiniteGroupoid, groups: &[FiniteGroup]) -> Vec<CohomologyRow> {
    groups
        .iter()
        .map(|g| {
            let orbits = h1(a, g);
            let coeq = h1_via_coequalizer(a, g);
            CohomologyRow {
                coefficients: g.name().to_string(),
                h0: h0(a, g.order()).len(),
                z1: orbits.cocycles.len(),
                b1_orbits: orbits.class_count,
                h1: coeq.class_count,
                partitions_agree: orbits.partition() == coeq.partition(),
            }
        })
        .collect()
}
