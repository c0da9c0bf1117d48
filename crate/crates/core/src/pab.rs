//! Truncated operads in groupoids whose hom-sets are infinite and handled
//! symbolically through braid words: colored braids `CoB`, parenthesized
//! braids `PaB = z*CoB` and parenthesized unital braids `PaUB = u*PaB`,
//! together with operad maps, homotopies between them, and the
//! constructions relating maps out of `PaB` and `PaUB`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use crate::braid::{BraidWord, Permutation};
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidFunctor};
use crate::magma::{map_u, map_z, AssocOperad, BasedMagmaOperad, Monomial, UnitalMagmaOperad};
use crate::operad::{equivariance_permutation, AuditReport, SetOperad, Tally};

/// Default truncation arity.
pub const DEFAULT_MAX_ARITY: usize = 4;

/// Length of the random braid word behind a sampled morphism, before the
/// correcting permutation braid.
const SAMPLE_WORD_LEN: usize = 5;

/// An operad in groupoids truncated at arity `max_arity`, with hom-sets
/// given by an oracle rather than a table.
pub trait GroupoidOperad: Send + Sync {
    type Obj: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync;
    type Mor: Clone + fmt::Debug + fmt::Display + Send + Sync;

    fn name(&self) -> String;
    fn max_arity(&self) -> usize;
    fn arity(&self, x: &Self::Obj) -> usize;
    /// The objects of level `n` (a truncation when the level is infinite).
    fn objects(&self, n: usize) -> &[Self::Obj];
    fn source(&self, a: &Self::Mor) -> Self::Obj;
    fn target(&self, a: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `after ∘ before`.
    fn compose(&self, after: &Self::Mor, before: &Self::Mor) -> Result<Self::Mor>;
    fn inverse(&self, a: &Self::Mor) -> Self::Mor;
    fn morphisms_equal(&self, a: &Self::Mor, b: &Self::Mor) -> bool;
    fn unit(&self) -> Self::Obj;
    fn compose_objects(&self, x: &Self::Obj, i: usize, y: &Self::Obj) -> Result<Self::Obj>;
    fn compose_morphisms(&self, a: &Self::Mor, i: usize, b: &Self::Mor) -> Result<Self::Mor>;
    fn act_object(&self, x: &Self::Obj, sigma: &Permutation) -> Result<Self::Obj>;
    fn act_morphism(&self, a: &Self::Mor, sigma: &Permutation) -> Result<Self::Mor>;
    /// A random morphism `x → y`, if the hom-set is non-empty.
    fn sample_morphism(&self, rng: &mut dyn RngCore, x: &Self::Obj, y: &Self::Obj) -> Option<Self::Mor>;
    /// Whether the only automorphism of `x` is its identity.
    fn has_trivial_automorphisms(&self, x: &Self::Obj) -> bool;

    /// Level `n` is a point: one object with trivial automorphism group.
    fn is_point_level(&self, n: usize) -> bool {
        let objs = self.objects(n);
        objs.len() == 1 && self.has_trivial_automorphisms(&objs[0])
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        if n > self.max_arity() {
            return Err(Error::Invalid(format!(
                "arity {n} exceeds the truncation {} of {}",
                self.max_arity(),
                self.name()
            )));
        }
        Ok(())
    }
}

/// Morphisms carrying an underlying braid.
pub trait HasBraid {
    fn braid(&self) -> &BraidWord;
}

/// A morphism of `CoB(n)`: a braid from `source` to `target`, both
/// orderings of `1..=n`, whose permutation is `source⁻¹ ∘ target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CobMorphism {
    pub source: Permutation,
    pub target: Permutation,
    pub braid: BraidWord,
}

impl fmt::Display for CobMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} : {}", self.source, self.target, self.braid)
    }
}

impl HasBraid for CobMorphism {
    fn braid(&self) -> &BraidWord {
        &self.braid
    }
}

/// Colored braids: objects of level `n` are the orderings of `1..=n`,
/// composition is concatenation and `∘_i` inserts a braid into the strand
/// carrying the letter `i`.
#[derive(Debug, Clone)]
pub struct Cob {
    max_arity: usize,
    levels: Vec<Vec<Permutation>>,
}

impl Cob {
    pub fn new(max_arity: usize) -> Self {
        Self {
            max_arity,
            levels: (0..=max_arity).map(Permutation::all).collect(),
        }
    }

    /// Builds a morphism after checking its permutation.
    pub fn morphism(&self, source: Permutation, target: Permutation, braid: BraidWord) -> Result<CobMorphism> {
        let n = source.size();
        if target.size() != n || braid.strands() != n {
            return Err(Error::StrandMismatch {
                left: n,
                right: braid.strands(),
            });
        }
        if braid.permutation() != source.inverse().compose(&target)? {
            return Err(Error::Invalid(format!(
                "{braid} does not connect {source} to {target}"
            )));
        }
        Ok(CobMorphism { source, target, braid })
    }
}

pub fn build_cob(max_arity: usize) -> Cob {
    Cob::new(max_arity)
}

impl GroupoidOperad for Cob {
    type Obj = Permutation;
    type Mor = CobMorphism;

    fn name(&self) -> String {
        "CoB".into()
    }

    fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn arity(&self, x: &Permutation) -> usize {
        x.size()
    }

    fn objects(&self, n: usize) -> &[Permutation] {
        self.levels.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    fn source(&self, a: &CobMorphism) -> Permutation {
        a.source.clone()
    }

    fn target(&self, a: &CobMorphism) -> Permutation {
        a.target.clone()
    }

    fn identity(&self, x: &Permutation) -> CobMorphism {
        CobMorphism {
            source: x.clone(),
            target: x.clone(),
            braid: BraidWord::identity(x.size()),
        }
    }

    fn compose(&self, after: &CobMorphism, before: &CobMorphism) -> Result<CobMorphism> {
        if before.target != after.source {
            return Err(Error::Invalid(format!("{after} . {before} is not composable")));
        }
        Ok(CobMorphism {
            source: before.source.clone(),
            target: after.target.clone(),
            braid: before.braid.multiply(&after.braid)?,
        })
    }

    fn inverse(&self, a: &CobMorphism) -> CobMorphism {
        CobMorphism {
            source: a.target.clone(),
            target: a.source.clone(),
            braid: a.braid.inverse(),
        }
    }

    fn morphisms_equal(&self, a: &CobMorphism, b: &CobMorphism) -> bool {
        a.source == b.source && a.target == b.target && a.braid.equals(&b.braid).unwrap_or(false)
    }

    fn unit(&self) -> Permutation {
        Permutation::identity(1)
    }

    fn compose_objects(&self, x: &Permutation, i: usize, y: &Permutation) -> Result<Permutation> {
        self.check_arity(x.size() + y.size() - 1)?;
        AssocOperad.compose(x, i, y)
    }

    fn compose_morphisms(&self, a: &CobMorphism, i: usize, b: &CobMorphism) -> Result<CobMorphism> {
        let source = self.compose_objects(&a.source, i, &b.source)?;
        let target = self.compose_objects(&a.target, i, &b.target)?;
        // the strand carrying letter i starts at position source⁻¹(i)
        let position = a.source.inverse().apply(i);
        Ok(CobMorphism {
            source,
            target,
            braid: a.braid.insert(position, &b.braid)?,
        })
    }

    fn act_object(&self, x: &Permutation, sigma: &Permutation) -> Result<Permutation> {
        AssocOperad.act(x, sigma)
    }

    fn act_morphism(&self, a: &CobMorphism, sigma: &Permutation) -> Result<CobMorphism> {
        Ok(CobMorphism {
            source: AssocOperad.act(&a.source, sigma)?,
            target: AssocOperad.act(&a.target, sigma)?,
            braid: a.braid.clone(),
        })
    }

    fn sample_morphism(&self, rng: &mut dyn RngCore, x: &Permutation, y: &Permutation) -> Option<CobMorphism> {
        let n = x.size();
        let len = rng.gen_range(0..=SAMPLE_WORD_LEN);
        let w = BraidWord::random(rng, n, len);
        let needed = w.permutation().inverse().compose(&x.inverse().compose(y).ok()?).ok()?;
        let braid = w.multiply(&BraidWord::from_permutation(&needed)).ok()?;
        Some(CobMorphism {
            source: x.clone(),
            target: y.clone(),
            braid,
        })
    }

    fn has_trivial_automorphisms(&self, x: &Permutation) -> bool {
        x.size() <= 1
    }
}

/// A morphism of a pulled-back operad: a morphism of the underlying operad
/// between the images of `source` and `target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PullbackMorphism<E, M> {
    pub source: E,
    pub target: E,
    pub inner: M,
}

impl<E: fmt::Display, M: HasBraid> fmt::Display for PullbackMorphism<E, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} : {}", self.source, self.target, self.inner.braid())
    }
}

impl<E, M: HasBraid> HasBraid for PullbackMorphism<E, M> {
    fn braid(&self) -> &BraidWord {
        self.inner.braid()
    }
}

/// `f*P`: objects from a set operad `Q`, morphisms `p → q` the morphisms
/// `f(p) → f(q)` of `P`.
pub struct Pullback<Q: SetOperad, P: GroupoidOperad> {
    name: String,
    objects_operad: Q,
    inner: Arc<P>,
    map: fn(&Q::Elem) -> Result<P::Obj>,
    levels: Vec<Vec<Q::Elem>>,
}

impl<Q: SetOperad, P: GroupoidOperad> fmt::Debug for Pullback<Q, P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl<Q, P> Pullback<Q, P>
where
    Q: SetOperad,
    P: GroupoidOperad,
{
    pub fn new(name: impl Into<String>, objects_operad: Q, inner: Arc<P>, map: fn(&Q::Elem) -> Result<P::Obj>) -> Self {
        let levels = (0..=inner.max_arity()).map(|n| objects_operad.elements(n)).collect();
        Self {
            name: name.into(),
            objects_operad,
            inner,
            map,
            levels,
        }
    }

    pub fn inner(&self) -> &Arc<P> {
        &self.inner
    }

    pub fn objects_operad(&self) -> &Q {
        &self.objects_operad
    }

    pub fn map_object(&self, x: &Q::Elem) -> Result<P::Obj> {
        (self.map)(x)
    }

    /// Wraps a morphism of `P` between the images of `source` and `target`.
    pub fn lift(&self, source: Q::Elem, target: Q::Elem, inner: P::Mor) -> Result<PullbackMorphism<Q::Elem, P::Mor>> {
        if (self.map)(&source)? != self.inner.source(&inner) || (self.map)(&target)? != self.inner.target(&inner) {
            return Err(Error::Invalid(format!("{inner} does not lie over {source} -> {target}")));
        }
        Ok(PullbackMorphism { source, target, inner })
    }
}

impl<Q, P> GroupoidOperad for Pullback<Q, P>
where
    Q: SetOperad + Send + Sync,
    Q::Elem: Eq + Hash + Send + Sync,
    P: GroupoidOperad,
    P::Mor: HasBraid,
{
    type Obj = Q::Elem;
    type Mor = PullbackMorphism<Q::Elem, P::Mor>;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn max_arity(&self) -> usize {
        self.inner.max_arity()
    }

    fn arity(&self, x: &Q::Elem) -> usize {
        self.objects_operad.arity(x)
    }

    fn objects(&self, n: usize) -> &[Q::Elem] {
        self.levels.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    fn source(&self, a: &Self::Mor) -> Q::Elem {
        a.source.clone()
    }

    fn target(&self, a: &Self::Mor) -> Q::Elem {
        a.target.clone()
    }

    fn identity(&self, x: &Q::Elem) -> Self::Mor {
        let image = (self.map)(x).expect("object in the domain of the pullback map");
        PullbackMorphism {
            source: x.clone(),
            target: x.clone(),
            inner: self.inner.identity(&image),
        }
    }

    fn compose(&self, after: &Self::Mor, before: &Self::Mor) -> Result<Self::Mor> {
        if before.target != after.source {
            return Err(Error::Invalid(format!("{after} . {before} is not composable")));
        }
        Ok(PullbackMorphism {
            source: before.source.clone(),
            target: after.target.clone(),
            inner: self.inner.compose(&after.inner, &before.inner)?,
        })
    }

    fn inverse(&self, a: &Self::Mor) -> Self::Mor {
        PullbackMorphism {
            source: a.target.clone(),
            target: a.source.clone(),
            inner: self.inner.inverse(&a.inner),
        }
    }

    fn morphisms_equal(&self, a: &Self::Mor, b: &Self::Mor) -> bool {
        a.source == b.source && a.target == b.target && self.inner.morphisms_equal(&a.inner, &b.inner)
    }

    fn unit(&self) -> Q::Elem {
        self.objects_operad.unit()
    }

    fn compose_objects(&self, x: &Q::Elem, i: usize, y: &Q::Elem) -> Result<Q::Elem> {
        self.check_arity(self.arity(x) + self.arity(y) - 1)?;
        self.objects_operad.compose(x, i, y)
    }

    fn compose_morphisms(&self, a: &Self::Mor, i: usize, b: &Self::Mor) -> Result<Self::Mor> {
        Ok(PullbackMorphism {
            source: self.compose_objects(&a.source, i, &b.source)?,
            target: self.compose_objects(&a.target, i, &b.target)?,
            inner: self.inner.compose_morphisms(&a.inner, i, &b.inner)?,
        })
    }

    fn act_object(&self, x: &Q::Elem, sigma: &Permutation) -> Result<Q::Elem> {
        self.objects_operad.act(x, sigma)
    }

    fn act_morphism(&self, a: &Self::Mor, sigma: &Permutation) -> Result<Self::Mor> {
        Ok(PullbackMorphism {
            source: self.objects_operad.act(&a.source, sigma)?,
            target: self.objects_operad.act(&a.target, sigma)?,
            inner: self.inner.act_morphism(&a.inner, sigma)?,
        })
    }

    fn sample_morphism(&self, rng: &mut dyn RngCore, x: &Q::Elem, y: &Q::Elem) -> Option<Self::Mor> {
        let (fx, fy) = ((self.map)(x).ok()?, (self.map)(y).ok()?);
        Some(PullbackMorphism {
            source: x.clone(),
            target: y.clone(),
            inner: self.inner.sample_morphism(rng, &fx, &fy)?,
        })
    }

    fn has_trivial_automorphisms(&self, x: &Q::Elem) -> bool {
        (self.map)(x).is_ok_and(|fx| self.inner.has_trivial_automorphisms(&fx))
    }
}

/// Parenthesized braids.
pub type Pab = Pullback<UnitalMagmaOperad, Cob>;
/// Parenthesized unital braids.
pub type Paub = Pullback<BasedMagmaOperad, Pab>;
pub type PabMorphism = PullbackMorphism<Monomial, CobMorphism>;
pub type PaubMorphism = PullbackMorphism<Monomial, PabMorphism>;

/// `PaB = z*CoB`.
pub fn build_pab(max_arity: usize) -> Pab {
    Pullback::new("PaB", UnitalMagmaOperad, Arc::new(Cob::new(max_arity)), map_z)
}

/// `PaUB = u*PaB`, with based-magma objects truncated at `star_budget`.
pub fn build_paub(max_arity: usize, star_budget: usize) -> Paub {
    Pullback::new(
        "PaUB",
        BasedMagmaOperad { star_budget },
        Arc::new(build_pab(max_arity)),
        map_u,
    )
}

impl Pab {
    /// The morphism `x → y` with the given braid.
    pub fn braid_morphism(&self, x: &Monomial, y: &Monomial, braid: BraidWord) -> Result<PabMorphism> {
        let inner = self.inner().morphism(map_z(x)?, map_z(y)?, braid)?;
        Ok(PullbackMorphism {
            source: x.clone(),
            target: y.clone(),
            inner,
        })
    }
}

/// A morphism of a codiscrete groupoid: the unique arrow between two objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodiscreteMorphism {
    pub source: Monomial,
    pub target: Monomial,
}

impl fmt::Display for CodiscreteMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

/// The operad whose level `n` is the codiscrete groupoid on `UM(n)`.
#[derive(Debug, Clone)]
pub struct CodiscreteUmOperad {
    max_arity: usize,
    levels: Vec<Vec<Monomial>>,
}

impl CodiscreteUmOperad {
    pub fn new(max_arity: usize) -> Self {
        Self {
            max_arity,
            levels: (0..=max_arity).map(|n| UnitalMagmaOperad.elements(n)).collect(),
        }
    }
}

impl GroupoidOperad for CodiscreteUmOperad {
    type Obj = Monomial;
    type Mor = CodiscreteMorphism;

    fn name(&self) -> String {
        "Codisc(UM)".into()
    }

    fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn arity(&self, x: &Monomial) -> usize {
        x.arity()
    }

    fn objects(&self, n: usize) -> &[Monomial] {
        self.levels.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    fn source(&self, a: &CodiscreteMorphism) -> Monomial {
        a.source.clone()
    }

    fn target(&self, a: &CodiscreteMorphism) -> Monomial {
        a.target.clone()
    }

    fn identity(&self, x: &Monomial) -> CodiscreteMorphism {
        CodiscreteMorphism {
            source: x.clone(),
            target: x.clone(),
        }
    }

    fn compose(&self, after: &CodiscreteMorphism, before: &CodiscreteMorphism) -> Result<CodiscreteMorphism> {
        if before.target != after.source {
            return Err(Error::Invalid(format!("{after} . {before} is not composable")));
        }
        Ok(CodiscreteMorphism {
            source: before.source.clone(),
            target: after.target.clone(),
        })
    }

    fn inverse(&self, a: &CodiscreteMorphism) -> CodiscreteMorphism {
        CodiscreteMorphism {
            source: a.target.clone(),
            target: a.source.clone(),
        }
    }

    fn morphisms_equal(&self, a: &CodiscreteMorphism, b: &CodiscreteMorphism) -> bool {
        a == b
    }

    fn unit(&self) -> Monomial {
        Monomial::Leaf(1)
    }

    fn compose_objects(&self, x: &Monomial, i: usize, y: &Monomial) -> Result<Monomial> {
        self.check_arity(x.arity() + y.arity() - 1)?;
        UnitalMagmaOperad.compose(x, i, y)
    }

    fn compose_morphisms(&self, a: &CodiscreteMorphism, i: usize, b: &CodiscreteMorphism) -> Result<CodiscreteMorphism> {
        Ok(CodiscreteMorphism {
            source: self.compose_objects(&a.source, i, &b.source)?,
            target: self.compose_objects(&a.target, i, &b.target)?,
        })
    }

    fn act_object(&self, x: &Monomial, sigma: &Permutation) -> Result<Monomial> {
        UnitalMagmaOperad.act(x, sigma)
    }

    fn act_morphism(&self, a: &CodiscreteMorphism, sigma: &Permutation) -> Result<CodiscreteMorphism> {
        Ok(CodiscreteMorphism {
            source: UnitalMagmaOperad.act(&a.source, sigma)?,
            target: UnitalMagmaOperad.act(&a.target, sigma)?,
        })
    }

    fn sample_morphism(&self, _rng: &mut dyn RngCore, x: &Monomial, y: &Monomial) -> Option<CodiscreteMorphism> {
        Some(CodiscreteMorphism {
            source: x.clone(),
            target: y.clone(),
        })
    }

    fn has_trivial_automorphisms(&self, _x: &Monomial) -> bool {
        true
    }
}

type ObjectFn<S, T> = Arc<dyn Fn(&<S as GroupoidOperad>::Obj) -> Result<<T as GroupoidOperad>::Obj> + Send + Sync>;
type MorphismFn<S, T> = Arc<dyn Fn(&<S as GroupoidOperad>::Mor) -> Result<<T as GroupoidOperad>::Mor> + Send + Sync>;
type ComponentFn<S, T> = Arc<dyn Fn(&<S as GroupoidOperad>::Obj) -> Result<<T as GroupoidOperad>::Mor> + Send + Sync>;

/// A map of operads in groupoids, given levelwise on objects and morphisms.
pub struct OperadMap<S: GroupoidOperad, T: GroupoidOperad> {
    pub name: String,
    on_object: ObjectFn<S, T>,
    on_morphism: MorphismFn<S, T>,
}

impl<S: GroupoidOperad, T: GroupoidOperad> Clone for OperadMap<S, T> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            on_object: self.on_object.clone(),
            on_morphism: self.on_morphism.clone(),
        }
    }
}

impl<S: GroupoidOperad, T: GroupoidOperad> fmt::Debug for OperadMap<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperadMap({})", self.name)
    }
}

impl<S: GroupoidOperad + 'static, T: GroupoidOperad + 'static> OperadMap<S, T> {
    pub fn new(
        name: impl Into<String>,
        on_object: impl Fn(&S::Obj) -> Result<T::Obj> + Send + Sync + 'static,
        on_morphism: impl Fn(&S::Mor) -> Result<T::Mor> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            on_object: Arc::new(on_object),
            on_morphism: Arc::new(on_morphism),
        }
    }

    pub fn object(&self, x: &S::Obj) -> Result<T::Obj> {
        (self.on_object)(x)
    }

    pub fn morphism(&self, a: &S::Mor) -> Result<T::Mor> {
        (self.on_morphism)(a)
    }

    /// `next ∘ self`.
    pub fn then<U: GroupoidOperad + 'static>(&self, next: &OperadMap<T, U>) -> OperadMap<S, U> {
        let (f, g) = (self.clone(), next.clone());
        let (f2, g2) = (self.clone(), next.clone());
        OperadMap::new(
            format!("{} . {}", next.name, self.name),
            move |x| g.object(&f.object(x)?),
            move |a| g2.morphism(&f2.morphism(a)?),
        )
    }
}

impl<O: GroupoidOperad + 'static> OperadMap<O, O> {
    pub fn identity() -> Self {
        OperadMap::new("id", |x: &O::Obj| Ok(x.clone()), |a: &O::Mor| Ok(a.clone()))
    }
}

/// A levelwise natural transformation between two operad maps, given by
/// its component at every object.
pub struct OperadHomotopy<S: GroupoidOperad, T: GroupoidOperad> {
    pub name: String,
    component: ComponentFn<S, T>,
}

impl<S: GroupoidOperad, T: GroupoidOperad> Clone for OperadHomotopy<S, T> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            component: self.component.clone(),
        }
    }
}

impl<S: GroupoidOperad, T: GroupoidOperad> fmt::Debug for OperadHomotopy<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperadHomotopy({})", self.name)
    }
}

impl<S: GroupoidOperad + 'static, T: GroupoidOperad + 'static> OperadHomotopy<S, T> {
    pub fn new(
        name: impl Into<String>,
        component: impl Fn(&S::Obj) -> Result<T::Mor> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            component: Arc::new(component),
        }
    }

    pub fn component(&self, x: &S::Obj) -> Result<T::Mor> {
        (self.component)(x)
    }
}

/// Sampling and enumeration bounds for audits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditConfig {
    /// Number of random morphism tuples per axiom.
    pub samples: usize,
    /// Objects are enumerated exhaustively up to this total arity.
    pub object_arity: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            samples: 500,
            object_arity: 4,
        }
    }
}

fn random_object<'a, O: GroupoidOperad>(op: &'a O, rng: &mut dyn RngCore, n: usize) -> &'a O::Obj {
    op.objects(n).choose(rng).expect("levels up to the truncation are non-empty")
}

fn random_morphism<O: GroupoidOperad>(op: &O, rng: &mut dyn RngCore, n: usize) -> O::Mor {
    let x = random_object(op, rng, n).clone();
    let y = random_object(op, rng, n).clone();
    op.sample_morphism(rng, &x, &y).expect("levels are connected")
}

fn random_morphism_from<O: GroupoidOperad>(op: &O, rng: &mut dyn RngCore, x: &O::Obj) -> O::Mor {
    let y = random_object(op, rng, op.arity(x)).clone();
    op.sample_morphism(rng, x, &y).expect("levels are connected")
}

fn random_permutation(rng: &mut dyn RngCore, n: usize) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffled identity")
}

/// Random arities `(n, m)` with `n ≥ 1` and `n + m - 1 ≤ max`.
fn random_pair(rng: &mut dyn RngCore, max: usize) -> (usize, usize) {
    let n = rng.gen_range(1..=max);
    let m = rng.gen_range(0..=max + 1 - n);
    (n, m)
}

fn eq_mor<O: GroupoidOperad>(op: &O, a: Result<O::Mor>, b: Result<O::Mor>) -> Result<bool> {
    Ok(op.morphisms_equal(&a?, &b?))
}

/// Sampled audit of the operad axioms at the level of morphisms: category
/// laws, unit, both associativity patterns, functoriality of `∘_i`
/// (interchange), equivariance and typing.
pub fn audit_groupoid_operad<O: GroupoidOperad>(op: &O, config: &AuditConfig, rng: &mut dyn RngCore) -> AuditReport {
    let name = op.name();
    let max = op.max_arity();
    let mut report = AuditReport::default();
    let mut category = Tally::new(format!("{name} category laws"));
    let mut unit = Tally::new(format!("{name} unit"));
    let mut seq = Tally::new(format!("{name} sequential associativity"));
    let mut par = Tally::new(format!("{name} parallel associativity"));
    let mut interchange = Tally::new(format!("{name} interchange"));
    let mut equi = Tally::new(format!("{name} equivariance"));
    let mut typing = Tally::new(format!("{name} typing"));
    let e = op.unit();
    let id_e = op.identity(&e);
    for _ in 0..config.samples {
        // category laws on one level
        let n = rng.gen_range(0..=max);
        let a = random_morphism(op, rng, n);
        let b = random_morphism_from(op, rng, &op.target(&a));
        let c = random_morphism_from(op, rng, &op.target(&b));
        let lhs = op.compose(&c, &b).and_then(|cb| op.compose(&cb, &a));
        let rhs = op.compose(&b, &a).and_then(|ba| op.compose(&c, &ba));
        category.record_result(eq_mor(op, lhs, rhs), || format!("({c} . {b}) . {a}"));
        let left = op.compose(&op.identity(&op.target(&a)), &a);
        let right = op.compose(&a, &op.identity(&op.source(&a)));
        let inv = op.compose(&op.inverse(&a), &a);
        category.record_result(
            eq_mor(op, left, Ok(a.clone()))
                .and_then(|l| Ok(l && eq_mor(op, right, Ok(a.clone()))?))
                .and_then(|l| Ok(l && eq_mor(op, inv, Ok(op.identity(&op.source(&a))))?)),
            || format!("identity and inverse at {a}"),
        );

        // unit
        let n = rng.gen_range(1..=max);
        let a = random_morphism(op, rng, n);
        let left = op.compose_morphisms(&id_e, 1, &a);
        let i = rng.gen_range(1..=op.arity(&op.source(&a)));
        let right = op.compose_morphisms(&a, i, &id_e);
        unit.record_result(
            eq_mor(op, left, Ok(a.clone())).and_then(|l| Ok(l && eq_mor(op, right, Ok(a.clone()))?)),
            || format!("unit laws at {a}"),
        );

        // sequential: (a ∘_i b) ∘_j c = a ∘_i (b ∘_{j-i+1} c), i ≤ j < i + m
        let (n, m) = loop {
            let (n, m) = random_pair(rng, max);
            if m >= 1 {
                break (n, m);
            }
        };
        let k = rng.gen_range(0..=max + 2 - n - m);
        let a = random_morphism(op, rng, n);
        let b = random_morphism(op, rng, m);
        let c = random_morphism(op, rng, k);
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(i..i + m);
        let lhs = op.compose_morphisms(&a, i, &b).and_then(|ab| op.compose_morphisms(&ab, j, &c));
        let rhs = op.compose_morphisms(&b, j - i + 1, &c).and_then(|bc| op.compose_morphisms(&a, i, &bc));
        seq.record_result(eq_mor(op, lhs, rhs), || format!("({a} ∘_{i} {b}) ∘_{j} {c}"));

        // parallel: (a ∘_i b) ∘_{j+m-1} c = (a ∘_j c) ∘_i b, i < j
        let (n, m, k) = loop {
            let n = rng.gen_range(2..=max.max(2));
            let m = rng.gen_range(0..=max);
            let k = rng.gen_range(0..=max);
            if n <= max && n + m - 1 <= max && n + k - 1 <= max && n + m + k - 2 <= max {
                break (n, m, k);
            }
        };
        let a = random_morphism(op, rng, n);
        let b = random_morphism(op, rng, m);
        let c = random_morphism(op, rng, k);
        let i = rng.gen_range(1..n);
        let j = rng.gen_range(i + 1..=n);
        let lhs = op
            .compose_morphisms(&a, i, &b)
            .and_then(|ab| op.compose_morphisms(&ab, j + m - 1, &c));
        let rhs = op.compose_morphisms(&a, j, &c).and_then(|ac| op.compose_morphisms(&ac, i, &b));
        par.record_result(eq_mor(op, lhs, rhs), || format!("({a} ∘_{i} {b}) ∘_{} {c}", j + m - 1));

        // interchange: (a2 a1) ∘_i (b2 b1) = (a2 ∘_i b2)(a1 ∘_i b1)
        let (n, m) = random_pair(rng, max);
        let a1 = random_morphism(op, rng, n);
        let a2 = random_morphism_from(op, rng, &op.target(&a1));
        let b1 = random_morphism(op, rng, m);
        let b2 = random_morphism_from(op, rng, &op.target(&b1));
        let i = rng.gen_range(1..=n);
        let lhs = op
            .compose(&a2, &a1)
            .and_then(|a| op.compose(&b2, &b1).and_then(|b| op.compose_morphisms(&a, i, &b)));
        let rhs = op.compose_morphisms(&a2, i, &b2).and_then(|top| {
            op.compose_morphisms(&a1, i, &b1)
                .and_then(|bottom| op.compose(&top, &bottom))
        });
        interchange.record_result(eq_mor(op, lhs, rhs), || format!("interchange at {a1}, {a2}, {b1}, {b2}"));

        // equivariance
        let (n, m) = random_pair(rng, max);
        let a = random_morphism(op, rng, n);
        let b = random_morphism(op, rng, m);
        let s = random_permutation(rng, n);
        let t = random_permutation(rng, m);
        let i = rng.gen_range(1..=n);
        let lhs = op
            .act_morphism(&a, &s)
            .and_then(|as_| op.act_morphism(&b, &t).and_then(|bt| op.compose_morphisms(&as_, i, &bt)));
        let rhs = op
            .compose_morphisms(&a, s.apply(i), &b)
            .and_then(|ab| op.act_morphism(&ab, &equivariance_permutation(&s, i, &t)));
        equi.record_result(eq_mor(op, lhs, rhs), || format!("({a} · {s}) ∘_{i} ({b} · {t})"));

        // typing of ∘_i
        let composite = op.compose_morphisms(&a, i, &b);
        let expected = op
            .compose_objects(&op.source(&a), i, &op.source(&b))
            .and_then(|s| op.compose_objects(&op.target(&a), i, &op.target(&b)).map(|t| (s, t)));
        typing.record_result(
            composite.and_then(|c| expected.map(|(s, t)| op.source(&c) == s && op.target(&c) == t)),
            || format!("endpoints of {a} ∘_{i} {b}"),
        );
    }
    for t in [category, unit, seq, par, interchange, equi, typing] {
        report.push(t.finish());
    }
    report
}

/// Audit of an operad map: exhaustive on objects up to
/// `config.object_arity`, sampled on morphisms.
pub fn audit_operad_map<S, T>(
    source: &S,
    target: &T,
    map: &OperadMap<S, T>,
    config: &AuditConfig,
    rng: &mut dyn RngCore,
) -> AuditReport
where
    S: GroupoidOperad + 'static,
    T: GroupoidOperad + 'static,
{
    let name = &map.name;
    let bound = config.object_arity.min(source.max_arity());
    let mut report = AuditReport::default();

    let mut objects = Tally::new(format!("{name} on objects"));
    objects.record_result(map.object(&source.unit()).map(|u| u == target.unit()), || "unit".into());
    for n in 0..=bound {
        let perms = Permutation::all(n);
        for x in source.objects(n) {
            let fx = map.object(x);
            objects.record_result(fx.as_ref().map(|fx| target.arity(fx) == n).map_err(Clone::clone), || {
                format!("arity of the image of {x}")
            });
            for s in &perms {
                let lhs = source.act_object(x, s).and_then(|xs| map.object(&xs));
                let rhs = map.object(x).and_then(|fx| target.act_object(&fx, s));
                objects.record_result(lhs.and_then(|l| rhs.map(|r| l == r)), || format!("{x} · {s}"));
            }
        }
        for m in 0..=bound + 1 - n.max(1) {
            if n == 0 {
                break;
            }
            for x in source.objects(n) {
                for y in source.objects(m) {
                    for i in 1..=n {
                        let lhs = source.compose_objects(x, i, y).and_then(|xy| map.object(&xy));
                        let rhs = map
                            .object(x)
                            .and_then(|fx| map.object(y).and_then(|fy| target.compose_objects(&fx, i, &fy)));
                        objects.record_result(lhs.and_then(|l| rhs.map(|r| l == r)), || format!("{x} ∘_{i} {y}"));
                    }
                }
            }
        }
    }
    report.push(objects.finish());

    let max = source.max_arity();
    let mut typing = Tally::new(format!("{name} typing"));
    let mut functor = Tally::new(format!("{name} functoriality"));
    let mut comp = Tally::new(format!("{name} commutes with composition"));
    let mut act = Tally::new(format!("{name} commutes with the action"));
    for _ in 0..config.samples {
        let n = rng.gen_range(0..=max);
        let a = random_morphism(source, rng, n);
        let b = random_morphism_from(source, rng, &source.target(&a));
        let fa = map.morphism(&a);
        let ok = fa.as_ref().map_err(Clone::clone).and_then(|fa| {
            Ok(target.source(fa) == map.object(&source.source(&a))?
                && target.target(fa) == map.object(&source.target(&a))?)
        });
        typing.record_result(ok, || format!("endpoints of the image of {a}"));
        let lhs = source.compose(&b, &a).and_then(|ba| map.morphism(&ba));
        let rhs = map
            .morphism(&a)
            .and_then(|fa| map.morphism(&b).and_then(|fb| target.compose(&fb, &fa)));
        let id = map
            .morphism(&source.identity(&source.source(&a)))
            .and_then(|fid| Ok(target.morphisms_equal(&fid, &target.identity(&map.object(&source.source(&a))?))));
        functor.record_result(
            eq_mor(target, lhs, rhs).and_then(|l| Ok(l && id?)),
            || format!("{b} . {a}"),
        );

        let (n, m) = random_pair(rng, max);
        let a = random_morphism(source, rng, n);
        let b = random_morphism(source, rng, m);
        let i = rng.gen_range(1..=n);
        let lhs = source.compose_morphisms(&a, i, &b).and_then(|ab| map.morphism(&ab));
        let rhs = map
            .morphism(&a)
            .and_then(|fa| map.morphism(&b).and_then(|fb| target.compose_morphisms(&fa, i, &fb)));
        comp.record_result(eq_mor(target, lhs, rhs), || format!("{a} ∘_{i} {b}"));

        let s = random_permutation(rng, n);
        let lhs = source.act_morphism(&a, &s).and_then(|as_| map.morphism(&as_));
        let rhs = map.morphism(&a).and_then(|fa| target.act_morphism(&fa, &s));
        act.record_result(eq_mor(target, lhs, rhs), || format!("{a} · {s}"));
    }
    for t in [typing, functor, comp, act] {
        report.push(t.finish());
    }
    report
}

/// Whether two maps agree on every object up to `config.object_arity`
/// and on `config.samples` random morphisms.
pub fn maps_agree<S, T>(
    source: &S,
    target: &T,
    f: &OperadMap<S, T>,
    g: &OperadMap<S, T>,
    config: &AuditConfig,
    rng: &mut dyn RngCore,
) -> AuditReport
where
    S: GroupoidOperad + 'static,
    T: GroupoidOperad + 'static,
{
    let mut objects = Tally::new(format!("{} = {} on objects", f.name, g.name));
    for n in 0..=config.object_arity.min(source.max_arity()) {
        for x in source.objects(n) {
            objects.record_result(f.object(x).and_then(|a| g.object(x).map(|b| a == b)), || x.to_string());
        }
    }
    let mut morphisms = Tally::new(format!("{} = {} on morphisms", f.name, g.name));
    for _ in 0..config.samples {
        let n = rng.gen_range(0..=source.max_arity());
        let a = random_morphism(source, rng, n);
        morphisms.record_result(eq_mor(target, f.morphism(&a), g.morphism(&a)), || a.to_string());
    }
    let mut report = AuditReport::default();
    report.push(objects.finish());
    report.push(morphisms.finish());
    report
}

/// Validates `h: F ⇒ G`: typing of components, naturality on sampled
/// morphisms, `h(x ∘_i y) = h(x) ∘_i h(y)` and `h(x · σ) = h(x) · σ` on
/// every object up to `config.object_arity`.
pub fn validate_homotopy<S, T>(
    source: &S,
    target: &T,
    h: &OperadHomotopy<S, T>,
    from: &OperadMap<S, T>,
    to: &OperadMap<S, T>,
    config: &AuditConfig,
    rng: &mut dyn RngCore,
) -> AuditReport
where
    S: GroupoidOperad + 'static,
    T: GroupoidOperad + 'static,
{
    let name = &h.name;
    let bound = config.object_arity.min(source.max_arity());
    let mut typing = Tally::new(format!("{name} components are typed"));
    let mut equi = Tally::new(format!("{name} commutes with the action"));
    for n in 0..=bound {
        let perms = Permutation::all(n);
        for x in source.objects(n) {
            let ok = h.component(x).and_then(|hx| {
                Ok(target.source(&hx) == from.object(x)? && target.target(&hx) == to.object(x)?)
            });
            typing.record_result(ok, || format!("h({x})"));
            for s in &perms {
                let lhs = source.act_object(x, s).and_then(|xs| h.component(&xs));
                let rhs = h.component(x).and_then(|hx| target.act_morphism(&hx, s));
                equi.record_result(eq_mor(target, lhs, rhs), || format!("h({x} · {s})"));
            }
        }
    }
    let mut operadic = Tally::new(format!("{name} commutes with composition"));
    for n in 1..=bound {
        for m in 0..=bound + 1 - n {
            for x in source.objects(n) {
                for y in source.objects(m) {
                    for i in 1..=n {
                        let lhs = source.compose_objects(x, i, y).and_then(|xy| h.component(&xy));
                        let rhs = h
                            .component(x)
                            .and_then(|hx| h.component(y).and_then(|hy| target.compose_morphisms(&hx, i, &hy)));
                        operadic.record_result(eq_mor(target, lhs, rhs), || format!("h({x} ∘_{i} {y})"));
                    }
                }
            }
        }
    }
    let mut natural = Tally::new(format!("{name} is natural"));
    for _ in 0..config.samples {
        let n = rng.gen_range(0..=source.max_arity());
        let a = random_morphism(source, rng, n);
        let (x, y) = (source.source(&a), source.target(&a));
        let lhs = h
            .component(&y)
            .and_then(|hy| from.morphism(&a).and_then(|fa| target.compose(&hy, &fa)));
        let rhs = h
            .component(&x)
            .and_then(|hx| to.morphism(&a).and_then(|ga| target.compose(&ga, &hx)));
        natural.record_result(eq_mor(target, lhs, rhs), || format!("naturality at {a}"));
    }
    let mut report = AuditReport::default();
    for t in [typing, equi, operadic, natural] {
        report.push(t.finish());
    }
    report
}

/// The identity homotopy of a map.
pub fn identity_homotopy<S, T>(target: Arc<T>, f: &OperadMap<S, T>) -> OperadHomotopy<S, T>
where
    S: GroupoidOperad + 'static,
    T: GroupoidOperad + 'static,
{
    let f = f.clone();
    OperadHomotopy::new("identity", move |x| Ok(target.identity(&f.object(x)?)))
}

/// `v: PaUB → PaB`, the map induced by `u: BM → UM`.
pub fn map_v() -> OperadMap<Paub, Pab> {
    OperadMap::new("v", map_u, |a: &PaubMorphism| Ok(a.inner.clone()))
}

/// `φ(g) = g ∘ v`.
pub fn phi<P: GroupoidOperad + 'static>(g: &OperadMap<Pab, P>) -> OperadMap<Paub, P> {
    let mut out = map_v().then(g);
    out.name = format!("phi({})", g.name);
    out
}

/// The inverse of [`phi`], defined when levels 0 and 1 of `P` are points:
/// objects and morphisms of `PaB` are lifted to `PaUB` along the section
/// `s` (a monomial viewed as a based monomial) and mapped by `f`. Level 0
/// goes to the unique object of `P(0)`.
pub fn phi_inverse<P: GroupoidOperad + 'static>(
    f: &OperadMap<Paub, P>,
    paub: Arc<Paub>,
    target: Arc<P>,
) -> Result<OperadMap<Pab, P>> {
    let failing: Vec<String> = [0, 1]
        .into_iter()
        .filter(|&n| !target.is_point_level(n))
        .map(|n| format!("level {n} of {} is not a point", target.name()))
        .collect();
    if !failing.is_empty() {
        return Err(Error::HypothesisViolated(format!(
            "P(0) = P(1) = * is required; {}",
            failing.join("; ")
        )));
    }
    let point = target.objects(0)[0].clone();
    let (f1, f2) = (f.clone(), f.clone());
    let (point1, point2) = (point.clone(), point);
    let target2 = target.clone();
    let on_object = move |x: &Monomial| -> Result<P::Obj> {
        if x.arity() == 0 {
            return Ok(point1.clone());
        }
        f1.object(&crate::magma::section_s(x)?)
    };
    let on_morphism = move |a: &PabMorphism| -> Result<P::Mor> {
        if a.source.arity() == 0 {
            return Ok(target2.identity(&point2));
        }
        let s = crate::magma::section_s(&a.source)?;
        let t = crate::magma::section_s(&a.target)?;
        let lifted = paub.lift(s, t, a.clone())?;
        f2.morphism(&lifted)
    };
    Ok(OperadMap::new(format!("phi^-1({})", f.name), on_object, on_morphism))
}

/// The endomorphism of `PaB` inverting every crossing.
pub fn endo_mirror() -> OperadMap<Pab, Pab> {
    OperadMap::new("mirror", |x: &Monomial| Ok(x.clone()), |a: &PabMorphism| {
        Ok(PullbackMorphism {
            source: a.source.clone(),
            target: a.target.clone(),
            inner: CobMorphism {
                source: a.inner.source.clone(),
                target: a.inner.target.clone(),
                braid: a.inner.braid.mirror(),
            },
        })
    })
}

/// The endomorphism of `PaB` rotating pictures by a half turn about the
/// vertical axis: trees are mirrored and `σ_i ↦ σ_{n-i}`. It moves objects.
pub fn endo_rotation() -> OperadMap<Pab, Pab> {
    OperadMap::new("rotation", |x: &Monomial| Ok(x.mirror()), |a: &PabMorphism| {
        let (s, t) = (a.source.mirror(), a.target.mirror());
        Ok(PullbackMorphism {
            inner: CobMorphism {
                source: map_z(&s)?,
                target: map_z(&t)?,
                braid: a.inner.braid.rotate(),
            },
            source: s,
            target: t,
        })
    })
}

/// The endomorphism of the codiscrete test operad mirroring every tree.
pub fn codiscrete_swap() -> OperadMap<CodiscreteUmOperad, CodiscreteUmOperad> {
    OperadMap::new("swap", |x: &Monomial| Ok(x.mirror()), |a: &CodiscreteMorphism| {
        Ok(CodiscreteMorphism {
            source: a.source.mirror(),
            target: a.target.mirror(),
        })
    })
}

/// `μ = (1 2)`.
pub fn mu() -> Monomial {
    Monomial::node(Monomial::Leaf(1), Monomial::Leaf(2))
}

/// Extends a component at `μ` to every unital-magma object through the
/// operad structure: `h((L R)) = ((h(μ) ∘_2 h(R')) ∘_1 h(L')) · σ`, where
/// `L'`, `R'` are the standardized subtrees and `σ` restores the letters.
pub fn extend_from_mu<O>(op: &O, at_mu: &O::Mor, x: &Monomial) -> Result<O::Mor>
where
    O: GroupoidOperad<Obj = Monomial>,
{
    match x {
        Monomial::Empty => Ok(op.identity(&Monomial::Empty)),
        Monomial::Leaf(1) => Ok(op.identity(&Monomial::Leaf(1))),
        Monomial::Node(l, r) => {
            let (ls, l_letters) = l.standardize();
            let (rs, r_letters) = r.standardize();
            let hl = extend_from_mu(op, at_mu, &ls)?;
            let hr = extend_from_mu(op, at_mu, &rs)?;
            let grafted = op.compose_morphisms(&op.compose_morphisms(at_mu, 2, &hr)?, 1, &hl)?;
            // relabeling by σ⁻¹ sends k to the k-th letter of (L R)
            let images: Vec<usize> = l_letters.into_iter().chain(r_letters).collect();
            let sigma = Permutation::from_images(images)?.inverse();
            op.act_morphism(&grafted, &sigma)
        }
        other => Err(Error::Invalid(format!("{other} is not a unital magma monomial"))),
    }
}

/// Replaces an endomorphism `u` by a homotopic one that is the identity on
/// objects. `connecting` must be a morphism `u(μ) → μ`; it determines the
/// homotopy `h` on every object, and `v(a) = h(y) ∘ u(a) ∘ h(x)⁻¹`.
#[allow(clippy::type_complexity)]
pub fn fix_objects<O>(
    op: Arc<O>,
    u: &OperadMap<O, O>,
    connecting: O::Mor,
) -> Result<(OperadMap<O, O>, OperadHomotopy<O, O>)>
where
    O: GroupoidOperad<Obj = Monomial> + 'static,
{
    let image = u.object(&mu())?;
    if op.source(&connecting) != image || op.target(&connecting) != mu() {
        return Err(Error::NoConnectingMorphism(format!(
            "{connecting} does not go from {image} to {}",
            mu()
        )));
    }
    let cache: Arc<std::sync::Mutex<HashMap<Monomial, O::Mor>>> = Arc::default();
    let (op1, conn1) = (op.clone(), connecting.clone());
    let h = OperadHomotopy::new(format!("h[{}]", u.name), move |x: &Monomial| {
        if let Some(m) = cache.lock().expect("cache lock").get(x) {
            return Ok(m.clone());
        }
        let m = extend_from_mu(op1.as_ref(), &conn1, x)?;
        cache.lock().expect("cache lock").insert(x.clone(), m.clone());
        Ok(m)
    });
    let (h2, u2, op2) = (h.clone(), u.clone(), op.clone());
    let v = OperadMap::new(
        format!("fixed({})", u.name),
        |x: &Monomial| Ok(x.clone()),
        move |a: &O::Mor| {
            let hx = h2.component(&op2.source(a))?;
            let hy = h2.component(&op2.target(a))?;
            let ua = u2.morphism(a)?;
            op2.compose(&hy, &op2.compose(&ua, &op2.inverse(&hx))?)
        },
    );
    Ok((v, h))
}

/// The self-homotopy of `id_PaB` whose component at every object of
/// level `n` is the full twist on `n` strands.
pub fn fulltwist_selfhomotopy(pab: Arc<Pab>) -> OperadHomotopy<Pab, Pab> {
    OperadHomotopy::new("fulltwist", move |x: &Monomial| {
        pab.braid_morphism(x, x, BraidWord::full_twist(x.arity()))
    })
}

/// Outcome of [`decide_pab_homotopy`].
pub enum HomotopyDecision {
    /// A validated homotopy.
    Homotopic(OperadHomotopy<Pab, Pab>),
    /// An exponent-sum constraint that no component at `μ` can satisfy.
    NotHomotopic(String),
    /// Constraints are consistent but no candidate validated.
    Undecided(String),
}

impl fmt::Debug for HomotopyDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyDecision::Homotopic(h) => write!(f, "Homotopic({})", h.name),
            HomotopyDecision::NotHomotopic(s) => write!(f, "NotHomotopic({s})"),
            HomotopyDecision::Undecided(s) => write!(f, "Undecided({s})"),
        }
    }
}

/// Decides whether two endomorphisms of `PaB` are homotopic. A homotopy is
/// determined by its component at `μ`, a morphism `F(μ) → G(μ)`; these are
/// `c · σ_1^{2k}` for a fixed `c`. Naturality squares on sampled morphisms
/// give affine constraints on `k` through exponent sums; an inconsistent
/// constraint refutes homotopy, otherwise candidates are validated.
pub fn decide_pab_homotopy(
    pab: Arc<Pab>,
    f: &OperadMap<Pab, Pab>,
    g: &OperadMap<Pab, Pab>,
    config: &AuditConfig,
    rng: &mut dyn RngCore,
) -> Result<HomotopyDecision> {
    let (fmu, gmu) = (f.object(&mu())?, g.object(&mu())?);
    let needed = map_z(&fmu)?.inverse().compose(&map_z(&gmu)?)?;
    let base = BraidWord::from_permutation(&needed);
    let candidate = |k: i64| -> Result<OperadHomotopy<Pab, Pab>> {
        let braid = base.multiply(&BraidWord::generator(2, 1)?.pow(2 * k))?;
        let at_mu = pab.braid_morphism(&fmu, &gmu, braid)?;
        let op = pab.clone();
        let fx = f.clone();
        Ok(OperadHomotopy::new(format!("h[k={k}]"), move |x: &Monomial| {
            // h(x) = G-side extension; x is a source object, F(x) its image
            let hx = extend_from_mu(op.as_ref(), &at_mu, x)?;
            let expected = fx.object(x)?;
            if hx.source != expected {
                return Err(Error::Invalid(format!("component at {x} does not start at F({x})")));
            }
            Ok(hx)
        }))
    };
    let exponent = |h: &OperadHomotopy<Pab, Pab>, x: &Monomial| -> Result<i64> {
        Ok(h.component(x)?.inner.braid.exponent_sum())
    };
    let (h0, h1) = (candidate(0)?, candidate(1)?);
    // constraint per sampled morphism a: x → y:
    // e(F a) + e(h y) = e(h x) + e(G a), with e(h x) = c_x + d_x k
    let mut coefficient_constraints: Vec<(i64, i64, String)> = Vec::new();
    let mut samples: Vec<PabMorphism> = Vec::new();
    let s1 = pab.braid_morphism(&mu(), &Monomial::parse("(2 1)")?, BraidWord::generator(2, 1)?)?;
    samples.push(s1);
    for _ in 0..config.samples {
        let n = rng.gen_range(2..=pab.max_arity().max(2));
        samples.push(random_morphism(pab.as_ref(), rng, n));
    }
    for a in &samples {
        let (x, y) = (&a.source, &a.target);
        let (cx, cy) = (exponent(&h0, x)?, exponent(&h0, y)?);
        let (dx, dy) = (exponent(&h1, x)? - cx, exponent(&h1, y)? - cy);
        let ef = f.morphism(a)?.inner.braid.exponent_sum();
        let eg = g.morphism(a)?.inner.braid.exponent_sum();
        // (ef - eg) + (cy - cx) + (dy - dx) k = 0
        let constant = ef - eg + cy - cx;
        let coefficient = dy - dx;
        if coefficient == 0 && constant != 0 {
            return Ok(HomotopyDecision::NotHomotopic(format!(
                "naturality at {a} forces exponent sums {} = {}",
                ef + cy,
                eg + cx
            )));
        }
        if coefficient != 0 {
            coefficient_constraints.push((constant, coefficient, a.to_string()));
        }
    }
    let mut ks: Vec<i64> = Vec::new();
    for (constant, coefficient, at) in &coefficient_constraints {
        if constant % coefficient != 0 {
            return Ok(HomotopyDecision::NotHomotopic(format!("no integer solution at {at}")));
        }
        let k = -constant / coefficient;
        if ks.first().is_some_and(|&k0| k0 != k) {
            return Ok(HomotopyDecision::NotHomotopic(format!("conflicting constraints at {at}")));
        }
        ks.push(k);
    }
    let candidates: Vec<i64> = match ks.first() {
        Some(&k) => vec![k],
        None => vec![0, 1, -1, 2, -2],
    };
    for k in candidates {
        let h = candidate(k)?;
        let report = validate_homotopy(pab.as_ref(), pab.as_ref(), &h, f, g, config, rng);
        if report.passed() {
            return Ok(HomotopyDecision::Homotopic(h));
        }
    }
    Ok(HomotopyDecision::Undecided(
        "exponent-sum constraints are consistent but no candidate validated".into(),
    ))
}

/// Finite shadow of a level of `PaB` or `PaUB` on a bounded object set:
/// a morphism `x → y` is kept only through its permutation and its
/// exponent sum modulo `modulus` (both are functorial invariants).
pub fn finite_shadow(objects: &[Monomial], arity: usize, modulus: i64, to_um: fn(&Monomial) -> Result<Monomial>) -> Result<FiniteGroupoid> {
    let names: Vec<String> = objects.iter().map(|x| x.to_string()).collect();
    let perms: Vec<Permutation> = objects
        .iter()
        .map(|x| to_um(x).and_then(|m| map_z(&m)))
        .collect::<Result<_>>()?;
    // the exponent sum of a braid has the parity of its permutation; on at
    // most one strand the braid group is trivial
    let residues = |p: &Permutation| -> Vec<i64> {
        if arity <= 1 {
            return vec![0];
        }
        let parity = BraidWord::from_permutation(p).exponent_sum().rem_euclid(2);
        (0..modulus).filter(|r| r % 2 == parity).collect()
    };
    let mut morphs = Vec::new();
    let mut data = Vec::new();
    for (i, x) in perms.iter().enumerate() {
        for (j, y) in perms.iter().enumerate() {
            for r in residues(&x.inverse().compose(y)?) {
                morphs.push((format!("{}>{}#{r}", names[i], names[j]), i, j));
                data.push((i, j, r));
            }
        }
    }
    let index: HashMap<(usize, usize, i64), usize> = data.iter().enumerate().map(|(k, &d)| (d, k)).collect();
    FiniteGroupoid::build(names, morphs, |g, f| {
        let (s, _, rf) = data[f];
        let (_, t, rg) = data[g];
        index.get(&(s, t, (rf + rg).rem_euclid(modulus))).copied()
    })
}

/// `v` on finite shadows of level `n`: `PaUB(n)` on based monomials with at
/// most `star_budget` basepoints against `PaB(n)`.
pub fn shadow_of_v(n: usize, star_budget: usize, modulus: i64) -> Result<GroupoidFunctor> {
    let based = crate::magma::enumerate_bm(n, star_budget);
    let unital = crate::magma::enumerate_um(n);
    let source = Arc::new(finite_shadow(&based, n, modulus, map_u)?);
    let target = Arc::new(finite_shadow(&unital, n, modulus, |m| Ok(m.clone()))?);
    let position: HashMap<&Monomial, usize> = unital.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let objects: Vec<usize> = based
        .iter()
        .map(|b| map_u(b).map(|m| position[&m]))
        .collect::<Result<_>>()?;
    let morphisms = (0..source.morphism_count())
        .map(|f| {
            let (x, y) = (objects[source.source(f)], objects[source.target(f)]);
            // identities are renamed by the builder and carry no residue suffix
            let residue = source.morphism(f).name.rsplit_once('#').map_or("0", |(_, r)| r);
            if x == y && residue == "0" {
                return Ok(target.identity(x));
            }
            let wanted = format!("{}>{}#{residue}", unital[x], unital[y]);
            target
                .morphism_index(&wanted)
                .ok_or_else(|| Error::Invalid(format!("no morphism {wanted} in the shadow of PaB({n})")))
        })
        .collect::<Result<_>>()?;
    GroupoidFunctor::new(source, target, objects, morphisms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    fn quick() -> AuditConfig {
        AuditConfig {
            samples: 60,
            object_arity: 3,
        }
    }

    #[test]
    fn cob_levels_and_hom_sets() {
        let cob = build_cob(3);
        assert!(cob.is_point_level(0));
        assert!(cob.is_point_level(1));
        assert!(!cob.is_point_level(2));
        let x = Permutation::identity(2);
        let y = Permutation::transposition(2, 1, 2);
        assert!(cob.morphism(x.clone(), y.clone(), BraidWord::generator(2, 1).unwrap()).is_ok());
        assert!(cob.morphism(x.clone(), x.clone(), BraidWord::generator(2, 1).unwrap()).is_err());
        assert!(cob.morphism(x.clone(), x, BraidWord::full_twist(2)).is_ok());
    }

    #[test]
    fn cob_composition_matches_block_permutations() {
        let cob = build_cob(3);
        let s1 = BraidWord::generator(2, 1).unwrap();
        let a = cob
            .morphism(Permutation::identity(2), Permutation::transposition(2, 1, 2), s1.clone())
            .unwrap();
        let c = cob.compose_morphisms(&a, 2, &a).unwrap();
        assert_eq!(c.braid.permutation(), c.source.inverse().compose(&c.target).unwrap());
        assert_eq!(c.braid.permutation(), AssocOperad.compose(&s1.permutation(), 2, &s1.permutation()).unwrap());
    }

    #[test]
    fn operad_audits_pass() {
        let mut r = rng();
        let cob = build_cob(4);
        let rep = audit_groupoid_operad(&cob, &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
        let pab = build_pab(4);
        let rep = audit_groupoid_operad(&pab, &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
        let paub = build_paub(4, 1);
        let rep = audit_groupoid_operad(&paub, &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
        let codisc = CodiscreteUmOperad::new(3);
        let rep = audit_groupoid_operad(&codisc, &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn endomorphisms_pass_audit() {
        let mut r = rng();
        let pab = build_pab(4);
        for endo in [OperadMap::identity(), endo_mirror(), endo_rotation()] {
            let rep = audit_operad_map(&pab, &pab, &endo, &quick(), &mut r);
            assert!(rep.passed(), "{rep}");
        }
        let paub = build_paub(3, 1);
        let rep = audit_operad_map(&paub, &pab, &map_v(), &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
        let codisc = CodiscreteUmOperad::new(3);
        let rep = audit_operad_map(&codisc, &codisc, &codiscrete_swap(), &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn mirror_examples() {
        let pab = build_pab(3);
        let mirror = endo_mirror();
        let s1 = pab.braid_morphism(&m("(1 2)"), &m("(2 1)"), BraidWord::generator(2, 1).unwrap()).unwrap();
        let image = mirror.morphism(&s1).unwrap();
        assert_eq!(image.inner.braid, BraidWord::generator(2, -1).unwrap());
        assert_eq!(mirror.object(&m("((1 2) 3)")).unwrap(), m("((1 2) 3)"));
        let twice = mirror.then(&mirror);
        let rep = maps_agree(&pab, &pab, &twice, &OperadMap::identity(), &quick(), &mut rng());
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn fulltwist_homotopy_validates() {
        let pab = Arc::new(build_pab(4));
        let h = fulltwist_selfhomotopy(pab.clone());
        assert_eq!(h.component(&m("(1 2)")).unwrap().inner.braid.word(), &[1, 1]);
        assert_eq!(h.component(&m("((1 2) 3)")).unwrap().inner.braid.word(), &[1, 2, 1, 2, 1, 2]);
        let id = OperadMap::identity();
        let rep = validate_homotopy(pab.as_ref(), pab.as_ref(), &h, &id, &id, &quick(), &mut rng());
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn homotopy_decisions() {
        let pab = Arc::new(build_pab(3));
        let id = OperadMap::identity();
        let mut r = rng();
        let d = decide_pab_homotopy(pab.clone(), &id, &endo_mirror(), &quick(), &mut r).unwrap();
        assert!(matches!(d, HomotopyDecision::NotHomotopic(_)), "{d:?}");
        let d = decide_pab_homotopy(pab.clone(), &id, &id, &quick(), &mut r).unwrap();
        assert!(matches!(d, HomotopyDecision::Homotopic(_)), "{d:?}");
        let d = decide_pab_homotopy(pab.clone(), &endo_mirror(), &endo_mirror(), &quick(), &mut r).unwrap();
        assert!(matches!(d, HomotopyDecision::Homotopic(_)), "{d:?}");
    }

    #[test]
    fn mirror_is_not_homotopic_to_identity_via_validator() {
        let pab = Arc::new(build_pab(3));
        let id = OperadMap::identity();
        // the natural guesses fail the naturality squares
        for h in [identity_homotopy(pab.clone(), &id), fulltwist_selfhomotopy(pab.clone())] {
            let rep = validate_homotopy(pab.as_ref(), pab.as_ref(), &h, &id, &endo_mirror(), &quick(), &mut rng());
            assert!(!rep.passed());
        }
    }

    #[test]
    fn fix_objects_on_codiscrete_swap() {
        let op = Arc::new(CodiscreteUmOperad::new(3));
        let swap = codiscrete_swap();
        let connecting = CodiscreteMorphism {
            source: m("(2 1)"),
            target: m("(1 2)"),
        };
        let (v, h) = fix_objects(op.clone(), &swap, connecting).unwrap();
        let mut r = rng();
        let rep = audit_operad_map(op.as_ref(), op.as_ref(), &v, &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
        let rep = validate_homotopy(op.as_ref(), op.as_ref(), &h, &swap, &v, &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
        for n in 0..=3 {
            for x in op.objects(n) {
                assert_eq!(&v.object(x).unwrap(), x);
            }
        }
        let wrong = CodiscreteMorphism {
            source: m("(1 2)"),
            target: m("(1 2)"),
        };
        assert!(matches!(
            fix_objects(op, &swap, wrong),
            Err(Error::NoConnectingMorphism(_))
        ));
    }

    #[test]
    fn fix_objects_on_pab_rotation() {
        let pab = Arc::new(build_pab(4));
        let rot = endo_rotation();
        let connecting = pab
            .braid_morphism(&m("(2 1)"), &m("(1 2)"), BraidWord::generator(2, 1).unwrap())
            .unwrap();
        let (v, h) = fix_objects(pab.clone(), &rot, connecting).unwrap();
        let mut r = rng();
        let rep = audit_operad_map(pab.as_ref(), pab.as_ref(), &v, &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
        let rep = validate_homotopy(pab.as_ref(), pab.as_ref(), &h, &rot, &v, &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn fix_objects_trivial_case() {
        let pab = Arc::new(build_pab(3));
        let id = OperadMap::identity();
        let (v, h) = fix_objects(pab.clone(), &id, pab.identity(&mu())).unwrap();
        let mut r = rng();
        assert!(maps_agree(pab.as_ref(), pab.as_ref(), &v, &id, &quick(), &mut r).passed());
        let ident = identity_homotopy(pab.clone(), &id);
        for x in pab.objects(3) {
            assert!(pab.morphisms_equal(&h.component(x).unwrap(), &ident.component(x).unwrap()));
        }
    }

    #[test]
    fn phi_round_trips() {
        let pab = Arc::new(build_pab(3));
        let paub = Arc::new(build_paub(3, 1));
        let mut r = rng();
        for g in [OperadMap::identity(), endo_mirror()] {
            let f = phi(&g);
            let back = phi_inverse(&f, paub.clone(), pab.clone()).unwrap();
            let rep = maps_agree(pab.as_ref(), pab.as_ref(), &back, &g, &quick(), &mut r);
            assert!(rep.passed(), "{rep}");
        }
        // phi(id) = v
        let rep = maps_agree(paub.as_ref(), pab.as_ref(), &phi(&OperadMap::identity()), &map_v(), &quick(), &mut r);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn phi_inverse_checks_the_hypothesis() {
        let paub = Arc::new(build_paub(3, 1));
        let id: OperadMap<Paub, Paub> = OperadMap::identity();
        match phi_inverse(&id, paub.clone(), paub.clone()) {
            Err(Error::HypothesisViolated(msg)) => assert!(msg.contains("level 1"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn v_is_a_levelwise_weak_equivalence_on_shadows() {
        for (n, budget) in [(0, 2), (1, 2), (2, 1), (3, 0)] {
            let f = shadow_of_v(n, budget, 4).unwrap();
            assert!(f.is_weak_equivalence(), "level {n}");
        }
    }
}
