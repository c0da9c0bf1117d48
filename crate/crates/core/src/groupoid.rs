//! Finite groupoids given by composition tables, functors between them,
//! natural transformations and the decidable model-structure predicates.
//!
//! `compose(g, f)` is `g ∘ f`: first `f`, then `g`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismData {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A groupoid with finitely many morphisms, stored as a composition table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    morphisms: Vec<MorphismData>,
    identities: Vec<usize>,
    inverses: Vec<usize>,
    table: Vec<u32>,
    homs: Vec<Vec<usize>>,
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroupoid({} objects, {} morphisms)",
            self.object_count(),
            self.morphism_count()
        )
    }
}

impl FiniteGroupoid {
    /// Builds a groupoid from its morphisms and a composition rule
    /// `compose(g, f) = g ∘ f`, defined whenever `target(f) = source(g)`.
    /// Identities and inverses are inferred and every axiom is checked.
    /// Identities are renamed `id_<object>`.
    pub fn build(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self> {
        let n = objects.len();
        let m = morphisms.len();
        let mut names = HashMap::new();
        for (k, o) in objects.iter().enumerate() {
            if names.insert(o.clone(), k).is_some() {
                return Err(Error::Invalid(format!("duplicate object `{o}`")));
            }
        }
        let morphisms: Vec<MorphismData> = morphisms
            .into_iter()
            .map(|(name, source, target)| {
                if source >= n || target >= n {
                    return Err(Error::Invalid(format!("morphism `{name}` has an unknown endpoint")));
                }
                Ok(MorphismData { name, source, target })
            })
            .collect::<Result<_>>()?;
        let mut homs = vec![Vec::new(); n * n];
        for (k, d) in morphisms.iter().enumerate() {
            homs[d.source * n + d.target].push(k);
        }
        let mut table = vec![NONE; m * m];
        for (f, df) in morphisms.iter().enumerate() {
            for g in 0..m {
                if morphisms[g].source != df.target {
                    continue;
                }
                let h = compose(g, f).ok_or_else(|| {
                    Error::Invalid(format!(
                        "composition {} . {} is not defined",
                        morphisms[g].name, df.name
                    ))
                })?;
                if h >= m || morphisms[h].source != df.source || morphisms[h].target != morphisms[g].target {
                    return Err(Error::Invalid(format!(
                        "composition {} . {} has the wrong endpoints",
                        morphisms[g].name, df.name
                    )));
                }
                table[g * m + f] = h as u32;
            }
        }
        let mut identities = Vec::with_capacity(n);
        for x in 0..n {
            let id = homs[x * n + x]
                .iter()
                .copied()
                .find(|&e| table[e * m + e] as usize == e)
                .ok_or_else(|| Error::Invalid(format!("object `{}` has no identity", objects[x])))?;
            identities.push(id);
        }
        let mut g = Self {
            objects,
            morphisms,
            identities,
            inverses: Vec::new(),
            table,
            homs,
        };
        for f in 0..m {
            let d = &g.morphisms[f];
            let (s, t) = (d.source, d.target);
            if g.comp(g.identities[t], f) != f || g.comp(f, g.identities[s]) != f {
                return Err(Error::Invalid(format!("identity law fails at `{}`", d.name)));
            }
        }
        for f in 0..m {
            let (s, t) = (g.morphisms[f].source, g.morphisms[f].target);
            let inv = g
                .hom(t, s)
                .iter()
                .copied()
                .find(|&h| g.comp(h, f) == g.identities[s] && g.comp(f, h) == g.identities[t])
                .ok_or_else(|| Error::Invalid(format!("`{}` has no inverse", g.morphisms[f].name)))?;
            g.inverses.push(inv);
        }
        for f in 0..m {
            let t = g.morphisms[f].target;
            for y in 0..n {
                for &gg in g.hom(t, y) {
                    let gf = g.comp(gg, f);
                    for z in 0..n {
                        for &h in g.hom(y, z) {
                            if g.comp(h, gf) != g.comp(g.comp(h, gg), f) {
                                return Err(Error::Invalid(format!(
                                    "associativity fails at {} . {} . {}",
                                    g.morphisms[h].name, g.morphisms[gg].name, g.morphisms[f].name
                                )));
                            }
                        }
                    }
                }
            }
        }
        let mut used: HashMap<String, usize> = HashMap::new();
        for x in 0..n {
            let id = g.identities[x];
            g.morphisms[id].name = format!("id_{}", g.objects[x]);
        }
        for (k, d) in g.morphisms.iter().enumerate() {
            if let Some(prev) = used.insert(d.name.clone(), k) {
                return Err(Error::Invalid(format!(
                    "morphisms {prev} and {k} share the name `{}`",
                    d.name
                )));
            }
        }
        Ok(g)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism(&self, f: usize) -> &MorphismData {
        &self.morphisms[f]
    }

    pub fn morphisms(&self) -> &[MorphismData] {
        &self.morphisms
    }

    pub fn source(&self, f: usize) -> usize {
        self.morphisms[f].source
    }

    pub fn target(&self, f: usize) -> usize {
        self.morphisms[f].target
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.source(f)] == f
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverses[f]
    }

    /// Morphisms `x → y`.
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x * self.objects.len() + y]
    }

    /// `g ∘ f`; panics when the pair is not composable.
    #[inline]
    pub fn comp(&self, g: usize, f: usize) -> usize {
        let h = self.table[g * self.morphisms.len() + f];
        assert!(h != NONE, "morphisms are not composable");
        h as usize
    }

    /// `g ∘ f`, or an error when the pair is not composable.
    pub fn compose(&self, g: usize, f: usize) -> Result<usize> {
        if self.target(f) != self.source(g) {
            return Err(Error::Invalid(format!(
                "{} . {} is not composable",
                self.morphisms[g].name, self.morphisms[f].name
            )));
        }
        Ok(self.comp(g, f))
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|d| d.name == name)
    }

    /// Component label of every object (labels in order of first object).
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.object_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if label[x] != usize::MAX {
                continue;
            }
            for (y, l) in label.iter_mut().enumerate() {
                if !self.hom(x, y).is_empty() {
                    *l = next;
                }
            }
            next += 1;
        }
        label
    }

    /// The connected components, each as a list of objects.
    pub fn pi0(&self) -> Vec<Vec<usize>> {
        let labels = self.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (x, &l) in labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }

    /// Morphisms `x → x`.
    pub fn vertex_group(&self, x: usize) -> &[usize] {
        self.hom(x, x)
    }

    /// The full subgroupoid on `objects`, with the embedding of morphisms.
    pub fn full_subgroupoid(&self, objects: &[usize]) -> Result<(FiniteGroupoid, Vec<usize>)> {
        let mut local = HashMap::new();
        for (k, &x) in objects.iter().enumerate() {
            local.insert(x, k);
        }
        let mut embed = Vec::new();
        let mut back = HashMap::new();
        let mut morphs = Vec::new();
        for &x in objects {
            for &y in objects {
                for &f in self.hom(x, y) {
                    back.insert(f, embed.len());
                    embed.push(f);
                    morphs.push((self.morphisms[f].name.clone(), local[&x], local[&y]));
                }
            }
        }
        let names = objects.iter().map(|&x| self.objects[x].clone()).collect();
        let sub = FiniteGroupoid::build(names, morphs, |g, f| back.get(&self.comp(embed[g], embed[f])).copied())?;
        Ok((sub, embed))
    }

    pub fn point() -> Self {
        Self::codiscrete_n(1)
    }

    /// `n` objects, only identities.
    pub fn discrete(n: usize) -> Self {
        let objects: Vec<String> = (0..n).map(|k| k.to_string()).collect();
        let morphs = (0..n).map(|k| (format!("id_{k}"), k, k)).collect();
        Self::build(objects, morphs, |g, f| (g == f).then_some(g)).expect("discrete groupoid")
    }

    /// Exactly one morphism between any two objects.
    pub fn codiscrete(names: &[String]) -> Result<Self> {
        let n = names.len();
        let morphs = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| (format!("{}>{}", names[x], names[y]), x, y))
            .collect();
        // morphism x → y has index x * n + y
        Self::build(names.to_vec(), morphs, |g, f| Some((f / n) * n + g % n))
    }

    pub fn codiscrete_n(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|k| k.to_string()).collect();
        Self::codiscrete(&names).expect("codiscrete groupoid")
    }

    /// The groupoid completion of `[k]`: codiscrete on `k + 1` objects.
    pub fn interval(k: usize) -> Self {
        Self::codiscrete_n(k + 1)
    }

    /// `*//G`: one object, morphisms the elements, `g ∘ h = g h`.
    pub fn one_object(group: &FiniteGroup) -> Self {
        let morphs = group
            .elements()
            .map(|g| (element_name(g), 0, 0))
            .collect();
        Self::build(vec!["*".into()], morphs, |g, f| Some(group.op(g, f))).expect("one-object groupoid")
    }

    /// The translation groupoid `S//G` of a right action: a morphism
    /// `s → t` is an element `g` with `s.g = t`, and `h ∘ g = g h`.
    pub fn translation(
        group: &FiniteGroup,
        points: &[String],
        action: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let order = group.order();
        for s in 0..points.len() {
            if action(s, 0) != s {
                return Err(Error::Invalid("identity does not act trivially".into()));
            }
            for g in 0..order {
                for h in 0..order {
                    if action(action(s, g), h) != action(s, group.op(g, h)) {
                        return Err(Error::Invalid("not a right action".into()));
                    }
                }
            }
        }
        let mut morphs = Vec::with_capacity(points.len() * order);
        for (s, point) in points.iter().enumerate() {
            for g in 0..order {
                morphs.push((format!("{}.{}", point, element_name(g)), s, action(s, g)));
            }
        }
        // morphism (s, g) has index s * order + g
        Self::build(points.to_vec(), morphs, |h, g| {
            let s = g / order;
            Some(s * order + group.op(g % order, h % order))
        })
    }

    /// `G^c//G`: `G` acting on itself by conjugation `g.h = h⁻¹ g h`.
    pub fn conjugation(group: &FiniteGroup) -> Self {
        let points: Vec<String> = group.elements().map(element_name).collect();
        Self::translation(group, &points, |g, h| group.op(group.op(group.inverse(h), g), h))
            .expect("conjugation action")
    }

    /// `G[S] = *//G × Codisc(S)`.
    pub fn g_of_s(group: &FiniteGroup, s: usize) -> Self {
        Self::product(&Self::one_object(group), &Self::codiscrete_n(s))
    }

    pub fn product(c: &FiniteGroupoid, d: &FiniteGroupoid) -> Self {
        let (nc, nd) = (c.object_count(), d.object_count());
        let md = d.morphism_count();
        let mut objects = Vec::with_capacity(nc * nd);
        for x in 0..nc {
            for y in 0..nd {
                objects.push(format!("({},{})", c.objects[x], d.objects[y]));
            }
        }
        let mut morphs = Vec::with_capacity(c.morphism_count() * md);
        for f in 0..c.morphism_count() {
            for g in 0..md {
                morphs.push((
                    format!("({},{})", c.morphisms[f].name, d.morphisms[g].name),
                    c.source(f) * nd + d.source(g),
                    c.target(f) * nd + d.target(g),
                ));
            }
        }
        Self::build(objects, morphs, |a, b| {
            Some(c.comp(a / md, b / md) * md + d.comp(a % md, b % md))
        })
        .expect("product of groupoids")
    }

    pub fn coproduct(c: &FiniteGroupoid, d: &FiniteGroupoid) -> Self {
        let (nc, mc) = (c.object_count(), c.morphism_count());
        let objects = c
            .objects
            .iter()
            .map(|o| format!("{o}.0"))
            .chain(d.objects.iter().map(|o| format!("{o}.1")))
            .collect();
        let morphs = c
            .morphisms
            .iter()
            .map(|m| (format!("{}.0", m.name), m.source, m.target))
            .chain(d.morphisms.iter().map(|m| (format!("{}.1", m.name), m.source + nc, m.target + nc)))
            .collect();
        Self::build(objects, morphs, |g, f| match (g < mc, f < mc) {
            (true, true) => Some(c.comp(g, f)),
            (false, false) => Some(d.comp(g - mc, f - mc) + mc),
            _ => None,
        })
        .expect("coproduct of groupoids")
    }

    /// Parses the text format:
    ///
    /// ```text
    /// objects: a b
    /// f: a -> b
    /// id_a = g . f
    /// ```
    ///
    /// Identities are named `id_<object>` and need no declaration;
    /// inverses are inferred.
    pub fn parse(text: &str) -> Result<Self> {
        let mut objects: Option<Vec<String>> = None;
        let mut morphs: Vec<(String, usize, usize)> = Vec::new();
        let mut rules: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pending: Vec<(usize, Vec<(usize, String)>)> = Vec::new();
        let mut objects_line = 0;
        for (line, body) in crate::text::content_lines(text) {
            let toks = crate::text::tokens(body);
            let (col0, head) = toks[0];
            if head == "objects:" {
                if objects.is_some() {
                    return Err(Error::parse(line, col0, "duplicate `objects:` header"));
                }
                let names: Vec<String> = toks[1..].iter().map(|&(_, t)| t.to_string()).collect();
                objects = Some(names);
                objects_line = line;
                continue;
            }
            let Some(objs) = objects.as_ref() else {
                return Err(Error::parse(line, col0, "expected `objects:` header first"));
            };
            if toks.len() == 4 && head.ends_with(':') && toks[2].1 == "->" {
                let name = head.trim_end_matches(':').to_string();
                if name.is_empty() {
                    return Err(Error::parse(line, col0, "empty morphism name"));
                }
                let lookup = |(col, t): (usize, &str)| {
                    objs.iter()
                        .position(|o| o == t)
                        .ok_or_else(|| Error::parse(line, col, format!("unknown object `{t}`")))
                };
                let s = lookup(toks[1])?;
                let t = lookup(toks[3])?;
                morphs.push((name, s, t));
            } else if toks.len() == 5 && toks[1].1 == "=" && toks[3].1 == "." {
                pending.push((
                    line,
                    [toks[0], toks[2], toks[4]].iter().map(|&(c, t)| (c, t.to_string())).collect(),
                ));
            } else {
                return Err(Error::parse(
                    line,
                    col0,
                    "expected `name: src -> tgt` or `h = g . f`",
                ));
            }
        }
        let Some(objects) = objects else {
            return Err(Error::parse(objects_line.max(1), 1, "missing `objects:` header"));
        };
        let n = objects.len();
        // implicit identities come first
        let mut all: Vec<(String, usize, usize)> = (0..n).map(|x| (format!("id_{}", objects[x]), x, x)).collect();
        all.extend(morphs);
        let index: HashMap<&str, usize> = all.iter().enumerate().map(|(k, m)| (m.0.as_str(), k)).collect();
        if index.len() != all.len() {
            return Err(Error::Invalid("duplicate morphism name".into()));
        }
        for (line, parts) in &pending {
            let mut ids = [0; 3];
            for (slot, (col, name)) in ids.iter_mut().zip(parts) {
                *slot = *index
                    .get(name.as_str())
                    .ok_or_else(|| Error::parse(*line, *col, format!("unknown morphism `{name}`")))?;
            }
            let [h, g, f] = ids;
            if all[f].2 != all[g].1 {
                return Err(Error::parse(*line, parts[1].0, "morphisms are not composable"));
            }
            if rules.insert((g, f), h).is_some_and(|prev| prev != h) {
                return Err(Error::parse(*line, parts[0].0, "conflicting composition"));
            }
        }
        Self::build(objects, all, |g, f| {
            if g < n {
                return Some(f);
            }
            if f < n {
                return Some(g);
            }
            rules.get(&(g, f)).copied()
        })
    }

    /// Inverse of [`FiniteGroupoid::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("objects: {}\n", self.objects.join(" "));
        for (k, d) in self.morphisms.iter().enumerate() {
            if !self.is_identity(k) {
                out += &format!("{}: {} -> {}\n", d.name, self.objects[d.source], self.objects[d.target]);
            }
        }
        for (f, df) in self.morphisms.iter().enumerate() {
            if self.is_identity(f) {
                continue;
            }
            for y in 0..self.object_count() {
                for &g in self.hom(df.target, y) {
                    if self.is_identity(g) {
                        continue;
                    }
                    out += &format!(
                        "{} = {} . {}\n",
                        self.morphisms[self.comp(g, f)].name, self.morphisms[g].name, df.name
                    );
                }
            }
        }
        out
    }
}

/// Name of element `g` of a finite group: `e` for the identity.
pub fn element_name(g: usize) -> String {
    if g == 0 {
        "e".into()
    } else {
        format!("g{g}")
    }
}

/// A functor between finite groupoids.
#[derive(Clone)]
pub struct GroupoidFunctor {
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    objects: Vec<usize>,
    morphisms: Vec<usize>,
}

impl fmt::Debug for GroupoidFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupoidFunctor")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms)
            .finish()
    }
}

impl PartialEq for GroupoidFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.morphisms == other.morphisms
    }
}

impl GroupoidFunctor {
    /// Checks endpoints, identities and composition.
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self> {
        if objects.len() != source.object_count() || morphisms.len() != source.morphism_count() {
            return Err(Error::Invalid("functor maps have the wrong size".into()));
        }
        if objects.iter().any(|&y| y >= target.object_count())
            || morphisms.iter().any(|&g| g >= target.morphism_count())
        {
            return Err(Error::Invalid("functor image out of range".into()));
        }
        for f in 0..source.morphism_count() {
            let g = morphisms[f];
            if target.source(g) != objects[source.source(f)] || target.target(g) != objects[source.target(f)] {
                return Err(Error::Invalid(format!("functor breaks endpoints of `{}`", source.morphism(f).name)));
            }
        }
        for x in 0..source.object_count() {
            if morphisms[source.identity(x)] != target.identity(objects[x]) {
                return Err(Error::Invalid("functor does not preserve identities".into()));
            }
        }
        for f in 0..source.morphism_count() {
            for y in 0..source.object_count() {
                for &g in source.hom(source.target(f), y) {
                    if morphisms[source.comp(g, f)] != target.comp(morphisms[g], morphisms[f]) {
                        return Err(Error::Invalid("functor does not preserve composition".into()));
                    }
                }
            }
        }
        Ok(Self::new_unchecked(source, target, objects, morphisms))
    }

    pub(crate) fn new_unchecked(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Self {
        Self {
            source,
            target,
            objects,
            morphisms,
        }
    }

    /// Object map inferred from the images of identities.
    pub fn from_morphisms(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        morphisms: Vec<usize>,
    ) -> Result<Self> {
        if morphisms.len() != source.morphism_count() {
            return Err(Error::Invalid("functor maps have the wrong size".into()));
        }
        let objects = (0..source.object_count())
            .map(|x| target.source(morphisms[source.identity(x)]))
            .collect();
        Self::new(source, target, objects, morphisms)
    }

    pub fn identity(c: Arc<FiniteGroupoid>) -> Self {
        let objects = (0..c.object_count()).collect();
        let morphisms = (0..c.morphism_count()).collect();
        Self::new_unchecked(c.clone(), c, objects, morphisms)
    }

    /// The unique functor to the point.
    pub fn to_point(c: Arc<FiniteGroupoid>) -> Self {
        let objects = vec![0; c.object_count()];
        let morphisms = vec![0; c.morphism_count()];
        Self::new_unchecked(c, Arc::new(FiniteGroupoid::point()), objects, morphisms)
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.target
    }

    pub fn on_object(&self, x: usize) -> usize {
        self.objects[x]
    }

    pub fn on_morphism(&self, f: usize) -> usize {
        self.morphisms[f]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.objects
    }

    pub fn morphism_map(&self) -> &[usize] {
        &self.morphisms
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupoidFunctor) -> Result<GroupoidFunctor> {
        if !Arc::ptr_eq(&self.target, &next.source) && *self.target != *next.source {
            return Err(Error::Invalid("functors are not composable".into()));
        }
        Ok(Self::new_unchecked(
            self.source.clone(),
            next.target.clone(),
            self.objects.iter().map(|&x| next.objects[x]).collect(),
            self.morphisms.iter().map(|&f| next.morphisms[f]).collect(),
        ))
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = vec![false; self.target.object_count()];
        self.objects.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// Map of components `pi0(C) → pi0(D)`.
    pub fn pi0_map(&self) -> Vec<usize> {
        let src = self.source.pi0();
        let tgt = self.target.component_labels();
        src.iter().map(|comp| tgt[self.objects[comp[0]]]).collect()
    }

    pub fn is_fully_faithful(&self) -> bool {
        let (c, d) = (&self.source, &self.target);
        for x in 0..c.object_count() {
            for y in 0..c.object_count() {
                let image = d.hom(self.objects[x], self.objects[y]);
                let hom = c.hom(x, y);
                if hom.len() != image.len() {
                    return false;
                }
                let mut hit = vec![false; d.morphism_count()];
                for &f in hom {
                    if std::mem::replace(&mut hit[self.morphisms[f]], true) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_essentially_surjective(&self) -> bool {
        let labels = self.target.component_labels();
        let mut hit = vec![false; self.target.pi0().len()];
        for &y in &self.objects {
            hit[labels[y]] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Fully faithful and essentially surjective.
    pub fn is_weak_equivalence(&self) -> bool {
        self.is_fully_faithful() && self.is_essentially_surjective()
    }

    /// Cofibrations are the functors injective on objects.
    pub fn is_cofibration(&self) -> bool {
        self.is_injective_on_objects()
    }

    /// Right lifting property against both inclusions `[0] → I[1]`: every
    /// morphism out of (or into) an image object lifts to the source.
    pub fn is_isofibration(&self) -> bool {
        let (c, d) = (&self.source, &self.target);
        for x in 0..c.object_count() {
            let fx = self.objects[x];
            let mut out_lifts = vec![false; d.morphism_count()];
            let mut in_lifts = vec![false; d.morphism_count()];
            for y in 0..c.object_count() {
                for &a in c.hom(x, y) {
                    out_lifts[self.morphisms[a]] = true;
                }
                for &a in c.hom(y, x) {
                    in_lifts[self.morphisms[a]] = true;
                }
            }
            for z in 0..d.object_count() {
                if d.hom(fx, z).iter().any(|&b| !out_lifts[b]) || d.hom(z, fx).iter().any(|&b| !in_lifts[b]) {
                    return false;
                }
            }
        }
        true
    }
}

/// A natural transformation `F ⇒ G`: one component `F(x) → G(x)` per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalTransformation {
    pub components: Vec<usize>,
}

impl NaturalTransformation {
    /// Checks `h(y) ∘ F(a) = G(a) ∘ h(x)` for every `a: x → y`.
    pub fn is_valid(&self, f: &GroupoidFunctor, g: &GroupoidFunctor) -> bool {
        let (c, d) = (&f.source, &f.target);
        if self.components.len() != c.object_count() {
            return false;
        }
        for x in 0..c.object_count() {
            let h = self.components[x];
            if h >= d.morphism_count() || d.source(h) != f.objects[x] || d.target(h) != g.objects[x] {
                return false;
            }
        }
        (0..c.morphism_count()).all(|a| {
            let (x, y) = (c.source(a), c.target(a));
            d.comp(self.components[y], f.morphisms[a]) == d.comp(g.morphisms[a], self.components[x])
        })
    }
}

/// For every object, its component root and a chosen morphism `root → x`.
fn spanning_morphisms(c: &FiniteGroupoid) -> Vec<(usize, usize)> {
    let mut out = vec![(0, 0); c.object_count()];
    for comp in c.pi0() {
        let r = comp[0];
        for &x in &comp {
            out[x] = (r, c.hom(r, x)[0]);
        }
    }
    out
}

/// Searches for a natural transformation `F ⇒ G`. The component at each
/// root determines all others along the chosen spanning morphisms.
pub fn homotopic(f: &GroupoidFunctor, g: &GroupoidFunctor) -> Option<NaturalTransformation> {
    let (c, d) = (&f.source, &f.target);
    let span = spanning_morphisms(c);
    let mut components = vec![usize::MAX; c.object_count()];
    for comp in c.pi0() {
        let r = comp[0];
        let found = d.hom(f.objects[r], g.objects[r]).iter().copied().find(|&hr| {
            for &x in &comp {
                // h(x) = G(t_x) ∘ h(r) ∘ F(t_x)⁻¹
                let t = span[x].1;
                components[x] = d.comp(d.comp(g.morphisms[t], hr), d.inverse(f.morphisms[t]));
            }
            comp.iter().all(|&x| {
                comp.iter().all(|&y| {
                    c.hom(x, y).iter().all(|&a| {
                        d.comp(components[y], f.morphisms[a]) == d.comp(g.morphisms[a], components[x])
                    })
                })
            })
        });
        found?;
    }
    Some(NaturalTransformation { components })
}

/// Extends generator images to a homomorphism between vertex groups.
/// Returns the full map (indexed by source morphism) if it is well defined.
fn extend_vertex_hom(
    c: &FiniteGroupoid,
    d: &FiniteGroupoid,
    r: usize,
    dr: usize,
    gens: &[usize],
    images: &[usize],
) -> Option<HashMap<usize, usize>> {
    let mut map = HashMap::new();
    map.insert(c.identity(r), d.identity(dr));
    let mut queue = vec![c.identity(r)];
    while let Some(a) = queue.pop() {
        let fa = map[&a];
        for (&g, &fg) in gens.iter().zip(images) {
            let b = c.comp(g, a);
            let fb = d.comp(fg, fa);
            match map.get(&b) {
                Some(&prev) if prev != fb => return None,
                Some(_) => {}
                None => {
                    map.insert(b, fb);
                    queue.push(b);
                }
            }
        }
    }
    Some(map)
}

/// Greedy generating set of the vertex group at `x`.
fn vertex_generators(c: &FiniteGroupoid, x: usize) -> Vec<usize> {
    let group = c.vertex_group(x);
    let mut gens = Vec::new();
    let mut reached = vec![c.identity(x)];
    for &g in group {
        if reached.contains(&g) {
            continue;
        }
        gens.push(g);
        reached = vec![c.identity(x)];
        let mut k = 0;
        while k < reached.len() {
            let a = reached[k];
            for &h in &gens {
                let b = c.comp(h, a);
                if !reached.contains(&b) {
                    reached.push(b);
                }
            }
            k += 1;
        }
    }
    gens
}

/// All functors from one connected component of `c` into `d`, each given
/// as `(object images, morphism images)` restricted to that component
/// (entries outside it are `usize::MAX`).
pub fn component_functors(c: &FiniteGroupoid, d: &FiniteGroupoid, component: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let r = component[0];
    let gens = vertex_generators(c, r);
    let span: Vec<usize> = component.iter().map(|&x| c.hom(r, x)[0]).collect();
    let others: Vec<usize> = (1..component.len()).collect();
    let mut out = Vec::new();
    for dr in 0..d.object_count() {
        let aut = d.vertex_group(dr);
        let outgoing: Vec<usize> = (0..d.object_count()).flat_map(|z| d.hom(dr, z).iter().copied()).collect();
        // enumerate vertex homomorphisms
        let mut homs = Vec::new();
        for_each_tuple(aut.len(), gens.len(), |choice| {
            let images: Vec<usize> = choice.iter().map(|&k| aut[k]).collect();
            if let Some(map) = extend_vertex_hom(c, d, r, dr, &gens, &images) {
                homs.push(map);
            }
        });
        for rho in &homs {
            for_each_tuple(outgoing.len(), others.len(), |choice| {
                let mut tree = vec![d.identity(dr); component.len()];
                for (&k, &pos) in choice.iter().zip(&others) {
                    tree[pos] = outgoing[k];
                }
                let mut objects = vec![usize::MAX; c.object_count()];
                let mut morphisms = vec![usize::MAX; c.morphism_count()];
                for (px, &x) in component.iter().enumerate() {
                    objects[x] = d.target(tree[px]);
                }
                for (px, &x) in component.iter().enumerate() {
                    for (py, &y) in component.iter().enumerate() {
                        for &a in c.hom(x, y) {
                            // a = t_y ∘ (t_y⁻¹ ∘ a ∘ t_x) ∘ t_x⁻¹
                            let loop_ = c.comp(c.inverse(span[py]), c.comp(a, span[px]));
                            morphisms[a] = d.comp(d.comp(tree[py], rho[&loop_]), d.inverse(tree[px]));
                        }
                    }
                }
                out.push((objects, morphisms));
            });
        }
    }
    out
}

/// Calls `f` with every tuple in `0..base` of length `len`.
pub(crate) fn for_each_tuple(base: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if len > 0 && base == 0 {
        return;
    }
    let mut t = vec![0; len];
    loop {
        f(&t);
        let mut k = 0;
        loop {
            if k == len {
                return;
            }
            t[k] += 1;
            if t[k] < base {
                break;
            }
            t[k] = 0;
            k += 1;
        }
    }
}

/// Every functor `c → d`.
pub fn functors(c: &Arc<FiniteGroupoid>, d: &Arc<FiniteGroupoid>) -> Vec<GroupoidFunctor> {
    let per_component: Vec<Vec<(Vec<usize>, Vec<usize>)>> =
        c.pi0().iter().map(|comp| component_functors(c, d, comp)).collect();
    let mut out = Vec::new();
    let sizes: Vec<usize> = per_component.iter().map(Vec::len).collect();
    if sizes.contains(&0) {
        return out;
    }
    let mut idx = vec![0; sizes.len()];
    loop {
        let mut objects = vec![0; c.object_count()];
        let mut morphisms = vec![0; c.morphism_count()];
        for (k, &i) in idx.iter().enumerate() {
            let (o, m) = &per_component[k][i];
            for (x, &y) in o.iter().enumerate() {
                if y != usize::MAX {
                    objects[x] = y;
                }
            }
            for (a, &b) in m.iter().enumerate() {
                if b != usize::MAX {
                    morphisms[a] = b;
                }
            }
        }
        out.push(GroupoidFunctor::new_unchecked(c.clone(), d.clone(), objects, morphisms));
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Whether some functor `g: d → c` has both composites homotopic to the
/// identities.
pub fn has_homotopy_inverse(f: &GroupoidFunctor) -> bool {
    let id_c = GroupoidFunctor::identity(f.source.clone());
    let id_d = GroupoidFunctor::identity(f.target.clone());
    functors(&f.target, &f.source).iter().any(|g| {
        let gf = f.then(g).expect("composable");
        let fg = g.then(f).expect("composable");
        homotopic(&gf, &id_c).is_some() && homotopic(&fg, &id_d).is_some()
    })
}

/// The groupoid of functors `I[1] → C` with its two evaluation functors.
#[derive(Debug, Clone)]
pub struct ArrowGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    pub ev0: GroupoidFunctor,
    pub ev1: GroupoidFunctor,
}

/// Objects are the morphisms `a` of `C`; a morphism `a → a'` is a pair
/// `(φ0, φ1)` with `φ1 ∘ a = a' ∘ φ0`.
pub fn arrow_groupoid(c: &Arc<FiniteGroupoid>) -> ArrowGroupoid {
    let m = c.morphism_count();
    let objects: Vec<String> = c.morphisms.iter().map(|d| d.name.clone()).collect();
    // morphism data: (a, a', φ0, φ1)
    let mut data = Vec::new();
    let mut morphs = Vec::new();
    for a in 0..m {
        for a2 in 0..m {
            for &phi0 in c.hom(c.source(a), c.source(a2)) {
                let phi1 = c.comp(c.comp(a2, phi0), c.inverse(a));
                morphs.push((
                    format!("[{}|{}]:{}", c.morphism(phi0).name, c.morphism(phi1).name, a),
                    a,
                    a2,
                ));
                data.push((phi0, phi1));
            }
        }
    }
    let lookup: HashMap<(usize, usize, usize), usize> =
        (0..data.len()).map(|k| ((morphs[k].1, data[k].0, data[k].1), k)).collect();
    let groupoid = FiniteGroupoid::build(objects, morphs.clone(), |g, f| {
        let (p0, p1) = (c.comp(data[g].0, data[f].0), c.comp(data[g].1, data[f].1));
        lookup.get(&(morphs[f].1, p0, p1)).copied()
    })
    .expect("arrow groupoid");
    let groupoid = Arc::new(groupoid);
    let ev0 = GroupoidFunctor::new_unchecked(
        groupoid.clone(),
        c.clone(),
        (0..m).map(|a| c.source(a)).collect(),
        data.iter().map(|d| d.0).collect(),
    );
    let ev1 = GroupoidFunctor::new_unchecked(
        groupoid.clone(),
        c.clone(),
        (0..m).map(|a| c.target(a)).collect(),
        data.iter().map(|d| d.1).collect(),
    );
    ArrowGroupoid { groupoid, ev0, ev1 }
}

/// Functors that realize the standard maps used in the test corpora.
pub mod maps {
    use super::*;

    /// `G[S] → *//G`, the projection to the first factor.
    pub fn g_of_s_projection(group: &FiniteGroup, s: usize) -> GroupoidFunctor {
        let src = Arc::new(FiniteGroupoid::g_of_s(group, s));
        let tgt = Arc::new(FiniteGroupoid::one_object(group));
        let md = s * s;
        let morphisms = (0..src.morphism_count()).map(|f| f / md).collect();
        GroupoidFunctor::new(src.clone(), tgt, vec![0; src.object_count()], morphisms).expect("projection")
    }

    /// The functor `*//H → *//G` of a group homomorphism given on elements.
    pub fn from_group_hom(h: &FiniteGroup, g: &FiniteGroup, map: &[usize]) -> Result<GroupoidFunctor> {
        GroupoidFunctor::new(
            Arc::new(FiniteGroupoid::one_object(h)),
            Arc::new(FiniteGroupoid::one_object(g)),
            vec![0],
            map.to_vec(),
        )
    }

    /// Inclusion of the object `x` as a one-object discrete groupoid.
    pub fn object_inclusion(c: &Arc<FiniteGroupoid>, x: usize) -> GroupoidFunctor {
        GroupoidFunctor::new(Arc::new(FiniteGroupoid::point()), c.clone(), vec![x], vec![c.identity(x)])
            .expect("object inclusion")
    }

    /// Inclusions of the two summands into a coproduct.
    pub fn coproduct_inclusions(c: &Arc<FiniteGroupoid>, d: &Arc<FiniteGroupoid>) -> (GroupoidFunctor, GroupoidFunctor) {
        let sum = Arc::new(FiniteGroupoid::coproduct(c, d));
        let (nc, mc) = (c.object_count(), c.morphism_count());
        let left = GroupoidFunctor::new(
            c.clone(),
            sum.clone(),
            (0..nc).collect(),
            (0..mc).collect(),
        )
        .expect("left inclusion");
        let right = GroupoidFunctor::new(
            d.clone(),
            sum,
            (nc..nc + d.object_count()).collect(),
            (mc..mc + d.morphism_count()).collect(),
        )
        .expect("right inclusion");
        (left, right)
    }

    /// The fold map `C ⊔ C → C`.
    pub fn fold(c: &Arc<FiniteGroupoid>) -> GroupoidFunctor {
        let sum = Arc::new(FiniteGroupoid::coproduct(c, c));
        let (nc, mc) = (c.object_count(), c.morphism_count());
        GroupoidFunctor::new(
            sum,
            c.clone(),
            (0..2 * nc).map(|x| x % nc).collect(),
            (0..2 * mc).map(|f| f % mc).collect(),
        )
        .expect("fold map")
    }

    /// The diagonal `C → C × C`.
    pub fn diagonal(c: &Arc<FiniteGroupoid>) -> GroupoidFunctor {
        let prod = Arc::new(FiniteGroupoid::product(c, c));
        let (nc, mc) = (c.object_count(), c.morphism_count());
        GroupoidFunctor::new(
            c.clone(),
            prod,
            (0..nc).map(|x| x * nc + x).collect(),
            (0..mc).map(|f| f * mc + f).collect(),
        )
        .expect("diagonal")
    }
}
