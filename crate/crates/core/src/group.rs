//! Abstract groups and finite multiplication-table groups.
//!
//! Everything that evaluates a word (free-group substitution, braid images,
//! finite quotients, truncated Magnus series) goes through [`Group`], so the
//! same evaluation code serves exact and finite targets.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::braid::Permutation;
use crate::error::{Error, Result};

/// A group given by its operations. Elements are plain values; the group
/// value carries whatever context the operations need (rank, strand count,
/// multiplication table, modulus).
pub trait Group {
    type Elem: Clone + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Equality of group elements (semantic, not representational).
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn pow(&self, a: &Self::Elem, exp: i64) -> Self::Elem {
        let base = if exp < 0 { self.inv(a) } else { a.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        self.eq(a, &self.identity())
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ai = self.inv(a);
        let bi = self.inv(b);
        self.mul(&self.mul(&ab, &ai), &bi)
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.identity(), |acc, x| self.mul(&acc, x))
    }
}

/// A finite group stored as a full multiplication table. Element 0 is the
/// identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Builds a group from a table, auditing the group axioms.
    pub fn from_table(name: impl Into<String>, order: usize, table: Vec<usize>) -> Result<Self> {
        let name = name.into();
        if order == 0 || table.len() != order * order {
            return Err(Error::Invalid(format!("{name}: table has wrong size")));
        }
        if table.iter().any(|&x| x >= order) {
            return Err(Error::Invalid(format!("{name}: table entry out of range")));
        }
        for a in 0..order {
            if table[a] != a || table[a * order] != a {
                return Err(Error::Invalid(format!("{name}: element 0 is not the identity")));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    let l = table[table[a * order + b] * order + c];
                    let r = table[a * order + table[b * order + c]];
                    if l != r {
                        return Err(Error::Invalid(format!("{name}: not associative")));
                    }
                }
            }
        }
        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 && table[b * order + a] == 0 {
                    inverses[a] = b;
                    break;
                }
            }
            if inverses[a] == usize::MAX {
                return Err(Error::Invalid(format!("{name}: element {a} has no inverse")));
            }
        }
        Ok(Self {
            name,
            order,
            table,
            inverses,
        })
    }

    /// Closure of a set of permutations under composition, as a table group.
    /// Elements are ordered by breadth-first discovery from the identity.
    pub fn from_permutations(name: impl Into<String>, generators: &[Permutation]) -> Result<Self> {
        let degree = generators.first().map(|g| g.size()).unwrap_or(1);
        let id = Permutation::identity(degree);
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Permutation, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = elems[i].compose(g)?;
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&elems[a].compose(&elems[b])?];
            }
        }
        Self::from_table(name, n, table)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self::from_table(format!("C{n}"), n, table).expect("cyclic group table")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (p, q) = (a.order, b.order);
        let n = p * q;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (x1, x2) = (x / q, x % q);
                let (y1, y2) = (y / q, y % q);
                table[x * n + y] = a.op(x1, y1) * q + b.op(x2, y2);
            }
        }
        Self::from_table(format!("{}x{}", a.name, b.name), n, table).expect("product table")
    }

    pub fn symmetric(n: usize) -> Self {
        if n <= 1 {
            let mut g = Self::trivial();
            g.name = format!("S{n}");
            return g;
        }
        let mut gens = vec![Permutation::transposition(n, 1, 2)];
        if n > 2 {
            gens.push(Permutation::cycle(n));
        }
        Self::from_permutations(format!("S{n}"), &gens).expect("symmetric group")
    }

    /// Dihedral group of order 2n acting on an n-gon.
    pub fn dihedral(n: usize) -> Self {
        let rotation = Permutation::cycle(n);
        let reflection = Permutation::from_images((1..=n).map(|k| (n + 1 - k) % n + 1).collect())
            .expect("reflection");
        Self::from_permutations(format!("D{}", 2 * n), &[rotation, reflection]).expect("dihedral")
    }

    pub fn quaternion() -> Self {
        // Units ±1, ±i, ±j, ±k encoded as sign * 4 + unit with unit 0..4 = 1,i,j,k.
        let unit_mul = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 1) => (true, 3),
                (2, 3) => (false, 1),
                (3, 2) => (true, 1),
                (3, 1) => (false, 2),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let mut table = vec![0; 64];
        for x in 0..8 {
            for y in 0..8 {
                let (sx, ux) = (x / 4, x % 4);
                let (sy, uy) = (y / 4, y % 4);
                let (neg, u) = unit_mul(ux, uy);
                let sign = (sx + sy + usize::from(neg)) % 2;
                table[x * 8 + y] = sign * 4 + u;
            }
        }
        Self::from_table("Q8", 8, table).expect("quaternion table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    /// A small generating set found greedily.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[0] = true;
        for candidate in 1..self.order {
            if span[candidate] {
                continue;
            }
            gens.push(candidate);
            span = self.subgroup_mask(&gens);
            if span.iter().all(|&b| b) {
                break;
            }
        }
        gens
    }

    pub fn subgroup_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.op(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        mask
    }
}

impl Group for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.op(*a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        self.inverse(*a)
    }

    fn eq(&self, a: &usize, b: &usize) -> bool {
        a == b
    }
}

/// Named selections of finite groups used for coefficient sweeps and
/// quotient certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Catalog {
    /// Groups of order at most 6.
    Small,
    /// Groups of order at most 8.
    UpToEight,
    /// Groups of order at most 8 plus symmetric and dihedral groups up to
    /// order 12.
    Default,
}

impl Catalog {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Catalog::Small),
            "order8" | "up-to-eight" => Ok(Catalog::UpToEight),
            "default" => Ok(Catalog::Default),
            other => Err(Error::Invalid(format!("unknown catalog `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Catalog::Small => "small",
            Catalog::UpToEight => "order8",
            Catalog::Default => "default",
        }
    }

    pub fn groups(&self) -> Vec<FiniteGroup> {
        let c2 = FiniteGroup::cyclic(2);
        let c4 = FiniteGroup::cyclic(4);
        let mut v4 = FiniteGroup::direct_product(&c2, &c2);
        v4.name = "V4".into();
        let mut groups = vec![
            FiniteGroup::trivial(),
            c2.clone(),
            FiniteGroup::cyclic(3),
            c4.clone(),
            v4.clone(),
            FiniteGroup::cyclic(5),
            FiniteGroup::cyclic(6),
            FiniteGroup::symmetric(3),
        ];
        if *self == Catalog::Small {
            return groups;
        }
        let mut c2c4 = FiniteGroup::direct_product(&c2, &c4);
        c2c4.name = "C2xC4".into();
        let mut c2cube = FiniteGroup::direct_product(&v4, &c2);
        c2cube.name = "C2^3".into();
        groups.extend([
            FiniteGroup::cyclic(7),
            FiniteGroup::cyclic(8),
            c2c4,
            c2cube,
            FiniteGroup::dihedral(4),
            FiniteGroup::quaternion(),
        ]);
        if *self == Catalog::UpToEight {
            return groups;
        }
        groups.extend([FiniteGroup::dihedral(5), FiniteGroup::dihedral(6)]);
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        let orders: Vec<usize> = Catalog::Default.groups().iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8, 10, 12]);
        assert!(Catalog::Small.groups().iter().all(|g| g.order() <= 6));
    }

    #[test]
    fn nonabelian_members() {
        let names: Vec<String> = Catalog::Default
            .groups()
            .iter()
            .filter(|g| !g.is_abelian())
            .map(|g| g.name().to_string())
            .collect();
        assert_eq!(names, vec!["S3", "D8", "Q8", "D10", "D12"]);
    }

    #[test]
    fn quaternion_has_single_involution() {
        let q = FiniteGroup::quaternion();
        let involutions = q.elements().filter(|&a| q.element_order(a) == 2).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn generators_span() {
        for g in Catalog::Default.groups() {
            assert!(g.subgroup_mask(&g.generators()).iter().all(|&b| b), "{}", g.name());
        }
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let s3 = FiniteGroup::symmetric(3);
        for a in s3.elements() {
            let mut acc = 0;
            for k in 0..7i64 {
                assert_eq!(s3.pow(&a, k), acc);
                assert_eq!(s3.pow(&a, -k), s3.inverse(acc));
                acc = s3.op(acc, a);
            }
        }
    }
}
