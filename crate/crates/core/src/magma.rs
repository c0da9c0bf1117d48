//! Non-associative monomials and the operads of associative monoids,
//! unital magmas and based magmas, with the maps `z: UM → A`, `u: BM → UM`
//! and the section `s: UM → BM`.

use std::fmt;

use crate::braid::Permutation;
use crate::error::{Error, Result};
use crate::operad::SetOperad;

/// A full binary tree whose leaves are letters or the basepoint `⋆`.
/// `Empty` is the empty monomial, only meaningful as a whole tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    Empty,
    Star,
    Leaf(usize),
    Node(Box<Monomial>, Box<Monomial>),
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Empty => f.write_str("()"),
            Monomial::Star => f.write_str("*"),
            Monomial::Leaf(l) => write!(f, "{l}"),
            Monomial::Node(a, b) => write!(f, "({a} {b})"),
        }
    }
}

impl Monomial {
    pub fn node(a: Monomial, b: Monomial) -> Self {
        Monomial::Node(Box::new(a), Box::new(b))
    }

    /// Number of letter leaves.
    pub fn arity(&self) -> usize {
        match self {
            Monomial::Empty | Monomial::Star => 0,
            Monomial::Leaf(_) => 1,
            Monomial::Node(a, b) => a.arity() + b.arity(),
        }
    }

    pub fn star_count(&self) -> usize {
        match self {
            Monomial::Star => 1,
            Monomial::Empty | Monomial::Leaf(_) => 0,
            Monomial::Node(a, b) => a.star_count() + b.star_count(),
        }
    }

    /// Letters in left-to-right order.
    pub fn letters(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut Vec<usize>) {
        match self {
            Monomial::Leaf(l) => out.push(*l),
            Monomial::Node(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
            _ => {}
        }
    }

    fn contains_empty_subtree(&self) -> bool {
        match self {
            Monomial::Empty => true,
            Monomial::Node(a, b) => a.contains_empty_subtree() || b.contains_empty_subtree(),
            _ => false,
        }
    }

    fn has_letters_one_to_n(&self) -> bool {
        let mut l = self.letters();
        l.sort_unstable();
        l.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// Whether this is an element of `UM(n)`: no `⋆`, `∅` only as the whole
    /// tree, letters exactly `1..=n`.
    pub fn is_unital_magma_element(&self) -> bool {
        match self {
            Monomial::Empty => true,
            _ => self.star_count() == 0 && !self.contains_empty_subtree() && self.has_letters_one_to_n(),
        }
    }

    /// Whether this is an element of `BM(n)`: non-empty, no `∅`, letters
    /// exactly `1..=n`.
    pub fn is_based_magma_element(&self) -> bool {
        !self.contains_empty_subtree() && self.has_letters_one_to_n()
    }

    /// Relabels every letter through `f`.
    pub fn relabel(&self, f: &impl Fn(usize) -> usize) -> Monomial {
        match self {
            Monomial::Leaf(l) => Monomial::Leaf(f(*l)),
            Monomial::Node(a, b) => Monomial::node(a.relabel(f), b.relabel(f)),
            other => other.clone(),
        }
    }

    /// Grafts `q` at the leaf labeled `i`, shifting letters order-preservingly.
    pub fn graft(&self, i: usize, q: &Monomial) -> Result<Monomial> {
        let n = self.arity();
        if i == 0 || i > n {
            return Err(Error::CompositionIndex { index: i, arity: n });
        }
        let m = q.arity();
        let shifted_q = q.relabel(&|l| l + i - 1);
        Ok(self.graft_inner(i, m, &shifted_q))
    }

    fn graft_inner(&self, i: usize, m: usize, q: &Monomial) -> Monomial {
        match self {
            Monomial::Leaf(l) if *l == i => q.clone(),
            Monomial::Leaf(l) if *l > i => Monomial::Leaf(l + m - 1),
            Monomial::Node(a, b) => Monomial::node(a.graft_inner(i, m, q), b.graft_inner(i, m, q)),
            other => other.clone(),
        }
    }

    /// The left-right mirror image of the tree, letters unchanged.
    pub fn mirror(&self) -> Monomial {
        match self {
            Monomial::Node(a, b) => Monomial::node(b.mirror(), a.mirror()),
            other => other.clone(),
        }
    }

    /// Relabels the letters order-preservingly onto `1..=k`; returns the
    /// standardized tree and the original letters in increasing order.
    pub fn standardize(&self) -> (Monomial, Vec<usize>) {
        let mut letters = self.letters();
        letters.sort_unstable();
        let std = self.relabel(&|l| letters.binary_search(&l).expect("letter present") + 1);
        (std, letters)
    }

    /// Removes `∅` subtrees by collapsing the brackets that held them.
    pub fn collapse_empty(&self) -> Monomial {
        match self {
            Monomial::Node(a, b) => match (a.collapse_empty(), b.collapse_empty()) {
                (Monomial::Empty, x) | (x, Monomial::Empty) => x,
                (x, y) => Monomial::node(x, y),
            },
            other => other.clone(),
        }
    }

    /// Parses the s-expression form `((2 *) (1 (3 *)))`; `()` is `∅`.
    pub fn parse(text: &str) -> Result<Monomial> {
        Self::parse_line(text, 1)
    }

    pub(crate) fn parse_line(text: &str, line: usize) -> Result<Monomial> {
        let mut p = MonomialParser {
            chars: text.char_indices().collect(),
            pos: 0,
            line,
        };
        let m = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(m)
    }
}

struct MonomialParser {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
}

impl MonomialParser {
    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, msg: &str) -> Error {
        Error::parse(self.line, self.column(), msg)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Monomial> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Monomial::Empty);
                }
                let a = self.expr()?;
                let b = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)` after two subterms"));
                }
                self.pos += 1;
                Ok(Monomial::node(a, b))
            }
            Some('*') | Some('⋆') => {
                self.pos += 1;
                Ok(Monomial::Star)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                let v: usize = s.parse().map_err(|_| self.error("letter out of range"))?;
                if v == 0 {
                    self.pos = start;
                    return Err(self.error("letters start at 1"));
                }
                Ok(Monomial::Leaf(v))
            }
            Some(_) => Err(self.error("expected `(`, `*` or a letter")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// All full binary trees with `k` leaves, leaves left as placeholders
/// numbered `0..k` in order.
fn shapes(k: usize) -> Vec<Monomial> {
    if k == 1 {
        return vec![Monomial::Leaf(0)];
    }
    let mut out = Vec::new();
    for left in 1..k {
        let ls = shapes(left);
        let rs = shapes(k - left);
        for l in &ls {
            for r in &rs {
                out.push(Monomial::node(l.clone(), r.relabel(&|x| x + left)));
            }
        }
    }
    out
}

/// Fills the placeholder leaves of `shape` with `fill[k]`.
fn fill(shape: &Monomial, fill: &[Monomial]) -> Monomial {
    match shape {
        Monomial::Leaf(k) => fill[*k].clone(),
        Monomial::Node(a, b) => Monomial::node(self::fill(a, fill), self::fill(b, fill)),
        other => other.clone(),
    }
}

/// Every arrangement of the letters `1..=n` and `stars` basepoints, up to
/// permuting the basepoints among themselves.
fn leaf_arrangements(n: usize, stars: usize) -> Vec<Vec<Monomial>> {
    let k = n + stars;
    let mut out = Vec::new();
    // choose star positions, then order letters
    let letter_orders = Permutation::all(n);
    for mask in 0u32..(1u32 << k) {
        if mask.count_ones() as usize != stars {
            continue;
        }
        for order in &letter_orders {
            let mut next = 0;
            let leaves = (0..k)
                .map(|pos| {
                    if mask & (1 << pos) != 0 {
                        Monomial::Star
                    } else {
                        next += 1;
                        Monomial::Leaf(order.apply(next))
                    }
                })
                .collect();
            out.push(leaves);
        }
    }
    out
}

/// All `⋆`-free monomials on `1..=n`; `UM(0) = {∅}`.
pub fn enumerate_um(n: usize) -> Vec<Monomial> {
    if n == 0 {
        return vec![Monomial::Empty];
    }
    enumerate_trees(n, 0)
}

/// Monomials on `1..=n` with at most `star_budget` basepoints.
pub fn enumerate_bm(n: usize, star_budget: usize) -> Vec<Monomial> {
    (0..=star_budget)
        .filter(|&s| n + s > 0)
        .flat_map(|s| enumerate_trees(n, s))
        .collect()
}

/// Size of the part of arity `n` with `k` basepoints in the operad freely
/// generated by one binary operation (free `Σ₂`-orbit) and one constant:
/// `Catalan(n + k - 1) · (n + k)! / k!`.
pub fn free_bm_count(n: usize, k: usize) -> u128 {
    let leaves = n + k;
    if leaves == 0 {
        return 0;
    }
    let catalan = (0..leaves - 1).fold(1u128, |c, i| c * 2 * (2 * i as u128 + 1) / (i as u128 + 2));
    let arrangements: u128 = (k as u128 + 1..=leaves as u128).product();
    catalan * arrangements
}

/// For every `n ≤ max_arity` and `k ≤ star_budget`: the number of distinct
/// enumerated based monomials against [`free_bm_count`].
pub fn bm_freeness_table(max_arity: usize, star_budget: usize) -> Vec<(usize, usize, usize, u128)> {
    let mut out = Vec::new();
    for n in 0..=max_arity {
        for k in 0..=star_budget {
            let distinct = if n + k == 0 {
                0
            } else {
                enumerate_trees(n, k).into_iter().collect::<std::collections::HashSet<_>>().len()
            };
            out.push((n, k, distinct, free_bm_count(n, k)));
        }
    }
    out
}

fn enumerate_trees(n: usize, stars: usize) -> Vec<Monomial> {
    let shapes = shapes(n + stars);
    let mut out = Vec::new();
    for shape in &shapes {
        for leaves in leaf_arrangements(n, stars) {
            out.push(fill(shape, &leaves));
        }
    }
    out
}

/// The associative operad: `A(n)` is the set of orderings of `1..=n`,
/// stored as the permutation whose list of images is the ordering.
#[derive(Debug, Clone, Copy, Default)]
pub struct AssocOperad;

impl SetOperad for AssocOperad {
    type Elem = Permutation;

    fn name(&self) -> &'static str {
        "A"
    }

    fn arity(&self, p: &Permutation) -> usize {
        p.size()
    }

    fn unit(&self) -> Permutation {
        Permutation::identity(1)
    }

    fn compose(&self, p: &Permutation, i: usize, q: &Permutation) -> Result<Permutation> {
        let n = p.size();
        if i == 0 || i > n {
            return Err(Error::CompositionIndex { index: i, arity: n });
        }
        let m = q.size();
        let mut images = Vec::with_capacity(n + m - 1);
        for &v in p.images() {
            if v == i {
                images.extend(q.images().iter().map(|&w| w + i - 1));
            } else if v > i {
                images.push(v + m - 1);
            } else {
                images.push(v);
            }
        }
        Permutation::from_images(images)
    }

    fn act(&self, p: &Permutation, sigma: &Permutation) -> Result<Permutation> {
        sigma.inverse().compose(p)
    }

    fn elements(&self, n: usize) -> Vec<Permutation> {
        Permutation::all(n)
    }
}

fn check_action_size(arity: usize, sigma: &Permutation) -> Result<()> {
    if sigma.size() != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            got: sigma.size(),
        });
    }
    Ok(())
}

fn act_on_monomial(p: &Monomial, sigma: &Permutation) -> Result<Monomial> {
    check_action_size(p.arity(), sigma)?;
    let inv = sigma.inverse();
    Ok(p.relabel(&|l| inv.apply(l)))
}

/// The operad of unital magmas.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitalMagmaOperad;

impl SetOperad for UnitalMagmaOperad {
    type Elem = Monomial;

    fn name(&self) -> &'static str {
        "UM"
    }

    fn arity(&self, p: &Monomial) -> usize {
        p.arity()
    }

    fn unit(&self) -> Monomial {
        Monomial::Leaf(1)
    }

    fn compose(&self, p: &Monomial, i: usize, q: &Monomial) -> Result<Monomial> {
        Ok(p.graft(i, q)?.collapse_empty())
    }

    fn act(&self, p: &Monomial, sigma: &Permutation) -> Result<Monomial> {
        act_on_monomial(p, sigma)
    }

    fn elements(&self, n: usize) -> Vec<Monomial> {
        enumerate_um(n)
    }
}

/// The operad of based magmas, freely generated by a binary operation and
/// a constant `⋆`. Its levels are infinite, so [`SetOperad::elements`]
/// returns the monomials with at most `star_budget` basepoints.
#[derive(Debug, Clone, Copy)]
pub struct BasedMagmaOperad {
    pub star_budget: usize,
}

impl Default for BasedMagmaOperad {
    fn default() -> Self {
        Self { star_budget: 2 }
    }
}

impl SetOperad for BasedMagmaOperad {
    type Elem = Monomial;

    fn name(&self) -> &'static str {
        "BM"
    }

    fn arity(&self, p: &Monomial) -> usize {
        p.arity()
    }

    fn unit(&self) -> Monomial {
        Monomial::Leaf(1)
    }

    fn compose(&self, p: &Monomial, i: usize, q: &Monomial) -> Result<Monomial> {
        p.graft(i, q)
    }

    fn act(&self, p: &Monomial, sigma: &Permutation) -> Result<Monomial> {
        act_on_monomial(p, sigma)
    }

    fn elements(&self, n: usize) -> Vec<Monomial> {
        enumerate_bm(n, self.star_budget)
    }
}

/// `u: BM → UM`: drop every `⋆` and the brackets left redundant.
pub fn map_u(b: &Monomial) -> Result<Monomial> {
    if !b.is_based_magma_element() {
        return Err(Error::Invalid(format!("{b} is not a based magma monomial")));
    }
    Ok(strip_stars(b).collapse_empty())
}

fn strip_stars(b: &Monomial) -> Monomial {
    match b {
        Monomial::Star => Monomial::Empty,
        Monomial::Node(x, y) => Monomial::node(strip_stars(x), strip_stars(y)),
        other => other.clone(),
    }
}

/// `z: UM → A`: forget the bracketing and keep the order of the letters.
pub fn map_z(m: &Monomial) -> Result<Permutation> {
    if !m.is_unital_magma_element() {
        return Err(Error::Invalid(format!("{m} is not a unital magma monomial")));
    }
    Permutation::from_images(m.letters())
}

/// `s: UM(n) → BM(n)` for `n ≥ 1`: the same tree.
pub fn section_s(m: &Monomial) -> Result<Monomial> {
    if !m.is_unital_magma_element() {
        return Err(Error::Invalid(format!("{m} is not a unital magma monomial")));
    }
    if m.arity() == 0 {
        return Err(Error::Invalid("the section is only defined in arity at least 1".into()));
    }
    Ok(m.clone())
}

/// An element of one of the three set operads, tagged by its operad.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetOperadElement {
    A(Permutation),
    UM(Monomial),
    BM(Monomial),
}

impl SetOperadElement {
    pub fn tag(&self) -> &'static str {
        match self {
            SetOperadElement::A(_) => "A",
            SetOperadElement::UM(_) => "UM",
            SetOperadElement::BM(_) => "BM",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            SetOperadElement::A(p) => p.size(),
            SetOperadElement::UM(m) | SetOperadElement::BM(m) => m.arity(),
        }
    }

    pub fn compose(&self, i: usize, q: &SetOperadElement) -> Result<SetOperadElement> {
        match (self, q) {
            (SetOperadElement::A(p), SetOperadElement::A(q)) => {
                AssocOperad.compose(p, i, q).map(SetOperadElement::A)
            }
            (SetOperadElement::UM(p), SetOperadElement::UM(q)) => {
                UnitalMagmaOperad.compose(p, i, q).map(SetOperadElement::UM)
            }
            (SetOperadElement::BM(p), SetOperadElement::BM(q)) => {
                BasedMagmaOperad::default().compose(p, i, q).map(SetOperadElement::BM)
            }
            _ => Err(Error::TagMismatch(self.tag(), q.tag())),
        }
    }

    pub fn act(&self, sigma: &Permutation) -> Result<SetOperadElement> {
        match self {
            SetOperadElement::A(p) => AssocOperad.act(p, sigma).map(SetOperadElement::A),
            SetOperadElement::UM(m) => act_on_monomial(m, sigma).map(SetOperadElement::UM),
            SetOperadElement::BM(m) => act_on_monomial(m, sigma).map(SetOperadElement::BM),
        }
    }
}

impl fmt::Display for SetOperadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetOperadElement::A(p) => write!(f, "{p}"),
            SetOperadElement::UM(m) | SetOperadElement::BM(m) => write!(f, "{m}"),
        }
    }
}
