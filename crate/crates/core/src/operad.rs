//! Set operads and exhaustive axiom audits.

use std::fmt;

use crate::braid::Permutation;
use crate::error::Result;

/// A symmetric operad in sets, with a right action of the symmetric groups.
pub trait SetOperad {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn name(&self) -> &'static str;
    fn arity(&self, p: &Self::Elem) -> usize;
    fn unit(&self) -> Self::Elem;
    /// `p ∘_i q`.
    fn compose(&self, p: &Self::Elem, i: usize, q: &Self::Elem) -> Result<Self::Elem>;
    /// `p · σ`.
    fn act(&self, p: &Self::Elem, sigma: &Permutation) -> Result<Self::Elem>;
    /// The elements of arity `n` (possibly a truncation of an infinite set).
    fn elements(&self, n: usize) -> Vec<Self::Elem>;
}

/// The permutation `σ'` with `(p·σ) ∘_i (q·τ) = (p ∘_{σ(i)} q) · σ'`
/// when the action relabels letters through `σ⁻¹`.
pub fn equivariance_permutation(sigma: &Permutation, i: usize, tau: &Permutation) -> Permutation {
    let n = sigma.size();
    let m = tau.size();
    let si = sigma.apply(i);
    let sigma_inv = sigma.inverse();
    let tau_inv = tau.inverse();
    let shift = |v: usize| if v < i { v } else { v + m - 1 };
    let total = n + m - 1;
    // images of σ'⁻¹
    let mut inv = Vec::with_capacity(total);
    for y in 1..=total {
        let v = if y < si {
            shift(sigma_inv.apply(y))
        } else if y >= si + m {
            shift(sigma_inv.apply(y + 1 - m))
        } else {
            i - 1 + tau_inv.apply(y + 1 - si)
        };
        inv.push(v);
    }
    Permutation::from_images(inv)
        .expect("block relabeling is a bijection")
        .inverse()
}

/// Counts of checked instances and the first failure found, per axiom.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub checks: Vec<AxiomCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: String,
    pub instances: usize,
    pub failure: Option<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }

    pub fn total_instances(&self) -> usize {
        self.checks.iter().map(|c| c.instances).sum()
    }

    pub fn push(&mut self, check: AxiomCheck) {
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: AuditReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.failure {
                None => writeln!(f, "{}: pass ({} instances)", c.axiom, c.instances)?,
                Some(msg) => writeln!(f, "{}: FAIL ({} instances) {}", c.axiom, c.instances, msg)?,
            }
        }
        Ok(())
    }
}

/// Tracks instances and the first failure for one axiom.
#[derive(Debug)]
pub(crate) struct Tally {
    axiom: String,
    instances: usize,
    failure: Option<String>,
}

impl Tally {
    pub(crate) fn new(axiom: impl Into<String>) -> Self {
        Self {
            axiom: axiom.into(),
            instances: 0,
            failure: None,
        }
    }

    pub(crate) fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    pub(crate) fn record_result(&mut self, r: Result<bool>, describe: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, describe),
            Err(e) => {
                let d = describe();
                self.record(false, || format!("{d}: {e}"));
            }
        }
    }

    pub(crate) fn finish(self) -> AxiomCheck {
        AxiomCheck {
            axiom: self.axiom,
            instances: self.instances,
            failure: self.failure,
        }
    }
}

/// Exhaustive audit of the operad axioms on all enumerated elements whose
/// composite has arity at most `max_arity`.
pub fn audit_set_operad<O: SetOperad>(op: &O, max_arity: usize) -> AuditReport {
    let levels: Vec<Vec<O::Elem>> = (0..=max_arity).map(|n| op.elements(n)).collect();
    let perms: Vec<Vec<Permutation>> = (0..=max_arity).map(Permutation::all).collect();
    let mut report = AuditReport::default();
    let name = op.name();

    let mut unit = Tally::new(format!("{name} unit"));
    let e = op.unit();
    for level in &levels {
        for p in level {
            let left = op.compose(&e, 1, p);
            unit.record_result(left.map(|x| &x == p), || format!("1 ∘_1 {p}"));
            for i in 1..=op.arity(p) {
                let right = op.compose(p, i, &e);
                unit.record_result(right.map(|x| &x == p), || format!("{p} ∘_{i} 1"));
            }
        }
    }
    report.push(unit.finish());

    let mut seq = Tally::new(format!("{name} sequential associativity"));
    let mut par = Tally::new(format!("{name} parallel associativity"));
    // (p ∘_i q) ∘_j r with every arity involved at most max_arity
    for a in 1..=max_arity {
        for b in 0..=max_arity + 1 - a {
            for c in 0..=max_arity {
                if a + b + c < 2 || a + b + c - 2 > max_arity || a + b - 1 > max_arity {
                    continue;
                }
                let (la, lb, lc) = (level(&levels, a), level(&levels, b), level(&levels, c));
                for p in la {
                    for q in lb {
                        for i in 1..=a {
                            let Ok(pq) = op.compose(p, i, q) else {
                                seq.record(false, || format!("{p} ∘_{i} {q} failed"));
                                continue;
                            };
                            for r in lc {
                                for j in i..i + b {
                                    let lhs = op.compose(&pq, j, r);
                                    let rhs = op
                                        .compose(q, j - i + 1, r)
                                        .and_then(|qr| op.compose(p, i, &qr));
                                    seq.record_result(eq_results(lhs, rhs), || {
                                        format!("({p} ∘_{i} {q}) ∘_{j} {r}")
                                    });
                                }
                                // r grafted at a leaf of p to the right of i
                                for j in i + 1..=a {
                                    let lhs = op.compose(&pq, j + b - 1, r);
                                    let rhs = op
                                        .compose(p, j, r)
                                        .and_then(|pr| op.compose(&pr, i, q));
                                    par.record_result(eq_results(lhs, rhs), || {
                                        format!("({p} ∘_{i} {q}) ∘_{} {r}", j + b - 1)
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report.push(seq.finish());
    report.push(par.finish());

    let mut action = Tally::new(format!("{name} action is a right action"));
    for (n, level) in levels.iter().enumerate() {
        for p in level {
            action.record_result(op.act(p, &Permutation::identity(n)).map(|x| &x == p), || {
                format!("{p} · id")
            });
            for s in &perms[n] {
                let Ok(ps) = op.act(p, s) else {
                    action.record(false, || format!("{p} · {s} failed"));
                    continue;
                };
                for t in &perms[n] {
                    let lhs = op.act(&ps, t);
                    let rhs = s.compose(t).and_then(|st| op.act(p, &st));
                    action.record_result(eq_results(lhs, rhs), || format!("({p} · {s}) · {t}"));
                }
            }
        }
    }
    report.push(action.finish());

    let mut equi = Tally::new(format!("{name} equivariance"));
    for a in 1..=max_arity {
        for b in 0..=(max_arity + 1 - a).min(max_arity) {
            for p in level(&levels, a) {
                for q in level(&levels, b) {
                    for s in &perms[a] {
                        for t in &perms[b] {
                            for i in 1..=a {
                                let lhs = op
                                    .act(p, s)
                                    .and_then(|ps| op.act(q, t).and_then(|qt| op.compose(&ps, i, &qt)));
                                let rhs = op
                                    .compose(p, s.apply(i), q)
                                    .and_then(|pq| op.act(&pq, &equivariance_permutation(s, i, t)));
                                equi.record_result(eq_results(lhs, rhs), || {
                                    format!("({p} · {s}) ∘_{i} ({q} · {t})")
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    report.push(equi.finish());
    report
}

fn level<T>(levels: &[Vec<T>], n: usize) -> &[T] {
    levels.get(n).map(Vec::as_slice).unwrap_or(&[])
}

fn eq_results<T: PartialEq>(a: Result<T>, b: Result<T>) -> Result<bool> {
    Ok(a? == b?)
}

/// A map of set operads, checked against composition and the action.
pub fn audit_set_operad_map<S, T, F>(
    source: &S,
    target: &T,
    name: &str,
    map: F,
    max_arity: usize,
) -> AuditReport
where
    S: SetOperad,
    T: SetOperad,
    F: Fn(&S::Elem) -> Result<T::Elem>,
{
    let levels: Vec<Vec<S::Elem>> = (0..=max_arity).map(|n| source.elements(n)).collect();
    let mut report = AuditReport::default();

    let mut unit = Tally::new(format!("{name} preserves the unit"));
    unit.record_result(map(&source.unit()).map(|x| x == target.unit()), || "unit".into());
    report.push(unit.finish());

    let mut arity = Tally::new(format!("{name} preserves arity"));
    for (n, level) in levels.iter().enumerate() {
        for p in level {
            arity.record_result(map(p).map(|x| target.arity(&x) == n), || format!("{p}"));
        }
    }
    report.push(arity.finish());

    let mut comp = Tally::new(format!("{name} commutes with composition"));
    for a in 1..=max_arity {
        for b in 0..=max_arity + 1 - a {
            for p in level(&levels, a) {
                for q in level(&levels, b) {
                    for i in 1..=a {
                        let lhs = source.compose(p, i, q).and_then(|pq| map(&pq));
                        let rhs = map(p).and_then(|fp| map(q).and_then(|fq| target.compose(&fp, i, &fq)));
                        comp.record_result(eq_results(lhs, rhs), || format!("{p} ∘_{i} {q}"));
                    }
                }
            }
        }
    }
    report.push(comp.finish());

    let mut act = Tally::new(format!("{name} commutes with the action"));
    for (n, level) in levels.iter().enumerate() {
        let perms = Permutation::all(n);
        for p in level {
            for s in &perms {
                let lhs = source.act(p, s).and_then(|ps| map(&ps));
                let rhs = map(p).and_then(|fp| target.act(&fp, s));
                act.record_result(eq_results(lhs, rhs), || format!("{p} · {s}"));
            }
        }
    }
    report.push(act.finish());
    report
}
