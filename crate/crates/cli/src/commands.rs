use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{bail, Result};
use gt_operads::cohomology;
use gt_operads::gt::{check_pool, parse_candidates};
use gt_operads::magma::{bm_freeness_table, enumerate_bm, enumerate_um, map_u, section_s};
use gt_operads::operad::audit_set_operad;
use gt_operads::pab::{
    audit_groupoid_operad, audit_operad_map, build_cob, build_pab, build_paub, codiscrete_swap, decide_pab_homotopy,
    endo_mirror, endo_rotation, fix_objects, fulltwist_selfhomotopy, identity_homotopy, map_v, maps_agree, mu, phi,
    phi_inverse, shadow_of_v, validate_homotopy, AuditConfig, CodiscreteMorphism, CodiscreteUmOperad,
    HomotopyDecision,
};
use gt_operads::quotients::CandidateData;
use gt_operads::{
    AssocOperad, AuditReport, BasedMagmaOperad, BraidWord, FiniteGroupoid, FreeWord, GroupoidOperad, GtCandidate,
    Monomial, OperadMap, Pab, Paub, UnitalMagmaOperad,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{HomotopyCase, OperadSelector, Outcome, PhiTarget, RunConfig};

fn mark(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn rng(config: &RunConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed)
}

fn candidates(text: &str) -> Result<Vec<GtCandidate>> {
    let cands = parse_candidates(text)?;
    if cands.is_empty() {
        bail!("the candidate file contains no candidates");
    }
    Ok(cands)
}

fn show_word(w: &FreeWord) -> String {
    if w.is_identity() {
        "e".to_string()
    } else {
        w.to_string()
    }
}

/// Appends an audit under a heading and returns whether it passed.
fn section(out: &mut String, heading: &str, report: &AuditReport) -> bool {
    let _ = writeln!(out, "[{heading}]");
    out.push_str(&report.to_string());
    report.passed()
}

pub fn gt_check(text: &str) -> Result<Outcome> {
    let cands = candidates(text)?;
    let verdicts = check_pool(&cands);
    let mut report = String::new();
    let mut passed = true;
    for (c, v) in cands.iter().zip(&verdicts) {
        let _ = writeln!(
            report,
            "{c} | relation1: {} | relation2: {} | relation3: {} | abelianization: {}",
            mark(v.relation1),
            mark(v.relation2),
            mark(v.relation3),
            mark(v.abelianization)
        );
        passed &= v.all_relations() && v.abelianization;
    }
    Ok(Outcome { report, passed })
}

pub fn gt_mul(text: &str) -> Result<Outcome> {
    let product = candidates(text)?
        .iter()
        .fold(GtCandidate::identity(), |acc, c| acc.multiply(c));
    Ok(Outcome {
        report: format!("{product}\n"),
        passed: true,
    })
}

pub fn gt_act(text: &str, target: Option<&str>) -> Result<Outcome> {
    let cands = candidates(text)?;
    let mut report = String::new();
    let mut passed = true;
    match target.map(str::trim) {
        Some(t) if t.starts_with('B') || t.starts_with("x[") => {
            let braid = BraidWord::parse(t)?;
            for c in &cands {
                let image = c.act_on_b3(&braid)?;
                let defined = c.b3_action_is_homomorphism();
                let note = if defined { "" } else { " (images violate the braid relation)" };
                let _ = writeln!(report, "{c} | {image}{note}");
                passed &= defined;
            }
        }
        Some(t) => {
            let word = FreeWord::parse(t, 2)?;
            for c in &cands {
                let _ = writeln!(report, "{c} | {}", show_word(&c.act_on_f2().apply(&word)?));
            }
        }
        None => {
            for a in &cands {
                for b in &cands {
                    let product = a.multiply(b).act_on_f2();
                    let composite = a.act_on_f2().then(&b.act_on_f2())?;
                    let ok = product == composite;
                    let _ = writeln!(report, "({a}) * ({b}): {}", mark(ok));
                    passed &= ok;
                }
            }
        }
    }
    Ok(Outcome { report, passed })
}

pub fn operad_audit(operad: OperadSelector, samples: usize, config: &RunConfig) -> Result<Outcome> {
    let n = config.arity;
    let sampled = AuditConfig {
        samples,
        object_arity: n,
    };
    let mut rng = rng(config);
    let report = match operad {
        OperadSelector::A => audit_set_operad(&AssocOperad, n),
        OperadSelector::Um => audit_set_operad(&UnitalMagmaOperad, n),
        OperadSelector::Bm => audit_set_operad(
            &BasedMagmaOperad {
                star_budget: config.star_budget,
            },
            n,
        ),
        OperadSelector::Cob => audit_groupoid_operad(&build_cob(n), &sampled, &mut rng),
        OperadSelector::Pab => audit_groupoid_operad(&build_pab(n), &sampled, &mut rng),
        OperadSelector::Paub => audit_groupoid_operad(&build_paub(n, config.star_budget), &sampled, &mut rng),
    };
    let mut out = format!("arity: {n}\n");
    out.push_str(&report.to_string());
    let _ = writeln!(out, "instances: {}", report.total_instances());
    Ok(Outcome {
        passed: report.passed(),
        report: out,
    })
}

pub fn cohomology(text: &str, coefficients: Option<&str>, config: &RunConfig) -> Result<Outcome> {
    let a = FiniteGroupoid::parse(text)?;
    let mut groups = config.catalog.groups();
    if let Some(name) = coefficients {
        groups.retain(|g| g.name() == name);
        if groups.is_empty() {
            bail!("no group named {name} in the {} catalog", config.catalog.name());
        }
    }
    let mut report = format!(
        "objects: {}\nmorphisms: {}\ncomponents: {}\n",
        a.object_count(),
        a.morphism_count(),
        a.pi0().len()
    );
    let mut passed = true;
    for row in cohomology::report(&a, &groups) {
        let _ = writeln!(
            report,
            "coefficients: {}\nH0: {}\nZ1: {}\nB1-orbits: {}\nH1: {}\norbits = coequalizer: {}",
            row.coefficients,
            row.h0,
            row.z1,
            row.b1_orbits,
            row.h1,
            mark(row.partitions_agree)
        );
        passed &= row.partitions_agree;
    }
    Ok(Outcome { report, passed })
}

pub fn certify(text: &str, config: &RunConfig) -> Result<Outcome> {
    let groups = config.catalog.groups();
    let mut report = format!("catalog: {}\n", config.catalog.name());
    let mut passed = true;
    for c in candidates(text)? {
        let data = CandidateData::Exact(c);
        let cert = gt_operads::quotients::certify(&data, &groups)?;
        if !cert.replay(&data, &groups)? {
            bail!("failure witnesses for {} did not replay", cert.candidate);
        }
        report.push_str(&cert.to_string());
        passed &= cert.passed();
    }
    Ok(Outcome { report, passed })
}

/// The shadow levels checked for `v`, as `(level, basepoints)`; larger
/// budgets make the finite shadows too big to enumerate.
fn shadow_levels(arity: usize, star_budget: usize) -> Vec<(usize, usize)> {
    [
        (0, star_budget.clamp(1, 2)),
        (1, star_budget.min(2)),
        (2, star_budget.min(1)),
        (3, 0),
    ]
    .into_iter()
    .filter(|&(n, _)| n <= arity)
    .collect()
}

pub fn paub_section(config: &RunConfig) -> Result<Outcome> {
    let (n_max, budget) = (config.arity, config.star_budget);
    let mut report = String::new();
    let mut passed = true;

    let mut checked = 0;
    let mut section_ok = true;
    for n in 1..=n_max {
        for m in enumerate_um(n) {
            section_ok &= map_u(&section_s(&m)?)? == m;
            checked += 1;
        }
    }
    let _ = writeln!(report, "u . s = id on UM(1..={n_max}): {} ({checked} monomials)", mark(section_ok));
    passed &= section_ok;

    let rejects = section_s(&Monomial::Empty).is_err();
    let _ = writeln!(report, "s undefined on UM(0): {}", mark(rejects));
    passed &= rejects;

    let first = if budget == 0 { 1 } else { 0 };
    let mut surjective = true;
    for n in first..=n_max {
        let images: HashSet<Monomial> = enumerate_bm(n, budget).iter().map(map_u).collect::<Result<_, _>>()?;
        surjective &= enumerate_um(n).iter().all(|m| images.contains(m));
    }
    let _ = writeln!(
        report,
        "u surjective on objects, levels {first}..={n_max}: {}",
        mark(surjective)
    );
    passed &= surjective;

    let mut free = true;
    for (n, k, found, expected) in bm_freeness_table(n_max, budget) {
        let ok = found as u128 == expected;
        let _ = writeln!(report, "BM({n}) with {k} basepoints: {found} of {expected} free: {}", mark(ok));
        free &= ok;
    }
    let _ = writeln!(report, "Ob(PaUB) = BM free on mu and *, so PaUB is cofibrant: {}", mark(free));
    passed &= free;

    for (n, b) in shadow_levels(n_max, budget) {
        let f = shadow_of_v(n, b, 4)?;
        let we = f.is_weak_equivalence();
        let _ = writeln!(
            report,
            "v on shadows of level {n} (at most {b} basepoints, exponent sums mod 4): {} -> {} objects, weak equivalence: {}",
            f.source().object_count(),
            f.target().object_count(),
            mark(we)
        );
        passed &= we;
    }

    let paub = build_paub(n_max, budget);
    let pab = build_pab(n_max);
    let audit = audit_operad_map(
        &paub,
        &pab,
        &map_v(),
        &AuditConfig {
            samples: 200,
            object_arity: n_max.min(3),
        },
        &mut rng(config),
    );
    passed &= section(&mut report, "v is an operad map", &audit);
    Ok(Outcome { report, passed })
}

pub fn phi_roundtrip(target: PhiTarget, config: &RunConfig) -> Result<Outcome> {
    let n = config.arity;
    let pab = Arc::new(build_pab(n));
    let paub = Arc::new(build_paub(n, config.star_budget));
    let mut rng = rng(config);
    let audit = AuditConfig {
        samples: 200,
        object_arity: n,
    };
    match target {
        PhiTarget::Paub => {
            let id = OperadMap::<Paub, Paub>::identity();
            phi_inverse(&id, paub.clone(), paub)?;
            bail!("phi^-1 accepted a target whose low levels are not points");
        }
        PhiTarget::Pab => {
            let mut report = format!("arity: {n}\n");
            let mut passed = true;
            let ends: [OperadMap<Pab, Pab>; 3] = [OperadMap::identity(), endo_mirror(), endo_rotation()];
            for g in &ends {
                let f = phi(g);
                let back = phi_inverse(&f, paub.clone(), pab.clone())?;
                let r = maps_agree(pab.as_ref(), pab.as_ref(), &back, g, &audit, &mut rng);
                passed &= section(&mut report, &format!("phi^-1(phi({})) = {}", g.name, g.name), &r);
                let again = phi(&back);
                let paub_audit = AuditConfig {
                    object_arity: n.min(3),
                    ..audit
                };
                let r = maps_agree(paub.as_ref(), pab.as_ref(), &again, &f, &paub_audit, &mut rng);
                passed &= section(&mut report, &format!("phi(phi^-1({})) = {}", f.name, f.name), &r);
            }
            let r = maps_agree(
                paub.as_ref(),
                pab.as_ref(),
                &phi(&OperadMap::identity()),
                &map_v(),
                &AuditConfig {
                    object_arity: n.min(3),
                    ..audit
                },
                &mut rng,
            );
            passed &= section(&mut report, "phi(id) = v", &r);
            Ok(Outcome { report, passed })
        }
    }
}

pub fn homotopy_validate(case: HomotopyCase, config: &RunConfig) -> Result<Outcome> {
    let n = config.arity;
    let audit = AuditConfig {
        samples: 500,
        object_arity: n.min(4),
    };
    let mut rng = rng(config);
    let mut report = format!("arity: {n}\n");
    let passed = match case {
        HomotopyCase::Fulltwist => {
            let pab = Arc::new(build_pab(n));
            let h = fulltwist_selfhomotopy(pab.clone());
            let id = OperadMap::identity();
            let r = validate_homotopy(pab.as_ref(), pab.as_ref(), &h, &id, &id, &audit, &mut rng);
            section(&mut report, "fulltwist: id => id", &r)
        }
        HomotopyCase::IdMirror => {
            let pab = Arc::new(build_pab(n));
            let (id, mirror) = (OperadMap::<Pab, Pab>::identity(), endo_mirror());
            for h in [identity_homotopy(pab.clone(), &id), fulltwist_selfhomotopy(pab.clone())] {
                let r = validate_homotopy(pab.as_ref(), pab.as_ref(), &h, &id, &mirror, &audit, &mut rng);
                let _ = writeln!(
                    report,
                    "candidate {}: {}",
                    h.name,
                    if r.passed() { "validates" } else { "rejected" }
                );
            }
            match decide_pab_homotopy(pab, &id, &mirror, &audit, &mut rng)? {
                HomotopyDecision::Homotopic(h) => {
                    let _ = writeln!(report, "decision: homotopic via {}", h.name);
                    true
                }
                HomotopyDecision::NotHomotopic(why) => {
                    let _ = writeln!(report, "decision: not homotopic ({why})");
                    false
                }
                HomotopyDecision::Undecided(why) => {
                    let _ = writeln!(report, "decision: undecided ({why})");
                    false
                }
            }
        }
        HomotopyCase::FixCodiscrete => {
            let op = Arc::new(CodiscreteUmOperad::new(n));
            let u = codiscrete_swap();
            let connecting = CodiscreteMorphism {
                source: u.object(&mu())?,
                target: mu(),
            };
            fixed_report(op, &u, connecting, &audit, &mut rng, &mut report)?
        }
        HomotopyCase::FixRotation => {
            let op = Arc::new(build_pab(n));
            let u = endo_rotation();
            let connecting = op.braid_morphism(&u.object(&mu())?, &mu(), BraidWord::generator(2, 1)?)?;
            fixed_report(op, &u, connecting, &audit, &mut rng, &mut report)?
        }
    };
    Ok(Outcome { report, passed })
}

fn fixed_report<O>(
    op: Arc<O>,
    u: &OperadMap<O, O>,
    connecting: O::Mor,
    audit: &AuditConfig,
    rng: &mut ChaCha8Rng,
    report: &mut String,
) -> Result<bool>
where
    O: GroupoidOperad<Obj = Monomial> + 'static,
{
    let (v, h) = fix_objects(op.clone(), u, connecting)?;
    let mut passed = section(
        report,
        &format!("{} is an operad map", v.name),
        &audit_operad_map(op.as_ref(), op.as_ref(), &v, audit, rng),
    );
    let mut fixed = true;
    for n in 0..=audit.object_arity.min(op.max_arity()) {
        for x in op.objects(n) {
            fixed &= v.object(x)? == *x;
        }
    }
    let _ = writeln!(report, "{} is the identity on objects: {}", v.name, mark(fixed));
    passed &= fixed;
    passed &= section(
        report,
        &format!("{}: {} => {}", h.name, u.name, v.name),
        &validate_homotopy(op.as_ref(), op.as_ref(), &h, u, &v, audit, rng),
    );
    Ok(passed)
}
