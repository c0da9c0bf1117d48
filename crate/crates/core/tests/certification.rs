use gt_operads::gt::check_pool;
use gt_operads::quotients::{candidate, certify, enumerate_homs_b4, CandidateData, ImageCandidate};
use gt_operads::{Catalog, FiniteGroup, GtCandidate};

fn regression_set() -> Vec<GtCandidate> {
    let words: [(i64, &[i32]); 10] = [
        (1, &[]),
        (-1, &[]),
        (3, &[]),
        (-3, &[]),
        (1, &[1]),
        (1, &[1, 2, -1, -2]),
        (-1, &[1, 2, -1, -2]),
        (1, &[2, 1, -2, -1]),
        (5, &[1, 1, 2, -1, -1, -2]),
        (1, &[1, 2, 1, -2, -1, -1, -2, 2]),
    ];
    words.iter().map(|(l, w)| candidate(*l, w).unwrap()).collect()
}

#[test]
fn exact_passes_transport_to_every_quotient() {
    let groups = Catalog::Default.groups();
    let pool = regression_set();
    for (c, v) in pool.iter().zip(check_pool(&pool)) {
        let data = CandidateData::Exact(c.clone());
        let cert = certify(&data, &groups).unwrap();
        for (r, exact) in [(1, v.relation1), (2, v.relation2), (3, v.relation3)] {
            if exact {
                assert!(cert.relation_passed(r), "{c}: relation {r}");
            }
        }
        assert!(cert.replay(&data, &groups).unwrap(), "{c}");
    }
}

#[test]
fn commutator_candidate_regression_values() {
    let groups = Catalog::Default.groups();
    let c = candidate(1, &[1, 2, -1, -2]).unwrap();
    let v = c.check();
    assert!(v.relation1 && !v.relation2 && !v.relation3);
    let cert = certify(&CandidateData::Exact(c), &groups).unwrap();
    assert_eq!(cert.first_failing_group(1), None);
    assert_eq!(cert.first_failing_group(2), Some("S3"));
    // relation (3) fails exactly but no catalog quotient detects it
    assert_eq!(cert.first_failing_group(3), None);
}

#[test]
fn x_is_refuted_by_the_cyclic_group_of_order_two() {
    let c = candidate(1, &[1]).unwrap();
    let cert = certify(&CandidateData::Exact(c), &[FiniteGroup::cyclic(2)]).unwrap();
    assert_eq!(cert.first_failing_group(1), Some("C2"));
}

#[test]
fn braid_triples_in_s3() {
    let s3 = FiniteGroup::symmetric(3);
    assert_eq!(enumerate_homs_b4(&s3).len(), 12);
}

#[test]
fn image_candidates_certify_like_exact_ones() {
    let c = candidate(-1, &[1, 2, -1, -2]).unwrap();
    for g in Catalog::Default.groups() {
        let exact = certify(&CandidateData::Exact(c.clone()), std::slice::from_ref(&g)).unwrap();
        let image = certify(
            &CandidateData::Image(ImageCandidate::from_exact(&c, &g)),
            std::slice::from_ref(&g),
        )
        .unwrap();
        assert_eq!(exact.lines, image.lines, "{}", g.name());
    }
}

#[test]
fn certificates_are_deterministic() {
    let groups = Catalog::Default.groups();
    let data = CandidateData::Exact(candidate(3, &[1, 2, -1, -2]).unwrap());
    let a = certify(&data, &groups).unwrap().to_string();
    let b = certify(&data, &groups).unwrap().to_string();
    assert_eq!(a, b);
}
