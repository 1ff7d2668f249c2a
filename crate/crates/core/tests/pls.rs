use genus_pls::corpus::{self, corpus};
use genus_pls::embedding::EmbeddingScheme;
use genus_pls::graph::{degeneracy_order, families, Graph};
use genus_pls::oracle::min_orientable_genus;
use genus_pls::pls::cert::Certificate;
use genus_pls::pls::mutate::{campaign, graft_edge, klein_attack, mutate, Operator};
use genus_pls::pls::*;
use genus_pls::SurfaceKind;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn target_for(s: &EmbeddingScheme) -> Scheme {
    let kind = s.euler_genus().unwrap();
    if kind.orientable {
        Scheme::orientable(kind.genus)
    } else {
        Scheme::non_orientable(kind.genus)
    }
}

fn complete(s: &EmbeddingScheme, name: &str) -> Assignment {
    let target = target_for(s);
    let a = prove(s, target).unwrap_or_else(|e| panic!("{name}: {e}"));
    let g = s.graph();
    let verdicts = run_verifier(&g, target, &a);
    assert!(unanimous(&verdicts), "{name}: {}", text::format_verdicts(&verdicts));
    assert_eq!(check_centrally(&g, target, &a), Ok(()), "{name}");
    a
}

fn instances() -> Vec<(String, EmbeddingScheme)> {
    let mut out: Vec<_> = corpus().into_iter().map(|i| (i.name.to_string(), i.scheme)).collect();
    out.push(("K4/T1".into(), corpus::k4_torus()));
    out
}

#[test]
fn corpus_is_accepted() {
    for (name, s) in instances() {
        complete(&s, &name);
    }
}

#[test]
fn random_embeddings_are_accepted() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for genus in 0..=2u32 {
        for orientable in [true, false] {
            if !orientable && genus == 0 {
                continue;
            }
            for _ in 0..4 {
                let kind = SurfaceKind { orientable, genus };
                let s = genus_pls::generate::random_embedded(24, kind, &mut rng);
                complete(&s, &kind.to_string());
            }
        }
    }
}

#[test]
fn certificates_decode_to_what_was_encoded() {
    for (name, s) in instances() {
        let certs = prove_certificates(&s, target_for(&s)).unwrap();
        for (&v, c) in &certs {
            let bits = c.encode().unwrap();
            assert_eq!(&Certificate::decode(v, &bits).unwrap(), c, "{name} at {v}");
            let mut longer = bits.clone();
            longer.push(false);
            assert!(Certificate::decode(v, &longer).is_err(), "{name}: trailing bit");
        }
    }
}

#[test]
fn scheme_bounds_are_enforced() {
    let s = corpus::k5_torus();
    let g = s.graph();
    assert!(matches!(prove(&s, Scheme::orientable(0)), Err(ProveError::BeyondScheme { .. })));
    let a = prove(&s, Scheme::orientable(1)).unwrap();
    assert!(unanimous(&run_verifier(&g, Scheme::orientable(2), &a)));
    assert!(unanimous(&run_verifier(&g, Scheme::non_orientable(2), &a)));
    let tight = run_verifier(&g, Scheme::orientable(0), &a);
    assert!(tight.values().all(|v| matches!(v, Verdict::Reject { reason: Reason::Scheme, .. })));

    let k = corpus::klein_bottle();
    let a = prove(&k, Scheme::non_orientable(2)).unwrap();
    let verdicts = run_verifier(&k.graph(), Scheme::orientable(1), &a);
    assert!(!unanimous(&verdicts));
}

/// A planar embedding of K5 minus one edge, certified, with the missing edge
/// grafted on under made-up proofs.
#[test]
fn forged_planar_k5_is_rejected() {
    let mut k5_minus = families::complete(5);
    k5_minus = Graph::from_edges(
        &k5_minus.edges().into_iter().filter(|e| (e.0, e.1) != (1, 2)).map(|e| (e.0, e.1)).collect::<Vec<_>>(),
    )
    .unwrap();
    let (genus, planar) = min_orientable_genus(&k5_minus);
    assert_eq!(genus, 0);
    let base = prove(&planar, Scheme::orientable(0)).unwrap();
    let k5 = families::complete(5);
    let target = Scheme::orientable(0);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut forged = 0;
    while forged < 10_000 {
        let (host, other) = if rng.gen_bool(0.5) { (1, 2) } else { (2, 1) };
        let Some(a) = graft_edge(&base, host, other, &mut rng) else { continue };
        forged += 1;
        assert!(!unanimous(&run_verifier(&k5, target, &a)), "forgery {forged} accepted");
        assert!(check_centrally(&k5, target, &a).is_err());
    }
}

#[test]
fn k5_has_no_planar_certificates() {
    let (genus, s) = min_orientable_genus(&families::complete(5));
    assert_eq!(genus, 1);
    assert!(prove(&s, Scheme::orientable(0)).is_err());
}

#[test]
fn missing_certificates_are_rejected() {
    let s = corpus::k4_torus();
    let g = s.graph();
    let target = Scheme::orientable(1);
    let mut a = prove(&s, target).unwrap();
    a.insert(2, Bits::new());
    let verdicts = run_verifier(&g, target, &a);
    assert!(matches!(verdicts[&2], Verdict::Reject { reason: Reason::Decode, .. }));
    a.remove(&2);
    assert!(!unanimous(&run_verifier(&g, target, &a)));
}

#[test]
fn decisions_only_see_the_closed_neighborhood() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = genus_pls::generate::random_embedded(30, SurfaceKind { orientable: true, genus: 1 }, &mut rng);
    let g = s.graph();
    let target = Scheme::orientable(1);
    let honest = prove(&s, target).unwrap();
    let before = run_verifier(&g, target, &honest);
    for _ in 0..50 {
        let u = *honest.keys().nth(rng.gen_range(0..honest.len())).unwrap();
        let mut a = honest.clone();
        let mut bits = a[&u].clone();
        let i = rng.gen_range(0..bits.len());
        let b = !bits[i];
        bits.set(i, b);
        a.insert(u, bits);
        let after = run_verifier(&g, target, &a);
        for v in g.vertices() {
            if v != u && !g.has_edge(u, v) {
                assert_eq!(before[&v], after[&v], "vertex {v} saw a change at {u}");
            }
        }
        assert!(!unanimous(&after));
    }
}

#[test]
fn records_per_vertex_stay_within_the_degeneracy() {
    for (name, s) in instances() {
        let g = s.graph();
        let (_, d) = degeneracy_order(&g);
        let certs = prove_certificates(&s, target_for(&s)).unwrap();
        for (v, c) in certs {
            assert!(c.hosted.len() <= d, "{name}: {v} hosts {} > {d}", c.hosted.len());
        }
    }
}

#[test]
fn klein_attack_is_rejected() {
    let s = corpus::k5_torus();
    let g = s.graph();
    let target = Scheme::orientable(1);
    let honest = prove(&s, target).unwrap();
    let forged = klein_attack(&honest).expect("a torus has a duplicated cycle");
    assert_ne!(forged, honest);
    assert!(!unanimous(&run_verifier(&g, target, &forged)));
    assert!(check_centrally(&g, target, &forged).is_err());
}

#[test]
fn corrupted_assignments_are_rejected_by_both_verifiers() {
    for (i, (name, s)) in instances().into_iter().enumerate() {
        let g = s.graph();
        let target = target_for(&s);
        let honest = prove(&s, target).unwrap();
        let c = campaign(&g, target, &honest, 160, i as u64);
        assert!(c.trials.len() >= 100, "{name}: only {} mutants", c.trials.len());
        let missed: Vec<_> = c.trials.iter().filter(|t| !t.rejected).collect();
        assert!(missed.is_empty(), "{name}: accepted {missed:?}");
        assert_eq!(c.disagreements(), 0, "{name}");
    }
}

#[test]
fn every_operator_applies_somewhere() {
    let s = corpus::double_torus();
    let honest = prove(&s, target_for(&s)).unwrap();
    let g = s.graph();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for op in Operator::ALL {
        let hit = (0..50).any(|_| mutate(&g, &honest, op, &mut rng).is_some_and(|m| m != honest));
        assert!(hit, "{op} never changed anything");
    }
}

#[test]
fn dumps_are_deterministic() {
    let s = corpus::k5_torus();
    let a = prove(&s, Scheme::orientable(1)).unwrap();
    let b = prove(&s, Scheme::orientable(1)).unwrap();
    assert_eq!(a, b);
    let dump = text::format_assignment(&a);
    assert_eq!(dump, text::format_assignment(&b));
    assert_eq!(dump.lines().filter(|l| l.starts_with("vertex ")).count(), 5);
    let report = text::format_verdicts(&run_verifier(&s.graph(), Scheme::orientable(1), &a));
    assert!(report.ends_with("accepted by all 5 vertices\n"), "{report}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_single_bit_flip_is_caught(v in 1u32..=4, at in any::<prop::sample::Index>()) {
        let s = corpus::k4_torus();
        let target = Scheme::orientable(1);
        let mut a = prove(&s, target).unwrap();
        let bits = a.get_mut(&v).unwrap();
        let i = at.index(bits.len());
        let b = !bits[i];
        bits.set(i, b);
        prop_assert!(!unanimous(&run_verifier(&s.graph(), target, &a)));
    }
}
