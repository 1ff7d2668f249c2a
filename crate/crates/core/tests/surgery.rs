use genus_pls::corpus::{self, corpus};
use genus_pls::surgery::*;
use genus_pls::SurfaceKind;

#[test]
fn corpus_round_trips() {
    for inst in corpus() {
        let trace = unfold(&inst.scheme).unwrap_or_else(|e| panic!("{}: {e}", inst.name));
        assert_eq!(trace.params.surface(), inst.surface, "{}", inst.name);
        let back = refold(&trace).unwrap_or_else(|e| panic!("{}: {e}", inst.name));
        assert_eq!(back.euler_genus().unwrap(), inst.surface, "{}", inst.name);
    }
}

#[test]
fn k5_unfolds_in_two_steps() {
    let trace = unfold(&corpus::k5_torus()).unwrap();
    assert_eq!(trace.depth(), 2);
    assert_eq!(trace.special_walk().unwrap().len(), 10);
    assert_eq!(trace.unfolded().euler_genus().unwrap(), SurfaceKind::sphere());
}

#[test]
fn random_round_trips() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for genus in 0..=3u32 {
        for orientable in [true, false] {
            if !orientable && genus == 0 {
                continue;
            }
            for _ in 0..10 {
                let kind = SurfaceKind { orientable, genus };
                let s = genus_pls::generate::random_embedded(40, kind, &mut rng);
                let trace = unfold(&s).unwrap_or_else(|e| panic!("{kind}: {e}"));
                assert_eq!(trace.params.surface(), kind);
                let back = refold(&trace).unwrap_or_else(|e| panic!("{kind}: {e}"));
                assert_eq!(back.euler_genus().unwrap(), kind);
            }
        }
    }
}

#[test]
fn reversed_right_walk_is_a_klein_gluing() {
    let mut trace = unfold(&corpus::k5_torus()).unwrap();
    let w = trace.walks[1].get_mut(&FaceLabel::CycleRight(1)).unwrap();
    *w = w.reversed();
    let err = refold(&trace).unwrap_err();
    assert_eq!(err, SurgeryError::GlobalInconsistency { condition: Condition::CycleDuplication, stage: 1 });
}

#[test]
fn merged_walk_through_a_foreign_vertex_breaks_path_checking() {
    let mut trace = unfold(&corpus::double_torus()).unwrap();
    let level = trace.params.level_of(StepKind::PathDup, 1).unwrap();
    let label = FaceLabel::Merged(1);
    let on_walk = trace.walks[level][&label].vertices();
    let foreign = trace.stages[level].graph().vertices().find(|v| !on_walk.contains(v)).unwrap();
    let copies = &trace.steps[level - 1].copies;
    let at = on_walk.iter().position(|v| !copies.iter().any(|c| c.0 == *v || c.1 == *v)).unwrap();
    trace.walks[level].get_mut(&label).unwrap().corners[at].vertex = foreign;
    let err = refold(&trace).unwrap_err();
    assert_eq!(err, SurgeryError::GlobalInconsistency { condition: Condition::PathDuplication, stage: level });
}

fn balanced_steps(s: &genus_pls::EmbeddingScheme) -> usize {
    let trace = unfold(s).unwrap();
    let entries = ledger(&trace).unwrap();
    for e in &entries {
        assert!(e.balanced(), "{:?} {}: got {:?}, want {:?}", e.kind, e.index, e.delta(), e.expected());
    }
    entries.len()
}

#[test]
fn euler_ledger_balances_over_many_steps() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let kinds = [
        SurfaceKind { orientable: true, genus: 1 },
        SurfaceKind { orientable: true, genus: 2 },
        SurfaceKind { orientable: false, genus: 1 },
        SurfaceKind { orientable: false, genus: 2 },
        SurfaceKind { orientable: false, genus: 3 },
    ];
    let mut steps: usize = corpus().iter().map(|i| balanced_steps(&i.scheme)).sum();
    let mut round = 0;
    while steps < 500 {
        let kind = kinds[round % kinds.len()];
        steps += balanced_steps(&genus_pls::generate::random_embedded(12 + (round % 20) as u32, kind, &mut rng));
        round += 1;
    }
}

#[test]
fn double_torus_unfolds_in_five_steps() {
    let trace = unfold(&corpus::double_torus()).unwrap();
    assert_eq!(trace.depth(), 5);
    let kinds: Vec<StepKind> = trace.steps.iter().map(|s| s.kind).collect();
    use StepKind::*;
    assert_eq!(kinds, [CycleDup, CycleDup, PathDup, PathDup, PathDup]);
    let genera: Vec<i64> = trace.stages.iter().map(|s| 2 - s.euler_genus().unwrap().euler_characteristic()).collect();
    assert_eq!(genera, [4, 2, 0, 0, 0, 0]);
    assert_eq!(trace.walks[5].len(), 1);
}

#[test]
fn projective_k6_doubles_to_the_sphere() {
    let trace = unfold(&corpus::k6_projective()).unwrap();
    assert_eq!(trace.depth(), 1);
    assert_eq!(trace.steps[0].kind, StepKind::CycleDouble);
    assert_eq!(trace.unfolded().euler_genus().unwrap(), SurfaceKind::sphere());
    let p = trace.steps[0].object.len();
    assert_eq!(trace.special_walk().unwrap().len(), 2 * p);
}

#[test]
fn trace_text_is_deterministic() {
    for inst in corpus() {
        let a = text::format_trace(&unfold(&inst.scheme).unwrap());
        let b = text::format_trace(&unfold(&inst.scheme).unwrap());
        assert_eq!(a, b, "{}", inst.name);
        assert!(!a.is_empty());
    }
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
    #[test]
    fn every_step_balances(seed in 0u64..10_000, n in 4u32..30, genus in 1u32..=3, orientable: bool) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let kind = SurfaceKind { orientable, genus: if orientable { genus.min(2) } else { genus } };
        balanced_steps(&genus_pls::generate::random_embedded(n, kind, &mut rng));
    }
}
