use genus_pls::corpus::{self, corpus};
use genus_pls::embedding::EmbeddingScheme;
use genus_pls::histories::*;
use genus_pls::surgery::{refold, unfold, UnfoldingTrace};
use genus_pls::SurfaceKind;
use rand::SeedableRng;

fn locally_accepted(g: &genus_pls::graph::Graph, hc: &HistoryCollection) -> bool {
    let st = Stages::new(hc);
    g.vertices().all(|v| {
        let nbrs: Vec<_> = g.neighbors(v).collect();
        check_vertex(hc, &st, v, &nbrs).is_ok()
    })
}

fn unfolded_by_ids(trace: &UnfoldingTrace, hc: &HistoryCollection) -> EmbeddingScheme {
    let gen = Genealogy::of(trace);
    let ids = NodeIds::new(hc);
    trace.unfolded().relabeled(|x| ids.avatar_id(gen.avatar(x).unwrap()).unwrap())
}

fn honest(scheme: &EmbeddingScheme, name: &str) {
    let trace = unfold(scheme).unwrap_or_else(|e| panic!("{name}: {e}"));
    let hc = build_histories(&trace).unwrap_or_else(|e| panic!("{name}: {e}"));
    let g = scheme.graph();
    let report = check_local_consistency(&g, &hc);
    assert!(report.accepted(), "{name}: {:?}", report.violations);
    assert!(locally_accepted(&g, &hc), "{name}");

    let back = reconstruct_trace(&hc, &unfolded_by_ids(&trace, &hc)).unwrap_or_else(|e| panic!("{name}: {e}"));
    let folded = refold(&back).unwrap_or_else(|e| panic!("{name}: {e}"));
    assert_eq!(folded.graph(), g, "{name}");
    assert_eq!(folded.euler_genus().unwrap(), scheme.euler_genus().unwrap(), "{name}");
}

#[test]
fn corpus_histories_are_consistent() {
    for inst in corpus() {
        honest(&inst.scheme, inst.name);
    }
    honest(&corpus::k4_torus(), "k4-torus");
}

#[test]
fn random_histories_are_consistent() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for genus in 0..=2u32 {
        for orientable in [true, false] {
            if !orientable && genus == 0 {
                continue;
            }
            for _ in 0..5 {
                let kind = SurfaceKind { orientable, genus };
                let s = genus_pls::generate::random_embedded(30, kind, &mut rng);
                honest(&s, &kind.to_string());
            }
        }
    }
}

#[test]
fn every_walk_passage_is_a_footprint() {
    let trace = unfold(&corpus::k5_torus()).unwrap();
    let hc = build_histories(&trace).unwrap();
    for level in 0..=trace.depth() {
        let walk_total: usize = trace.walks[level].values().map(|w| w.len()).sum();
        let prints: usize =
            hc.histories.values().flat_map(|r| r.walk()).filter(|x| x.level == level).map(|x| x.footprints.len()).sum();
        assert_eq!(walk_total, prints, "level {level}");
    }
    assert_eq!(hc.walk.len(), trace.special_walk().unwrap().len());
}

#[test]
fn swapped_leaf_footprints_break_the_leaves() {
    let trace = unfold(&corpus::k5_torus()).unwrap();
    let mut hc = build_histories(&trace).unwrap();
    let depth = hc.depth();
    let (a, b) = (hc.walk[0], hc.walk[3]);
    let take = |hc: &mut HistoryCollection, a: Avatar| {
        let mut got = Vec::new();
        hc.histories.get_mut(&a.vertex).unwrap().walk_mut(&mut |n| {
            if n.level == depth && n.first == a.index {
                got.push(n.footprints[0].counter);
            }
        });
        got[0]
    };
    let (ca, cb) = (take(&mut hc, a), take(&mut hc, b));
    for (x, c) in [(a, cb), (b, ca)] {
        hc.histories.get_mut(&x.vertex).unwrap().walk_mut(&mut |n| {
            if n.level == depth && n.first == x.index {
                n.footprints[0].counter = c;
            }
        });
    }
    let g = corpus::k5_torus().graph();
    assert!(!check_local_consistency(&g, &hc).accepted());
    assert!(!locally_accepted(&g, &hc));
}

#[test]
fn format_is_deterministic() {
    let trace = unfold(&corpus::k33_torus()).unwrap();
    let a = format_histories(&build_histories(&trace).unwrap());
    let b = format_histories(&build_histories(&trace).unwrap());
    assert_eq!(a, b);
    assert!(a.starts_with("walk "));
}

mod tampering {
    use super::*;
    use genus_pls::histories::mutate::{reverse_walk, tamper, Tamper};
    use genus_pls::surgery::FaceLabel;

    #[test]
    fn klein_reversal_breaks_the_cycles() {
        let trace = unfold(&corpus::k5_torus()).unwrap();
        let mut hc = build_histories(&trace).unwrap();
        reverse_walk(&mut hc, 1, FaceLabel::CycleRight(1));
        let g = corpus::k5_torus().graph();
        let report = check_local_consistency(&g, &hc);
        assert!(!report.accepted());
        assert!(!locally_accepted(&g, &hc));
    }

    #[test]
    fn local_and_global_checks_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut cases: Vec<(String, EmbeddingScheme)> =
            corpus().into_iter().map(|i| (i.name.to_string(), i.scheme)).collect();
        cases.push(("k4-torus".into(), corpus::k4_torus()));
        let mut total = 0;
        for (name, scheme) in cases {
            let g = scheme.graph();
            let trace = unfold(&scheme).unwrap();
            let honest = build_histories(&trace).unwrap();
            let planar = unfolded_by_ids(&trace, &honest);
            for round in 0..2000 {
                let kind = Tamper::ALL[round % Tamper::ALL.len()];
                let mut hc = honest.clone();
                if !tamper(&mut hc, kind, &mut rng) || hc == honest {
                    continue;
                }
                total += 1;
                let global = check_local_consistency(&g, &hc).accepted();
                let local = locally_accepted(&g, &hc);
                assert_eq!(global, local, "{name}: {kind} disagrees\n{}", format_histories(&hc));
                // Planar-graph edges off the special walks are only pinned
                // down by the planarity certificate.
                if global && kind != Tamper::RelinkAvatar {
                    let refolds = [planar.clone(), planar.mirrored()].iter().any(|h| {
                        reconstruct_trace(&hc, h)
                            .ok()
                            .and_then(|t| refold(&t).ok())
                            .is_some_and(|s| s.graph() == g && s.euler_genus() == scheme.euler_genus())
                    });
                    assert!(refolds, "{name}: {kind} accepted\n{}", format_histories(&hc));
                }
            }
        }
        assert!(total >= 10_000, "{total}");
    }
}
