use std::collections::BTreeMap;

use diachron_core::detection::{brute_force_best, louvain, modularity};
use diachron_core::metrics::{community_reports, dissimilarity, node_reports};
use diachron_core::repair::repair;
use diachron_core::temporal_graph::{parse_links_str, write_links, ValidationMode};
use diachron_core::{Cover, ModularityView, RawLink, TemporalGraph};
use proptest::prelude::*;

fn raw_links(max: usize) -> impl Strategy<Value = Vec<RawLink>> {
    let label = prop::sample::select(vec!["A", "B", "C", "D", "E"]);
    prop::collection::vec((label.clone(), 0u64..12, label, 0u64..12), 0..max).prop_map(|v| {
        v.into_iter()
            .map(|(a, ta, b, tb)| RawLink::new(a, ta, b, tb))
            .collect()
    })
}

fn small_view() -> impl Strategy<Value = ModularityView> {
    (2usize..=10).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 1u32..4), 1..25).prop_map(move |edges| {
            let edges: Vec<_> = edges.into_iter().map(|(a, b, w)| (a, b, w as f64)).collect();
            ModularityView::from_edges(n, &edges)
        })
    })
}

/// Pairwise definition: count unordered pairs co-assigned by exactly one side.
fn pairwise_dissimilarity(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let mut d = 0;
    for i in 0..n {
        for j in i + 1..n {
            if (a[i] == a[j]) != (b[i] == b[j]) {
                d += 1;
            }
        }
    }
    d as f64 / (n * (n - 1) / 2) as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn link_file_round_trip(links in raw_links(40)) {
        let mut text = Vec::new();
        write_links(&mut text, &links).unwrap();
        let parsed = parse_links_str(std::str::from_utf8(&text).unwrap(), ValidationMode::Permissive).unwrap();
        prop_assert_eq!(&parsed, &links);
        prop_assert_eq!(TemporalGraph::from_links(&parsed), TemporalGraph::from_links(&links));
    }

    #[test]
    fn graph_size_bounds(links in raw_links(40)) {
        let g = TemporalGraph::from_links(&links);
        prop_assert!(g.node_count() <= 2 * links.len());
        prop_assert_eq!(g.total_weight(), links.len() as u64);
        prop_assert_eq!(g.links().iter().map(|l| l.weight).sum::<u64>(), g.total_weight());
    }

    #[test]
    fn coarsening_keeps_physical_projection(links in raw_links(40), k in 1u64..6) {
        let g = TemporalGraph::from_links(&links);
        let c = g.coarsen_time(k).unwrap();
        prop_assert_eq!(c.project_physical(), g.project_physical());
        prop_assert_eq!(c.total_weight(), g.total_weight());
        prop_assert_eq!(g.coarsen_time(1).unwrap(), g);
    }

    #[test]
    fn single_community_has_zero_modularity(view in small_view()) {
        let q = modularity(&view, &Cover::single(view.node_count())).unwrap();
        prop_assert!(q.abs() < 1e-12);
    }

    #[test]
    fn modularity_ignores_labels(view in small_view(), labels in prop::collection::vec(0usize..4, 10), shift in 1usize..50) {
        let n = view.node_count();
        let a = Cover::from_labels(labels[..n].iter().copied());
        let b = Cover::from_labels(labels[..n].iter().map(|l| (l + shift) * 7));
        let qa = modularity(&view, &a).unwrap();
        let qb = modularity(&view, &b).unwrap();
        prop_assert!((qa - qb).abs() < 1e-12);
        prop_assert!((-0.5 - 1e-12..=1.0).contains(&qa));
    }

    #[test]
    fn dissimilarity_matches_pairwise(a in prop::collection::vec(0usize..4, 2..40), seed in any::<u64>()) {
        let b: Vec<usize> = a.iter().enumerate().map(|(i, x)| ((i as u64 ^ seed) % 3) as usize + x % 2).collect();
        let d = dissimilarity(&a, &b).unwrap();
        prop_assert!((d - pairwise_dissimilarity(&a, &b)).abs() < 1e-12);
        prop_assert_eq!(d, dissimilarity(&b, &a).unwrap());
        prop_assert_eq!(dissimilarity(&a, &a).unwrap(), 0.0);
        let relabeled: Vec<usize> = a.iter().map(|x| 100 - 3 * x).collect();
        prop_assert_eq!(dissimilarity(&relabeled, &b).unwrap(), d);
        prop_assert!((0.0..=1.0).contains(&d));
    }

    #[test]
    fn report_invariants(links in raw_links(40), labels in prop::collection::vec(0usize..5, 80)) {
        let g = TemporalGraph::from_links(&links);
        let cover = Cover::from_labels(labels[..g.node_count()].iter().copied());
        let reports = community_reports(&g, &cover).unwrap();
        prop_assert_eq!(reports.iter().map(|r| r.temporal_size).sum::<usize>(), g.node_count());
        for r in &reports {
            prop_assert!(r.z <= r.temporal_size);
            prop_assert!((0.0..1.0).contains(&r.na));
            prop_assert_eq!(r.na == 0.0, r.z == r.temporal_size);
            prop_assert!((0.0..=1.0).contains(&r.sc));
            prop_assert!((0.0..=1.0).contains(&r.hi));
        }
        for r in node_reports(&g, &cover).unwrap() {
            prop_assert!(r.membership <= r.lifetime);
            prop_assert!(r.cm > 0.0 && r.cm <= 1.0);
            prop_assert!((0.0..=1.0).contains(&r.ct));
            if r.lifetime == 1 { prop_assert!(r.cm == 1.0 && r.ct == 0.0); }
            if r.membership == 1 { prop_assert_eq!(r.ct, 0.0); }
        }
    }

    #[test]
    fn repair_is_sound(links in raw_links(40), labels in prop::collection::vec(0usize..8, 80), overlap in 1usize..3) {
        let g = TemporalGraph::from_links(&links);
        let cover = Cover::from_labels(labels[..g.node_count()].iter().copied());
        let (out, trace) = repair(&cover, &g, overlap).unwrap();
        prop_assert_eq!(out.len(), g.node_count());
        prop_assert!(trace.len() < cover.community_count().max(1));
        prop_assert_eq!(out.community_count() + trace.len(), cover.community_count());
        for step in &trace {
            prop_assert!(step.gain > 0.0);
        }
        // Nodes grouped together stay together.
        for i in 0..g.node_count() {
            for j in 0..g.node_count() {
                if cover.community(i) == cover.community(j) {
                    prop_assert_eq!(out.community(i), out.community(j));
                }
            }
        }
    }

    #[test]
    fn repair_identity_when_nodes_never_split(links in raw_links(40)) {
        let g = TemporalGraph::from_links(&links);
        // Every physical node's instances share one community.
        let cover = Cover::from_labels(g.nodes().iter().map(|n| n.node));
        let (out, trace) = repair(&cover, &g, 1).unwrap();
        prop_assert_eq!(out, cover);
        prop_assert!(trace.is_empty());
    }
}

// Greedy Louvain misses the exhaustive optimum by more than 0.05 on roughly
// one random graph in a thousand; the sample is pinned so runs are repeatable.
proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        rng_seed: prop::test_runner::RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn louvain_close_to_exhaustive(view in small_view(), seed in any::<u64>()) {
        let cover = louvain(&view, seed).unwrap();
        let q = modularity(&view, &cover).unwrap();
        let (_, best) = brute_force_best(&view).unwrap();
        prop_assert!(q <= best + 1e-9, "louvain {} above optimum {}", q, best);
        prop_assert!(q >= best - 0.05, "louvain {} far below optimum {}", q, best);
        let singletons = modularity(&view, &Cover::singletons(view.node_count())).unwrap();
        prop_assert!(q >= singletons - 1e-12);
        prop_assert_eq!(louvain(&view, seed).unwrap(), cover);
    }
}

#[test]
fn keyed_and_positional_dissimilarity_agree() {
    let a: BTreeMap<_, _> = [(1, 'x'), (2, 'x'), (3, 'y'), (4, 'y')].into();
    let b: BTreeMap<_, _> = [(1, 0), (2, 1), (3, 0), (4, 1)].into();
    let d = diachron_core::metrics::dissimilarity_keyed(&a, &b).unwrap();
    assert!((d - 2.0 / 3.0).abs() < 1e-12);
}
