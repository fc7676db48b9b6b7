//! Cross-module invariants, property-tested on small instances.

use dembed_core::diamond::{
    enumerate_addresses, DiamondAddress, DiamondParams, Half, Refinement, SubdiamondRef,
};
use dembed_core::embedding::{
    evaluate_distortion, star_embedding, verify_report, DistanceTable, EmbeddingMap, SourceMetric,
};
use dembed_core::exec::Parallelism;
use dembed_core::metric::{boundary_profile, diamond_distance};
use dembed_core::search::{exhaustive_search, local_search, SearchConfig};
use dembed_core::tree::TreeSpec;
use proptest::prelude::*;

fn params(m: u32, k: u32) -> DiamondParams {
    DiamondParams::finite(m, k).unwrap()
}

fn refinement(k: u32) -> impl Strategy<Value = Refinement> {
    (1..=k, prop::bool::ANY).prop_map(|(branch, upper)| {
        Refinement::new(branch, if upper { Half::Upper } else { Half::Lower })
    })
}

/// Interior addresses of D_{m,k}, any creation step.
fn inner(m: u32, k: u32) -> impl Strategy<Value = DiamondAddress> {
    (prop::collection::vec(refinement(k), 0..m as usize), 1..=k)
        .prop_map(|(path, middle)| DiamondAddress::inner(path, middle))
}

fn address(m: u32, k: u32) -> impl Strategy<Value = DiamondAddress> {
    prop_oneof![
        1 => Just(DiamondAddress::Bottom),
        1 => Just(DiamondAddress::Top),
        8 => inner(m, k),
    ]
}

fn tree_as_table(spec: TreeSpec) -> DistanceTable {
    let source = SourceMetric::tree(spec);
    let n = source.point_count();
    let labels: Vec<String> = (0..n).map(|i| source.point_name(i)).collect();
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| source.distance(i, j)).collect())
        .collect();
    DistanceTable::new(labels, rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms_hold_on_sampled_triples(
        u in address(3, 2),
        v in address(3, 2),
        w in address(3, 2),
    ) {
        let p = params(3, 2);
        let duv = diamond_distance(&u, &v, &p).unwrap();
        prop_assert_eq!(duv, diamond_distance(&v, &u, &p).unwrap());
        prop_assert_eq!(duv == 0, u == v);
        let duw = diamond_distance(&u, &w, &p).unwrap();
        let dwv = diamond_distance(&w, &v, &p).unwrap();
        prop_assert!(duv <= duw + dwv);
    }

    #[test]
    fn profiles_conserve_the_subdiamond_diameter(v in inner(4, 2)) {
        let p = params(4, 2);
        let path = match &v {
            DiamondAddress::Inner { path, .. } => path.clone(),
            _ => unreachable!(),
        };
        for len in 0..=path.len() {
            let s = SubdiamondRef::new(path[..len].to_vec());
            let prof = boundary_profile(&v, &s, &p).unwrap();
            prop_assert_eq!(prof.d_bottom + prof.d_top, s.diameter(&p));
        }
    }

    #[test]
    fn distances_ignore_unused_branches(u in inner(3, 2), v in inner(3, 2)) {
        prop_assert_eq!(
            diamond_distance(&u, &v, &params(3, 2)).unwrap(),
            diamond_distance(&u, &v, &params(3, 5)).unwrap()
        );
    }

    #[test]
    fn refining_once_doubles_distances(u in address(3, 2), v in address(3, 2)) {
        prop_assert_eq!(
            2 * diamond_distance(&u, &v, &params(3, 2)).unwrap(),
            diamond_distance(&u, &v, &params(4, 2)).unwrap()
        );
    }

    #[test]
    fn serialized_addresses_round_trip(v in address(5, 7)) {
        let text = v.to_string();
        let back: DiamondAddress = text.parse().unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn reports_close_over_their_own_inequalities(
        perm in Just((0..12u32).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let p = params(2, 2);
        let addresses = enumerate_addresses(&p, 100).unwrap();
        let images: Vec<DiamondAddress> = perm[..7]
            .iter()
            .map(|&i| addresses[i as usize].clone())
            .collect();
        let f = EmbeddingMap::new(SourceMetric::tree(TreeSpec::new(2)), p, images).unwrap();
        let rep = evaluate_distortion(&f, Parallelism::Sequential).unwrap();
        prop_assert!(verify_report(&f, &rep).is_ok());
    }

    #[test]
    fn scaling_the_source_changes_nothing(c in 1u64..=40) {
        let target = params(2, 2);
        let cfg = SearchConfig::default();
        let plain = SourceMetric::table(tree_as_table(TreeSpec::new(1)));
        let scaled = SourceMetric::table(tree_as_table(TreeSpec::new(1)).scaled(c));
        let a = exhaustive_search(&plain, &target, &cfg).unwrap();
        let b = exhaustive_search(&scaled, &target, &cfg).unwrap();
        prop_assert_eq!(&a.report.distortion, &b.report.distortion);
        prop_assert_eq!(a.map.images(), b.map.images());
        prop_assert!(a.exhausted && b.exhausted);
    }
}

#[test]
fn search_quality_is_ordered() {
    let source = SourceMetric::tree(TreeSpec::new(2));
    let target = params(3, 2);
    // The default budget is shared across 44 first-point branches; the
    // deepest one needs more than its slice, so give the proof headroom.
    let cfg = SearchConfig {
        node_budget: 100_000_000,
        ..SearchConfig::default()
    };
    let exact = exhaustive_search(&source, &target, &cfg).unwrap();
    let cfg = SearchConfig::default();
    let local = local_search(&source, &target, &cfg).unwrap();
    let (level, star) = star_embedding(2).unwrap();
    assert_eq!(level, 3);
    let star_rep = evaluate_distortion(&star, Parallelism::Sequential).unwrap();
    assert!(exact.exhausted);
    assert!(exact.report.distortion <= local.report.distortion);
    assert!(local.report.distortion <= star_rep.distortion);
}

#[test]
fn minimum_distortion_does_not_grow_with_level() {
    let source = SourceMetric::tree(TreeSpec::new(1));
    let cfg = SearchConfig::default();
    let mut last = None;
    for m in 1..=3 {
        let out = exhaustive_search(&source, &params(m, 2), &cfg).unwrap();
        assert!(out.exhausted, "m = {m}");
        if let Some(prev) = &last {
            assert!(&out.report.distortion <= prev, "m = {m}");
        }
        last = Some(out.report.distortion);
    }
}
