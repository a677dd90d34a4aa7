mod common;

use common::*;
use dars_core::simgen::gen_value_dependencies;
use dars_core::vdg::{
    all_pairs_strengths, all_pairs_strengths_sequential, influence, Quality::*, StrengthMatrices, ValueDependencyGraph,
};
use proptest::prelude::*;

fn off_diagonal_equal(s: &StrengthMatrices, pos: &[Vec<Option<f64>>], neg: &[Vec<Option<f64>>]) -> bool {
    let n = s.n();
    (0..n).all(|i| (0..n).filter(|&j| j != i).all(|j| s.positive(i, j) == pos[i][j] && s.negative(i, j) == neg[i][j]))
}

fn graph() -> impl Strategy<Value = ValueDependencyGraph> {
    (2usize..=7, 0.0f64..=1.0, 0.0f64..=0.6, any::<u64>())
        .prop_map(|(n, d, neg, seed)| random_graph(n, d, neg, &mut rng(seed)))
}

fn positive_graph() -> impl Strategy<Value = ValueDependencyGraph> {
    (2usize..=7, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, d, seed)| random_graph(n, d, 0.0, &mut rng(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    /// Without negative dependencies every result is a widest simple path.
    #[test]
    fn positive_graphs_match_simple_paths(g in positive_graph()) {
        let s = all_pairs_strengths(&g);
        let (pos, neg) = simple_path_strengths(&g);
        prop_assert!(off_diagonal_equal(&s, &pos, &neg));
    }

    /// Every reported strength is realised by some walk of that sign.
    #[test]
    fn results_are_realised_by_walks(g in graph()) {
        let s = all_pairs_strengths(&g);
        let (wp, wn) = walk_strengths(&g);
        let n = g.n();
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                if let Some(v) = s.positive(i, j) {
                    prop_assert!(wp[i][j].is_some_and(|w| v <= w));
                }
                if let Some(v) = s.negative(i, j) {
                    prop_assert!(wn[i][j].is_some_and(|w| v <= w));
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree(g in graph()) {
        prop_assert_eq!(all_pairs_strengths(&g), all_pairs_strengths_sequential(&g));
    }

    #[test]
    fn influence_is_bounded_and_direct_edges_count(g in graph()) {
        let s = all_pairs_strengths(&g);
        let inf = influence(&s);
        let n = g.n();
        for i in 0..n {
            prop_assert_eq!(inf.get(i, i), 0.0);
            for j in (0..n).filter(|&j| j != i) {
                prop_assert!((-1.0..=1.0).contains(&inf.get(i, j)));
                match g.quality(i, j) {
                    Positive => prop_assert!(s.positive(i, j).is_some_and(|v| v >= g.strength(i, j))),
                    Negative => prop_assert!(s.negative(i, j).is_some_and(|v| v >= g.strength(i, j))),
                    Nonspecified => {}
                }
            }
        }
    }
}

/// A negative cycle that is only entered and left through one vertex: the
/// walk 0 -> 1 -> 2 -> 1 -> 2 has a positive sign, no simple path does.
#[test]
fn sign_flipping_cycle_is_followed() {
    let g = ValueDependencyGraph::from_edges(3, &[(0, 1, Positive, 0.9), (1, 2, Negative, 0.9), (2, 1, Positive, 0.9)])
        .unwrap();
    let s = all_pairs_strengths(&g);
    let (sp, _) = simple_path_strengths(&g);
    assert_eq!(sp[0][2], None);
    assert_eq!(s.positive(0, 2), Some(0.9));
    assert_eq!(s.negative(0, 2), Some(0.9));
}

/// Share of generated graphs on which the all-pairs results coincide with
/// simple-path enumeration, per negative-dependency level.
#[test]
fn agreement_with_simple_paths_by_nvdl() {
    let mut r = rng(2024);
    for nvdl in [0.0, 0.25, 0.5] {
        let mut agree = 0;
        let total = 270;
        for t in 0..total {
            let n = 2 + t % 7;
            let vdl = 0.1 * (1 + t % 9) as f64;
            let g = gen_value_dependencies(n, vdl, nvdl, &mut r);
            let (pos, neg) = simple_path_strengths(&g);
            if off_diagonal_equal(&all_pairs_strengths(&g), &pos, &neg) {
                agree += 1;
            }
        }
        println!("nvdl {nvdl}: {agree}/{total} graphs agree");
        if nvdl == 0.0 {
            assert_eq!(agree, total);
        }
    }
}
