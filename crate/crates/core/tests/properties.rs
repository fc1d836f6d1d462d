mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use semiregular::formulas::{self, FamilyParams, Invariant, WITNESSES};
use semiregular::graph::ary_vertex_set_in_full;
use semiregular::hochster::{self, HochsterOptions};
use semiregular::ideal::{self, MonomialIdeal};
use semiregular::oracles;
use semiregular::sdepth;
use semiregular::{canonical_form, induced_subgraph, Family, LeveledTree, SimpleGraph};

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Full), Just(Family::Ary)]
}

fn forest(max: usize) -> impl Strategy<Value = SimpleGraph> {
    (1..=max, any::<u64>(), 0.5f64..1.0)
        .prop_map(|(n, seed, attach)| common::random_forest(&mut common::rng(seed), n, attach))
}

fn hochster_depth(g: &SimpleGraph) -> usize {
    g.vertex_count() - hochster::betti_table(g).unwrap().pdim()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_shape(family in family(), n in 2usize..=6, k in 0usize..=9) {
        prop_assume!(n >= family.min_degree_parameter());
        let count = family.vertex_count(n, k).unwrap();
        prop_assume!(count <= 200_000);
        let t = LeveledTree::build(family, n, k).unwrap();
        let g = t.graph();
        prop_assert_eq!(g.vertex_count() as u128, count);
        prop_assert_eq!(g.edge_count() + 1, g.vertex_count());
        prop_assert!(g.is_connected() && g.is_forest());
        for (level, range) in t.levels().iter().enumerate() {
            prop_assert_eq!(range.len() as u128, family.level_size(n, level).unwrap());
            for v in range.clone() {
                prop_assert_eq!(t.label(v).unwrap().level, level);
                let want = match (level, family) {
                    _ if k == 0 => 0,
                    (l, _) if l == k => 1,
                    (0, Family::Full) => n,
                    (0, Family::Ary) => n - 1,
                    _ => n,
                };
                prop_assert_eq!(g.degree(v), want);
            }
        }
    }

    #[test]
    fn ary_tree_sits_inside_full_tree(n in 3usize..=5, k in 0usize..=6) {
        let full = LeveledTree::build(Family::Full, n, k).unwrap();
        let ary = LeveledTree::build(Family::Ary, n, k).unwrap();
        let sub = induced_subgraph(full.graph(), &ary_vertex_set_in_full(&full)).unwrap();
        prop_assert_eq!(sub.edges(), ary.graph().edges());
        prop_assert_eq!(sub.labels(), ary.graph().labels());
    }

    #[test]
    fn canonical_form_ignores_labels(g in forest(30), seed in any::<u64>()) {
        let h = common::relabel(&mut common::rng(seed), g.vertex_count(), g.edges());
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
    }

    #[test]
    fn text_round_trip(g in forest(20)) {
        prop_assert_eq!(SimpleGraph::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn formulas_are_exact_integers(family in family(), n in 3usize..=40, k in 0usize..=60) {
        let p = FamilyParams::new(family, n, k).unwrap();
        for inv in Invariant::ALL {
            let v = formulas::evaluate(&p, inv).unwrap();
            prop_assert_eq!(formulas::branch_value(&p, inv).unwrap(), v.value);
        }
        let get = |inv| formulas::evaluate(&p, inv).unwrap().value;
        prop_assert_eq!(get(Invariant::Depth) + get(Invariant::Pdim), get(Invariant::Vertices));
        prop_assert!(get(Invariant::Depth) <= get(Invariant::Dim));
        prop_assert!(get(Invariant::Reg) <= get(Invariant::Dim));
    }

    #[test]
    fn ideal_ops(g in forest(16), pick in any::<prop::sample::Index>()) {
        let i = ideal::edge_ideal(&g);
        prop_assert!(i.is_antichain());
        prop_assert_eq!(MonomialIdeal::from_text(&i.to_text()).unwrap(), i.clone());
        let x = pick.index(g.vertex_count());
        let colon = ideal::colon_by_variable(&i, x).unwrap();
        prop_assert!(colon.is_antichain());
        prop_assert!(!colon.support().contains(&x));
        // Every generator of I is a multiple of some generator of I : x.
        for gen in i.generators() {
            prop_assert!(colon.generators().iter().any(|c| c.iter().all(|v| gen.contains(v))));
        }
        for &y in g.neighbors(x) {
            prop_assert!(colon.contains_variable(y));
        }
        let sum = ideal::add_variable(&i, x).unwrap();
        prop_assert!(sum.contains_variable(x));
        prop_assert!(sum.generators().iter().all(|c| c.len() == 1 || !c.contains(&x)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn forest_dp_matches_exhaustive(g in forest(22)) {
        prop_assert_eq!(
            oracles::independence_number_forest(&g).unwrap(),
            oracles::independence_number_exhaustive(&g).unwrap()
        );
        prop_assume!(g.edge_count() <= oracles::EXHAUSTIVE_EDGE_CAP);
        prop_assert_eq!(
            oracles::induced_matching_number_forest(&g).unwrap(),
            oracles::induced_matching_number_exhaustive(&g).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pruning_never_changes_betti_numbers(n in 1usize..=12, seed in any::<u64>(), density in 0.1f64..0.6) {
        use rand::Rng;
        let mut rng = common::rng(seed);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(density))
            .collect();
        let g = SimpleGraph::new(n, edges).unwrap();
        let pruned = hochster::betti_table_with(&g, HochsterOptions::default()).unwrap();
        let full = hochster::betti_table_with(&g, HochsterOptions { prune_cones: false, ..Default::default() }).unwrap();
        prop_assert_eq!(&pruned.table, &full.table);
        let linear: u64 = full.table.entries().filter(|&((i, _), _)| i == 1).map(|(_, b)| b).sum();
        prop_assert_eq!(linear, g.edge_count() as u64);
    }

    #[test]
    fn stanley_depth_bounds_depth(g in forest(10)) {
        let s = sdepth::sdepth_value(&g).unwrap();
        prop_assert!(s >= hochster_depth(&g));
        prop_assert_eq!(sdepth::sdepth_value(&g.with_isolated_vertex()).unwrap(), s + 1);
    }
}

#[test]
fn stanley_depth_on_family_trees() {
    let cases = [
        (Family::Full, 3, 1),
        (Family::Full, 3, 2),
        (Family::Full, 4, 1),
        (Family::Full, 5, 1),
        (Family::Ary, 3, 1),
        (Family::Ary, 3, 2),
        (Family::Ary, 4, 1),
        (Family::Ary, 4, 2),
        (Family::Ary, 5, 1),
        (Family::Ary, 6, 1),
    ];
    for (family, n, k) in cases {
        let g = LeveledTree::build(family, n, k).unwrap().into_graph();
        let want = formulas::depth_formula(&FamilyParams::new(family, n, k).unwrap())
            .unwrap()
            .as_u64()
            .unwrap() as usize;
        let s = sdepth::sdepth_value(&g).unwrap();
        assert_eq!(s, want, "{family}({n},{k})");
        assert!(s >= hochster_depth(&g));
        if g.vertex_count() <= 13 {
            assert_eq!(
                sdepth::sdepth_value(&g.with_isolated_vertex()).unwrap(),
                s + 1,
                "{family}({n},{k}) + point"
            );
        }
    }
}

/// In each induction step the competing lower bound exceeds the target
/// depth by exactly `witness(n) / ((n-1)^3 - 1)`.
#[test]
fn witness_gaps() {
    for n in 3..=15usize {
        let d_a = |k: usize| {
            formulas::depth_formula(&FamilyParams::new(Family::Ary, n, k).unwrap())
                .unwrap()
                .value
        };
        let d_f = |k: usize| {
            formulas::depth_formula(&FamilyParams::new(Family::Full, n, k).unwrap())
                .unwrap()
                .value
        };
        let nb = BigInt::from(n);
        let m = BigInt::from(n - 1);
        let denom = m.pow(3) - 1;
        let w = |i: usize| WITNESSES[i].eval(&nb);
        for k in 4..=30usize {
            match k % 3 {
                1 => {
                    assert_eq!((&m * d_a(k - 1) - d_a(k)) * &denom, w(0), "ary n={n} k={k}");
                    assert_eq!((&nb * d_a(k - 1) - d_f(k)) * &denom, w(3), "full n={n} k={k}");
                }
                2 => {
                    assert_eq!((&m * &m * d_a(k - 2) + 1 - d_a(k)) * &denom, w(1), "ary n={n} k={k}");
                    assert_eq!((&nb * &m * d_a(k - 2) + 1 - d_f(k)) * &denom, w(4), "full n={n} k={k}");
                }
                _ => {
                    for i in 1..n {
                        let i_b = BigInt::from(i);
                        let bound = (&i_b - 1) * &m * d_a(k - 2) + (&m - &i_b) * d_a(k - 1) + &m * &m * d_a(k - 3) + 1;
                        assert_eq!((bound - d_a(k)) * &denom, w(2), "ary n={n} k={k} i={i}");
                    }
                    let bound = &m * &m * d_a(k - 3) + &m * d_a(k - 1) + 1;
                    assert_eq!((bound - d_f(k)) * &denom, w(2), "full n={n} k={k}");
                }
            }
        }
        assert!(formulas::positivity_witnesses(n)
            .unwrap()
            .iter()
            .all(|(_, v)| *v > BigInt::from(0)));
    }
}

#[test]
fn level_union_predicates() {
    let t = LeveledTree::build(Family::Full, 3, 2).unwrap();
    let r = oracles::level_union_report(&t, 22).unwrap();
    assert!(r.maximum_contains_levels);
    assert!(r.maximum_equals_levels);
    assert!(r.maximal_without_levels > 0);
    let t = LeveledTree::build(Family::Full, 3, 3).unwrap();
    let r = oracles::level_union_report(&t, 22).unwrap();
    assert!(r.maximum_contains_levels);
    assert_eq!(r.maximum_size, 15);
}
