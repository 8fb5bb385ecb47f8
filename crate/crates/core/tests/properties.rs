//! Property tests for the structural invariants: cover partitioning,
//! canonicalisation, discretisation and encoding symmetries.

use proptest::prelude::*;

use sdlist::data::{
    equal_frequency_cutpoints, generate_items, Column, ColumnKind, ColumnRole, ColumnSchema,
    Dataset, Item, Predicate,
};
use sdlist::encoding::{bayes_normal, two_point_selection};
use sdlist::model::{Description, Subgroup, SubgroupList, TargetPart};

fn arbitrary_dataset() -> impl Strategy<Value = Dataset> {
    // two nominal and one numeric explanatory column, nominal target
    (4usize..40).prop_flat_map(|n| {
        (
            proptest::collection::vec(0u32..3, n),
            proptest::collection::vec(0u32..2, n),
            proptest::collection::vec(-50i32..50, n),
            proptest::collection::vec(0u32..2, n),
        )
            .prop_map(|(a, b, x, y)| {
                Dataset::new(
                    vec![
                        ColumnSchema {
                            name: "a".into(),
                            role: ColumnRole::Explanatory,
                            kind: ColumnKind::Nominal,
                        },
                        ColumnSchema {
                            name: "b".into(),
                            role: ColumnRole::Explanatory,
                            kind: ColumnKind::Nominal,
                        },
                        ColumnSchema {
                            name: "x".into(),
                            role: ColumnRole::Explanatory,
                            kind: ColumnKind::Numeric,
                        },
                        ColumnSchema {
                            name: "class".into(),
                            role: ColumnRole::Target,
                            kind: ColumnKind::Nominal,
                        },
                    ],
                    vec![
                        Column::Nominal {
                            dict: vec!["a0".into(), "a1".into(), "a2".into()],
                            codes: a,
                        },
                        Column::Nominal {
                            dict: vec!["b0".into(), "b1".into()],
                            codes: b,
                        },
                        Column::Numeric(x.into_iter().map(f64::from).collect()),
                        Column::Nominal {
                            dict: vec!["neg".into(), "pos".into()],
                            codes: y,
                        },
                    ],
                )
                .unwrap()
            })
    })
}

fn list_from_items(dataset: &Dataset, picks: &[usize]) -> SubgroupList {
    let universe = generate_items(dataset, 3);
    let mut list = SubgroupList::empty(dataset);
    for &pick in picks {
        if universe.items.is_empty() {
            break;
        }
        let item = universe.items[pick % universe.items.len()];
        list.subgroups.push(Subgroup {
            description: Description::new(vec![item]),
            cover_size: 0,
            statistics: vec![],
        });
    }
    list
}

proptest! {
    #[test]
    fn cover_partitions_the_rows(
        dataset in arbitrary_dataset(),
        picks in proptest::collection::vec(0usize..64, 0..5),
    ) {
        let list = list_from_items(&dataset, &picks);
        let cover = list.cover(&dataset);
        let mut all: Vec<u32> = cover
            .subgroup_rows
            .iter()
            .flatten()
            .chain(&cover.default_rows)
            .copied()
            .collect();
        all.sort_unstable();
        // disjoint and exhaustive
        prop_assert_eq!(all, (0..dataset.n() as u32).collect::<Vec<_>>());
        let sum: usize = cover.subgroup_rows.iter().map(Vec::len).sum::<usize>()
            + cover.default_rows.len();
        prop_assert_eq!(sum, dataset.n());
    }

    #[test]
    fn condition_order_never_changes_matches(
        dataset in arbitrary_dataset(),
        cut in -50i32..50,
        cat in 0u32..3,
    ) {
        let forward = Description::new(vec![
            Item { column: 0, predicate: Predicate::Equals(cat) },
            Item { column: 2, predicate: Predicate::LessEq(f64::from(cut)) },
        ]);
        let backward = Description::new(vec![
            Item { column: 2, predicate: Predicate::LessEq(f64::from(cut)) },
            Item { column: 0, predicate: Predicate::Equals(cat) },
        ]);
        prop_assert_eq!(&forward, &backward);
        for row in 0..dataset.n() {
            prop_assert_eq!(forward.matches(&dataset, row), backward.matches(&dataset, row));
        }
    }

    #[test]
    fn cutpoints_are_sorted_deduped_members(
        values in proptest::collection::vec(-1000i32..1000, 1..200),
        n_cut in 1usize..10,
    ) {
        let values: Vec<f64> = values.into_iter().map(f64::from).collect();
        let cuts = equal_frequency_cutpoints(&values, n_cut);
        prop_assert!(cuts.len() <= n_cut);
        prop_assert!(cuts.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(cuts.iter().all(|c| values.contains(c)));
    }

    #[test]
    fn item_counts_match_cut_count(
        values in proptest::collection::vec(-1000i32..1000, 2..120),
        n_cut in 1usize..8,
    ) {
        let floats: Vec<f64> = values.iter().map(|&v| f64::from(v)).collect();
        let n = floats.len();
        let dataset = Dataset::new(
            vec![
                ColumnSchema {
                    name: "x".into(),
                    role: ColumnRole::Explanatory,
                    kind: ColumnKind::Numeric,
                },
                ColumnSchema {
                    name: "y".into(),
                    role: ColumnRole::Target,
                    kind: ColumnKind::Numeric,
                },
            ],
            vec![Column::Numeric(floats.clone()), Column::Numeric(vec![0.0; n])],
        )
        .unwrap();
        let c = equal_frequency_cutpoints(&floats, n_cut).len();
        let universe = generate_items(&dataset, n_cut);
        // cuts are data values and intervals are closed, so no generated
        // item has an empty cover and the counts are exact
        let one_op = universe
            .items
            .iter()
            .filter(|i| i.predicate.n_operators() == 1)
            .count();
        prop_assert_eq!(one_op, 2 * c);
        prop_assert_eq!(universe.len() - one_op, c * (c - 1) / 2);
        // determinism
        prop_assert_eq!(universe.items, generate_items(&dataset, n_cut).items);
    }

    #[test]
    fn bayes_code_is_shift_invariant(
        raw in proptest::collection::vec(-100i32..100, 3..30),
        offset in -1000i32..1000,
    ) {
        let values: Vec<f64> = raw.iter().map(|&v| f64::from(v)).collect();
        let part = TargetPart::Numeric { values: values.clone() };
        prop_assume!(part.is_encodable());
        let stats = part.statistics();
        let (mu_d, sigma_d) = (1.5, 2.0);

        let shifted: Vec<f64> = values.iter().map(|&v| v + f64::from(offset)).collect();
        let shifted_stats = TargetPart::Numeric { values: shifted.clone() }.statistics();

        let base = two_point_selection(&values, mu_d, sigma_d).unwrap();
        let moved = two_point_selection(&shifted, mu_d + f64::from(offset), sigma_d).unwrap();
        let code = bayes_normal(stats.n(), stats.variance(), base.cost).unwrap();
        let shifted_code =
            bayes_normal(shifted_stats.n(), shifted_stats.variance(), moved.cost).unwrap();
        prop_assert!((code - shifted_code).abs() < 1e-6,
            "shift changed the code: {} vs {}", code, shifted_code);
    }

    #[test]
    fn normal_statistics_rss_identity(
        raw in proptest::collection::vec(-100f64..100f64, 1..50),
    ) {
        let part = TargetPart::Numeric { values: raw.clone() };
        let stats = part.statistics();
        let mean = stats.mean();
        let direct: f64 = raw.iter().map(|&v| (v - mean) * (v - mean)).sum();
        let scale = direct.abs().max(1.0);
        prop_assert!((stats.rss() - direct).abs() / scale < 1e-9);
    }
}
