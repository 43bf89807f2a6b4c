//! Independent routes to the same numbers must agree.

use num_bigint::BigUint;
use num_rational::BigRational;

use treepark::brute::{self, CountOptions};
use treepark::catalog::{
    count, leaf_table, normalized_coefficient, series_counts, CatalogEntry, GfKind,
};
use treepark::closed_forms::{evaluate, FormulaId};
use treepark::families::Family;
use treepark::kind::CountKind;
use treepark::series::lagrange_coefficient;

const FAMILIES: [Family; 4] = [
    Family::Ordered,
    Family::Unordered,
    Family::DAry(2),
    Family::DBundled(2),
];

#[test]
fn shape_cache_and_sequence_iteration_do_not_change_counts() {
    let plain = CountOptions {
        shape_cache: false,
        exhaustive_sequences: true,
        ..CountOptions::default()
    };
    for family in FAMILIES {
        for kind in CountKind::BASIC
            .into_iter()
            .chain([CountKind::GeneralFunctions(2)])
        {
            for n in 2..=4 {
                let fast = brute::count(family, kind, n, &CountOptions::default()).unwrap();
                let slow = brute::count(family, kind, n, &plain).unwrap();
                assert_eq!(fast, slow, "{family} {kind} n={n}");
            }
        }
    }
}

#[test]
fn worker_count_does_not_change_counts() {
    let with = |w| CountOptions {
        workers: Some(w),
        ..CountOptions::default()
    };
    for family in [Family::Ordered, Family::DAry(3)] {
        let one = brute::count_by_leaves(family, CountKind::Functions, 5, &with(1)).unwrap();
        let four = brute::count_by_leaves(family, CountKind::Functions, 5, &with(4)).unwrap();
        assert_eq!(one, four, "{family}");
    }
}

#[test]
fn leaf_refinement_matches_bivariate_series() {
    for family in FAMILIES {
        let table = leaf_table(family, 5).unwrap();
        for n in 1..=5 {
            let by_leaves = brute::count_by_leaves(
                family,
                CountKind::Distributions,
                n,
                &CountOptions::default(),
            )
            .unwrap();
            for (k, want) in table[n - 1].iter().enumerate() {
                let got = by_leaves.get(&k).cloned().unwrap_or_default();
                assert_eq!(&got, want, "{family} n={n} leaves={k}");
            }
        }
    }
}

#[test]
fn lagrange_extraction_matches_fixed_point_series() {
    for family in FAMILIES {
        for kind in GfKind::UNIVARIATE {
            let entry = CatalogEntry::lookup(family, kind).unwrap();
            let phi = entry.phi().unwrap();
            let x = entry.x_series(9).unwrap();
            for n in 1..=9 {
                let l: BigRational = lagrange_coefficient(&entry.x, phi, n, None).unwrap();
                assert_eq!(l, x.coeff(n), "{family} {kind} n={n}");
            }
            assert_eq!(
                normalized_coefficient(&x, kind, 4),
                BigRational::from_integer(count(family, kind.try_into_count(), 4).unwrap().into()),
            );
        }
    }
}

trait IntoCount {
    fn try_into_count(self) -> CountKind;
}

impl IntoCount for GfKind {
    fn try_into_count(self) -> CountKind {
        match self {
            GfKind::Functions => CountKind::Functions,
            GfKind::PrimeFunctions => CountKind::PrimeFunctions,
            GfKind::Distributions => CountKind::Distributions,
            GfKind::PrimeDistributions => CountKind::PrimeDistributions,
            other => panic!("{other} has no single count"),
        }
    }
}

#[test]
fn closed_forms_match_series() {
    for id in FormulaId::univariate().filter(|id| *id != FormulaId::OrderedGPrinted) {
        let (family, kind) = id.target().unwrap();
        let series = series_counts(family, kind, 10).unwrap();
        for n in id.min_n().max(2)..=10 {
            assert_eq!(evaluate(id, n, None).unwrap(), series[n - 1], "{id} n={n}");
        }
    }
}

#[test]
fn printed_ordered_g_differs_from_the_counts() {
    let series = series_counts(Family::Ordered, GfKind::Functions, 4).unwrap();
    assert_eq!(
        evaluate(FormulaId::OrderedGPrinted, 2, None).unwrap(),
        series[1]
    );
    assert_eq!(
        evaluate(FormulaId::OrderedGPrinted, 3, None).unwrap(),
        BigUint::from(150u32)
    );
    assert_eq!(series[2], BigUint::from(168u32));
}

#[test]
fn catalan_and_schroder_sequences() {
    let catalan: Vec<u32> = vec![1, 1, 2, 5, 14, 42, 132];
    let schroder: Vec<u32> = vec![1, 2, 6, 22, 90, 394, 1806];
    for n in 0..7 {
        assert_eq!(
            evaluate(FormulaId::Catalan, n, None).unwrap(),
            BigUint::from(catalan[n])
        );
        assert_eq!(
            evaluate(FormulaId::Schroder, n, None).unwrap(),
            BigUint::from(schroder[n])
        );
    }
}

#[test]
fn general_counts_with_m_equal_n_are_parking_functions() {
    for family in FAMILIES {
        for n in 1..=4 {
            let opts = CountOptions::default();
            let g = brute::count(family, CountKind::Functions, n, &opts).unwrap();
            let f = brute::count(family, CountKind::GeneralFunctions(n), n, &opts).unwrap();
            assert_eq!(g, f, "{family} n={n}");
        }
    }
}
