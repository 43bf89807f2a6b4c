use treepark::asymptotics::{
    abs_diff, consistent, ratio_check, singularity, tabulated, with_precision, TabulatedRow,
};
use treepark::catalog::GfKind;
use treepark::families::Family;

#[test]
fn elementary_singularities() {
    for kind in [GfKind::Functions, GfKind::Distributions] {
        for row in [
            TabulatedRow::Ordered,
            TabulatedRow::Unordered,
            TabulatedRow::Binary,
        ] {
            let p = singularity(row.family(), kind, 40).unwrap();
            with_precision(192, || {
                let closed = tabulated(kind, row).unwrap();
                assert!(
                    abs_diff(&p.tau, &closed.tau) < 1e-38,
                    "{kind} {row} tau {}",
                    p.tau
                );
                assert!(
                    abs_diff(&p.rho, &closed.rho) < 1e-38,
                    "{kind} {row} rho {}",
                    p.rho
                );
            });
            assert!(consistent(&p).unwrap(), "{kind} {row}");
        }
    }
}

#[test]
fn recipe_constant_matches_closed_forms_beyond_the_acceptance_rows() {
    for kind in GfKind::UNIVARIATE {
        for row in TabulatedRow::rows(&[4, 5]) {
            let Some(closed) = tabulated(kind, row) else {
                continue;
            };
            let p = singularity(row.family(), kind, 30).unwrap();
            with_precision(256, || {
                let scale = closed.c.abs().to_f64().max(1.0);
                assert!(
                    abs_diff(&p.c, &closed.c) / scale < 1e-25,
                    "{kind} {row}: {} vs {}",
                    p.c,
                    closed.c
                );
                assert!(abs_diff(&p.tau, &closed.tau) < 1e-25, "{kind} {row} tau");
            });
        }
    }
}

#[test]
fn profiles_without_a_closed_form_are_consistent() {
    let mut checked = 0;
    for family in [
        Family::Motzkin,
        Family::UnorderedUnaryBinary,
        Family::Mobile,
        Family::StrictBinary,
    ] {
        // Implicit rows have no `Q = zφ(Q)` form and are rejected.
        let Ok(p) = singularity(family, GfKind::Distributions, 30) else {
            continue;
        };
        checked += 1;
        assert!(p.tabulated.is_none());
        assert!(consistent(&p).unwrap(), "{family}");
        assert!(!p.c.is_negative());
    }
    assert!(checked >= 2, "only {checked} profiles");
}

#[test]
fn ladders_settle_monotonically() {
    for (family, kind) in [
        (Family::Unordered, GfKind::Functions),
        (Family::DAry(3), GfKind::PrimeDistributions),
        (Family::Motzkin, GfKind::Distributions),
    ] {
        let r = ratio_check(family, kind, 300, 5e-3).unwrap();
        assert!(r.passed, "{family} {kind}: error {}", r.relative_error);
        assert!(r.eventually_monotone, "{family} {kind}");
        assert_eq!(r.ladder.last().unwrap().n, 300);
    }
}
