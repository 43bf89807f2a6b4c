//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every criterion reports even when
//! an earlier one fails. The process exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use treepark::asymptotics::{
    abs_diff, phase_check, ratio_check, singularity, tabulated, PhaseLaw, TabulatedRow,
};
use treepark::brute::{self, CountOptions};
use treepark::catalog::{
    general_table, series_counts, verify_further_families, verify_general_relation,
    verify_integrality, verify_ode, verify_pde, verify_prime_relation, verify_specializations,
    GfKind, VerifyReport,
};
use treepark::closed_forms::{evaluate, FormulaId};
use treepark::families::{generate_trees, Family};
use treepark::kind::CountKind;
use treepark::parking::{
    is_general_parking, is_parking_function, is_prime, simulate, PreferenceSequence,
};

const FAMILIES: [Family; 5] = [
    Family::Ordered,
    Family::Unordered,
    Family::DAry(2),
    Family::DAry(3),
    Family::DBundled(2),
];

/// Failures and a count of what was checked.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn report(&mut self, r: &VerifyReport) {
        for c in &r.checks {
            self.check(c.holds, || {
                format!(
                    "{}: {} fails at n = {:?}",
                    r.suite, c.label, c.first_mismatch
                )
            });
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn summary(&self, what: &str) -> String {
        if self.passed() {
            format!("{} {what} checks hold", self.checked)
        } else {
            let shown: Vec<&str> = self.failures.iter().take(4).map(String::as_str).collect();
            format!(
                "{} of {} {what} checks fail: {}",
                self.failures.len(),
                self.checked,
                shown.join("; ")
            )
        }
    }
}

fn opts() -> CountOptions {
    CountOptions::default()
}

fn three_way() -> (bool, String) {
    let mut t = Tally::default();
    for family in FAMILIES {
        for kind in CountKind::BASIC {
            let n_max = if kind.is_distribution() { 6 } else { 5 };
            let series = series_counts(family, kind.into(), n_max).expect("catalog row");
            for n in 1..=n_max {
                let b = brute::count(family, kind, n, &opts()).expect("within budget");
                t.check(b == series[n - 1], || {
                    format!(
                        "{family} {kind} n={n}: brute {b} vs series {}",
                        series[n - 1]
                    )
                });
            }
        }
    }
    let mut printed = Tally::default();
    for id in FormulaId::univariate() {
        let (family, kind) = id.target().expect("univariate formulas have a target");
        let series = series_counts(family, kind, 12).expect("catalog row");
        let start = id.min_n().max(2);
        for n in start..=12 {
            let v = evaluate(id, n, None);
            let ok = v.as_ref().is_ok_and(|v| *v == series[n - 1]);
            let what = || {
                let got = match &v {
                    Ok(v) => v.to_string(),
                    Err(e) => format!("error ({e})"),
                };
                format!("{id} n={n}: {got} vs series {}", series[n - 1])
            };
            if id.is_printed() {
                printed.check(ok, what);
            } else {
                t.check(ok, what);
            }
        }
    }
    let anchors: [(Family, CountKind, usize, u64); 6] = [
        (Family::Ordered, CountKind::Functions, 3, 168),
        (Family::Ordered, CountKind::PrimeFunctions, 3, 24),
        (Family::Ordered, CountKind::Distributions, 3, 48),
        (Family::Ordered, CountKind::PrimeDistributions, 3, 12),
        (Family::Unordered, CountKind::Functions, 3, 132),
        (Family::DAry(2), CountKind::PrimeDistributions, 3, 48),
    ];
    for (family, kind, n, want) in anchors {
        let b = brute::count(family, kind, n, &opts()).expect("small");
        t.check(b == BigUint::from(want), || {
            format!("anchor {family} {kind} n={n}: {b} != {want}")
        });
    }
    let unordered_p = series_counts(Family::Unordered, GfKind::PrimeFunctions, 8).expect("row");
    for n in 1..=8 {
        let want = treepark::numeric::factorial(2 * n - 2);
        t.check(unordered_p[n - 1] == want, || {
            format!("unordered P_{n} != (2n-2)!")
        });
    }
    let passed = t.passed() && printed.passed();
    let detail = format!(
        "brute = series = derived forms: {}; printed closed forms: {}",
        t.summary("exact"),
        printed.summary("exact")
    );
    (passed, detail)
}

fn general_case() -> (bool, String) {
    let mut t = Tally::default();
    for family in FAMILIES {
        for distributions in [false, true] {
            let table = general_table(family, distributions, 8).expect("bivariate row");
            for n in 1..=5 {
                let b = brute::general_counts(family, n, distributions, &opts()).expect("budget");
                t.check(b == table[n - 1], || {
                    format!(
                        "{family} dist={distributions} n={n}: brute {b:?} vs series {:?}",
                        table[n - 1]
                    )
                });
            }
            let kind = if distributions {
                GfKind::Distributions
            } else {
                GfKind::Functions
            };
            let g = series_counts(family, kind, 8).expect("row");
            for n in 1..=8 {
                let trees = family.tree_count(n).expect("combinatorial");
                t.check(table[n - 1][0] == trees, || {
                    format!("{family} n={n}: m=0 column != T_n")
                });
                t.check(table[n - 1][n] == g[n - 1], || {
                    format!("{family} n={n}: m=n column != G_n")
                });
            }
        }
    }
    for (id, family, distributions) in [
        (FormulaId::UnorderedF, Family::Unordered, false),
        (FormulaId::OrderedFTilde, Family::Ordered, true),
    ] {
        let table = general_table(family, distributions, 8).expect("row");
        for n in 1..=8 {
            for (m, want) in table[n - 1].iter().enumerate() {
                let v = evaluate(id, n, Some(m)).expect("valid arguments");
                t.check(&v == want, || format!("{id} n={n} m={m}: {v} vs {want}"));
            }
        }
    }
    (t.passed(), t.summary("exact"))
}

fn identity_suites() -> (bool, String) {
    let mut t = Tally::default();
    let families = [
        Family::Ordered,
        Family::Unordered,
        Family::DAry(2),
        Family::DAry(3),
        Family::DBundled(2),
        Family::DBundled(3),
    ];
    for family in families {
        t.report(&verify_ode(family, 25).expect("ode suite"));
        t.report(&verify_pde(family, 12).expect("pde suite"));
        t.report(&verify_prime_relation(family, 25).expect("prime suite"));
        t.report(&verify_general_relation(family, 12).expect("general suite"));
    }
    t.report(&verify_specializations(25).expect("specializations"));
    t.report(&verify_further_families(25).expect("further families"));
    for family in [Family::Motzkin, Family::StrictBinary] {
        let series = series_counts(family, GfKind::Distributions, 6).expect("row");
        for n in 1..=6 {
            let b = brute::count(family, CountKind::Distributions, n, &opts()).expect("small");
            t.check(b == series[n - 1], || {
                format!("{family} n={n}: brute {b} vs series {}", series[n - 1])
            });
        }
    }
    (t.passed(), t.summary("identity"))
}

fn asymptotic_profiles() -> (bool, String) {
    let mut t = Tally::default();
    let mut skipped = Vec::new();
    for kind in GfKind::UNIVARIATE {
        for row in TabulatedRow::rows(&[2, 3]) {
            let Some(tab) = tabulated(kind, row) else {
                skipped.push(format!("{} {row}", kind.symbol()));
                continue;
            };
            let p = singularity(row.family(), kind, 50).expect("singularity");
            let dt = abs_diff(&p.tau, &tab.tau);
            let dr = abs_diff(&p.rho, &tab.rho);
            t.check(dt < 1e-10, || {
                format!("{} {row}: tau off by {dt:.3e}", kind.symbol())
            });
            t.check(dr < 1e-10, || {
                format!(
                    "{} {row}: rho {:.10} vs tabulated {:.10}",
                    kind.symbol(),
                    p.rho.to_f64(),
                    tab.rho.to_f64()
                )
            });
        }
    }
    let named = [
        TabulatedRow::Ordered,
        TabulatedRow::Unordered,
        TabulatedRow::Binary,
        TabulatedRow::DAry(3),
        TabulatedRow::DBundled(2),
        TabulatedRow::DBundled(3),
    ];
    let mut worst: f64 = 0.0;
    for kind in GfKind::UNIVARIATE {
        for row in named {
            let r = ratio_check(row.family(), kind, 200, 0.10).expect("ladder");
            worst = worst.max(r.relative_error);
            t.check(r.passed && r.reference_tabulated, || {
                format!(
                    "{} {row}: ladder {:.6} vs C {:.6}",
                    kind.symbol(),
                    r.extrapolated,
                    r.reference
                )
            });
        }
    }
    let detail = format!(
        "{}; worst ladder error {worst:.2e}; degenerate generic rows covered by the binary row: {}",
        t.summary("profile"),
        skipped.join(", ")
    );
    (t.passed(), detail)
}

fn phase_transition() -> (bool, String) {
    let mut t = Tally::default();
    for law in PhaseLaw::ALL {
        let at0 = law.probability(0.0).expect("in range");
        t.check((at0 - 1.0).abs() <= 4.0 * f64::EPSILON, || {
            format!("{law}: p(0) = {at0}")
        });
        let at_crit = law.probability(law.alpha0()).expect("in range");
        t.check(at_crit == 0.0, || format!("{law}: p(alpha0) = {at_crit}"));
    }
    let u =
        phase_check(PhaseLaw::new(Family::Unordered, false).unwrap(), 400, 0.25).expect("exact");
    t.check(u.relative_gap < 0.05, || {
        format!("unordered functions gap {:.4}", u.relative_gap)
    });
    let o = phase_check(PhaseLaw::new(Family::Ordered, true).unwrap(), 200, 0.2).expect("exact");
    t.check(o.relative_gap < 0.10, || {
        format!("ordered distributions gap {:.4}", o.relative_gap)
    });
    let detail = format!(
        "{}; gaps {:.4} (n=400) and {:.4} (n=200)",
        t.summary("phase"),
        u.relative_gap,
        o.relative_gap
    );
    (t.passed(), detail)
}

fn properties() -> (bool, String) {
    let mut t = Tally::default();
    let mut rng = StdRng::seed_from_u64(0x7ee5_9a4c);
    let mut triples = 0;
    while triples < 12_000 {
        let family = common::GROWABLE[rng.gen_range(0..common::GROWABLE.len())];
        let n = rng.gen_range(1..=8);
        let tree = common::random_tree(family, n, &mut rng);
        let m = if rng.gen_bool(0.5) {
            n
        } else {
            rng.gen_range(0..=n)
        };
        let s = if m == n && rng.gen_bool(0.7) {
            common::random_parking_candidate(&tree, &mut rng)
        } else {
            common::random_sequence(n, m, &mut rng)
        };
        let perm = common::random_permutation(m, &mut rng);
        let p = s.permuted(&perm);
        let a = simulate(&tree, &s).expect("valid");
        let b = simulate(&tree, &p).expect("valid");
        t.check(
            a.success == b.success
                && (!a.success || (a.occupied() == b.occupied() && a.used_edges == b.used_edges)),
            || format!("permutation changed the outcome on {tree} for {s:?}"),
        );
        t.check(
            is_general_parking(&tree, &s).unwrap() == is_general_parking(&tree, &p).unwrap(),
            || format!("general predicate not invariant on {tree}"),
        );
        if m == n {
            t.check(
                is_parking_function(&tree, &s).unwrap() == a.success
                    && is_prime(&tree, &s).unwrap() == (a.success && a.all_edges_used(&tree))
                    && is_prime(&tree, &s).unwrap() == is_prime(&tree, &p).unwrap(),
                || format!("characterization differs from simulation on {tree} for {s:?}"),
            );
        }
        triples += 1;
    }
    let mut exhaustive = 0usize;
    for family in common::GROWABLE.into_iter().chain([Family::StrictBinary]) {
        for n in 1..=4 {
            for tree in generate_trees(family, n).expect("generatable") {
                for v in common::all_sequences(n, n) {
                    let s = PreferenceSequence::sequence(v);
                    let o = simulate(&tree, &s).expect("valid");
                    exhaustive += 1;
                    t.check(
                        is_parking_function(&tree, &s).unwrap() == o.success
                            && is_prime(&tree, &s).unwrap()
                                == (o.success && o.all_edges_used(&tree)),
                        || format!("characterization differs on {tree} for {s:?}"),
                    );
                }
            }
        }
    }
    let report = verify_integrality(2, 25, 25).expect("integrality");
    t.report(&report);
    let report = verify_integrality(3, 25, 25).expect("integrality");
    t.report(&report);
    let detail = format!(
        "{}; {triples} random triples, {exhaustive} exhaustive pairs",
        t.summary("property")
    );
    (t.passed(), detail)
}

/// A criterion's name and its check, returning pass/fail and a detail line.
type Criterion = (&'static str, fn() -> (bool, String));

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("three-way agreement", three_way),
        ("general-case agreement", general_case),
        ("identity suites", identity_suites),
        ("asymptotic profiles", asymptotic_profiles),
        ("phase transition", phase_transition),
        ("property tests", properties),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| (false, format!("panicked: {e:?}")));
        all &= ok;
        let status = if ok { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {} ({name}, {:.1}s): {detail}",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
