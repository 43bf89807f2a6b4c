use std::collections::BTreeMap;

use clap::ValueEnum;
use num_bigint::BigUint;

use treepark::asymptotics::{phase_check, ratio_check, singularity, PhaseLaw, Real, Route};
use treepark::brute::{self, Budget, CountOptions};
use treepark::catalog::{
    general_table, leaf_table, series_counts, verify_further_families, verify_general_relation,
    verify_integrality, verify_ode, verify_pde, verify_prime_relation, verify_specializations,
    CatalogEntry, GfKind, VerifyReport,
};
use treepark::closed_forms::{evaluate, FormulaId};
use treepark::families::Family;
use treepark::kind::CountKind;

use crate::args::{
    AsymArgs, ClosedArgs, EnumerateArgs, GeneralArgs, Method, PhaseArgs, SeriesArgs, SizeRange,
    Suite, VerifyArgs, Workload,
};
use crate::output::{
    AsymOutput, Check, ClosedRow, ClosedTable, Constants, CountRow, CountTable, Exact, Ladder,
    Output, PhaseOutput, PhaseRow, Rung, SeriesRow, SeriesTable, SuiteReport, VerifyOutput,
};
use crate::CliError;

/// A command's output and whether everything it compared agreed.
pub struct Done {
    pub output: Output,
    pub verified: bool,
    /// Human-readable reasons for `verified == false`.
    pub problems: Vec<String>,
}

impl Done {
    fn ok(output: Output) -> Done {
        Done {
            output,
            verified: true,
            problems: Vec::new(),
        }
    }
}

fn options(w: &Workload) -> CountOptions {
    let mut budget = Budget::default();
    if let Some(max) = w.max_evaluations {
        budget.max_evaluations = max;
    }
    CountOptions {
        budget,
        workers: w.workers.map(|w| w as usize),
        ..CountOptions::default()
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// The derived explicit formula for `(family, kind)` valid at `n`, if any.
fn closed_formula(family: Family, kind: CountKind, n: usize) -> Option<FormulaId> {
    let target = Some((family, GfKind::from(kind)));
    FormulaId::ALL
        .into_iter()
        .find(|f| !f.is_misprint() && f.target() == target && n >= f.min_n())
}

fn supports(method: Method, family: Family, kind: CountKind, n: usize) -> Result<(), String> {
    match method {
        Method::Brute if !family.is_generatable() => {
            Err(format!("{family} trees are not generated"))
        }
        Method::Series if CatalogEntry::lookup(family, kind.into()).is_err() => Err(format!(
            "no generating function for {family} {}",
            GfKind::from(kind)
        )),
        Method::Closed if closed_formula(family, kind, n).is_none() => {
            let target = Some((family, GfKind::from(kind)));
            let start = FormulaId::ALL
                .into_iter()
                .filter(|f| !f.is_misprint() && f.target() == target)
                .map(FormulaId::min_n)
                .min();
            Err(match start {
                Some(s) => format!("the explicit formula for {family} {kind} starts at n = {s}"),
                None => format!("no explicit formula for {family} {kind}"),
            })
        }
        _ => Ok(()),
    }
}

fn check_sizes(range: SizeRange, kind: CountKind) -> Result<(), CliError> {
    if range.lo == 0 {
        return Err(usage("tree sizes start at n = 1"));
    }
    range
        .iter()
        .try_for_each(|n| kind.check(n))
        .map_err(|e| usage(e.to_string()))
}

/// Picks the value most methods report; ties go to the series, then brute force.
fn tally(n: usize, m: Option<usize>, values: BTreeMap<String, String>) -> CountRow {
    let freq = |v: &String| values.values().filter(|w| *w == v).count();
    let mut best: Option<(&String, usize)> = None;
    for method in ["series", "brute", "closed"] {
        if let Some(v) = values.get(method) {
            let f = freq(v);
            if best.is_none_or(|(_, g)| f > g) {
                best = Some((v, f));
            }
        }
    }
    let (count, agreeing) = best.map(|(v, f)| (v.clone(), f)).unwrap_or_default();
    CountRow {
        n,
        m,
        count,
        compared: values.len(),
        values,
        agreeing,
    }
}

fn finish_counts(table: CountTable, general: bool) -> Done {
    let problems: Vec<String> = table
        .rows
        .iter()
        .filter(|r| !r.agree())
        .map(|r| {
            let at = match r.m {
                Some(m) => format!("n = {}, m = {m}", r.n),
                None => format!("n = {}", r.n),
            };
            let values: Vec<String> = r.values.iter().map(|(k, v)| format!("{k} {v}")).collect();
            format!("methods disagree at {at}: {}", values.join(", "))
        })
        .collect();
    let output = if general {
        Output::General(table)
    } else {
        Output::Enumerate(table)
    };
    Done {
        output,
        verified: problems.is_empty(),
        problems,
    }
}

pub fn enumerate(args: &EnumerateArgs) -> Result<Done, CliError> {
    let family = args.family.resolve()?;
    let kind = args.kind;
    check_sizes(args.n, kind)?;
    let methods = args.method.expand();
    for &method in &methods {
        for n in args.n.iter() {
            supports(method, family, kind, n)
                .map_err(|why| usage(format!("method {method}: {why}")))?;
        }
    }
    let opts = options(&args.workload);
    let series = if methods.contains(&Method::Series) {
        Some(match kind.general_m() {
            Some(m) => general_table(family, kind.is_distribution(), args.n.hi)?
                .into_iter()
                .map(|row| row.get(m).cloned().unwrap_or_default())
                .collect(),
            None => series_counts(family, kind.into(), args.n.hi)?,
        })
    } else {
        None
    };
    let mut rows = Vec::new();
    for n in args.n.iter() {
        let mut values = BTreeMap::new();
        for &method in &methods {
            let v: BigUint = match method {
                Method::Brute => brute::count(family, kind, n, &opts)?,
                Method::Series => series.as_ref().expect("series computed")[n - 1].clone(),
                Method::Closed => {
                    let f = closed_formula(family, kind, n).expect("support checked");
                    evaluate(f, n, kind.general_m())?
                }
                Method::All => unreachable!("expanded"),
            };
            values.insert(method.to_string(), v.to_string());
        }
        rows.push(tally(n, None, values));
    }
    let table = CountTable {
        family: family.to_string(),
        kind: kind.to_string(),
        methods: methods.iter().map(Method::to_string).collect(),
        all_agree: rows.iter().all(CountRow::agree),
        rows,
    };
    Ok(finish_counts(table, false))
}

pub fn general(args: &GeneralArgs) -> Result<Done, CliError> {
    let family = args.family.resolve()?;
    let dist = args.kind.distributions();
    let kind_at = |m| {
        if dist {
            CountKind::GeneralDistributions(m)
        } else {
            CountKind::GeneralFunctions(m)
        }
    };
    check_sizes(args.n, kind_at(args.m.unwrap_or(0)))?;
    let methods = args.method.expand();
    for &method in &methods {
        for n in args.n.iter() {
            supports(method, family, kind_at(args.m.unwrap_or(0)), n)
                .map_err(|why| usage(format!("method {method}: {why}")))?;
        }
    }
    let opts = options(&args.workload);
    let series = if methods.contains(&Method::Series) {
        Some(general_table(family, dist, args.n.hi)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for n in args.n.iter() {
        let ms: Vec<usize> = match args.m {
            Some(m) => vec![m],
            None => (0..=n).collect(),
        };
        let mut per_method: BTreeMap<Method, Vec<BigUint>> = BTreeMap::new();
        for &method in &methods {
            let values = match method {
                Method::Brute if args.m.is_none() => brute::general_counts(family, n, dist, &opts)?,
                Method::Brute => vec![brute::count(family, kind_at(ms[0]), n, &opts)?],
                Method::Series => {
                    let row = &series.as_ref().expect("series computed")[n - 1];
                    ms.iter().map(|&m| row[m].clone()).collect()
                }
                Method::Closed => {
                    let f = closed_formula(family, kind_at(0), n).expect("support checked");
                    ms.iter()
                        .map(|&m| evaluate(f, n, Some(m)))
                        .collect::<Result<_, _>>()?
                }
                Method::All => unreachable!("expanded"),
            };
            per_method.insert(method, values);
        }
        for (i, &m) in ms.iter().enumerate() {
            let values = per_method
                .iter()
                .map(|(method, v)| (method.to_string(), v[i].to_string()))
                .collect();
            rows.push(tally(n, Some(m), values));
        }
    }
    let table = CountTable {
        family: family.to_string(),
        kind: if dist {
            "general-distributions"
        } else {
            "general-functions"
        }
        .into(),
        methods: methods.iter().map(Method::to_string).collect(),
        all_agree: rows.iter().all(CountRow::agree),
        rows,
    };
    Ok(finish_counts(table, true))
}

pub fn series(args: &SeriesArgs) -> Result<Done, CliError> {
    let family = args.family.resolve()?;
    let entry = CatalogEntry::lookup(family, args.kind)?;
    let order = args.order;
    if order == 0 {
        return Err(usage("order must be at least 1"));
    }
    let mut rows = Vec::new();
    match args.kind {
        GfKind::LeafDistributions => {
            let x = entry.x_bivariate(order)?;
            let table = leaf_table(family, order)?;
            for n in 1..=order {
                for (k, count) in table[n - 1].iter().enumerate() {
                    rows.push(SeriesRow {
                        n,
                        m: None,
                        leaves: Some(k),
                        coefficient: x.coeff2(n, k).to_string(),
                        count: count.to_string(),
                    });
                }
            }
        }
        GfKind::GeneralFunctions | GfKind::GeneralDistributions => {
            let x = entry.x_bivariate(order)?;
            let table = general_table(family, args.kind.is_distribution(), order)?;
            for n in 1..=order {
                for (m, count) in table[n - 1].iter().enumerate() {
                    rows.push(SeriesRow {
                        n,
                        m: Some(m),
                        leaves: None,
                        coefficient: x.coeff2(n, n - m).to_string(),
                        count: count.to_string(),
                    });
                }
            }
        }
        kind => {
            let x = entry.x_series(order)?;
            let counts = series_counts(family, kind, order)?;
            rows.extend((1..=order).map(|n| SeriesRow {
                n,
                m: None,
                leaves: None,
                coefficient: x.coeff(n).to_string(),
                count: counts[n - 1].to_string(),
            }));
        }
    }
    Ok(Done::ok(Output::Series(SeriesTable {
        family: family.to_string(),
        kind: args.kind.to_string(),
        order,
        rows,
    })))
}

pub fn closed(args: &ClosedArgs) -> Result<Done, CliError> {
    let f = args.formula;
    if !f.takes_m() && args.m.is_some() {
        return Err(usage(format!("{f} takes no m")));
    }
    let mut rows = Vec::new();
    for n in args.n.iter() {
        if !f.takes_m() {
            rows.push(ClosedRow {
                n,
                m: None,
                value: evaluate(f, n, None)?.to_string(),
            });
            continue;
        }
        let ms: Vec<usize> = match args.m {
            Some(m) if m > n => return Err(usage(format!("m = {m} exceeds n = {n}"))),
            Some(m) => vec![m],
            None => (0..=n).collect(),
        };
        for m in ms {
            rows.push(ClosedRow {
                n,
                m: Some(m),
                value: evaluate(f, n, Some(m))?.to_string(),
            });
        }
    }
    let target = f.target();
    Ok(Done::ok(Output::Closed(ClosedTable {
        formula: f.to_string(),
        family: target.map(|(fam, _)| fam.to_string()),
        kind: target.map(|(_, k)| k.to_string()),
        misprint: f.is_misprint(),
        rows,
    })))
}

fn constants(tau: &Real, rho: &Real, c: &Real, digits: usize) -> Constants {
    Constants {
        tau: tau.to_fixed(digits),
        rho: rho.to_fixed(digits),
        c: c.to_fixed(digits),
    }
}

pub fn asym(args: &AsymArgs) -> Result<Done, CliError> {
    let family = args.family.resolve()?;
    if args.kind.is_bivariate() {
        return Err(usage(format!(
            "{} is bivariate; pick a univariate kind",
            args.kind
        )));
    }
    let profile = singularity(family, args.kind, args.digits)?;
    let digits = args.digits as usize;
    let ladder = args
        .ladder
        .map(|n_max| ratio_check(family, args.kind, n_max, args.tolerance))
        .transpose()?
        .map(|r| Ladder {
            n_max: r.n_max,
            extrapolated: r.extrapolated,
            reference: r.reference,
            relative_error: r.relative_error,
            tolerance: r.tolerance,
            eventually_monotone: r.eventually_monotone,
            passed: r.passed,
            rungs: r
                .ladder
                .iter()
                .map(|g| Rung {
                    n: g.n,
                    ratio: g.ratio,
                    extrapolated: g.extrapolated,
                })
                .collect(),
        });
    let problems: Vec<String> = ladder
        .iter()
        .filter(|l| !l.passed)
        .map(|l| {
            format!(
                "ratio ladder misses C by {:.3e} relative, above tolerance {}",
                l.relative_error, l.tolerance
            )
        })
        .collect();
    let output = AsymOutput {
        family: family.to_string(),
        kind: args.kind.to_string(),
        digits: args.digits,
        solved: constants(&profile.tau, &profile.rho, &profile.c, digits),
        tabulated: profile
            .tabulated
            .as_ref()
            .map(|t| constants(&t.tau, &t.rho, &t.c, digits)),
        ladder,
    };
    Ok(Done {
        output: Output::Asym(output),
        verified: problems.is_empty(),
        problems,
    })
}

pub fn phase(args: &PhaseArgs) -> Result<Done, CliError> {
    let family = args.family.resolve()?;
    let law = PhaseLaw::new(family, args.kind.distributions()).map_err(|e| usage(e.to_string()))?;
    let mut rows = Vec::new();
    for &alpha in &args.alpha {
        let limit = law.probability(alpha).map_err(|e| usage(e.to_string()))?;
        let exact = args
            .n
            .map(|n| phase_check(law, n, alpha))
            .transpose()?
            .map(|r| Exact {
                n: r.n,
                m: r.m,
                probability: r.exact,
                relative_gap: r.relative_gap,
                route: match r.route {
                    Route::ClosedForm => "closed-form",
                    Route::Series => "series",
                }
                .into(),
            });
        rows.push(PhaseRow {
            alpha,
            limit,
            prefactor: law.prefactor(alpha),
            exact,
        });
    }
    Ok(Done::ok(Output::Phase(PhaseOutput {
        family: family.to_string(),
        kind: if law.distributions {
            "distributions"
        } else {
            "functions"
        }
        .into(),
        alpha0: law.alpha0(),
        rows,
    })))
}

const IDENTITY_FAMILIES: [Family; 6] = [
    Family::Ordered,
    Family::Unordered,
    Family::DAry(2),
    Family::DAry(3),
    Family::DBundled(2),
    Family::DBundled(3),
];

const THREEWAY_FAMILIES: [Family; 5] = [
    Family::Ordered,
    Family::Unordered,
    Family::DAry(2),
    Family::DAry(3),
    Family::DBundled(2),
];

fn convert(report: VerifyReport) -> SuiteReport {
    SuiteReport {
        passed: report.passed(),
        suite: report.suite,
        family: report.family.map(|f| f.to_string()),
        checks: report
            .checks
            .into_iter()
            .map(|c| Check {
                label: c.label,
                order: c.order,
                holds: c.holds,
                first_mismatch: c.first_mismatch,
            })
            .collect(),
    }
}

fn check(label: String, n: usize, holds: bool) -> Check {
    Check {
        label,
        order: n,
        holds,
        first_mismatch: (!holds).then_some(n),
    }
}

/// Brute force against series against the derived explicit formulas.
fn threeway(family: Family, opts: &CountOptions) -> Result<SuiteReport, CliError> {
    let mut checks = Vec::new();
    for kind in CountKind::BASIC {
        let n_max = if kind.is_distribution() { 6 } else { 5 };
        let series = series_counts(family, kind.into(), n_max)?;
        for n in 1..=n_max {
            let s = &series[n - 1];
            let b = brute::count(family, kind, n, opts)?;
            checks.push(check(
                format!("{kind} n={n}: brute = series ({s})"),
                n,
                &b == s,
            ));
            if let Some(f) = closed_formula(family, kind, n) {
                let c = evaluate(f, n, None)?;
                checks.push(check(format!("{kind} n={n}: {f} = series"), n, &c == s));
            }
        }
    }
    Ok(SuiteReport {
        suite: "threeway".into(),
        family: Some(family.to_string()),
        passed: checks.iter().all(|c| c.holds),
        checks,
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Done, CliError> {
    let only = args.family()?;
    let pick = |all: &[Family]| -> Vec<Family> {
        match only {
            Some(f) => vec![f],
            None => all.to_vec(),
        }
    };
    let identity_families = pick(&IDENTITY_FAMILIES);
    let (order, bi) = (args.order, args.bivariate_order);
    let wants = |s: Suite| args.suite == s || args.suite == Suite::All;
    let mut reports = Vec::new();
    for &f in &identity_families {
        if wants(Suite::Ode) {
            reports.push(convert(verify_ode(f, order)?));
        }
        if wants(Suite::Pde) {
            reports.push(convert(verify_pde(f, bi)?));
        }
        if wants(Suite::Prime) {
            reports.push(convert(verify_prime_relation(f, order)?));
        }
        if wants(Suite::General) {
            reports.push(convert(verify_general_relation(f, bi)?));
        }
    }
    if wants(Suite::Specializations) && only.is_none() {
        reports.push(convert(verify_specializations(order)?));
    }
    if wants(Suite::FurtherFamilies) && only.is_none() {
        reports.push(convert(verify_further_families(order)?));
    }
    if wants(Suite::Integrality) {
        let ds: Vec<u32> = match only {
            Some(Family::DAry(d) | Family::DBundled(d)) => vec![d],
            _ => vec![2, 3],
        };
        for d in ds {
            reports.push(convert(verify_integrality(d, order, bi)?));
        }
    }
    if wants(Suite::Threeway) {
        let opts = options(&args.workload);
        for f in pick(&THREEWAY_FAMILIES) {
            reports.push(threeway(f, &opts)?);
        }
    }
    if reports.is_empty() {
        return Err(usage("the selected suite has no checks for this family"));
    }
    let checks = reports.iter().map(|r| r.checks.len()).sum();
    let problems: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.checks.iter().filter(|c| !c.holds).map(move |c| {
                let family = r
                    .family
                    .as_deref()
                    .map(|f| format!(" {f}"))
                    .unwrap_or_default();
                format!("{}{family}: {} fails", r.suite, c.label)
            })
        })
        .collect();
    let suite = args
        .suite
        .to_possible_value()
        .map_or_else(String::new, |v| v.get_name().to_string());
    Ok(Done {
        verified: problems.is_empty(),
        output: Output::Verify(VerifyOutput {
            suite,
            order,
            bivariate_order: bi,
            checks,
            failures: problems.len(),
            passed: problems.is_empty(),
            reports,
        }),
        problems,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_formula_is_preferred() {
        assert_eq!(
            closed_formula(Family::Ordered, CountKind::Functions, 3),
            Some(FormulaId::OrderedG)
        );
        assert_eq!(
            closed_formula(Family::Ordered, CountKind::Functions, 1),
            None
        );
        assert_eq!(
            closed_formula(Family::Unordered, CountKind::PrimeDistributions, 1),
            Some(FormulaId::UnorderedPTildeSchroder)
        );
        assert_eq!(
            closed_formula(Family::Unordered, CountKind::GeneralFunctions(2), 3),
            Some(FormulaId::UnorderedF)
        );
        assert_eq!(
            closed_formula(Family::DAry(3), CountKind::Functions, 3),
            None
        );
    }

    #[test]
    fn majority_and_ties() {
        let row = |pairs: &[(&str, &str)]| {
            tally(
                3,
                None,
                pairs
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .collect(),
            )
        };
        let r = row(&[("brute", "168"), ("series", "168"), ("closed", "150")]);
        assert_eq!((r.count.as_str(), r.agreeing, r.compared), ("168", 2, 3));
        let r = row(&[("brute", "1"), ("closed", "2")]);
        assert_eq!((r.count.as_str(), r.agreeing), ("1", 1));
        assert_eq!(row(&[("series", "5")]).agreement(), "1/1 methods agree");
    }
}
