//! Command results and their renderings.
//!
//! Every command produces one [`Output`]. The JSON rendering is the serde form
//! of that value; table and CSV go through a common [`Table`]; bfile needs a
//! single count per `n`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::args::Format;
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Output {
    Enumerate(CountTable),
    General(CountTable),
    Series(SeriesTable),
    Closed(ClosedTable),
    Asym(AsymOutput),
    Phase(PhaseOutput),
    Verify(VerifyOutput),
}

#[derive(Clone, Debug, Serialize)]
pub struct CountTable {
    pub family: String,
    pub kind: String,
    pub methods: Vec<String>,
    pub rows: Vec<CountRow>,
    pub all_agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountRow {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// The value most methods report.
    pub count: String,
    /// Value per method.
    pub values: BTreeMap<String, String>,
    pub agreeing: usize,
    pub compared: usize,
}

impl CountRow {
    pub fn agree(&self) -> bool {
        self.agreeing == self.compared
    }

    pub fn agreement(&self) -> String {
        format!("{}/{} methods agree", self.agreeing, self.compared)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesTable {
    pub family: String,
    pub kind: String,
    pub order: usize,
    pub rows: Vec<SeriesRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesRow {
    pub n: usize,
    /// Drivers, for the general kinds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Leaves, for the leaf-marked kind.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaves: Option<usize>,
    /// Exact generating-function coefficient.
    pub coefficient: String,
    pub count: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedTable {
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Kept verbatim although it disagrees with the exact counts.
    pub misprint: bool,
    pub rows: Vec<ClosedRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedRow {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Constants {
    pub tau: String,
    pub rho: String,
    pub c: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymOutput {
    pub family: String,
    pub kind: String,
    pub digits: u32,
    #[serde(flatten)]
    pub solved: Constants,
    /// Closed forms for the same row, when tabulated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tabulated: Option<Constants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Ladder>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Ladder {
    pub n_max: usize,
    pub extrapolated: f64,
    pub reference: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub eventually_monotone: bool,
    pub passed: bool,
    pub rungs: Vec<Rung>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rung {
    pub n: usize,
    pub ratio: f64,
    pub extrapolated: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseOutput {
    pub family: String,
    pub kind: String,
    pub alpha0: f64,
    pub rows: Vec<PhaseRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseRow {
    pub alpha: f64,
    pub limit: f64,
    pub prefactor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Exact>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Exact {
    pub n: usize,
    pub m: usize,
    pub probability: f64,
    pub relative_gap: f64,
    pub route: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutput {
    pub suite: String,
    pub order: usize,
    pub bivariate_order: usize,
    pub reports: Vec<SuiteReport>,
    pub checks: usize,
    pub failures: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub order: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct ErrorOutput {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    pub exit_code: u8,
}

/// Headers, rows and `key: value` lines shown above a table.
struct Table {
    preamble: Vec<(String, String)>,
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn strings<const N: usize>(items: [&str; N]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Output {
    fn table(&self) -> Table {
        match self {
            Output::Enumerate(t) | Output::General(t) => {
                let general = t.rows.iter().any(|r| r.m.is_some());
                let mut headers = strings(["n"]);
                if general {
                    headers.push("m".into());
                }
                headers.push("count".into());
                headers.extend(t.methods.iter().cloned());
                headers.push("agreement".into());
                let rows = t
                    .rows
                    .iter()
                    .map(|r| {
                        let mut row = vec![r.n.to_string()];
                        if general {
                            row.push(opt(r.m));
                        }
                        row.push(r.count.clone());
                        row.extend(
                            t.methods
                                .iter()
                                .map(|m| r.values.get(m).cloned().unwrap_or_default()),
                        );
                        row.push(r.agreement());
                        row
                    })
                    .collect();
                Table {
                    preamble: vec![
                        ("family".into(), t.family.clone()),
                        ("kind".into(), t.kind.clone()),
                    ],
                    headers,
                    rows,
                }
            }
            Output::Series(t) => {
                let second = if t.rows.iter().any(|r| r.m.is_some()) {
                    Some("m")
                } else if t.rows.iter().any(|r| r.leaves.is_some()) {
                    Some("leaves")
                } else {
                    None
                };
                let mut headers = strings(["n"]);
                headers.extend(second.map(String::from));
                headers.extend(strings(["coefficient", "count"]));
                let rows = t
                    .rows
                    .iter()
                    .map(|r| {
                        let mut row = vec![r.n.to_string()];
                        if second.is_some() {
                            row.push(opt(r.m.or(r.leaves)));
                        }
                        row.push(r.coefficient.clone());
                        row.push(r.count.clone());
                        row
                    })
                    .collect();
                Table {
                    preamble: vec![
                        ("family".into(), t.family.clone()),
                        ("kind".into(), t.kind.clone()),
                        ("order".into(), t.order.to_string()),
                    ],
                    headers,
                    rows,
                }
            }
            Output::Closed(t) => {
                let with_m = t.rows.iter().any(|r| r.m.is_some());
                let mut headers = strings(["n"]);
                if with_m {
                    headers.push("m".into());
                }
                headers.push("value".into());
                let rows = t
                    .rows
                    .iter()
                    .map(|r| {
                        let mut row = vec![r.n.to_string()];
                        if with_m {
                            row.push(opt(r.m));
                        }
                        row.push(r.value.clone());
                        row
                    })
                    .collect();
                let mut preamble = vec![("formula".into(), t.formula.clone())];
                if t.misprint {
                    preamble.push((
                        "note".into(),
                        "as printed; disagrees with exact counts".into(),
                    ));
                }
                Table {
                    preamble,
                    headers,
                    rows,
                }
            }
            Output::Asym(a) => {
                let mut rows = vec![vec![
                    "solved".into(),
                    a.solved.tau.clone(),
                    a.solved.rho.clone(),
                    a.solved.c.clone(),
                ]];
                if let Some(t) = &a.tabulated {
                    rows.push(vec![
                        "tabulated".into(),
                        t.tau.clone(),
                        t.rho.clone(),
                        t.c.clone(),
                    ]);
                }
                let mut preamble = vec![
                    ("family".into(), a.family.clone()),
                    ("kind".into(), a.kind.clone()),
                    ("digits".into(), a.digits.to_string()),
                ];
                if let Some(l) = &a.ladder {
                    preamble.push((
                        "ladder".into(),
                        format!(
                            "N = {}: extrapolated {:.8}, reference {:.8}, relative error {:.2e} ({}){}",
                            l.n_max,
                            l.extrapolated,
                            l.reference,
                            l.relative_error,
                            if l.passed { "within tolerance" } else { "OUT OF TOLERANCE" },
                            if l.eventually_monotone { ", monotone" } else { ", not monotone" },
                        ),
                    ));
                }
                Table {
                    preamble,
                    headers: strings(["source", "tau", "rho", "C"]),
                    rows,
                }
            }
            Output::Phase(p) => {
                let exact = p.rows.iter().any(|r| r.exact.is_some());
                let mut headers = strings(["alpha", "limit", "prefactor"]);
                if exact {
                    headers.extend(strings(["n", "m", "exact", "relative_gap", "route"]));
                }
                let rows = p
                    .rows
                    .iter()
                    .map(|r| {
                        let mut row = vec![
                            r.alpha.to_string(),
                            format!("{:.10}", r.limit),
                            format!("{:.10}", r.prefactor),
                        ];
                        if let Some(e) = &r.exact {
                            row.extend([
                                e.n.to_string(),
                                e.m.to_string(),
                                format!("{:.10}", e.probability),
                                format!("{:.3e}", e.relative_gap),
                                e.route.clone(),
                            ]);
                        }
                        row
                    })
                    .collect();
                Table {
                    preamble: vec![
                        ("family".into(), p.family.clone()),
                        ("kind".into(), p.kind.clone()),
                        ("alpha0".into(), p.alpha0.to_string()),
                    ],
                    headers,
                    rows,
                }
            }
            Output::Verify(v) => {
                let rows = v
                    .reports
                    .iter()
                    .flat_map(|r| {
                        r.checks.iter().map(move |c| {
                            vec![
                                r.suite.clone(),
                                opt(r.family.as_ref()),
                                c.label.clone(),
                                c.order.to_string(),
                                if c.holds { "ok" } else { "FAIL" }.into(),
                                opt(c.first_mismatch),
                            ]
                        })
                    })
                    .collect();
                Table {
                    preamble: vec![
                        ("suite".into(), v.suite.clone()),
                        (
                            "result".into(),
                            format!("{} of {} checks hold", v.checks - v.failures, v.checks),
                        ),
                    ],
                    headers: strings([
                        "suite",
                        "family",
                        "check",
                        "order",
                        "status",
                        "first_mismatch",
                    ]),
                    rows,
                }
            }
        }
    }

    /// `(n, count)` pairs when the output has exactly one count per `n`.
    fn bfile(&self) -> Option<Vec<(usize, String)>> {
        let unique = |pairs: Vec<(usize, String)>| {
            let distinct = pairs.windows(2).all(|w| w[0].0 < w[1].0);
            distinct.then_some(pairs)
        };
        match self {
            Output::Enumerate(t) | Output::General(t) => {
                unique(t.rows.iter().map(|r| (r.n, r.count.clone())).collect())
            }
            Output::Series(t) => unique(t.rows.iter().map(|r| (r.n, r.count.clone())).collect()),
            Output::Closed(t) => unique(t.rows.iter().map(|r| (r.n, r.value.clone())).collect()),
            _ => None,
        }
    }
}

fn render_table(t: &Table) -> String {
    let mut out = String::new();
    for (k, v) in &t.preamble {
        out.push_str(&format!("{k}: {v}\n"));
    }
    if !t.preamble.is_empty() {
        out.push('\n');
    }
    let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
    for row in &t.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let numeric =
        |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || "+-./e".contains(c));
    let right: Vec<bool> = (0..widths.len())
        .map(|i| {
            t.rows
                .iter()
                .all(|r| r.get(i).is_none_or(|c| c.is_empty() || numeric(c)))
        })
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths.iter().zip(&right))
            .map(|(c, (w, r))| {
                if *r {
                    format!("{c:>w$}", w = *w)
                } else {
                    format!("{c:<w$}", w = *w)
                }
            })
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    out.push_str(&line(&t.headers));
    for row in &t.rows {
        out.push_str(&line(row));
    }
    out
}

fn render_csv(t: &Table) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.headers)
        .map_err(|e| CliError::Output(e.to_string()))?;
    for row in &t.rows {
        w.write_record(row)
            .map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

pub fn render(output: &Output, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => serde_json::to_string_pretty(output)
            .map(|s| s + "\n")
            .map_err(|e| CliError::Output(e.to_string())),
        Format::Table => Ok(render_table(&output.table())),
        Format::Csv => render_csv(&output.table()),
        Format::Bfile => {
            let pairs = output.bfile().ok_or_else(|| {
                CliError::Usage("bfile output needs exactly one count per n".into())
            })?;
            Ok(pairs
                .into_iter()
                .map(|(n, c)| format!("{n} {c}\n"))
                .collect())
        }
    }
}

pub fn render_error(err: &CliError) -> String {
    let body = ErrorOutput {
        error: ErrorBody {
            kind: err.kind().into(),
            message: err.to_string(),
            exit_code: err.exit_code(),
        },
    };
    serde_json::to_string_pretty(&body).unwrap_or_default() + "\n"
}
