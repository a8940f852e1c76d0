use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use twotrees::enumerate::{self, CountKind, Route, TableRow, TABLE_COLUMNS};
use twotrees::oracle::{self, oracle_counts};
use twotrees::verify::{self, CheckStatus, Suite, VerifyOptions};
use twotrees::{Family, Mode, Pointing, Rational};

/// Enumeration of plane and planar 2-trees.
#[derive(Parser)]
#[command(name = "twotrees", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count structures on n triangles.
    Count {
        #[arg(long, default_value = "plane")]
        family: Family,
        #[arg(long, default_value = "none")]
        pointing: Pointing,
        #[arg(long, default_value = "unlabelled")]
        mode: Mode,
        /// A single n.
        #[arg(long, conflicts_with = "n_max")]
        n: Option<usize>,
        /// All n from 0 up to this bound.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, value_enum, default_value = "formula")]
        route: RouteArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the molecular expansion.
    Molexp {
        #[arg(long, default_value = "plane")]
        family: Family,
        #[arg(long, default_value = "8")]
        max_degree: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the cross-checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value = "12")]
        n_max: usize,
        #[arg(long, default_value = "30")]
        cap: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Formula,
    Series,
    Canonical,
    PalmerRead,
    Oracle,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Formula => Route::ClosedForm,
            RouteArg::Series => Route::Series,
            RouteArg::Canonical => Route::Canonical,
            RouteArg::PalmerRead => Route::PalmerRead,
            RouteArg::Oracle => Route::Oracle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count {
            family,
            pointing,
            mode,
            n,
            n_max,
            route,
            format,
        } => run_count(family, pointing, mode, n, n_max, route.into(), format),
        Command::Molexp {
            family,
            max_degree,
            format,
        } => run_molexp(family, max_degree, format),
        Command::Verify {
            suite,
            n_max,
            cap,
            format,
        } => run_verify(suite, n_max, cap, format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn run_count(
    family: Family,
    pointing: Pointing,
    mode: Mode,
    n: Option<usize>,
    n_max: Option<usize>,
    route: Route,
    format: Format,
) -> Result<u8, Failure> {
    let kind = CountKind::new(family, pointing, mode).map_err(usage)?;
    let range = match (n, n_max) {
        (Some(n), _) => n..=n,
        (None, Some(m)) => 0..=m,
        (None, None) => return Err(usage("one of --n or --n-max is required")),
    };
    let rows = if route == Route::Oracle {
        let max = oracle::oracle_max().map_err(usage)?;
        range
            .map(|n| {
                if n > max {
                    return Err(usage(format!(
                        "n = {n} exceeds the oracle bound {max} (set {})",
                        oracle::ORACLE_MAX_ENV
                    )));
                }
                let o = oracle_counts(n, family.group(), pointing).map_err(usage)?;
                let value = match mode {
                    Mode::Labelled => o.labelled,
                    Mode::Unlabelled => o.unlabelled.into(),
                    Mode::Asymmetric => o.asymmetric.into(),
                };
                Ok(TableRow {
                    n,
                    kind,
                    value: Rational::from_integer(value),
                    route,
                })
            })
            .collect::<Result<Vec<_>, _>>()?
    } else {
        enumerate::table(kind, range, route).map_err(usage)?
    };
    for r in &rows {
        if route == Route::ClosedForm
            && !(r.value.is_integer() && r.value >= Rational::from_integer(0.into()))
        {
            eprintln!("warning: closed form gives {} at n = {}", r.value, r.n);
        }
    }
    let text = match format {
        Format::Text => rows
            .iter()
            .map(|r| format!("{}\t{}\n", r.n, r.value))
            .collect(),
        Format::Json => pretty(&Value::Array(rows.iter().map(TableRow::to_json).collect())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let fail = |e: csv::Error| Failure {
                code: 1,
                message: e.to_string(),
            };
            w.write_record(TABLE_COLUMNS).map_err(fail)?;
            for r in &rows {
                w.write_record(r.csv_record()).map_err(fail)?;
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
        }
    };
    emit(&text)?;
    Ok(0)
}

fn run_molexp(family: Family, max_degree: u32, format: Format) -> Result<u8, Failure> {
    let m = enumerate::canonical_expansion(family, Pointing::None, max_degree).map_err(usage)?;
    let text = match format {
        Format::Text => format!("{m}\n"),
        Format::Json => pretty(&json!({ "family": family.as_str(), "expansion": m.to_json() })),
        Format::Csv => {
            let mut s = String::from("degree,tag,coeff\n");
            for (t, c) in m.terms() {
                s.push_str(&format!("{},\"{}\",{}\n", t.degree(), t, c));
            }
            s
        }
    };
    emit(&text)?;
    Ok(0)
}

fn run_verify(suite: Suite, n_max: usize, cap: u32, format: Format) -> Result<u8, Failure> {
    let oracle_max = oracle::oracle_max().map_err(usage)?;
    let report = verify::verify(
        suite,
        VerifyOptions {
            n_max,
            cap,
            oracle_max,
        },
    )
    .map_err(usage)?;
    let text = match format {
        Format::Json => pretty(&report.to_json()),
        Format::Text | Format::Csv => {
            let mut s = String::new();
            for c in &report.checks {
                let status = match c.status {
                    CheckStatus::Pass => "pass",
                    CheckStatus::Discrepancy => "known",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Info => "info",
                };
                s.push_str(&format!("{status:5} {}: {}\n", c.name, c.details));
            }
            for p in &report.stale {
                s.push_str(&format!("stale {p}\n"));
            }
            let known = report.discrepancies.iter().filter(|d| d.known).count();
            s.push_str(&format!(
                "{} checks, {} failed, {} known discrepancies\n",
                report.checks.len(),
                report.failures().count(),
                known
            ));
            s
        }
    };
    emit(&text)?;
    Ok(if report.passed() { 0 } else { 1 })
}
