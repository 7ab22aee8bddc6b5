use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hecke_core::ledger::{claims_check, ClaimLedger};
use hecke_core::spectral::growth::{growth_report, CONVERGENCE_TOL, ROOT_TOL};
use hecke_core::verify::{run_all, VerifyConfig};
use hecke_core::{census_with_threads, Error, GroupParams};

/// Reciprocal conjugacy classes in the Hecke groups Z2 * Zp.
#[derive(Parser, Debug)]
#[command(name = "hecke", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count classes by category for every word length up to --max-len.
    Census(Common),
    /// Compare every closed-form count against the census.
    Claims(Common),
    /// Growth polynomial plus census counts extended by the recurrence.
    Growth(Common),
    /// Growth polynomial report for one r.
    Poly(Common),
    /// Run the acceptance checks.
    Verify(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Group orders; repeat the flag or separate with commas.
    #[arg(long = "p", value_delimiter = ',')]
    p: Vec<i64>,
    #[arg(long, default_value_t = 20)]
    max_len: u64,
    /// Half the order, for poly and growth.
    #[arg(long)]
    r: Option<u64>,
    /// Last index reached by the recurrence extension.
    #[arg(long, default_value_t = 80)]
    extend_to: u64,
    /// Width of the dominant-root enclosure.
    #[arg(long, default_value_t = ROOT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads, 0 for automatic.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Hard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidOrder(_) | Error::OddOrder(_) | Error::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Hard(other.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn params_list(c: &Common, default: &[i64]) -> Result<Vec<GroupParams>, Failure> {
    let ps = if c.p.is_empty() { default.to_vec() } else { c.p.clone() };
    if ps.is_empty() {
        return Err(Failure::Usage("--p is required".into()));
    }
    ps.into_iter().map(|p| GroupParams::new(p).map_err(Failure::from)).collect()
}

fn json_only(c: &Common, cmd: &str) -> Result<(), Failure> {
    if c.format == Format::Csv {
        return Err(Failure::Usage(format!("{cmd} supports only --format json")));
    }
    Ok(())
}

fn json_list(items: Vec<String>) -> String {
    if items.len() == 1 {
        return items.into_iter().next().expect("one item");
    }
    let values: Vec<serde_json::Value> =
        items.iter().map(|s| serde_json::from_str(s).expect("valid json")).collect();
    let mut s = serde_json::to_string_pretty(&values).expect("serializes");
    s.push('\n');
    s
}

fn run_census(c: &Common) -> Outcome {
    let params = params_list(c, &[])?;
    if c.format == Format::Csv && params.len() > 1 {
        return Err(Failure::Usage("csv output takes a single --p".into()));
    }
    let mut docs = Vec::new();
    for p in params {
        let table = census_with_threads(p, c.max_len, c.threads)?;
        docs.push(match c.format {
            Format::Json => table.to_json(),
            Format::Csv => table.to_csv(),
        });
    }
    Ok((json_list(docs), true))
}

fn run_claims(c: &Common) -> Outcome {
    json_only(c, "claims")?;
    let params = params_list(c, &[])?;
    for p in &params {
        p.require_r()?;
    }
    let mut ledger = ClaimLedger::default();
    for p in params {
        let table = census_with_threads(p, c.max_len, c.threads)?;
        let r = u64::from(p.require_r()?);
        let report = growth_report(r, c.tol)?.with_census(&table, c.extend_to, CONVERGENCE_TOL).or_else(|e| {
            // Families too short to seed are reported inside the ledger.
            match e {
                Error::ShortSeed { .. } | Error::ZeroTerm(_) => growth_report(r, c.tol),
                other => Err(other),
            }
        })?;
        ledger.extend(claims_check(&table, &report, c.extend_to)?);
    }
    Ok((ledger.to_json(), true))
}

fn run_growth(c: &Common) -> Outcome {
    json_only(c, "growth")?;
    let default: Vec<i64> = c.r.map(|r| vec![2 * r as i64]).unwrap_or_default();
    let params = params_list(c, &default)?;
    let mut docs = Vec::new();
    for p in params {
        let r = u64::from(p.require_r()?);
        if c.r.is_some_and(|given| given != r) {
            return Err(Failure::Usage(format!("--r {} does not match --p {}", c.r.unwrap_or(0), p.p())));
        }
        let table = census_with_threads(p, c.max_len, c.threads)?;
        let report = growth_report(r, c.tol)?.with_census(&table, c.extend_to, CONVERGENCE_TOL)?;
        docs.push(report.to_json());
    }
    Ok((json_list(docs), true))
}

fn run_poly(c: &Common) -> Outcome {
    json_only(c, "poly")?;
    let r = match (c.r, c.p.as_slice()) {
        (Some(r), _) => r,
        (None, [p]) => u64::from(GroupParams::new(*p)?.require_r()?),
        _ => return Err(Failure::Usage("poly needs --r or a single even --p".into())),
    };
    Ok((growth_report(r, c.tol)?.to_json(), true))
}

fn run_verify(c: &Common) -> Outcome {
    let mut cfg = VerifyConfig::default();
    if c.max_len != 20 {
        cfg.perf_len = c.max_len;
    }
    cfg.extend_to = c.extend_to;
    let outcomes = run_all(&cfg, c.threads);
    let ok = outcomes.iter().all(|o| o.passed);
    let text = match c.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcomes).expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("criterion,passed,seconds,title\n");
            for o in &outcomes {
                s.push_str(&format!("{},{},{:.3},{}\n", o.criterion, o.passed, o.seconds, o.title));
            }
            s
        }
    };
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        eprintln!("[{tag}] criterion {}: {} ({:.2}s) {}", o.criterion, o.title, o.seconds, o.detail);
    }
    Ok((text, ok))
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::Census(c) => (c, run_census(c)),
        Command::Claims(c) => (c, run_claims(c)),
        Command::Growth(c) => (c, run_growth(c)),
        Command::Poly(c) => (c, run_poly(c)),
        Command::Verify(c) => (c, run_verify(c)),
    };
    match result {
        Ok((text, ok)) => {
            if let Err(e) = emit(&text, common.out.as_ref()) {
                eprintln!("hecke: write failed: {e}");
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("hecke: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Hard(msg)) => {
            eprintln!("hecke: {msg}");
            ExitCode::from(1)
        }
    }
}
