use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mustab::stabilizer::Algorithm;
use mustab_cli::corpus::{cmd_corpus, summary};
use mustab_cli::explain::cmd_explain;
use mustab_cli::job::{BudgetsJson, JobSpec};
use mustab_cli::report::{Report, EXIT_INVALID, EXIT_VERIFICATION};
use mustab_cli::run::{cmd_run, Overrides};

/// Stabilizers of curve branches at infinity on matrix groups.
#[derive(Parser, Debug)]
#[command(name = "mustab", version)]
struct Args {
    /// Run a JSON job file.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["corpus", "explain"])]
    job: Option<PathBuf>,
    /// Run the bundled corpus and print a matrix of checks.
    #[arg(long, conflicts_with = "explain")]
    corpus: bool,
    /// Only corpus fixtures whose name contains this string.
    #[arg(long, requires = "corpus")]
    filter: Option<String>,
    /// Render a saved JSON report as text.
    #[arg(long, value_name = "REPORT")]
    explain: Option<PathBuf>,
    #[arg(long, value_parser = ["reparam", "degeneration", "both"])]
    algorithm: Option<String>,
    #[arg(long)]
    precision: Option<i64>,
    #[arg(long)]
    degree_bound: Option<u32>,
    #[arg(long)]
    order_budget: Option<usize>,
    /// Inconclusive checks count as failures.
    #[arg(long)]
    strict: bool,
    /// Write the JSON report (a list of reports for --corpus) here.
    #[arg(long, value_name = "FILE")]
    json_out: Option<PathBuf>,
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn fail(msg: String) -> ExitCode {
    eprintln!("mustab: {msg}");
    ExitCode::from(EXIT_INVALID as u8)
}

fn write_json(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let over = Overrides {
        budgets: BudgetsJson {
            precision: args.precision,
            degree_bound: args.degree_bound,
            order_budget: args.order_budget,
            ..Default::default()
        },
        algorithm: args.algorithm.as_deref().map(|a| Algorithm::parse(a).expect("clap restricts the values")),
        strict: args.strict,
    };

    if let Some(path) = &args.explain {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(format!("{}: {e}", path.display())),
        };
        return match Report::from_json(&text) {
            Ok(r) => {
                emit(&cmd_explain(&r));
                ExitCode::SUCCESS
            }
            Err(e) => fail(format!("{}: {e}", path.display())),
        };
    }

    if args.corpus {
        let results = cmd_corpus(args.filter.as_deref(), &over);
        emit(&summary(&results));
        let reports: Vec<&Report> = results.iter().filter_map(|r| r.report.as_ref()).collect();
        if let Err(e) = write_json(&args.json_out, &serde_json::to_string_pretty(&reports).expect("reports serialize")) {
            return fail(e);
        }
        let failed = results.iter().filter(|r| !r.passed()).count();
        emit(&format!("{} fixtures, {failed} failed\n", results.len()));
        return if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFICATION as u8) };
    }

    let Some(path) = &args.job else {
        return fail("nothing to do; pass --job FILE, --corpus or --explain REPORT".into());
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    let job = match JobSpec::from_json(&text) {
        Ok(j) => j,
        Err(e) => return fail(e.to_string()),
    };
    let report = cmd_run(&job, &over);
    let json = report.to_json();
    if args.json_out.is_some() {
        if let Err(e) = write_json(&args.json_out, &json) {
            return fail(e);
        }
        emit(&cmd_explain(&report));
    } else {
        emit(&format!("{json}\n"));
    }
    ExitCode::from(report.exit_code as u8)
}
