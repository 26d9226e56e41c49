use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use linset_core::scenario::{self, Request};
use linset_core::{Report, Status};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Run a named verification scenario and write its report.
#[derive(Parser, Debug)]
#[command(name = "linset", version)]
struct Args {
    /// field-selftest, singer, power-maps, theta-sweep, projection,
    /// counterexample, condition-a, generale or all
    scenario: String,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    /// images of 0..t-1, comma separated
    #[arg(long, value_delimiter = ',')]
    pi: Option<Vec<usize>>,
    /// exit non-zero when a check was skipped for budget
    #[arg(long)]
    strict: bool,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// point-enumeration cap
    #[arg(long)]
    budget: Option<u64>,
}

fn csv_summary(report: &Report) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["scenario", "id", "status", "elapsed_ms", "detail"])?;
    for c in &report.checks {
        w.write_record([&report.scenario, &c.id, c.status.as_str(), &c.elapsed_ms.to_string(), &c.detail])?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let req = Request { q: args.q, t: args.t, pi: args.pi.clone(), budget: args.budget };
    let report = match scenario::run(&args.scenario, &req) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("linset: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => match csv_summary(&report) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("linset: {e}");
                return ExitCode::from(2);
            }
        },
    };
    let written = match &args.out {
        Some(path) => fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("linset: cannot write report: {e}");
        return ExitCode::from(2);
    }
    eprintln!(
        "{}: {} verified, {} failed, {} assumed, {} skipped",
        report.scenario,
        report.count(Status::Verified),
        report.count(Status::Failed),
        report.count(Status::Assumed),
        report.count(Status::SkippedBudget)
    );
    if report.any_failed() || (args.strict && report.count(Status::SkippedBudget) > 0) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
