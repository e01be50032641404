use std::path::PathBuf;
use std::process::ExitCode;

use bohrsum_cli::commands;
use bohrsum_cli::config::ExperimentConfig;
use bohrsum_cli::report::{csv_bytes, emit, json_bytes, summary_path, CsvRow};
use bohrsum_cli::sweep;
use bohrsum_cli::HarnessError;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Character sums over Bohr sets mod p: sweeps, searches and invariant checks.
#[derive(Parser)]
#[command(name = "bohrsum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config output path; stdout when neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every invariant suite and report margins.
    Verify(Common),
    /// |S(χ)| against √p(log p)^d over sampled Bohr sets.
    SweepPv(Common),
    /// |S(χ)| against both Burgess-type bounds.
    SweepBurgess(Common),
    /// Regular radii near δ.
    FindRegular(Common),
    /// k-th powers of small Bohr norm.
    RecurKpower(Common),
    /// Primitive roots of small Bohr norm.
    RecurPrimroot(Common),
    /// Multiplicative energy of small Bohr sets.
    EnergyReport(Common),
    /// Distribution of |B|/(ε^d p) over random Γ.
    AvgSize(Common),
}

fn load(common: &Common) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output_path = Some(out.clone());
    }
    Ok(cfg)
}

/// CSV to the output path (or stdout) plus a JSON summary next to it (or
/// on stderr).
fn write_table<R: CsvRow, S: Serialize>(
    cfg: &ExperimentConfig,
    rows: &[R],
    summary: &S,
) -> Result<(), HarnessError> {
    let path = cfg.output_path.as_deref();
    emit(path, &csv_bytes(rows)?)?;
    let json = json_bytes(summary)?;
    match path {
        Some(p) => emit(Some(&summary_path(p)), &json),
        None => {
            eprint!("{}", String::from_utf8_lossy(&json));
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Verify(c) => {
            let cfg = load(&c)?;
            let outcomes = commands::verify(&cfg);
            let mut report = String::new();
            for o in &outcomes {
                report.push_str(&o.line());
                report.push('\n');
            }
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            report.push_str(&format!("{} suites, {failed} failed\n", outcomes.len()));
            emit(cfg.output_path.as_deref(), report.as_bytes())?;
            if failed > 0 {
                return Err(HarnessError::Invariant(format!("{failed} suites failed")));
            }
            Ok(())
        }
        Command::SweepPv(c) => {
            let cfg = load(&c)?;
            let rows = sweep::sweep_rows(&cfg)?;
            write_table(&cfg, &rows, &sweep::pv_summary(&cfg, &rows))
        }
        Command::SweepBurgess(c) => {
            let cfg = load(&c)?;
            let rows = sweep::sweep_rows(&cfg)?;
            write_table(&cfg, &rows, &sweep::burgess_summary(&cfg, &rows))
        }
        Command::FindRegular(c) => {
            let cfg = load(&c)?;
            let rows = commands::find_regular_rows(&cfg)?;
            let all_regular = rows.iter().all(|r| r.regular);
            write_table(
                &cfg,
                &rows,
                &serde_json::json!({ "rows": rows.len(), "all_regular": all_regular }),
            )?;
            if !all_regular {
                return Err(HarnessError::Invariant("irregular radius returned".into()));
            }
            Ok(())
        }
        Command::RecurKpower(c) => {
            let cfg = load(&c)?;
            let rows = commands::kpower_rows(&cfg)?;
            let summary = commands::recurrence_summary(&cfg, &rows);
            write_table(&cfg, &rows, &summary)?;
            check_oracle(&summary)
        }
        Command::RecurPrimroot(c) => {
            let cfg = load(&c)?;
            let rows = commands::primroot_rows(&cfg)?;
            let summary = commands::recurrence_summary(&cfg, &rows);
            write_table(&cfg, &rows, &summary)?;
            check_oracle(&summary)
        }
        Command::EnergyReport(c) => {
            let cfg = load(&c)?;
            let rows = commands::energy_rows(&cfg)?;
            let max = rows.iter().map(|r| r.rudnev_ratio).fold(0.0, f64::max);
            write_table(
                &cfg,
                &rows,
                &serde_json::json!({ "rows": rows.len(), "max_rudnev_ratio": max }),
            )
        }
        Command::AvgSize(c) => {
            let cfg = load(&c)?;
            let summary = commands::avg_size(&cfg)?;
            emit(cfg.output_path.as_deref(), &json_bytes(&summary)?)
        }
    }
}

fn check_oracle(summary: &commands::RecurrenceSummary) -> Result<(), HarnessError> {
    let bad: usize = summary.per_k.iter().map(|s| s.oracle_mismatches).sum();
    if bad > 0 {
        return Err(HarnessError::Invariant(format!(
            "{bad} solver results differ from the oracle"
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bohrsum: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
