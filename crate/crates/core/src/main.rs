use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use unruh_core::measures::{MeasureRecord, ALICE_ENTROPY};
use unruh_core::sweep::{run_sweep, verify, write_csv, write_json, KrausFault, OutputFormat, SweepConfig};
use unruh_core::{Error, TruncationConfig};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "unruh", version, about = "The Unruh effect as a noisy quantum channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: SweepOpts,
}

#[derive(Subcommand)]
enum Command {
    /// Emit one record per acceleration grid point.
    Sweep,
    /// Run the invariant suite; exits 1 on the first failing check.
    Verify {
        /// Shift the scalar of Kraus operator N by --perturb-delta.
        #[arg(long, value_name = "N", hide = true)]
        perturb_kraus: Option<usize>,
        #[arg(long, default_value_t = 1e-3, hide = true)]
        perturb_delta: f64,
    },
    /// Print every measure at a single acceleration.
    Point {
        #[arg(long)]
        r: f64,
    },
}

#[derive(Args)]
struct SweepOpts {
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    r_min: f64,
    #[arg(long, global = true, default_value_t = 3.0, allow_negative_numbers = true)]
    r_max: f64,
    #[arg(long, global = true, default_value_t = 200)]
    points: usize,
    /// Truncation cap per bosonic mode.
    #[arg(long, global = true, default_value_t = 4096)]
    n_max: usize,
    /// Use n_max at every point instead of choosing the truncation adaptively.
    #[arg(long, global = true)]
    no_adaptive: bool,
    #[arg(long, global = true, default_value_t = TruncationConfig::DEFAULT_ABS_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl SweepOpts {
    fn config(&self) -> SweepConfig {
        SweepConfig {
            r_min: self.r_min,
            r_max: self.r_max,
            points: self.points,
            n_max: self.n_max,
            adaptive: !self.no_adaptive,
            abs_tol: self.tol,
            format: match self.format {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            },
        }
    }

    fn sink(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.opts.config();
    match run(&cli, &cfg) {
        Ok(code) => code,
        Err(e @ (Error::InvalidConfig(_) | Error::OutOfRange { .. } | Error::KrausIndex { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli, cfg: &SweepConfig) -> unruh_core::Result<ExitCode> {
    let io_err = |e: io::Error| Error::InvalidConfig(format!("cannot write output: {e}"));
    match &cli.command {
        Command::Sweep => {
            let rows = run_sweep(cfg)?;
            let mut out = cli.opts.sink().map_err(io_err)?;
            match cfg.format {
                OutputFormat::Csv => write_csv(&mut out, &rows)?,
                OutputFormat::Json => write_json(&mut out, cfg, &rows)?,
            }
            out.flush().map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { perturb_kraus, perturb_delta } => {
            let fault = perturb_kraus.map(|index| KrausFault { index, delta: *perturb_delta });
            let report = verify(cfg, fault)?;
            let mut out = cli.opts.sink().map_err(io_err)?;
            for c in &report.checks {
                writeln!(
                    out,
                    "{} {:<32} defect={:.3e} bound={:.3e}  {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.defect,
                    c.bound,
                    c.detail
                )
                .map_err(io_err)?;
            }
            let code = match report.first_failure() {
                Some(c) => {
                    writeln!(out, "verification failed: first failing check `{}`", c.name).map_err(io_err)?;
                    ExitCode::from(EXIT_VERIFY_FAILED)
                }
                None => {
                    writeln!(out, "all {} checks passed", report.checks.len()).map_err(io_err)?;
                    ExitCode::SUCCESS
                }
            };
            out.flush().map_err(io_err)?;
            Ok(code)
        }
        Command::Point { r } => {
            let base = cfg.truncation()?;
            let rec = if cfg.adaptive {
                MeasureRecord::evaluate_adaptive(*r, &base)?
            } else {
                MeasureRecord::evaluate(*r, &base)?
            };
            let mut out = cli.opts.sink().map_err(io_err)?;
            print_record(&mut out, &rec).map_err(io_err)?;
            out.flush().map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_record(out: &mut dyn Write, rec: &MeasureRecord) -> io::Result<()> {
    writeln!(out, "r                          {}", rec.r)?;
    writeln!(out, "entanglement fidelity      {:.12} (closed form)", rec.fe_closed)?;
    writeln!(out, "                           {:.12} (Kraus traces)", rec.fe_kraus)?;
    writeln!(out, "S(rho_AR)                  {:.12} bits", rec.s_ar)?;
    writeln!(out, "S(rho_R)                   {:.12} bits", rec.s_r)?;
    writeln!(out, "S(rho_A)                   {:.12} bits (expected {ALICE_ENTROPY})", rec.s_a)?;
    writeln!(out, "entropy exchange S(rho_II) {:.12} bits", rec.s_e)?;
    writeln!(out, "mutual information         {:.12} bits", rec.mutual_info)?;
    writeln!(out, "sub-additivity margin      {:.12} bits", rec.subadd_margin)?;
    writeln!(out, "truncation tail            {:.3e} (n_used = {})", rec.tail, rec.n_used)
}
