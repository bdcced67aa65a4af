//! Acceleration sweeps, machine-readable output, and the invariant suite
//! behind the `verify` command.

use std::io::Write;

use serde::Serialize;

use crate::channel::{apply_channel, trace_preservation_defect, KrausSet};
use crate::error::{Error, Result};
use crate::fock::{StateVector, TruncationConfig};
use crate::measures::{
    adaptive_n_max, entanglement_fidelity_closed, entropy_ar_series, entropy_ar_spectral, entropy_exchange,
    entropy_r_series, entropy_r_spectral, fidelity_from_kraus, truncation_bound, MeasureRecord,
};
use crate::rindler::{alice_rob_layout, initial_state, rho_ar_analytic};

/// Version tag carried by every CSV and JSON output.
pub const SCHEMA: &str = "unruh-sweep/v1";

pub const CSV_COLUMNS: [&str; 11] = [
    "r",
    "fe_closed",
    "fe_kraus",
    "s_ar",
    "s_r",
    "s_a",
    "s_e",
    "mutual_info",
    "subadd_margin",
    "tail",
    "n_used",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    /// Truncation cap. With `adaptive` on, each point uses the smallest
    /// truncation whose tail bound is below `abs_tol`, up to this cap.
    pub n_max: usize,
    pub adaptive: bool,
    pub abs_tol: f64,
    pub format: OutputFormat,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            r_min: 0.0,
            r_max: 3.0,
            points: 200,
            n_max: 4096,
            adaptive: true,
            abs_tol: TruncationConfig::DEFAULT_ABS_TOL,
            format: OutputFormat::Csv,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min >= 0.0 && self.r_min.is_finite() && self.r_max.is_finite() && self.r_min < self.r_max) {
            return Err(Error::InvalidConfig(format!(
                "need 0 <= r_min < r_max, got r_min = {}, r_max = {}",
                self.r_min, self.r_max
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidConfig(format!("need at least 2 points, got {}", self.points)));
        }
        if self.n_max < 8 {
            return Err(Error::InvalidConfig(format!("n_max must be at least 8, got {}", self.n_max)));
        }
        self.truncation().map(|_| ())
    }

    pub fn truncation(&self) -> Result<TruncationConfig> {
        TruncationConfig::with_tolerances(self.n_max, self.abs_tol, TruncationConfig::DEFAULT_EIG_TOL)
    }

    /// Evenly spaced `r` values with both endpoints hit exactly.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.points - 1;
        let step = (self.r_max - self.r_min) / last as f64;
        (0..self.points)
            .map(|i| if i == last { self.r_max } else { self.r_min + i as f64 * step })
            .collect()
    }

    /// Truncation used at one grid point.
    pub fn n_used(&self, r: f64) -> usize {
        if self.adaptive {
            adaptive_n_max(r, self.abs_tol, self.n_max)
        } else {
            self.n_max
        }
    }
}

/// One record per grid point, in ascending `r`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<MeasureRecord>> {
    cfg.validate()?;
    let base = cfg.truncation()?;
    cfg.grid()
        .into_iter()
        .map(|r| MeasureRecord::evaluate(r, &base.with_n_max(cfg.n_used(r))?))
        .collect()
}

fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_csv<W: Write>(out: W, rows: &[MeasureRecord]) -> Result<()> {
    let mut out = out;
    writeln!(out, "# schema: {SCHEMA}").map_err(io_err)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for row in rows {
        w.write_record([
            sig12(row.r),
            sig12(row.fe_closed),
            sig12(row.fe_kraus),
            sig12(row.s_ar),
            sig12(row.s_r),
            sig12(row.s_a),
            sig12(row.s_e),
            sig12(row.mutual_info),
            sig12(row.subadd_margin),
            sig12(row.tail),
            row.n_used.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    schema: &'static str,
    config: &'a SweepConfig,
    rows: &'a [MeasureRecord],
}

pub fn write_json<W: Write>(mut out: W, cfg: &SweepConfig, rows: &[MeasureRecord]) -> Result<()> {
    let doc = JsonDocument { schema: SCHEMA, config: cfg, rows };
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    writeln!(out).map_err(io_err)
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidConfig(format!("write failed: {e}"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidConfig(format!("write failed: {e}"))
}

/// A deliberately corrupted Kraus scalar, for checking that `verify` notices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausFault {
    pub index: usize,
    pub delta: f64,
}

/// Outcome of one invariant check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed deviation.
    pub defect: f64,
    /// Threshold the defect was compared against.
    pub bound: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Truncations pinned for the fixed-point checks.
pub const CHANNEL_CHECK_N: usize = 48;
pub const TRACE_CHECK_N: usize = 64;
pub const SPECTRAL_CHECK_N: usize = 256;

/// Tolerances pinned for the checks.
pub const CHANNEL_TOL: f64 = 1e-10;
pub const OFF_SUBSPACE_TOL: f64 = 1e-9;
pub const ENTROPY_TOL: f64 = 1e-8;
pub const FIDELITY_TOL: f64 = 1e-12;

/// Floating-point floor under the analytic trace-preservation bound, which
/// itself drops far below rounding error at small `r`.
pub const ROUNDING_FLOOR: f64 = 1e-14;

/// `(tanh²r)^{n_max+1} (n_max + 2)`.
pub fn subspace_trace_bound(r: f64, n_max: usize) -> f64 {
    r.tanh().powi(2).powi(n_max as i32 + 1) * (n_max + 2) as f64
}

fn fixed_cfg(n: usize, abs_tol: f64) -> Result<TruncationConfig> {
    TruncationConfig::with_tolerances(n, abs_tol, TruncationConfig::DEFAULT_EIG_TOL)
}

fn kraus(r: f64, cfg: &TruncationConfig, fault: Option<KrausFault>) -> Result<KrausSet> {
    let ks = KrausSet::new(r, cfg)?;
    match fault {
        Some(f) => ks.with_perturbed_scalar(f.index, f.delta),
        None => Ok(ks),
    }
}

fn check(name: &'static str, defect: f64, bound: f64, detail: String) -> CheckResult {
    CheckResult { name, passed: defect <= bound, defect, bound, detail }
}

/// Channel output against the closed-form ρ_AR at r ∈ {0.3, 0.8, 1.5}.
pub fn check_channel_equivalence(abs_tol: f64, fault: Option<KrausFault>) -> Result<CheckResult> {
    let cfg = fixed_cfg(CHANNEL_CHECK_N, abs_tol)?;
    let rho_q = initial_state(&cfg);
    let mut worst: f64 = 0.0;
    let mut at = 0.0;
    for r in [0.3, 0.8, 1.5] {
        let out = apply_channel(&rho_q, &kraus(r, &cfg, fault)?)?;
        let d = out.max_abs_diff(&rho_ar_analytic(r, &cfg)?)?;
        if d >= worst {
            worst = d;
            at = r;
        }
    }
    Ok(check(
        "channel_equivalence",
        worst,
        CHANNEL_TOL,
        format!("max |E(rho_Q) - rho_AR| at r = {at}, n_max = {CHANNEL_CHECK_N}"),
    ))
}

fn subspace_probes(cfg: &TruncationConfig) -> Result<Vec<(&'static str, StateVector)>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let layout = alice_rob_layout(cfg);
    Ok(vec![
        ("(|01>+|10>)/sqrt2", StateVector::from_terms(layout.clone(), &[(&[0, 1], h), (&[1, 0], h)])?),
        ("|01>", StateVector::from_terms(layout.clone(), &[(&[0, 1], 1.0)])?),
        ("|10>", StateVector::from_terms(layout, &[(&[1, 0], 1.0)])?),
    ])
}

/// In-subspace trace-preservation defects against
/// `(tanh²r)^{n_max+1} (n_max + 2)` plus the rounding floor.
pub fn check_trace_preservation_subspace(
    abs_tol: f64,
    rs: &[f64],
    fault: Option<KrausFault>,
) -> Result<CheckResult> {
    let cfg = fixed_cfg(TRACE_CHECK_N, abs_tol)?;
    let probes = subspace_probes(&cfg)?;
    // Tightest case: largest defect - bound.
    let mut worst: Option<(f64, f64, String)> = None;
    for &r in rs {
        let ks = kraus(r, &cfg, fault)?;
        let bound = subspace_trace_bound(r, cfg.n_max) + ROUNDING_FLOOR;
        for (name, probe) in &probes {
            let d = trace_preservation_defect(&ks, probe)?;
            if worst.as_ref().is_none_or(|(wd, wb, _)| d - bound > wd - wb) {
                worst = Some((d, bound, format!("tightest: probe {name} at r = {r}, n_max = {TRACE_CHECK_N}")));
            }
        }
    }
    let (defect, bound, detail) = worst.unwrap_or((0.0, ROUNDING_FLOOR, String::new()));
    Ok(check("trace_preservation_subspace", defect, bound, detail))
}

/// `|1,1⟩` at r = 1 must show the predicted `cosh²r − 1` excess.
pub fn check_trace_preservation_off_subspace(abs_tol: f64, fault: Option<KrausFault>) -> Result<CheckResult> {
    let cfg = fixed_cfg(TRACE_CHECK_N, abs_tol)?;
    let r = 1.0_f64;
    let probe = StateVector::from_terms(alice_rob_layout(&cfg), &[(&[1, 1], 1.0)])?;
    let d = trace_preservation_defect(&kraus(r, &cfg, fault)?, &probe)?;
    let expected = r.cosh().powi(2) - 1.0;
    Ok(check(
        "trace_preservation_off_subspace",
        (d - expected).abs(),
        OFF_SUBSPACE_TOL,
        format!("probe |11> at r = 1: defect {d:.10}, predicted cosh^2(1) - 1 = {expected:.10}"),
    ))
}

/// Series entropies against eigensolved reductions.
pub fn check_entropy_series(abs_tol: f64, rs: &[f64]) -> Result<CheckResult> {
    let cfg = fixed_cfg(SPECTRAL_CHECK_N, abs_tol)?;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for &r in rs {
        let d_ar = (entropy_ar_series(r, &cfg)?.bits - entropy_ar_spectral(r, &cfg)?).abs();
        let d_r = (entropy_r_series(r, &cfg)?.bits - entropy_r_spectral(r, &cfg)?).abs();
        for (which, d) in [("S(rho_AR)", d_ar), ("S(rho_R)", d_r)] {
            if d >= worst {
                worst = d;
                detail = format!("{which} at r = {r}, n_max = {SPECTRAL_CHECK_N}");
            }
        }
    }
    Ok(check("entropy_series_vs_spectral", worst, ENTROPY_TOL, detail))
}

/// `S(ρ_AR) = S(ρ_II)`.
pub fn check_purification(abs_tol: f64, rs: &[f64]) -> Result<CheckResult> {
    let cfg = fixed_cfg(TRACE_CHECK_N, abs_tol)?;
    let mut worst: f64 = 0.0;
    let mut at = 0.0;
    for &r in rs {
        let d = (entropy_ar_spectral(r, &cfg)? - entropy_exchange(r, &cfg)?).abs();
        if d >= worst {
            worst = d;
            at = r;
        }
    }
    Ok(check(
        "purification_identity",
        worst,
        ENTROPY_TOL,
        format!("|S(rho_AR) - S(rho_II)| at r = {at}, n_max = {TRACE_CHECK_N}"),
    ))
}

/// Closed-form fidelity against the Kraus-trace route, and exact zeros for `n ≥ 1`.
pub fn check_fidelity_paths(abs_tol: f64, rs: &[f64], fault: Option<KrausFault>) -> Result<CheckResult> {
    let cfg = fixed_cfg(TRACE_CHECK_N, abs_tol)?;
    let mut worst: f64 = 0.0;
    let mut detail = String::from("all n >= 1 traces exactly zero");
    for &r in rs {
        let k = fidelity_from_kraus(&kraus(r, &cfg, fault)?)?;
        if let Some(n) = k.traces.iter().skip(1).position(|&t| t != 0.0) {
            return Ok(CheckResult {
                name: "fidelity_paths",
                passed: false,
                defect: k.traces[n + 1].abs(),
                bound: 0.0,
                detail: format!("Tr(rho_Q A_{}) != 0 at r = {r}", n + 1),
            });
        }
        let d = (k.fidelity - entanglement_fidelity_closed(r)).abs();
        if d >= worst {
            worst = d;
            detail = format!("|F_kraus - F_closed| at r = {r}; all n >= 1 traces exactly zero");
        }
    }
    Ok(check("fidelity_paths", worst, FIDELITY_TOL, detail))
}

/// Checks over the sweep grid.
pub fn grid_checks(cfg: &SweepConfig, rows: &[MeasureRecord]) -> Vec<CheckResult> {
    let mut out = Vec::new();

    let (bound, at) = rows
        .iter()
        .map(|row| (truncation_bound(row.r, row.n_used), row))
        .fold((0.0_f64, None), |(b, at), (x, row)| if x > b || at.is_none() { (x, Some(row)) } else { (b, at) });
    let detail = match at {
        Some(row) if bound > cfg.abs_tol => format!(
            "insufficient truncation: tail bound {bound:.3e} at r = {} with n_used = {} (cap {})",
            row.r, row.n_used, cfg.n_max
        ),
        Some(row) => format!("worst tail bound at r = {}, n_used = {}", row.r, row.n_used),
        None => String::new(),
    };
    out.push(check("tail_bound", bound, cfg.abs_tol, detail));

    let fid = rows.iter().map(|row| (row.fe_closed - row.fe_kraus).abs()).fold(0.0, f64::max);
    out.push(check("fidelity_consistency_grid", fid, FIDELITY_TOL, "|fe_closed - fe_kraus| over the grid".into()));

    let pur = rows.iter().map(|row| (row.s_e - row.s_ar).abs()).fold(0.0, f64::max);
    out.push(check("purification_grid", pur, ENTROPY_TOL, "|S_e - S(rho_AR)| over the grid".into()));

    let s_a = rows.iter().map(|row| (row.s_a - 1.0).abs()).fold(0.0, f64::max);
    out.push(check("alice_entropy", s_a, cfg.abs_tol, "|S(rho_A) - 1| over the grid".into()));

    let margin = rows.iter().map(|row| -row.subadd_margin).fold(f64::NEG_INFINITY, f64::max);
    out.push(check("subadditivity", margin, cfg.abs_tol, "largest negative sub-additivity margin".into()));

    let fe_rise = rows
        .windows(2)
        .map(|w| w[1].fe_closed - w[0].fe_closed)
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(CheckResult {
        name: "fidelity_strictly_decreasing",
        passed: fe_rise < 0.0,
        defect: fe_rise,
        bound: 0.0,
        detail: "largest step fe(r_{i+1}) - fe(r_i); must be negative".into(),
    });

    let mi_rise = rows
        .windows(2)
        .map(|w| w[1].mutual_info - w[0].mutual_info)
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(check(
        "mutual_info_non_increasing",
        mi_rise,
        0.0,
        "largest step I(r_{i+1}) - I(r_i)".into(),
    ));
    out
}

/// The full invariant suite: fixed-point checks first, then the grid checks
/// from a sweep at `cfg`.
pub fn verify(cfg: &SweepConfig, fault: Option<KrausFault>) -> Result<VerifyReport> {
    cfg.validate()?;
    if let Some(f) = fault {
        if f.index > CHANNEL_CHECK_N {
            return Err(Error::KrausIndex { index: f.index, n_max: CHANNEL_CHECK_N });
        }
    }
    let tol = cfg.abs_tol;
    let mut checks = vec![
        check_channel_equivalence(tol, fault)?,
        check_trace_preservation_subspace(tol, &[0.0, 0.5, 1.0, 1.25, 1.5], fault)?,
        check_trace_preservation_off_subspace(tol, fault)?,
        check_entropy_series(tol, &[0.25, 1.0, 2.0])?,
        check_purification(tol, &[0.5, 1.0])?,
        check_fidelity_paths(tol, &[0.0, 0.25, 0.5, 1.0, 1.5, 2.0], fault)?,
    ];
    let rows = run_sweep(cfg)?;
    checks.extend(grid_checks(cfg, &rows));
    Ok(VerifyReport { checks })
}
