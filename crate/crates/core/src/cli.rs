//! Configuration ingestion, subcommand dispatch and tabular output.
//!
//! Configs are JSON with explicit SI-unit key suffixes (`mass_kg`,
//! `period_s`, `radius1_m`, `density1_kg_m3`, ...) because unit mistakes are
//! the dominant failure mode in this domain. Unknown keys are rejected and
//! semantic validation reports every problem at once, not just the first.
//!
//! Every output file is self-describing: header comments (CSV) or a meta
//! object (JSON) carry the tool version, the config hash, the seed, the
//! pinned constants and the metric prefactor variant in force. Nothing in an
//! output depends on wall-clock time or worker count, so re-running a
//! subcommand with the same config and seed reproduces it byte for byte.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::phase_space::{angular_distribution, spectrum};
use crate::quadrature::{
    dimensionless_integrals, integrate_reduced, mc_estimate, QuadratureOptions, WeightSpec,
};
use crate::rates::{
    crosscheck_report, power_binary_dielectric_closed, power_binary_metric_closed,
    power_sphere_closed, total_rate_numeric, waiting_time, PowerReport, ReportInput,
};
use crate::sampler::{build_envelope, sample_pairs};
use crate::sources::{harmonic_cutoff, AlphaVariant, BinaryConfig, Source, SphereConfig};
use crate::units::{derive_orbit, DerivedOrbit, Frequency, OrbitInput, CONSTANTS};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Sphere,
    BinaryDielectric,
    BinaryMetric,
    Compare,
}

impl Scenario {
    fn parse(s: &str) -> Result<Scenario> {
        match s {
            "sphere" => Ok(Scenario::Sphere),
            "binary_dielectric" => Ok(Scenario::BinaryDielectric),
            "binary_metric" => Ok(Scenario::BinaryMetric),
            "compare" => Ok(Scenario::Compare),
            other => Err(Error::Config(vec![format!(
                "scenario must be one of sphere, binary_dielectric, binary_metric, compare; \
                 got {other:?}"
            )])),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: String,
    system: RawSystem,
    #[serde(default)]
    numerics: Numerics,
    #[serde(default)]
    output: Option<RawOutput>,
    #[serde(default)]
    scan: Option<ScanSpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    // binary keys
    mass_kg: Option<f64>,
    mu: Option<f64>,
    period_s: Option<f64>,
    omega_rad_s: Option<f64>,
    radius1_m: Option<f64>,
    radius2_m: Option<f64>,
    density1_kg_m3: Option<f64>,
    density2_kg_m3: Option<f64>,
    kappa1: Option<f64>,
    kappa2: Option<f64>,
    // sphere keys
    radius_m: Option<f64>,
    kappa: Option<f64>,
    orbit_radius_m: Option<f64>,
}

/// Numerical settings, all defaulted.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    pub gauss_order: usize,
    pub mc_samples: u64,
    pub seed: u64,
    /// Harmonic-cutoff tolerance.
    pub tolerance: f64,
    /// Grid resolution of spectrum/angular tables.
    pub grid_points: usize,
    /// Events written by the `sample` subcommand.
    pub events: usize,
    /// Envelope scan resolution per axis.
    pub envelope_grid: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            gauss_order: 32,
            mc_samples: 1_000_000,
            seed: 0,
            tolerance: 1e-6,
            grid_points: 41,
            events: 10_000,
            envelope_grid: 24,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(default)]
    path: Option<String>,
    #[serde(default)]
    format: Option<OutputFormat>,
}

/// Parameter sweep description for the `scan` subcommand.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    /// One of: omega_rad_s, period_s, mass_kg, mu.
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    #[serde(default = "default_true")]
    pub log_spacing: bool,
}

fn default_true() -> bool {
    true
}

/// Fully validated run configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub sphere: Option<SphereConfig>,
    pub binary: Option<BinaryConfig>,
    pub numerics: Numerics,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub scan: Option<ScanSpec>,
    pub config_sha256: String,
}

fn require(problems: &mut Vec<String>, field: &str, v: Option<f64>) -> f64 {
    match v {
        Some(x) => x,
        None => {
            problems.push(format!("missing required key system.{field}"));
            f64::NAN
        }
    }
}

/// Parse and validate a JSON configuration file.
///
/// All semantic problems are collected and reported together.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let bytes = std::fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    let config_sha256: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let raw: RawConfig = serde_json::from_slice(&bytes)
        .map_err(|e| Error::Config(vec![format!("{e}")]))?;

    let scenario = Scenario::parse(&raw.scenario)?;
    let mut problems = Vec::new();
    let sys = &raw.system;

    let frequency = match (sys.period_s, sys.omega_rad_s) {
        (Some(t), None) => Some(Frequency::Period(t)),
        (None, Some(w)) => Some(Frequency::AngularFrequency(w)),
        (Some(_), Some(_)) => {
            problems.push("give exactly one of system.period_s and system.omega_rad_s".into());
            None
        }
        (None, None) => {
            problems.push("one of system.period_s or system.omega_rad_s is required".into());
            None
        }
    };

    let mut sphere = None;
    let mut binary = None;
    match scenario {
        Scenario::Sphere => {
            let radius = require(&mut problems, "radius_m", sys.radius_m);
            let kappa = require(&mut problems, "kappa", sys.kappa);
            let orbit_radius = require(&mut problems, "orbit_radius_m", sys.orbit_radius_m);
            let omega = match frequency {
                Some(Frequency::AngularFrequency(w)) => w,
                Some(Frequency::Period(t)) if t > 0.0 => std::f64::consts::TAU / t,
                _ => f64::NAN,
            };
            if problems.is_empty() {
                match SphereConfig::new(radius, kappa, orbit_radius, omega) {
                    Ok(cfg) => sphere = Some(cfg),
                    Err(Error::Config(list)) => problems.extend(list),
                    Err(e) => problems.push(e.to_string()),
                }
            }
        }
        Scenario::BinaryDielectric | Scenario::BinaryMetric | Scenario::Compare => {
            let mass = require(&mut problems, "mass_kg", sys.mass_kg);
            let mu = require(&mut problems, "mu", sys.mu);
            let a1 = require(&mut problems, "radius1_m", sys.radius1_m);
            let a2 = require(&mut problems, "radius2_m", sys.radius2_m);
            let rho1 = require(&mut problems, "density1_kg_m3", sys.density1_kg_m3);
            let rho2 = require(&mut problems, "density2_kg_m3", sys.density2_kg_m3);
            let kappa1 = require(&mut problems, "kappa1", sys.kappa1);
            let kappa2 = require(&mut problems, "kappa2", sys.kappa2);
            if problems.is_empty() {
                // the orbit comes first: body overlap is checked against the
                // separation derived from (M, Ω)
                match frequency
                    .ok_or_else(|| Error::Config(vec!["frequency missing".into()]))
                    .and_then(|f| derive_orbit(&OrbitInput { m_total: mass, mu, frequency: f }))
                {
                    Ok(orbit) => {
                        match BinaryConfig::new(orbit, a1, a2, rho1, rho2, kappa1, kappa2) {
                            Ok(cfg) => binary = Some(cfg),
                            Err(Error::Config(list)) => problems.extend(list),
                            Err(e) => problems.push(e.to_string()),
                        }
                    }
                    Err(Error::Config(list)) => problems.extend(list),
                    Err(e) => problems.push(e.to_string()),
                }
            }
        }
    }

    let numerics = raw.numerics;
    if numerics.gauss_order < 2 || numerics.gauss_order > 256 {
        problems.push(format!(
            "numerics.gauss_order must lie in [2, 256], got {}",
            numerics.gauss_order
        ));
    }
    if numerics.mc_samples < 1000 {
        problems.push(format!(
            "numerics.mc_samples must be at least 1000, got {}",
            numerics.mc_samples
        ));
    }
    if !(numerics.tolerance > 0.0 && numerics.tolerance <= 1.0) {
        problems.push(format!(
            "numerics.tolerance must lie in (0, 1], got {}",
            numerics.tolerance
        ));
    }
    if numerics.grid_points < 2 {
        problems.push("numerics.grid_points must be at least 2".into());
    }

    if let Some(scan) = &raw.scan {
        const PARAMS: [&str; 4] = ["omega_rad_s", "period_s", "mass_kg", "mu"];
        if !PARAMS.contains(&scan.parameter.as_str()) {
            problems.push(format!(
                "scan.parameter must be one of {PARAMS:?}, got {:?}",
                scan.parameter
            ));
        }
        if scan.points < 2 {
            problems.push("scan.points must be at least 2".into());
        }
        if !(scan.from > 0.0 && scan.to > 0.0) && scan.parameter != "mu" {
            problems.push("scan.from and scan.to must be positive".into());
        }
        if scan.log_spacing && (scan.from <= 0.0 || scan.to <= 0.0) {
            problems.push("log-spaced scans need positive endpoints".into());
        }
    }

    if !problems.is_empty() {
        return Err(Error::Config(problems));
    }

    let (output_path, output_format) = match &raw.output {
        Some(o) => (o.path.as_ref().map(PathBuf::from), o.format.unwrap_or(OutputFormat::Csv)),
        None => (None, OutputFormat::Csv),
    };
    Ok(RunConfig {
        scenario,
        sphere,
        binary,
        numerics,
        output_path,
        output_format,
        scan: raw.scan,
        config_sha256,
    })
}

/// CLI-level overrides of config values.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub alpha_variant: Option<AlphaVariant>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliCommand {
    Rate,
    Power,
    Spectrum,
    Angular,
    Integrals,
    Sample,
    Scan,
    Compare,
}

impl CliCommand {
    fn name(self) -> &'static str {
        match self {
            CliCommand::Rate => "rate",
            CliCommand::Power => "power",
            CliCommand::Spectrum => "spectrum",
            CliCommand::Angular => "angular",
            CliCommand::Integrals => "integrals",
            CliCommand::Sample => "sample",
            CliCommand::Scan => "scan",
            CliCommand::Compare => "compare",
        }
    }
}

struct Meta {
    command: &'static str,
    config_sha256: String,
    seed: u64,
    alpha_variant: AlphaVariant,
}

impl Meta {
    fn csv_header(&self) -> String {
        let c = &CONSTANTS;
        format!(
            "# pair-radiance {VERSION}\n\
             # command: {}\n\
             # config_sha256: {}\n\
             # seed: {}\n\
             # alpha_variant: {}\n\
             # constants: G={:e} m^3 kg^-1 s^-2, c={} m/s, hbar={:e} J s, M_sun={:e} kg\n",
            self.command,
            self.config_sha256,
            self.seed,
            self.alpha_variant.label(),
            c.g,
            c.c,
            c.hbar,
            c.m_sun
        )
    }

    fn json_value(&self) -> serde_json::Value {
        json!({
            "tool": "pair-radiance",
            "version": VERSION,
            "command": self.command,
            "config_sha256": self.config_sha256,
            "seed": self.seed,
            "alpha_variant": self.alpha_variant.label(),
            "constants": {
                "g_m3_kg_s2": CONSTANTS.g,
                "c_m_s": CONSTANTS.c,
                "hbar_j_s": CONSTANTS.hbar,
                "m_sun_kg": CONSTANTS.m_sun,
            },
        })
    }
}

/// A finished table: CSV text plus the equivalent JSON value.
struct Rendered {
    csv: String,
    json: serde_json::Value,
}

fn table(header: &str, rows: &[Vec<String>], json_rows: serde_json::Value) -> Rendered {
    let mut csv = String::new();
    csv.push_str(header);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    Rendered { csv, json: json_rows }
}

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

/// Execute a subcommand. Output goes to `--out`/config path, or stdout.
pub fn run(cmd: CliCommand, cfg: &RunConfig, overrides: &Overrides) -> Result<()> {
    let run_inner = || -> Result<()> {
        let seed = overrides.seed.unwrap_or(cfg.numerics.seed);
        let variant = overrides.alpha_variant.unwrap_or_default();
        let meta = Meta {
            command: cmd.name(),
            config_sha256: cfg.config_sha256.clone(),
            seed,
            alpha_variant: variant,
        };
        let rendered = match cmd {
            CliCommand::Rate => cmd_rate(cfg, variant)?,
            CliCommand::Power | CliCommand::Compare => cmd_power(cfg, variant)?,
            CliCommand::Spectrum => cmd_spectrum(cfg, variant)?,
            CliCommand::Angular => cmd_angular(cfg, variant)?,
            CliCommand::Integrals => cmd_integrals(cfg, seed)?,
            CliCommand::Sample => cmd_sample(cfg, variant, seed)?,
            CliCommand::Scan => cmd_scan(cfg)?,
        };
        let format = overrides.format.unwrap_or(cfg.output_format);
        let payload = match format {
            OutputFormat::Csv => format!("{}{}", meta.csv_header(), rendered.csv),
            OutputFormat::Json => {
                let doc = json!({ "meta": meta.json_value(), "data": rendered.json });
                let mut s = serde_json::to_string_pretty(&doc).expect("report serialization");
                s.push('\n');
                s
            }
        };
        match &cfg.output_path {
            Some(path) => std::fs::write(path, payload)?,
            None => {
                let stdout = std::io::stdout();
                stdout.lock().write_all(payload.as_bytes())?;
            }
        }
        Ok(())
    };

    match overrides.threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::NumericalFailure(format!("thread pool: {e}")))?
            .install(run_inner),
        _ => run_inner(),
    }
}

/// The source a scenario computes rates for.
fn primary_source(cfg: &RunConfig, variant: AlphaVariant) -> Result<Source> {
    match cfg.scenario {
        Scenario::Sphere => Ok(Source::Sphere(cfg.sphere.expect("validated sphere config"))),
        Scenario::BinaryDielectric => {
            Ok(Source::BinaryDielectric(cfg.binary.expect("validated binary config")))
        }
        Scenario::BinaryMetric | Scenario::Compare => {
            Ok(Source::BinaryMetric { cfg: cfg.binary.expect("validated binary config"), variant })
        }
    }
}

fn quad_opts(cfg: &RunConfig) -> QuadratureOptions {
    QuadratureOptions::uniform(cfg.numerics.gauss_order)
}

fn cmd_rate(cfg: &RunConfig, variant: AlphaVariant) -> Result<Rendered> {
    let source = primary_source(cfg, variant)?;
    let m_max = harmonic_cutoff(source.kind(), source.v_r(), cfg.numerics.tolerance)?;
    let rate = total_rate_numeric(&source, m_max, &quad_opts(cfg))?;
    let mut rows: Vec<Vec<String>> = rate
        .per_harmonic
        .iter()
        .map(|&(m, r)| vec![m.to_string(), fmt(r)])
        .collect();
    rows.push(vec!["total".into(), fmt(rate.total)]);
    Ok(table(
        "m,rate_per_s",
        &rows,
        json!({ "per_harmonic": rate.per_harmonic, "total_per_s": rate.total }),
    ))
}

fn report_input(cfg: &RunConfig) -> ReportInput {
    match cfg.scenario {
        Scenario::Sphere => ReportInput::Sphere(cfg.sphere.expect("validated sphere config")),
        _ => ReportInput::Binary(cfg.binary.expect("validated binary config")),
    }
}

fn power_rows(report: &PowerReport, orbit: Option<&DerivedOrbit>) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let mut push = |k: &str, v: Option<f64>| {
        rows.push(vec![
            k.to_string(),
            v.map(fmt).unwrap_or_else(|| "n/a".into()),
        ]);
    };
    push("p_e_w", report.p_e_w);
    push("p_m_w", report.p_m_w);
    if let (Some(p_m), Some(orbit)) = (report.p_m_w, orbit) {
        // coefficient of the natural unit 2ħΩ/T
        let unit = 2.0 * CONSTANTS.hbar * orbit.omega / orbit.period;
        push("p_m_coefficient_of_2hbar_omega_per_t", Some(p_m / unit));
    }
    push("p_g_paper_w", report.p_g_paper_w);
    push("p_g_quadrupole_w", report.p_g_quadrupole_w);
    push("pair_rate_per_s", report.pair_rate_per_s);
    push("waiting_time_yr", report.waiting_time_yr);
    push("ratio_pm_pe", report.ratio_pm_pe);
    push("ie", Some(report.ie));
    push("im", Some(report.im));
    for check in &report.closed_form_vs_numeric {
        rows.push(vec![format!("numeric_over_closed[{}]", check.quantity), fmt(check.ratio)]);
    }
    for (i, flag) in report.flags.iter().enumerate() {
        rows.push(vec![format!("flag{i}"), format!("\"{flag}\"")]);
    }
    rows
}

fn cmd_power(cfg: &RunConfig, variant: AlphaVariant) -> Result<Rendered> {
    let report = crosscheck_report(&report_input(cfg), variant, &quad_opts(cfg))?;
    let orbit = cfg.binary.map(|b| b.orbit);
    let rows = power_rows(&report, orbit.as_ref());
    Ok(table(
        "quantity,value",
        &rows,
        serde_json::to_value(&report).expect("report serialization"),
    ))
}

fn cmd_spectrum(cfg: &RunConfig, variant: AlphaVariant) -> Result<Rendered> {
    let source = primary_source(cfg, variant)?;
    let m = source.leading_harmonic();
    let n = cfg.numerics.grid_points;
    let grid: Vec<f64> = (1..=n).map(|i| m as f64 * i as f64 / (n + 1) as f64).collect();
    let rows = spectrum(&source, m, &grid, cfg.numerics.gauss_order)?;
    let table_rows: Vec<Vec<String>> =
        rows.iter().map(|&(x, y)| vec![fmt(x), fmt(y)]).collect();
    Ok(table(
        "omega1_over_omega,d_rate_d_omega1",
        &table_rows,
        json!({ "m": m, "rows": rows }),
    ))
}

fn cmd_angular(cfg: &RunConfig, variant: AlphaVariant) -> Result<Rendered> {
    let source = primary_source(cfg, variant)?;
    let m = source.leading_harmonic();
    let n = cfg.numerics.grid_points.max(2);
    let grid: Vec<f64> = (0..n)
        .map(|i| -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * i as f64 / (n - 1) as f64)
        .collect();
    let rows = angular_distribution(&source, m, &grid, cfg.numerics.gauss_order)?;
    let table_rows: Vec<Vec<String>> =
        rows.iter().map(|&(x, y)| vec![fmt(x), fmt(y)]).collect();
    Ok(table(
        "chi_rad,relative_intensity",
        &table_rows,
        json!({ "m": m, "rows": rows }),
    ))
}

fn cmd_integrals(cfg: &RunConfig, seed: u64) -> Result<Rendered> {
    let opts = quad_opts(cfg);
    let (ie, im) = dimensionless_integrals(&opts)?;
    let ie_mc = mc_estimate(&WeightSpec::ie(), cfg.numerics.mc_samples, seed)?;
    let im_mc = mc_estimate(&WeightSpec::im(), cfg.numerics.mc_samples, seed)?;
    let rows: Vec<Vec<String>> = [("IE", &ie), ("IE", &ie_mc), ("IM", &im), ("IM", &im_mc)]
        .iter()
        .map(|(name, est)| {
            vec![
                name.to_string(),
                format!("{:?}", est.method),
                fmt(est.value),
                fmt(est.std_error),
                est.n_evals.to_string(),
            ]
        })
        .collect();
    Ok(table(
        "integral,method,value,std_error,n_evals",
        &rows,
        json!({ "ie_gauss": ie, "ie_mc": ie_mc, "im_gauss": im, "im_mc": im_mc }),
    ))
}

fn cmd_sample(cfg: &RunConfig, variant: AlphaVariant, seed: u64) -> Result<Rendered> {
    let source = primary_source(cfg, variant)?;
    let m = source.leading_harmonic();
    let envelope = build_envelope(&source, m, cfg.numerics.envelope_grid)?;
    let run = sample_pairs(&source, m, cfg.numerics.events, seed, &envelope)?;
    let mut csv = format!(
        "# acceptance_rate: {:e}\n# rate_estimate_per_s: {:e}\n# rate_std_error_per_s: {:e}\n",
        run.acceptance_rate, run.rate_estimate, run.rate_std_error
    );
    csv.push_str("event,m,l1x,l1y,l1z,l2x,l2y,l2z,hel1,hel2\n");
    for (i, e) in run.events.iter().enumerate() {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            i,
            e.m,
            fmt(e.l1_vec.x),
            fmt(e.l1_vec.y),
            fmt(e.l1_vec.z),
            fmt(e.l2_vec.x),
            fmt(e.l2_vec.y),
            fmt(e.l2_vec.z),
            e.helicities.0,
            e.helicities.1
        ));
    }
    let json = json!({
        "m": m,
        "acceptance_rate": run.acceptance_rate,
        "rate_estimate_per_s": run.rate_estimate,
        "rate_std_error_per_s": run.rate_std_error,
        "events": run.events,
    });
    Ok(Rendered { csv, json })
}

fn cmd_scan(cfg: &RunConfig) -> Result<Rendered> {
    let scan = cfg.scan.as_ref().ok_or_else(|| {
        Error::Config(vec!["the scan subcommand needs a scan section in the config".into()])
    })?;
    let values: Vec<f64> = (0..scan.points)
        .map(|i| {
            let t = i as f64 / (scan.points - 1) as f64;
            if scan.log_spacing {
                (scan.from.ln() + t * (scan.to.ln() - scan.from.ln())).exp()
            } else {
                scan.from + t * (scan.to - scan.from)
            }
        })
        .collect();

    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &value in &values {
        let row = scan_point(cfg, &scan.parameter, value)?;
        json_rows.push(json!({
            "parameter": value,
            "v_r": row.v_r,
            "p_e_w": row.p_e,
            "p_m_w": row.p_m,
            "p_g_paper_w": row.p_g,
            "pair_rate_per_s": row.pair_rate,
            "waiting_time_yr": row.waiting,
        }));
        rows.push(vec![
            fmt(value),
            fmt(row.v_r),
            row.p_e.map(fmt).unwrap_or_else(|| "n/a".into()),
            row.p_m.map(fmt).unwrap_or_else(|| "n/a".into()),
            row.p_g.map(fmt).unwrap_or_else(|| "n/a".into()),
            row.pair_rate.map(fmt).unwrap_or_else(|| "n/a".into()),
            row.waiting.map(fmt).unwrap_or_else(|| "n/a".into()),
        ]);
    }
    Ok(table(
        &format!("{},v_r,p_e_w,p_m_w,p_g_paper_w,pair_rate_per_s,waiting_time_yr", scan.parameter),
        &rows,
        serde_json::Value::Array(json_rows),
    ))
}

struct ScanRow {
    v_r: f64,
    p_e: Option<f64>,
    p_m: Option<f64>,
    p_g: Option<f64>,
    pair_rate: Option<f64>,
    waiting: Option<f64>,
}

fn scan_point(cfg: &RunConfig, parameter: &str, value: f64) -> Result<ScanRow> {
    match cfg.scenario {
        Scenario::Sphere => {
            let base = cfg.sphere.expect("validated sphere config");
            let omega = match parameter {
                "omega_rad_s" => value,
                "period_s" => std::f64::consts::TAU / value,
                other => {
                    return Err(Error::Config(vec![format!(
                        "scan parameter {other:?} does not apply to the sphere scenario"
                    )]))
                }
            };
            let sphere = SphereConfig::new(base.radius, base.kappa, base.orbit_radius, omega)?;
            let p_e = power_sphere_closed(&sphere)?;
            Ok(ScanRow {
                v_r: sphere.v_r(),
                p_e: Some(p_e),
                p_m: None,
                p_g: None,
                pair_rate: Some(p_e / (CONSTANTS.hbar * omega)),
                waiting: Some(waiting_time(p_e, 1, omega)?),
            })
        }
        _ => {
            let base = cfg.binary.expect("validated binary config");
            let mut mass = base.orbit.m_total;
            let mut mu = base.orbit.mu;
            let mut frequency = Frequency::AngularFrequency(base.orbit.omega);
            match parameter {
                "omega_rad_s" => frequency = Frequency::AngularFrequency(value),
                "period_s" => frequency = Frequency::Period(value),
                "mass_kg" => mass = value,
                "mu" => mu = value,
                other => {
                    return Err(Error::Config(vec![format!("unknown scan parameter {other:?}")]))
                }
            }
            let orbit = derive_orbit(&OrbitInput { m_total: mass, mu, frequency })?;
            // keep radii and materials, recompute consistent densities
            let (rho1, rho2) = BinaryConfig::densities_from_masses(&orbit, base.a1, base.a2);
            let binary =
                BinaryConfig::new(orbit, base.a1, base.a2, rho1, rho2, base.kappa1, base.kappa2)?;
            let p_e = power_binary_dielectric_closed(&binary)?.watts;
            let p_m = power_binary_metric_closed(&binary)?;
            let p_g = crate::rates::graviton_power(&orbit).paper;
            Ok(ScanRow {
                v_r: orbit.v_r,
                p_e: Some(p_e),
                p_m: Some(p_m),
                p_g: Some(p_g),
                pair_rate: Some(p_m / (2.0 * CONSTANTS.hbar * orbit.omega)),
                waiting: Some(waiting_time(p_m, 2, orbit.omega)?),
            })
        }
    }
}

/// Frozen reference: the dielectric pipeline-consistency ratio used by the
/// acceptance suite, exposed for reuse by integration tests.
pub fn sphere_pipeline_ratio(cfg: &SphereConfig, opts: &QuadratureOptions) -> Result<f64> {
    let ie = integrate_reduced(&WeightSpec::ie(), opts)?;
    let numeric = total_rate_numeric(&Source::Sphere(*cfg), 1, opts)?;
    Ok(numeric.total / crate::rates::rate_sphere_closed(cfg, ie.value))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn write_config(json: &serde_json::Value) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(serde_json::to_string_pretty(json).unwrap().as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    fn minimal_binary_metric() -> serde_json::Value {
        let mass = 2.0 * CONSTANTS.m_sun;
        let rho = 0.5 * mass / (4.0 / 3.0 * std::f64::consts::PI * 1e5f64.powi(3));
        json!({
            "scenario": "binary_metric",
            "system": {
                "mass_kg": mass,
                "mu": 0.5,
                "period_s": 3600.0,
                "radius1_m": 1e5,
                "radius2_m": 1e5,
                "density1_kg_m3": rho,
                "density2_kg_m3": rho,
                "kappa1": -0.5,
                "kappa2": -0.5
            }
        })
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let f = write_config(&minimal_binary_metric());
        let cfg = parse_config(f.path()).unwrap();
        assert_eq!(cfg.numerics.gauss_order, 32);
        assert_eq!(cfg.numerics.seed, 0);
        assert_eq!(cfg.output_format, OutputFormat::Csv);
        assert!(cfg.binary.is_some());
        assert_eq!(cfg.config_sha256.len(), 64);
    }

    #[test]
    fn bad_mu_reports_field_and_range() {
        let mut doc = minimal_binary_metric();
        doc["system"]["mu"] = json!(1.5);
        let f = write_config(&doc);
        let err = parse_config(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("mu") && msg.contains("(0, 1)"), "{msg}");
    }

    #[test]
    fn overlapping_bodies_cite_the_invariant() {
        let mut doc = minimal_binary_metric();
        let rho = CONSTANTS.m_sun / (4.0 / 3.0 * std::f64::consts::PI * 3e8f64.powi(3));
        doc["system"]["radius1_m"] = json!(3e8);
        doc["system"]["radius2_m"] = json!(3e8);
        doc["system"]["density1_kg_m3"] = json!(rho);
        doc["system"]["density2_kg_m3"] = json!(rho);
        let f = write_config(&doc);
        let err = parse_config(f.path()).unwrap_err();
        assert!(err.to_string().contains("overlap"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut doc = minimal_binary_metric();
        doc["system"]["radius_km"] = json!(1.0);
        let f = write_config(&doc);
        let err = parse_config(f.path()).unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
    }

    #[test]
    fn all_problems_reported_at_once() {
        let doc = json!({
            "scenario": "binary_metric",
            "system": { "mass_kg": 3.97784e30, "mu": 0.5, "period_s": 3600.0 }
        });
        let f = write_config(&doc);
        match parse_config(f.path()).unwrap_err() {
            Error::Config(problems) => {
                assert!(problems.len() >= 6, "expected all missing keys listed: {problems:?}")
            }
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = parse_config(Path::new("/nonexistent/config.json")).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }
}
