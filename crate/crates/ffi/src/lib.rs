//! C ABI for the pair-radiance library.
//!
//! Conventions:
//! * systems are opaque handles created by `pr_system_new_*` and released
//!   by `pr_system_free`;
//! * every computation returns a `PrStatus` code and writes results through
//!   out-pointers; `PR_STATUS_OK` is zero;
//! * quantities that do not apply to a system (e.g. metric power of a
//!   single sphere) come back as NaN;
//! * panics never cross the boundary — they map to
//!   `PR_STATUS_NUMERICAL_FAILURE`.
//!
//! The matching header `include/pair_radiance.h` is generated at build time.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use pair_radiance::{
    build_envelope, crosscheck_report, derive_orbit, sample_pairs, total_rate_numeric,
    AlphaVariant, BinaryConfig, Error, Frequency, Helicity, OrbitInput, QuadratureOptions,
    ReportInput, Source, SphereConfig,
};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    OutOfRegime = 3,
    SingularInput = 4,
    NumericalFailure = 5,
    ConfigError = 6,
    IoError = 7,
}

/// Metric amplitude prefactor variant.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrAlphaVariant {
    /// The 16π²/k² prefactor.
    Paper = 0,
    /// 4π/k², from the independent regularized spatial integral.
    Rederived = 1,
}

/// Source selection for rate and sampling calls on a binary system.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrSourceKind {
    DielectricSphere = 0,
    BinaryDielectric = 1,
    BinaryMetric = 2,
}

/// Kepler-derived orbit quantities (SI units).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PrOrbit {
    pub separation_m: f64,
    pub v_r: f64,
    pub period_s: f64,
    pub omega_rad_s: f64,
    pub schwarzschild_r1_m: f64,
    pub schwarzschild_r2_m: f64,
}

/// Closed-form powers and derived quantities; NaN marks not-applicable.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PrPowerReport {
    pub p_e_w: f64,
    pub p_m_w: f64,
    pub p_g_paper_w: f64,
    pub p_g_quadrupole_w: f64,
    pub pair_rate_per_s: f64,
    pub waiting_time_yr: f64,
    pub ratio_pm_pe: f64,
    pub ie: f64,
    pub im: f64,
}

enum SystemKind {
    Sphere(SphereConfig),
    Binary(BinaryConfig),
}

/// Opaque handle to a validated radiating system.
pub struct PrSystem {
    kind: SystemKind,
}

fn status_of(err: &Error) -> PrStatus {
    match err {
        Error::InvalidInput(_) => PrStatus::InvalidInput,
        Error::OutOfRegime(_) => PrStatus::OutOfRegime,
        Error::SingularInput(_) => PrStatus::SingularInput,
        Error::NumericalFailure(_) => PrStatus::NumericalFailure,
        Error::Config(_) => PrStatus::ConfigError,
        Error::Io(_) => PrStatus::IoError,
    }
}

fn guarded(f: impl FnOnce() -> PrStatus) -> PrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => PrStatus::NumericalFailure,
    }
}

fn variant_of(v: PrAlphaVariant) -> AlphaVariant {
    match v {
        PrAlphaVariant::Paper => AlphaVariant::Paper,
        PrAlphaVariant::Rederived => AlphaVariant::Rederived,
    }
}

fn source_for(system: &PrSystem, kind: PrSourceKind, variant: PrAlphaVariant) -> Result<Source, PrStatus> {
    match (&system.kind, kind) {
        (SystemKind::Sphere(cfg), PrSourceKind::DielectricSphere) => Ok(Source::Sphere(*cfg)),
        (SystemKind::Binary(cfg), PrSourceKind::BinaryDielectric) => {
            Ok(Source::BinaryDielectric(*cfg))
        }
        (SystemKind::Binary(cfg), PrSourceKind::BinaryMetric) => {
            Ok(Source::BinaryMetric { cfg: *cfg, variant: variant_of(variant) })
        }
        _ => Err(PrStatus::InvalidInput),
    }
}

/// Create a single orbiting sphere system.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle that must
/// be released with [`pr_system_free`].
#[no_mangle]
pub unsafe extern "C" fn pr_system_new_sphere(
    radius_m: f64,
    kappa: f64,
    orbit_radius_m: f64,
    omega_rad_s: f64,
    out: *mut *mut PrSystem,
) -> PrStatus {
    if out.is_null() {
        return PrStatus::NullPointer;
    }
    guarded(|| match SphereConfig::new(radius_m, kappa, orbit_radius_m, omega_rad_s) {
        Ok(cfg) => {
            *out = Box::into_raw(Box::new(PrSystem { kind: SystemKind::Sphere(cfg) }));
            PrStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Create a binary system from total mass, mass fraction and period.
///
/// Densities must satisfy (4π/3)aᵢ³ρᵢ = Mᵢ within 1e-6; pass the values you
/// mean, the call validates them.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle that must
/// be released with [`pr_system_free`].
#[no_mangle]
pub unsafe extern "C" fn pr_system_new_binary(
    mass_kg: f64,
    mu: f64,
    period_s: f64,
    radius1_m: f64,
    radius2_m: f64,
    density1_kg_m3: f64,
    density2_kg_m3: f64,
    kappa1: f64,
    kappa2: f64,
    out: *mut *mut PrSystem,
) -> PrStatus {
    if out.is_null() {
        return PrStatus::NullPointer;
    }
    guarded(|| {
        let orbit = match derive_orbit(&OrbitInput {
            m_total: mass_kg,
            mu,
            frequency: Frequency::Period(period_s),
        }) {
            Ok(orbit) => orbit,
            Err(e) => return status_of(&e),
        };
        match BinaryConfig::new(
            orbit,
            radius1_m,
            radius2_m,
            density1_kg_m3,
            density2_kg_m3,
            kappa1,
            kappa2,
        ) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(PrSystem { kind: SystemKind::Binary(cfg) }));
                PrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a system handle. Null is a no-op.
///
/// # Safety
/// `system` must be null or a handle from `pr_system_new_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pr_system_free(system: *mut PrSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Orbit quantities of the system. For a sphere the separation is the orbit
/// radius and the Schwarzschild radii are NaN.
///
/// # Safety
/// `system` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pr_system_orbit(system: *const PrSystem, out: *mut PrOrbit) -> PrStatus {
    if system.is_null() || out.is_null() {
        return PrStatus::NullPointer;
    }
    guarded(|| {
        let system = &*system;
        *out = match &system.kind {
            SystemKind::Sphere(cfg) => PrOrbit {
                separation_m: cfg.orbit_radius,
                v_r: cfg.v_r(),
                period_s: std::f64::consts::TAU / cfg.omega,
                omega_rad_s: cfg.omega,
                schwarzschild_r1_m: f64::NAN,
                schwarzschild_r2_m: f64::NAN,
            },
            SystemKind::Binary(cfg) => PrOrbit {
                separation_m: cfg.orbit.separation,
                v_r: cfg.orbit.v_r,
                period_s: cfg.orbit.period,
                omega_rad_s: cfg.orbit.omega,
                schwarzschild_r1_m: cfg.orbit.r1,
                schwarzschild_r2_m: cfg.orbit.r2,
            },
        };
        PrStatus::Ok
    })
}

/// Closed-form powers, pair rate, waiting time and the computed
/// dimensionless integrals.
///
/// # Safety
/// `system` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pr_power_report(
    system: *const PrSystem,
    variant: PrAlphaVariant,
    gauss_order: u32,
    out: *mut PrPowerReport,
) -> PrStatus {
    if system.is_null() || out.is_null() {
        return PrStatus::NullPointer;
    }
    guarded(|| {
        let system = &*system;
        let input = match &system.kind {
            SystemKind::Sphere(cfg) => ReportInput::Sphere(*cfg),
            SystemKind::Binary(cfg) => ReportInput::Binary(*cfg),
        };
        let opts = QuadratureOptions::uniform(gauss_order.clamp(2, 256) as usize);
        match crosscheck_report(&input, variant_of(variant), &opts) {
            Ok(report) => {
                let nan = f64::NAN;
                *out = PrPowerReport {
                    p_e_w: report.p_e_w.unwrap_or(nan),
                    p_m_w: report.p_m_w.unwrap_or(nan),
                    p_g_paper_w: report.p_g_paper_w.unwrap_or(nan),
                    p_g_quadrupole_w: report.p_g_quadrupole_w.unwrap_or(nan),
                    pair_rate_per_s: report.pair_rate_per_s.unwrap_or(nan),
                    waiting_time_yr: report.waiting_time_yr.unwrap_or(nan),
                    ratio_pm_pe: report.ratio_pm_pe.unwrap_or(nan),
                    ie: report.ie,
                    im: report.im,
                };
                PrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Numerically integrated total pair rate, summed over harmonics 1..=m_max.
///
/// # Safety
/// `system` and `out_rate_per_s` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pr_total_rate(
    system: *const PrSystem,
    kind: PrSourceKind,
    variant: PrAlphaVariant,
    m_max: u32,
    gauss_order: u32,
    out_rate_per_s: *mut f64,
) -> PrStatus {
    if system.is_null() || out_rate_per_s.is_null() {
        return PrStatus::NullPointer;
    }
    guarded(|| {
        let source = match source_for(&*system, kind, variant) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if m_max < 1 {
            return PrStatus::InvalidInput;
        }
        let opts = QuadratureOptions::uniform(gauss_order.clamp(2, 256) as usize);
        match total_rate_numeric(&source, m_max, &opts) {
            Ok(rate) => {
                *out_rate_per_s = rate.total;
                PrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// The dimensionless phase-space integrals IE and IM.
///
/// # Safety
/// `out_ie` and `out_im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pr_dimensionless_integrals(
    gauss_order: u32,
    out_ie: *mut f64,
    out_im: *mut f64,
) -> PrStatus {
    if out_ie.is_null() || out_im.is_null() {
        return PrStatus::NullPointer;
    }
    guarded(|| {
        let opts = QuadratureOptions::uniform(gauss_order.clamp(2, 256) as usize);
        match pair_radiance::dimensionless_integrals(&opts) {
            Ok((ie, im)) => {
                *out_ie = ie.value;
                *out_im = im.value;
                PrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Generate `n_events` pair events at harmonic `m`.
///
/// Wave vectors (units of Ω/c) land in `out_vectors` as six doubles per
/// event (l1x l1y l1z l2x l2y l2z); helicities in `out_helicities` as two
/// bytes per event, 0 = L, 1 = R. `out_written` receives the event count
/// (fewer than requested only for a vanishing-density source).
///
/// # Safety
/// `out_vectors` must hold at least 6·n_events doubles, `out_helicities`
/// at least 2·n_events bytes, and `out_written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pr_sample_events(
    system: *const PrSystem,
    kind: PrSourceKind,
    variant: PrAlphaVariant,
    m: u32,
    n_events: usize,
    seed: u64,
    envelope_grid: u32,
    out_vectors: *mut f64,
    out_helicities: *mut u8,
    out_written: *mut usize,
) -> PrStatus {
    if system.is_null() || out_vectors.is_null() || out_helicities.is_null() || out_written.is_null()
    {
        return PrStatus::NullPointer;
    }
    guarded(|| {
        let source = match source_for(&*system, kind, variant) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if m < 1 || n_events == 0 {
            return PrStatus::InvalidInput;
        }
        let envelope = match build_envelope(&source, m, envelope_grid.clamp(8, 128) as usize) {
            Ok(env) => env,
            Err(e) => return status_of(&e),
        };
        match sample_pairs(&source, m, n_events, seed, &envelope) {
            Ok(run) => {
                let vectors = std::slice::from_raw_parts_mut(out_vectors, 6 * n_events);
                let helicities = std::slice::from_raw_parts_mut(out_helicities, 2 * n_events);
                for (i, event) in run.events.iter().enumerate() {
                    let v = &mut vectors[6 * i..6 * i + 6];
                    v[0] = event.l1_vec.x;
                    v[1] = event.l1_vec.y;
                    v[2] = event.l1_vec.z;
                    v[3] = event.l2_vec.x;
                    v[4] = event.l2_vec.y;
                    v[5] = event.l2_vec.z;
                    helicities[2 * i] = (event.helicities.0 == Helicity::R) as u8;
                    helicities[2 * i + 1] = (event.helicities.1 == Helicity::R) as u8;
                }
                *out_written = run.events.len();
                PrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn pr_status_message(status: PrStatus) -> *const c_char {
    let message: &'static str = match status {
        PrStatus::Ok => "ok\0",
        PrStatus::NullPointer => "null pointer argument\0",
        PrStatus::InvalidInput => "invalid input\0",
        PrStatus::OutOfRegime => "parameters outside the validity regime\0",
        PrStatus::SingularInput => "singular input\0",
        PrStatus::NumericalFailure => "numerical failure\0",
        PrStatus::ConfigError => "configuration error\0",
        PrStatus::IoError => "io error\0",
    };
    message.as_ptr() as *const c_char
}
