//! Source models: harmonic amplitudes α̃_m(k, k⊥) and channel metadata.
//!
//! Three physical scenarios radiate photon pairs here:
//!
//! * a single dielectric (or magnetic) sphere on a circular orbit,
//!   α̃_m = (4πa³/3) κ f(ka) J_m(k⊥R) up to the phase iᵐe^{imφ},
//! * two dielectric spheres orbiting their center of mass,
//!   α̃_m = M [μ κ₁/ρ₁ f(ka₁) J_m((1−μ)k⊥R) + (−1)ᵐ (1−μ) κ₂/ρ₂ f(ka₂) J_m(μ k⊥R)],
//! * the weak-field metric of a binary star,
//!   α̃_m = −(16π²/k²) [r₁ cos(ka₁) J_m((1−μ)k⊥R) + (−1)ᵐ r₂ cos(ka₂) J_m(μ k⊥R)].
//!
//! The metric prefactor ships in two variants: 16π²/k², and
//! 4π/k² from an independent regularized evaluation of the spatial integral
//! ∫_{r>a} d³r e^{ik·r}/r = 4π cos(ka)/k². They differ by 4π; both are kept
//! behind [`AlphaVariant`] and the cross-check report quantifies the gap
//! instead of silently picking one.
//!
//! Phase bookkeeping: the common factor iᵐe^{imφ} is dropped from the stored
//! value (every rate consumes |α̃_m|², and φ only rotates the pair about the
//! orbital axis), so `value` carries the real bracket with its sign.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{form_factor_unchecked, harmonic_suppression_ratio, jm, Helicity};
use crate::units::{DerivedOrbit, CONSTANTS};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Which physical mechanism sources the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SourceKind {
    DielectricSphere,
    BinaryDielectric,
    BinaryMetric,
}

/// Metric amplitude prefactor selection (see module docs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum AlphaVariant {
    /// The 16π²/k² prefactor.
    #[default]
    Paper,
    /// 4π/k², from the independent regularized spatial integral.
    Rederived,
}

impl AlphaVariant {
    pub fn label(self) -> &'static str {
        match self {
            AlphaVariant::Paper => "paper",
            AlphaVariant::Rederived => "rederived",
        }
    }
}

/// Helicity selection rules and normalization of a source's rate density.
#[derive(Debug, Clone)]
pub struct SourceChannel {
    pub kind: SourceKind,
    /// Ordered helicity pairs with nonzero rate.
    pub allowed_pairs: &'static [(Helicity, Helicity)],
    /// Per-channel constant multiplying ω₁ω₂ |α̃_m|² δ in the rate density.
    pub rate_normalization: f64,
}

const ALL_PAIRS: [(Helicity, Helicity); 4] = [
    (Helicity::L, Helicity::L),
    (Helicity::L, Helicity::R),
    (Helicity::R, Helicity::L),
    (Helicity::R, Helicity::R),
];
const OPPOSITE_PAIRS: [(Helicity, Helicity); 2] =
    [(Helicity::L, Helicity::R), (Helicity::R, Helicity::L)];

impl SourceChannel {
    pub fn for_kind(kind: SourceKind) -> SourceChannel {
        let two_pi_5 = (2.0 * std::f64::consts::PI).powi(5);
        match kind {
            SourceKind::DielectricSphere | SourceKind::BinaryDielectric => SourceChannel {
                kind,
                allowed_pairs: &ALL_PAIRS,
                rate_normalization: 1.0 / (two_pi_5 * 8.0),
            },
            // metric pairs always carry opposite circular polarizations
            SourceKind::BinaryMetric => SourceChannel {
                kind,
                allowed_pairs: &OPPOSITE_PAIRS,
                rate_normalization: 2.0 / two_pi_5,
            },
        }
    }

    pub fn allows(&self, pair: (Helicity, Helicity)) -> bool {
        self.allowed_pairs.contains(&pair)
    }
}

/// One harmonic Fourier amplitude of the coupling α(r, t).
///
/// `value` is α̃_m with the phase iᵐe^{imφ} factored out; units are m³ per
/// the Fourier convention (the 2πδ(ω − mΩ) is metadata of the harmonic
/// decomposition, not part of the value).
#[derive(Debug, Clone, Copy)]
pub struct HarmonicAmplitude {
    pub m: u32,
    pub value: Complex64,
    /// |k| at which the amplitude was evaluated, 1/m.
    pub k: f64,
    /// In-plane component k⊥, 1/m.
    pub kperp: f64,
}

impl HarmonicAmplitude {
    pub fn modulus_squared(&self) -> f64 {
        self.value.norm_sqr()
    }
}

/// Single sphere on a circular orbit. The orbit is given directly (R, Ω)
/// rather than derived from masses.
#[derive(Debug, Clone, Copy)]
pub struct SphereConfig {
    /// Sphere radius a, m.
    pub radius: f64,
    /// κ = 1/ε_r − 1 (or 1/μ_r − 1 for a magnetic sphere).
    pub kappa: f64,
    /// Orbital radius R, m.
    pub orbit_radius: f64,
    /// Orbital angular frequency Ω, rad/s.
    pub omega: f64,
}

impl SphereConfig {
    pub fn new(radius: f64, kappa: f64, orbit_radius: f64, omega: f64) -> Result<SphereConfig> {
        let mut problems = Vec::new();
        if !(radius > 0.0) {
            problems.push(format!("radius must be positive, got {radius}"));
        }
        if !(kappa > -1.0) || !kappa.is_finite() {
            problems.push(format!("kappa must be finite and > -1, got {kappa}"));
        }
        if !(orbit_radius > 0.0) {
            problems.push(format!("orbit radius must be positive, got {orbit_radius}"));
        }
        if radius >= orbit_radius {
            problems.push(format!(
                "sphere radius {radius} must be smaller than the orbit radius {orbit_radius}"
            ));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            problems.push(format!("omega must be positive and finite, got {omega}"));
        }
        if !problems.is_empty() {
            return Err(Error::Config(problems));
        }
        Ok(SphereConfig { radius, kappa, orbit_radius, omega })
    }

    pub fn v_r(&self) -> f64 {
        self.orbit_radius * self.omega / CONSTANTS.c
    }
}

/// Two-body configuration: orbit plus the bodies' radii, mean densities and
/// material coefficients.
#[derive(Debug, Clone, Copy)]
pub struct BinaryConfig {
    pub orbit: DerivedOrbit,
    pub a1: f64,
    pub a2: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

/// Relative tolerance for the body-volume/density/mass consistency check.
pub const DENSITY_MASS_TOL: f64 = 1e-6;

impl BinaryConfig {
    pub fn new(
        orbit: DerivedOrbit,
        a1: f64,
        a2: f64,
        rho1: f64,
        rho2: f64,
        kappa1: f64,
        kappa2: f64,
    ) -> Result<BinaryConfig> {
        let mut problems = Vec::new();
        for (name, v) in [("radius1", a1), ("radius2", a2), ("density1", rho1), ("density2", rho2)]
        {
            if !(v > 0.0) || !v.is_finite() {
                problems.push(format!("{name} must be positive and finite, got {v}"));
            }
        }
        for (name, k) in [("kappa1", kappa1), ("kappa2", kappa2)] {
            if !(k > -1.0) || !k.is_finite() {
                problems.push(format!("{name} must be finite and > -1, got {k}"));
            }
        }
        if a1 + a2 >= orbit.separation {
            problems.push(format!(
                "bodies overlap: radius1 + radius2 = {} m is not smaller than the orbital \
                 separation R = {} m",
                a1 + a2,
                orbit.separation
            ));
        }
        // the amplitude formula weights each body by κ_i/ρ_i with the body
        // mass, so ρ_i must actually be M_i over the body volume
        let (m1, m2) = orbit.body_masses();
        for (name, a, rho, mass) in [("1", a1, rho1, m1), ("2", a2, rho2, m2)] {
            let volume_mass = FOUR_PI / 3.0 * a.powi(3) * rho;
            if a > 0.0 && rho > 0.0 && ((volume_mass - mass) / mass).abs() > DENSITY_MASS_TOL {
                problems.push(format!(
                    "body {name}: (4π/3)·radius³·density = {volume_mass:.6e} kg does not match \
                     the body mass {mass:.6e} kg within {DENSITY_MASS_TOL:e}"
                ));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Config(problems));
        }
        Ok(BinaryConfig { orbit, a1, a2, rho1, rho2, kappa1, kappa2 })
    }

    /// Consistent densities for given masses and radii.
    pub fn densities_from_masses(orbit: &DerivedOrbit, a1: f64, a2: f64) -> (f64, f64) {
        let (m1, m2) = orbit.body_masses();
        (m1 / (FOUR_PI / 3.0 * a1.powi(3)), m2 / (FOUR_PI / 3.0 * a2.powi(3)))
    }

    /// The effective κ̄/ρ̄ = κ₁/ρ₁ − κ₂/ρ₂ whose cancellation kills the m=1
    /// harmonic.
    pub fn kappa_bar_over_rho_bar(&self) -> f64 {
        self.kappa1 / self.rho1 - self.kappa2 / self.rho2
    }

    /// Whether the materials are fine-tuned to κ₁/ρ₁ = κ₂/ρ₂.
    pub fn is_fine_tuned(&self) -> bool {
        let scale = (self.kappa1 / self.rho1).abs().max((self.kappa2 / self.rho2).abs());
        self.kappa_bar_over_rho_bar().abs() <= 1e-12 * scale
    }
}

fn check_wavevector(m: u32, k: f64, kperp: f64) -> Result<()> {
    if !k.is_finite() || !kperp.is_finite() {
        return Err(Error::invalid(format!(
            "wavevector must be finite, got k = {k}, kperp = {kperp}"
        )));
    }
    if kperp < 0.0 || kperp > k * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "need 0 <= kperp <= k, got kperp = {kperp}, k = {k} (m = {m})"
        )));
    }
    Ok(())
}

/// α̃_m for the orbiting dielectric sphere.
pub fn alpha_m_sphere(cfg: &SphereConfig, m: u32, k: f64, kperp: f64) -> Result<HarmonicAmplitude> {
    check_wavevector(m, k, kperp)?;
    let volume = FOUR_PI / 3.0 * cfg.radius.powi(3);
    let value = volume
        * cfg.kappa
        * form_factor_unchecked(k * cfg.radius)
        * jm(m, kperp * cfg.orbit_radius);
    Ok(HarmonicAmplitude { m, value: Complex64::from(value), k, kperp })
}

/// α̃_m for the binary of two dielectric spheres, including the (−1)ᵐ
/// relative sign between the bodies.
pub fn alpha_m_binary_dielectric(
    cfg: &BinaryConfig,
    m: u32,
    k: f64,
    kperp: f64,
) -> Result<HarmonicAmplitude> {
    check_wavevector(m, k, kperp)?;
    let orbit = &cfg.orbit;
    let mu = orbit.mu;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let term1 = mu * (cfg.kappa1 / cfg.rho1)
        * form_factor_unchecked(k * cfg.a1)
        * jm(m, (1.0 - mu) * kperp * orbit.separation);
    let term2 = (1.0 - mu) * (cfg.kappa2 / cfg.rho2)
        * form_factor_unchecked(k * cfg.a2)
        * jm(m, mu * kperp * orbit.separation);
    let value = orbit.m_total * (term1 + sign * term2);
    Ok(HarmonicAmplitude { m, value: Complex64::from(value), k, kperp })
}

/// α̃_m for the binary's weak-field metric perturbation.
///
/// `variant` selects the 16π²/k² (paper) or 4π/k² (rederived) prefactor.
pub fn alpha_m_binary_metric(
    cfg: &BinaryConfig,
    variant: AlphaVariant,
    m: u32,
    k: f64,
    kperp: f64,
) -> Result<HarmonicAmplitude> {
    if m < 1 {
        return Err(Error::invalid("alpha_m_binary_metric: m must be >= 1"));
    }
    if k == 0.0 {
        return Err(Error::SingularInput(
            "alpha_m_binary_metric: k = 0 (the 1/k² prefactor is singular)".into(),
        ));
    }
    check_wavevector(m, k, kperp)?;
    let orbit = &cfg.orbit;
    let mu = orbit.mu;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let prefactor = match variant {
        AlphaVariant::Paper => 16.0 * std::f64::consts::PI.powi(2),
        AlphaVariant::Rederived => FOUR_PI,
    };
    let bracket = orbit.r1 * (k * cfg.a1).cos() * jm(m, (1.0 - mu) * kperp * orbit.separation)
        + sign * orbit.r2 * (k * cfg.a2).cos() * jm(m, mu * kperp * orbit.separation);
    let value = -prefactor / (k * k) * bracket;
    Ok(HarmonicAmplitude { m, value: Complex64::from(value), k, kperp })
}

/// Independent oracle for the harmonic time integral
/// (1/T) ∫₀ᵀ dt e^{imΩt} e^{i z cos(Ωt − φ)}, which must reproduce
/// iᵐ e^{imφ} J_m(z).
///
/// Evaluated with the periodic trapezoid rule, which is spectrally accurate
/// here; `n` subdivisions (256 is ample for z ≤ 20, m ≤ 8).
pub fn alpha_m_time_oracle(m: u32, z: f64, phi: f64, n: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let angle = std::f64::consts::TAU * j as f64 / n as f64;
        let phase = m as f64 * angle + z * (angle - phi).cos();
        sum += Complex64::new(phase.cos(), phase.sin());
    }
    sum / n as f64
}

/// Exact and linearized weak-field coupling α(r, t) of the binary metric.
#[derive(Debug, Clone, Copy)]
pub struct WeakFieldAlpha {
    /// √(h₀/h₁) − 1 from the summed weak-field metric components.
    pub exact: f64,
    /// −r₁/|r−R₁| − r₂/|r−R₂|, the leading term.
    pub linearized: f64,
}

/// Body positions at time t (orbital plane = x–y plane).
pub fn body_positions(orbit: &DerivedOrbit, t: f64) -> (Vector3<f64>, Vector3<f64>) {
    let phase = orbit.omega * t;
    let unit = Vector3::new(phase.cos(), phase.sin(), 0.0);
    ((1.0 - orbit.mu) * orbit.separation * unit, -orbit.mu * orbit.separation * unit)
}

/// α(r, t) = β(r, t) for the binary metric, both exact and linearized.
///
/// The difference between the two is O((r_s/d)²) in the Schwarzschild radius
/// over distance. Points inside a body are rejected (the interior metric is
/// not modeled).
pub fn weak_field_alpha(cfg: &BinaryConfig, r: &Vector3<f64>, t: f64) -> Result<WeakFieldAlpha> {
    let (p1, p2) = body_positions(&cfg.orbit, t);
    let d1 = (r - p1).norm();
    let d2 = (r - p2).norm();
    if d1 <= cfg.a1 || d2 <= cfg.a2 {
        return Err(Error::invalid(format!(
            "weak_field_alpha: point lies inside a body (d1 = {d1}, d2 = {d2})"
        )));
    }
    let s = cfg.orbit.r1 / d1 + cfg.orbit.r2 / d2;
    let h0 = 1.0 - s;
    let h1 = 1.0 + s;
    if h0 <= 0.0 {
        return Err(Error::OutOfRegime(format!(
            "weak_field_alpha: h0 = {h0} <= 0, outside the weak-field regime"
        )));
    }
    Ok(WeakFieldAlpha { exact: (h0 / h1).sqrt() - 1.0, linearized: -s })
}

/// The m=1 versus m=2 metric amplitude comparison.
#[derive(Debug, Clone, Copy)]
pub struct GravHarmonicRatio {
    /// |α̃₁(K, ϖ)|² / |α̃₂(2K, 2ϖ)|² from the amplitude formulas.
    pub exact: f64,
    /// The estimate v_R²((1−2μ)/2 + 2(a₁²−a₂²)/R² · K/K⊥)².
    pub approximate: f64,
}

/// Ratio of the m=1 to the m=2 metric amplitude intensity, exact versus the
/// small-argument estimate.
///
/// The approximation holds for in-plane, full-energy pairs (K ≈ ϖ/c,
/// K⊥ ≈ K); both expressions blow up as K⊥ → 0, where the exact bracket
/// grows one power of K/K⊥ faster than the approximate one — that region
/// contributes little to total rates but the two forms part ways there.
pub fn grav_m1_m2_ratio(cfg: &BinaryConfig, k: f64, kperp: f64) -> Result<GravHarmonicRatio> {
    if kperp == 0.0 {
        return Err(Error::SingularInput("grav_m1_m2_ratio: kperp = 0".into()));
    }
    // prefactor choice cancels in the ratio
    let a1 = alpha_m_binary_metric(cfg, AlphaVariant::Paper, 1, k, kperp)?;
    let a2 = alpha_m_binary_metric(cfg, AlphaVariant::Paper, 2, 2.0 * k, 2.0 * kperp)?;
    let exact = a1.modulus_squared() / a2.modulus_squared();
    let orbit = &cfg.orbit;
    let bracket = (1.0 - 2.0 * orbit.mu) / 2.0
        + 2.0 * (cfg.a1 * cfg.a1 - cfg.a2 * cfg.a2) / orbit.separation.powi(2) * (k / kperp);
    let approximate = orbit.v_r.powi(2) * bracket * bracket;
    Ok(GravHarmonicRatio { exact, approximate })
}

/// Smallest m_max beyond which the cumulative harmonic suppression drops
/// below `tol`.
///
/// The neglected weight of harmonic m_max+1 relative to the leading
/// harmonic is the product of the per-step suppression ratios; the leading
/// harmonic is m=1 for dielectric sources and m=2 for the metric source.
pub fn harmonic_cutoff(kind: SourceKind, v_r: f64, tol: f64) -> Result<u32> {
    if !(v_r > 0.0 && v_r < 1.0) {
        return Err(Error::invalid(format!("harmonic_cutoff: v_r must lie in (0, 1), got {v_r}")));
    }
    if !(tol > 0.0 && tol <= 1.0) {
        return Err(Error::invalid(format!("harmonic_cutoff: tol must lie in (0, 1], got {tol}")));
    }
    let floor = match kind {
        SourceKind::BinaryMetric => 2,
        _ => 1,
    };
    const M_CAP: u32 = 64;
    let mut cumulative = 1.0;
    let mut m = floor;
    loop {
        cumulative *= harmonic_suppression_ratio(m, v_r)?.asymptotic;
        if cumulative < tol || m >= M_CAP {
            return Ok(m);
        }
        m += 1;
    }
}

/// A fully specified radiating system: configuration plus channel rules.
#[derive(Debug, Clone)]
pub enum Source {
    Sphere(SphereConfig),
    BinaryDielectric(BinaryConfig),
    BinaryMetric { cfg: BinaryConfig, variant: AlphaVariant },
}

impl Source {
    pub fn kind(&self) -> SourceKind {
        match self {
            Source::Sphere(_) => SourceKind::DielectricSphere,
            Source::BinaryDielectric(_) => SourceKind::BinaryDielectric,
            Source::BinaryMetric { .. } => SourceKind::BinaryMetric,
        }
    }

    pub fn channel(&self) -> SourceChannel {
        SourceChannel::for_kind(self.kind())
    }

    pub fn omega(&self) -> f64 {
        match self {
            Source::Sphere(cfg) => cfg.omega,
            Source::BinaryDielectric(cfg) | Source::BinaryMetric { cfg, .. } => cfg.orbit.omega,
        }
    }

    pub fn v_r(&self) -> f64 {
        match self {
            Source::Sphere(cfg) => cfg.v_r(),
            Source::BinaryDielectric(cfg) | Source::BinaryMetric { cfg, .. } => cfg.orbit.v_r,
        }
    }

    /// Leading harmonic of this source.
    pub fn leading_harmonic(&self) -> u32 {
        match self.kind() {
            SourceKind::BinaryMetric => 2,
            _ => 1,
        }
    }

    pub fn amplitude(&self, m: u32, k: f64, kperp: f64) -> Result<HarmonicAmplitude> {
        match self {
            Source::Sphere(cfg) => alpha_m_sphere(cfg, m, k, kperp),
            Source::BinaryDielectric(cfg) => alpha_m_binary_dielectric(cfg, m, k, kperp),
            Source::BinaryMetric { cfg, variant } => {
                alpha_m_binary_metric(cfg, *variant, m, k, kperp)
            }
        }
    }
}
