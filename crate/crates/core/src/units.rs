//! Physical constants and Kepler-orbit derivation.
//!
//! All numbers downstream depend on the constants pinned here, so they are
//! fixed at build time and exposed read-only. The orbit derivation turns a
//! (mass, mass fraction, frequency-or-period) triple into every geometric
//! quantity the source models need:
//!
//! ```text
//! R   = (G M / Ω²)^(1/3)        orbital separation
//! v_R = R Ω / c                 orbital velocity over c,  v_R³ = G M Ω / c³
//! r_i = μ_i · 2 G M / c²        Schwarzschild radii of the two bodies
//! ```

use serde::Serialize;

use crate::error::{Error, Result};

/// Fundamental constants, SI units.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhysicalConstants {
    /// Gravitational constant, m³ kg⁻¹ s⁻².
    pub g: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Solar mass, kg.
    pub m_sun: f64,
}

/// The pinned constant values. Never mutated; every reported number is
/// reproducible bit-for-bit from these.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    g: 6.674_30e-11,
    c: 299_792_458.0,
    hbar: 1.054_571_817e-34,
    m_sun: 1.988_92e30,
};

/// Julian year in seconds, used for waiting-time conversions.
pub const SECONDS_PER_YEAR: f64 = 365.25 * 86_400.0;

/// Orbital frequency specification: exactly one of Ω or T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    /// Angular frequency Ω in rad/s.
    AngularFrequency(f64),
    /// Orbital period T in seconds.
    Period(f64),
}

/// Input description of a two-body circular orbit.
#[derive(Debug, Clone, Copy)]
pub struct OrbitInput {
    /// Total mass M in kg.
    pub m_total: f64,
    /// Mass fraction μ = M₁/M, in (0, 1).
    pub mu: f64,
    /// Ω or T.
    pub frequency: Frequency,
}

/// All Kepler-derived quantities of a circular orbit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DerivedOrbit {
    /// Total mass M, kg.
    pub m_total: f64,
    /// Mass fraction μ = M₁/M.
    pub mu: f64,
    /// Orbital separation R, m.
    pub separation: f64,
    /// Orbital velocity over the speed of light, v_R = RΩ/c.
    pub v_r: f64,
    /// Period T, s.
    pub period: f64,
    /// Angular frequency Ω, rad/s.
    pub omega: f64,
    /// Schwarzschild radius of body 1, r₁ = μ·2GM/c², m.
    pub r1: f64,
    /// Schwarzschild radius of body 2, r₂ = (1−μ)·2GM/c², m.
    pub r2: f64,
}

impl DerivedOrbit {
    /// Masses of the two bodies, kg.
    pub fn body_masses(&self) -> (f64, f64) {
        (self.mu * self.m_total, (1.0 - self.mu) * self.m_total)
    }
}

/// Derive all orbital quantities from the input.
///
/// Fails on nonpositive mass or frequency and on v_R ≥ 1. Emits a warning
/// for v_R > 0.1, where the nonrelativistic closed forms start to degrade
/// but parameter scans into that regime stay legitimate.
pub fn derive_orbit(input: &OrbitInput) -> Result<DerivedOrbit> {
    if !(input.m_total > 0.0) || !input.m_total.is_finite() {
        return Err(Error::invalid(format!(
            "m_total must be positive and finite, got {}",
            input.m_total
        )));
    }
    if !(input.mu > 0.0 && input.mu < 1.0) {
        return Err(Error::invalid(format!(
            "mu must lie in (0, 1), got {}",
            input.mu
        )));
    }
    let omega = match input.frequency {
        Frequency::AngularFrequency(w) => {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::invalid(format!(
                    "omega must be positive and finite, got {w}"
                )));
            }
            w
        }
        Frequency::Period(t) => {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::invalid(format!(
                    "period must be positive and finite, got {t}"
                )));
            }
            std::f64::consts::TAU / t
        }
    };

    let PhysicalConstants { g, c, .. } = CONSTANTS;
    let separation = (g * input.m_total / (omega * omega)).cbrt();
    let v_r = separation * omega / c;
    if v_r >= 1.0 {
        return Err(Error::OutOfRegime(format!(
            "orbital velocity v_R = {v_r:.4} >= 1; no circular orbit below light speed"
        )));
    }
    if v_r > 0.1 {
        log::warn!("v_R = {v_r:.4} > 0.1: nonrelativistic closed forms degrade in this regime");
    }
    let schwarzschild_total = 2.0 * g * input.m_total / (c * c);
    Ok(DerivedOrbit {
        m_total: input.m_total,
        mu: input.mu,
        separation,
        v_r,
        period: std::f64::consts::TAU / omega,
        omega,
        r1: input.mu * schwarzschild_total,
        r2: (1.0 - input.mu) * schwarzschild_total,
    })
}

/// Maximum relative residual of the Kepler identities
/// v_R³ c³ = G M Ω and R Ω = c v_R.
///
/// Any orbit produced by [`derive_orbit`] satisfies both to ~1e-15; a
/// corrupted field shows up directly in the returned residual.
pub fn check_kepler_identity(orbit: &DerivedOrbit) -> f64 {
    let PhysicalConstants { g, c, .. } = CONSTANTS;
    let kepler = (orbit.v_r.powi(3) * c.powi(3) / (g * orbit.m_total * orbit.omega) - 1.0).abs();
    let velocity = (orbit.separation * orbit.omega / (c * orbit.v_r) - 1.0).abs();
    kepler.max(velocity)
}
