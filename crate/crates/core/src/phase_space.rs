//! Two-photon kinematics on the energy-conservation surface and the
//! differential emission densities built on it.
//!
//! A pair at harmonic m satisfies ω₁ + ω₂ = mΩ. With the dimensionless
//! energy fraction l = ω₁/(mΩ) and unit directions n₁, n₂ the joint wave
//! vector is K = (mΩ/c)(l n₁ + (1−l) n₂); its dimensionless magnitude L and
//! in-plane part L⊥ drive every amplitude. The energy δ-function is consumed
//! analytically by this parameterization — nothing is smeared numerically.
//!
//! The orbital plane is the x–y plane by convention; χ is the elevation of
//! the pair's total wave vector out of that plane.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::sources::Source;
use crate::special::{overlap_closed_form, Helicity};
use crate::units::CONSTANTS;

const UNIT_TOL: f64 = 1e-12;

/// Below this |l₁ + l₂|-scale the pair is treated as exactly back-to-back;
/// every rate density has a vanishing (removable) limit there.
pub const L_COLLINEAR_EPS: f64 = 1e-12;

/// Reduced kinematics of a photon pair.
#[derive(Debug, Clone, Copy)]
pub struct PairGeometry {
    /// Energy fraction of photon 1, in (0, 1).
    pub l: f64,
    /// Unit direction of photon 1.
    pub n1: Vector3<f64>,
    /// Unit direction of photon 2.
    pub n2: Vector3<f64>,
    /// Opening angle between n₁ and n₂, rad.
    pub theta: f64,
    /// |l n₁ + (1−l) n₂|.
    pub l_total: f64,
    /// In-plane (x–y) component of the same vector.
    pub l_perp: f64,
    /// Elevation of the total wave vector out of the orbital plane,
    /// in [−π/2, π/2]. `None` for a back-to-back pair (L = 0), where the
    /// direction is undefined.
    pub chi: Option<f64>,
}

/// Differential pair rate per unit dimensionless phase-space volume.
#[derive(Debug, Clone, Copy)]
pub struct RateDensity {
    /// s⁻¹ per unit d³l₁ d³l₂ measure on the l₁ + l₂ = 1 surface.
    pub value: f64,
    pub m: u32,
    pub channel: (Helicity, Helicity),
}

/// Build the reduced geometry from the energy fraction and two unit
/// directions.
pub fn reduce_pair(l: f64, n1: &Vector3<f64>, n2: &Vector3<f64>) -> Result<PairGeometry> {
    if !(l > 0.0 && l < 1.0) {
        return Err(Error::invalid(format!("reduce_pair: l must lie in (0, 1), got {l}")));
    }
    for (name, n) in [("n1", n1), ("n2", n2)] {
        if (n.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::invalid(format!(
                "reduce_pair: {name} must be a unit vector, |{name}| = {}",
                n.norm()
            )));
        }
    }
    Ok(geometry(l, *n1, *n2))
}

/// Geometry without unit-norm validation, for kernel-internal use where the
/// directions are constructed from angles.
pub(crate) fn geometry(l: f64, n1: Vector3<f64>, n2: Vector3<f64>) -> PairGeometry {
    // atan2 form is accurate at both θ → 0 and θ → π
    let cross = n1.cross(&n2).norm();
    let theta = cross.atan2(n1.dot(&n2));
    let total = l * n1 + (1.0 - l) * n2;
    let l_total = total.norm();
    let l_perp = (total.x * total.x + total.y * total.y).sqrt();
    let chi = if l_total > L_COLLINEAR_EPS {
        Some((total.z / l_total).asin())
    } else {
        None
    };
    PairGeometry { l, n1, n2, theta, l_total, l_perp, chi }
}

/// Geometry from the quadrature coordinates (l, cosθ₁, cosθ₂, Δφ), with
/// photon 1 at azimuth zero. One overall azimuth is always integrated
/// analytically (2π), which is exact by rotational symmetry about the
/// orbital axis.
pub(crate) fn geometry_from_angles(l: f64, c1: f64, c2: f64, dphi: f64) -> PairGeometry {
    let s1 = (1.0 - c1 * c1).max(0.0).sqrt();
    let s2 = (1.0 - c2 * c2).max(0.0).sqrt();
    let n1 = Vector3::new(s1, 0.0, c1);
    let n2 = Vector3::new(s2 * dphi.cos(), s2 * dphi.sin(), c2);
    geometry(l, n1, n2)
}

/// Geometry from the pair-frame coordinates (l, L, χ, ψ): total wave vector
/// of length L at elevation χ (azimuth fixed at zero), with ψ the rotation
/// of the photons about it. Used for angular marginals.
pub(crate) fn geometry_from_pair_frame(l: f64, l_total: f64, chi: f64, psi: f64) -> PairGeometry {
    let l1 = l;
    let l2 = 1.0 - l;
    let lhat = Vector3::new(chi.cos(), 0.0, chi.sin());
    let e1 = Vector3::new(-chi.sin(), 0.0, chi.cos());
    let e2 = Vector3::new(0.0, 1.0, 0.0);
    let cos_b2 = ((l_total * l_total + l2 * l2 - l1 * l1) / (2.0 * l2 * l_total)).clamp(-1.0, 1.0);
    let sin_b2 = (1.0 - cos_b2 * cos_b2).max(0.0).sqrt();
    let n2 = (cos_b2 * lhat + sin_b2 * (psi.cos() * e1 + psi.sin() * e2)).normalize();
    let n1 = ((l_total * lhat - l2 * n2) / l1).normalize();
    geometry(l, n1, n2)
}

/// Differential pair-emission rate for one helicity channel at harmonic m.
///
/// Disallowed channels (LL/RR for the metric source) return an exact zero
/// value, not an error.
pub fn differential_rate(
    source: &Source,
    geom: &PairGeometry,
    channel: (Helicity, Helicity),
    m: u32,
) -> Result<RateDensity> {
    let value = if source.channel().allows(channel) {
        rate_common(source, geom, m, overlap_closed_form(geom.theta, channel.0, channel.1))?
    } else {
        0.0
    };
    Ok(RateDensity { value, m, channel })
}

/// Rate density summed over the source's allowed helicity channels.
///
/// For dielectric sources the four-channel overlap sum collapses to
/// 1 + cos²θ; for the metric source the two opposite-helicity channels give
/// (1 + cosθ)²/2.
pub fn differential_rate_summed(source: &Source, geom: &PairGeometry, m: u32) -> Result<f64> {
    let overlap_sum: f64 = source
        .channel()
        .allowed_pairs
        .iter()
        .map(|&(a, b)| overlap_closed_form(geom.theta, a, b))
        .sum();
    rate_common(source, geom, m, overlap_sum)
}

fn rate_common(source: &Source, geom: &PairGeometry, m: u32, overlap: f64) -> Result<f64> {
    if geom.l_total < L_COLLINEAR_EPS {
        // Back-to-back pairs: for the metric source the (1+cosθ)² factor is
        // bounded by (L²/(2l₁l₂))², for dielectric ones J_m(K⊥R) → 0; the
        // limit is zero either way.
        return Ok(0.0);
    }
    let omega_m = m as f64 * source.omega();
    let k = omega_m / CONSTANTS.c * geom.l_total;
    let kperp = (omega_m / CONSTANTS.c * geom.l_perp).min(k);
    let amp = source.amplitude(m, k, kperp)?;
    let jacobian = omega_m.powi(7) / CONSTANTS.c.powi(6);
    let value = source.channel().rate_normalization
        * overlap
        * geom.l
        * (1.0 - geom.l)
        * amp.modulus_squared()
        * jacobian;
    if !value.is_finite() {
        return Err(Error::NumericalFailure(format!(
            "non-finite rate density at l = {}, theta = {}, L = {}, m = {m}",
            geom.l, geom.theta, geom.l_total
        )));
    }
    Ok(value)
}

/// Angular distribution of the emitted pairs: intensity per unit solid
/// angle of the pair's total wave vector, versus the elevation χ, normalized
/// to a peak value of one.
pub fn angular_distribution(
    source: &Source,
    m: u32,
    chi_grid: &[f64],
    order: usize,
) -> Result<Vec<(f64, f64)>> {
    if chi_grid.is_empty() {
        return Err(Error::invalid("angular_distribution: empty chi grid"));
    }
    for &chi in chi_grid {
        if !(-std::f64::consts::FRAC_PI_2..=std::f64::consts::FRAC_PI_2).contains(&chi) {
            return Err(Error::invalid(format!(
                "angular_distribution: chi = {chi} outside [-pi/2, pi/2]"
            )));
        }
    }
    let (nodes_l, weights_l) = crate::quadrature::gauss_legendre_rule(order, 0.0, 1.0);
    let (nodes_psi, weights_psi) =
        crate::quadrature::gauss_legendre_rule(order, 0.0, std::f64::consts::TAU);

    let mut table = Vec::with_capacity(chi_grid.len());
    for &chi in chi_grid {
        // at the poles K⊥ = L cosχ vanishes and with it J_m(K⊥R) for every
        // m >= 1: the intensity is identically zero (cos(π/2) in f64 is
        // 6e-17, so the analytic statement is applied directly)
        if chi.cos().abs() < 1e-15 && m >= 1 {
            table.push((chi, 0.0));
            continue;
        }
        let mut intensity = 0.0;
        for (&l, &wl) in nodes_l.iter().zip(&weights_l) {
            let l_min = (2.0 * l - 1.0).abs();
            let (nodes_lt, weights_lt) = crate::quadrature::gauss_legendre_rule(order, l_min, 1.0);
            for (&lt, &wlt) in nodes_lt.iter().zip(&weights_lt) {
                for (&psi, &wpsi) in nodes_psi.iter().zip(&weights_psi) {
                    let geom = geometry_from_pair_frame(l, lt, chi, psi);
                    // measure on this chart: l₁ l₂ L dl dL dΩ_L dψ
                    let rho = differential_rate_summed(source, &geom, m)?;
                    intensity += wl * wlt * wpsi * l * (1.0 - l) * lt * rho;
                }
            }
        }
        table.push((chi, intensity));
    }
    let peak = table.iter().fold(0.0f64, |acc, &(_, v)| acc.max(v));
    if peak > 0.0 {
        for row in &mut table {
            row.1 /= peak;
        }
    }
    Ok(table)
}

/// Pair spectrum at harmonic m: dRate/dω₁ against ω₁/Ω ∈ (0, m).
pub fn spectrum(
    source: &Source,
    m: u32,
    omega_grid: &[f64],
    order: usize,
) -> Result<Vec<(f64, f64)>> {
    for &x in omega_grid {
        if !(x > 0.0 && x < m as f64) {
            return Err(Error::invalid(format!(
                "spectrum: grid point {x} outside (0, {m}) in units of Omega"
            )));
        }
    }
    let (nodes_c, weights_c) = crate::quadrature::gauss_legendre_rule(order, -1.0, 1.0);
    let (nodes_phi, weights_phi) =
        crate::quadrature::gauss_legendre_rule(order, 0.0, std::f64::consts::TAU);
    let omega_m = m as f64 * source.omega();

    let mut table = Vec::with_capacity(omega_grid.len());
    for &x in omega_grid {
        let l = x / m as f64;
        let mut core = 0.0;
        for (&c1, &w1) in nodes_c.iter().zip(&weights_c) {
            for (&c2, &w2) in nodes_c.iter().zip(&weights_c) {
                for (&dphi, &wp) in nodes_phi.iter().zip(&weights_phi) {
                    let geom = geometry_from_angles(l, c1, c2, dphi);
                    core += w1 * w2 * wp * differential_rate_summed(source, &geom, m)?;
                }
            }
        }
        let measure = (l * (1.0 - l)).powi(2);
        let d_rate_dl = std::f64::consts::TAU * measure * core;
        table.push((x, d_rate_dl / omega_m));
    }
    Ok(table)
}
