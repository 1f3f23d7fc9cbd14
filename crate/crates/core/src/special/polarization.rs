//! Circular polarization basis vectors and helicity overlaps.
//!
//! The basis convention: e_L(k̂) is the +z frame vector (x̂ + iŷ)/√2
//! transported to k̂ by the minimal rotation taking ẑ to k̂. This is smooth
//! everywhere except the −z axis, where the limit along the x–z great
//! circle is used: e_L(−ẑ) = (−x̂ + iŷ)/√2. Only |e·e|² ever enters a rate,
//! so the global phase choice is test-visible but physics-invisible.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-12;

/// Photon helicity. `L` is the left-handed, positive-helicity state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Helicity {
    L,
    R,
}

impl Helicity {
    pub const BOTH: [Helicity; 2] = [Helicity::L, Helicity::R];

    pub fn symbol(self) -> char {
        match self {
            Helicity::L => 'L',
            Helicity::R => 'R',
        }
    }

    pub fn opposite(self) -> Helicity {
        match self {
            Helicity::L => Helicity::R,
            Helicity::R => Helicity::L,
        }
    }
}

impl std::fmt::Display for Helicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl std::str::FromStr for Helicity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" => Ok(Helicity::L),
            "R" => Ok(Helicity::R),
            other => Err(Error::invalid(format!("helicity must be L or R, got {other:?}"))),
        }
    }
}

/// Unit-norm, null, transverse complex polarization vector.
#[derive(Debug, Clone, Copy)]
pub struct PolarizationVector {
    pub e: Vector3<Complex64>,
}

impl PolarizationVector {
    /// Unconjugated dot product e₁·e₂ (the combination appearing in the
    /// pair-creation amplitude).
    pub fn dot(&self, other: &PolarizationVector) -> Complex64 {
        self.e.x * other.e.x + self.e.y * other.e.y + self.e.z * other.e.z
    }

    /// Residuals of the defining invariants (unit norm, null, transverse),
    /// for tests.
    pub fn invariant_residuals(&self, khat: &Vector3<f64>) -> (f64, f64, f64) {
        let norm = (self.e.x.norm_sqr() + self.e.y.norm_sqr() + self.e.z.norm_sqr() - 1.0).abs();
        let null = self.dot(self).norm();
        let trans = (self.e.x * Complex64::from(khat.x)
            + self.e.y * Complex64::from(khat.y)
            + self.e.z * Complex64::from(khat.z))
        .norm();
        (norm, null, trans)
    }
}

fn check_unit(khat: &Vector3<f64>) -> Result<()> {
    if (khat.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::invalid(format!(
            "direction must be unit length within {UNIT_TOL:e}, |k| = {}",
            khat.norm()
        )));
    }
    Ok(())
}

/// Helicity basis vector for propagation direction k̂.
///
/// Satisfies i·(k̂ × e_L) = e_L, e_R = conj(e_L), and the transversality /
/// null-norm invariants of [`PolarizationVector`].
pub fn helicity_vector(khat: &Vector3<f64>, lam: Helicity) -> Result<PolarizationVector> {
    check_unit(khat)?;
    let s2 = khat.x * khat.x + khat.y * khat.y;
    let (ex, ey): (Vector3<f64>, Vector3<f64>) = if s2.sqrt() < 1e-14 {
        if khat.z > 0.0 {
            (Vector3::x(), Vector3::y())
        } else {
            // documented branch at the -z pole
            (-Vector3::x(), Vector3::y())
        }
    } else {
        // Rodrigues rotation of x̂, ŷ about u = (ẑ × k̂)/|ẑ × k̂|
        let s = s2.sqrt();
        let u = Vector3::new(-khat.y / s, khat.x / s, 0.0);
        let cos_t = khat.z;
        let rot = |v: Vector3<f64>| -> Vector3<f64> {
            v * cos_t + u.cross(&v) * s + u * (u.dot(&v)) * (1.0 - cos_t)
        };
        (rot(Vector3::x()), rot(Vector3::y()))
    };
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let sign = match lam {
        Helicity::L => 1.0,
        Helicity::R => -1.0,
    };
    let e = Vector3::new(
        Complex64::new(ex.x * inv_sqrt2, sign * ey.x * inv_sqrt2),
        Complex64::new(ex.y * inv_sqrt2, sign * ey.y * inv_sqrt2),
        Complex64::new(ex.z * inv_sqrt2, sign * ey.z * inv_sqrt2),
    );
    Ok(PolarizationVector { e })
}

/// |e_{λ1}(k̂₁)·e_{λ2}(k̂₂)|², computed from the explicit vectors.
///
/// Equals (1−cosθ)²/4 for equal helicities and (1+cosθ)²/4 for opposite
/// ones, with θ the angle between the two directions.
pub fn polarization_overlap(
    khat1: &Vector3<f64>,
    lam1: Helicity,
    khat2: &Vector3<f64>,
    lam2: Helicity,
) -> Result<f64> {
    let e1 = helicity_vector(khat1, lam1)?;
    let e2 = helicity_vector(khat2, lam2)?;
    Ok(e1.dot(&e2).norm_sqr())
}

/// Closed form of the overlap: (1 ∓ cosθ)²/4 from the half-angle, which is
/// stable at both θ → 0 and θ → π. Used inside rate kernels; the identity
/// with [`polarization_overlap`] is enforced by tests.
pub fn overlap_closed_form(theta: f64, lam1: Helicity, lam2: Helicity) -> f64 {
    let h = 0.5 * theta;
    if lam1 == lam2 {
        h.sin().powi(4) // (1-cosθ)²/4
    } else {
        h.cos().powi(4) // (1+cosθ)²/4
    }
}
