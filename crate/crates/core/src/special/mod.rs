//! Numerically stable special functions and polarization geometry.

mod bessel;
mod polarization;

pub use bessel::bessel_j;
pub(crate) use bessel::jm;
pub use polarization::{
    helicity_vector, overlap_closed_form, polarization_overlap, Helicity, PolarizationVector,
};

use crate::error::{Error, Result};

/// Crossover below which the uniform-sphere form factor switches to its
/// power series.
const FORM_FACTOR_SERIES_CUTOFF: f64 = 0.5;

/// Form factor of a uniform sphere, f(x) = 3/x³ · [sin x − x cos x],
/// normalized to f(0) = 1.
///
/// Below the series cutoff the closed form loses digits to cancellation, so
/// the expansion 1 − x²/10 + x⁴/280 − … (general term 3(−x²/2)ᵏ/(k!(2k+3)!!))
/// is summed instead.
pub fn form_factor(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::invalid(format!(
            "form_factor: argument must be >= 0, got {x}"
        )));
    }
    Ok(form_factor_unchecked(x))
}

pub(crate) fn form_factor_unchecked(x: f64) -> f64 {
    if x < FORM_FACTOR_SERIES_CUTOFF {
        let q = -0.5 * x * x;
        let mut term = 1.0; // k = 0: 3/(0!·3!!) = 1
        let mut sum = term;
        for k in 1..30u32 {
            term *= q / (k as f64 * (2.0 * k as f64 + 3.0));
            sum += term;
            if term.abs() <= 1e-18 {
                break;
            }
        }
        sum
    } else {
        3.0 / (x * x * x) * (x.sin() - x * x.cos())
    }
}

/// Both forms of the m → m+1 harmonic intensity suppression at orbital
/// velocity `v`.
#[derive(Debug, Clone, Copy)]
pub struct SuppressionRatio {
    /// The estimate v²(1 + 1/m)^(2m+2).
    pub asymptotic: f64,
    /// The exact quotient (m+1)² J²_{m+1}((m+1)v) / (m² J²_m(m v)).
    ///
    /// Its small-v limit is (v²/4)(1 + 1/m)^(2m+2), i.e. a quarter of the
    /// asymptotic estimate above; tests pin that factor.
    pub exact: f64,
}

/// Suppression of harmonic m+1 relative to harmonic m.
pub fn harmonic_suppression_ratio(m: u32, v: f64) -> Result<SuppressionRatio> {
    if m < 1 {
        return Err(Error::invalid("harmonic_suppression_ratio: m must be >= 1"));
    }
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::invalid(format!(
            "harmonic_suppression_ratio: v must lie in (0, 1), got {v}"
        )));
    }
    let mf = m as f64;
    let asymptotic = v * v * (1.0 + 1.0 / mf).powi(2 * m as i32 + 2);
    let num = (mf + 1.0) * jm(m + 1, (mf + 1.0) * v);
    let den = mf * jm(m, mf * v);
    let exact = (num * num) / (den * den);
    Ok(SuppressionRatio { asymptotic, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn form_factor_at_zero_and_pi() {
        assert_eq!(form_factor(0.0).unwrap(), 1.0);
        // f(π) = 3/π²
        let pi = std::f64::consts::PI;
        assert_relative_eq!(form_factor(pi).unwrap(), 3.0 / (pi * pi), max_relative = 1e-14);
    }

    #[test]
    fn form_factor_leading_series() {
        // f(x) − (1 − x²/10) = O(x⁴)
        let x = 1e-3;
        let f = form_factor(x).unwrap();
        assert!((f - (1.0 - x * x / 10.0)).abs() < 1e-13);
    }

    #[test]
    fn form_factor_branches_agree() {
        for i in 0..50 {
            let x = 0.35 + 0.3 * i as f64 / 49.0;
            let q = -0.5 * x * x;
            let mut term = 1.0;
            let mut series = term;
            for k in 1..30u32 {
                term *= q / (k as f64 * (2.0 * k as f64 + 3.0));
                series += term;
            }
            let closed = 3.0 / (x * x * x) * (x.sin() - x * x.cos());
            assert_relative_eq!(series, closed, max_relative = 1e-12);
        }
    }

    #[test]
    fn form_factor_monotone_on_zero_pi() {
        let n = 2000;
        let mut prev = f64::INFINITY;
        for i in 0..=n {
            let x = std::f64::consts::PI * i as f64 / n as f64;
            let f = form_factor(x).unwrap();
            assert!(f < prev || (i == 0 && f <= 1.0), "not decreasing at x={x}");
            prev = f;
        }
    }

    #[test]
    fn form_factor_rejects_negative() {
        assert!(form_factor(-0.1).is_err());
        assert!(form_factor(f64::NAN).is_err());
    }

    #[test]
    fn suppression_asymptotic_values() {
        // m = 1: 16 v²
        let r = harmonic_suppression_ratio(1, 0.0026).unwrap();
        assert_relative_eq!(r.asymptotic, 16.0 * 0.0026f64.powi(2), max_relative = 1e-14);
        assert_abs_diff_eq!(r.asymptotic, 1.08e-4, epsilon = 2e-6);
    }

    #[test]
    fn suppression_large_m_limit() {
        // (1 + 1/m)^(2m+2) -> e²; within 1.5% at m = 100
        let v = 1e-3;
        let r = harmonic_suppression_ratio(100, v).unwrap();
        let e2 = std::f64::consts::E.powi(2);
        assert!((r.asymptotic / (e2 * v * v) - 1.0).abs() < 0.015);
    }

    #[test]
    fn suppression_exact_is_quarter_of_asymptotic() {
        // Small-argument Bessel algebra gives exactly
        //   exact -> (v²/4)(1+1/m)^(2m+2) = asymptotic/4   as v -> 0.
        for m in 1..=4u32 {
            let r = harmonic_suppression_ratio(m, 1e-3).unwrap();
            assert_relative_eq!(r.exact / r.asymptotic, 0.25, max_relative = 1e-2);
        }
        // and the exact ratio itself scales as v²
        let a = harmonic_suppression_ratio(1, 1e-3).unwrap().exact;
        let b = harmonic_suppression_ratio(1, 2e-3).unwrap().exact;
        assert_relative_eq!(b / a, 4.0, max_relative = 1e-4);
    }

    #[test]
    fn suppression_domain_checks() {
        assert!(harmonic_suppression_ratio(0, 0.1).is_err());
        assert!(harmonic_suppression_ratio(1, 0.0).is_err());
        assert!(harmonic_suppression_ratio(1, 1.0).is_err());
    }
}
