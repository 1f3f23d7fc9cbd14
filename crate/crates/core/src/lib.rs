//! Photon-pair emission by orbiting bodies.
//!
//! Orbiting dielectric (or magnetic) spheres, and binary stars through
//! their time-varying metric, squeeze the electromagnetic vacuum and emit
//! photon pairs. This crate computes the emission rates, spectra, angular
//! distributions and radiated powers of that process three ways:
//!
//! * closed-form estimates built from the harmonic Bessel decomposition of
//!   the source,
//! * a full numerical phase-space pipeline (deterministic Gauss–Legendre
//!   quadrature with a Monte Carlo cross-check),
//! * rejection-sampled event generation for distribution-level validation.
//!
//! The crate also evaluates the classical graviton power of the same binary
//! in two conventions as the reference scale the pair emission is compared
//! against.
//!
//! Everything is deterministic: fixed physical constants, seeded
//! counter-based random streams, and reduction orders that do not depend on
//! worker count.

// `!(x > 0.0)` guards are deliberate: they reject NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod phase_space;
pub mod quadrature;
pub mod rates;
pub mod rng;
pub mod sampler;
pub mod sources;
pub mod special;
pub mod units;

pub use error::{Error, Result};
pub use phase_space::{
    angular_distribution, differential_rate, differential_rate_summed, reduce_pair, spectrum,
    PairGeometry, RateDensity,
};
pub use quadrature::{
    dimensionless_integrals, integrate_reduced, mc_estimate, IntegralEstimate, Method,
    QuadratureOptions, WeightName, WeightSpec,
};
pub use rates::{
    crosscheck_report, graviton_power, power_binary_dielectric_closed,
    power_binary_metric_closed, power_ratio, power_sphere_closed, total_rate_numeric,
    waiting_time, PowerReport, ReportInput, TotalRate,
};
pub use sampler::{build_envelope, sample_pairs, Envelope, PairEvent, SampleRun};
pub use sources::{
    alpha_m_binary_dielectric, alpha_m_binary_metric, alpha_m_sphere, alpha_m_time_oracle,
    grav_m1_m2_ratio, harmonic_cutoff, weak_field_alpha, AlphaVariant, BinaryConfig,
    HarmonicAmplitude, Source, SourceChannel, SourceKind, SphereConfig,
};
pub use special::{
    bessel_j, form_factor, harmonic_suppression_ratio, helicity_vector, polarization_overlap,
    Helicity, PolarizationVector,
};
pub use units::{
    check_kepler_identity, derive_orbit, DerivedOrbit, Frequency, OrbitInput, PhysicalConstants,
    CONSTANTS, SECONDS_PER_YEAR,
};
