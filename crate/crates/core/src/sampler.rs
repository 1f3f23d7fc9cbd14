//! Rejection-sampled photon-pair event generation.
//!
//! Plain rejection against a rigorous grid-scan envelope: the densities are
//! cheap and four-dimensional, so correctness wins over cleverness. Every
//! proposal draws from its own (seed, index) stream and the accepted stream
//! is ordered by proposal index, making event files reproducible
//! independently of worker count.

use nalgebra::Vector3;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase_space::geometry_from_angles;
use crate::rng::stream_rng;
use crate::sources::Source;
use crate::special::{overlap_closed_form, Helicity};

/// One unweighted pair event at harmonic m, wave vectors in units of Ω/c
/// (so |l₁| + |l₂| = m).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairEvent {
    pub l1_vec: Vector3<f64>,
    pub l2_vec: Vector3<f64>,
    pub helicities: (Helicity, Helicity),
    pub m: u32,
    pub weight: f64,
}

/// Upper bound on the joint proposal density.
#[derive(Debug, Clone, Copy)]
pub struct Envelope {
    pub bound: f64,
    pub m: u32,
    /// Grid resolution of the scan that produced the bound.
    pub scan_grid: usize,
}

/// Safety margin applied to the scanned maximum.
const ENVELOPE_SAFETY: f64 = 1.5;

/// Joint density over the proposal box (l, cosθ₁, cosθ₂, Δφ): phase-space
/// measure times the channel-summed rate density.
fn joint_density(source: &Source, m: u32, l: f64, c1: f64, c2: f64, dphi: f64) -> Result<f64> {
    let geom = geometry_from_angles(l, c1, c2, dphi);
    let rho = crate::phase_space::differential_rate_summed(source, &geom, m)?;
    Ok((l * (1.0 - l)).powi(2) * rho)
}

/// Scan the proposal box for the density maximum and pad it by the safety
/// factor. The returned bound must dominate every later sample; a violation
/// during sampling is a hard error.
pub fn build_envelope(source: &Source, m: u32, scan_grid: usize) -> Result<Envelope> {
    let n = scan_grid.max(8);
    let max: Result<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let l = (i as f64 + 0.5) / n as f64;
            let mut local = 0.0f64;
            for j in 0..n {
                let c1 = -1.0 + 2.0 * (j as f64 + 0.5) / n as f64;
                for k in 0..n {
                    let c2 = -1.0 + 2.0 * (k as f64 + 0.5) / n as f64;
                    for q in 0..n {
                        let dphi = std::f64::consts::TAU * (q as f64 + 0.5) / n as f64;
                        let g = joint_density(source, m, l, c1, c2, dphi)?;
                        if !g.is_finite() {
                            return Err(Error::NumericalFailure(format!(
                                "non-finite density during envelope scan at l = {l}, \
                                 cos1 = {c1}, cos2 = {c2}, dphi = {dphi}"
                            )));
                        }
                        local = local.max(g);
                    }
                }
            }
            Ok(local)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)));
    Ok(Envelope { bound: ENVELOPE_SAFETY * max?, m, scan_grid: n })
}

/// Result of a sampling run.
#[derive(Debug, Clone)]
pub struct SampleRun {
    /// Exactly the requested number of events (fewer only for a vanishing
    /// envelope), ordered by proposal index.
    pub events: Vec<PairEvent>,
    pub proposed: u64,
    pub accepted: u64,
    /// accepted/proposed over the completed proposal rounds.
    pub acceptance_rate: f64,
    /// Unweighted-event rate estimator: acceptance × envelope volume, s⁻¹.
    pub rate_estimate: f64,
    /// Binomial standard error of the estimator.
    pub rate_std_error: f64,
}

const ROUND: u64 = 65_536;
const CHUNK: u64 = 4096;

/// Generate `n_events` unweighted pair events at harmonic m.
pub fn sample_pairs(
    source: &Source,
    m: u32,
    n_events: usize,
    seed: u64,
    envelope: &Envelope,
) -> Result<SampleRun> {
    if envelope.m != m {
        return Err(Error::invalid(format!(
            "envelope was built for m = {}, sampling m = {m}",
            envelope.m
        )));
    }
    if n_events == 0 {
        return Err(Error::invalid("sample_pairs: n_events must be >= 1"));
    }
    if envelope.bound == 0.0 {
        // vacuum-like source: the stream degenerates to nothing
        return Ok(SampleRun {
            events: Vec::new(),
            proposed: 0,
            accepted: 0,
            acceptance_rate: 0.0,
            rate_estimate: 0.0,
            rate_std_error: 0.0,
        });
    }

    let bound = envelope.bound;
    let mut events: Vec<PairEvent> = Vec::with_capacity(n_events + 1024);
    let mut proposed = 0u64;
    let mut accepted = 0u64;
    // hard cap so a mis-built envelope cannot spin forever
    let max_rounds = 1 + (5_000u64 * n_events as u64) / ROUND;

    for round in 0..max_rounds.max(64) {
        let lo = round * ROUND;
        let chunks: Result<Vec<Vec<PairEvent>>> = (0..ROUND / CHUNK)
            .into_par_iter()
            .map(|c| {
                let mut chunk_events = Vec::new();
                for i in (lo + c * CHUNK)..(lo + (c + 1) * CHUNK) {
                    if let Some(event) = propose(source, m, seed, i, bound)? {
                        chunk_events.push(event);
                    }
                }
                Ok(chunk_events)
            })
            .collect();
        for chunk in chunks? {
            accepted += chunk.len() as u64;
            events.extend(chunk);
        }
        proposed += ROUND;
        if events.len() >= n_events {
            break;
        }
    }
    if events.len() < n_events {
        return Err(Error::NumericalFailure(format!(
            "sampler accepted only {} of {} requested events after {} proposals",
            events.len(),
            n_events,
            proposed
        )));
    }
    events.truncate(n_events);

    // total rate = 2π ∫_box g = (16π² bound) × acceptance fraction
    let volume = 16.0 * std::f64::consts::PI.powi(2) * bound;
    let p = accepted as f64 / proposed as f64;
    Ok(SampleRun {
        events,
        proposed,
        accepted,
        acceptance_rate: p,
        rate_estimate: volume * p,
        rate_std_error: volume * (p * (1.0 - p) / proposed as f64).sqrt(),
    })
}

/// Evaluate proposal `index`; `Some(event)` on acceptance.
fn propose(source: &Source, m: u32, seed: u64, index: u64, bound: f64) -> Result<Option<PairEvent>> {
    let mut rng = stream_rng(seed, index);
    let l: f64 = rng.gen();
    let c1 = rng.gen_range(-1.0..1.0);
    let c2 = rng.gen_range(-1.0..1.0);
    let dphi = rng.gen_range(0.0..std::f64::consts::TAU);
    let accept_u: f64 = rng.gen();
    if l <= 0.0 || l >= 1.0 {
        return Ok(None);
    }
    let g = joint_density(source, m, l, c1, c2, dphi)?;
    if g > bound {
        return Err(Error::NumericalFailure(format!(
            "envelope violation: density {g:e} exceeds bound {bound:e} at proposal {index} \
             (l = {l}, cos1 = {c1}, cos2 = {c2}, dphi = {dphi})"
        )));
    }
    if accept_u * bound >= g {
        return Ok(None);
    }

    // accepted: draw the overall azimuth and the helicity channel
    let geom = geometry_from_angles(l, c1, c2, dphi);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let channel_u: f64 = rng.gen();
    let channel = pick_channel(source, geom.theta, channel_u);
    let rot = nalgebra::Rotation3::from_axis_angle(&Vector3::z_axis(), phi);
    let scale = m as f64;
    Ok(Some(PairEvent {
        l1_vec: scale * l * (rot * geom.n1),
        l2_vec: scale * (1.0 - l) * (rot * geom.n2),
        helicities: channel,
        m,
        weight: 1.0,
    }))
}

fn pick_channel(source: &Source, theta: f64, u: f64) -> (Helicity, Helicity) {
    let channel = source.channel();
    let weights: Vec<f64> = channel
        .allowed_pairs
        .iter()
        .map(|&(a, b)| overlap_closed_form(theta, a, b))
        .collect();
    let total: f64 = weights.iter().sum();
    let mut target = u * total;
    for (pair, w) in channel.allowed_pairs.iter().zip(&weights) {
        if target < *w {
            return *pair;
        }
        target -= w;
    }
    *channel.allowed_pairs.last().expect("allowed channel set is never empty")
}
