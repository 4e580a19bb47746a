//! Klein–Gordon density, current and velocity, the Schrödinger guiding
//! field, and the gauge-invariance check.
//!
//! With `σ` the charge sign, `ρ = Im(ψ̄(−∂ₜ − iσαA)ψ)` and
//! `j = Im(ψ̄(∇ − iσαA⃗)ψ)`. On the grid `Im(ψ̄∇ψ)` is evaluated as
//! `|ψ|² ∇Φ` with the phase gradient from wrapped neighbour increments.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bohm::grid::{GridSpec, WaveGrid};
use crate::error::{Error, Result};
use crate::math_core::Vec3;

type V = Vec3<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    pub values: Vec<f64>,
    /// Grid points where `ρ ≤ 0`, where the probabilistic reading breaks down.
    pub nonpositive: Vec<[usize; 3]>,
}

pub fn rho_kg(wave: &WaveGrid) -> Result<Density> {
    wave.validate()?;
    let psi_t = wave.psi_t()?;
    let sa = wave.sigma_alpha();
    let values: Vec<f64> = wave
        .psi
        .par_iter()
        .zip(psi_t.par_iter())
        .zip(wave.a0.par_iter())
        .map(|((p, pt), a)| -(p.conj() * pt).im - sa * a * p.norm_sqr())
        .collect();
    let nonpositive = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| !(v > 0.0))
        .map(|(n, _)| wave.spec.coords(n))
        .collect();
    Ok(Density {
        values,
        nonpositive,
    })
}

/// `∇Φ − σαA⃗` at every node.
fn canonical_momentum(wave: &WaveGrid) -> Vec<V> {
    let sa = wave.sigma_alpha();
    wave.spec
        .phase_gradient(&wave.psi)
        .into_par_iter()
        .zip(wave.a_vec.par_iter())
        .map(|(g, a)| g - a.scale(sa))
        .collect()
}

pub fn current_kg(wave: &WaveGrid) -> Result<Vec<V>> {
    wave.validate()?;
    Ok(canonical_momentum(wave)
        .into_par_iter()
        .zip(wave.psi.par_iter())
        .map(|(p, psi)| p.scale(psi.norm_sqr()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VelocityReport {
    pub velocity: Vec<V>,
    /// Fraction of nodes with `|v| ≥ 1`; reported, never clamped.
    pub superluminal_fraction: f64,
    pub max_speed: f64,
}

impl VelocityReport {
    fn new(velocity: Vec<V>) -> Self {
        let speeds: Vec<f64> = velocity.iter().map(|v| v.norm()).collect();
        let fast = speeds.iter().filter(|&&s| s >= 1.0).count();
        Self {
            superluminal_fraction: fast as f64 / velocity.len().max(1) as f64,
            max_speed: speeds.into_iter().fold(0.0, f64::max),
            velocity,
        }
    }
}

fn singular_at(spec: &GridSpec, n: usize) -> Error {
    Error::SingularVelocity {
        index: spec.coords(n),
    }
}

/// `j / ρ`.
pub fn velocity_kg(wave: &WaveGrid) -> Result<VelocityReport> {
    let rho = rho_kg(wave)?;
    let j = current_kg(wave)?;
    let v = j
        .into_par_iter()
        .zip(rho.values.par_iter())
        .enumerate()
        .map(|(n, (j, &r))| {
            if r == 0.0 || !r.is_finite() {
                Err(singular_at(&wave.spec, n))
            } else {
                Ok(j.scale(1.0 / r))
            }
        })
        .collect::<Result<Vec<V>>>()?;
    Ok(VelocityReport::new(v))
}

/// The velocity with `ψ̄` replaced by `ψ⁻¹`:
/// `(∇Φ − σαA⃗) / (−Im(∂ₜψ/ψ) − σαA)`.
pub fn velocity_kg_inverse(wave: &WaveGrid) -> Result<VelocityReport> {
    wave.validate()?;
    let psi_t = wave.psi_t()?;
    let sa = wave.sigma_alpha();
    let p = canonical_momentum(wave);
    let v = (0..wave.spec.len())
        .into_par_iter()
        .map(|n| {
            let psi = wave.psi[n];
            if psi == Complex64::new(0.0, 0.0) {
                return Err(singular_at(&wave.spec, n));
            }
            let den = -(psi_t[n] / psi).im - sa * wave.a0[n];
            if den == 0.0 || !den.is_finite() {
                return Err(singular_at(&wave.spec, n));
            }
            Ok(p[n].scale(1.0 / den))
        })
        .collect::<Result<Vec<V>>>()?;
    Ok(VelocityReport::new(v))
}

/// `Im(∇Ψ/Ψ)` for a Schrödinger wave function sampled on `spec`.
pub fn velocity_schrodinger(spec: &GridSpec, psi: &[Complex64]) -> Result<Vec<V>> {
    if psi.len() != spec.len() {
        return Err(Error::Shape(format!(
            "expected {} samples, got {}",
            spec.len(),
            psi.len()
        )));
    }
    if let Some(n) = psi
        .iter()
        .position(|z| z.norm_sqr() == 0.0 || !z.is_finite())
    {
        return Err(singular_at(spec, n));
    }
    Ok(spec.phase_gradient(psi))
}

/// Apply the static gauge transformation `ψ → ψ e^{iσαΥ}`, `A⃗ → A⃗ + ∇Υ`.
/// `∇Υ` uses the grid's phase-gradient stencil, so the discrete velocity is
/// invariant up to round-off.
pub fn gauge_transform(wave: &WaveGrid, upsilon: &[f64]) -> Result<WaveGrid> {
    wave.validate()?;
    if upsilon.len() != wave.spec.len() {
        return Err(Error::Shape(format!(
            "gauge function needs {} samples, got {}",
            wave.spec.len(),
            upsilon.len()
        )));
    }
    let sa = wave.sigma_alpha();
    let phase: Vec<Complex64> = upsilon
        .iter()
        .map(|&u| Complex64::from_polar(1.0, sa * u))
        .collect();
    let rotate =
        |f: &[Complex64]| -> Vec<Complex64> { f.iter().zip(&phase).map(|(a, b)| a * b).collect() };
    let grad = wave.spec.gradient(upsilon);
    Ok(WaveGrid {
        psi: rotate(&wave.psi),
        psi_t: wave.psi_t.as_deref().map(rotate),
        psi_tt: wave.psi_tt.as_deref().map(rotate),
        a_vec: wave.a_vec.iter().zip(&grad).map(|(a, g)| *a + *g).collect(),
        ..wave.clone()
    })
}

/// Max-norm change of [`velocity_kg`] under [`gauge_transform`].
pub fn gauge_check(wave: &WaveGrid, upsilon: &[f64]) -> Result<f64> {
    let before = velocity_kg(wave)?;
    let after = velocity_kg(&gauge_transform(wave, upsilon)?)?;
    Ok(before
        .velocity
        .iter()
        .zip(&after.velocity)
        .map(|(a, b)| (*a - *b).max_abs())
        .fold(0.0, f64::max))
}
