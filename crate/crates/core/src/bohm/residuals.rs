//! Continuity and Madelung (Hamilton–Jacobi) residuals.
//!
//! Writing `ψ = R e^{iΦ}`, `P₀ = −∂ₜΦ − σαA` and `P⃗ = ∇Φ − σαA⃗`, the
//! Klein–Gordon operator `K[ψ] = D₀²ψ − D⃗²ψ + ψ` with `D₀ = ∂ₜ + iσαA`,
//! `D⃗ = ∇ − iσαA⃗` splits as
//!
//! `K[ψ] = e^{iΦ} (R · HJ − i R⁻¹ · C)`,
//!
//! `HJ = −P₀² + |P⃗|² + 1 + R⁻¹(∂ₜ² − Δ)R` and `C = ∂ₜρ + ∇·j`. All three are
//! evaluated here from the same discrete jets (`ψ`, `∂ₜψ`, `∂ₜ²ψ`, the
//! centered gradient and the seven-point Laplacian), so the split holds to
//! round-off while the residuals themselves carry the `O(h²)` discretization
//! error.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bohm::functionals::{current_kg, rho_kg};
use crate::bohm::grid::{GridSpec, WaveGrid};
use crate::error::{Error, Result};

type C = Complex64;

/// A scalar residual on the grid. Nodes closer than `margin` to a face hold
/// zero and are excluded from the norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualField {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    pub margin: usize,
    pub max_abs: f64,
    pub rms: f64,
}

impl ResidualField {
    fn new(spec: GridSpec, values: Vec<f64>, margin: usize) -> Self {
        let values: Vec<f64> = values
            .into_iter()
            .enumerate()
            .map(|(n, v)| if inside(&spec, n, margin) { v } else { 0.0 })
            .collect();
        let interior: Vec<f64> = values
            .iter()
            .enumerate()
            .filter(|(n, _)| inside(&spec, *n, margin))
            .map(|(_, v)| *v)
            .collect();
        let max_abs = interior.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let rms =
            (interior.iter().map(|v| v * v).sum::<f64>() / interior.len().max(1) as f64).sqrt();
        Self {
            spec,
            values,
            margin,
            max_abs,
            rms,
        }
    }
}

impl ResidualField {
    /// Max-norm over the nodes inside the box `[lo, hi]` (and the margin).
    pub fn max_abs_within(
        &self,
        lo: crate::math_core::Vec3<f64>,
        hi: crate::math_core::Vec3<f64>,
    ) -> f64 {
        (0..self.spec.len())
            .filter(|&n| inside(&self.spec, n, self.margin))
            .filter(|&n| {
                let p = self.spec.position(n);
                (0..3).all(|a| p[a] >= lo[a] && p[a] <= hi[a])
            })
            .fold(0.0, |m, n| m.max(self.values[n].abs()))
    }
}

fn inside(spec: &GridSpec, n: usize, margin: usize) -> bool {
    let c = spec.coords(n);
    (0..3).all(|a| c[a] >= margin && c[a] + margin < spec.dims[a])
}

/// `∂ₜρ + ∇·j` at the middle slice of a time sequence, with a three-point
/// (possibly non-uniform) time difference and centered space differences.
/// Norms skip the two outer node layers, whose divergence stencil reaches
/// one-sided face values of `j`.
pub fn continuity_residual(slices: &[WaveGrid]) -> Result<ResidualField> {
    if slices.len() < 3 {
        return Err(Error::Shape(format!(
            "continuity residual needs >= 3 time slices, got {}",
            slices.len()
        )));
    }
    let spec = slices[0].spec;
    for s in slices {
        spec.check_same(&s.spec)?;
    }
    let m = slices.len() / 2;
    let (a, b, c) = (&slices[m - 1], &slices[m], &slices[m + 1]);
    let (h1, h2) = (b.time - a.time, c.time - b.time);
    if !(h1 > 0.0 && h2 > 0.0) {
        return Err(Error::Invalid(
            "time slices must be strictly increasing".into(),
        ));
    }
    let (ra, rb, rc) = (rho_kg(a)?.values, rho_kg(b)?.values, rho_kg(c)?.values);
    let (wa, wb, wc) = (
        -h2 / (h1 * (h1 + h2)),
        (h2 - h1) / (h1 * h2),
        h1 / (h2 * (h1 + h2)),
    );
    let div = spec.divergence(&current_kg(b)?);
    let values = (0..spec.len())
        .map(|n| wa * ra[n] + wb * rb[n] + wc * rc[n] + div[n])
        .collect();
    Ok(ResidualField::new(spec, values, 2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MadelungResidual {
    pub hamilton_jacobi: ResidualField,
    pub continuity: ResidualField,
    /// Largest `|K − e^{iΦ}(R·HJ − iC/R)|` relative to `|ψ|` times the size
    /// of the individual terms; round-off when the split is consistent.
    pub identity_error: f64,
    pub kg_max_abs: f64,
}

struct PointResidual {
    hj: f64,
    cont: f64,
    kg: C,
    identity: f64,
}

/// Split the Klein–Gordon residual of one time slice into its Madelung parts.
pub fn madelung_roundtrip(wave: &WaveGrid) -> Result<MadelungResidual> {
    wave.validate()?;
    let spec = wave.spec;
    let psi_t = wave.psi_t()?;
    let psi_tt = wave.psi_tt()?;
    if let Some(n) = (0..spec.len()).find(|&n| spec.is_interior(n) && wave.psi[n].norm_sqr() == 0.0)
    {
        return Err(Error::WaveNode {
            index: spec.coords(n),
        });
    }
    let grad = spec.complex_gradient(&wave.psi);
    let lap = spec.complex_laplacian(&wave.psi);
    let div_a = spec.divergence(&wave.a_vec);
    let sa = wave.sigma_alpha();
    let i = C::new(0.0, 1.0);

    let points: Vec<PointResidual> = (0..spec.len())
        .into_par_iter()
        .map(|n| {
            if !spec.is_interior(n) {
                return PointResidual {
                    hj: 0.0,
                    cont: 0.0,
                    kg: C::new(0.0, 0.0),
                    identity: 0.0,
                };
            }
            let psi = wave.psi[n];
            let (a, av) = (wave.a0[n], wave.a_vec[n]);
            let g = grad[n];
            let r2 = psi.norm_sqr();
            let tq = psi_t[n] / psi;
            let ttq = psi_tt[n] / psi;
            let lq = lap[n] / psi;
            let grad_phi = [(g[0] / psi).im, (g[1] / psi).im, (g[2] / psi).im];
            let grad_phi_sq: f64 = grad_phi.iter().map(|x| x * x).sum();
            let phi_t = tq.im;

            let p0 = -phi_t - sa * a;
            let p_sq: f64 = (0..3).map(|k| (grad_phi[k] - sa * av[k]).powi(2)).sum();
            let box_r = (ttq.re + phi_t * phi_t) - (lq.re + grad_phi_sq);
            let hj = -p0 * p0 + p_sq + 1.0 + box_r;

            let psib = psi.conj();
            let a_dot_re: f64 = (0..3).map(|k| av[k] * (psib * g[k]).re).sum();
            let drho_dt = -(psib * psi_tt[n]).im - 2.0 * sa * a * (psib * psi_t[n]).re;
            let div_j = (psib * lap[n]).im - sa * (div_a[n] * r2 + 2.0 * a_dot_re);
            let cont = drho_dt + div_j;

            let a_dot_grad: C = (0..3).map(|k| g[k] * av[k]).sum();
            let av_sq = av.norm_sq();
            let d0sq = psi_tt[n] + i * (2.0 * sa * a) * psi_t[n] - psi * (sa * sa * a * a);
            let dvsq = lap[n]
                - i * (2.0 * sa) * a_dot_grad
                - i * (sa * div_a[n]) * psi
                - psi * (sa * sa * av_sq);
            let kg = d0sq - dvsq + psi;

            let recon = psi * C::new(hj, -cont / r2);
            let terms =
                1.0 + p0 * p0 + p_sq + ttq.norm() + lq.norm() + tq.norm() + (cont / r2).abs();
            let scale = (psi.norm() * terms).max(f64::MIN_POSITIVE);
            PointResidual {
                hj,
                cont,
                kg,
                identity: (kg - recon).norm() / scale,
            }
        })
        .collect();

    Ok(MadelungResidual {
        hamilton_jacobi: ResidualField::new(spec, points.iter().map(|p| p.hj).collect(), 1),
        continuity: ResidualField::new(spec, points.iter().map(|p| p.cont).collect(), 1),
        identity_error: points.iter().fold(0.0, |m, p| m.max(p.identity)),
        kg_max_abs: points.iter().fold(0.0, |m, p| m.max(p.kg.norm())),
    })
}
