//! Uniform 3D sample grids and their finite-difference operators.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::electrostatics::ChargeSign;
use crate::error::{Error, Result};
use crate::math_core::Vec3;

type V = Vec3<f64>;

/// Node `(i, j, k)` sits at `origin + h (i, j, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: V,
    pub h: f64,
    pub dims: [usize; 3],
}

impl GridSpec {
    pub fn new(origin: V, h: f64, dims: [usize; 3]) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::domain("h", h, "(0, inf)"));
        }
        if dims.iter().any(|&n| n < 3) {
            return Err(Error::Shape(format!(
                "grid needs >= 3 nodes per axis, got {dims:?}"
            )));
        }
        Ok(Self { origin, h, dims })
    }

    /// Cube `[lo, lo + (n-1)h]³` with `n` nodes per axis.
    pub fn cube(lo: V, length: f64, n: usize) -> Result<Self> {
        Self::new(lo, length / (n.max(2) - 1) as f64, [n, n, n])
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, [i, j, k]: [usize; 3]) -> usize {
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    pub fn coords(&self, n: usize) -> [usize; 3] {
        let [nx, ny, _] = self.dims;
        [n % nx, (n / nx) % ny, n / (nx * ny)]
    }

    pub fn position(&self, n: usize) -> V {
        let c = self.coords(n);
        self.origin + V::new(c[0] as f64, c[1] as f64, c[2] as f64).scale(self.h)
    }

    pub fn is_interior(&self, n: usize) -> bool {
        let c = self.coords(n);
        (0..3).all(|a| c[a] > 0 && c[a] + 1 < self.dims[a])
    }

    /// Neighbour index along `axis` at `offset ∈ {-1, 1, 2, -2}` (no bounds check
    /// beyond the grid box).
    fn shifted(&self, n: usize, axis: usize, offset: isize) -> usize {
        let mut c = self.coords(n);
        c[axis] = (c[axis] as isize + offset) as usize;
        self.index(c)
    }

    /// Three sample indices and weights (over `2h`) for the derivative along
    /// `axis`: centered inside, second-order one-sided at the faces.
    pub(crate) fn stencil(&self, n: usize, axis: usize) -> [(usize, f64); 3] {
        let c = self.coords(n)[axis];
        let last = self.dims[axis] - 1;
        if c == 0 {
            [
                (n, -3.0),
                (self.shifted(n, axis, 1), 4.0),
                (self.shifted(n, axis, 2), -1.0),
            ]
        } else if c == last {
            [
                (n, 3.0),
                (self.shifted(n, axis, -1), -4.0),
                (self.shifted(n, axis, -2), 1.0),
            ]
        } else {
            [
                (self.shifted(n, axis, 1), 1.0),
                (self.shifted(n, axis, -1), -1.0),
                (n, 0.0),
            ]
        }
    }

    /// Second-order gradient of a real field.
    pub fn gradient(&self, f: &[f64]) -> Vec<V> {
        let inv = 0.5 / self.h;
        (0..self.len())
            .into_par_iter()
            .map(|n| {
                let mut g = V::zero();
                for a in 0..3 {
                    g[a] = self
                        .stencil(n, a)
                        .iter()
                        .map(|&(m, w)| w * f[m])
                        .sum::<f64>()
                        * inv;
                }
                g
            })
            .collect()
    }

    /// Second-order divergence of a vector field.
    pub fn divergence(&self, f: &[V]) -> Vec<f64> {
        let inv = 0.5 / self.h;
        (0..self.len())
            .into_par_iter()
            .map(|n| {
                (0..3)
                    .map(|a| {
                        self.stencil(n, a)
                            .iter()
                            .map(|&(m, w)| w * f[m][a])
                            .sum::<f64>()
                    })
                    .sum::<f64>()
                    * inv
            })
            .collect()
    }

    /// Second-order gradient of a complex field.
    pub fn complex_gradient(&self, f: &[Complex64]) -> Vec<[Complex64; 3]> {
        let inv = 0.5 / self.h;
        (0..self.len())
            .into_par_iter()
            .map(|n| {
                let mut g = [Complex64::new(0.0, 0.0); 3];
                for (a, ga) in g.iter_mut().enumerate() {
                    *ga = self
                        .stencil(n, a)
                        .iter()
                        .map(|&(m, w)| f[m] * w)
                        .sum::<Complex64>()
                        * inv;
                }
                g
            })
            .collect()
    }

    /// Seven-point Laplacian; zero on the faces.
    pub fn complex_laplacian(&self, f: &[Complex64]) -> Vec<Complex64> {
        let inv = 1.0 / (self.h * self.h);
        (0..self.len())
            .into_par_iter()
            .map(|n| {
                if !self.is_interior(n) {
                    return Complex64::new(0.0, 0.0);
                }
                let mut s = f[n] * -6.0;
                for a in 0..3 {
                    s += f[self.shifted(n, a, 1)] + f[self.shifted(n, a, -1)];
                }
                s * inv
            })
            .collect()
    }

    /// Gradient of the phase of `psi` from wrapped phase increments between
    /// neighbours. Increments are reduced modulo `π`, so a sign change of a
    /// real amplitude carries no phase gradient; a gauge factor `e^{iχ}`
    /// shifts the result by exactly the same stencil applied to `χ`.
    pub fn phase_gradient(&self, psi: &[Complex64]) -> Vec<V> {
        let inv = 0.5 / self.h;
        let incr = |from: usize, to: usize| wrap_half_turn((psi[to] * psi[from].conj()).arg());
        (0..self.len())
            .into_par_iter()
            .map(|n| {
                let mut g = V::zero();
                for a in 0..3 {
                    let c = self.coords(n)[a];
                    let last = self.dims[a] - 1;
                    g[a] = if c == 0 {
                        let p1 = self.shifted(n, a, 1);
                        let p2 = self.shifted(n, a, 2);
                        3.0 * incr(n, p1) - incr(p1, p2)
                    } else if c == last {
                        let m1 = self.shifted(n, a, -1);
                        let m2 = self.shifted(n, a, -2);
                        3.0 * incr(m1, n) - incr(m2, m1)
                    } else {
                        incr(self.shifted(n, a, -1), n) + incr(n, self.shifted(n, a, 1))
                    } * inv;
                }
                g
            })
            .collect()
    }

    pub(crate) fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::Shape(format!("grids differ: {self:?} vs {other:?}")));
        }
        Ok(())
    }
}

fn wrap_half_turn(x: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    if x > FRAC_PI_2 {
        x - PI
    } else if x <= -FRAC_PI_2 {
        x + PI
    } else {
        x
    }
}

/// Value and derivatives of a wave function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub psi: Complex64,
    pub psi_t: Complex64,
    pub psi_tt: Complex64,
    pub grad: [Complex64; 3],
}

/// An analytically known wave function.
pub trait WaveFunction: Sync + Send {
    fn jet(&self, t: f64, r: V) -> Jet;
}

/// Samples of a Klein–Gordon wave function with its potentials at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveGrid {
    pub spec: GridSpec,
    pub time: f64,
    pub alpha: f64,
    /// Sign of the particle's charge (the electron is negative).
    pub charge: ChargeSign,
    pub psi: Vec<Complex64>,
    pub psi_t: Option<Vec<Complex64>>,
    pub psi_tt: Option<Vec<Complex64>>,
    /// Scalar potential `A`.
    pub a0: Vec<f64>,
    /// Vector potential.
    pub a_vec: Vec<V>,
}

impl WaveGrid {
    /// Sample `wave` and the potentials on `spec` at time `t`.
    pub fn sample<W, A, B>(
        spec: GridSpec,
        t: f64,
        alpha: f64,
        charge: ChargeSign,
        wave: &W,
        a0: A,
        a_vec: B,
    ) -> Self
    where
        W: WaveFunction + ?Sized,
        A: Fn(V) -> f64 + Sync,
        B: Fn(V) -> V + Sync,
    {
        let samples: Vec<(Jet, f64, V)> = (0..spec.len())
            .into_par_iter()
            .map(|n| {
                let r = spec.position(n);
                (wave.jet(t, r), a0(r), a_vec(r))
            })
            .collect();
        Self {
            spec,
            time: t,
            alpha,
            charge,
            psi: samples.iter().map(|s| s.0.psi).collect(),
            psi_t: Some(samples.iter().map(|s| s.0.psi_t).collect()),
            psi_tt: Some(samples.iter().map(|s| s.0.psi_tt).collect()),
            a0: samples.iter().map(|s| s.1).collect(),
            a_vec: samples.iter().map(|s| s.2).collect(),
        }
    }

    /// Coulomb potential `A = 1/r`, no vector potential, electron charge.
    pub fn coulomb<W: WaveFunction + ?Sized>(spec: GridSpec, t: f64, alpha: f64, wave: &W) -> Self {
        Self::sample(
            spec,
            t,
            alpha,
            ChargeSign::Negative,
            wave,
            |r| 1.0 / r.norm(),
            |_| V::zero(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.spec.len();
        let lens = [
            self.psi.len(),
            self.a0.len(),
            self.a_vec.len(),
            self.psi_t.as_ref().map_or(n, Vec::len),
            self.psi_tt.as_ref().map_or(n, Vec::len),
        ];
        if lens.iter().any(|&l| l != n) {
            return Err(Error::Shape(format!(
                "wave grid arrays must have {n} samples, got {lens:?}"
            )));
        }
        if self.psi.iter().any(|z| !z.is_finite()) {
            return Err(Error::Invalid("psi has non-finite samples".into()));
        }
        Ok(())
    }

    pub fn psi_t(&self) -> Result<&[Complex64]> {
        self.psi_t
            .as_deref()
            .ok_or(Error::IncompleteData("time derivative of psi"))
    }

    pub fn psi_tt(&self) -> Result<&[Complex64]> {
        self.psi_tt
            .as_deref()
            .ok_or(Error::IncompleteData("second time derivative of psi"))
    }

    pub fn sigma_alpha(&self) -> f64 {
        self.charge.value() * self.alpha
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> GridSpec {
        GridSpec::new(V::new(0.1, -0.2, 0.3), 0.05, [6, 5, 7]).unwrap()
    }

    #[test]
    fn gradient_exact_on_quadratics() {
        let s = spec();
        let f: Vec<f64> = (0..s.len())
            .map(|n| {
                let p = s.position(n);
                p[0] * p[0] - 2.0 * p[1] * p[2] + p[2]
            })
            .collect();
        let g = s.gradient(&f);
        for (n, gn) in g.iter().enumerate() {
            let p = s.position(n);
            let exact = V::new(2.0 * p[0], -2.0 * p[2], -2.0 * p[1] + 1.0);
            assert!((*gn - exact).max_abs() < 1e-12);
        }
    }

    #[test]
    fn phase_gradient_of_plane_wave() {
        let s = spec();
        let k = V::new(1.5, -0.7, 2.0);
        let psi: Vec<Complex64> = (0..s.len())
            .map(|n| Complex64::from_polar(2.0, k.dot(s.position(n)) + 0.4))
            .collect();
        for g in s.phase_gradient(&psi) {
            assert!((g - k).max_abs() < 1e-12);
        }
    }

    #[test]
    fn phase_gradient_ignores_sign_flips() {
        let s = spec();
        let psi: Vec<Complex64> = (0..s.len())
            .map(|n| Complex64::new(s.position(n)[0] - 0.2, 0.0) * Complex64::from_polar(1.0, 0.9))
            .collect();
        for g in s.phase_gradient(&psi) {
            assert!(g.max_abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_of_quadratic() {
        let s = spec();
        let f: Vec<Complex64> = (0..s.len())
            .map(|n| {
                let p = s.position(n);
                Complex64::new(p.norm_sq(), p[0] * p[1])
            })
            .collect();
        let lap = s.complex_laplacian(&f);
        for n in (0..s.len()).filter(|&n| s.is_interior(n)) {
            assert!((lap[n] - Complex64::new(6.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn shape_errors() {
        assert!(GridSpec::new(V::zero(), 0.1, [2, 4, 4]).is_err());
        assert!(GridSpec::new(V::zero(), -0.1, [4, 4, 4]).is_err());
    }
}
