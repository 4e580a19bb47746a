//! Analytic hydrogen states used as oracles: Schrödinger–Coulomb orbitals
//! and exact nodeless Klein–Gordon–Coulomb states, with superpositions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bohm::grid::{Jet, WaveFunction};
use crate::error::{Error, Result};
use crate::math_core::Vec3;

type V = Vec3<f64>;
type C = Complex64;

const I: C = C::new(0.0, 1.0);

/// Angular factor times `r^ℓ`: a harmonic polynomial with its gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Harmonic {
    /// `1`
    S,
    /// `z`
    P0,
    /// `x + iy`
    PPlus,
    /// `x − iy`
    PMinus,
}

impl Harmonic {
    pub fn ell(self) -> usize {
        match self {
            Harmonic::S => 0,
            _ => 1,
        }
    }

    fn value_grad(self, r: V) -> (C, [C; 3]) {
        let zero = C::new(0.0, 0.0);
        let one = C::new(1.0, 0.0);
        match self {
            Harmonic::S => (one, [zero; 3]),
            Harmonic::P0 => (C::new(r[2], 0.0), [zero, zero, one]),
            Harmonic::PPlus => (C::new(r[0], r[1]), [one, I, zero]),
            Harmonic::PMinus => (C::new(r[0], -r[1]), [one, -I, zero]),
        }
    }

    /// `∫ |Y|² dΩ` for the polynomial restricted to the unit sphere.
    fn angular_norm(self) -> f64 {
        match self {
            Harmonic::S => 4.0 * PI,
            Harmonic::P0 => 4.0 * PI / 3.0,
            Harmonic::PPlus | Harmonic::PMinus => 8.0 * PI / 3.0,
        }
    }
}

/// Stationary state `N r^{λ−ℓ} Y(r) e^{−κr} e^{−iωt}` with a harmonic
/// polynomial `Y` of degree `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialState {
    pub harmonic: Harmonic,
    /// Radial power `λ` (equal to `ℓ` for Schrödinger orbitals).
    pub lambda: f64,
    pub kappa: f64,
    pub omega: f64,
    pub norm: f64,
}

impl RadialState {
    fn normalized(harmonic: Harmonic, lambda: f64, kappa: f64, omega: f64) -> Self {
        // ∫ r^{2λ+2} e^{−2κr} dr = Γ(2λ+3) / (2κ)^{2λ+3}
        let p = 2.0 * lambda + 3.0;
        let radial = libm::tgamma(p) / (2.0 * kappa).powf(p);
        Self {
            harmonic,
            lambda,
            kappa,
            omega,
            norm: 1.0 / (radial * harmonic.angular_norm()).sqrt(),
        }
    }

    /// Schrödinger–Coulomb orbital with `n = ℓ + 1`, energy `−α²/(2n²)`.
    pub fn schrodinger(alpha: f64, harmonic: Harmonic) -> Self {
        let n = (harmonic.ell() + 1) as f64;
        Self::normalized(
            harmonic,
            harmonic.ell() as f64,
            alpha / n,
            -alpha * alpha / (2.0 * n * n),
        )
    }

    /// Exact nodeless Klein–Gordon state in `A = 1/r` for a negative charge:
    /// `λ = −½ + sqrt((ℓ+½)² − α²)`, `ε = [1 + α²/(λ+1)²]^{−1/2}`,
    /// `κ = sqrt(1 − ε²)`. The time factor is `e^{−iεt}`.
    pub fn klein_gordon(alpha: f64, harmonic: Harmonic) -> Result<Self> {
        let l = harmonic.ell() as f64;
        let disc = (l + 0.5).powi(2) - alpha * alpha;
        if !(alpha > 0.0 && disc > 0.0) {
            return Err(Error::domain("alpha", alpha, "(0, ell + 1/2)"));
        }
        let lambda = -0.5 + disc.sqrt();
        let eps = 1.0 / (1.0 + (alpha / (lambda + 1.0)).powi(2)).sqrt();
        let kappa = eps * alpha / (lambda + 1.0);
        Ok(Self::normalized(harmonic, lambda, kappa, eps))
    }

    pub fn energy(&self) -> f64 {
        self.omega
    }

    /// Time-independent part and its gradient.
    pub fn stationary(&self, r: V) -> (C, [C; 3]) {
        let rr = r.norm();
        let l = self.harmonic.ell() as f64;
        let radial = self.norm * rr.powf(self.lambda - l) * (-self.kappa * rr).exp();
        let d_radial = radial * ((self.lambda - l) / rr - self.kappa);
        let (y, gy) = self.harmonic.value_grad(r);
        let mut g = [C::new(0.0, 0.0); 3];
        for a in 0..3 {
            g[a] = gy[a] * radial + y * (d_radial * r[a] / rr);
        }
        (y * radial, g)
    }
}

impl WaveFunction for RadialState {
    fn jet(&self, t: f64, r: V) -> Jet {
        Superposition::single(*self).jet(t, r)
    }
}

/// `Σ c_k φ_k(r) e^{−iω_k t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    pub terms: Vec<(C, RadialState)>,
}

impl Superposition {
    pub fn single(s: RadialState) -> Self {
        Self {
            terms: vec![(C::new(1.0, 0.0), s)],
        }
    }

    /// Equal-weight superposition `(φ_a + φ_b)/√2`.
    pub fn equal(a: RadialState, b: RadialState) -> Self {
        let w = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            terms: vec![(w, a), (w, b)],
        }
    }

    /// Slowest beat period `2π / |ω_a − ω_b|` of the first two terms.
    pub fn beat_period(&self) -> Option<f64> {
        match self.terms.as_slice() {
            [a, b, ..] => Some(2.0 * PI / (a.1.omega - b.1.omega).abs()),
            _ => None,
        }
    }
}

impl WaveFunction for Superposition {
    fn jet(&self, t: f64, r: V) -> Jet {
        let mut jet = Jet {
            psi: C::new(0.0, 0.0),
            psi_t: C::new(0.0, 0.0),
            psi_tt: C::new(0.0, 0.0),
            grad: [C::new(0.0, 0.0); 3],
        };
        for (c, s) in &self.terms {
            let (phi, g) = s.stationary(r);
            let f = c * C::from_polar(1.0, -s.omega * t);
            let v = f * phi;
            jet.psi += v;
            jet.psi_t += v * (-I * s.omega);
            jet.psi_tt += v * (-s.omega * s.omega);
            for (d, ga) in jet.grad.iter_mut().zip(g) {
                *d += f * ga;
            }
        }
        jet
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_normalization() {
        let a = 0.3;
        let s = RadialState::schrodinger(a, Harmonic::S);
        // √(α³/π) at the origin
        assert!((s.norm - (a.powi(3) / PI).sqrt()).abs() < 1e-14);
        let p = RadialState::schrodinger(a, Harmonic::PPlus);
        assert!((p.norm - a.powf(2.5) / (8.0 * PI.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_difference() {
        let s = RadialState::klein_gordon(0.2, Harmonic::PPlus).unwrap();
        let r = V::new(0.7, -1.1, 0.4);
        let (_, g) = s.stationary(r);
        let h = 1e-6;
        for a in 0..3 {
            let mut e = V::zero();
            e[a] = h;
            let fd = (s.stationary(r + e).0 - s.stationary(r - e).0) / (2.0 * h);
            assert!((fd - g[a]).norm() < 1e-8);
        }
    }

    #[test]
    fn kg_level_matches_closed_form() {
        let a = crate::electrostatics::ALPHA_CODATA;
        let s = RadialState::klein_gordon(a, Harmonic::S).unwrap();
        let exact = crate::spectral::kg_coulomb_level(a, 0, 0).unwrap();
        assert!((s.omega - exact).abs() < 1e-15);
    }
}
