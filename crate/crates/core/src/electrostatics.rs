//! Electrostatics of one and two point charges in the Born–Infeld aether.
//!
//! Lengths are in electron Compton wavelengths and potentials in units of
//! the electron rest energy per elementary charge. The nucleus sits at the
//! origin, the electron at distance `r`; everything depends on `r` and the
//! aether constant `beta` only through `x = r/beta` up to an overall `1/beta`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math_core::aux::{coulomb_kernel_with_gap, domain_end, integrate_to_domain_end};
use crate::math_core::{Quadrature, Vec3};

/// CODATA 2018 value of Sommerfeld's fine structure constant.
pub const ALPHA_CODATA: f64 = 0.007_297_352_569_3;

/// Boundary of the small-distance series, `r/beta < 2√2`.
pub const SERIES_RADIUS: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Sign of a point charge in units of the elementary charge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChargeSign {
    Positive,
    Negative,
}

impl ChargeSign {
    pub fn value(self) -> f64 {
        match self {
            ChargeSign::Positive => 1.0,
            ChargeSign::Negative => -1.0,
        }
    }

    pub fn from_value(v: f64) -> Result<Self> {
        if v == 1.0 {
            Ok(ChargeSign::Positive)
        } else if v == -1.0 {
            Ok(ChargeSign::Negative)
        } else {
            Err(Error::domain("charge sign", v, "{-1, +1}"))
        }
    }
}

/// Dimensionless model constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub electron: ChargeSign,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            electron: ChargeSign::Negative,
        };
        p.validate()?;
        Ok(p)
    }

    /// CODATA `alpha` with Born's value of `beta`.
    pub fn born() -> Self {
        Self {
            alpha: ALPHA_CODATA,
            beta: beta_born(ALPHA_CODATA),
            electron: ChargeSign::Negative,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::domain("alpha", self.alpha, "(0, inf)"));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::domain("beta", self.beta, "(0, inf)"));
        }
        Ok(())
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::born()
    }
}

/// Nucleus–electron separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairGeometry {
    r: f64,
}

impl PairGeometry {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain("separation", r, "(0, inf)"));
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Electron position on the z axis.
    pub fn electron_position(&self) -> Vec3<f64> {
        Vec3::new(0.0, 0.0, self.r)
    }
}

fn tight(abs_tol: f64) -> Quadrature<f64> {
    Quadrature::with_abs_tol(abs_tol).rel_tol(1e-15)
}

/// `1 - 1/sqrt(1 + q)` without cancellation; equals 1 at `q = ∞`.
fn one_minus_inv_sqrt1p(q: f64) -> f64 {
    if q > 1.0 {
        1.0 - 1.0 / (1.0 + q).sqrt()
    } else {
        let s = (1.0 + q).sqrt();
        q / (s * (1.0 + s))
    }
}

/// `∫_a^∞ dx / sqrt(1 + x⁴)`.
pub fn born_tail_integral(a: f64) -> Result<f64> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::domain("born tail lower limit", a, "[0, inf)"));
    }
    let q = tight(1e-15).breakpoints([1.0f64.max(2.0 * a)]);
    Ok(
        q.integrate(|x: f64| 1.0 / (1.0 + x.powi(4)).sqrt(), a, f64::INFINITY)?
            .value,
    )
}

/// `∫_0^∞ dx / sqrt(1 + x⁴) = Γ(1/4)² / (4√π) ≈ 1.854`.
pub fn born_integral() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| born_tail_integral(0.0).expect("born integral converges"))
}

/// Born's potential of a single point charge, `±(1/β) ∫_{r/β}^∞ dx/sqrt(1+x⁴)`.
pub fn born_potential(r: f64, beta: f64, sign: ChargeSign) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain("born_potential r", r, "[0, inf)"));
    }
    check_beta(beta)?;
    Ok(sign.value() * born_tail_integral(r / beta)? / beta)
}

/// `A_Born^(−)(0) = −I/β`, the electron's self-potential at its own location.
pub fn born_self_potential(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(-born_integral() / beta)
}

/// The value of `beta` for which `alpha |A_Born^(−)(0)| = 3/2`.
pub fn beta_born(alpha: f64) -> f64 {
    2.0 / 3.0 * alpha * born_integral()
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "(0, inf)"));
    }
    Ok(())
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain("r", r, "(0, inf)"));
    }
    Ok(())
}

/// Coulomb field of charge +1 at the origin and −1 at `s1`.
pub fn coulomb_pair_field(s: Vec3<f64>, s1: Vec3<f64>) -> Result<Vec3<f64>> {
    let d = s - s1;
    let (rs, rd) = (s.norm(), d.norm());
    if rs == 0.0 || rd == 0.0 {
        return Err(Error::Singularity);
    }
    Ok(s.scale(1.0 / rs.powi(3)) - d.scale(1.0 / rd.powi(3)))
}

/// `D / sqrt(1 + β⁴ |D|²)` for the Coulomb pair field `D`.
pub fn saturated_pair_field(s: Vec3<f64>, s1: Vec3<f64>, beta: f64) -> Result<Vec3<f64>> {
    let d = coulomb_pair_field(s, s1)?;
    Ok(d.scale(1.0 / (1.0 + beta.powi(4) * d.norm_sq()).sqrt()))
}

/// Central-difference curl of the saturated pair field at `s`.
pub fn saturated_field_curl(s: Vec3<f64>, s1: Vec3<f64>, beta: f64, h: f64) -> Result<Vec3<f64>> {
    let mut jac = [[0.0; 3]; 3];
    for (k, row) in jac.iter_mut().enumerate() {
        let e = Vec3::<f64>::unit(k).scale(h);
        let plus = saturated_pair_field(s + e, s1, beta)?;
        let minus = saturated_pair_field(s - e, s1, beta)?;
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = (plus[c] - minus[c]) / (2.0 * h);
        }
    }
    // jac[k][c] = ∂_k F_c
    Ok(Vec3::new(
        jac[1][2] - jac[2][1],
        jac[2][0] - jac[0][2],
        jac[0][1] - jac[1][0],
    ))
}

/// `ξ⁴(1−ξ)⁴ / (1 − 2ξ(1−ξ))²` written in `η = 1 − ξ`.
fn pair_weight(eta: f64) -> f64 {
    let xi = 1.0 - eta;
    let p = xi * eta;
    let den = 1.0 - 2.0 * p;
    p.powi(4) / (den * den)
}

/// Breakpoints in `η ∈ (0, 1/2)` resolving the peak of width `~1/x` at `η = 0`.
fn peak_breakpoints(x: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    let mut eta = 0.25 / x;
    while eta < 0.5 {
        pts.push(eta);
        eta *= 4.0;
    }
    pts
}

/// `A₀(r)` from the one-dimensional line integral along the pair axis.
pub fn a0_direct(r: f64, beta: f64) -> Result<f64> {
    check_r(r)?;
    check_beta(beta)?;
    let x = r / beta;
    let x4 = x.powi(4);
    let q = tight((1e-13 / x).min(1e-14)).breakpoints(peak_breakpoints(x));
    let j = q
        .integrate(
            |eta: f64| 1.0 / (1.0 + x4 * pair_weight(eta)).sqrt(),
            0.0,
            0.5,
        )?
        .value;
    Ok(-(r / (beta * beta)) * j)
}

/// `C₅ = ∫_{1/2}^1 ξ⁴(1−ξ)⁴ / (1 − 2ξ(1−ξ))² dξ`.
pub fn series_c5() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        Quadrature::with_abs_tol(1e-17)
            .rel_tol(1e-15)
            .integrate(pair_weight, 0.0, 0.5)
            .expect("C5 converges")
            .value
    })
}

/// Partial sum of the small-distance series, through `(r/β)^max_power`.
pub fn a0_series(r: f64, beta: f64, max_power: u32) -> Result<f64> {
    check_beta(beta)?;
    if !(r >= 0.0) {
        return Err(Error::domain("a0_series r", r, "[0, 2*sqrt(2)*beta)"));
    }
    let x = r / beta;
    if x >= SERIES_RADIUS {
        return Err(Error::OutsideConvergenceRadius { ratio: x });
    }
    let bracket = match max_power {
        1 => x,
        5 => x - x.powi(5) * series_c5(),
        other => {
            return Err(Error::Invalid(format!(
                "series truncation power {other} unsupported (use 1 or 5)"
            )))
        }
    };
    Ok(-bracket / (2.0 * beta))
}

/// `(1+z)^{-1/2} − 1 + z/2`, accurate for small `z`.
fn second_order_remainder(z: f64) -> f64 {
    if z < 1e-3 {
        // binomial series of (1+z)^{-1/2} from the z² term on
        const C: [f64; 5] = [
            3.0 / 8.0,
            -5.0 / 16.0,
            35.0 / 128.0,
            -63.0 / 256.0,
            231.0 / 1024.0,
        ];
        let mut acc = 0.0;
        for &c in C.iter().rev() {
            acc = acc * z + c;
        }
        acc * z * z
    } else {
        1.0 / (1.0 + z).sqrt() - 1.0 + 0.5 * z
    }
}

/// `a0_direct − a0_series(·, ·, 5)` evaluated as a single integral of the
/// Taylor remainder of the integrand, so it keeps full relative precision
/// even where it is far below the rounding level of `A₀` itself.
pub fn a0_series_remainder(r: f64, beta: f64) -> Result<f64> {
    check_r(r)?;
    check_beta(beta)?;
    let x = r / beta;
    let x4 = x.powi(4);
    let scale = (3.0 / 8.0) * x4 * x4 * 3.1e-5;
    let q = Quadrature::with_abs_tol((scale * 1e-14).max(1e-300)).rel_tol(1e-13);
    let j = q
        .integrate(
            |eta: f64| second_order_remainder(x4 * pair_weight(eta)),
            0.0,
            0.5,
        )?
        .value;
    Ok(-(x / beta) * j)
}

/// `A₀(r) ≈ A_Born^(−)(0) + 1/r`, the leading large-distance form.
pub fn a0_asymptotic(r: f64, beta: f64) -> Result<f64> {
    check_r(r)?;
    Ok(born_self_potential(beta)? + 1.0 / r)
}

/// `U(ζ)` through the defining relation `A₀ = A_Born^(−)(0) + (1 − U)/r`
/// evaluated with the direct integral, at `β = 1`.
pub fn u_from_defining_relation(zeta: f64) -> Result<f64> {
    let r = 1.0 / zeta;
    Ok(1.0 - r * (a0_direct(r, 1.0)? + born_integral()))
}

/// `U(ζ)` from its two-integral representation: a `ξ` integral over
/// `[0, 2√2]` plus a `y` integral over `[0, 1/(2√2)]` against `(1+f')/y²`.
pub fn u_two_integral(zeta: f64) -> Result<f64> {
    if !(zeta >= 0.0 && zeta.is_finite()) {
        return Err(Error::domain("zeta", zeta, "(0, inf)"));
    }
    if zeta == 0.0 {
        return Ok(0.0);
    }
    let z4 = zeta.powi(4);
    // U = O(ζ) near zero; keep the tolerance relative to that scale
    let abs_tol = 1e-16 * zeta.min(1.0);
    let first = Quadrature::with_abs_tol(abs_tol)
        .rel_tol(1e-14)
        .integrate(
            |xi: f64| one_minus_inv_sqrt1p(z4 * xi.powi(4)),
            0.0,
            SERIES_RADIUS,
        )?
        .value;

    let end = domain_end::<f64>();
    // geometric breakpoints so the ζ⁴/y⁴ tail beyond y ~ ζ is resolved
    let pts: Vec<f64> = std::iter::successors(Some(0.25 * zeta), |p| Some(4.0 * p))
        .take_while(|&p| p < end)
        .collect();
    let weight = |y: f64| {
        if y == 0.0 {
            1.0
        } else {
            one_minus_inv_sqrt1p((zeta / y).powi(4))
        }
    };
    // plain y near the origin, where the weight varies on the scale ζ; the
    // square-root substitution only near the endpoint singularity
    let split = 0.25;
    let q = Quadrature::with_abs_tol(abs_tol)
        .rel_tol(1e-14)
        .breakpoints(pts);
    let inner = q
        .integrate(
            |y: f64| {
                weight(y) * coulomb_kernel_with_gap(y, 1.0 - 2.0 * std::f64::consts::SQRT_2 * y)
            },
            0.0,
            split,
        )?
        .value;
    let outer = integrate_to_domain_end(
        |y: f64, gap: f64| weight(y) * coulomb_kernel_with_gap(y, gap),
        split,
        &q,
    )?
    .value;
    Ok(first + inner + outer)
}

/// Above this `ζ` the defining relation is used instead of the two-integral
/// representation.
pub const U_REPRESENTATION_SWITCH: f64 = 10.0;

/// Deviation of `Ā₀` from Coulomb's law, `U(β/r) = 1 − r Ā₀(r)`.
pub fn u_of_zeta(zeta: f64) -> Result<f64> {
    if !(zeta >= 0.0 && zeta.is_finite()) {
        return Err(Error::domain("zeta", zeta, "(0, inf)"));
    }
    if zeta > U_REPRESENTATION_SWITCH {
        u_from_defining_relation(zeta)
    } else {
        u_two_integral(zeta)
    }
}

/// `Ā₀(r) = A₀(r) − A_Born^(−)(0) = (1 − U(β/r))/r`; `beta = 0` gives `1/r`.
pub fn abar0(r: f64, beta: f64) -> Result<f64> {
    check_r(r)?;
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "[0, inf)"));
    }
    Ok((1.0 - u_of_zeta(beta / r)?) / r)
}

/// `lim_{ζ→0} U(ζ)/ζ = −(3/2) ∫₀^∞ (1 − t²/sqrt(1+t⁴)) dt`.
pub fn u_small_zeta_slope() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        let g = |t: f64| {
            let s = (1.0 + t.powi(4)).sqrt();
            1.0 / (s * (s + t * t))
        };
        let v = tight(1e-16)
            .breakpoints([1.0])
            .integrate(g, 0.0, f64::INFINITY)
            .expect("slope integral converges")
            .value;
        -1.5 * v
    })
}

/// Sign changes of `U` located on a logarithmic `ζ` grid.
#[derive(Debug, Clone, Serialize)]
pub struct UZeroReport {
    pub scan_lo: f64,
    pub scan_hi: f64,
    /// Brackets `[ζ_lo, ζ_hi]` across which `U` changes sign.
    pub brackets: Vec<(f64, f64)>,
    /// One root per bracket, refined by bisection.
    pub roots: Vec<f64>,
}

impl UZeroReport {
    /// The first root, if any were found.
    pub fn root(&self) -> Option<f64> {
        self.roots.first().copied()
    }
}

/// Scan `U` over `ζ ∈ [1e−3, 1e3]` and bisect every sign change to a
/// relative width of 1e−12. Uniqueness is not asserted.
pub fn u_zero_locate() -> Result<UZeroReport> {
    u_zero_scan(1e-3, 1e3, 121)
}

pub fn u_zero_scan(lo: f64, hi: f64, points: usize) -> Result<UZeroReport> {
    if !(lo > 0.0 && hi > lo && points >= 2) {
        return Err(Error::Invalid(format!(
            "bad U scan range [{lo}, {hi}] x {points}"
        )));
    }
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    let zetas: Vec<f64> = (0..points).map(|i| lo * (ratio * i as f64).exp()).collect();
    let values = zetas
        .iter()
        .map(|&z| u_of_zeta(z))
        .collect::<Result<Vec<_>>>()?;

    let mut brackets = Vec::new();
    let mut roots = Vec::new();
    for i in 0..points - 1 {
        let (ua, ub) = (values[i], values[i + 1]);
        if ua == 0.0 {
            brackets.push((zetas[i], zetas[i]));
            roots.push(zetas[i]);
            continue;
        }
        if ua.signum() != ub.signum() && ub != 0.0 {
            let (mut a, mut b, mut fa) = (zetas[i], zetas[i + 1], ua);
            while (b - a) > 1e-12 * a {
                let m = 0.5 * (a + b);
                let fm = u_of_zeta(m)?;
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            brackets.push((zetas[i], zetas[i + 1]));
            roots.push(0.5 * (a + b));
        }
    }
    if roots.is_empty() {
        return Err(Error::NotFound { lo, hi });
    }
    Ok(UZeroReport {
        scan_lo: lo,
        scan_hi: hi,
        brackets,
        roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;

    #[test]
    fn born_integral_matches_gamma_closed_form() {
        assert!((born_integral() - constants::BORN_INTEGRAL).abs() < 1e-14);
    }

    #[test]
    fn born_potential_signs_and_tail() {
        let neg = born_potential(0.0, 1.0, ChargeSign::Negative).unwrap();
        assert!((neg + constants::BORN_INTEGRAL).abs() < 1e-13);
        for r in [0.1, 1.0, 7.0] {
            let p = born_potential(r, 0.5, ChargeSign::Positive).unwrap();
            let m = born_potential(r, 0.5, ChargeSign::Negative).unwrap();
            assert_eq!(p, -m);
        }
        let far = 1e3 * born_potential(1e3, 1.0, ChargeSign::Positive).unwrap();
        assert!((far - 1.0).abs() < 1e-5);
        assert!(born_potential(-1.0, 1.0, ChargeSign::Positive).is_err());
        assert!(born_potential(1.0, 0.0, ChargeSign::Positive).is_err());
    }

    #[test]
    fn born_potential_is_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..60 {
            let r = 1e-3 * 1.3f64.powi(i);
            let v = born_potential(r, 1.0, ChargeSign::Positive).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn pair_field_midpoint_and_singularities() {
        let s1 = Vec3::new(0.3, -1.2, 2.0);
        let mid = coulomb_pair_field(s1.scale(0.5), s1).unwrap();
        let expect = s1.scale(8.0 / s1.norm().powi(3));
        assert!((mid - expect).max_abs() < 1e-13);
        assert!(matches!(
            coulomb_pair_field(Vec3::zero(), s1),
            Err(Error::Singularity)
        ));
        assert!(matches!(
            coulomb_pair_field(s1, s1),
            Err(Error::Singularity)
        ));
    }

    #[test]
    fn pair_field_decays_like_a_dipole() {
        let s1 = Vec3::new(0.0, 0.0, 1.0);
        let dir = Vec3::new(0.6, 0.0, 0.8);
        let e1 = coulomb_pair_field(dir.scale(1e2), s1).unwrap().norm();
        let e2 = coulomb_pair_field(dir.scale(1e3), s1).unwrap().norm();
        // |E| ~ R^-3, so a decade costs three decades
        assert!((e1 / e2 - 1e3).abs() / 1e3 < 0.05);
    }

    #[test]
    fn saturated_field_curl_vanishes_on_axis() {
        let s1 = Vec3::new(0.0, 0.0, 2.0);
        for xi in [-1.5, 0.25, 0.5, 0.8, 2.5] {
            let c = saturated_field_curl(s1.scale(xi), s1, 1.0, 1e-4).unwrap();
            assert!(c.max_abs() < 1e-6, "xi={xi}: {c:?}");
        }
        // off axis the curl does not vanish
        let off = saturated_field_curl(Vec3::new(0.4, 0.0, 1.0), s1, 1.0, 1e-4).unwrap();
        assert!(off.max_abs() > 1e-3);
    }

    #[test]
    fn a0_bounds_and_leading_term() {
        for r in [1e-3, 0.1, 1.0, 10.0, 1e3] {
            let a = a0_direct(r, 1.0).unwrap();
            assert!(a < 0.0);
            assert!(a.abs() <= 0.5 * r + 1e-15);
        }
        let beta = 0.7;
        let r = 1e-3 * beta;
        let lead = -r / (2.0 * beta * beta);
        assert!(((a0_direct(r, beta).unwrap() - lead) / lead).abs() < 1e-4);
    }

    #[test]
    fn a0_scale_covariance() {
        for r in [0.05, 0.9, 4.0, 300.0] {
            let a = a0_direct(r, 0.8).unwrap();
            let b = a0_direct(2.0 * r, 1.6).unwrap();
            assert!((b - a / 2.0).abs() < 1e-13 * a.abs().max(1.0));
        }
    }

    #[test]
    fn a0_approaches_self_potential() {
        let beta = 1.3;
        let r = 1e4 * beta;
        let dev = (a0_direct(r, beta).unwrap() - born_self_potential(beta).unwrap()).abs();
        assert!(dev <= 2.0 * beta / r);
    }

    #[test]
    fn series_first_term_and_radius() {
        let beta = 2.0;
        assert!((a0_series(0.1 * beta, beta, 1).unwrap() + 0.05 / beta).abs() < 1e-16);
        assert!(matches!(
            a0_series(3.0 * beta, beta, 5),
            Err(Error::OutsideConvergenceRadius { .. })
        ));
        assert!(a0_series(0.1, 1.0, 3).is_err());
        assert!((series_c5() - constants::SERIES_C5).abs() < 1e-17);
    }

    #[test]
    fn remainder_equals_direct_minus_series_where_resolvable() {
        for x in [0.3, 0.6, 1.0, 1.8, 2.5] {
            let diff = a0_direct(x, 1.0).unwrap() - a0_series(x, 1.0, 5).unwrap();
            let rem = a0_series_remainder(x, 1.0).unwrap();
            assert!((diff - rem).abs() < 5e-15, "x={x}: {diff} vs {rem}");
        }
    }

    #[test]
    fn u_representations_agree() {
        for zeta in [1e-3, 0.05, 0.3, 1.0, 3.0, 9.0] {
            let a = u_two_integral(zeta).unwrap();
            let b = u_from_defining_relation(zeta).unwrap();
            assert!((a - b).abs() < 1e-11, "zeta={zeta}: {a} vs {b}");
        }
    }

    #[test]
    fn u_limits() {
        assert_eq!(u_of_zeta(0.0).unwrap(), 0.0);
        assert!(u_of_zeta(-1.0).is_err());
        let slope = u_small_zeta_slope();
        assert!(
            (slope - constants::U_SMALL_ZETA_SLOPE).abs() < 1e-14,
            "{slope}"
        );
        let z = 1e-6;
        assert!((u_of_zeta(z).unwrap() / z - slope).abs() < 1e-4);
        // U -> 1 as r -> 0
        assert!((u_of_zeta(1e4).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn abar0_basic_properties() {
        assert!((abar0(1.0, 1e-9).unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(abar0(2.0, 0.0).unwrap(), 0.5);
        let beta = 1.0;
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let r = 1e-2 * 1.4f64.powi(i);
            let v = abar0(r, beta).unwrap();
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
        let r = 200.0 * beta;
        assert!((abar0(r, beta).unwrap() * r - 1.0).abs() <= 0.01);
    }

    #[test]
    fn abar0_small_r_series() {
        let beta = 1.0;
        for r in [1e-3, 1e-2, 5e-2] {
            let lead = born_integral() / beta - r / (2.0 * beta * beta);
            let v = abar0(r, beta).unwrap();
            assert!((v - lead).abs() < 2.0 * r.powi(4) + 1e-12, "r={r}");
        }
    }

    #[test]
    fn beta_born_relation() {
        let alpha = ALPHA_CODATA;
        let b = beta_born(alpha);
        let lhs = alpha * born_self_potential(b).unwrap().abs();
        assert!((lhs - 1.5).abs() < 1e-14);
        assert!((b - constants::BETA_BORN).abs() < 1e-16);
    }
}
