//! First-order β correction of the hydrogen ground state, the resulting
//! upper bound on β, and the radius beyond which Coulomb's law holds to a
//! given accuracy.

use serde::{Deserialize, Serialize};

use crate::electrostatics::{beta_born, u_of_zeta, ModelParams};
use crate::error::{Error, Result};
use crate::math_core::Quadrature;

/// `δE₀ = 4α⁴ ∫₀^∞ r e^{−2αr} U(β/r) dr = α² ∫₀^∞ t e^{−t} U(2αβ/t) dt`.
pub fn delta_e_first_order(params: &ModelParams) -> Result<f64> {
    delta_e_first_order_raw(params.alpha, params.beta)
}

/// As [`delta_e_first_order`], accepting `β = 0`.
pub fn delta_e_first_order_raw(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain("alpha", alpha, "(0, inf)"));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::domain("beta", beta, "[0, 1]"));
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    let z = 2.0 * alpha * beta;
    let mut pts: Vec<f64> = [0.1, 0.3, 1.0, 3.0, 10.0].iter().map(|k| k * z).collect();
    pts.extend([1.0, 5.0, 20.0]);
    pts.sort_by(f64::total_cmp);
    let failure = std::cell::RefCell::new(None);
    let v = Quadrature::with_abs_tol(1e-14 * z)
        .rel_tol(1e-10)
        .breakpoints(pts)
        .integrate(
            |t: f64| {
                if t == 0.0 {
                    return 0.0;
                }
                match u_of_zeta(z / t) {
                    Ok(u) => t * (-t).exp() * u,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                }
            },
            0.0,
            f64::INFINITY,
        )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(alpha * alpha * v.value)
}

/// `4Kα³β`, the magnitude bound on the first-order correction.
pub fn delta_e_bound(alpha: f64, beta: f64, k: f64) -> f64 {
    4.0 * k * alpha.powi(3) * beta
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaBound {
    pub allowed_fraction: f64,
    pub k: f64,
    pub alpha: f64,
    pub beta_max: f64,
    /// `beta_max / α` rounded to the nearest power of ten (in log scale).
    pub rounded_ratio: f64,
    pub beta_born: f64,
    pub born_within_bound: bool,
}

/// Largest `β` with `4Kα³β ≤ allowed_fraction · ¼α⁴`, i.e.
/// `β_max = allowed_fraction · α / (16K)`.
pub fn beta_upper_bound(allowed_fraction: f64, k: f64, alpha: f64) -> Result<BetaBound> {
    if !(allowed_fraction > 0.0 && allowed_fraction <= 1.0) {
        return Err(Error::domain(
            "allowed_fraction",
            allowed_fraction,
            "(0, 1]",
        ));
    }
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::domain("K", k, "[1, inf)"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain("alpha", alpha, "(0, inf)"));
    }
    let beta_max = allowed_fraction * alpha / (16.0 * k);
    let bb = beta_born(alpha);
    Ok(BetaBound {
        allowed_fraction,
        k,
        alpha,
        beta_max,
        rounded_ratio: 10f64.powf((beta_max / alpha).log10().round()),
        beta_born: bb,
        born_within_bound: bb <= beta_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityRadius {
    pub rel_err: f64,
    pub beta: f64,
    /// Smallest `r` such that `|r Ā₀ − 1| ≤ rel_err` holds on the whole scan
    /// outward of it.
    pub radius: f64,
    /// `2β / rel_err`, from `|U(ζ)| < 2ζ`.
    pub leading_order_radius: f64,
}

/// Scan resolution in `ζ`, points per decade.
const SCAN_PER_DECADE: f64 = 40.0;

/// Radius where Coulomb's law starts to hold within `rel_err`.
///
/// `|U(ζ)|` is scanned on a logarithmic grid upward from `ζ = rel_err/1000`
/// (far outside) until it first exceeds `rel_err`; the crossing is then
/// bisected. `U` returns to zero at small radii, so "smallest" refers to the
/// connected outer region.
pub fn validity_radius(rel_err: f64, beta: f64) -> Result<ValidityRadius> {
    if !(rel_err > 0.0 && rel_err < 1.0) {
        return Err(Error::domain("rel_err", rel_err, "(0, 1)"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "(0, inf)"));
    }
    let excess = |z: f64| -> Result<f64> { Ok(u_of_zeta(z)?.abs() - rel_err) };
    let ratio = 10f64.powf(1.0 / SCAN_PER_DECADE);
    let mut lo = rel_err * 1e-3;
    if excess(lo)? > 0.0 {
        return Err(Error::NoSolution(format!(
            "|U| exceeds {rel_err} already at zeta={lo:e}"
        )));
    }
    let mut hi = lo * ratio;
    while excess(hi)? <= 0.0 {
        lo = hi;
        hi *= ratio;
        if hi > 1e4 {
            return Err(Error::NotFound {
                lo: rel_err * 1e-3,
                hi,
            });
        }
    }
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ValidityRadius {
        rel_err,
        beta,
        radius: beta / lo,
        leading_order_radius: 2.0 * beta / rel_err,
    })
}
