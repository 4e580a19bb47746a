//! The auxiliary function `f(y) = sqrt(1/4 + y² - y sqrt(1 + y²))` on
//! `[0, 1/(2√2)]` and its derivative.
//!
//! With `s = sqrt(1+y²)` and `p = s + y` one has `f = sqrt(2 - p²) / (2p)` and
//! `f' = -1 / (p s sqrt(2 - p²))`, where `2 - p² = (1 - 8y²)/(1 - 2y² + 2sy)`.
//! Writing `1 - 8y² = g (2 - g)` with the endpoint gap `g = 1 - 2√2 y` keeps
//! every quantity free of cancellation, including `(1 + f')/y²` near `y = 0`.

use crate::error::{Error, Result};
use crate::math_core::quadrature::{Quadrature, QuadratureResult};
use crate::scalar::Real;

/// Right end of the domain, `1/(2√2)`.
pub fn domain_end<T: Real>() -> T {
    T::one() / (T::lit(2.0) * T::SQRT_2())
}

fn gap_of<T: Real>(y: T) -> T {
    T::one() - T::lit(2.0) * T::SQRT_2() * y
}

/// `(p, s, 2 - p²)` for a point given by `y` and its gap `1 - 2√2 y`.
fn pieces<T: Real>(y: T, gap: T) -> (T, T, T) {
    let two = T::lit(2.0);
    let s = (T::one() + y * y).sqrt();
    let p = s + y;
    let den = T::one() - two * y * y + two * s * y;
    let q2 = gap * (two - gap) / den;
    (p, s, q2)
}

fn check_closed<T: Real>(what: &'static str, y: T) -> Result<()> {
    if !(y >= T::zero() && y <= domain_end::<T>()) {
        return Err(Error::domain(what, y.to_f64_lossy(), "[0, 1/(2*sqrt(2))]"));
    }
    Ok(())
}

fn check_open<T: Real>(what: &'static str, y: T) -> Result<()> {
    if !(y >= T::zero() && y < domain_end::<T>()) {
        return Err(Error::domain(what, y.to_f64_lossy(), "[0, 1/(2*sqrt(2)))"));
    }
    Ok(())
}

/// `f(y)`; zero at the right end of the domain.
pub fn f_aux<T: Real>(y: T) -> Result<T> {
    check_closed("f_aux", y)?;
    let (p, _, q2) = pieces(y, gap_of(y));
    Ok(q2.max(T::zero()).sqrt() / (T::lit(2.0) * p))
}

/// Analytic derivative `f'(y)`; diverges like `1/sqrt(1 - 2√2 y)` at the end.
pub fn f_prime<T: Real>(y: T) -> Result<T> {
    check_open("f_prime", y)?;
    Ok(f_prime_with_gap(y, gap_of(y)))
}

/// `f'` at a point specified by `y` and an independently known gap `1 - 2√2 y`.
pub fn f_prime_with_gap<T: Real>(y: T, gap: T) -> T {
    let (p, s, q2) = pieces(y, gap);
    -T::one() / (p * s * q2.sqrt())
}

/// `(1 + f'(y)) / y²`, finite at `y = 0` (value `-3/2`).
pub fn coulomb_kernel_with_gap<T: Real>(y: T, gap: T) -> T {
    let (p, s, q2) = pieces(y, gap);
    let root = q2.sqrt();
    -(p * p + T::lit(2.0)) * p / (s * root * (s * p * root + T::one()))
}

pub fn coulomb_kernel<T: Real>(y: T) -> Result<T> {
    check_open("coulomb_kernel", y)?;
    Ok(coulomb_kernel_with_gap(y, gap_of(y)))
}

/// Maclaurin coefficients of `f'` up to `order` (at most 4).
pub fn f_prime_taylor<T: Real>(order: usize) -> Result<Vec<T>> {
    const COEFFS: [f64; 5] = [-1.0, 0.0, -1.5, -4.0, -75.0 / 8.0];
    if order > 4 {
        return Err(Error::UnsupportedOrder(order));
    }
    Ok(COEFFS[..=order].iter().map(|&c| T::lit(c)).collect())
}

/// Integrate `h(y, gap)` over `y ∈ [lo, 1/(2√2)]` after substituting
/// `u = sqrt(1 - 2√2 y)`, which removes a reciprocal square-root singularity
/// at the right end. `h` receives the exact gap `u²`.
pub fn integrate_to_domain_end<T, H>(
    h: H,
    lo: T,
    quad: &Quadrature<T>,
) -> Result<QuadratureResult<T>>
where
    T: Real,
    H: Fn(T, T) -> T,
{
    let two_sqrt2 = T::lit(2.0) * T::SQRT_2();
    let u_hi = gap_of(lo).max(T::zero()).sqrt();
    let mapped_points: Vec<T> = quad
        .breakpoints
        .iter()
        .filter(|&&y| y > lo && y < domain_end::<T>())
        .map(|&y| gap_of(y).sqrt())
        .collect();
    let q = Quadrature {
        breakpoints: mapped_points,
        ..quad.clone()
    };
    q.integrate(
        |u: T| {
            let gap = u * u;
            let y = (T::one() - gap) / two_sqrt2;
            h(y, gap) * T::lit(2.0) * u / two_sqrt2
        },
        T::zero(),
        u_hi,
    )
}

/// `∫₀^{1/(2√2)} (1 + f'(y))/y² dy`, which equals `1 - 2√2`.
pub fn coulomb_kernel_integral<T: Real>(abs_tol: T) -> Result<QuadratureResult<T>> {
    integrate_to_domain_end(
        coulomb_kernel_with_gap,
        T::zero(),
        &Quadrature::with_abs_tol(abs_tol),
    )
}
