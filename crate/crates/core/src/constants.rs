//! Frozen reference constants.
//!
//! Each value was computed once with an independent 30-digit quadrature or
//! root finder (mpmath) and is kept here as a regression anchor. The library
//! never reads these in its own computations; tests compare against them.

/// `∫₀^∞ dx/sqrt(1+x⁴) = Γ(1/4)²/(4√π)`; gamma-function closed form.
pub const BORN_INTEGRAL: f64 = 1.854_074_677_301_371_9;

/// `∫_{1/2}^1 ξ⁴(1−ξ)⁴/(1−2ξ(1−ξ))² dξ`; quadrature at 1e−30.
pub const SERIES_C5: f64 = 0.002_737_844_362_978_441_9;

/// `∫_{1/2}^1 [ξ⁴(1−ξ)⁴/(1−2ξ(1−ξ))²]² dξ`, the next series coefficient
/// up to the binomial factor 3/8.
pub const SERIES_C9: f64 = 3.080_598_794_198_713_6e-5;

/// `−(3/2) ∫₀^∞ (1 − t²/sqrt(1+t⁴)) dt`, the slope of `U` at `ζ = 0`
/// (integrand rewritten as `1/(s(s+t²))`, `s = sqrt(1+t⁴)`).
pub const U_SMALL_ZETA_SLOPE: f64 = -1.270_819_627_190_968_6;

/// The sign change of `U` on `ζ ∈ [1e−3, 1e3]` (root of the direct-integral
/// defining relation, 30-digit secant).
pub const U_ZERO_ZETA: f64 = 1.526_745_422_201_726_2;

/// `(2/3) α ∫₀^∞ dx/sqrt(1+x⁴)` with CODATA `α = 0.0072973525693`.
pub const BETA_BORN: f64 = 0.009_019_891_073_386_156_5;

/// Radius (in units of `β`) beyond which `|r Ā₀(r) − 1| ≤ 0.01`, i.e. the
/// root of `U(ζ) = −0.01`.
pub const COULOMB_ONE_PERCENT_RADIUS: f64 = 128.673_512_515_682_43;

/// First-order shift of the hydrogen ground state at `β = BETA_BORN`,
/// `α² ∫₀^∞ t e^{−t} U(2αβ/t) dt`, frozen from an independent 40-digit
/// evaluation through the direct `A₀` integral.
pub const DELTA_E0_BORN: f64 = -8.922_801_694_734_425e-9;
