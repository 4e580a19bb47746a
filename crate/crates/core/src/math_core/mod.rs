//! Numerical building blocks shared by the physics modules: adaptive
//! quadrature, the auxiliary function `f` with its derivative, a cubic
//! spline and a small three-vector type.

pub mod aux;
pub mod quadrature;
pub mod spline;
pub mod vec3;

pub use aux::{
    coulomb_kernel, coulomb_kernel_integral, f_aux, f_prime, f_prime_taylor, f_prime_with_gap,
};
pub use quadrature::{integrate_adaptive, Quadrature, QuadratureResult};
pub use spline::CubicSpline;
pub use vec3::Vec3;

/// Default absolute tolerance of the library's quadratures.
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
