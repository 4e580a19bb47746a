//! Pointwise Born–Infeld aether laws `E(B, D)` and `H(B, D)`.

use crate::math_core::Vec3;
use crate::scalar::Real;

/// Arguments of the aether laws at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstitutiveInputs<T> {
    pub b: Vec3<T>,
    pub d: Vec3<T>,
    pub beta: T,
}

impl<T: Real> ConstitutiveInputs<T> {
    pub fn new(b: Vec3<T>, d: Vec3<T>, beta: T) -> Self {
        Self { b, d, beta }
    }

    /// `sqrt(1 + β⁴(|B|² + |D|²) + β⁸|B×D|²)`, never below 1.
    pub fn denominator(&self) -> T {
        let b4 = self.beta.powi(4);
        let bxd = self.b.cross(self.d);
        (T::one() + b4 * (self.b.norm_sq() + self.d.norm_sq()) + b4 * b4 * bxd.norm_sq()).sqrt()
    }

    /// `(E, H)` sharing one denominator.
    pub fn evaluate(&self) -> (Vec3<T>, Vec3<T>) {
        let b4 = self.beta.powi(4);
        let inv = T::one() / self.denominator();
        let (b, d) = (self.b, self.d);
        let e = (d - b.cross(b.cross(d)).scale(b4)).scale(inv);
        let h = (b - d.cross(d.cross(b)).scale(b4)).scale(inv);
        (e, h)
    }
}

pub fn constitutive_e<T: Real>(b: Vec3<T>, d: Vec3<T>, beta: T) -> Vec3<T> {
    ConstitutiveInputs::new(b, d, beta).evaluate().0
}

pub fn constitutive_h<T: Real>(b: Vec3<T>, d: Vec3<T>, beta: T) -> Vec3<T> {
    ConstitutiveInputs::new(b, d, beta).evaluate().1
}

/// First-order inverse of the `E` law in `β⁴`: recovers `D` from `(E, B)`
/// when `β⁴(|B|² + |E|²) ≪ 1`.
pub fn invert_linearized_d<T: Real>(e: Vec3<T>, b: Vec3<T>, beta: T) -> Vec3<T> {
    let b4 = beta.powi(4);
    let half = T::lit(0.5);
    e.scale(T::one() + half * b4 * (b.norm_sq() + e.norm_sq())) + b.cross(b.cross(e)).scale(b4)
}
