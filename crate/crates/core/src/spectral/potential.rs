//! Radial potentials `Ā₀(r)` fed to the bound-state solver.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::electrostatics::u_of_zeta;
use crate::error::{Error, Result};
use crate::math_core::CubicSpline;

/// A positive, decreasing potential `Ā₀(r)` for `r > 0`.
pub trait RadialPotential: Sync + Send + std::fmt::Debug {
    fn abar0(&self, r: f64) -> f64;

    /// Smallest radius worth resolving on a solver grid.
    fn r_min_hint(&self) -> f64 {
        1e-9
    }

    fn label(&self) -> String;
}

/// Pure Coulomb `Ā₀ = 1/r`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Coulomb;

impl RadialPotential for Coulomb {
    fn abar0(&self, r: f64) -> f64 {
        1.0 / r
    }

    fn label(&self) -> String {
        "coulomb".into()
    }
}

/// Default number of table points.
pub const TABLE_POINTS: usize = 2000;
/// Table range in units of `β`.
pub const TABLE_R_RANGE: (f64, f64) = (1e-4, 1e6);

/// Coulomb–Born–Infeld `Ā₀(r) = (1 − U(β/r))/r` with `U` tabulated on a
/// logarithmic `r` grid and interpolated by a cubic spline in `ln r`.
///
/// Beyond the table's outer end `U` is continued linearly in `ζ = β/r`;
/// inside its inner end `U` is evaluated directly.
#[derive(Debug, Clone)]
pub struct PotentialTable {
    beta: f64,
    r_lo: f64,
    r_hi: f64,
    u_hi: f64,
    spline: CubicSpline<f64>,
}

impl PotentialTable {
    pub fn new(beta: f64) -> Result<Self> {
        Self::with_points(beta, TABLE_POINTS)
    }

    pub fn with_points(beta: f64, points: usize) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain("beta", beta, "(0, inf)"));
        }
        if points < 3 {
            return Err(Error::Shape(format!(
                "potential table needs >= 3 points, got {points}"
            )));
        }
        let (t_lo, t_hi) = ((TABLE_R_RANGE.0 * beta).ln(), (TABLE_R_RANGE.1 * beta).ln());
        let ts: Vec<f64> = (0..points)
            .map(|i| t_lo + (t_hi - t_lo) * i as f64 / (points - 1) as f64)
            .collect();
        let us = ts
            .par_iter()
            .map(|&t| u_of_zeta(beta / t.exp()))
            .collect::<Result<Vec<f64>>>()?;
        let u_hi = us[points - 1];
        Ok(Self {
            beta,
            r_lo: t_lo.exp(),
            r_hi: t_hi.exp(),
            u_hi,
            spline: CubicSpline::natural(ts, us)?,
        })
    }

    /// Process-wide table for `beta`, built on first use.
    pub fn shared(beta: f64) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<PotentialTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().map_err(poisoned)?.get(&beta.to_bits()) {
            return Ok(t.clone());
        }
        let table = Arc::new(Self::new(beta)?);
        cache
            .lock()
            .map_err(poisoned)?
            .insert(beta.to_bits(), table.clone());
        Ok(table)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Interpolated `U(β/r)`.
    pub fn u(&self, r: f64) -> f64 {
        if r >= self.r_hi {
            self.u_hi * self.r_hi / r
        } else if r >= self.r_lo {
            self.spline.eval(r.ln())
        } else {
            u_of_zeta(self.beta / r).unwrap_or(f64::NAN)
        }
    }
}

fn poisoned<T>(_: T) -> Error {
    Error::Invalid("potential table cache poisoned".into())
}

impl RadialPotential for PotentialTable {
    fn abar0(&self, r: f64) -> f64 {
        (1.0 - self.u(r)) / r
    }

    fn r_min_hint(&self) -> f64 {
        self.r_lo.min(1e-9)
    }

    fn label(&self) -> String {
        format!("coulomb-born-infeld(beta={:e})", self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electrostatics::abar0;

    #[test]
    fn table_matches_direct_evaluation() {
        let beta = 0.01;
        let table = PotentialTable::with_points(beta, 600).unwrap();
        for r in [2e-6, 3e-4, 5e-3, 0.01, 0.07, 1.0, 50.0, 2e4] {
            let direct = abar0(r, beta).unwrap();
            let rel = (table.abar0(r) - direct).abs() / direct;
            assert!(rel < 1e-7, "r={r}: {rel}");
        }
    }

    #[test]
    fn outer_extension_is_continuous() {
        let t = PotentialTable::with_points(1.0, 200).unwrap();
        let r = t.r_hi;
        assert!((t.u(r * (1.0 - 1e-12)) - t.u(r)).abs() < 1e-15);
        assert!((t.u(4.0 * r) - t.u(r) / 4.0).abs() < 1e-18);
    }

    #[test]
    fn shared_is_cached() {
        let a = PotentialTable::shared(0.5).unwrap();
        let b = PotentialTable::shared(0.5).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn rejects_bad_beta() {
        assert!(PotentialTable::new(0.0).is_err());
        assert!(PotentialTable::new(f64::NAN).is_err());
    }
}
