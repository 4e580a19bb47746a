//! Charge-free Maxwell–Born–Infeld evolution on a periodic lattice.
//!
//! `B` and `D` share the lattice nodes. Spatial derivatives use the centered
//! two-point difference along each axis; because these difference operators
//! commute, the discrete divergence of a discrete curl vanishes identically and
//! `∂B = -∇×E`, `∂D = ∇×H` keep both divergences at their initial values up to
//! round-off. Time integration is classical RK4, which is reversible to
//! `O(dt⁵)` per step pair.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aether3d::constitutive::ConstitutiveInputs;
use crate::error::{Error, Result};
use crate::math_core::Vec3;
use crate::scalar::Real;

/// Default Courant number `dt / h`.
pub const DEFAULT_CFL: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldLattice<T> {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub h: T,
    pub beta: T,
    pub time: T,
    pub cfl: T,
    /// Periodicity per axis. Only fully periodic lattices can be stepped.
    pub periodic: [bool; 3],
    pub b: Vec<Vec3<T>>,
    pub d: Vec<Vec3<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub max_div_b: f64,
    pub max_div_d: f64,
    /// `Σ(|B|² + |D|²) h³ / 8π`; a monitoring number, not a conserved energy.
    pub energy_proxy: f64,
}

impl<T: Real> FieldLattice<T> {
    /// Zero fields on an `nx × ny × nz` periodic lattice.
    pub fn new(dims: [usize; 3], h: T, beta: T) -> Result<Self> {
        let [nx, ny, nz] = dims;
        if nx < 3 || ny < 3 || nz < 3 {
            return Err(Error::Shape(format!(
                "lattice needs at least 3 nodes per axis, got {nx}x{ny}x{nz}"
            )));
        }
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::domain("h", h.to_f64_lossy(), "(0, inf)"));
        }
        if !(beta >= T::zero()) || !beta.is_finite() {
            return Err(Error::domain("beta", beta.to_f64_lossy(), "[0, inf)"));
        }
        let n = nx * ny * nz;
        Ok(Self {
            nx,
            ny,
            nz,
            h,
            beta,
            time: T::zero(),
            cfl: T::lit(DEFAULT_CFL),
            periodic: [true; 3],
            b: vec![Vec3::zero(); n],
            d: vec![Vec3::zero(); n],
        })
    }

    /// Fill `(B, D)` from a function of the node position.
    pub fn from_fn<F>(dims: [usize; 3], h: T, beta: T, f: F) -> Result<Self>
    where
        F: Fn(Vec3<T>) -> (Vec3<T>, Vec3<T>) + Sync,
    {
        let mut lat = Self::new(dims, h, beta)?;
        let (nx, ny) = (lat.nx, lat.ny);
        let fields: Vec<(Vec3<T>, Vec3<T>)> = (0..lat.len())
            .into_par_iter()
            .map(|n| {
                let (i, j, k) = (n % nx, (n / nx) % ny, n / (nx * ny));
                f(Vec3::new(
                    T::lit(i as f64) * h,
                    T::lit(j as f64) * h,
                    T::lit(k as f64) * h,
                ))
            })
            .collect();
        for (n, (b, d)) in fields.into_iter().enumerate() {
            lat.b[n] = b;
            lat.d[n] = d;
        }
        Ok(lat)
    }

    /// Fields given as discrete curls of two vector potentials, so both start
    /// divergence-free to round-off.
    pub fn from_potentials(
        dims: [usize; 3],
        h: T,
        beta: T,
        a_b: &[Vec3<T>],
        a_d: &[Vec3<T>],
    ) -> Result<Self> {
        let mut lat = Self::new(dims, h, beta)?;
        if a_b.len() != lat.len() || a_d.len() != lat.len() {
            return Err(Error::Shape(format!(
                "potentials must have {} samples, got {} and {}",
                lat.len(),
                a_b.len(),
                a_d.len()
            )));
        }
        lat.b = lat.curl(a_b);
        lat.d = lat.curl(a_d);
        Ok(lat)
    }

    /// Null plane wave `D = a g(z) x̂`, `B = a g(z) ŷ` moving along `+z`, with
    /// `g(z) = sin(2π m z / L)`.
    pub fn null_plane_wave(
        dims: [usize; 3],
        h: T,
        beta: T,
        amplitude: T,
        mode: usize,
    ) -> Result<Self> {
        let len = T::lit(dims[2] as f64) * h;
        let k = T::lit(2.0 * mode as f64) * T::PI() / len;
        Self::from_fn(dims, h, beta, |p| {
            let g = amplitude * (k * p[2]).sin();
            (
                Vec3::new(T::zero(), g, T::zero()),
                Vec3::new(g, T::zero(), T::zero()),
            )
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.nx, self.ny, self.nz]
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.ny + j) * self.nx + i
    }

    pub fn max_stable_dt(&self) -> T {
        self.cfl * self.h
    }

    /// Pointwise `(E, H)` from the aether laws.
    pub fn derived_fields(&self) -> (Vec<Vec3<T>>, Vec<Vec3<T>>) {
        self.constitutive(&self.b, &self.d)
    }

    fn constitutive(&self, b: &[Vec3<T>], d: &[Vec3<T>]) -> (Vec<Vec3<T>>, Vec<Vec3<T>>) {
        let beta = self.beta;
        b.par_iter()
            .zip(d.par_iter())
            .map(|(&b, &d)| ConstitutiveInputs::new(b, d, beta).evaluate())
            .unzip()
    }

    fn neighbours(&self, n: usize) -> [(usize, usize); 3] {
        let (nx, ny, nz) = (self.nx, self.ny, self.nz);
        let (i, j, k) = (n % nx, (n / nx) % ny, n / (nx * ny));
        [
            (
                self.index((i + 1) % nx, j, k),
                self.index((i + nx - 1) % nx, j, k),
            ),
            (
                self.index(i, (j + 1) % ny, k),
                self.index(i, (j + ny - 1) % ny, k),
            ),
            (
                self.index(i, j, (k + 1) % nz),
                self.index(i, j, (k + nz - 1) % nz),
            ),
        ]
    }

    /// Centered-difference curl.
    pub fn curl(&self, f: &[Vec3<T>]) -> Vec<Vec3<T>> {
        let inv = T::one() / (T::lit(2.0) * self.h);
        (0..self.len())
            .into_par_iter()
            .map(|n| {
                let [(xp, xm), (yp, ym), (zp, zm)] = self.neighbours(n);
                let dx = f[xp] - f[xm];
                let dy = f[yp] - f[ym];
                let dz = f[zp] - f[zm];
                Vec3::new(
                    (dy[2] - dz[1]) * inv,
                    (dz[0] - dx[2]) * inv,
                    (dx[1] - dy[0]) * inv,
                )
            })
            .collect()
    }

    /// Centered-difference divergence.
    pub fn divergence(&self, f: &[Vec3<T>]) -> Vec<T> {
        let inv = T::one() / (T::lit(2.0) * self.h);
        (0..self.len())
            .into_par_iter()
            .map(|n| {
                let [(xp, xm), (yp, ym), (zp, zm)] = self.neighbours(n);
                ((f[xp][0] - f[xm][0]) + (f[yp][1] - f[ym][1]) + (f[zp][2] - f[zm][2])) * inv
            })
            .collect()
    }

    fn rates(&self, b: &[Vec3<T>], d: &[Vec3<T>]) -> (Vec<Vec3<T>>, Vec<Vec3<T>>) {
        let (e, h) = self.constitutive(b, d);
        let db = self.curl(&e).into_par_iter().map(|c| -c).collect();
        let dd = self.curl(&h);
        (db, dd)
    }

    /// Advance by `dt` (negative `dt` runs backwards).
    pub fn step(&mut self, dt: T) -> Result<()> {
        if self.periodic != [true; 3] {
            return Err(Error::Invalid(
                "only fully periodic lattices can be evolved".into(),
            ));
        }
        let limit = self.max_stable_dt();
        if !dt.is_finite() || dt.abs() > limit {
            return Err(Error::CflViolation {
                dt: dt.to_f64_lossy(),
                limit: limit.to_f64_lossy(),
            });
        }
        let half = dt * T::lit(0.5);
        let axpy = |x: &[Vec3<T>], s: T, y: &[Vec3<T>]| -> Vec<Vec3<T>> {
            x.par_iter()
                .zip(y.par_iter())
                .map(|(&x, &y)| x + y.scale(s))
                .collect()
        };
        let (kb1, kd1) = self.rates(&self.b, &self.d);
        let (kb2, kd2) = self.rates(&axpy(&self.b, half, &kb1), &axpy(&self.d, half, &kd1));
        let (kb3, kd3) = self.rates(&axpy(&self.b, half, &kb2), &axpy(&self.d, half, &kd2));
        let (kb4, kd4) = self.rates(&axpy(&self.b, dt, &kb3), &axpy(&self.d, dt, &kd3));
        let sixth = dt / T::lit(6.0);
        let two = T::lit(2.0);
        let combine =
            |x: &mut [Vec3<T>], k1: &[Vec3<T>], k2: &[Vec3<T>], k3: &[Vec3<T>], k4: &[Vec3<T>]| {
                x.par_iter_mut().enumerate().for_each(|(n, x)| {
                    *x += (k1[n] + (k2[n] + k3[n]).scale(two) + k4[n]).scale(sixth);
                });
            };
        combine(&mut self.b, &kb1, &kb2, &kb3, &kb4);
        combine(&mut self.d, &kd1, &kd2, &kd3, &kd4);
        self.time = self.time + dt;
        Ok(())
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let max_abs = |v: Vec<T>| {
            v.into_iter()
                .fold(0.0f64, |m, x| m.max(x.to_f64_lossy().abs()))
        };
        let sum: f64 = self
            .b
            .par_iter()
            .zip(self.d.par_iter())
            .map(|(b, d)| (b.norm_sq() + d.norm_sq()).to_f64_lossy())
            .sum();
        let h = self.h.to_f64_lossy();
        Diagnostics {
            max_div_b: max_abs(self.divergence(&self.b)),
            max_div_d: max_abs(self.divergence(&self.d)),
            energy_proxy: sum * h * h * h / (8.0 * std::f64::consts::PI),
        }
    }
}

/// One evolution step returning the advanced lattice.
pub fn mbi_step<T: Real>(lattice: &FieldLattice<T>, dt: T) -> Result<FieldLattice<T>> {
    let mut next = lattice.clone();
    next.step(dt)?;
    Ok(next)
}

pub fn divergence_diagnostics<T: Real>(lattice: &FieldLattice<T>) -> Diagnostics {
    lattice.diagnostics()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_fixed_point() {
        let mut lat = FieldLattice::<f64>::new([4, 5, 6], 0.5, 1.0).unwrap();
        lat.step(0.2).unwrap();
        assert!(lat.b.iter().chain(&lat.d).all(|v| *v == Vec3::zero()));
        let diag = lat.diagnostics();
        assert_eq!(diag.energy_proxy, 0.0);
        assert_eq!(diag.max_div_b, 0.0);
    }

    #[test]
    fn cfl_rejected() {
        let mut lat = FieldLattice::<f64>::new([4, 4, 4], 1.0, 1.0).unwrap();
        assert!(matches!(lat.step(0.51), Err(Error::CflViolation { .. })));
        assert!(matches!(lat.step(-0.6), Err(Error::CflViolation { .. })));
        assert!(lat.step(0.5).is_ok());
    }

    #[test]
    fn non_periodic_rejected() {
        let mut lat = FieldLattice::<f64>::new([4, 4, 4], 1.0, 1.0).unwrap();
        lat.periodic[1] = false;
        assert!(lat.step(0.1).is_err());
    }

    #[test]
    fn bad_shapes() {
        assert!(FieldLattice::<f64>::new([2, 4, 4], 1.0, 1.0).is_err());
        assert!(FieldLattice::<f64>::new([4, 4, 4], 0.0, 1.0).is_err());
        assert!(FieldLattice::<f64>::new([4, 4, 4], 1.0, -1.0).is_err());
    }

    #[test]
    fn plane_wave_starts_divergence_free() {
        let lat = FieldLattice::<f64>::null_plane_wave([8, 8, 16], 0.25, 1.0, 2.0, 1).unwrap();
        let diag = lat.diagnostics();
        assert_eq!(diag.max_div_b, 0.0);
        assert_eq!(diag.max_div_d, 0.0);
        assert!(diag.energy_proxy > 0.0);
    }

    #[test]
    fn runs_in_f32() {
        let mut lat = FieldLattice::<f32>::null_plane_wave([4, 4, 8], 0.5, 1.0, 1.0, 1).unwrap();
        for _ in 0..10 {
            lat.step(0.2).unwrap();
        }
        assert!(lat.d.iter().all(|v| v.is_finite()));
    }
}
