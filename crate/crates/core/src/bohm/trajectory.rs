//! Guiding-equation trajectories `dr/dt = v(t, r)` by classical RK4 with
//! cubic Hermite dense output.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bohm::grid::{GridSpec, WaveFunction};
use crate::electrostatics::ChargeSign;
use crate::error::{Error, Result};
use crate::math_core::Vec3;
use crate::spectral::report::fmt17;

type V = Vec3<f64>;

pub trait VelocityField: Sync {
    fn velocity(&self, t: f64, r: V) -> Result<V>;
}

impl<F: Fn(f64, V) -> Result<V> + Sync> VelocityField for F {
    fn velocity(&self, t: f64, r: V) -> Result<V> {
        self(t, r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformVelocity(pub V);

impl VelocityField for UniformVelocity {
    fn velocity(&self, _: f64, _: V) -> Result<V> {
        Ok(self.0)
    }
}

fn node_error(t: f64, r: V) -> Error {
    Error::NodeApproach { t, position: r.0 }
}

/// `Im(∇Ψ/Ψ)` of an analytic Schrödinger wave function. Points where
/// `|Ψ|² ≤ min_density` count as nodes.
#[derive(Debug, Clone)]
pub struct SchrodingerGuide<W> {
    pub wave: W,
    pub min_density: f64,
}

impl<W: WaveFunction> VelocityField for SchrodingerGuide<W> {
    fn velocity(&self, t: f64, r: V) -> Result<V> {
        let j = self.wave.jet(t, r);
        if !(j.psi.norm_sqr() > self.min_density) {
            return Err(node_error(t, r));
        }
        Ok(V::new(
            (j.grad[0] / j.psi).im,
            (j.grad[1] / j.psi).im,
            (j.grad[2] / j.psi).im,
        ))
    }
}

/// Klein–Gordon velocity `j/ρ` of an analytic wave function in static
/// potentials.
pub struct KgGuide<W, A, B> {
    pub wave: W,
    pub alpha: f64,
    pub charge: ChargeSign,
    pub a0: A,
    pub a_vec: B,
}

impl<W, A, B> VelocityField for KgGuide<W, A, B>
where
    W: WaveFunction,
    A: Fn(V) -> f64 + Sync,
    B: Fn(V) -> V + Sync,
{
    fn velocity(&self, t: f64, r: V) -> Result<V> {
        let j = self.wave.jet(t, r);
        let sa = self.charge.value() * self.alpha;
        let pb = j.psi.conj();
        let r2 = j.psi.norm_sqr();
        let rho = -(pb * j.psi_t).im - sa * (self.a0)(r) * r2;
        if !(rho != 0.0 && rho.is_finite()) {
            return Err(node_error(t, r));
        }
        let av = (self.a_vec)(r);
        let cur = V::new(
            (pb * j.grad[0]).im,
            (pb * j.grad[1]).im,
            (pb * j.grad[2]).im,
        ) - av.scale(sa * r2);
        Ok(cur.scale(1.0 / rho))
    }
}

/// Velocity samples on a grid at several times; trilinear in space and
/// linear in time. Leaving the box or the time range is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedVelocity {
    pub spec: GridSpec,
    pub slices: Vec<(f64, Vec<V>)>,
}

impl GriddedVelocity {
    pub fn new(spec: GridSpec, slices: Vec<(f64, Vec<V>)>) -> Result<Self> {
        if slices.is_empty() || slices.iter().any(|(_, v)| v.len() != spec.len()) {
            return Err(Error::Shape(
                "every velocity slice must cover the grid".into(),
            ));
        }
        if slices.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Invalid(
                "velocity slices must be time-ordered".into(),
            ));
        }
        Ok(Self { spec, slices })
    }

    fn trilinear(&self, field: &[V], r: V) -> Option<V> {
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for a in 0..3 {
            let x = (r[a] - self.spec.origin[a]) / self.spec.h;
            let last = (self.spec.dims[a] - 1) as f64;
            if !(x >= 0.0 && x <= last) {
                return None;
            }
            let i = x.floor().min(last - 1.0);
            base[a] = i as usize;
            frac[a] = x - i;
        }
        let mut v = V::zero();
        for corner in 0..8 {
            let mut w = 1.0;
            let mut c = base;
            for a in 0..3 {
                if corner >> a & 1 == 1 {
                    c[a] += 1;
                    w *= frac[a];
                } else {
                    w *= 1.0 - frac[a];
                }
            }
            v += field[self.spec.index(c)].scale(w);
        }
        Some(v)
    }
}

impl VelocityField for GriddedVelocity {
    fn velocity(&self, t: f64, r: V) -> Result<V> {
        let out = || node_error(t, r);
        let k = self.slices.partition_point(|(ts, _)| *ts <= t);
        let (lo, hi) = match k {
            0 if self.slices[0].0 == t => (0, 0),
            0 => return Err(out()),
            k if k == self.slices.len() => {
                if self.slices[k - 1].0 == t {
                    (k - 1, k - 1)
                } else {
                    return Err(out());
                }
            }
            k => (k - 1, k),
        };
        let va = self.trilinear(&self.slices[lo].1, r).ok_or_else(out)?;
        if lo == hi {
            return Ok(va);
        }
        let vb = self.trilinear(&self.slices[hi].1, r).ok_or_else(out)?;
        let (ta, tb) = (self.slices[lo].0, self.slices[hi].0);
        let w = (t - ta) / (tb - ta);
        Ok(va.scale(1.0 - w) + vb.scale(w))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub position: Vec<V>,
    pub velocity: Vec<V>,
    /// Why the integration stopped early, if it did.
    pub truncated: Option<String>,
    pub max_speed: f64,
    /// Whether any recorded speed reached 1.
    pub superluminal: bool,
}

impl Trajectory {
    pub fn last_position(&self) -> V {
        *self.position.last().expect("trajectory has a start point")
    }

    /// Cubic Hermite interpolation of position and velocity at `t`, inside the
    /// integrated range.
    pub fn sample(&self, t: f64) -> Option<(V, V)> {
        let (first, last) = (self.t[0], *self.t.last()?);
        let (lo_t, hi_t) = (first.min(last), first.max(last));
        if !(t >= lo_t && t <= hi_t) {
            return None;
        }
        let forward = last >= first;
        let k = if forward {
            self.t.partition_point(|&s| s <= t)
        } else {
            self.t.partition_point(|&s| s >= t)
        };
        let i = k.clamp(1, self.t.len() - 1) - 1;
        if self.t.len() == 1 {
            return Some((self.position[0], self.velocity[0]));
        }
        let (t0, t1) = (self.t[i], self.t[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (p0, p1, v0, v1) = (
            self.position[i],
            self.position[i + 1],
            self.velocity[i],
            self.velocity[i + 1],
        );
        let (s2, s3) = (s * s, s * s * s);
        let pos = p0.scale(2.0 * s3 - 3.0 * s2 + 1.0)
            + v0.scale((s3 - 2.0 * s2 + s) * h)
            + p1.scale(-2.0 * s3 + 3.0 * s2)
            + v1.scale((s3 - s2) * h);
        let vel = (p0 - p1).scale((6.0 * s2 - 6.0 * s) / h)
            + v0.scale(3.0 * s2 - 4.0 * s + 1.0)
            + v1.scale(3.0 * s2 - 2.0 * s);
        Some((pos, vel))
    }

    /// Dense output at the given stamps; stamps outside the integrated range
    /// are skipped.
    pub fn at_stamps(&self, stamps: &[f64]) -> Vec<(f64, V, V)> {
        stamps
            .iter()
            .filter_map(|&t| self.sample(t).map(|(p, v)| (t, p, v)))
            .collect()
    }
}

/// Integrate from `(t0, r0)` to `t1` with RK4 steps of at most `|dt|` (the
/// step is shrunk so that `t1` is hit exactly). A failing field evaluation
/// ends the trajectory with a diagnostic instead of an error.
pub fn integrate_trajectory(
    field: &dyn VelocityField,
    r0: V,
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt.abs() > 0.0 && dt.is_finite() && t0.is_finite() && t1.is_finite()) {
        return Err(Error::Invalid(format!(
            "bad time stepping: t0={t0}, t1={t1}, dt={dt}"
        )));
    }
    if !r0.is_finite() {
        return Err(Error::Invalid("non-finite start point".into()));
    }
    let steps = ((t1 - t0).abs() / dt.abs()).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let mut traj = Trajectory {
        t: vec![t0],
        position: vec![r0],
        velocity: Vec::new(),
        truncated: None,
        max_speed: 0.0,
        superluminal: false,
    };
    let v0 = match field.velocity(t0, r0) {
        Ok(v) => v,
        Err(e) => {
            traj.velocity.push(V::new(f64::NAN, f64::NAN, f64::NAN));
            traj.truncated = Some(format!("start point: {e}"));
            return Ok(traj);
        }
    };
    traj.velocity.push(v0);
    let (mut t, mut r, mut v) = (t0, r0, v0);
    for step in 1..=steps {
        let stage = || -> Result<(V, V)> {
            let k1 = v;
            let k2 = field.velocity(t + 0.5 * h, r + k1.scale(0.5 * h))?;
            let k3 = field.velocity(t + 0.5 * h, r + k2.scale(0.5 * h))?;
            let k4 = field.velocity(t + h, r + k3.scale(h))?;
            let next = r + (k1 + (k2 + k3).scale(2.0) + k4).scale(h / 6.0);
            let t_next = if step == steps {
                t1
            } else {
                t0 + h * step as f64
            };
            Ok((next, field.velocity(t_next, next)?))
        };
        match stage() {
            Ok((next, vn)) => {
                t = if step == steps {
                    t1
                } else {
                    t0 + h * step as f64
                };
                r = next;
                v = vn;
                traj.t.push(t);
                traj.position.push(r);
                traj.velocity.push(v);
            }
            Err(e) => {
                traj.truncated = Some(format!("step {step} from t = {t}: {e}"));
                break;
            }
        }
    }
    traj.max_speed = traj.velocity.iter().map(|v| v.norm()).fold(0.0, f64::max);
    traj.superluminal = traj.max_speed >= 1.0;
    Ok(traj)
}

/// Independent trajectories in parallel.
pub fn integrate_many(
    field: &dyn VelocityField,
    starts: &[V],
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<Vec<Trajectory>> {
    starts
        .par_iter()
        .map(|&r0| integrate_trajectory(field, r0, t0, t1, dt))
        .collect()
}

pub const TRAJECTORY_CSV_HEADER: &str = "t,x,y,z,vx,vy,vz";

pub fn write_trajectory_csv(out: &mut impl Write, traj: &Trajectory) -> Result<()> {
    writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
    for ((t, p), v) in traj.t.iter().zip(&traj.position).zip(&traj.velocity) {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt17(*t),
            fmt17(p[0]),
            fmt17(p[1]),
            fmt17(p[2]),
            fmt17(v[0]),
            fmt17(v[1]),
            fmt17(v[2])
        )?;
    }
    Ok(())
}

/// `|Ψ|²` helper for equivariance checks.
pub fn density<W: WaveFunction>(wave: &W, t: f64, r: V) -> f64 {
    let psi: Complex64 = wave.jet(t, r).psi;
    psi.norm_sqr()
}
