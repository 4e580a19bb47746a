//! Radial bound states by Numerov shooting on a logarithmic grid.
//!
//! With `x = ln r` and `R(r) = r^{-1/2} w(x)` the radial equation becomes
//! `w'' = [2r²(V − E) + (ℓ + ½)²] w`, free of first derivatives. The
//! eigenvalue with `k` nodes is bracketed by counting sign changes of the
//! outward solution (Dirichlet condition at `r_max`) and bisected to machine
//! precision. The eigenfunction is assembled from outward and inward
//! integrations matched at the outermost turning point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::potential::RadialPotential;

/// Which radial potential is built from `Ā₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PotentialForm {
    /// `V = −α Ā₀`.
    Schrodinger,
    /// `V = −ε̄ α Ā₀ − ½ α² Ā₀²`.
    KleinGordon { epsilon_bar: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    /// Step in `ln r`.
    pub step: f64,
}

/// Default step in `ln r`.
pub const DEFAULT_LOG_STEP: f64 = 2e-3;

impl RadialGrid {
    /// Grid wide enough for states with principal number up to `n` (counted
    /// from 1), tails below `1e-12` of the peak.
    pub fn for_state(alpha: f64, n: usize, r_min: f64) -> Self {
        let n = n.max(1) as f64;
        Self {
            r_min,
            r_max: n * (40.0 + 4.0 * n) / alpha,
            step: DEFAULT_LOG_STEP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::Invalid(format!(
                "radial grid needs 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if !(self.step > 0.0 && self.step < 0.5) {
            return Err(Error::domain("grid step", self.step, "(0, 0.5)"));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        let (x0, x1) = (self.r_min.ln(), self.r_max.ln());
        let n = ((x1 - x0) / self.step).ceil() as usize + 1;
        let h = (x1 - x0) / (n - 1) as f64;
        (0..n).map(|i| (x0 + h * i as f64).exp()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct RadialProblem<'a> {
    pub potential: &'a dyn RadialPotential,
    pub ell: usize,
    pub alpha: f64,
    pub form: PotentialForm,
    pub grid: RadialGrid,
}

impl<'a> RadialProblem<'a> {
    pub fn schrodinger(
        potential: &'a dyn RadialPotential,
        alpha: f64,
        ell: usize,
        nodes: usize,
    ) -> Self {
        Self {
            potential,
            ell,
            alpha,
            form: PotentialForm::Schrodinger,
            grid: RadialGrid::for_state(alpha, nodes + ell + 1, potential.r_min_hint()),
        }
    }

    pub fn klein_gordon(
        potential: &'a dyn RadialPotential,
        alpha: f64,
        epsilon_bar: f64,
        ell: usize,
        nodes: usize,
    ) -> Self {
        Self {
            form: PotentialForm::KleinGordon { epsilon_bar },
            ..Self::schrodinger(potential, alpha, ell, nodes)
        }
    }

    pub fn with_grid(mut self, grid: RadialGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::domain("alpha", self.alpha, "(0, inf)"));
        }
        if let PotentialForm::KleinGordon { epsilon_bar } = self.form {
            if !(0.0..=1.0).contains(&epsilon_bar) {
                return Err(Error::domain("epsilon_bar", epsilon_bar, "[0, 1]"));
            }
        }
        self.grid.validate()
    }

    pub fn potential_at(&self, r: f64) -> f64 {
        let a = self.potential.abar0(r);
        match self.form {
            PotentialForm::Schrodinger => -self.alpha * a,
            PotentialForm::KleinGordon { epsilon_bar } => {
                -epsilon_bar * self.alpha * a - 0.5 * self.alpha * self.alpha * a * a
            }
        }
    }
}

/// A normalized bound state. `u = r R(r)` is the reduced radial function,
/// with `∫ u² dr = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub energy: f64,
    pub epsilon_bar: Option<f64>,
    pub ell: usize,
    pub nodes: usize,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub normalized: bool,
    /// `|∫ u² dr − 1|` evaluated with Simpson's rule after trapezoidal
    /// normalization.
    pub norm_residual: f64,
}

/// Precomputed `r` and `2r²V + (ℓ+½)²` on the grid.
struct Discretized {
    r: Vec<f64>,
    h: f64,
    /// `2 r² V + (ℓ + ½)²`
    base: Vec<f64>,
    r2: Vec<f64>,
}

const RESCALE: f64 = 1e150;
/// `h² g / 12` beyond which the outward sweep stops counting nodes.
const STIFF: f64 = 0.5;

impl Discretized {
    fn new(p: &RadialProblem) -> Result<Self> {
        p.validate()?;
        let r = p.grid.radii();
        let h = (r[1] / r[0]).ln();
        let lh = (p.ell as f64 + 0.5).powi(2);
        let r2: Vec<f64> = r.iter().map(|r| 2.0 * r * r).collect();
        let base = r
            .iter()
            .zip(&r2)
            .map(|(&r, &r2)| r2 * p.potential_at(r) + lh)
            .collect::<Vec<_>>();
        if base.iter().any(|b| !b.is_finite()) {
            return Err(Error::Invalid(
                "potential is not finite on the radial grid".into(),
            ));
        }
        Ok(Self { r, h, base, r2 })
    }

    fn g(&self, i: usize, e: f64) -> f64 {
        self.base[i] - self.r2[i] * e
    }

    fn start(&self, e: f64, w: &mut [f64]) {
        let s = self.g(0, e).max(1e-30).sqrt();
        w[0] = 1.0;
        w[1] = (s * self.h).exp();
    }

    /// Nodes of the outward solution on the open grid interval.
    fn count_nodes(&self, e: f64) -> usize {
        let n = self.r.len();
        let c = self.h * self.h / 12.0;
        let (mut w0, mut w1) = (1.0, (self.g(0, e).max(1e-30).sqrt() * self.h).exp());
        let (mut f0, mut f1) = (1.0 - c * self.g(0, e), 1.0 - c * self.g(1, e));
        let mut nodes = 0;
        for i in 2..n {
            let g = self.g(i, e);
            if c * g > STIFF {
                // deep in the forbidden region: the solution only grows from here
                break;
            }
            let f2 = 1.0 - c * g;
            let mut w2 = ((12.0 - 10.0 * f1) * w1 - f0 * w0) / f2;
            if w2 == 0.0 {
                w2 = -w1 * f64::MIN_POSITIVE;
            }
            if (w2 < 0.0) != (w1 < 0.0) {
                nodes += 1;
            }
            if w2.abs() > RESCALE {
                w1 /= RESCALE;
                w2 /= RESCALE;
            }
            (w0, w1, f0, f1) = (w1, w2, f1, f2);
        }
        nodes
    }

    fn numerov(
        &self,
        i_prev: usize,
        i_cur: usize,
        i_next: usize,
        e: f64,
        w_prev: f64,
        w_cur: f64,
    ) -> f64 {
        let c = self.h * self.h / 12.0;
        let f0 = 1.0 - c * self.g(i_prev, e);
        let f1 = 1.0 - c * self.g(i_cur, e);
        let f2 = 1.0 - c * self.g(i_next, e);
        ((12.0 - 10.0 * f1) * w_cur - f0 * w_prev) / f2
    }
}

/// Lowest energy bracket searched.
pub const ENERGY_FLOOR: f64 = -0.5;

/// Energy of the state with `target_nodes` nodes, without the eigenfunction.
pub fn radial_energy(problem: &RadialProblem, target_nodes: usize) -> Result<f64> {
    let d = Discretized::new(problem)?;
    bisect_energy(&d, target_nodes)
}

fn bisect_energy(d: &Discretized, k: usize) -> Result<f64> {
    let (mut lo, mut hi) = (ENERGY_FLOOR, 0.0);
    if d.count_nodes(lo) > k || d.count_nodes(hi) <= k {
        return Err(Error::NoBoundState { nodes: k, lo, hi });
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if d.count_nodes(mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bound state with `target_nodes` radial nodes, normalized.
pub fn solve_radial(problem: &RadialProblem, target_nodes: usize) -> Result<Eigenpair> {
    let d = Discretized::new(problem)?;
    let e = bisect_energy(&d, target_nodes)?;
    let n = d.r.len();

    // outermost classical turning point
    let turn = (1..n - 1)
        .rev()
        .find(|&i| d.g(i, e) < 0.0)
        .unwrap_or(n / 2)
        .clamp(2, n - 3);

    let mut out = vec![0.0; n];
    d.start(e, &mut out);
    for i in 1..turn {
        out[i + 1] = d.numerov(i - 1, i, i + 1, e, out[i - 1], out[i]);
        if out[i + 1].abs() > RESCALE {
            out[..=i + 1].iter_mut().for_each(|v| *v /= RESCALE);
        }
    }

    let mut inw = vec![0.0; n];
    inw[n - 2] = 1e-200;
    for i in (turn..n - 2).rev() {
        inw[i] = d.numerov(i + 2, i + 1, i, e, inw[i + 2], inw[i + 1]);
        if inw[i].abs() > RESCALE {
            inw[i..].iter_mut().for_each(|v| *v /= RESCALE);
        }
    }

    if inw[turn] == 0.0 || out[turn] == 0.0 {
        return Err(Error::NoSolution(
            "eigenfunction vanishes at the matching point".into(),
        ));
    }
    let ratio = out[turn] / inw[turn];
    let mut w: Vec<f64> = out[..turn].to_vec();
    w.extend(inw[turn..].iter().map(|v| v * ratio));

    // ∫ u² dr = ∫ r² w² dx
    let dens: Vec<f64> = w.iter().zip(&d.r).map(|(w, r)| (r * w).powi(2)).collect();
    let trap = d.h * (dens.iter().sum::<f64>() - 0.5 * (dens[0] + dens[n - 1]));
    if !(trap > 0.0 && trap.is_finite()) {
        return Err(Error::NoSolution("eigenfunction norm is not finite".into()));
    }
    let inv = 1.0 / trap.sqrt();
    let simpson = simpson(&dens, d.h) / trap;
    let u = w
        .iter()
        .zip(&d.r)
        .map(|(w, r)| w * r.sqrt() * inv)
        .collect();
    Ok(Eigenpair {
        energy: e,
        epsilon_bar: match problem.form {
            PotentialForm::KleinGordon { epsilon_bar } => Some(epsilon_bar),
            PotentialForm::Schrodinger => None,
        },
        ell: problem.ell,
        nodes: target_nodes,
        r: d.r,
        u,
        normalized: true,
        norm_residual: (simpson - 1.0).abs(),
    })
}

fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    let m = if n.is_multiple_of(2) { n - 1 } else { n };
    let mut s = f[0] + f[m - 1];
    for (i, v) in f.iter().enumerate().take(m - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    let mut total = s * h / 3.0;
    if m < n {
        total += 0.5 * h * (f[n - 2] + f[n - 1]);
    }
    total
}

/// Closed-form Klein–Gordon–Coulomb level
/// `ε = [1 + α²/(n_r + ½ + sqrt((ℓ+½)² − α²))²]^{-1/2}`.
pub fn kg_coulomb_level(alpha: f64, ell: usize, nodes: usize) -> Result<f64> {
    let disc = (ell as f64 + 0.5).powi(2) - alpha * alpha;
    if !(disc >= 0.0) || !(alpha > 0.0) {
        return Err(Error::domain("alpha", alpha, "(0, ell + 1/2]"));
    }
    let nu = nodes as f64 + 0.5 + disc.sqrt();
    Ok(1.0 / (1.0 + (alpha / nu).powi(2)).sqrt())
}

/// Schrödinger–Coulomb level `−α²/(2(n_r + ℓ + 1)²)`.
pub fn coulomb_level(alpha: f64, ell: usize, nodes: usize) -> f64 {
    -alpha * alpha / (2.0 * ((nodes + ell + 1) as f64).powi(2))
}
