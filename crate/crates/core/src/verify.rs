//! Acceptance checks, one runner per criterion. Each runner measures the
//! relevant quantity, compares it against a pinned tolerance and reports the
//! wall-clock time against its budget.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::aether3d::{ConstitutiveInputs, FieldLattice};
use crate::bohm::{
    continuity_residual, gauge_check, integrate_trajectory, velocity_kg, GridSpec, Harmonic,
    RadialState, SchrodingerGuide, Superposition, WaveGrid,
};
use crate::electrostatics::{
    a0_direct, a0_series_remainder, beta_born, born_self_potential, u_of_zeta, ModelParams,
    ALPHA_CODATA,
};
use crate::error::Result;
use crate::math_core::{coulomb_kernel_integral, Vec3};
use crate::spectral::{
    beta_upper_bound, coulomb_level, delta_e_bound, delta_e_first_order, kg_coulomb_level,
    kg_selfconsistent, radial_energy, validity_radius, Coulomb, PotentialTable, RadialGrid,
    RadialPotential, RadialProblem,
};

type V = Vec3<f64>;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Whether the measured values meet the tolerance, regardless of time.
    pub within_tolerance: bool,
    pub measured: String,
    pub tolerance: String,
    pub elapsed_s: f64,
    pub budget_s: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {}: {} (tolerance: {}; {:.2}s of {}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.measured,
            self.tolerance,
            self.elapsed_s,
            self.budget_s
        )
    }
}

/// `(id, title, runtime budget in seconds)`.
pub const CRITERIA: [(u8, &str, f64); 12] = [
    (1, "closed-form kernel identity", 1.0),
    (2, "leading asymptotics of A0", 5.0),
    (3, "series remainder exponent", 10.0),
    (4, "bounds on U", 10.0),
    (5, "hydrogen Coulomb benchmark", 30.0),
    (6, "Klein-Gordon self-consistency", 60.0),
    (7, "first-order perturbation bound", 60.0),
    (8, "beta upper bound", 1.0),
    (9, "Coulomb validity radius", 5.0),
    (10, "constitutive exactness on null waves", 30.0),
    (11, "divergence constraint preservation", 60.0),
    (12, "Bohmian velocity suite", 120.0),
];

struct Measured {
    ok: bool,
    measured: String,
    tolerance: String,
}

pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    let &(_, title, budget) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| crate::Error::Invalid(format!("unknown criterion {id}")))?;
    let start = Instant::now();
    let m = match id {
        1 => kernel_identity()?,
        2 => leading_asymptotics()?,
        3 => series_remainder()?,
        4 => u_bounds()?,
        5 => coulomb_benchmark()?,
        6 => kg_consistency()?,
        7 => perturbation_bound()?,
        8 => beta_bound()?,
        9 => coulomb_validity()?,
        10 => null_wave()?,
        11 => constraints()?,
        _ => bohm_suite()?,
    };
    let elapsed_s = start.elapsed().as_secs_f64();
    Ok(CriterionReport {
        id,
        title,
        passed: m.ok && elapsed_s < budget,
        within_tolerance: m.ok,
        measured: m.measured,
        tolerance: m.tolerance,
        elapsed_s,
        budget_s: budget,
    })
}

pub fn run_all() -> Vec<Result<CriterionReport>> {
    CRITERIA.iter().map(|c| run_criterion(c.0)).collect()
}

pub const KERNEL_IDENTITY_TOL: f64 = 1e-10;

fn kernel_identity() -> Result<Measured> {
    let v = coulomb_kernel_integral(1e-13)?.value;
    let err = (v - (1.0 - 2.0 * std::f64::consts::SQRT_2)).abs();
    Ok(Measured {
        ok: err <= KERNEL_IDENTITY_TOL,
        measured: format!("integral = {v:.16e}, |err| = {err:.3e}"),
        tolerance: format!("|err| <= {KERNEL_IDENTITY_TOL:e}"),
    })
}

fn leading_asymptotics() -> Result<Measured> {
    let beta = 1.0;
    let self_pot = born_self_potential(beta)?;
    let mut devs = Vec::new();
    for x in [1e2, 1e3, 1e4] {
        let r = x * beta;
        devs.push((x, r * (a0_direct(r, beta)? - self_pot) - 1.0));
    }
    let (x, dev) = devs[2];
    let bound = 2.0 * beta / (x * beta);
    let shrinking = devs.windows(2).all(|w| w[1].1.abs() < w[0].1.abs());
    Ok(Measured {
        ok: dev.abs() <= bound && shrinking,
        measured: format!(
            "r*(A0 - A_Born(0)) - 1 = {:.3e}, {:.3e}, {:.3e} at r/beta = 1e2, 1e3, 1e4",
            devs[0].1, devs[1].1, devs[2].1
        ),
        tolerance: format!("|dev| <= 2 beta/r = {bound:e} at r/beta = 1e4, decreasing"),
    })
}

pub const REMAINDER_EXPONENT: f64 = 9.0;
pub const REMAINDER_EXPONENT_TOL: f64 = 0.3;

fn series_remainder() -> Result<Measured> {
    let n = 21;
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let x = 10f64.powf(-2.0 + 2.0 * i as f64 / (n - 1) as f64);
        pts.push((x.ln(), a0_series_remainder(x, 1.0)?.abs().ln()));
    }
    let slope = least_squares_slope(&pts);
    Ok(Measured {
        ok: (slope - REMAINDER_EXPONENT).abs() <= REMAINDER_EXPONENT_TOL,
        measured: format!("log-log slope over r/beta in [1e-2, 1] = {slope:.4}"),
        tolerance: format!("{REMAINDER_EXPONENT} +- {REMAINDER_EXPONENT_TOL}"),
    })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn u_bounds() -> Result<Measured> {
    let mut ok = true;
    let mut small = Vec::new();
    for z in [1e-2, 1e-3, 1e-4] {
        let u = u_of_zeta(z)?;
        ok &= -2.0 * z < u && u < 20.0 * z.powi(4);
        small.push(format!("U({z:e}) = {u:.6e}"));
    }
    let mut max_abs = 0.0f64;
    for i in 0..=320 {
        let z = 10f64.powf(-4.0 + 8.0 * i as f64 / 320.0);
        max_abs = max_abs.max(u_of_zeta(z)?.abs());
    }
    let cap = 2.0 * std::f64::consts::SQRT_2;
    ok &= max_abs <= cap;
    Ok(Measured {
        ok,
        measured: format!(
            "{}; max |U| on [1e-4, 1e4] = {max_abs:.6}",
            small.join(", ")
        ),
        tolerance: format!("-2 zeta < U < 20 zeta^4 and |U| <= {cap:.6}"),
    })
}

pub const COULOMB_LEVEL_TOL: f64 = 1e-8;

fn coulomb_benchmark() -> Result<Measured> {
    let mut worst = 0.0f64;
    for n in 0..5 {
        let p = RadialProblem::schrodinger(&Coulomb, ALPHA_CODATA, 0, n);
        let e = radial_energy(&p, n)?;
        let exact = coulomb_level(ALPHA_CODATA, 0, n);
        worst = worst.max(((e - exact) / exact).abs());
    }
    Ok(Measured {
        ok: worst <= COULOMB_LEVEL_TOL,
        measured: format!("max relative error of E_0..E_4 = {worst:.3e}"),
        tolerance: format!("{COULOMB_LEVEL_TOL:e} relative"),
    })
}

pub const KG_LEVEL_TOL: f64 = 1e-8;

fn kg_consistency() -> Result<Measured> {
    let params = ModelParams::new(ALPHA_CODATA, 1e-6 * ALPHA_CODATA)?;
    let s = kg_selfconsistent(&params, 0, 0)?;
    let eps = s.epsilon_bar.unwrap_or(f64::NAN);
    let exact = kg_coulomb_level(ALPHA_CODATA, 0, 0)?;
    let rel = ((eps - exact) / exact).abs();
    Ok(Measured {
        ok: rel <= KG_LEVEL_TOL && eps > 0.0 && eps < 1.0,
        measured: format!("epsilon_bar = {eps:.16}, closed form {exact:.16}, rel = {rel:.3e}"),
        tolerance: format!("{KG_LEVEL_TOL:e} relative"),
    })
}

pub const PERTURBATION_AGREEMENT: f64 = 0.10;

fn perturbation_bound() -> Result<Measured> {
    let a = ALPHA_CODATA;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, beta) in [
        ("beta_Born", beta_born(a)),
        ("alpha", a),
        ("alpha/10", a / 10.0),
    ] {
        let de = delta_e_first_order(&ModelParams::new(a, beta)?)?;
        let ratio = de.abs() / delta_e_bound(a, beta, 1.0);
        ok &= ratio <= 1.0;
        parts.push(format!("|dE|/(4a^3 b) = {ratio:.4} at {name}"));
    }
    let beta = 1e-4 * a;
    let table = PotentialTable::shared(beta)?;
    let grid = RadialGrid::for_state(a, 1, table.r_min_hint());
    let e_cbi = radial_energy(
        &RadialProblem::schrodinger(table.as_ref(), a, 0, 0).with_grid(grid),
        0,
    )?;
    let e_c = radial_energy(
        &RadialProblem::schrodinger(&Coulomb, a, 0, 0).with_grid(grid),
        0,
    )?;
    let first = delta_e_first_order(&ModelParams::new(a, beta)?)?;
    let ratio = (e_cbi - e_c) / first;
    ok &= (ratio - 1.0).abs() <= PERTURBATION_AGREEMENT;
    parts.push(format!(
        "eigenvalue difference / first order = {ratio:.5} at 1e-4 alpha"
    ));
    Ok(Measured {
        ok,
        measured: parts.join(", "),
        tolerance: format!("ratio <= 1 (K = 1); agreement within {PERTURBATION_AGREEMENT}"),
    })
}

fn beta_bound() -> Result<Measured> {
    let a = ALPHA_CODATA;
    let full = beta_upper_bound(1.0, 1.0, a)?;
    let strict = beta_upper_bound(0.01, 1.0, a)?;
    let ok = full.beta_max == a / 16.0
        && full.rounded_ratio == 0.1
        && strict.rounded_ratio == 1e-3
        && strict.beta_max < full.beta_max;
    Ok(Measured {
        ok,
        measured: format!(
            "fraction 1: beta_max = {:.6e} = alpha/16 (~{:e} alpha); fraction 0.01: beta_max = {:.6e} (~{:e} alpha); beta_Born within bound: {}",
            full.beta_max, full.rounded_ratio, strict.beta_max, strict.rounded_ratio, full.born_within_bound
        ),
        tolerance: "alpha/16 rounding to 1e-1 alpha; 0.01 rounding to 1e-3 alpha".into(),
    })
}

pub const VALIDITY_RADIUS_WINDOW: (f64, f64) = (150.0, 250.0);

fn coulomb_validity() -> Result<Measured> {
    let v = validity_radius(0.01, 1.0)?;
    let (lo, hi) = VALIDITY_RADIUS_WINDOW;
    Ok(Measured {
        ok: v.radius >= lo && v.radius <= hi,
        measured: format!(
            "r*/beta = {:.6} (leading-order bound 2 beta/rel_err = {})",
            v.radius, v.leading_order_radius
        ),
        tolerance: format!("r*/beta in [{lo}, {hi}]"),
    })
}

pub const NULL_WAVE_STEP_TOL: f64 = 1e-12;

fn null_wave() -> Result<Measured> {
    let mut pointwise = 0.0f64;
    for a in [1e-3, 0.5, 1.0, 7.0, 300.0] {
        let d = V::new(a, 0.0, 0.0);
        let b = V::new(0.0, a, 0.0);
        let (e, h) = ConstitutiveInputs::new(b, d, 1.0).evaluate();
        pointwise = pointwise
            .max((e - d).max_abs() / a)
            .max((h - b).max_abs() / a);
    }
    let eps_ok = pointwise <= 4.0 * f64::EPSILON;

    let dims = [64, 64, 64];
    let mut nonlinear = FieldLattice::<f64>::null_plane_wave(dims, 0.25, 1.0, 1.0, 3)?;
    let mut linear = nonlinear.clone();
    linear.beta = 0.0;
    let steps = 10;
    let mut worst_per_step = 0.0f64;
    let mut prev = 0.0;
    for _ in 0..steps {
        nonlinear.step(0.1)?;
        linear.step(0.1)?;
        let dev = max_diff(&nonlinear.b, &linear.b).max(max_diff(&nonlinear.d, &linear.d));
        worst_per_step = worst_per_step.max(dev - prev);
        prev = dev;
    }
    Ok(Measured {
        ok: eps_ok && worst_per_step <= NULL_WAVE_STEP_TOL,
        measured: format!(
            "max |E-D|/a, |H-B|/a = {pointwise:.3e}; lattice 64^3 deviation growth per step <= {worst_per_step:.3e} (total {prev:.3e} after {steps} steps)"
        ),
        tolerance: format!("pointwise <= 4 eps; per step <= {NULL_WAVE_STEP_TOL:e}"),
    })
}

fn max_diff(a: &[V], b: &[V]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).max_abs())
        .fold(0.0, f64::max)
}

pub const DIVERGENCE_TOL: f64 = 1e-12;

fn constraints() -> Result<Measured> {
    let dims = [16, 16, 16];
    let n: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_611);
    let mut potential = || -> Vec<V> {
        (0..n)
            .map(|_| {
                V::new(
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                )
            })
            .collect()
    };
    let (ab, ad) = (potential(), potential());
    let mut lat = FieldLattice::<f64>::from_potentials(dims, 1.0, 1.0, &ab, &ad)?;
    for _ in 0..1000 {
        lat.step(0.25)?;
    }
    let d = lat.diagnostics();
    Ok(Measured {
        ok: d.max_div_b <= DIVERGENCE_TOL && d.max_div_d <= DIVERGENCE_TOL,
        measured: format!(
            "after 1000 steps on 16^3: max|div B| = {:.3e}, max|div D| = {:.3e}, energy proxy {:.6e}",
            d.max_div_b, d.max_div_d, d.energy_proxy
        ),
        tolerance: format!("<= {DIVERGENCE_TOL:e}"),
    })
}

pub const STATIONARY_VELOCITY_TOL: f64 = 1e-12;
pub const GAUGE_TOL: f64 = 1e-10;
pub const CONTINUITY_ORDER: f64 = 2.0;
pub const CONTINUITY_ORDER_TOL: f64 = 0.3;
pub const TRAJECTORY_ORDER: f64 = 4.0;
pub const TRAJECTORY_ORDER_TOL: f64 = 0.3;

fn bohm_suite() -> Result<Measured> {
    let a = ALPHA_CODATA;
    let s1 = RadialState::klein_gordon(a, Harmonic::S)?;
    let p0 = RadialState::klein_gordon(a, Harmonic::P0)?;
    let lo = V::new(0.2, 0.2, 0.2).scale(1.0 / a);

    // stationary state on a 64³ box
    let spec = GridSpec::cube(lo, 0.6 / a, 64)?;
    let stationary = WaveGrid::coulomb(spec, 123.0, a, &s1);
    let v_stat = velocity_kg(&stationary)?.max_speed;

    // static gauge bump on the superposition
    let sup = Superposition::equal(s1, p0);
    let moving = WaveGrid::coulomb(spec, 5.0e3, a, &sup);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let centre = lo
        + V::new(
            rng.gen_range(0.2..0.4),
            rng.gen_range(0.2..0.4),
            rng.gen_range(0.2..0.4),
        )
        .scale(1.0 / a);
    let (amp, width) = (rng.gen_range(1.0..5.0), rng.gen_range(0.05..0.15) / a);
    let upsilon: Vec<f64> = (0..spec.len())
        .map(|n| amp * (-(spec.position(n) - centre).norm_sq() / (width * width)).exp())
        .collect();
    let gauge = gauge_check(&moving, &upsilon)?.max(gauge_check(&stationary, &upsilon)?);

    // continuity residual under refinement, on a fixed inner box
    let (inner_lo, inner_hi) = (
        V::new(0.35, 0.35, 0.35).scale(1.0 / a),
        V::new(0.65, 0.65, 0.65).scale(1.0 / a),
    );
    let mut pts = Vec::new();
    for n in [17, 33, 65] {
        let spec = GridSpec::cube(lo, 0.6 / a, n)?;
        let dt = spec.h / a;
        let slices: Vec<WaveGrid> = (-1..=1)
            .map(|k| WaveGrid::coulomb(spec, 1.0e4 + k as f64 * dt, a, &sup))
            .collect();
        let r = continuity_residual(&slices)?.max_abs_within(inner_lo, inner_hi);
        pts.push((spec.h.ln(), r.ln()));
    }
    let cont_order = least_squares_slope(&pts);

    // trajectory step convergence on the Schrödinger 1s–2p superposition
    let guide = SchrodingerGuide {
        wave: Superposition::equal(
            RadialState::schrodinger(a, Harmonic::S),
            RadialState::schrodinger(a, Harmonic::PPlus),
        ),
        min_density: 0.0,
    };
    let period = guide.wave.beat_period().unwrap_or(1.0);
    let r0 = V::new(1.0, 0.5, 0.3).scale(1.0 / a);
    let reference = integrate_trajectory(&guide, r0, 0.0, period, period / 6400.0)?;
    let mut errs = Vec::new();
    for k in [100.0, 200.0] {
        let tr = integrate_trajectory(&guide, r0, 0.0, period, period / k)?;
        errs.push((tr.last_position() - reference.last_position()).norm());
    }
    let traj_order = (errs[0] / errs[1]).log2();

    let ok = v_stat <= STATIONARY_VELOCITY_TOL
        && gauge <= GAUGE_TOL
        && (cont_order - CONTINUITY_ORDER).abs() <= CONTINUITY_ORDER_TOL
        && (traj_order - TRAJECTORY_ORDER).abs() <= TRAJECTORY_ORDER_TOL
        && reference.truncated.is_none();
    Ok(Measured {
        ok,
        measured: format!(
            "stationary max|v| = {v_stat:.3e}; gauge deviation = {gauge:.3e}; continuity order = {cont_order:.3}; trajectory order = {traj_order:.3}"
        ),
        tolerance: format!(
            "|v| <= {STATIONARY_VELOCITY_TOL:e}; gauge <= {GAUGE_TOL:e}; orders {CONTINUITY_ORDER} +- {CONTINUITY_ORDER_TOL}, {TRAJECTORY_ORDER} +- {TRAJECTORY_ORDER_TOL}"
        ),
    })
}
