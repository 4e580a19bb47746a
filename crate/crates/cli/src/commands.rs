use std::fmt;
use std::path::PathBuf;

use mbi_core::aether3d::write_snapshot;
use mbi_core::bohm::{
    density, integrate_trajectory, Harmonic, KgGuide, RadialState, SchrodingerGuide, Superposition,
    Trajectory, VelocityField,
};
use mbi_core::electrostatics::{
    a0_asymptotic, a0_direct, a0_series, abar0, beta_born, u_of_zeta, u_zero_locate, ChargeSign,
    ModelParams, SERIES_RADIUS,
};
use mbi_core::spectral::{
    beta_upper_bound, coulomb_level, delta_e_bound, delta_e_first_order, kg_coulomb_level,
    kg_selfconsistent_with, solve_radial, state_label, validity_radius, Coulomb, PotentialTable,
    RadialGrid, RadialPotential, RadialProblem,
};
use mbi_core::verify::{run_criterion, CRITERIA};
use mbi_core::{FieldLattice, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Command, ConfigError, RunConfig};
use crate::table::{ensure_dir, write_table, Cell, Table};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("cannot write output: {e}"))
    }
}

impl From<mbi_core::Error> for CliError {
    fn from(e: mbi_core::Error) -> Self {
        use mbi_core::Error as E;
        match e {
            E::Io(io) => io.into(),
            E::Domain { .. } | E::Invalid(_) | E::Shape(_) | E::CflViolation { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Run one subcommand, returning the files written.
pub fn run(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    ensure_dir(&cfg.out)?;
    match cfg.command {
        Command::Potential => potential(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Perturb => perturb(cfg),
        Command::BetaBound => beta_bound(cfg),
        Command::Fields => fields(cfg),
        Command::Trajectory => trajectory(cfg),
        Command::Verify => verify(cfg),
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn positive_range(cfg: &RunConfig, lo: &str, hi: &str) -> CliResult<(f64, f64)> {
    let (a, b): (f64, f64) = (cfg.get(lo)?, cfg.get(hi)?);
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(CliError::Config(format!(
            "need 0 < {lo} < {hi}, got {a} and {b}"
        )));
    }
    Ok((a, b))
}

fn potential(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let beta = cfg.params.beta;
    let (lo, hi) = positive_range(cfg, "r_min", "r_max")?;
    let mut t = Table::new(&[
        "r",
        "r_over_beta",
        "a0_direct",
        "abar0",
        "u",
        "a0_series5",
        "a0_asymptotic",
        "coulomb_rel_dev",
    ]);
    for x in log_space(lo, hi, cfg.grid) {
        let r = x * beta;
        let abar = abar0(r, beta)?;
        let series = if x < SERIES_RADIUS {
            Some(a0_series(r, beta, 5)?)
        } else {
            None
        };
        t.push(vec![
            r.into(),
            x.into(),
            a0_direct(r, beta)?.into(),
            abar.into(),
            u_of_zeta(1.0 / x)?.into(),
            series.into(),
            a0_asymptotic(r, beta)?.into(),
            (r * abar - 1.0).abs().into(),
        ]);
    }
    let v = validity_radius(cfg.tol, beta)?;
    let root = u_zero_locate()?.root();
    let mut s = Table::new(&[
        "rel_err",
        "beta",
        "validity_radius",
        "validity_radius_over_beta",
        "leading_order_radius_over_beta",
        "u_sign_change_zeta",
    ]);
    s.push(vec![
        cfg.tol.into(),
        beta.into(),
        v.radius.into(),
        (v.radius / beta).into(),
        (v.leading_order_radius / beta).into(),
        root.into(),
    ]);
    Ok(vec![
        write_table(cfg, "potential", &t)?,
        write_table(cfg, "potential_summary", &s)?,
    ])
}

fn spectrum(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let ModelParams { alpha, beta, .. } = cfg.params;
    let levels: usize = cfg.get("levels")?;
    let ell: usize = cfg.get("ell")?;
    let kg = match cfg.get_str("kg") {
        "true" => true,
        "false" => false,
        other => {
            return Err(CliError::Config(format!(
                "kg must be true or false, got {other:?}"
            )))
        }
    };
    if levels == 0 {
        return Err(CliError::Config("levels must be positive".into()));
    }
    let table = PotentialTable::shared(beta)?;
    let grid = RadialGrid {
        step: 1.0 / cfg.grid as f64,
        ..RadialGrid::for_state(alpha, levels + ell, table.r_min_hint())
    };
    let mut t = Table::new(&[
        "label",
        "model",
        "ell",
        "nodes",
        "energy",
        "epsilon_bar",
        "coulomb_reference",
        "norm_residual",
    ]);
    for nodes in 0..levels {
        let label = state_label(ell, nodes);
        let exact = coulomb_level(alpha, ell, nodes);
        for (model, pot) in [
            ("coulomb", &Coulomb as &dyn RadialPotential),
            ("cbi", table.as_ref()),
        ] {
            let e = solve_radial(
                &RadialProblem::schrodinger(pot, alpha, ell, nodes).with_grid(grid),
                nodes,
            )?;
            t.push(vec![
                label.clone().into(),
                model.into(),
                ell.into(),
                nodes.into(),
                e.energy.into(),
                Cell::Missing,
                exact.into(),
                e.norm_residual.into(),
            ]);
        }
        if kg {
            let e = kg_selfconsistent_with(table.as_ref(), alpha, ell, nodes, grid)?;
            let eps_c = kg_coulomb_level(alpha, ell, nodes)?;
            t.push(vec![
                label.into(),
                "kg-cbi".into(),
                ell.into(),
                nodes.into(),
                e.energy.into(),
                e.epsilon_bar.into(),
                (0.5 * (eps_c * eps_c - 1.0)).into(),
                e.norm_residual.into(),
            ]);
        }
    }
    Ok(vec![write_table(cfg, "spectrum", &t)?])
}

fn perturb(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let alpha = cfg.params.alpha;
    let (lo, hi) = positive_range(cfg, "beta_min", "beta_max")?;
    let mut t = Table::new(&[
        "beta",
        "beta_over_alpha",
        "delta_e0",
        "bound",
        "ratio_to_bound",
    ]);
    for x in log_space(lo, hi, cfg.grid) {
        let beta = x * alpha;
        let de = delta_e_first_order(&ModelParams::new(alpha, beta)?)?;
        let bound = delta_e_bound(alpha, beta, 1.0);
        t.push(vec![
            beta.into(),
            x.into(),
            de.into(),
            bound.into(),
            (de.abs() / bound).into(),
        ]);
    }
    Ok(vec![write_table(cfg, "perturb", &t)?])
}

fn beta_bound(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let alpha = cfg.params.alpha;
    let k: f64 = cfg.get("k")?;
    let mut t = Table::new(&[
        "allowed_fraction",
        "k",
        "beta_max",
        "beta_max_over_alpha",
        "rounded_ratio",
        "beta_born",
        "born_within_bound",
    ]);
    for f in cfg.get_list("fractions")? {
        let b = beta_upper_bound(f, k, alpha)?;
        t.push(vec![
            f.into(),
            k.into(),
            b.beta_max.into(),
            (b.beta_max / alpha).into(),
            b.rounded_ratio.into(),
            beta_born(alpha).into(),
            b.born_within_bound.into(),
        ]);
    }
    Ok(vec![write_table(cfg, "beta_bound", &t)?])
}

fn fields(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let n = cfg.grid;
    let steps: usize = cfg.get("steps")?;
    let every: usize = cfg.get("every")?;
    let dt: f64 = cfg.get("dt")?;
    let seed: u64 = cfg.get("seed")?;
    if every == 0 {
        return Err(CliError::Config("every must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = |count: usize| -> Vec<Vec3> {
        (0..count)
            .map(|_| {
                Vec3::new(
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                )
            })
            .collect()
    };
    let count = n * n * n;
    let (ab, ad) = (random(count), random(count));
    let mut lat = FieldLattice::from_potentials([n, n, n], 1.0, cfg.params.beta, &ab, &ad)?;
    let mut t = Table::new(&["step", "time", "max_div_b", "max_div_d", "energy_proxy"]);
    let mut record = |step: usize, lat: &FieldLattice| {
        let d = lat.diagnostics();
        t.push(vec![
            step.into(),
            lat.time.into(),
            d.max_div_b.into(),
            d.max_div_d.into(),
            d.energy_proxy.into(),
        ]);
    };
    record(0, &lat);
    for s in 1..=steps {
        lat.step(dt)?;
        if s % every == 0 || s == steps {
            record(s, &lat);
        }
    }
    let base = cfg.out.join("fields_snapshot");
    let meta = write_snapshot(&lat, &base, Some(&cfg.hash()))?;
    Ok(vec![
        write_table(cfg, "fields", &t)?,
        cfg.out.join(&meta.binary_file),
        base.with_extension("json"),
    ])
}

fn trajectory(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let alpha = cfg.params.alpha;
    let periods: f64 = cfg.get("periods")?;
    if !(periods > 0.0 && periods.is_finite()) {
        return Err(CliError::Config(format!(
            "periods must be positive, got {periods}"
        )));
    }
    let starts: Vec<Vec3> = cfg
        .get_points("starts")?
        .into_iter()
        .map(|p| Vec3::new(p[0], p[1], p[2]).scale(1.0 / alpha))
        .collect();

    let (wave, kg) = match cfg.get_str("guide") {
        "schrodinger" => (
            Superposition::equal(
                RadialState::schrodinger(alpha, Harmonic::S),
                RadialState::schrodinger(alpha, Harmonic::PPlus),
            ),
            false,
        ),
        "klein-gordon" => (
            Superposition::equal(
                RadialState::klein_gordon(alpha, Harmonic::S)?,
                RadialState::klein_gordon(alpha, Harmonic::PPlus)?,
            ),
            true,
        ),
        other => {
            return Err(CliError::Config(format!(
                "guide must be schrodinger or klein-gordon, got {other:?}"
            )))
        }
    };
    let period = wave
        .beat_period()
        .ok_or_else(|| CliError::Numerical("superposition has no beat period".into()))?;
    let t1 = periods * period;
    let dt = period / cfg.grid as f64;

    let mut files = Vec::new();
    let mut summary = Table::new(&[
        "start",
        "x0",
        "y0",
        "z0",
        "t_end",
        "x",
        "y",
        "z",
        "max_speed",
        "superluminal",
        "truncated",
    ]);
    for (i, &r0) in starts.iter().enumerate() {
        let tr: Trajectory = if kg {
            let guide = KgGuide {
                wave: wave.clone(),
                alpha,
                charge: ChargeSign::Negative,
                a0: |r: Vec3| 1.0 / r.norm(),
                a_vec: |_: Vec3| Vec3::zero(),
            };
            run_guide(&guide, r0, t1, dt)?
        } else {
            // nodes: |Ψ|² below 1e-3·tol of the starting density
            let guide = SchrodingerGuide {
                wave: wave.clone(),
                min_density: 1e-3 * cfg.tol * density(&wave, 0.0, r0),
            };
            run_guide(&guide, r0, t1, dt)?
        };
        let mut t = Table::new(&["t", "x", "y", "z", "vx", "vy", "vz"]);
        for ((&time, p), v) in tr.t.iter().zip(&tr.position).zip(&tr.velocity) {
            t.push(vec![
                time.into(),
                p[0].into(),
                p[1].into(),
                p[2].into(),
                v[0].into(),
                v[1].into(),
                v[2].into(),
            ]);
        }
        files.push(write_table(cfg, &format!("trajectory_{i}"), &t)?);
        let end = tr.last_position();
        summary.push(vec![
            i.into(),
            r0[0].into(),
            r0[1].into(),
            r0[2].into(),
            (*tr.t.last().expect("start recorded")).into(),
            end[0].into(),
            end[1].into(),
            end[2].into(),
            tr.max_speed.into(),
            tr.superluminal.into(),
            tr.truncated.clone().unwrap_or_default().into(),
        ]);
    }
    files.push(write_table(cfg, "trajectory_summary", &summary)?);
    Ok(files)
}

fn run_guide(field: &dyn VelocityField, r0: Vec3, t1: f64, dt: f64) -> CliResult<Trajectory> {
    Ok(integrate_trajectory(field, r0, 0.0, t1, dt)?)
}

fn verify(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let ids: Vec<u8> = match cfg.get_str("criteria") {
        "all" => CRITERIA.iter().map(|c| c.0).collect(),
        list => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u8>()
                    .ok()
                    .filter(|id| CRITERIA.iter().any(|c| c.0 == *id))
                    .ok_or_else(|| CliError::Config(format!("unknown criterion {s:?}")))
            })
            .collect::<CliResult<_>>()?,
    };
    let mut t = Table::new(&[
        "id",
        "title",
        "passed",
        "within_tolerance",
        "measured",
        "tolerance",
        "budget_s",
    ]);
    let mut failed = Vec::new();
    for id in ids {
        let r = run_criterion(id)?;
        println!("{}", r.line());
        if !r.passed {
            failed.push(id);
        }
        t.push(vec![
            usize::from(r.id).into(),
            r.title.into(),
            r.passed.into(),
            r.within_tolerance.into(),
            r.measured.into(),
            r.tolerance.into(),
            r.budget_s.into(),
        ]);
    }
    let path = write_table(cfg, "verify", &t)?;
    if failed.is_empty() {
        Ok(vec![path])
    } else {
        Err(CliError::Numerical(format!(
            "criteria {failed:?} failed (report written to {})",
            path.display()
        )))
    }
}
