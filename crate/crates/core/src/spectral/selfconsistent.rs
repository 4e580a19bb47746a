//! Klein–Gordon levels as a one-parameter family of Schrödinger problems.
//!
//! For each `ε̄ ∈ (0, 1)` the Schrödinger problem with
//! `V = −ε̄αĀ₀ − ½α²Ā₀²` has levels `E_k(ε̄)`; a Klein–Gordon level is an `ε̄`
//! with `E_k(ε̄) = ½(ε̄² − 1)`. `E_k` does not increase with `ε̄` while the
//! right side increases, so the crossing is found by bisection.

use crate::electrostatics::ModelParams;
use crate::error::{Error, Result};
use crate::spectral::potential::{PotentialTable, RadialPotential};
use crate::spectral::radial::Eigenpair;
use crate::spectral::radial::{radial_energy, solve_radial, RadialGrid, RadialProblem};

/// `E_k(ε̄) − ½(ε̄² − 1)`, with `E_k = 0` when no such state exists.
fn mismatch(
    potential: &dyn RadialPotential,
    alpha: f64,
    ell: usize,
    nodes: usize,
    grid: RadialGrid,
    eps: f64,
) -> Result<f64> {
    let p = RadialProblem::klein_gordon(potential, alpha, eps, ell, nodes).with_grid(grid);
    let e = match radial_energy(&p, nodes) {
        Ok(e) => e,
        Err(Error::NoBoundState { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(e - 0.5 * (eps * eps - 1.0))
}

/// Self-consistent `ε̄` for an arbitrary potential on a given grid.
pub fn kg_selfconsistent_with(
    potential: &dyn RadialPotential,
    alpha: f64,
    ell: usize,
    nodes: usize,
    grid: RadialGrid,
) -> Result<Eigenpair> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let f_lo = mismatch(potential, alpha, ell, nodes, grid, lo)?;
    let f_hi = mismatch(potential, alpha, ell, nodes, grid, hi)?;
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::NoSolution(format!(
            "no Klein-Gordon crossing for ell={ell}, nodes={nodes}: mismatch {f_lo:e} at 0, {f_hi:e} at 1"
        )));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mismatch(potential, alpha, ell, nodes, grid, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eps = 0.5 * (lo + hi);
    let p = RadialProblem::klein_gordon(potential, alpha, eps, ell, nodes).with_grid(grid);
    solve_radial(&p, nodes)
}

/// Klein–Gordon level with the Coulomb–Born–Infeld potential of `params`.
pub fn kg_selfconsistent(params: &ModelParams, ell: usize, nodes: usize) -> Result<Eigenpair> {
    params.validate()?;
    let table = PotentialTable::shared(params.beta)?;
    let grid = RadialGrid::for_state(params.alpha, nodes + ell + 1, table.r_min_hint());
    kg_selfconsistent_with(table.as_ref(), params.alpha, ell, nodes, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electrostatics::ALPHA_CODATA;
    use crate::spectral::potential::Coulomb;
    use crate::spectral::radial::kg_coulomb_level;

    #[test]
    fn coulomb_ground_matches_closed_form() {
        let grid = RadialGrid::for_state(ALPHA_CODATA, 1, 1e-9);
        let s = kg_selfconsistent_with(&Coulomb, ALPHA_CODATA, 0, 0, grid).unwrap();
        let eps = s.epsilon_bar.unwrap();
        let exact = kg_coulomb_level(ALPHA_CODATA, 0, 0).unwrap();
        assert!(((eps - exact) / exact).abs() < 1e-10, "{eps} vs {exact}");
        assert!((s.energy - 0.5 * (eps * eps - 1.0)).abs() < 1e-12);
    }
}
