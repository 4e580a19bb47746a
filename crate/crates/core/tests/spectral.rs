use mbi_core::constants::{BETA_BORN, DELTA_E0_BORN};
use mbi_core::electrostatics::{ModelParams, ALPHA_CODATA};
use mbi_core::spectral::{
    beta_upper_bound, coulomb_level, delta_e_bound, delta_e_first_order, radial_energy,
    solve_radial, state_label, write_csv, write_json, Coulomb, PotentialTable, RadialGrid,
    RadialPotential, RadialProblem, SpectrumRecord, CSV_HEADER,
};
use proptest::prelude::*;

const A: f64 = ALPHA_CODATA;

fn cbi(beta: f64) -> std::sync::Arc<PotentialTable> {
    PotentialTable::shared(beta).unwrap()
}

#[test]
fn born_potential_has_at_least_five_ordered_levels() {
    let table = cbi(BETA_BORN);
    let grid = RadialGrid::for_state(A, 5, table.r_min_hint());
    let levels: Vec<f64> = (0..5)
        .map(|k| {
            radial_energy(
                &RadialProblem::schrodinger(table.as_ref(), A, 0, k).with_grid(grid),
                k,
            )
            .unwrap()
        })
        .collect();
    assert!(levels.iter().all(|&e| e < 0.0));
    assert!(levels.windows(2).all(|w| w[0] < w[1]), "{levels:?}");
    // Ā₀ exceeds 1/r away from the core, so every level sits below Coulomb
    for (k, e) in levels.iter().enumerate() {
        assert!(*e < coulomb_level(A, 0, k), "level {k}");
    }
}

#[test]
fn coulomb_p_levels_and_degeneracy() {
    for k in 0..3 {
        let e = radial_energy(&RadialProblem::schrodinger(&Coulomb, A, 1, k), k).unwrap();
        let exact = -0.5 * A * A / ((k + 2) as f64).powi(2);
        assert!(((e - exact) / exact).abs() < 1e-9, "k = {k}");
    }
}

#[test]
fn eigenfunction_nodes_and_normalization() {
    let table = cbi(BETA_BORN);
    for k in 0..3 {
        let e = solve_radial(&RadialProblem::schrodinger(table.as_ref(), A, 0, k), k).unwrap();
        assert!(e.normalized && e.norm_residual < 1e-8);
        let peak = e.u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let signs =
            e.u.windows(2)
                .filter(|w| w[0].abs() > 1e-8 * peak && w[1].abs() > 1e-8 * peak)
                .filter(|w| w[0].signum() != w[1].signum())
                .count();
        assert_eq!(signs, k);
        assert_eq!(e.nodes, k);
    }
}

#[test]
fn level_decreases_with_epsilon_bar() {
    let table = cbi(BETA_BORN);
    let mut prev = f64::INFINITY;
    for eps in [0.2, 0.4, 0.6, 0.8, 1.0] {
        let e = radial_energy(
            &RadialProblem::klein_gordon(table.as_ref(), A, eps, 0, 0),
            0,
        )
        .unwrap();
        assert!(e <= prev, "eps = {eps}");
        prev = e;
    }
}

#[test]
fn halving_the_step_leaves_ground_level_unchanged() {
    let table = cbi(BETA_BORN);
    let grid = RadialGrid::for_state(A, 1, table.r_min_hint());
    let fine = RadialGrid {
        step: grid.step / 2.0,
        ..grid
    };
    let p = RadialProblem::schrodinger(table.as_ref(), A, 0, 0);
    let e1 = radial_energy(&p.clone().with_grid(grid), 0).unwrap();
    let e2 = radial_energy(&p.with_grid(fine), 0).unwrap();
    assert!((e1 - e2).abs() < 1e-10, "{e1} vs {e2}");
}

#[test]
fn eigenvalue_shift_approaches_first_order() {
    for scale in [1e-4, 1e-5] {
        let beta = scale * A;
        let table = cbi(beta);
        let grid = RadialGrid::for_state(A, 1, table.r_min_hint());
        let e = radial_energy(
            &RadialProblem::schrodinger(table.as_ref(), A, 0, 0).with_grid(grid),
            0,
        )
        .unwrap();
        let c = radial_energy(
            &RadialProblem::schrodinger(&Coulomb, A, 0, 0).with_grid(grid),
            0,
        )
        .unwrap();
        let first = delta_e_first_order(&ModelParams::new(A, beta).unwrap()).unwrap();
        let ratio = (e - c) / first;
        assert!(
            (ratio - 1.0).abs() < 0.05,
            "beta = {scale} alpha: ratio {ratio}"
        );
    }
}

#[test]
fn first_order_shift_regression() {
    let de = delta_e_first_order(&ModelParams::born()).unwrap();
    assert!(
        (de - DELTA_E0_BORN).abs() <= 1e-12 * DELTA_E0_BORN.abs(),
        "{de:e}"
    );
    assert!(de < 0.0 && de.abs() <= delta_e_bound(A, BETA_BORN, 1.0));
}

#[test]
fn bound_rounding_examples() {
    let b = beta_upper_bound(1.0, 1.0, A).unwrap();
    assert_eq!(b.beta_max, A / 16.0);
    assert_eq!(b.rounded_ratio, 0.1);
    assert!(!b.born_within_bound);
    let b = beta_upper_bound(0.01, 1.0, A).unwrap();
    assert_eq!(b.rounded_ratio, 1e-3);
    assert!(beta_upper_bound(0.0, 1.0, A).is_err());
    assert!(beta_upper_bound(0.5, 0.5, A).is_err());
}

#[test]
fn reports_round_trip() {
    let e = solve_radial(&RadialProblem::schrodinger(&Coulomb, A, 0, 1), 1).unwrap();
    let rec = SpectrumRecord::from_eigenpair(state_label(0, 1), &e);
    assert_eq!(rec.label, "2s");

    let mut csv = Vec::new();
    write_csv(&mut csv, std::slice::from_ref(&rec)).unwrap();
    let csv = String::from_utf8(csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let energy: f64 = lines
        .next()
        .unwrap()
        .split(',')
        .nth(3)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(energy, rec.energy);

    let mut json = Vec::new();
    write_json(&mut json, std::slice::from_ref(&rec)).unwrap();
    let back: Vec<SpectrumRecord> = serde_json::from_slice(&json).unwrap();
    assert_eq!(back, vec![rec]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bound_monotone_in_fraction(f1 in 1e-4f64..1.0, f2 in 1e-4f64..1.0) {
        let (lo, hi) = if f1 < f2 { (f1, f2) } else { (f2, f1) };
        let a = beta_upper_bound(lo, 1.0, A).unwrap().beta_max;
        let b = beta_upper_bound(hi, 1.0, A).unwrap().beta_max;
        prop_assert!(a <= b && a > 0.0);
    }

    #[test]
    fn first_order_shift_within_bound(lb in -6.0f64..0.0) {
        let beta = A * 10f64.powf(lb);
        let de = delta_e_first_order(&ModelParams::new(A, beta).unwrap()).unwrap();
        prop_assert!(de <= 0.0);
        prop_assert!(de.abs() <= delta_e_bound(A, beta, 1.0));
    }
}
