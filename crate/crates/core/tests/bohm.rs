use mbi_core::bohm::{
    continuity_residual, current_kg, gauge_check, integrate_trajectory, madelung_roundtrip, rho_kg,
    velocity_kg, velocity_kg_inverse, velocity_schrodinger, write_trajectory_csv, GridSpec,
    Harmonic, Jet, KgGuide, RadialState, SchrodingerGuide, Superposition, VelocityField,
    WaveFunction, WaveGrid,
};
use mbi_core::electrostatics::{ChargeSign, ALPHA_CODATA};
use mbi_core::math_core::Vec3;
use num_complex::Complex64 as C;
use proptest::prelude::*;

type V = Vec3<f64>;
const A: f64 = ALPHA_CODATA;

struct PlaneWave {
    k: V,
    omega: f64,
}

impl WaveFunction for PlaneWave {
    fn jet(&self, t: f64, r: V) -> Jet {
        let psi = C::from_polar(1.0, self.k.dot(r) - self.omega * t);
        let i = C::new(0.0, 1.0);
        Jet {
            psi,
            psi_t: -i * self.omega * psi,
            psi_tt: -self.omega * self.omega * psi,
            grad: [
                i * self.k[0] * psi,
                i * self.k[1] * psi,
                i * self.k[2] * psi,
            ],
        }
    }
}

fn free(spec: GridSpec, t: f64, wave: &impl WaveFunction) -> WaveGrid {
    WaveGrid::sample(
        spec,
        t,
        A,
        ChargeSign::Negative,
        wave,
        |_| 0.0,
        |_| V::zero(),
    )
}

fn atom_box(n: usize) -> GridSpec {
    GridSpec::cube(V::new(0.2, 0.2, 0.2).scale(1.0 / A), 0.6 / A, n).unwrap()
}

#[test]
fn plane_wave_density_and_current() {
    let spec = GridSpec::cube(V::new(-1.0, -1.0, -1.0), 2.0, 21).unwrap();
    let wave = PlaneWave {
        k: V::new(0.3, -0.2, 0.5),
        omega: 1.2,
    };
    let g = free(spec, 0.7, &wave);
    let rho = rho_kg(&g).unwrap();
    assert!(rho.nonpositive.is_empty());
    assert!(rho.values.iter().all(|&r| (r - wave.omega).abs() < 1e-14));
    for j in current_kg(&g).unwrap() {
        assert!((j - wave.k).max_abs() < 1e-13);
    }
    let v = velocity_kg(&g).unwrap();
    assert_eq!(v.superluminal_fraction, 0.0);
    assert!((v.max_speed - wave.k.norm() / wave.omega).abs() < 1e-13);
}

#[test]
fn superluminal_points_are_reported_not_clamped() {
    let spec = GridSpec::cube(V::zero(), 1.0, 5).unwrap();
    let g = free(
        spec,
        0.0,
        &PlaneWave {
            k: V::new(1.0, 0.0, 0.0),
            omega: 0.5,
        },
    );
    let v = velocity_kg(&g).unwrap();
    assert_eq!(v.superluminal_fraction, 1.0);
    assert!((v.max_speed - 2.0).abs() < 1e-13);
}

#[test]
fn plane_wave_madelung_split() {
    let spec = GridSpec::cube(V::zero(), 1.0, 41).unwrap();
    let wave = PlaneWave {
        k: V::new(0.4, 0.1, -0.3),
        omega: 0.9,
    };
    let m = madelung_roundtrip(&free(spec, 0.2, &wave)).unwrap();
    let expected = 1.0 - (wave.omega.powi(2) - wave.k.norm_sq());
    let n = spec.index([20, 20, 20]);
    assert!((m.hamilton_jacobi.values[n] - expected).abs() < 1e-4);
    // the discrete Laplacian divides round-off by h²
    assert!(m.continuity.max_abs < 1e-14 / (spec.h * spec.h));
    assert!(m.identity_error < 1e-13);

    // on the mass shell the Klein-Gordon residual vanishes up to truncation
    let shell = PlaneWave {
        k: wave.k,
        omega: (1.0 + wave.k.norm_sq()).sqrt(),
    };
    let m = madelung_roundtrip(&free(spec, 0.2, &shell)).unwrap();
    assert!(m.hamilton_jacobi.max_abs < 1e-4 && m.kg_max_abs < 1e-4);
}

#[test]
fn velocity_is_current_over_density() {
    let sup = Superposition::equal(
        RadialState::klein_gordon(A, Harmonic::S).unwrap(),
        RadialState::klein_gordon(A, Harmonic::P0).unwrap(),
    );
    let g = WaveGrid::coulomb(atom_box(17), 321.0, A, &sup);
    let rho = rho_kg(&g).unwrap().values;
    let j = current_kg(&g).unwrap();
    let v = velocity_kg(&g).unwrap().velocity;
    for n in 0..v.len() {
        assert!(
            (v[n].scale(rho[n]) - j[n]).max_abs() <= 1e-14 * j[n].max_abs().max(1e-300) + 1e-300
        );
    }
    let alt = velocity_kg_inverse(&g).unwrap().velocity;
    let dev = v
        .iter()
        .zip(&alt)
        .map(|(a, b)| (*a - *b).max_abs())
        .fold(0.0, f64::max);
    assert!(dev < 1e-15, "{dev:e}");
}

#[test]
fn stationary_states_do_not_move() {
    for h in [Harmonic::S, Harmonic::P0] {
        let s = Superposition::single(RadialState::klein_gordon(A, h).unwrap());
        let v = velocity_kg(&WaveGrid::coulomb(atom_box(24), 77.0, A, &s)).unwrap();
        assert!(v.max_speed <= 1e-12, "{h:?}: {}", v.max_speed);
    }
}

#[test]
fn gauge_examples() {
    let sup = Superposition::equal(
        RadialState::klein_gordon(A, Harmonic::S).unwrap(),
        RadialState::klein_gordon(A, Harmonic::P0).unwrap(),
    );
    let spec = atom_box(32);
    let g = WaveGrid::coulomb(spec, 900.0, A, &sup);
    assert_eq!(gauge_check(&g, &vec![0.0; spec.len()]).unwrap(), 0.0);
    assert!(gauge_check(&g, &vec![3.7; spec.len()]).unwrap() <= 1e-13);
    assert!(gauge_check(&g, &[0.0; 3]).is_err());
}

#[test]
fn circular_current_of_p_plus() {
    // Im(∇ψ/ψ) = (−y, x, 0)/(x² + y²) for ψ ∝ (x + iy) f(r)
    let s = Superposition::single(RadialState::schrodinger(A, Harmonic::PPlus));
    let spec = GridSpec::cube(V::new(0.5, 0.5, -0.5).scale(1.0 / A), 1.0 / A, 33).unwrap();
    let psi: Vec<C> = (0..spec.len())
        .map(|n| s.jet(0.0, spec.position(n)).psi)
        .collect();
    let v = velocity_schrodinger(&spec, &psi).unwrap();
    for n in (0..spec.len()).filter(|&n| spec.is_interior(n)) {
        let p = spec.position(n);
        let rho2 = p[0] * p[0] + p[1] * p[1];
        let exact = V::new(-p[1] / rho2, p[0] / rho2, 0.0);
        assert!(
            (v[n] - exact).max_abs() <= 1e-3 * exact.norm(),
            "{:?}",
            spec.coords(n)
        );
    }
}

#[test]
fn p_plus_orbit_closes_after_one_turn() {
    let guide = SchrodingerGuide {
        wave: Superposition::single(RadialState::schrodinger(A, Harmonic::PPlus)),
        min_density: 0.0,
    };
    let r0 = V::new(2.0, 0.0, 0.7).scale(1.0 / A);
    let period = 2.0 * std::f64::consts::PI * (2.0 / A).powi(2);
    let tr = integrate_trajectory(&guide, r0, 0.0, period, period / 800.0).unwrap();
    assert!(tr.truncated.is_none());
    assert!((tr.last_position() - r0).norm() <= 1e-8 * r0.norm());
}

/// `ρ_t(x_t) det(∂x_t/∂x_0) = ρ_0(x_0)` along the flow.
#[test]
fn schrodinger_flow_is_equivariant() {
    let wave = Superposition::equal(
        RadialState::schrodinger(A, Harmonic::S),
        RadialState::schrodinger(A, Harmonic::PPlus),
    );
    let density = |t: f64, r: V| wave.jet(t, r).psi.norm_sqr();
    let guide = SchrodingerGuide {
        wave: wave.clone(),
        min_density: 0.0,
    };
    let period = wave.beat_period().unwrap();
    let dt = period / 800.0;
    let x0 = V::new(1.0, 0.5, 0.3).scale(1.0 / A);
    let d = 1e-4 / A;
    let end = |r: V| {
        integrate_trajectory(&guide, r, 0.0, period, dt)
            .unwrap()
            .last_position()
    };
    let cols: Vec<V> = (0..3)
        .map(|k| (end(x0 + V::unit(k).scale(d)) - end(x0 - V::unit(k).scale(d))).scale(0.5 / d))
        .collect();
    let det = cols[0].dot(cols[1].cross(cols[2]));
    let xt = end(x0);
    let ratio = density(period, xt) * det / density(0.0, x0);
    assert!((ratio - 1.0).abs() < 1e-6, "{ratio}");
}

#[test]
fn gridded_field_agrees_with_analytic_guide() {
    let wave = Superposition::equal(
        RadialState::klein_gordon(A, Harmonic::S).unwrap(),
        RadialState::klein_gordon(A, Harmonic::P0).unwrap(),
    );
    let spec = atom_box(33);
    let g = WaveGrid::coulomb(spec, 50.0, A, &wave);
    let v = velocity_kg(&g).unwrap().velocity;
    let guide = KgGuide {
        wave,
        alpha: A,
        charge: ChargeSign::Negative,
        a0: |r: V| 1.0 / r.norm(),
        a_vec: |_: V| V::zero(),
    };
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.max_abs()));
    for n in (0..spec.len()).filter(|&n| spec.is_interior(n)) {
        let exact = guide.velocity(50.0, spec.position(n)).unwrap();
        assert!((v[n] - exact).max_abs() <= 2e-2 * scale);
    }
}

#[test]
fn continuity_negative_control() {
    let wave = Superposition::equal(
        RadialState::klein_gordon(A, Harmonic::S).unwrap(),
        RadialState::klein_gordon(A, Harmonic::P0).unwrap(),
    );
    let spec = atom_box(33);
    let dt = spec.h / A;
    let mut slices: Vec<WaveGrid> = (-1..=1)
        .map(|k| WaveGrid::coulomb(spec, 1e4 + k as f64 * dt, A, &wave))
        .collect();
    let good = continuity_residual(&slices).unwrap().max_abs;
    for z in slices[2].psi.iter_mut() {
        *z *= 1.01;
    }
    let bad = continuity_residual(&slices).unwrap().max_abs;
    assert!(bad > 1e3 * good, "{good:e} vs {bad:e}");
}

#[test]
fn madelung_kg_ground_state_converges() {
    let s = Superposition::single(RadialState::klein_gordon(A, Harmonic::S).unwrap());
    let (lo, hi) = (
        V::new(0.35, 0.35, 0.35).scale(1.0 / A),
        V::new(0.65, 0.65, 0.65).scale(1.0 / A),
    );
    let res: Vec<f64> = [9, 17, 33, 65]
        .iter()
        .map(|&n| {
            let m = madelung_roundtrip(&WaveGrid::coulomb(atom_box(n), 10.0, A, &s)).unwrap();
            assert!(m.identity_error < 1e-12);
            m.hamilton_jacobi.max_abs_within(lo, hi)
        })
        .collect();
    for w in res.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() < 0.3, "{res:?}");
    }
}

#[test]
fn trajectory_csv_layout() {
    let guide = SchrodingerGuide {
        wave: Superposition::single(RadialState::schrodinger(A, Harmonic::S)),
        min_density: 0.0,
    };
    let tr = integrate_trajectory(&guide, V::new(10.0, 0.0, 0.0), 0.0, 1.0, 0.5).unwrap();
    let mut out = Vec::new();
    write_trajectory_csv(&mut out, &tr).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x,y,z,vx,vy,vz");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_gauge_bump_leaves_velocity(cx in 0.3f64..0.5, cy in 0.3f64..0.5, amp in -5.0f64..5.0, w in 0.05f64..0.2) {
        let sup = Superposition::equal(
            RadialState::klein_gordon(A, Harmonic::S).unwrap(),
            RadialState::klein_gordon(A, Harmonic::PPlus).unwrap(),
        );
        let spec = atom_box(20);
        let g = WaveGrid::coulomb(spec, 400.0, A, &sup);
        let c = V::new(cx, cy, 0.5).scale(1.0 / A);
        let ups: Vec<f64> = (0..spec.len())
            .map(|n| amp * (-(spec.position(n) - c).norm_sq() * (A / w).powi(2)).exp())
            .collect();
        prop_assert!(gauge_check(&g, &ups).unwrap() <= 1e-10);
    }
}
