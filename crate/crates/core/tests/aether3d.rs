use mbi_core::aether3d::{
    constitutive_e, constitutive_h, invert_linearized_d, mbi_step, read_snapshot, write_snapshot,
    ConstitutiveInputs, FieldLattice,
};
use mbi_core::math_core::Vec3;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type V = Vec3<f64>;

fn random_field(n: usize, seed: u64, amp: f64) -> Vec<V> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            V::new(
                rng.gen_range(-amp..amp),
                rng.gen_range(-amp..amp),
                rng.gen_range(-amp..amp),
            )
        })
        .collect()
}

fn max_diff(a: &[V], b: &[V]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).max_abs())
        .fold(0.0, f64::max)
}

#[test]
fn div_of_curl_vanishes_on_random_fields() {
    let lat = FieldLattice::<f64>::new([7, 6, 5], 0.3, 1.0).unwrap();
    let f = random_field(lat.len(), 11, 1.0);
    let div = lat.divergence(&lat.curl(&f));
    let worst = div.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(worst < 1e-13, "{worst}");
}

#[test]
fn null_wave_tracks_linear_evolution() {
    let dims = [4, 4, 32];
    let mut nonlinear = FieldLattice::<f64>::null_plane_wave(dims, 0.25, 1.0, 5.0, 2).unwrap();
    let mut linear = nonlinear.clone();
    linear.beta = 0.0;
    let dt = 0.1;
    for step in 1..=50 {
        nonlinear.step(dt).unwrap();
        linear.step(dt).unwrap();
        let dev = max_diff(&nonlinear.d, &linear.d).max(max_diff(&nonlinear.b, &linear.b));
        assert!(dev <= 1e-12 * step as f64, "step {step}: {dev}");
    }
    // the null structure itself survives: B_y = D_x everywhere
    for (b, d) in nonlinear.b.iter().zip(&nonlinear.d) {
        assert_eq!(b[1], d[0]);
    }
}

#[test]
fn weak_plane_wave_follows_lattice_dispersion() {
    let (nz, h, mode) = (32usize, 0.5, 2usize);
    let mut lat = FieldLattice::<f64>::null_plane_wave([3, 3, nz], h, 1.0, 1e-6, mode).unwrap();
    let k = 2.0 * std::f64::consts::PI * mode as f64 / (nz as f64 * h);
    // semi-discrete centered-difference dispersion
    let omega = (k * h).sin() / h;
    let dt = 0.05;
    for _ in 0..200 {
        lat.step(dt).unwrap();
    }
    let t = lat.time;
    for kk in 0..nz {
        let z = kk as f64 * h;
        let expect = 1e-6 * (k * z - omega * t).sin();
        let got = lat.d[lat.index(1, 1, kk)][0];
        assert!((got - expect).abs() < 1e-12, "z={z}: {got} vs {expect}");
    }
    assert!(omega / k < 1.0);
}

#[test]
fn constraints_survive_many_steps() {
    let dims = [10, 10, 10];
    let n = dims.iter().product();
    let mut lat = FieldLattice::<f64>::from_potentials(
        dims,
        1.0,
        1.0,
        &random_field(n, 1, 0.5),
        &random_field(n, 2, 0.5),
    )
    .unwrap();
    let start = lat.diagnostics();
    assert!(start.max_div_b < 1e-14 && start.max_div_d < 1e-14);
    for _ in 0..300 {
        lat.step(0.25).unwrap();
    }
    let end = lat.diagnostics();
    assert!(end.max_div_b <= 1e-12 && end.max_div_d <= 1e-12, "{end:?}");
    assert!(end.energy_proxy.is_finite());
}

#[test]
fn time_reversal() {
    let dims = [6, 6, 6];
    let n = 216;
    let lat = FieldLattice::<f64>::from_potentials(
        dims,
        1.0,
        1.0,
        &random_field(n, 3, 0.3),
        &random_field(n, 4, 0.3),
    )
    .unwrap();
    let mut errs = Vec::new();
    for dt in [0.2, 0.1] {
        let back = mbi_step(&mbi_step(&lat, dt).unwrap(), -dt).unwrap();
        errs.push(max_diff(&back.b, &lat.b).max(max_diff(&back.d, &lat.d)));
    }
    assert!(errs[0] < 0.2f64.powi(3), "{errs:?}");
    // RK4 pairs lose O(dt⁵): halving dt gains at least a factor 8
    assert!(errs[1] < errs[0] / 8.0, "{errs:?}");
}

#[test]
fn snapshot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("snap");
    let mut lat = FieldLattice::<f64>::null_plane_wave([4, 5, 6], 0.3, 0.7, 1.5, 1).unwrap();
    lat.step(0.1).unwrap();
    let meta = write_snapshot(&lat, &base, Some("abc")).unwrap();
    assert_eq!(meta.dims, [4, 5, 6]);
    let back = read_snapshot(&base.with_extension("bin")).unwrap();
    assert_eq!(back.b, lat.b);
    assert_eq!(back.d, lat.d);
    assert_eq!(back.time, lat.time);
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(base.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(side["config_hash"], "abc");
    assert_eq!(side["spacing"], 0.3);
    let bytes = std::fs::metadata(base.with_extension("bin")).unwrap().len();
    assert_eq!(bytes as usize, 56 + 6 * 8 * 120);
}

#[test]
fn snapshot_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.bin");
    std::fs::write(&p, b"not a snapshot at all").unwrap();
    assert!(read_snapshot(&p).is_err());
}

proptest! {
    #[test]
    fn null_amplitude_scaling(a in 1e-3f64..1e3, beta in 0.0f64..5.0) {
        let e1 = constitutive_e(V::new(0.0, a, 0.0), V::new(a, 0.0, 0.0), beta);
        let e2 = constitutive_e(V::new(0.0, 2.0 * a, 0.0), V::new(2.0 * a, 0.0, 0.0), beta);
        let h1 = constitutive_h(V::new(0.0, a, 0.0), V::new(a, 0.0, 0.0), beta);
        let h2 = constitutive_h(V::new(0.0, 2.0 * a, 0.0), V::new(2.0 * a, 0.0, 0.0), beta);
        prop_assert!((e2 - e1.scale(2.0)).max_abs() <= 8.0 * f64::EPSILON * a);
        prop_assert!((h2 - h1.scale(2.0)).max_abs() <= 8.0 * f64::EPSILON * a);
    }

    #[test]
    fn linearized_inverse(
        b in prop::array::uniform3(-1.0f64..1.0),
        d in prop::array::uniform3(-1.0f64..1.0),
        scale in 1e-3f64..1.0,
    ) {
        let (b, d) = (Vec3(b), Vec3(d));
        let norm2 = b.norm_sq() + d.norm_sq();
        prop_assume!(norm2 > 1e-6);
        // pick β so that β⁴(|B|²+|D|²) = 1e-6 · scale
        let beta = (1e-6 * scale / norm2).powf(0.25);
        let e = ConstitutiveInputs::new(b, d, beta).evaluate().0;
        let back = invert_linearized_d(e, b, beta);
        prop_assert!((back - d).norm() <= 1e-5 * d.norm().max(1e-300));
    }

    #[test]
    fn denominator_never_below_one(
        b in prop::array::uniform3(-1e3f64..1e3),
        d in prop::array::uniform3(-1e3f64..1e3),
        beta in 0.0f64..3.0,
    ) {
        let inp = ConstitutiveInputs::new(Vec3(b), Vec3(d), beta);
        prop_assert!(inp.denominator() >= 1.0);
        let (e, h) = inp.evaluate();
        prop_assert!(e.is_finite() && h.is_finite());
    }
}
