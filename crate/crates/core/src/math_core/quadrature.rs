//! Globally adaptive Gauss–Kronrod (10/21) quadrature.
//!
//! The error estimate and round-off floor follow QUADPACK's `qk21`. The
//! integrator keeps every subinterval and always bisects the one with the
//! largest error estimate until the summed estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Abscissae of the 21-point Kronrod rule on [-1, 1] (non-negative half).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Weights of the embedded 10-point Gauss rule (odd Kronrod nodes).
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Outcome of a definite integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult<T> {
    pub value: T,
    /// Absolute error estimate, always non-negative.
    pub error_estimate: T,
    pub evaluations: usize,
}

impl<T: Real> QuadratureResult<T> {
    fn to_f64(self) -> QuadratureResult<f64> {
        QuadratureResult {
            value: self.value.to_f64_lossy(),
            error_estimate: self.error_estimate.to_f64_lossy(),
            evaluations: self.evaluations,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
    res_abs: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<T: Real> Eq for Segment<T> {}

impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn kronrod21<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> Segment<T> {
    let half = T::lit(0.5);
    let center = half * (lo + hi);
    let half_len = half * (hi - lo);
    let abs_half_len = half_len.abs();

    let fc = f(center);
    let mut res_k = T::lit(WGK[10]) * fc;
    let mut res_abs = res_k.abs();
    let mut res_g = T::zero();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];

    for j in 0..10 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = half * res_k;
    let mut res_asc = T::lit(WGK[10]) * (fc - mean).abs();
    for j in 0..10 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half_len;
    res_abs = res_abs * abs_half_len;
    res_asc = res_asc * abs_half_len;
    let mut error = ((res_k - res_g) * half_len).abs();

    if res_asc != T::zero() && error != T::zero() {
        let scale = (T::lit(200.0) * error / res_asc).powf(T::lit(1.5));
        error = if scale < T::one() {
            res_asc * scale
        } else {
            res_asc
        };
    }
    let eps = T::epsilon();
    if res_abs > T::min_positive_value() / (T::lit(50.0) * eps) {
        error = error.max(T::lit(50.0) * eps * res_abs);
    }

    Segment {
        lo,
        hi,
        value,
        error,
        res_abs,
    }
}

/// Tolerances and budget for [`Quadrature::integrate`].
///
/// A requested tolerance below the round-off floor `100 ε ∫|f|` is clipped
/// to that floor; the returned `error_estimate` is still the honest sum.
#[derive(Debug, Clone)]
pub struct Quadrature<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_evaluations: usize,
    /// Interior points at which the range is split before adaptation.
    pub breakpoints: Vec<T>,
}

impl<T: Real> Default for Quadrature<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-12),
            rel_tol: T::zero(),
            max_evaluations: 400_000,
            breakpoints: Vec::new(),
        }
    }
}

impl<T: Real> Quadrature<T> {
    pub fn with_abs_tol(abs_tol: T) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn breakpoints(mut self, points: impl IntoIterator<Item = T>) -> Self {
        self.breakpoints = points.into_iter().collect();
        self
    }

    pub fn max_evaluations(mut self, n: usize) -> Self {
        self.max_evaluations = n;
        self
    }

    /// Integrate `f` over `[lo, hi]`; `hi` may be `+∞`, in which case the
    /// range is mapped onto `[0, 1)` by `x = lo + t/(1 - t)`.
    pub fn integrate<F>(&self, f: F, lo: T, hi: T) -> Result<QuadratureResult<T>>
    where
        F: Fn(T) -> T,
    {
        let positive = self.abs_tol > T::zero() || self.rel_tol > T::zero();
        if !positive || self.abs_tol < T::zero() || self.rel_tol < T::zero() {
            return Err(Error::Invalid(format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if lo.is_nan() || hi.is_nan() || lo.is_infinite() {
            return Err(Error::Invalid(format!(
                "bad integration range [{lo}, {hi}]"
            )));
        }
        if hi.is_infinite() {
            if hi < T::zero() {
                return Err(Error::Invalid("lower-infinite ranges unsupported".into()));
            }
            let mapped = |t: T| {
                let one_minus = T::one() - t;
                if one_minus <= T::zero() {
                    return T::zero();
                }
                let x = lo + t / one_minus;
                f(x) / (one_minus * one_minus)
            };
            // breakpoints are given in x; map them to t = (x - lo)/(1 + x - lo)
            let points: Vec<T> = self
                .breakpoints
                .iter()
                .filter(|&&x| x > lo)
                .map(|&x| (x - lo) / (T::one() + x - lo))
                .collect();
            return self.adapt(&mapped, T::zero(), T::one(), &points);
        }
        if lo == hi {
            return Ok(QuadratureResult {
                value: T::zero(),
                error_estimate: T::zero(),
                evaluations: 1,
            });
        }
        let (a, b, sign) = if lo < hi {
            (lo, hi, T::one())
        } else {
            (hi, lo, -T::one())
        };
        let points: Vec<T> = self.breakpoints.clone();
        let mut res = self.adapt(&f, a, b, &points)?;
        res.value = res.value * sign;
        Ok(res)
    }

    fn adapt<F: Fn(T) -> T>(
        &self,
        f: &F,
        lo: T,
        hi: T,
        points: &[T],
    ) -> Result<QuadratureResult<T>> {
        let mut cuts: Vec<T> = points
            .iter()
            .copied()
            .filter(|&p| p > lo && p < hi)
            .collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        cuts.dedup();

        let mut heap = BinaryHeap::new();
        let mut evaluations = 0usize;
        let mut left = lo;
        for p in cuts.into_iter().chain(std::iter::once(hi)) {
            heap.push(kronrod21(f, left, p));
            evaluations += 21;
            left = p;
        }

        loop {
            let (value, error, res_abs) = heap
                .iter()
                .fold((T::zero(), T::zero(), T::zero()), |(v, e, a), s| {
                    (v + s.value, e + s.error, a + s.res_abs)
                });
            let floor = T::lit(100.0) * T::epsilon() * res_abs;
            let target = self.abs_tol.max(self.rel_tol * value.abs()).max(floor);
            if error <= target {
                return Ok(QuadratureResult {
                    value,
                    error_estimate: error,
                    evaluations,
                });
            }
            let worst = heap.pop().expect("at least one segment");
            let mid = T::lit(0.5) * (worst.lo + worst.hi);
            let exhausted = evaluations + 42 > self.max_evaluations;
            let unsplittable = !(mid > worst.lo && mid < worst.hi);
            if exhausted || unsplittable {
                heap.push(worst);
                let best = QuadratureResult {
                    value,
                    error_estimate: error,
                    evaluations,
                };
                return Err(Error::BudgetExceeded {
                    best: best.to_f64(),
                });
            }
            heap.push(kronrod21(f, worst.lo, mid));
            heap.push(kronrod21(f, mid, worst.hi));
            evaluations += 42;
        }
    }
}

/// Integrate with the default budget and no relative tolerance.
pub fn integrate_adaptive<T, F>(f: F, lo: T, hi: T, abs_tol: T) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if !(abs_tol > T::zero()) {
        return Err(Error::domain("abs_tol", abs_tol.to_f64_lossy(), "(0, inf)"));
    }
    Quadrature::with_abs_tol(abs_tol).integrate(f, lo, hi)
}
