//! Natural cubic spline on a strictly increasing grid.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    /// Second derivatives at the knots.
    m: Vec<T>,
}

impl<T: Real> CubicSpline<T> {
    pub fn natural(xs: Vec<T>, ys: Vec<T>) -> Result<Self> {
        let n = xs.len();
        if n < 3 || ys.len() != n {
            return Err(Error::Shape(format!(
                "spline needs matching knots and values (n >= 3), got {} and {}",
                n,
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid(
                "spline knots must be strictly increasing".into(),
            ));
        }
        // Thomas algorithm for the interior second derivatives.
        let two = T::lit(2.0);
        let six = T::lit(6.0);
        let mut diag = vec![T::zero(); n];
        let mut rhs = vec![T::zero(); n];
        let mut upper = vec![T::zero(); n];
        for i in 1..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            let lower = h0;
            let mut d = two * (h0 + h1);
            let mut r = six * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            if i > 1 {
                let w = lower / diag[i - 1];
                d = d - w * upper[i - 1];
                r = r - w * rhs[i - 1];
            }
            diag[i] = d;
            upper[i] = h1;
            rhs[i] = r;
        }
        let mut m = vec![T::zero(); n];
        for i in (1..n - 1).rev() {
            m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
        }
        Ok(Self { xs, ys, m })
    }

    pub fn domain(&self) -> (T, T) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    /// Value at `x`; outside the knots the end cubic is continued.
    pub fn eval(&self, x: T) -> T {
        let n = self.xs.len();
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let six = T::lit(6.0);
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / six
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_knots_and_lines() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        let s = CubicSpline::natural(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((s.eval(*x) - y).abs() < 1e-14);
        }
        assert!((s.eval(1.05) - 1.1).abs() < 1e-14);
    }

    #[test]
    fn smooth_function_fourth_order() {
        let err = |n: usize| {
            let xs: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64 * 3.0).collect();
            let ys = xs.iter().map(|x| x.sin()).collect();
            let s = CubicSpline::natural(xs, ys).unwrap();
            (0..100)
                .map(|i| 1.0 + i as f64 * 0.01)
                .map(|x| (s.eval(x) - x.sin()).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(40), err(80));
        assert!(e1 / e2 > 12.0, "{e1} {e2}");
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(CubicSpline::natural(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(CubicSpline::natural(vec![0.0, 1.0, 1.0], vec![0.0; 3]).is_err());
    }
}
