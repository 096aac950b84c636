//! Thomas algorithm for real and complex tridiagonal systems.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    const ZERO: Self;
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Reusable solver for systems with `lower[i]·x[i-1] + diag[i]·x[i] + upper[i]·x[i+1] = rhs[i]`.
///
/// `lower[0]` and `upper[n-1]` are ignored.
#[derive(Debug, Clone, Default)]
pub struct ThomasSolver<T> {
    c: Vec<T>,
    d: Vec<T>,
}

impl<T: Scalar> ThomasSolver<T> {
    pub fn new() -> Self {
        Self { c: Vec::new(), d: Vec::new() }
    }

    pub fn solve(&mut self, lower: &[T], diag: &[T], upper: &[T], rhs: &[T], out: &mut [T]) -> Result<()> {
        let n = diag.len();
        if lower.len() != n || upper.len() != n || rhs.len() != n || out.len() != n {
            return Err(Error::domain("tridiagonal system has inconsistent lengths"));
        }
        if n == 0 {
            return Ok(());
        }
        self.c.resize(n, T::ZERO);
        self.d.resize(n, T::ZERO);

        let pivot = |m: T, i: usize| {
            if m.magnitude() > f64::MIN_POSITIVE && m.magnitude().is_finite() {
                Ok(m)
            } else {
                Err(Error::Numerical(format!("degenerate pivot in tridiagonal solve at row {i}")))
            }
        };

        let m = pivot(diag[0], 0)?;
        self.c[0] = upper[0] / m;
        self.d[0] = rhs[0] / m;
        for i in 1..n {
            let m = pivot(diag[i] - lower[i] * self.c[i - 1], i)?;
            self.c[i] = upper[i] / m;
            self.d[i] = (rhs[i] - lower[i] * self.d[i - 1]) / m;
        }
        out[n - 1] = self.d[n - 1];
        for i in (0..n - 1).rev() {
            out[i] = self.d[i] - self.c[i] * out[i + 1];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply<T: Scalar>(lower: &[T], diag: &[T], upper: &[T], x: &[T]) -> Vec<T> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = diag[i] * x[i];
                if i > 0 {
                    v = v + lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    v = v + upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    #[test]
    fn zero_pivot_is_reported() {
        let mut s = ThomasSolver::<f64>::new();
        let mut out = [0.0; 2];
        let err = s.solve(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0], &mut out).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let mut s = ThomasSolver::<f64>::new();
        let mut out = [0.0; 2];
        assert!(s.solve(&[0.0], &[1.0, 1.0], &[0.0, 0.0], &[1.0, 1.0], &mut out).is_err());
    }

    proptest! {
        #[test]
        fn complex_diagonally_dominant_systems_are_solved(
            seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 2..60)
        ) {
            let n = seed.len();
            let lower: Vec<Complex64> = seed.iter().map(|s| Complex64::new(s.0, s.1)).collect();
            let upper: Vec<Complex64> = seed.iter().map(|s| Complex64::new(s.1, -s.2)).collect();
            let diag: Vec<Complex64> = seed.iter().map(|s| Complex64::new(3.0 + s.3, s.0)).collect();
            let x: Vec<Complex64> = seed.iter().map(|s| Complex64::new(s.2, s.3)).collect();
            let rhs = apply(&lower, &diag, &upper, &x);
            let mut out = vec![Complex64::ZERO; n];
            ThomasSolver::new().solve(&lower, &diag, &upper, &rhs, &mut out).unwrap();
            for (a, b) in out.iter().zip(&x) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
