//! Trapezoid rule on the uniform radial mesh `r_j = j·dr`, `j = 1..=n`.
//!
//! Every radial integrand used here (`|u|²`, `r²ρ`, ...) vanishes at the
//! origin, so the node at `r = 0` contributes nothing and the rule reduces
//! to full weights on `1..n-1` and half weight on the outer node.

pub fn trapezoid(values: &[f64], dr: f64) -> f64 {
    match values.split_last() {
        Some((last, body)) => dr * (body.iter().sum::<f64>() + 0.5 * last),
        None => 0.0,
    }
}

/// `∫f` with `f_j = g(j)` evaluated lazily.
pub fn trapezoid_by<F: Fn(usize) -> f64>(n: usize, dr: f64, f: F) -> f64 {
    if n == 0 {
        return 0.0;
    }
    dr * ((0..n - 1).map(&f).sum::<f64>() + 0.5 * f(n - 1))
}
