//! Numerical building blocks shared by the geometry modules.

pub mod banded;
pub mod fd;
pub mod ode;
pub mod quadrature;
pub mod spline;

/// `n` uniformly spaced nodes covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
