//! Residuals of the Mannheim condition `κ = c(κ² + τ²)` on a base curve and
//! of the partner condition `τ' = (κ/a)(1 + a²τ²)` on a partner curve.

use crate::curves::ParamCurve;
use crate::error::{Error, Result};
use crate::frames::{modified_frame, ModifiedFrame};
use crate::numeric::fd::fornberg_weights;

/// Default grid size for residual evaluation.
pub const RESIDUAL_NODES: usize = 512;

fn frames_on(curve: &ParamCurve, nodes: usize) -> Result<Vec<ModifiedFrame>> {
    let nodes = nodes.max(100);
    curve.domain().grid(nodes).into_iter().map(|s| modified_frame(curve, s)).collect()
}

/// Best-fit (or given) `c` and `max |κ - c(κ² + τ²)| / max κ` over the grid.
pub fn mannheim_residual(base: &ParamCurve, c: Option<f64>, nodes: usize) -> Result<(f64, f64)> {
    let frames = frames_on(base, nodes)?;
    let pairs: Vec<(f64, f64)> = frames.iter().map(|f| (f.kappa(), f.kappa_sq + f.tau * f.tau)).collect();
    let qq: f64 = pairs.iter().map(|(_, q)| q * q).sum();
    let c_used = match c {
        Some(c) => c,
        None => {
            if !(qq > 1e-300) {
                return Err(Error::Unfittable);
            }
            pairs.iter().map(|(k, q)| k * q).sum::<f64>() / qq
        }
    };
    let kmax = pairs.iter().map(|(k, _)| *k).fold(0.0, f64::max);
    let scale = if kmax > 0.0 { kmax } else { 1.0 };
    let res = pairs.iter().map(|(k, q)| (k - c_used * q).abs()).fold(0.0, f64::max) / scale;
    Ok((c_used, res))
}

/// Derivative of samples `y` on a uniform grid of spacing `h` by five-point
/// stencils (one-sided at the ends).
pub fn derivative5(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    if n < 5 {
        return vec![f64::NAN; n];
    }
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(2).min(n - 5);
            let nodes: Vec<f64> = (start..start + 5).map(|k| k as f64 * h).collect();
            let w = fornberg_weights(i as f64 * h, &nodes, 1);
            (0..5).map(|k| w[1][k] * y[start + k]).sum()
        })
        .collect()
}

/// `max |τ' - (κ/a)(1 + a²τ²)| / max(1, max |τ'|)` over the grid, with τ' by
/// finite differences.
///
/// The derivative is estimated at spacing `h` and `2h`; when their
/// disagreement exceeds the derivative itself the grid cannot resolve τ'.
pub fn partner_residual(partner: &ParamCurve, a: f64, nodes: usize) -> Result<f64> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParams { kind: "partner_residual".into(), message: format!("a must be nonzero, got {a}") });
    }
    let nodes = nodes.max(101) | 1;
    let frames = frames_on(partner, nodes)?;
    let dom = partner.domain();
    let h = dom.len() / (nodes - 1) as f64;
    let tau: Vec<f64> = frames.iter().map(|f| f.tau).collect();
    let d_h = derivative5(&tau, h);
    let coarse: Vec<f64> = tau.iter().step_by(2).copied().collect();
    let d_2h = derivative5(&coarse, 2.0 * h);
    let noise = d_2h.iter().enumerate().map(|(i, d)| (d - d_h[2 * i]).abs()).fold(0.0, f64::max);
    let signal = d_h.iter().map(|d| d.abs()).fold(0.0, f64::max);
    if noise > 1e-6 * (1.0 + signal) && noise > signal {
        return Err(Error::UnstableDerivative { noise, signal });
    }
    let res = frames
        .iter()
        .zip(&d_h)
        .map(|(f, dt)| (dt - f.kappa() / a * (1.0 + a * a * f.tau * f.tau)).abs())
        .fold(0.0, f64::max);
    Ok(res / signal.max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative5_is_exact_for_quartics() {
        let h = 0.1;
        let y: Vec<f64> = (0..20).map(|i| (i as f64 * h).powi(4)).collect();
        let d = derivative5(&y, h);
        for (i, v) in d.iter().enumerate() {
            let x = i as f64 * h;
            assert!((v - 4.0 * x.powi(3)).abs() < 1e-10);
        }
    }
}
