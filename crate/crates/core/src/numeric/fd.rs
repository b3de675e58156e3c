//! Finite-difference weights on arbitrary stencils (Fornberg's recursion).

/// Weights `w[k][j]` such that `f^(k)(x0) ≈ Σ_j w[k][j] f(nodes[j])` for
/// `k = 0..=max_order`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Five-node stencil of spacing `h` around `x`, shifted inward so every node
/// lies in `[lo, hi]`. Falls back to the centered stencil when the interval is
/// too short to contain it.
pub fn stencil5(x: f64, h: f64, lo: f64, hi: f64) -> [f64; 5] {
    let mut shift = 0i32;
    if x - 2.0 * h < lo {
        shift = (((lo - (x - 2.0 * h)) / h).ceil() as i32).min(2);
    } else if x + 2.0 * h > hi {
        shift = -((((x + 2.0 * h) - hi) / h).ceil() as i32).min(2);
    }
    let mut out = [0.0; 5];
    for (i, o) in out.iter_mut().enumerate() {
        let k = i as i32 - 2 + shift;
        *o = (x + k as f64 * h).clamp(lo, hi);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_five_point_weights() {
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        let d1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        let d2 = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        for j in 0..5 {
            assert!((w[1][j] - d1[j]).abs() < 1e-14);
            assert!((w[2][j] - d2[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn one_sided_stencil_differentiates_exp() {
        let h = 1e-3;
        let nodes = stencil5(0.0, h, 0.0, 1.0);
        assert!(nodes.iter().all(|&x| x >= 0.0));
        let w = fornberg_weights(0.0, &nodes, 1);
        let d: f64 = nodes.iter().zip(&w[1]).map(|(x, w)| w * x.exp()).sum();
        assert!((d - 1.0).abs() < 1e-10);
    }
}
