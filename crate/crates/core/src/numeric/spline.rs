//! Quintic B-spline interpolation and penalized smoothing of vector data.
//!
//! Degree five with simple interior knots gives C⁴ continuity, so third
//! derivatives (needed for torsion) and fourth derivatives are continuous.

use super::banded::BandMatrix;

pub const DEGREE: usize = 5;

#[derive(Clone, Debug)]
pub struct QuinticSpline {
    knots: Vec<f64>,
    // coeffs[i][c]: control value i of channel c.
    coeffs: Vec<Vec<f64>>,
    dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplineError {
    TooFewPoints(usize),
    NonIncreasing(usize),
    Singular,
}

impl QuinticSpline {
    /// Fit through `values` at strictly increasing `params`.
    ///
    /// `smoothing = 0` interpolates. A positive value minimizes
    /// `Σ|S(u_i) - v_i|² + smoothing · Σ|Δ³c|²` over the control values `c`.
    pub fn fit(params: &[f64], values: &[Vec<f64>], smoothing: f64) -> Result<Self, SplineError> {
        let n = params.len();
        if n < DEGREE + 1 || values.len() != n {
            return Err(SplineError::TooFewPoints(n));
        }
        if let Some(i) = params.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(SplineError::NonIncreasing(i));
        }
        let dim = values[0].len();
        let knots = averaged_knots(params);
        let mut spline = Self { knots, coeffs: vec![vec![0.0; dim]; n], dim };

        // Collocation rows: basis values at each parameter.
        let rows: Vec<(usize, [f64; DEGREE + 1])> = params
            .iter()
            .map(|&u| {
                let span = spline.find_span(u);
                let d = spline.basis_derivs(span, u, 0);
                let mut vals = [0.0; DEGREE + 1];
                vals.copy_from_slice(&d[0]);
                (span - DEGREE, vals)
            })
            .collect();

        let mut rhs: Vec<Vec<f64>>;
        let matrix = if smoothing <= 0.0 {
            let (mut kl, mut ku) = (0usize, 0usize);
            for (i, (first, _)) in rows.iter().enumerate() {
                kl = kl.max(i.saturating_sub(*first));
                ku = ku.max((first + DEGREE).saturating_sub(i));
            }
            let mut a = BandMatrix::zeros(n, kl, ku);
            for (i, (first, vals)) in rows.iter().enumerate() {
                for (j, v) in vals.iter().enumerate() {
                    if *v != 0.0 {
                        a.add(i, first + j, *v);
                    }
                }
            }
            rhs = values.to_vec();
            a
        } else {
            let bw = DEGREE.max(3);
            let mut a = BandMatrix::zeros(n, bw, bw);
            rhs = vec![vec![0.0; dim]; n];
            for ((first, vals), v) in rows.iter().zip(values) {
                for (j, bj) in vals.iter().enumerate() {
                    for (k, bk) in vals.iter().enumerate() {
                        a.add(first + j, first + k, bj * bk);
                    }
                    for c in 0..dim {
                        rhs[first + j][c] += bj * v[c];
                    }
                }
            }
            const D3: [f64; 4] = [-1.0, 3.0, -3.0, 1.0];
            for r in 0..n - 3 {
                for (j, dj) in D3.iter().enumerate() {
                    for (k, dk) in D3.iter().enumerate() {
                        a.add(r + j, r + k, smoothing * dj * dk);
                    }
                }
            }
            a
        };
        matrix.solve(&mut rhs).ok_or(SplineError::Singular)?;
        spline.coeffs = rhs;
        Ok(spline)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[DEGREE], self.knots[self.knots.len() - 1 - DEGREE])
    }

    fn find_span(&self, u: f64) -> usize {
        let n = self.coeffs.len();
        let (lo, hi) = self.domain();
        if u >= hi {
            return n - 1;
        }
        if u <= lo {
            return DEGREE;
        }
        // Largest index with knots[span] <= u, restricted to [DEGREE, n - 1].
        let idx = self.knots[DEGREE..=n].partition_point(|&k| k <= u);
        (DEGREE + idx - 1).min(n - 1)
    }

    /// Nonzero basis functions and their derivatives up to `nd` at `u`
    /// (The NURBS Book, algorithm A2.3).
    fn basis_derivs(&self, span: usize, u: f64, nd: usize) -> Vec<[f64; DEGREE + 1]> {
        let p = DEGREE;
        let k = &self.knots;
        let mut ndu = [[0.0; DEGREE + 1]; DEGREE + 1];
        let mut left = [0.0; DEGREE + 1];
        let mut right = [0.0; DEGREE + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = u - k[span + 1 - j];
            right[j] = k[span + j] - u;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        let mut ders = vec![[0.0; DEGREE + 1]; nd + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }
        let mut a = [[0.0; DEGREE + 1]; 2];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = 1.0;
            for kk in 1..=nd.min(p) {
                let mut d = 0.0;
                let rk = r as isize - kk as isize;
                let pk = p - kk;
                if r >= kk {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if (r as isize) - 1 <= pk as isize { kk - 1 } else { p - r };
                for j in j1..=j2 {
                    let idx = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                    d += a[s2][j] * ndu[idx][pk];
                }
                if r <= pk {
                    a[s2][kk] = -a[s1][kk - 1] / ndu[pk + 1][r];
                    d += a[s2][kk] * ndu[r][pk];
                }
                ders[kk][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut fac = p as f64;
        for (kk, row) in ders.iter_mut().enumerate().skip(1) {
            for v in row.iter_mut() {
                *v *= fac;
            }
            fac *= (p - kk) as f64;
        }
        ders
    }

    /// Value and derivatives up to `nd` (at most 5) of every channel at `u`:
    /// `out[k][c]`.
    pub fn eval(&self, u: f64, nd: usize) -> Vec<Vec<f64>> {
        let span = self.find_span(u);
        let ders = self.basis_derivs(span, u, nd);
        let mut out = vec![vec![0.0; self.dim]; nd + 1];
        for (k, row) in ders.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                let c = &self.coeffs[span - DEGREE + j];
                for (o, cv) in out[k].iter_mut().zip(c) {
                    *o += b * cv;
                }
            }
        }
        out
    }
}

// Clamped knot vector with interior knots at running averages of the
// parameters (de Boor), giving a square, well-posed collocation system.
fn averaged_knots(u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let p = DEGREE;
    let mut knots = Vec::with_capacity(n + p + 1);
    knots.extend(std::iter::repeat_n(u[0], p + 1));
    for j in 1..n - p {
        let avg = u[j..j + p].iter().sum::<f64>() / p as f64;
        knots.push(avg);
    }
    knots.extend(std::iter::repeat_n(u[n - 1], p + 1));
    knots
}
