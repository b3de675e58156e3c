//! Banded linear systems solved by Gaussian elimination without pivoting.
//!
//! Adequate for B-spline collocation matrices (totally positive) and for
//! symmetric positive definite penalized normal equations.

#[derive(Clone, Debug)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    // Row-major band storage: entry (i, j) lives at i * width + (j + kl - i).
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self { n, kl, ku, data: vec![0.0; n * (kl + ku + 1)] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        if j + self.kl < i || j > i + self.ku {
            None
        } else {
            Some(i * (self.kl + self.ku + 1) + (j + self.kl - i))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.idx(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Adds `v` at `(i, j)`. Panics if the entry lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j).expect("entry outside band");
        self.data[k] += v;
    }

    /// Solves `A X = B` in place for several right-hand sides (`rhs[i][c]`).
    /// Returns `None` on a zero pivot.
    pub fn solve(mut self, rhs: &mut [Vec<f64>]) -> Option<()> {
        let n = self.n;
        for k in 0..n {
            let pivot = self.get(k, k);
            if pivot.abs() < 1e-300 || !pivot.is_finite() {
                return None;
            }
            let i_end = (k + self.kl).min(n - 1);
            let j_end = (k + self.ku).min(n - 1);
            for i in (k + 1)..=i_end {
                let l = self.get(i, k) / pivot;
                if l == 0.0 {
                    continue;
                }
                for j in k..=j_end {
                    let v = self.get(k, j);
                    if v != 0.0 {
                        self.add(i, j, -l * v);
                    }
                }
                let (top, rest) = rhs.split_at_mut(i);
                for (dst, src) in rest[0].iter_mut().zip(top[k].iter()) {
                    *dst -= l * src;
                }
            }
        }
        for k in (0..n).rev() {
            let j_end = (k + self.ku).min(n - 1);
            for j in (k + 1)..=j_end {
                let a = self.get(k, j);
                if a != 0.0 {
                    let (top, rest) = rhs.split_at_mut(j);
                    for (dst, src) in top[k].iter_mut().zip(rest[0].iter()) {
                        *dst -= a * src;
                    }
                }
            }
            let d = self.get(k, k);
            for v in rhs[k].iter_mut() {
                *v /= d;
            }
        }
        Some(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tridiagonal_system() {
        let n = 6;
        let mut a = BandMatrix::zeros(n, 1, 1);
        for i in 0..n {
            a.add(i, i, 4.0);
            if i > 0 {
                a.add(i, i - 1, 1.0);
            }
            if i + 1 < n {
                a.add(i, i + 1, 1.0);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| i as f64 - 2.5).collect();
        let mut rhs: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut s = 4.0 * x[i];
                if i > 0 {
                    s += x[i - 1];
                }
                if i + 1 < n {
                    s += x[i + 1];
                }
                vec![s]
            })
            .collect();
        a.solve(&mut rhs).unwrap();
        for i in 0..n {
            assert!((rhs[i][0] - x[i]).abs() < 1e-13);
        }
    }
}
