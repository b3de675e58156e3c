//! Dormand–Prince 5(4) with step-size control and a post-step projection hook.

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Step-size policy for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepPolicy {
    pub rtol: f64,
    pub atol: f64,
    /// Smallest step magnitude before the integration is declared failed.
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for StepPolicy {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-9, h_min: 1e-12, h_max: f64::INFINITY, max_steps: 2_000_000 }
    }
}

impl StepPolicy {
    pub fn with_tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, ..Self::default() }
    }
}

/// Accepted nodes of an integration, ordered in the direction of travel.
#[derive(Clone, Debug)]
pub struct Trajectory<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    /// Step size proposed after the final step.
    pub last_h: f64,
}

/// Why [`integrate`] stopped short of the requested end point.
#[derive(Clone, Debug, PartialEq)]
pub enum Halt {
    /// The user predicate requested a stop after the node at `t`.
    Stopped { t: f64 },
    /// Step size fell below the floor.
    StepFloor { t: f64 },
    /// Step budget exhausted.
    MaxSteps { t: f64 },
    /// The right-hand side produced a non-finite value.
    NonFinite { t: f64 },
}

#[derive(Clone, Debug)]
pub struct Outcome<const N: usize> {
    pub trajectory: Trajectory<N>,
    pub halt: Option<Halt>,
}

/// Single Dormand–Prince step of size `h` (signed). Returns the fifth-order
/// solution and the embedded error estimate.
pub fn dp5_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> ([f64; N], [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, y);
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = f(t + C[s] * h, &ys);
    }
    let mut y5 = *y;
    let mut err = [0.0; N];
    for s in 0..7 {
        for i in 0..N {
            y5[i] += h * B[s] * k[s][i];
            err[i] += h * E[s] * k[s][i];
        }
    }
    (y5, err)
}

fn error_norm<const N: usize>(y0: &[f64; N], y1: &[f64; N], err: &[f64; N], p: &StepPolicy) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let scale = p.atol + p.rtol * y0[i].abs().max(y1[i].abs());
        let r = err[i] / scale;
        acc += r * r;
    }
    (acc / N as f64).sqrt()
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
///
/// `project` is applied to every accepted state; `stop` is consulted after each
/// accepted step and ends the integration early when it returns `true`.
pub fn integrate<const N: usize, F, P, S>(
    f: &F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    policy: &StepPolicy,
    mut project: P,
    mut stop: S,
) -> Outcome<N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    P: FnMut(f64, &mut [f64; N]),
    S: FnMut(f64, &[f64; N]) -> bool,
{
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let mut tr = Trajectory { t: vec![t0], y: vec![y0], last_h: 0.0 };
    if span == 0.0 {
        return Outcome { trajectory: tr, halt: None };
    }
    let mut t = t0;
    let mut y = y0;
    let mut h = (span / 100.0).min(policy.h_max).max(policy.h_min);
    let mut steps = 0usize;
    loop {
        let remaining = (t1 - t) * dir;
        if remaining <= span * 1e-15 {
            break;
        }
        if steps >= policy.max_steps {
            tr.last_h = h;
            return Outcome { trajectory: tr, halt: Some(Halt::MaxSteps { t }) };
        }
        steps += 1;
        let last = h >= remaining;
        let step = if last { remaining } else { h };
        let (mut y_new, err) = dp5_step(f, t, &y, dir * step);
        if y_new.iter().any(|v| !v.is_finite()) {
            if step <= policy.h_min {
                tr.last_h = h;
                return Outcome { trajectory: tr, halt: Some(Halt::NonFinite { t }) };
            }
            h = step * 0.25;
            continue;
        }
        let en = error_norm(&y, &y_new, &err, policy);
        if en <= 1.0 {
            t = if last { t1 } else { t + dir * step };
            project(t, &mut y_new);
            y = y_new;
            tr.t.push(t);
            tr.y.push(y);
            let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            h = (step * fac).min(policy.h_max);
            if stop(t, &y) {
                tr.last_h = h;
                return Outcome { trajectory: tr, halt: Some(Halt::Stopped { t }) };
            }
        } else {
            let fac = (0.9 * en.powf(-0.2)).clamp(0.1, 1.0);
            h = step * fac;
            if h < policy.h_min {
                tr.last_h = h;
                return Outcome { trajectory: tr, halt: Some(Halt::StepFloor { t }) };
            }
        }
    }
    tr.last_h = h;
    Outcome { trajectory: tr, halt: None }
}

impl<const N: usize> Trajectory<N> {
    pub fn start(&self) -> f64 {
        self.t[0]
    }

    pub fn end(&self) -> f64 {
        *self.t.last().expect("trajectory has at least one node")
    }

    /// Index of the node from which `t` is reached by a step in the direction
    /// of travel (the last node not beyond `t`).
    pub fn node_before(&self, t: f64) -> usize {
        let forward = self.end() >= self.start();
        let idx = if forward {
            self.t.partition_point(|&x| x <= t)
        } else {
            self.t.partition_point(|&x| x >= t)
        };
        idx.saturating_sub(1).min(self.t.len() - 1)
    }

    /// State at `t`, reached by one Dormand–Prince step from the preceding node.
    /// The step is never longer than an accepted one, so the local error stays
    /// within the integration tolerance.
    pub fn eval<F>(&self, f: &F, t: f64) -> [f64; N]
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let i = self.node_before(t);
        let h = t - self.t[i];
        if h == 0.0 {
            return self.y[i];
        }
        dp5_step(f, self.t[i], &self.y[i], h).0
    }
}
