//! Curves from prescribed curvature and torsion.
//!
//! The state is `(p, t, n, b)` with unit `t, n, b` and signed κ:
//! `p' = t`, `t' = κn`, `n' = -κt + τb`, `b' = -τn`. The modified frame is
//! recovered as `N = κn`, `B = κb`, which satisfies the modified frame
//! equations wherever κ ≠ 0 and stays finite through curvature zeros, where
//! the `κ'/κ` coefficient of the modified system is singular.

use std::sync::Arc;

use super::profile::{CurvatureProfile, FramePose};
use crate::curves::{CurveJet, CurveKind, JetSource, ParamCurve, Vec3};
use crate::error::{Error, Result};
use crate::frames::{gram_residuals, ModifiedFrame, TorsionKind};
use crate::numeric::ode::{integrate, Halt, StepPolicy, Trajectory};

type State = [f64; 12];

fn unpack(y: &State) -> (Vec3, Vec3, Vec3, Vec3) {
    (
        Vec3::new(y[0], y[1], y[2]),
        Vec3::new(y[3], y[4], y[5]),
        Vec3::new(y[6], y[7], y[8]),
        Vec3::new(y[9], y[10], y[11]),
    )
}

fn pack(p: Vec3, t: Vec3, n: Vec3, b: Vec3) -> State {
    [p.x, p.y, p.z, t.x, t.y, t.z, n.x, n.y, n.z, b.x, b.y, b.z]
}

fn rhs(profile: &CurvatureProfile) -> impl Fn(f64, &State) -> State + '_ {
    move |s, y| {
        let (_, t, n, b) = unpack(y);
        let k = profile.kappa.value(s);
        let tau = profile.tau.value(s);
        pack(t, n * k, -t * k + b * tau, -n * tau)
    }
}

/// Restore orthonormality: normalize `t`, Gram–Schmidt `n`, `b = t × n`.
fn reproject(y: &mut State) {
    let (p, t, n, _) = unpack(y);
    let t = t.normalize();
    let n = (n - t * t.dot(&n)).normalize();
    *y = pack(p, t, n, t.cross(&n));
}

/// Integrated curve: a unit-speed [`ParamCurve`] plus the modified frame at
/// every accepted step.
#[derive(Clone, Debug)]
pub struct Synthesis {
    pub curve: ParamCurve,
    pub frames: Vec<ModifiedFrame>,
    /// Largest Gram residual over the accepted steps.
    pub max_gram_residual: f64,
}

/// Jet source over an integrated trajectory.
#[derive(Debug)]
pub struct SynthesizedCurve {
    profile: CurvatureProfile,
    trajectory: Trajectory<12>,
}

impl SynthesizedCurve {
    fn state(&self, s: f64) -> State {
        let f = rhs(&self.profile);
        let mut y = self.trajectory.eval(&f, s);
        reproject(&mut y);
        y
    }

    pub fn profile(&self) -> &CurvatureProfile {
        &self.profile
    }
}

impl JetSource for SynthesizedCurve {
    fn jet(&self, s: f64, order: usize) -> Result<CurveJet> {
        let (p, t, n, b) = unpack(&self.state(s));
        let [k, k1, k2] = self.profile.kappa.derivs(s);
        let [tau, tau1, _] = self.profile.tau.derivs(s);
        let d2 = n * k;
        let d3 = -t * (k * k) + n * k1 + b * (k * tau);
        let d4 = -t * (3.0 * k * k1) + n * (k2 - k * k * k - k * tau * tau) + b * (2.0 * k1 * tau + k * tau1);
        Ok(CurveJet::new(s, p, [t, d2, d3, d4], order))
    }
}

fn frame_of(s: f64, y: &State, profile: &CurvatureProfile) -> ModifiedFrame {
    let (p, t, n, b) = unpack(y);
    let k = profile.kappa.value(s);
    ModifiedFrame {
        s,
        position: p,
        tangent: t,
        normal: n * k,
        binormal: b * k,
        kappa_sq: k * k,
        tau: profile.tau.value(s),
        torsion_kind: TorsionKind::Regular,
        kappa_valid: k != 0.0,
    }
}

/// Integrate the frame equations for `profile` from `pose` at the start of
/// the profile domain, re-projecting onto the orthonormality constraints
/// after every accepted step.
pub fn integrate_frame(profile: &CurvatureProfile, pose: &FramePose, policy: &StepPolicy) -> Result<Synthesis> {
    let dom = profile.domain;
    if dom.is_empty() || !dom.lo.is_finite() || !dom.hi.is_finite() {
        return Err(Error::InvalidParams { kind: "profile".into(), message: format!("bad domain [{}, {}]", dom.lo, dom.hi) });
    }
    let pose = FramePose::new(pose.p0, pose.t0, pose.n0)?;
    let y0 = pack(pose.p0, pose.t0, pose.n0, pose.b0());
    let f = rhs(profile);
    let out = integrate(&f, dom.lo, y0, dom.hi, policy, |_, y| reproject(y), |_, _| false);
    if let Some(h) = out.halt {
        let last_good_s = out.trajectory.end();
        let reason = match h {
            Halt::StepFloor { .. } => "step size fell below the floor".to_string(),
            Halt::MaxSteps { .. } => "step budget exhausted".to_string(),
            Halt::NonFinite { .. } => "non-finite state".to_string(),
            Halt::Stopped { .. } => "stopped".to_string(),
        };
        return Err(Error::IntegrationFailure { last_good_s, reason });
    }
    let trajectory = out.trajectory;
    let frames: Vec<ModifiedFrame> = trajectory.t.iter().zip(&trajectory.y).map(|(&s, y)| frame_of(s, y, profile)).collect();
    let max_gram_residual = frames.iter().flat_map(gram_residuals).fold(0.0, f64::max);
    let source = SynthesizedCurve { profile: profile.clone(), trajectory };
    let curve = ParamCurve::custom(CurveKind::Synthesized, Vec::new(), dom, true, Arc::new(source));
    Ok(Synthesis { curve, frames, max_gram_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::profile::ScalarFn;
    use std::f64::consts::PI;

    #[test]
    fn unit_circle_closes() {
        let prof = CurvatureProfile::constant(1.0, 0.0, 0.0, 2.0 * PI);
        let syn = integrate_frame(&prof, &FramePose::canonical(), &StepPolicy::with_tol(1e-11)).unwrap();
        let end = syn.curve.point(2.0 * PI).unwrap();
        assert!(end.norm() < 1e-6, "{end}");
        let mid = syn.curve.point(PI).unwrap();
        assert!((mid - Vec3::new(0.0, 2.0, 0.0)).norm() < 1e-6);
        assert!(syn.max_gram_residual < 1e-8);
    }

    #[test]
    fn zero_profile_is_a_line() {
        let prof = CurvatureProfile::constant(0.0, 0.0, 0.0, 5.0);
        let pose = FramePose::new(Vec3::new(1.0, 1.0, 1.0), Vec3::z(), Vec3::x()).unwrap();
        let syn = integrate_frame(&prof, &pose, &StepPolicy::default()).unwrap();
        let p = syn.curve.point(3.0).unwrap();
        assert!((p - Vec3::new(1.0, 1.0, 4.0)).norm() < 1e-12);
    }

    #[test]
    fn jets_are_consistent_with_positions() {
        let prof = CurvatureProfile::new(ScalarFn::Poly(vec![0.0, 1.0]), ScalarFn::Const(0.3), crate::curves::Interval::new(-2.0, 2.0));
        let syn = integrate_frame(&prof, &FramePose::canonical(), &StepPolicy::with_tol(1e-12)).unwrap();
        let c = &syn.curve;
        let h = 1e-4;
        for &s in &[-1.0, 0.0, 0.5, 1.7] {
            let j = c.eval_jet(s, 4).unwrap();
            let jp = c.eval_jet(s + h, 4).unwrap();
            let jm = c.eval_jet(s - h, 4).unwrap();
            for (k, (hi, lo, d)) in [(jp.p, jm.p, j.d1), (jp.d1, jm.d1, j.d2), (jp.d2, jm.d2, j.d3), (jp.d3, jm.d3, j.d4)].into_iter().enumerate() {
                let e = ((hi - lo) / (2.0 * h) - d).norm();
                assert!(e < 1e-6, "s={s} order {} error {e}", k + 1);
            }
        }
    }
}
