//! The Mannheim condition `κ = c(κ² + τ²)` solved for κ, and the partner
//! torsion equation `τ' = (κ/a)(1 + a²τ²)` solved numerically and in closed
//! form `τ = (1/a) tan(∫κ + c0)`.

use std::f64::consts::PI;

use super::profile::{Branch, ScalarFn};
use crate::curves::Interval;
use crate::error::{Error, Result};
use crate::numeric::ode::{integrate, Halt, StepPolicy, Trajectory};

/// Nodes used for feasibility and pole checks.
pub const CHECK_NODES: usize = 2001;
/// Default cap on |τ| for the partner torsion integration.
pub const DEFAULT_BLOW_UP_CAP: f64 = 1e6;

fn nonzero(name: &str, v: f64) -> Result<()> {
    if v == 0.0 || !v.is_finite() {
        return Err(Error::InvalidParams { kind: name.into(), message: format!("constant must be nonzero and finite, got {v}") });
    }
    Ok(())
}

/// κ(s) solving `c κ² - κ + c τ² = 0` on the chosen branch.
///
/// Fails with the list of grid nodes where `4c²τ² > 1`.
pub fn kappa_from_mannheim_condition(c: f64, tau: &ScalarFn, branch: Branch, domain: Interval) -> Result<ScalarFn> {
    nonzero("mannheim_condition", c)?;
    let violations: Vec<f64> = domain
        .grid(CHECK_NODES)
        .into_iter()
        .filter(|&s| {
            let t = tau.value(s);
            !(4.0 * c * c * t * t <= 1.0 + 1e-14) || !t.is_finite()
        })
        .collect();
    if !violations.is_empty() {
        return Err(Error::InfeasibleProfile { violations });
    }
    Ok(ScalarFn::MannheimKappa { c, tau: Box::new(tau.clone()), branch })
}

/// Where and in which direction the partner torsion left the cap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlowUp {
    pub s: f64,
    pub tau: f64,
}

/// Two-sided numerical solution of the partner torsion equation around `s0`.
#[derive(Clone, Debug)]
pub struct TorsionSolution {
    a: f64,
    kappa: ScalarFn,
    forward: Trajectory<1>,
    backward: Trajectory<1>,
    /// Interval actually covered by the solution.
    pub valid: Interval,
    /// Blow-up on the low side and the high side, if any.
    pub blow_up_low: Option<BlowUp>,
    pub blow_up_high: Option<BlowUp>,
}

impl TorsionSolution {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn blow_up(&self) -> Option<BlowUp> {
        self.blow_up_high.or(self.blow_up_low)
    }

    fn rhs(&self) -> impl Fn(f64, &[f64; 1]) -> [f64; 1] + '_ {
        move |s, y| [self.kappa.value(s) / self.a * (1.0 + self.a * self.a * y[0] * y[0])]
    }

    pub fn value(&self, s: f64) -> f64 {
        self.derivs(s)[0]
    }

    /// `[τ, τ', τ'']` with the derivatives taken from the equation itself.
    /// NaN outside [`valid`](Self::valid).
    pub fn derivs(&self, s: f64) -> [f64; 3] {
        if !self.valid.contains(s) {
            return [f64::NAN; 3];
        }
        let s = self.valid.clamp(s);
        let f = self.rhs();
        let tr = if s >= self.forward.start() { &self.forward } else { &self.backward };
        let t = tr.eval(&f, s)[0];
        let a = self.a;
        let [k0, k1, _] = self.kappa.derivs(s);
        let g = 1.0 + a * a * t * t;
        let t1 = k0 / a * g;
        let t2 = k1 / a * g + k0 / a * 2.0 * a * a * t * t1;
        [t, t1, t2]
    }

    pub fn into_fn(self) -> ScalarFn {
        ScalarFn::OdeTorsion(std::sync::Arc::new(self))
    }
}

/// Integrate `τ' = (κ/a)(1 + a²τ²)` from `τ(s0) = tau0` across `window`,
/// stopping at `|τ| > cap` on either side. A blow-up is not an error: the
/// partial solution is returned with its location.
pub fn partner_torsion_ode(
    a: f64,
    kappa: &ScalarFn,
    s0: f64,
    tau0: f64,
    window: Interval,
    policy: &StepPolicy,
    cap: f64,
) -> Result<TorsionSolution> {
    nonzero("partner_torsion", a)?;
    if !window.contains(s0) {
        return Err(Error::OutsideDomain { t: s0, lo: window.lo, hi: window.hi });
    }
    let f = |s: f64, y: &[f64; 1]| [kappa.value(s) / a * (1.0 + a * a * y[0] * y[0])];
    let run = |end: f64| -> Result<(Trajectory<1>, Option<BlowUp>)> {
        let out = integrate(&f, s0, [tau0], end, policy, |_, _| {}, |_, y| y[0].abs() > cap);
        let tr = out.trajectory;
        let last = tr.y.last().expect("nonempty")[0];
        let blow = match out.halt {
            None => None,
            Some(Halt::Stopped { t }) => Some(BlowUp { s: t, tau: last }),
            // Step collapse or overflow close to a pole is the same event seen
            // from the step-size controller.
            Some(Halt::StepFloor { t } | Halt::NonFinite { t }) if last.abs() > cap.sqrt() => Some(BlowUp { s: t, tau: last }),
            Some(h) => return Err(Error::IntegrationFailure { last_good_s: tr.end(), reason: format!("{h:?}") }),
        };
        Ok((tr, blow))
    };
    let (forward, blow_up_high) = run(window.hi)?;
    let (backward, blow_up_low) = run(window.lo)?;
    let valid = Interval::new(backward.end(), forward.end());
    Ok(TorsionSolution { a, kappa: kappa.clone(), forward, backward, valid, blow_up_low, blow_up_high })
}

/// Distance from `x` to the nearest pole `π/2 + kπ` of tan.
pub fn pole_distance(x: f64) -> f64 {
    let r = (x - PI / 2.0).rem_euclid(PI);
    r.min(PI - r)
}

/// `(1/a) tan(∫_{s0}^{s} κ + c0)`, rejected when the argument comes within
/// `margin` of a pole anywhere on `domain`.
pub fn partner_torsion_closed_form(a: f64, kappa: &ScalarFn, s0: f64, c0: f64, domain: Interval, margin: f64) -> Result<ScalarFn> {
    nonzero("partner_torsion", a)?;
    let grid = domain.grid(CHECK_NODES);
    let mut prev: Option<f64> = None;
    for &s in &grid {
        let arg = kappa.integral(s0, s) + c0;
        let dist = pole_distance(arg);
        if dist < margin {
            return Err(Error::PoleProximity { s, argument: arg, distance: dist });
        }
        if let Some(p) = prev {
            let branch = |x: f64| ((x - PI / 2.0) / PI).floor();
            if branch(p) != branch(arg) {
                return Err(Error::PoleProximity { s, argument: arg, distance: 0.0 });
            }
        }
        prev = Some(arg);
    }
    Ok(ScalarFn::PartnerTorsion { a, kappa: Box::new(kappa.clone()), s0, c0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mannheim_kappa_both_branches() {
        let tau = ScalarFn::Const(0.2);
        let d = Interval::new(0.0, 1.0);
        let p = kappa_from_mannheim_condition(2.0, &tau, Branch::Plus, d).unwrap();
        let m = kappa_from_mannheim_condition(2.0, &tau, Branch::Minus, d).unwrap();
        assert!((p.value(0.5) - 0.4).abs() < 1e-15);
        assert!((m.value(0.5) - 0.1).abs() < 1e-15);
        let flat = kappa_from_mannheim_condition(2.0, &ScalarFn::Const(0.0), Branch::Plus, d).unwrap();
        assert!((flat.value(0.1) - 0.5).abs() < 1e-15);
        let err = kappa_from_mannheim_condition(1.0, &ScalarFn::Const(0.6), Branch::Plus, d).unwrap_err();
        assert!(matches!(err, Error::InfeasibleProfile { ref violations } if violations.len() == CHECK_NODES));
    }

    #[test]
    fn ode_reproduces_tangent() {
        let sol = partner_torsion_ode(1.0, &ScalarFn::Const(1.0), 0.0, 0.0, Interval::new(-1.2, 1.2), &StepPolicy::with_tol(1e-12), DEFAULT_BLOW_UP_CAP).unwrap();
        assert!(sol.blow_up().is_none());
        for i in 0..=48 {
            let s = -1.2 + 0.05 * i as f64;
            assert!((sol.value(s) - s.tan()).abs() < 1e-8, "s={s}");
        }
    }

    #[test]
    fn ode_reports_pole() {
        let sol = partner_torsion_ode(1.0, &ScalarFn::Const(1.0), 0.0, 0.0, Interval::new(0.0, 3.0), &StepPolicy::with_tol(1e-10), DEFAULT_BLOW_UP_CAP).unwrap();
        let b = sol.blow_up_high.expect("pole");
        assert!((b.s - PI / 2.0).abs() < 1e-3, "{b:?}");
        assert!(sol.value(2.0).is_nan());
    }

    #[test]
    fn closed_form_pole_margin() {
        let k = ScalarFn::Const(1.0);
        assert!(partner_torsion_closed_form(1.0, &k, 0.0, 0.0, Interval::new(-1.2, 1.2), 1e-3).is_ok());
        let e = partner_torsion_closed_form(1.0, &k, 0.0, 0.0, Interval::new(0.0, 3.0), 1e-3).unwrap_err();
        assert!(matches!(e, Error::PoleProximity { .. }));
        let zero = partner_torsion_closed_form(2.0, &ScalarFn::Const(0.0), 0.0, 0.0, Interval::new(0.0, 5.0), 1e-3).unwrap();
        assert_eq!(zero.value(3.0), 0.0);
    }
}
