//! Modified orthogonal frame `{T, N, B}` and classical Frenet frame of a
//! unit-speed curve.
//!
//! `T = φ'`, `N = T'`, `B = T × N`, so `⟨N, N⟩ = ⟨B, B⟩ = κ²`. The frame
//! equations are
//!
//! ```text
//! T' = N
//! N' = -κ² T + (κ'/κ) N + τ B
//! B' =        -τ N + (κ'/κ) B
//! ```
//!
//! and torsion is `det(φ', φ'', φ''') / κ²`, extended through curvature zeros
//! by its removable-singularity limit.

use serde::{Deserialize, Serialize};

use crate::curves::{CurveJet, CurveKind, ParamCurve, Vec3};
use crate::error::{Error, Result};

/// Tolerance on `|⟨d1, d1⟩ - 1|` for a curve to count as unit speed.
pub const UNIT_SPEED_TOL: f64 = 1e-6;
/// Nodes used to estimate the curvature scale of a curve.
pub const KAPPA_SCALE_NODES: usize = 257;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionKind {
    /// `det / κ²` evaluated directly.
    Regular,
    /// Curvature below threshold; value is the average of the two neighbors.
    RemovableLimit,
    /// Curvature below threshold at the point and its neighbors; value 0.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Torsion {
    pub value: f64,
    pub kind: TorsionKind,
}

/// Modified frame at arc length `s`. `normal` and `binormal` have length κ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModifiedFrame {
    pub s: f64,
    pub position: Vec3,
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub kappa_sq: f64,
    pub tau: f64,
    pub torsion_kind: TorsionKind,
    pub kappa_valid: bool,
}

impl ModifiedFrame {
    pub fn kappa(&self) -> f64 {
        self.kappa_sq.sqrt()
    }
}

/// Classical orthonormal frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrenetFrame {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
}

/// Norms of the finite-difference residuals of the three frame equations.
/// `n_row` and `b_row` are `None` where κ is below threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeResidual {
    pub t_row: f64,
    pub n_row: Option<f64>,
    pub b_row: Option<f64>,
}

impl OdeResidual {
    pub fn max(&self) -> f64 {
        self.t_row.max(self.n_row.unwrap_or(0.0)).max(self.b_row.unwrap_or(0.0))
    }
}

/// Default frame tolerance: tight for exact jets, loose for fitted data.
pub fn frame_tolerance(curve: &ParamCurve) -> f64 {
    match curve.kind() {
        CurveKind::Sampled => 1e-5,
        _ => 1e-9,
    }
}

/// `det(d1, d2, d3)`.
pub fn triple(jet: &CurveJet) -> f64 {
    jet.d1.dot(&jet.d2.cross(&jet.d3))
}

/// Curvature degeneracy threshold `ε_κ = 1e-10 (1 + max κ²)` with the
/// maximum taken over a uniform grid. Cached per curve.
pub fn kappa_threshold(curve: &ParamCurve) -> f64 {
    *curve.kappa_eps_cell().get_or_init(|| {
        let max = curve
            .domain()
            .grid(KAPPA_SCALE_NODES)
            .into_iter()
            .filter_map(|s| curve.eval_jet(s, 2).ok())
            .map(|j| j.d2.norm_squared())
            .filter(|k| k.is_finite())
            .fold(0.0, f64::max);
        1e-10 * (1.0 + max)
    })
}

fn check_unit_speed(jet: &CurveJet) -> Result<()> {
    let sq = jet.d1.norm_squared();
    if (sq - 1.0).abs() > UNIT_SPEED_TOL || !sq.is_finite() {
        return Err(Error::NotUnitSpeed { s: jet.t, speed_sq: sq });
    }
    Ok(())
}

fn removable_offset(eps: f64) -> f64 {
    1e-5f64.max(eps.powf(0.25))
}

/// Torsion at `s`, through the removable-singularity limit where κ² < ε_κ.
pub fn torsion(curve: &ParamCurve, s: f64) -> Result<Torsion> {
    let jet = curve.eval_jet(s, 3)?;
    check_unit_speed(&jet)?;
    Ok(torsion_at(curve, &jet, kappa_threshold(curve)))
}

fn torsion_at(curve: &ParamCurve, jet: &CurveJet, eps: f64) -> Torsion {
    let k2 = jet.d2.norm_squared();
    if k2 >= eps {
        return Torsion { value: triple(jet) / k2, kind: TorsionKind::Regular };
    }
    let dom = curve.domain();
    let h = removable_offset(eps);
    let side = |x: f64| -> Option<(f64, f64)> {
        let x = dom.clamp(x);
        if x == jet.t {
            return None;
        }
        let j = curve.eval_jet(x, 3).ok()?;
        let k2 = j.d2.norm_squared();
        (k2 >= eps).then(|| (x, triple(&j) / k2))
    };
    // One-sided: extrapolate linearly from two points on the good side.
    let one_sided = |near: (f64, f64), dir: f64| -> f64 {
        match side(jet.t + 2.0 * dir * h) {
            Some(far) if far.0 != near.0 => near.1 + (near.1 - far.1) * (jet.t - near.0) / (near.0 - far.0),
            _ => near.1,
        }
    };
    match (side(jet.t - h), side(jet.t + h)) {
        (Some(a), Some(b)) => {
            let w = (jet.t - a.0) / (b.0 - a.0);
            Torsion { value: a.1 + w * (b.1 - a.1), kind: TorsionKind::RemovableLimit }
        }
        (Some(v), None) => Torsion { value: one_sided(v, -1.0), kind: TorsionKind::RemovableLimit },
        (None, Some(v)) => Torsion { value: one_sided(v, 1.0), kind: TorsionKind::RemovableLimit },
        (None, None) => Torsion { value: 0.0, kind: TorsionKind::Degenerate },
    }
}

/// Modified frame of a unit-speed curve at arc length `s`.
pub fn modified_frame(curve: &ParamCurve, s: f64) -> Result<ModifiedFrame> {
    let jet = curve.eval_jet(s, 3)?;
    check_unit_speed(&jet)?;
    let eps = kappa_threshold(curve);
    Ok(frame_from_jet(curve, &jet, eps))
}

fn frame_from_jet(curve: &ParamCurve, jet: &CurveJet, eps: f64) -> ModifiedFrame {
    let tangent = jet.d1;
    let normal = jet.d2;
    let binormal = tangent.cross(&normal);
    let kappa_sq = normal.norm_squared();
    let tor = torsion_at(curve, jet, eps);
    ModifiedFrame {
        s: jet.t,
        position: jet.p,
        tangent,
        normal,
        binormal,
        kappa_sq,
        tau: tor.value,
        torsion_kind: tor.kind,
        kappa_valid: kappa_sq > eps,
    }
}

/// Modified frames on `n` uniformly spaced arc-length values.
pub fn sample_frames(curve: &ParamCurve, n: usize) -> Result<Vec<ModifiedFrame>> {
    curve.domain().grid(n).into_iter().map(|s| modified_frame(curve, s)).collect()
}

/// Classical frame `t = T`, `n = N/κ`, `b = B/κ`.
pub fn frenet_frame(frame: &ModifiedFrame) -> Result<FrenetFrame> {
    if !frame.kappa_valid {
        return Err(Error::CurvatureDegenerate { s: frame.s, kappa_sq: frame.kappa_sq });
    }
    let k = frame.kappa();
    Ok(FrenetFrame { t: frame.tangent, n: frame.normal / k, b: frame.binormal / k })
}

/// `|⟨T,T⟩-1|, |⟨N,N⟩-κ²|, |⟨B,B⟩-κ²|, |⟨T,N⟩|, |⟨T,B⟩|, |⟨N,B⟩|`.
pub fn gram_residuals(frame: &ModifiedFrame) -> [f64; 6] {
    let (t, n, b, k2) = (frame.tangent, frame.normal, frame.binormal, frame.kappa_sq);
    [
        (t.dot(&t) - 1.0).abs(),
        (n.dot(&n) - k2).abs(),
        (b.dot(&b) - k2).abs(),
        t.dot(&n).abs(),
        t.dot(&b).abs(),
        n.dot(&b).abs(),
    ]
}

/// `κ'/κ = ⟨d2, d3⟩ / κ²` from an exact jet.
pub fn log_kappa_rate(jet: &CurveJet) -> f64 {
    jet.d2.dot(&jet.d3) / jet.d2.norm_squared()
}

/// Residuals of the frame equations at `s`, with central differences of step
/// `h` on the left and analytic coefficients on the right.
pub fn frame_ode_residual(curve: &ParamCurve, s: f64, h: f64) -> Result<OdeResidual> {
    let dom = curve.domain();
    if !(h > 0.0) || !dom.contains(s - h) || !dom.contains(s + h) {
        return Err(Error::OutsideDomain { t: if dom.contains(s - h) { s + h } else { s - h }, lo: dom.lo, hi: dom.hi });
    }
    let eps = kappa_threshold(curve);
    let jet = curve.eval_jet(s, 3)?;
    check_unit_speed(&jet)?;
    let f = frame_from_jet(curve, &jet, eps);
    let frame_at = |x: f64| -> Result<(Vec3, Vec3, Vec3)> {
        let j = curve.eval_jet(x, 2)?;
        Ok((j.d1, j.d2, j.d1.cross(&j.d2)))
    };
    let (tp, np, bp) = frame_at(s + h)?;
    let (tm, nm, bm) = frame_at(s - h)?;
    let dt = (tp - tm) / (2.0 * h);
    let t_row = (dt - f.normal).norm();
    if !f.kappa_valid {
        return Ok(OdeResidual { t_row, n_row: None, b_row: None });
    }
    let dn = (np - nm) / (2.0 * h);
    let db = (bp - bm) / (2.0 * h);
    let rate = log_kappa_rate(&jet);
    let n_rhs = -f.kappa_sq * f.tangent + rate * f.normal + f.tau * f.binormal;
    let b_rhs = -f.tau * f.normal + rate * f.binormal;
    Ok(OdeResidual { t_row, n_row: Some((dn - n_rhs).norm()), b_row: Some((db - b_rhs).norm()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{arc_length_map, make_catalog_curve, reparametrize};

    fn unit(kind: CurveKind, params: &[f64]) -> ParamCurve {
        let c = make_catalog_curve(kind, params).unwrap();
        reparametrize(&c, &arc_length_map(&c, 1e-13).unwrap())
    }

    #[test]
    fn helix_frame_at_start() {
        let h = unit(CurveKind::CircularHelix, &[2.0, 1.0]);
        let f = modified_frame(&h, 0.0).unwrap();
        let r5 = 5f64.sqrt();
        assert!((f.tangent - Vec3::new(0.0, 2.0, 1.0) / r5).norm() < 1e-12);
        assert!((f.normal - Vec3::new(-0.4, 0.0, 0.0)).norm() < 1e-12);
        assert!((f.binormal - Vec3::new(0.0, -2.0 / (5.0 * r5), 4.0 / (5.0 * r5))).norm() < 1e-12);
        assert!((f.kappa_sq - 4.0 / 25.0).abs() < 1e-12);
        assert!((f.tau - 0.2).abs() < 1e-12);
        let fr = frenet_frame(&f).unwrap();
        assert!((fr.n - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn line_frame_is_degenerate() {
        let l = unit(CurveKind::Line, &[0.0, 0.0, 1.0]);
        let f = modified_frame(&l, 0.5).unwrap();
        assert_eq!(f.kappa_sq, 0.0);
        assert!(!f.kappa_valid);
        assert_eq!(f.torsion_kind, TorsionKind::Degenerate);
        assert_eq!(f.tau, 0.0);
        assert!(frenet_frame(&f).is_err());
        let r = frame_ode_residual(&l, 0.5, 1e-4).unwrap();
        assert!(r.t_row < 1e-10);
        assert!(r.n_row.is_none() && r.b_row.is_none());
    }

    #[test]
    fn planar_cubic_inflection_uses_removable_limit() {
        let c = unit(CurveKind::PlanarCubic, &[]);
        let s0 = c.arc_length().unwrap().forward(0.0);
        let t = torsion(&c, s0).unwrap();
        assert_eq!(t.kind, TorsionKind::RemovableLimit);
        assert!(t.value.abs() < 1e-8);
        let f = modified_frame(&c, s0).unwrap();
        assert!(!f.kappa_valid);
        assert!(frenet_frame(&f).is_err());
    }

    #[test]
    fn non_unit_speed_is_rejected() {
        let h = make_catalog_curve(CurveKind::CircularHelix, &[2.0, 1.0]).unwrap();
        assert!(matches!(modified_frame(&h, 0.0), Err(Error::NotUnitSpeed { .. })));
    }

    #[test]
    fn ode_residual_small_on_helix_and_second_order_on_cubic() {
        let h = unit(CurveKind::CircularHelix, &[2.0, 1.0]);
        assert!(frame_ode_residual(&h, 3.0, 1e-4).unwrap().max() < 1e-6);
        let c = unit(CurveKind::TwistedCubic, &[]);
        let s = 0.7 * c.domain().hi;
        let e1 = frame_ode_residual(&c, s, 2e-3).unwrap().max();
        let e2 = frame_ode_residual(&c, s, 1e-3).unwrap().max();
        assert!(e1 / e2 > 3.5 && e1 / e2 < 4.5, "{e1} {e2}");
    }

    #[test]
    fn gram_residuals_vanish_on_catalog() {
        let c = unit(CurveKind::TwistedCubic, &[]);
        for f in sample_frames(&c, 50).unwrap() {
            assert!(gram_residuals(&f).iter().all(|r| *r < 1e-10));
        }
    }
}
