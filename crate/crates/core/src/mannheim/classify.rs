//! Classification of FM curves and generalized helices, and the planar
//! FM conjugate construction.

use std::sync::Arc;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::offset::{OffsetCurve, OffsetDirection};
use crate::curves::{arc_length_map, reparametrize, CurveKind, ParamCurve, Vec3};
use crate::error::{Error, Result};
use crate::frames::{kappa_threshold, modified_frame, ModifiedFrame};

/// Grid used by the classifiers.
pub const CLASSIFY_NODES: usize = 257;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum FmClass {
    Line,
    CircularHelix { r: f64, b: f64 },
    #[serde(rename = "not_fm")]
    NotFM,
}

fn frames(curve: &ParamCurve, n: usize) -> Result<Vec<ModifiedFrame>> {
    curve.domain().grid(n).into_iter().map(|s| modified_frame(curve, s)).collect()
}

fn spread(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// Line, non-planar circular helix, or neither.
pub fn classify_fm(curve: &ParamCurve, tol: f64) -> Result<FmClass> {
    let fr = frames(curve, CLASSIFY_NODES)?;
    let (_, k2_max) = spread(fr.iter().map(|f| f.kappa_sq));
    if k2_max < tol {
        return Ok(FmClass::Line);
    }
    let (k_lo, k_hi) = spread(fr.iter().map(|f| f.kappa()));
    let (t_lo, t_hi) = spread(fr.iter().map(|f| f.tau));
    if k_hi - k_lo > tol || t_hi - t_lo > tol {
        return Ok(FmClass::NotFM);
    }
    let n = fr.len() as f64;
    let k = fr.iter().map(|f| f.kappa()).sum::<f64>() / n;
    let tau = fr.iter().map(|f| f.tau).sum::<f64>() / n;
    if !(k > tol) || tau.abs() <= tol {
        return Ok(FmClass::NotFM);
    }
    let q = k * k + tau * tau;
    Ok(FmClass::CircularHelix { r: k / q, b: tau / q })
}

/// Whether τ/κ is constant within `tol` over the nondegenerate samples, with
/// the axis `u` making ⟨T, u⟩ constant.
///
/// The axis is the least-variance direction of the sampled tangents, oriented
/// so that ⟨T, u⟩ ≥ 0 (or, when that mean vanishes, so that its largest
/// component is positive). It is absent when the flag is false or when the
/// tangents do not pin down a unique direction.
pub fn is_generalized_helix(curve: &ParamCurve, tol: f64) -> Result<(bool, Option<Vec3>)> {
    let fr = frames(curve, CLASSIFY_NODES)?;
    let eps = kappa_threshold(curve);
    let valid: Vec<&ModifiedFrame> = fr.iter().filter(|f| f.kappa_sq > eps).collect();
    if valid.is_empty() {
        return Err(Error::Indeterminate);
    }
    let (lo, hi) = spread(valid.iter().map(|f| f.tau / f.kappa()));
    if hi - lo > tol {
        return Ok((false, None));
    }
    let n = fr.len() as f64;
    let mean = fr.iter().map(|f| f.tangent).sum::<Vec3>() / n;
    let mut cov = Matrix3::zeros();
    for f in &fr {
        let d = f.tangent - mean;
        cov += d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov / n);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let (l0, l1) = (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]);
    if !(l1 > 1e-12 + 1e3 * l0.max(0.0)) {
        return Ok((true, None));
    }
    let mut u: Vec3 = eig.eigenvectors.column(order[0]).into_owned().normalize();
    let m = mean.dot(&u);
    let flip = if m.abs() > 1e-9 { m < 0.0 } else { u[u.iamax()] < 0.0 };
    if flip {
        u = -u;
    }
    Ok((true, Some(u)))
}

/// Conjugate `φ = ψ - ε a n_ψ` of a planar curve, which shares its tangent
/// lines with ψ.
#[derive(Clone, Debug)]
pub struct PlanarConjugate {
    /// Unit-speed reparametrization of φ.
    pub curve: ParamCurve,
    /// φ on the arc-length parameter of ψ.
    pub raw: ParamCurve,
    /// Largest angle between the tangent lines of φ and ψ.
    pub max_tangent_angle: f64,
}

/// Check grid for planarity and regularity.
const PLANAR_NODES: usize = 2001;

pub fn planar_fm_conjugate(partner: &ParamCurve, a: f64, epsilon: f64, tol: f64) -> Result<PlanarConjugate> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParams { kind: "planar_fm_conjugate".into(), message: format!("a must be nonzero, got {a}") });
    }
    let eps = if epsilon < 0.0 { -1.0 } else { 1.0 };
    let fr = frames(partner, PLANAR_NODES)?;
    let max_tau = fr.iter().map(|f| f.tau.abs()).fold(0.0, f64::max);
    if max_tau >= tol {
        return Err(Error::NotPlanar { max_tau });
    }
    let k_eps = kappa_threshold(partner);
    if let Some(f) = fr.iter().find(|f| !(f.kappa_sq > k_eps)) {
        return Err(Error::CurvatureDegenerate { s: f.s, kappa_sq: f.kappa_sq });
    }
    let g: Vec<f64> = fr.iter().map(|f| 1.0 + eps * a * f.kappa()).collect();
    if let Some(i) = g.iter().position(|v| *v == 0.0 || v.signum() != g[0].signum()) {
        return Err(Error::OffsetRegularity { s: fr[i].s });
    }
    let source = OffsetCurve::new(partner.clone(), -eps * a, OffsetDirection::Normal);
    let raw = ParamCurve::custom(CurveKind::Offset, vec![-eps * a], partner.domain(), false, Arc::new(source));
    let mut max_tangent_angle = 0.0f64;
    for f in &fr {
        let d1 = raw.eval_jet(f.s, 1)?.d1;
        let ang = d1.cross(&f.tangent).norm().atan2(d1.dot(&f.tangent).abs());
        max_tangent_angle = max_tangent_angle.max(ang);
    }
    let curve = reparametrize(&raw, &arc_length_map(&raw, 1e-12)?);
    Ok(PlanarConjugate { curve, raw, max_tangent_angle })
}
