//! Curvature profile and initial pose of an existing unit-speed curve.

use super::profile::{CurvatureProfile, FramePose, ScalarFn};
use crate::curves::{ParamCurve, Vec3};
use crate::error::Result;
use crate::frames::modified_frame;

/// Signed curvature and torsion of `curve` tabulated on `nodes` arc-length
/// values, together with the pose at the start of the domain.
///
/// The sign of κ flips wherever the unit normal reverses between neighboring
/// nondegenerate nodes, so the tabulated κ is smooth through inflections and
/// the integrated normal matches the curve's normal on both sides.
pub fn profile_from_curve(curve: &ParamCurve, nodes: usize) -> Result<(CurvatureProfile, FramePose)> {
    let grid = curve.domain().grid(nodes.max(8));
    let mut kappa = Vec::with_capacity(grid.len());
    let mut tau = Vec::with_capacity(grid.len());
    let mut sign = 1.0;
    let mut prev_normal: Option<Vec3> = None;
    let mut first_normal: Option<Vec3> = None;
    let mut first = None;
    for &s in &grid {
        let f = modified_frame(curve, s)?;
        if first.is_none() {
            first = Some(f);
        }
        let k = f.kappa();
        if f.kappa_valid {
            let unit = f.normal / k;
            if let Some(p) = prev_normal {
                if p.dot(&unit) < 0.0 {
                    sign = -sign;
                }
            }
            prev_normal = Some(unit);
            if first_normal.is_none() {
                first_normal = Some(unit * sign);
            }
        }
        kappa.push(sign * k);
        tau.push(f.tau);
    }
    let f0 = first.expect("grid is nonempty");
    let n0 = first_normal.unwrap_or_else(|| any_perpendicular(&f0.tangent));
    let pose = FramePose::new(f0.position, f0.tangent, n0)?;
    let profile = CurvatureProfile::new(ScalarFn::table(grid.clone(), kappa)?, ScalarFn::table(grid, tau)?, curve.domain())
        .with_description(format!("extracted from {} curve", curve.kind()));
    Ok((profile, pose))
}

fn any_perpendicular(t: &Vec3) -> Vec3 {
    let axis = if t.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    (axis - t * t.dot(&axis)).normalize()
}
