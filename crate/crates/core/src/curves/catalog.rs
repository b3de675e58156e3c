//! Analytic catalog curves with exact jets.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{CurveJet, CurveKind, Interval, ParamCurve, Vec3};
use crate::error::{Error, Result};

fn invalid(kind: CurveKind, message: impl Into<String>) -> Error {
    Error::InvalidParams { kind: kind.name().into(), message: message.into() }
}

fn expect_len(kind: CurveKind, params: &[f64], allowed: &[usize]) -> Result<()> {
    if allowed.contains(&params.len()) {
        Ok(())
    } else {
        Err(invalid(kind, format!("expected {allowed:?} parameters, got {}", params.len())))
    }
}

/// Build an analytic curve.
///
/// Parameter layouts:
/// - `Line`: `[]` (x axis), `[dx, dy, dz]` or `[px, py, pz, dx, dy, dz]`; domain `[0, 1]`.
/// - `Circle`: `[R]` in the xy plane; domain `[0, 2π]`.
/// - `CircularHelix`: `[r, b]`, `(r cos t, r sin t, b t)`; domain `[0, 4π]`.
/// - `Ellipse`: `[a, b]`, `(a cos t, b sin t, 0)`; domain `[0, 2π]`.
/// - `PlanarCubic`: `[]`, `(t, t³, 0)`; domain `[-1, 1]`.
/// - `TwistedCubic`: `[]`, `(t, t², t³)`; domain `[-1, 1]`.
pub fn make_catalog_curve(kind: CurveKind, params: &[f64]) -> Result<ParamCurve> {
    if params.iter().any(|p| !p.is_finite()) {
        return Err(invalid(kind, "parameters must be finite"));
    }
    let (stored, domain) = match kind {
        CurveKind::Line => {
            expect_len(kind, params, &[0, 3, 6])?;
            let full = match params.len() {
                0 => vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                3 => vec![0.0, 0.0, 0.0, params[0], params[1], params[2]],
                _ => params.to_vec(),
            };
            if Vec3::new(full[3], full[4], full[5]).norm() == 0.0 {
                return Err(invalid(kind, "direction must be nonzero"));
            }
            (full, Interval::new(0.0, 1.0))
        }
        CurveKind::Circle => {
            expect_len(kind, params, &[0, 1])?;
            let r = params.first().copied().unwrap_or(1.0);
            if !(r > 0.0) {
                return Err(invalid(kind, format!("radius must be positive, got {r}")));
            }
            (vec![r], Interval::new(0.0, 2.0 * PI))
        }
        CurveKind::CircularHelix => {
            expect_len(kind, params, &[2])?;
            if !(params[0] > 0.0) {
                return Err(invalid(kind, format!("radius r must be positive, got {}", params[0])));
            }
            (params.to_vec(), Interval::new(0.0, 4.0 * PI))
        }
        CurveKind::Ellipse => {
            expect_len(kind, params, &[2])?;
            if !(params[0] > 0.0 && params[1] > 0.0) {
                return Err(invalid(kind, "semi-axes must be positive"));
            }
            (params.to_vec(), Interval::new(0.0, 2.0 * PI))
        }
        CurveKind::PlanarCubic | CurveKind::TwistedCubic => {
            expect_len(kind, params, &[0])?;
            (Vec::new(), Interval::new(-1.0, 1.0))
        }
        CurveKind::Sampled | CurveKind::Synthesized | CurveKind::Offset => {
            return Err(invalid(kind, "not a catalog kind"));
        }
    };
    Ok(ParamCurve::catalog(kind, stored, domain))
}

pub(super) fn jet(kind: CurveKind, p: &[f64], t: f64, order: usize) -> CurveJet {
    let (c, s) = (t.cos(), t.sin());
    let z = Vec3::zeros();
    let (pos, d) = match kind {
        CurveKind::Line => {
            let o = Vec3::new(p[0], p[1], p[2]);
            let dir = Vec3::new(p[3], p[4], p[5]);
            (o + dir * t, [dir, z, z, z])
        }
        CurveKind::Circle => {
            let r = p[0];
            (
                Vec3::new(r * c, r * s, 0.0),
                [Vec3::new(-r * s, r * c, 0.0), Vec3::new(-r * c, -r * s, 0.0), Vec3::new(r * s, -r * c, 0.0), Vec3::new(r * c, r * s, 0.0)],
            )
        }
        CurveKind::CircularHelix => {
            let (r, b) = (p[0], p[1]);
            (
                Vec3::new(r * c, r * s, b * t),
                [Vec3::new(-r * s, r * c, b), Vec3::new(-r * c, -r * s, 0.0), Vec3::new(r * s, -r * c, 0.0), Vec3::new(r * c, r * s, 0.0)],
            )
        }
        CurveKind::Ellipse => {
            let (a, b) = (p[0], p[1]);
            (
                Vec3::new(a * c, b * s, 0.0),
                [Vec3::new(-a * s, b * c, 0.0), Vec3::new(-a * c, -b * s, 0.0), Vec3::new(a * s, -b * c, 0.0), Vec3::new(a * c, b * s, 0.0)],
            )
        }
        CurveKind::PlanarCubic => (
            Vec3::new(t, t * t * t, 0.0),
            [Vec3::new(1.0, 3.0 * t * t, 0.0), Vec3::new(0.0, 6.0 * t, 0.0), Vec3::new(0.0, 6.0, 0.0), z],
        ),
        CurveKind::TwistedCubic => (
            Vec3::new(t, t * t, t * t * t),
            [Vec3::new(1.0, 2.0 * t, 3.0 * t * t), Vec3::new(0.0, 2.0, 6.0 * t), Vec3::new(0.0, 0.0, 6.0), z],
        ),
        CurveKind::Sampled | CurveKind::Synthesized | CurveKind::Offset => unreachable!("not a catalog kind"),
    };
    CurveJet::new(t, pos, d, order)
}

/// Parse `kind[:key=value,...]`, e.g. `helix:r=2,b=1`, `circle:r=3`,
/// `ellipse:a=2,b=1`, `line:px=0,py=0,pz=0,dx=0,dy=0,dz=1`, `twisted_cubic`.
/// The optional keys `t0` and `t1` override the parameter domain.
pub fn parse_curve_spec(spec: &str) -> Result<ParamCurve> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut kv = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value in curve spec, got '{item}'")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad number '{v}' in curve spec")))?;
        kv.insert(k.trim().to_string(), v);
    }
    let any_dir = ["dx", "dy", "dz"].iter().any(|k| kv.contains_key(*k));
    let mut take = |k: &str| kv.remove(k);
    let kind = match name.trim() {
        "line" => CurveKind::Line,
        "circle" => CurveKind::Circle,
        "helix" | "circular_helix" => CurveKind::CircularHelix,
        "ellipse" => CurveKind::Ellipse,
        "planar_cubic" | "cubic" => CurveKind::PlanarCubic,
        "twisted_cubic" => CurveKind::TwistedCubic,
        other => return Err(Error::Parse(format!("unknown curve kind '{other}'"))),
    };
    let params = match kind {
        CurveKind::Line => {
            let keys = ["px", "py", "pz", "dx", "dy", "dz"];
            let defaults = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0];
            keys.iter()
                .zip(defaults)
                .map(|(k, d)| take(k).unwrap_or(if any_dir && k.starts_with('d') { 0.0 } else { d }))
                .collect()
        }
        CurveKind::Circle => vec![take("r").unwrap_or(1.0)],
        CurveKind::CircularHelix => vec![take("r").unwrap_or(1.0), take("b").unwrap_or(1.0)],
        CurveKind::Ellipse => vec![take("a").unwrap_or(2.0), take("b").unwrap_or(1.0)],
        _ => Vec::new(),
    };
    let (t0, t1) = (take("t0"), take("t1"));
    if let Some(k) = kv.keys().next() {
        return Err(Error::Parse(format!("unknown key '{k}' for curve kind {kind}")));
    }
    let curve = make_catalog_curve(kind, &params)?;
    match (t0, t1) {
        (None, None) => Ok(curve),
        (lo, hi) => {
            let d = curve.domain();
            curve.with_domain(lo.unwrap_or(d.lo), hi.unwrap_or(d.hi))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helix_jet_at_zero() {
        let h = make_catalog_curve(CurveKind::CircularHelix, &[2.0, 1.0]).unwrap();
        let j = h.eval_jet(0.0, 2).unwrap();
        assert_eq!(j.p, Vec3::new(2.0, 0.0, 0.0));
        assert_eq!(j.d1, Vec3::new(0.0, 2.0, 1.0));
        assert_eq!(j.d2, Vec3::new(-2.0, 0.0, 0.0));
        assert_eq!(j.d3, Vec3::zeros());
    }

    #[test]
    fn line_has_vanishing_higher_derivatives() {
        let l = make_catalog_curve(CurveKind::Line, &[0.0, 0.0, 1.0]).unwrap();
        let j = l.eval_jet(0.7, 4).unwrap();
        assert!((j.p - Vec3::new(0.0, 0.0, 0.7)).norm() < 1e-15);
        assert_eq!(j.d2, Vec3::zeros());
        assert_eq!(j.d4, Vec3::zeros());
    }

    #[test]
    fn planar_cubic_derivatives() {
        let c = make_catalog_curve(CurveKind::PlanarCubic, &[]).unwrap();
        let j = c.eval_jet(1.0, 3).unwrap();
        assert_eq!(j.d1, Vec3::new(1.0, 3.0, 0.0));
        assert_eq!(j.d2, Vec3::new(0.0, 6.0, 0.0));
        assert_eq!(j.d3, Vec3::new(0.0, 6.0, 0.0));
        assert_eq!(c.eval_jet(0.0, 2).unwrap().d2, Vec3::zeros());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(make_catalog_curve(CurveKind::CircularHelix, &[0.0, 1.0]).is_err());
        assert!(make_catalog_curve(CurveKind::CircularHelix, &[-1.0, 1.0]).is_err());
        assert!(make_catalog_curve(CurveKind::Circle, &[0.0]).is_err());
        assert!(make_catalog_curve(CurveKind::Line, &[0.0, 0.0, 0.0]).is_err());
        assert!(make_catalog_curve(CurveKind::Sampled, &[]).is_err());
    }

    #[test]
    fn parses_specs() {
        let h = parse_curve_spec("helix:r=2,b=1").unwrap();
        assert_eq!(h.params(), &[2.0, 1.0]);
        let l = parse_curve_spec("line:dz=1,t1=3").unwrap();
        assert_eq!(l.params(), &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(l.domain().hi, 3.0);
        assert!(parse_curve_spec("helix:q=1").is_err());
        assert!(parse_curve_spec("spiral").is_err());
    }

    #[test]
    fn jets_match_finite_differences_at_second_order() {
        for kind in [CurveKind::CircularHelix, CurveKind::Ellipse, CurveKind::TwistedCubic, CurveKind::PlanarCubic] {
            let params: &[f64] = match kind {
                CurveKind::CircularHelix => &[2.0, 1.0],
                CurveKind::Ellipse => &[2.0, 1.0],
                _ => &[],
            };
            let c = make_catalog_curve(kind, params).unwrap();
            let t = 0.3;
            let err = |h: f64| {
                let jp = c.eval_jet(t + h, 3).unwrap();
                let jm = c.eval_jet(t - h, 3).unwrap();
                let j = c.eval_jet(t, 4).unwrap();
                ((jp.p - jm.p) / (2.0 * h) - j.d1).norm() + ((jp.d3 - jm.d3) / (2.0 * h) - j.d4).norm()
            };
            let (e1, e2) = (err(1e-3), err(1e-4));
            assert!(e2 < 1e-6, "{kind}: {e2}");
            if e1 > 1e-12 {
                assert!(e1 / e2 > 50.0, "{kind}: ratio {}", e1 / e2);
            }
        }
    }
}
