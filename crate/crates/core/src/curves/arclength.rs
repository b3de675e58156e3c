//! Arc-length maps and unit-speed reparametrization.

use super::{CurveJet, ParamCurve, Vec3};
use crate::error::{Error, Result};
use crate::numeric::quadrature::{adaptive_panels, gk15, Panel};

/// Monotone map between a curve parameter `t` and arc length `s`.
#[derive(Clone, Debug)]
pub struct ArcLengthMap {
    curve: ParamCurve,
    panels: Vec<Panel>,
    // Arc length at the start of each panel; one extra entry for the total.
    cumulative: Vec<f64>,
    tol: f64,
}

fn speed(curve: &ParamCurve, t: f64) -> f64 {
    let d = curve.domain();
    curve.eval_jet(d.clamp(t), 1).map(|j| j.d1.norm()).unwrap_or(f64::NAN)
}

/// Arc-length map of a regular curve, with quadrature error below
/// `tol · total_length`.
pub fn arc_length_map(curve: &ParamCurve, tol: f64) -> Result<ArcLengthMap> {
    arc_length_map_with(curve, tol, false)
}

/// As [`arc_length_map`]; with `allow_isolated_zeros` the regularity check is
/// skipped so curves whose speed touches zero at isolated points (cusps of an
/// offset curve) still get a map.
pub fn arc_length_map_with(curve: &ParamCurve, tol: f64, allow_isolated_zeros: bool) -> Result<ArcLengthMap> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams { kind: "arc_length_map".into(), message: format!("tol must be positive, got {tol}") });
    }
    let dom = curve.domain();
    let threshold = 1e-12 * dom.len().max(1.0);
    let f = |t: f64| speed(curve, t);

    // A dense probe catches speed zeros that quadrature nodes might straddle.
    let probe = dom.grid(1025);
    let mut min_speed = f64::INFINITY;
    for &t in &probe {
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::IrregularCurve { t, speed: v });
        }
        if v < threshold && !allow_isolated_zeros {
            return Err(Error::IrregularCurve { t, speed: v });
        }
        min_speed = min_speed.min(v);
    }
    if allow_isolated_zeros && probe.iter().all(|&t| f(t) < threshold) {
        return Err(Error::IrregularCurve { t: dom.lo, speed: min_speed });
    }

    let rough: f64 = adaptive_panels(&f, dom.lo, dom.hi, 1e-6 * dom.len(), 16).iter().map(|p| p.integral).sum();
    let panels = adaptive_panels(&f, dom.lo, dom.hi, tol * rough.max(1e-300), 32);
    let mut cumulative = Vec::with_capacity(panels.len() + 1);
    let mut acc = 0.0;
    cumulative.push(0.0);
    for p in &panels {
        acc += p.integral;
        cumulative.push(acc);
    }
    Ok(ArcLengthMap { curve: curve.clone(), panels, cumulative, tol })
}

impl ArcLengthMap {
    pub fn curve(&self) -> ParamCurve {
        self.curve.clone()
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().expect("at least one panel")
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn panel_of_t(&self, t: f64) -> usize {
        self.panels.partition_point(|p| p.b < t).min(self.panels.len() - 1)
    }

    /// Arc length from the start of the domain to `t`.
    pub fn forward(&self, t: f64) -> f64 {
        let dom = self.curve.domain();
        let t = dom.clamp(t);
        if t == dom.hi {
            return self.total_length();
        }
        let i = self.panel_of_t(t);
        let p = &self.panels[i];
        if t == p.a {
            return self.cumulative[i];
        }
        let f = |u: f64| speed(&self.curve, u);
        self.cumulative[i] + gk15(&f, p.a, t).0
    }

    /// Parameter `t` at arc length `s`: Newton's method safeguarded by
    /// bisection inside the panel containing `s`.
    pub fn inverse(&self, s: f64) -> f64 {
        let total = self.total_length();
        let dom = self.curve.domain();
        if s <= 0.0 {
            return dom.lo;
        }
        if s >= total {
            return dom.hi;
        }
        let i = self.cumulative.partition_point(|&c| c <= s).saturating_sub(1).min(self.panels.len() - 1);
        let p = self.panels[i];
        let base = self.cumulative[i];
        let (mut lo, mut hi) = (p.a, p.b);
        let target = s - base;
        let f = |u: f64| speed(&self.curve, u);
        let mut t = if p.integral > 0.0 { p.a + (p.b - p.a) * (target / p.integral).clamp(0.0, 1.0) } else { 0.5 * (p.a + p.b) };
        let scale = total.max(1.0);
        for _ in 0..60 {
            let g = gk15(&f, p.a, t).0 - target;
            if g.abs() <= 1e-15 * scale {
                break;
            }
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let v = f(t);
            let mut next = if v > 0.0 { t - g / v } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() <= 1e-16 * (1.0 + t.abs()) {
                t = next;
                break;
            }
            t = next;
        }
        t
    }
}

/// Unit-speed curve `s ↦ φ(t(s))` on `[0, L]`.
pub fn reparametrize(curve: &ParamCurve, map: &ArcLengthMap) -> ParamCurve {
    if curve.is_unit_speed() && curve.domain().lo == 0.0 {
        return curve.clone();
    }
    ParamCurve::reparam(map.clone())
}

/// Convert a raw jet (orders 1–4 with respect to `t`) into the arc-length jet
/// at arc length `s`, by the chain rule through order `order`.
pub fn unit_speed_jet(raw: &CurveJet, s: f64, order: usize) -> CurveJet {
    let (p1, p2, p3, p4) = (raw.d1, raw.d2, raw.d3, raw.d4);
    let q = p1.dot(&p1);
    let v = q.sqrt();
    let q1 = 2.0 * p1.dot(&p2);
    let q2 = 2.0 * (p2.dot(&p2) + p1.dot(&p3));
    let q3 = 2.0 * (3.0 * p2.dot(&p3) + p1.dot(&p4));
    let vt = q1 / (2.0 * v);
    let vtt = (0.5 * q2 - vt * vt) / v;
    let vttt = (0.5 * q3 - 3.0 * vt * vtt) / v;

    // Derivatives of t(s).
    let iv = 1.0 / v;
    let g1 = iv;
    let g2 = -vt * iv.powi(3);
    let g3 = -vtt * iv.powi(4) + 3.0 * vt * vt * iv.powi(5);
    let g4 = -vttt * iv.powi(5) + 10.0 * vt * vtt * iv.powi(6) - 15.0 * vt.powi(3) * iv.powi(7);

    let d1 = p1 * g1;
    let d2 = p2 * (g1 * g1) + p1 * g2;
    let d3 = p3 * g1.powi(3) + p2 * (3.0 * g1 * g2) + p1 * g3;
    let d4: Vec3 = p4 * g1.powi(4) + p3 * (6.0 * g1 * g1 * g2) + p2 * (3.0 * g2 * g2 + 4.0 * g1 * g3) + p1 * g4;
    CurveJet::new(s, raw.p, [d1, d2, d3, d4], order.min(raw.order))
}
