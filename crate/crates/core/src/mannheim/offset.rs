//! Offset curves `φ + c·n` and `φ + c·b` of a unit-speed curve, with the
//! unit normal `n = N/|N|` and binormal `b = T × n`.
//!
//! Position and the first two derivatives are exact in terms of the base jet
//! through order 4. Orders 3 and 4 come from a five-point finite-difference
//! stencil applied to the exact second derivative.

use crate::curves::{CurveJet, JetSource, ParamCurve, Vec3};
use crate::error::Result;
use crate::numeric::fd::{fornberg_weights, stencil5};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OffsetDirection {
    Normal,
    Binormal,
}

#[derive(Debug)]
pub struct OffsetCurve {
    base: ParamCurve,
    distance: f64,
    direction: OffsetDirection,
    fd_step: f64,
}

impl OffsetCurve {
    pub fn new(base: ParamCurve, distance: f64, direction: OffsetDirection) -> Self {
        let len = base.domain().len();
        let fd_step = (1e-3f64).min(len / 16.0);
        Self { base, distance, direction, fd_step }
    }

    pub fn base(&self) -> &ParamCurve {
        &self.base
    }

    fn exact(&self, s: f64, order: usize) -> Result<[Vec3; 3]> {
        let j = self.base.eval_jet(s, if order == 0 { 2 } else { order + 2 })?;
        let (t, n0, n1, n2) = (j.d1, j.d2, j.d3, j.d4);
        let w = 1.0 / n0.norm();
        let u = n0 * w;
        let nn1 = n0.dot(&n1);
        let w1 = -nn1 * w.powi(3);
        let w2 = -(n1.dot(&n1) + n0.dot(&n2)) * w.powi(3) + 3.0 * nn1 * nn1 * w.powi(5);
        let u1 = n1 * w + n0 * w1;
        let u2 = n2 * w + n1 * (2.0 * w1) + n0 * w2;
        let c = self.distance;
        Ok(match self.direction {
            OffsetDirection::Normal => [j.p + u * c, t + u1 * c, n0 + u2 * c],
            OffsetDirection::Binormal => {
                let b = t.cross(&u);
                let b1 = t.cross(&u1);
                let b2 = n0.cross(&u1) + t.cross(&u2);
                [j.p + b * c, t + b1 * c, n0 + b2 * c]
            }
        })
    }
}

impl JetSource for OffsetCurve {
    fn jet(&self, s: f64, order: usize) -> Result<CurveJet> {
        let [p, d1, d2] = self.exact(s, order.min(2))?;
        if order < 3 {
            return Ok(CurveJet::new(s, p, [d1, d2, Vec3::zeros(), Vec3::zeros()], order));
        }
        let dom = self.base.domain();
        let nodes = stencil5(s, self.fd_step, dom.lo, dom.hi);
        let w = fornberg_weights(s, &nodes, 2);
        let mut d3 = Vec3::zeros();
        let mut d4 = Vec3::zeros();
        for (k, &x) in nodes.iter().enumerate() {
            let v = if x == s { d2 } else { self.exact(x, 2)?[2] };
            d3 += v * w[1][k];
            d4 += v * w[2][k];
        }
        Ok(CurveJet::new(s, p, [d1, d2, d3, d4], order))
    }
}
