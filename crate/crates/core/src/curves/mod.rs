//! Parametrized space curves: analytic catalog entries, spline fits of sampled
//! data, and curves defined by other modules (synthesized, offset).
//!
//! Every curve evaluates a [`CurveJet`] holding position and the first four
//! parameter derivatives.

mod arclength;
mod catalog;
mod sampled;

use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::spline::QuinticSpline;

pub use arclength::{arc_length_map, arc_length_map_with, reparametrize, unit_speed_jet, ArcLengthMap};
pub use catalog::{make_catalog_curve, parse_curve_spec};
pub use sampled::{curve_from_parametrized_samples, curve_from_samples, read_samples_csv, Samples};

pub type Vec3 = nalgebra::Vector3<f64>;

/// Closed parameter interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        !(self.hi > self.lo)
    }

    /// Membership with a relative slack of a few ulps, so grid endpoints
    /// computed in floating point are accepted.
    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * (1.0 + self.lo.abs().max(self.hi.abs()));
        t >= self.lo - slack && t <= self.hi + slack
    }

    pub fn clamp(&self, t: f64) -> f64 {
        t.clamp(self.lo, self.hi)
    }

    pub fn grid(&self, n: usize) -> Vec<f64> {
        crate::numeric::linspace(self.lo, self.hi, n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Line,
    Circle,
    CircularHelix,
    Ellipse,
    PlanarCubic,
    TwistedCubic,
    Sampled,
    Synthesized,
    Offset,
}

impl CurveKind {
    pub fn name(&self) -> &'static str {
        match self {
            CurveKind::Line => "line",
            CurveKind::Circle => "circle",
            CurveKind::CircularHelix => "helix",
            CurveKind::Ellipse => "ellipse",
            CurveKind::PlanarCubic => "planar_cubic",
            CurveKind::TwistedCubic => "twisted_cubic",
            CurveKind::Sampled => "sampled",
            CurveKind::Synthesized => "synthesized",
            CurveKind::Offset => "offset",
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Position and derivatives `d1..d4` at parameter `t`. Orders above `order`
/// are zero-filled and must not be read as derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveJet {
    pub t: f64,
    pub p: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
    pub d4: Vec3,
    pub order: usize,
}

impl CurveJet {
    pub fn new(t: f64, p: Vec3, d: [Vec3; 4], order: usize) -> Self {
        let mut jet = Self { t, p, d1: d[0], d2: d[1], d3: d[2], d4: d[3], order: order.min(4) };
        jet.truncate(order);
        jet
    }

    /// Zero every derivative above `order`.
    pub fn truncate(&mut self, order: usize) {
        let z = Vec3::zeros();
        if order < 1 {
            self.d1 = z;
        }
        if order < 2 {
            self.d2 = z;
        }
        if order < 3 {
            self.d3 = z;
        }
        if order < 4 {
            self.d4 = z;
        }
        self.order = self.order.min(order);
    }

    pub fn has(&self, order: usize) -> bool {
        order <= self.order
    }

    pub fn derivative(&self, k: usize) -> Vec3 {
        match k {
            0 => self.p,
            1 => self.d1,
            2 => self.d2,
            3 => self.d3,
            4 => self.d4,
            _ => Vec3::zeros(),
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.p, self.d1, self.d2, self.d3, self.d4].iter().all(|v| v.iter().all(|x| x.is_finite()))
    }
}

/// Jet evaluator supplied by other modules (synthesized and offset curves).
/// `t` is guaranteed to lie in the curve domain.
pub trait JetSource: Send + Sync + fmt::Debug {
    fn jet(&self, t: f64, order: usize) -> Result<CurveJet>;
}

#[derive(Clone)]
enum Evaluator {
    Catalog,
    Spline(Arc<QuinticSpline>),
    Reparam(Arc<ArcLengthMap>),
    Scaled { base: ParamCurve, factor: f64 },
    Rigid { base: ParamCurve, rotation: Matrix3<f64>, shift: Vec3 },
    Custom(Arc<dyn JetSource>),
}

struct Inner {
    kind: CurveKind,
    params: Vec<f64>,
    domain: Interval,
    unit_speed: bool,
    eval: Evaluator,
    kappa_eps: OnceLock<f64>,
}

/// An evaluatable regular curve on a closed parameter interval. Cheap to clone.
#[derive(Clone)]
pub struct ParamCurve {
    inner: Arc<Inner>,
}

impl fmt::Debug for ParamCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamCurve")
            .field("kind", &self.inner.kind)
            .field("params", &self.inner.params)
            .field("domain", &self.inner.domain)
            .field("unit_speed", &self.inner.unit_speed)
            .finish()
    }
}

impl ParamCurve {
    fn build(kind: CurveKind, params: Vec<f64>, domain: Interval, unit_speed: bool, eval: Evaluator) -> Self {
        Self {
            inner: Arc::new(Inner { kind, params, domain, unit_speed, eval, kappa_eps: OnceLock::new() }),
        }
    }

    pub(crate) fn catalog(kind: CurveKind, params: Vec<f64>, domain: Interval) -> Self {
        Self::build(kind, params, domain, false, Evaluator::Catalog)
    }

    pub(crate) fn spline(spline: QuinticSpline, domain: Interval) -> Self {
        Self::build(CurveKind::Sampled, Vec::new(), domain, false, Evaluator::Spline(Arc::new(spline)))
    }

    pub(crate) fn reparam(map: ArcLengthMap) -> Self {
        let base = map.curve();
        let domain = Interval::new(0.0, map.total_length());
        let (kind, params) = (base.kind(), base.params().to_vec());
        Self::build(kind, params, domain, true, Evaluator::Reparam(Arc::new(map)))
    }

    /// Curve backed by an external jet source.
    pub fn custom(
        kind: CurveKind,
        params: Vec<f64>,
        domain: Interval,
        unit_speed: bool,
        source: Arc<dyn JetSource>,
    ) -> Self {
        Self::build(kind, params, domain, unit_speed, Evaluator::Custom(source))
    }

    /// `λ·φ(t/λ)` on `λ·domain`. Preserves unit speed.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidParams { kind: "scale".into(), message: format!("factor must be positive, got {factor}") });
        }
        let d = self.domain();
        let domain = Interval::new(d.lo * factor, d.hi * factor);
        let eval = Evaluator::Scaled { base: self.clone(), factor };
        Ok(Self::build(self.kind(), self.params().to_vec(), domain, self.is_unit_speed(), eval))
    }

    /// `R·φ(t) + shift` for a rotation (or any orthogonal) matrix `R`.
    pub fn transformed(&self, rotation: Matrix3<f64>, shift: Vec3) -> Self {
        let eval = Evaluator::Rigid { base: self.clone(), rotation, shift };
        Self::build(self.kind(), self.params().to_vec(), self.domain(), self.is_unit_speed(), eval)
    }

    pub fn kind(&self) -> CurveKind {
        self.inner.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.inner.params
    }

    pub fn domain(&self) -> Interval {
        self.inner.domain
    }

    /// True when the evaluator is parametrized by arc length by construction.
    pub fn is_unit_speed(&self) -> bool {
        self.inner.unit_speed
    }

    /// The arc-length map behind a reparametrized curve.
    pub fn arc_length(&self) -> Option<&ArcLengthMap> {
        match &self.inner.eval {
            Evaluator::Reparam(map) => Some(map),
            _ => None,
        }
    }

    pub(crate) fn kappa_eps_cell(&self) -> &OnceLock<f64> {
        &self.inner.kappa_eps
    }

    /// Returns a new curve with the same evaluator over a sub-interval (or an
    /// extension, for analytic catalog entries).
    pub fn with_domain(&self, lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidParams { kind: self.kind().name().into(), message: format!("empty domain [{lo}, {hi}]") });
        }
        let inner = &self.inner;
        let analytic = matches!(inner.eval, Evaluator::Catalog);
        if !analytic && !(inner.domain.contains(lo) && inner.domain.contains(hi)) {
            return Err(Error::OutsideDomain { t: if inner.domain.contains(lo) { hi } else { lo }, lo: inner.domain.lo, hi: inner.domain.hi });
        }
        Ok(Self::build(inner.kind, inner.params.clone(), Interval::new(lo, hi), inner.unit_speed, inner.eval.clone()))
    }

    /// Derivative jet at `t` through `order` (at most 4).
    pub fn eval_jet(&self, t: f64, order: usize) -> Result<CurveJet> {
        let dom = self.inner.domain;
        if !dom.contains(t) || !t.is_finite() {
            return Err(Error::OutsideDomain { t, lo: dom.lo, hi: dom.hi });
        }
        let order = order.min(4);
        let t = dom.clamp(t);
        let jet = match &self.inner.eval {
            Evaluator::Catalog => catalog::jet(self.inner.kind, &self.inner.params, t, order),
            Evaluator::Spline(s) => sampled::spline_jet(s, t, order),
            Evaluator::Reparam(map) => {
                let u = map.inverse(t);
                let raw = map.curve().eval_jet(u, if order == 0 { 0 } else { 4 })?;
                if order == 0 {
                    let mut j = raw;
                    j.t = t;
                    j
                } else {
                    unit_speed_jet(&raw, t, order)
                }
            }
            Evaluator::Scaled { base, factor } => {
                let j = base.eval_jet(t / factor, order)?;
                let (l, l2, l3) = (*factor, factor * factor, factor * factor * factor);
                CurveJet::new(t, j.p * l, [j.d1, j.d2 / l, j.d3 / l2, j.d4 / l3], j.order)
            }
            Evaluator::Rigid { base, rotation, shift } => {
                let j = base.eval_jet(t, order)?;
                let r = rotation;
                CurveJet::new(t, r * j.p + shift, [r * j.d1, r * j.d2, r * j.d3, r * j.d4], j.order)
            }
            Evaluator::Custom(src) => src.jet(t, order)?,
        };
        Ok(jet)
    }

    pub fn point(&self, t: f64) -> Result<Vec3> {
        Ok(self.eval_jet(t, 0)?.p)
    }

    /// Positions on `n` uniformly spaced parameter values.
    pub fn sample_points(&self, n: usize) -> Result<Vec<Vec3>> {
        self.domain().grid(n).into_iter().map(|t| self.point(t)).collect()
    }
}
