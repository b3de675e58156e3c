//! Mannheim pairs built by normal offset (partner of a base curve) or by
//! binormal offset (conjugate of a partner curve).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::offset::{OffsetCurve, OffsetDirection};
use crate::curves::{arc_length_map_with, reparametrize, unit_speed_jet, ArcLengthMap, CurveJet, CurveKind, ParamCurve};
use crate::error::{Error, Result};
use crate::frames::{kappa_threshold, KAPPA_SCALE_NODES};

/// Quadrature tolerance for the correspondence map.
pub const CORRESPONDENCE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    PartnerOfBase,
    ConjugateOfPartner,
    /// Both curves supplied by the caller on a shared arc-length parameter.
    Given,
}

/// Map between base arc length `s` and partner arc length `s*`.
#[derive(Clone, Debug)]
pub enum Correspondence {
    Identity,
    /// The raw partner is parametrized by `s`; the map accumulates `s*`.
    Forward(Arc<ArcLengthMap>),
    /// The raw base is parametrized by `s*`; the map accumulates `s`.
    Inverse(Arc<ArcLengthMap>),
}

impl Correspondence {
    pub fn to_partner(&self, s: f64) -> f64 {
        match self {
            Correspondence::Identity => s,
            Correspondence::Forward(m) => m.forward(s),
            Correspondence::Inverse(m) => m.inverse(s),
        }
    }

    pub fn to_base(&self, s_star: f64) -> f64 {
        match self {
            Correspondence::Identity => s_star,
            Correspondence::Forward(m) => m.inverse(s_star),
            Correspondence::Inverse(m) => m.forward(s_star),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MannheimPair {
    /// Unit-speed base curve φ.
    pub base: ParamCurve,
    /// Unit-speed partner curve ψ.
    pub partner: ParamCurve,
    /// `c` for partner-side construction, `a` for conjugate-side construction.
    pub offset_c: f64,
    pub correspondence: Correspondence,
    /// Sign with `n_φ = ε b_ψ`.
    pub epsilon: f64,
    pub side: Side,
}

/// Jets of both curves at corresponding points.
#[derive(Clone, Copy, Debug)]
pub struct PairSample {
    pub s: f64,
    pub s_star: f64,
    pub base: CurveJet,
    pub partner: CurveJet,
    /// `ds*/ds`.
    pub speed_ratio: f64,
}

impl MannheimPair {
    /// Pair two unit-speed curves sharing the arc-length parameter, with the
    /// given constant and sign. Used for externally supplied geometry.
    pub fn from_curves(base: ParamCurve, partner: ParamCurve, offset_c: f64, epsilon: f64) -> Self {
        Self { base, partner, offset_c, correspondence: Correspondence::Identity, epsilon: epsilon.signum(), side: Side::Given }
    }

    /// Effective Mannheim constant `c` of `ψ = φ + c n_φ`.
    pub fn c(&self) -> f64 {
        match self.side {
            Side::ConjugateOfPartner => -self.epsilon * self.offset_c,
            _ => self.offset_c,
        }
    }

    /// Effective conjugate constant `a` of `φ = ψ + a b_ψ`.
    pub fn a(&self) -> f64 {
        match self.side {
            Side::ConjugateOfPartner => self.offset_c,
            _ => -self.epsilon * self.offset_c,
        }
    }

    /// Domain of the sampling parameter used by [`sample`](Self::sample).
    pub fn sample_domain(&self) -> crate::curves::Interval {
        match &self.correspondence {
            Correspondence::Inverse(_) => self.partner.domain(),
            _ => self.base.domain(),
        }
    }

    /// Both jets at sampling parameter `u`: base arc length for partner-side
    /// and given pairs, partner arc length for conjugate-side pairs.
    pub fn sample(&self, u: f64) -> Result<PairSample> {
        match &self.correspondence {
            Correspondence::Identity => Ok(PairSample {
                s: u,
                s_star: u,
                base: self.base.eval_jet(u, 3)?,
                partner: self.partner.eval_jet(u, 3)?,
                speed_ratio: 1.0,
            }),
            Correspondence::Forward(map) => {
                let raw = map.curve().eval_jet(u, 4)?;
                let s_star = map.forward(u);
                Ok(PairSample {
                    s: u,
                    s_star,
                    base: self.base.eval_jet(u, 3)?,
                    partner: unit_speed_jet(&raw, s_star, 3),
                    speed_ratio: raw.d1.norm(),
                })
            }
            Correspondence::Inverse(map) => {
                let raw = map.curve().eval_jet(u, 4)?;
                let s = map.forward(u);
                Ok(PairSample {
                    s,
                    s_star: u,
                    base: unit_speed_jet(&raw, s, 3),
                    partner: self.partner.eval_jet(u, 3)?,
                    speed_ratio: 1.0 / raw.d1.norm(),
                })
            }
        }
    }
}

fn require_nonzero(name: &str, v: f64) -> Result<()> {
    if v == 0.0 || !v.is_finite() {
        return Err(Error::InvalidParams { kind: name.into(), message: format!("offset constant must be nonzero and finite, got {v}") });
    }
    Ok(())
}

fn require_unit_speed(curve: &ParamCurve) -> Result<()> {
    let d = curve.domain();
    for s in d.grid(17) {
        let j = curve.eval_jet(s, 1)?;
        let sq = j.d1.norm_squared();
        if (sq - 1.0).abs() > crate::frames::UNIT_SPEED_TOL {
            return Err(Error::NotUnitSpeed { s, speed_sq: sq });
        }
    }
    Ok(())
}

/// Grid nodes of `curve` where κ² is below threshold.
fn degenerate_nodes(curve: &ParamCurve) -> Result<Vec<(f64, f64)>> {
    let eps = kappa_threshold(curve);
    let mut out = Vec::new();
    for s in curve.domain().grid(KAPPA_SCALE_NODES) {
        let k2 = curve.eval_jet(s, 2)?.d2.norm_squared();
        if !(k2 > eps) {
            out.push((s, k2));
        }
    }
    Ok(out)
}

fn raw_map(raw: &ParamCurve) -> Result<ArcLengthMap> {
    arc_length_map_with(raw, CORRESPONDENCE_TOL, true).map_err(|e| match e {
        Error::IrregularCurve { .. } => Error::DegeneratePartner,
        other => other,
    })
}

/// ε from the first sample where both the base normal and the partner
/// binormal are nondegenerate; `+1` when there is none.
fn choose_epsilon(pair: &MannheimPair) -> Result<f64> {
    let eps_b = kappa_threshold(&pair.base);
    let dom = pair.sample_domain();
    let mut samples = Vec::with_capacity(KAPPA_SCALE_NODES);
    let mut max_p = 0.0f64;
    for u in dom.grid(KAPPA_SCALE_NODES) {
        let smp = pair.sample(u)?;
        let k2 = smp.partner.d2.norm_squared();
        if k2.is_finite() {
            max_p = max_p.max(k2);
        }
        samples.push(smp);
    }
    let eps_p = 1e-10 * (1.0 + max_p);
    for smp in samples {
        let nb = smp.base.d2;
        let bp = smp.partner.d1.cross(&smp.partner.d2);
        if nb.norm_squared() > eps_b && bp.norm_squared() > eps_p && smp.speed_ratio.is_finite() {
            return Ok(if nb.dot(&bp) >= 0.0 { 1.0 } else { -1.0 });
        }
    }
    Ok(1.0)
}

/// Partner `ψ = φ + c n_φ` of a unit-speed base curve.
///
/// The base must have nonvanishing curvature on the check grid, since `n_φ`
/// is undefined at curvature zeros. Isolated zeros of the partner speed are
/// allowed (they surface in the verification report); identically vanishing
/// speed is a degenerate-partner error.
pub fn construct_partner(base: &ParamCurve, c: f64) -> Result<MannheimPair> {
    require_nonzero("construct_partner", c)?;
    require_unit_speed(base)?;
    if let Some(&(s, kappa_sq)) = degenerate_nodes(base)?.first() {
        return Err(Error::CurvatureDegenerate { s, kappa_sq });
    }
    let source = OffsetCurve::new(base.clone(), c, OffsetDirection::Normal);
    let raw = ParamCurve::custom(CurveKind::Offset, vec![c], base.domain(), false, Arc::new(source));
    let map = raw_map(&raw)?;
    let partner = reparametrize(&raw, &map);
    let mut pair = MannheimPair {
        base: base.clone(),
        partner,
        offset_c: c,
        correspondence: Correspondence::Forward(Arc::new(map)),
        epsilon: 1.0,
        side: Side::PartnerOfBase,
    };
    pair.epsilon = choose_epsilon(&pair)?;
    Ok(pair)
}

/// Conjugate `φ = ψ + a b_ψ` of a unit-speed partner curve.
pub fn construct_conjugate(partner: &ParamCurve, a: f64) -> Result<MannheimPair> {
    require_nonzero("construct_conjugate", a)?;
    require_unit_speed(partner)?;
    let bad = degenerate_nodes(partner)?;
    if !bad.is_empty() {
        return Err(Error::ConjugateUndefined { s_star: bad.into_iter().map(|(s, _)| s).collect() });
    }
    let source = OffsetCurve::new(partner.clone(), a, OffsetDirection::Binormal);
    let raw = ParamCurve::custom(CurveKind::Offset, vec![a], partner.domain(), false, Arc::new(source));
    let map = raw_map(&raw)?;
    let base = reparametrize(&raw, &map);
    let mut pair = MannheimPair {
        base,
        partner: partner.clone(),
        offset_c: a,
        correspondence: Correspondence::Inverse(Arc::new(map)),
        epsilon: 1.0,
        side: Side::ConjugateOfPartner,
    };
    pair.epsilon = choose_epsilon(&pair)?;
    Ok(pair)
}
