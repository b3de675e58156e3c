//! Quantitative verification of a Mannheim pair.

use serde::{Deserialize, Serialize};

use super::pair::{MannheimPair, PairSample, Side};
use crate::curves::Vec3;
use crate::error::{Error, Result};
use crate::frames::kappa_threshold;
use crate::numeric::fd::fornberg_weights;

/// Correspondence speeds `ds*/ds` below this count as degenerate.
pub const SPEED_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Residuals of the three angle relations between corresponding tangents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AngleResiduals {
    /// `|cos θ - ds*/ds|`.
    pub cos_speed: Option<f64>,
    /// `|tan θ + a τ_ψ|`.
    pub tan_torsion: Option<f64>,
    /// `|dθ/ds* + κ_ψ|`.
    pub theta_rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub side: Side,
    pub nodes: usize,
    pub tol: f64,
    pub offset_c: f64,
    /// Constant `c` of `ψ = φ + c n_φ`.
    pub c: f64,
    /// Constant `a` of `φ = ψ + a b_ψ`.
    pub a: f64,
    pub epsilon: f64,
    /// Max angle (radians) between `n_φ` and `ε b_ψ` over samples where both
    /// are defined.
    pub colinearity_max: f64,
    pub colinearity_samples: usize,
    pub distance_mean: f64,
    pub distance_std: f64,
    /// `|c|`, the distance forced by `ψ = φ + c n_φ`.
    pub distance_expected: f64,
    /// Mean of `|c| κ_φ`, the pointwise distance reading compared against `|c|`.
    pub distance_kappa_claim_mean: f64,
    /// True when `|c| κ_φ` disagrees with the measured distance.
    pub distance_kappa_claim_flag: bool,
    pub mannheim_residual_max: f64,
    pub partner_residual_max: Option<f64>,
    /// Mean, min and max of θ in (-π, π] over fully nondegenerate samples.
    pub theta: Option<f64>,
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub angle_residuals: AngleResiduals,
    /// Residuals of `sin θ = -a τ_ψ* cos θ`, `(1 + εaκ) sin θ = -a τ cos θ`,
    /// `cos²θ = 1 + εaκ`, `sin²θ = a² τ τ*`, with the partner frame assigned
    /// from the base normal. They hold on every Mannheim pair and remain
    /// defined when the partner is a line.
    pub fm_relation_residuals: Option<[f64; 4]>,
    /// Every partner sample is curvature-degenerate (partner is a line).
    pub partner_is_line: bool,
    /// Base arc lengths where `ds*/ds` vanishes or a frame is undefined.
    pub degenerate_set: Vec<f64>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl PairReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

struct Row {
    smp: PairSample,
    base_ok: bool,
    partner_ok: bool,
    speed_ok: bool,
    kb: f64,
    tau_b: f64,
    kp: f64,
    tau_p: f64,
}

fn tau_of(d1: &Vec3, d2: &Vec3, d3: &Vec3) -> f64 {
    d1.dot(&d2.cross(d3)) / d2.norm_squared()
}

fn angle_between(u: &Vec3, v: &Vec3) -> f64 {
    u.cross(v).norm().atan2(u.dot(v))
}

/// Derivative at index `i` of `y` sampled at nonuniform `x`, using the five
/// nearest indices of a run of valid samples `run`.
fn stencil_derivative(x: &[f64], y: &[f64], run: &[usize], pos: usize) -> Option<f64> {
    if run.len() < 5 {
        return None;
    }
    let start = pos.saturating_sub(2).min(run.len() - 5);
    let idx = &run[start..start + 5];
    let nodes: Vec<f64> = idx.iter().map(|&k| x[k]).collect();
    if nodes.windows(2).any(|w| !(w[1] > w[0])) {
        return None;
    }
    let w = fornberg_weights(x[run[pos]], &nodes, 1);
    Some(idx.iter().enumerate().map(|(j, &k)| w[1][j] * y[k]).sum())
}

/// Runs of consecutive indices satisfying `ok`.
fn runs(ok: &[bool]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for (i, &v) in ok.iter().enumerate() {
        if v {
            cur.push(i);
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn max_of(it: impl Iterator<Item = f64>) -> Option<f64> {
    it.fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
}

/// Sample the pair on `nodes` points and evaluate every characterization
/// identity as a residual. Each residual is compared against `tol`.
pub fn verify_pair(pair: &MannheimPair, nodes: usize, tol: f64) -> Result<PairReport> {
    let nodes = nodes.max(16);
    let dom = pair.sample_domain();
    let eps_b = kappa_threshold(&pair.base);
    let mut samples = Vec::with_capacity(nodes);
    for u in dom.grid(nodes) {
        samples.push(pair.sample(u)?);
    }
    let max_kp2 = samples.iter().map(|s| s.partner.d2.norm_squared()).filter(|v| v.is_finite()).fold(0.0, f64::max);
    let eps_p = 1e-10 * (1.0 + max_kp2);
    let rows: Vec<Row> = samples
        .into_iter()
        .map(|smp| {
            let kb2 = smp.base.d2.norm_squared();
            let kp2 = smp.partner.d2.norm_squared();
            let speed_ok = smp.speed_ratio.is_finite() && smp.speed_ratio > SPEED_THRESHOLD && smp.partner.is_finite();
            let base_ok = kb2 > eps_b && smp.base.is_finite();
            let partner_ok = speed_ok && kp2 > eps_p;
            Row {
                kb: kb2.sqrt(),
                tau_b: if base_ok { tau_of(&smp.base.d1, &smp.base.d2, &smp.base.d3) } else { f64::NAN },
                kp: kp2.sqrt(),
                tau_p: if partner_ok { tau_of(&smp.partner.d1, &smp.partner.d2, &smp.partner.d3) } else { f64::NAN },
                smp,
                base_ok,
                partner_ok,
                speed_ok,
            }
        })
        .collect();
    if !rows.iter().any(|r| r.base_ok) {
        return Err(Error::NothingToVerify);
    }

    let c = pair.c();
    let a = pair.a();
    let eps = pair.epsilon;
    let degenerate_set: Vec<f64> = rows.iter().filter(|r| !(r.base_ok && r.partner_ok)).map(|r| r.smp.s).collect();
    let partner_is_line = rows.iter().all(|r| !r.partner_ok);

    // Colinearity of n_φ with ε b_ψ.
    let colin: Vec<f64> = rows
        .iter()
        .filter(|r| r.base_ok && r.partner_ok)
        .map(|r| {
            let nb = r.smp.base.d2 / r.kb;
            let bp = r.smp.partner.d1.cross(&r.smp.partner.d2) / r.kp;
            angle_between(&nb, &(bp * eps))
        })
        .collect();

    // Distance profile.
    let dist: Vec<f64> = rows.iter().map(|r| (r.smp.partner.p - r.smp.base.p).norm()).filter(|d| d.is_finite()).collect();
    let nd = dist.len().max(1) as f64;
    let distance_mean = dist.iter().sum::<f64>() / nd;
    let distance_std = (dist.iter().map(|d| (d - distance_mean).powi(2)).sum::<f64>() / nd).sqrt();
    let claim: Vec<f64> = rows.iter().filter(|r| r.base_ok).map(|r| c.abs() * r.kb).collect();
    let distance_kappa_claim_mean = claim.iter().sum::<f64>() / claim.len().max(1) as f64;

    // Mannheim condition on the base.
    let kmax = rows.iter().filter(|r| r.base_ok).map(|r| r.kb).fold(0.0, f64::max);
    let mannheim_residual_max = rows
        .iter()
        .filter(|r| r.base_ok)
        .map(|r| (r.kb - c * (r.kb * r.kb + r.tau_b * r.tau_b)).abs())
        .fold(0.0, f64::max)
        / if kmax > 0.0 { kmax } else { 1.0 };

    // Angle θ between T_φ and T_ψ, signed by n_ψ, unwrapped along the grid.
    let s_star: Vec<f64> = rows.iter().map(|r| r.smp.s_star).collect();
    let both: Vec<bool> = rows.iter().map(|r| r.base_ok && r.partner_ok).collect();
    let mut theta = vec![f64::NAN; rows.len()];
    let mut last: Option<f64> = None;
    for (i, r) in rows.iter().enumerate() {
        if !both[i] {
            last = None;
            continue;
        }
        let tb = r.smp.base.d1;
        let np = r.smp.partner.d2 / r.kp;
        let mut th = tb.dot(&np).atan2(tb.dot(&r.smp.partner.d1));
        if let Some(prev) = last {
            while th - prev > std::f64::consts::PI {
                th -= 2.0 * std::f64::consts::PI;
            }
            while th - prev < -std::f64::consts::PI {
                th += 2.0 * std::f64::consts::PI;
            }
        }
        theta[i] = th;
        last = Some(th);
    }
    let wrapped = |t: f64| {
        let w = (t + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
        if w == -std::f64::consts::PI { std::f64::consts::PI } else { w }
    };
    let theta_vals: Vec<f64> = theta.iter().filter(|t| t.is_finite()).map(|&t| wrapped(t)).collect();

    let cos_speed = max_of(rows.iter().enumerate().filter(|(i, _)| both[*i]).map(|(i, r)| (theta[i].cos() - r.smp.speed_ratio).abs()));
    let tan_torsion = max_of(rows.iter().enumerate().filter(|(i, _)| both[*i]).map(|(i, r)| (theta[i].tan() + a * r.tau_p).abs()));

    let mut rate_res = Vec::new();
    let mut tau_rate = Vec::new();
    for run in runs(&both) {
        for pos in 0..run.len() {
            let i = run[pos];
            if let Some(d) = stencil_derivative(&s_star, &theta, &run, pos) {
                rate_res.push((d + rows[i].kp).abs());
            }
            let tau_p: Vec<f64> = rows.iter().map(|r| r.tau_p).collect();
            if let Some(d) = stencil_derivative(&s_star, &tau_p, &run, pos) {
                let r = &rows[i];
                tau_rate.push((d, (d - r.kp / a * (1.0 + a * a * r.tau_p * r.tau_p)).abs()));
            }
        }
    }
    let theta_rate = max_of(rate_res.into_iter());
    let partner_residual_max = if tau_rate.is_empty() {
        None
    } else {
        let scale = tau_rate.iter().map(|(d, _)| d.abs()).fold(1.0, f64::max);
        Some(tau_rate.iter().map(|(_, r)| *r).fold(0.0, f64::max) / scale)
    };

    // Relations with an assigned partner frame b_P = ε n_φ.
    let fm: Vec<[f64; 4]> = rows
        .iter()
        .filter(|r| r.base_ok && r.speed_ok)
        .map(|r| {
            let tb = r.smp.base.d1;
            let nb = r.smp.base.d2 / r.kb;
            let bb = tb.cross(&nb);
            let tp = r.smp.partner.d1;
            let b_p = nb * eps;
            let n_p = b_p.cross(&tp);
            let cos_t = tp.dot(&tb);
            let sin_t = tb.dot(&n_p);
            let db_p = (-tb * r.kb + bb * r.tau_b) * (eps / r.smp.speed_ratio);
            let tau_pp = -db_p.dot(&n_p);
            let g = 1.0 + eps * a * r.kb;
            [
                (sin_t + a * tau_pp * cos_t).abs(),
                (g * sin_t + a * r.tau_b * cos_t).abs(),
                (cos_t * cos_t - g).abs(),
                (sin_t * sin_t - a * a * tau_pp * r.tau_b).abs(),
            ]
        })
        .collect();
    let fm_relation_residuals = if fm.is_empty() {
        None
    } else {
        Some(fm.iter().fold([0.0f64; 4], |acc, v| [acc[0].max(v[0]), acc[1].max(v[1]), acc[2].max(v[2]), acc[3].max(v[3])]))
    };

    let mut checks = Vec::new();
    let mut push = |name: &str, value: f64| {
        checks.push(Check { name: name.into(), value, tol, passed: value.is_finite() && value < tol });
    };
    if !colin.is_empty() {
        push("colinearity", colin.iter().copied().fold(0.0, f64::max));
    }
    push("distance_relative_std", distance_std / distance_mean.max(1e-300));
    push("distance_offset", (distance_mean - c.abs()).abs() / c.abs().max(1e-300));
    push("mannheim_condition", mannheim_residual_max);
    if let Some(v) = cos_speed {
        push("angle_cos_speed", v);
    }
    if let Some(v) = tan_torsion {
        push("angle_tan_torsion", v);
    }
    if let Some(v) = theta_rate {
        push("angle_theta_rate", v);
    }
    if pair.side == Side::ConjugateOfPartner {
        if let Some(v) = partner_residual_max {
            push("partner_condition", v);
        }
    }
    if let Some(fm) = fm_relation_residuals {
        for (k, v) in fm.iter().enumerate() {
            push(&format!("fm_relation_{}", ["i", "ii", "iii", "iv"][k]), *v);
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    let n_theta = theta_vals.len();
    Ok(PairReport {
        side: pair.side,
        nodes,
        tol,
        offset_c: pair.offset_c,
        c,
        a,
        epsilon: eps,
        colinearity_max: colin.iter().copied().fold(0.0, f64::max),
        colinearity_samples: colin.len(),
        distance_mean,
        distance_std,
        distance_expected: c.abs(),
        distance_kappa_claim_mean,
        distance_kappa_claim_flag: (distance_kappa_claim_mean - distance_mean).abs() > tol * distance_mean.max(1.0),
        mannheim_residual_max,
        partner_residual_max,
        theta: (n_theta > 0).then(|| theta_vals.iter().sum::<f64>() / n_theta as f64),
        theta_min: max_of(theta_vals.iter().map(|t| -t)).map(|v| -v),
        theta_max: max_of(theta_vals.iter().copied()),
        angle_residuals: AngleResiduals { cos_speed, tan_torsion, theta_rate },
        fm_relation_residuals,
        partner_is_line,
        degenerate_set,
        checks,
        passed,
    })
}

/// One row of the correspondence table `s, s*, distance, θ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceRow {
    pub s: f64,
    pub s_star: f64,
    pub distance: f64,
    /// Angle in (-π, π] between the tangents, signed by the partner normal
    /// (or by `ε n_φ × T_ψ` where the partner frame is degenerate); NaN when
    /// neither frame is defined.
    pub theta: f64,
}

/// Correspondence table on `nodes` uniform samples.
pub fn correspondence_table(pair: &MannheimPair, nodes: usize) -> Result<Vec<CorrespondenceRow>> {
    let nodes = nodes.max(2);
    let eps_b = kappa_threshold(&pair.base);
    let samples: Vec<PairSample> = pair.sample_domain().grid(nodes).into_iter().map(|u| pair.sample(u)).collect::<Result<_>>()?;
    let max_kp2 = samples.iter().map(|s| s.partner.d2.norm_squared()).filter(|v| v.is_finite()).fold(0.0, f64::max);
    let eps_p = 1e-10 * (1.0 + max_kp2);
    Ok(samples
        .iter()
        .map(|smp| {
            let tb = smp.base.d1;
            let tp = smp.partner.d1;
            let kp2 = smp.partner.d2.norm_squared();
            let kb2 = smp.base.d2.norm_squared();
            let np = if kp2 > eps_p {
                Some(smp.partner.d2 / kp2.sqrt())
            } else if kb2 > eps_b {
                Some((smp.base.d2 / kb2.sqrt() * pair.epsilon).cross(&tp))
            } else {
                None
            };
            let theta = np.map_or(f64::NAN, |n| tb.dot(&n).atan2(tb.dot(&tp)));
            CorrespondenceRow { s: smp.s, s_star: smp.s_star, distance: (smp.partner.p - smp.base.p).norm(), theta }
        })
        .collect())
}
