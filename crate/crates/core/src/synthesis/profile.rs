//! Scalar functions of arc length, curvature profiles and initial poses.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::torsion::TorsionSolution;
use crate::curves::{Interval, Vec3};
use crate::error::{Error, Result};
use crate::numeric::quadrature;
use crate::numeric::spline::QuinticSpline;

/// Root of `c κ² - κ + c τ² = 0`: `(1 ± √(1 - 4c²τ²)) / (2c)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// 1-D table interpolated by a quintic spline.
#[derive(Clone, Debug)]
pub struct TableFn {
    pub s: Vec<f64>,
    pub values: Vec<f64>,
    spline: QuinticSpline,
}

impl TableFn {
    pub fn new(s: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if s.len() != values.len() {
            return Err(Error::Parse(format!("table has {} nodes but {} values", s.len(), values.len())));
        }
        let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
        let spline = QuinticSpline::fit(&s, &rows, 0.0).map_err(|e| Error::Parse(format!("table: {e:?}")))?;
        Ok(Self { s, values, spline })
    }

    pub fn domain(&self) -> Interval {
        Interval::new(self.s[0], self.s[self.s.len() - 1])
    }
}

pub type CustomFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A scalar function of arc length with its first two derivatives.
#[derive(Clone)]
pub enum ScalarFn {
    Const(f64),
    /// Coefficients in ascending powers of `s`.
    Poly(Vec<f64>),
    Table(Arc<TableFn>),
    /// Curvature solving the Mannheim condition for a given torsion.
    MannheimKappa { c: f64, tau: Box<ScalarFn>, branch: Branch },
    /// `(1/a) tan(∫_{s0}^{s} κ + c0)`.
    PartnerTorsion { a: f64, kappa: Box<ScalarFn>, s0: f64, c0: f64 },
    /// Numerical solution of `τ' = (κ/a)(1 + a²τ²)`.
    OdeTorsion(Arc<TorsionSolution>),
    /// Arbitrary function; derivatives by finite differences.
    Custom(CustomFn),
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Const(v) => write!(f, "Const({v})"),
            ScalarFn::Poly(c) => write!(f, "Poly({c:?})"),
            ScalarFn::Table(t) => write!(f, "Table({} nodes)", t.s.len()),
            ScalarFn::MannheimKappa { c, tau, branch } => write!(f, "MannheimKappa(c={c}, {branch:?}, tau={tau:?})"),
            ScalarFn::PartnerTorsion { a, kappa, s0, c0 } => write!(f, "PartnerTorsion(a={a}, s0={s0}, c0={c0}, kappa={kappa:?})"),
            ScalarFn::OdeTorsion(sol) => write!(f, "OdeTorsion(a={})", sol.a()),
            ScalarFn::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl ScalarFn {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFn::Custom(Arc::new(f))
    }

    pub fn table(s: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(ScalarFn::Table(Arc::new(TableFn::new(s, values)?)))
    }

    pub fn value(&self, s: f64) -> f64 {
        match self {
            ScalarFn::Const(v) => *v,
            ScalarFn::Poly(c) => c.iter().rev().fold(0.0, |acc, &k| acc * s + k),
            ScalarFn::Custom(f) => f(s),
            _ => self.derivs(s)[0],
        }
    }

    /// `[f(s), f'(s), f''(s)]`.
    pub fn derivs(&self, s: f64) -> [f64; 3] {
        match self {
            ScalarFn::Const(v) => [*v, 0.0, 0.0],
            ScalarFn::Poly(c) => {
                let (mut p0, mut p1, mut p2) = (0.0, 0.0, 0.0);
                for &k in c.iter().rev() {
                    p2 = p2 * s + 2.0 * p1;
                    p1 = p1 * s + p0;
                    p0 = p0 * s + k;
                }
                [p0, p1, p2]
            }
            ScalarFn::Table(t) => {
                let d = t.spline.eval(s, 2);
                [d[0][0], d[1][0], d[2][0]]
            }
            ScalarFn::MannheimKappa { c, tau, branch } => {
                let [t0, t1, t2] = tau.derivs(s);
                let sg = branch.sign();
                let c2 = c * c;
                let d = 1.0 - 4.0 * c2 * t0 * t0;
                let d1 = -8.0 * c2 * t0 * t1;
                let d2 = -8.0 * c2 * (t1 * t1 + t0 * t2);
                let r = d.max(0.0).sqrt();
                let k0 = (1.0 + sg * r) / (2.0 * c);
                if r == 0.0 {
                    return [k0, f64::NAN, f64::NAN];
                }
                let k1 = sg * d1 / (4.0 * c * r);
                let k2 = sg / (4.0 * c) * (d2 / r - d1 * d1 / (2.0 * d * r));
                [k0, k1, k2]
            }
            ScalarFn::PartnerTorsion { a, kappa, s0, c0 } => {
                let [k0, k1, _] = kappa.derivs(s);
                let arg = kappa.integral(*s0, s) + c0;
                let tn = arg.tan();
                let sec2 = 1.0 + tn * tn;
                [tn / a, sec2 * k0 / a, (2.0 * sec2 * tn * k0 * k0 + sec2 * k1) / a]
            }
            ScalarFn::OdeTorsion(sol) => sol.derivs(s),
            ScalarFn::Custom(f) => {
                let h = 1e-4 * (1.0 + s.abs());
                let (fm, f0, fp) = (f(s - h), f(s), f(s + h));
                [f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)]
            }
        }
    }

    /// `∫_{a}^{b} f`, exact for constants and polynomials.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match self {
            ScalarFn::Const(v) => v * (b - a),
            ScalarFn::Poly(c) => {
                let anti = |x: f64| c.iter().enumerate().rev().fold(0.0, |acc, (i, &k)| acc * x + k / (i + 1) as f64) * x;
                anti(b) - anti(a)
            }
            _ => quadrature::integrate(&|x| self.value(x), a, b, 1e-14 * (1.0 + (b - a).abs())),
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self, ScalarFn::Const(_))
    }
}

/// Prescribed curvature and torsion on an arc-length interval.
#[derive(Clone, Debug)]
pub struct CurvatureProfile {
    pub kappa: ScalarFn,
    pub tau: ScalarFn,
    pub domain: Interval,
    pub description: String,
}

impl CurvatureProfile {
    pub fn new(kappa: ScalarFn, tau: ScalarFn, domain: Interval) -> Self {
        Self { kappa, tau, domain, description: String::new() }
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = d.into();
        self
    }

    pub fn constant(kappa: f64, tau: f64, lo: f64, hi: f64) -> Self {
        Self::new(ScalarFn::Const(kappa), ScalarFn::Const(tau), Interval::new(lo, hi))
            .with_description(format!("kappa = {kappa}, tau = {tau}"))
    }
}

/// Initial point and directions for frame integration. `t0` and `n0` are
/// unit vectors; the modified frame at the start is `(t0, κ₀ n0, κ₀ t0 × n0)`.
/// Storing the unit normal keeps the orientation meaningful when κ₀ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramePose {
    pub p0: Vec3,
    pub t0: Vec3,
    pub n0: Vec3,
}

impl Default for FramePose {
    fn default() -> Self {
        Self::canonical()
    }
}

impl FramePose {
    /// Origin, `T0 = +x`, normal direction `+y`.
    pub fn canonical() -> Self {
        Self { p0: Vec3::zeros(), t0: Vec3::x(), n0: Vec3::y() }
    }

    /// Normalizes `t0` and orthogonalizes `n0` against it.
    pub fn new(p0: Vec3, t0: Vec3, n0: Vec3) -> Result<Self> {
        let t = t0.try_normalize(1e-300).ok_or_else(|| invalid_pose("tangent is zero"))?;
        let n = (n0 - t * t.dot(&n0)).try_normalize(1e-12 * n0.norm().max(1e-300)).ok_or_else(|| invalid_pose("normal is parallel to tangent"))?;
        Ok(Self { p0, t0: t, n0: n })
    }

    pub fn b0(&self) -> Vec3 {
        self.t0.cross(&self.n0)
    }

    /// Modified frame `(T, N, B)` at the start for curvature `kappa0`.
    pub fn modified(&self, kappa0: f64) -> (Vec3, Vec3, Vec3) {
        (self.t0, self.n0 * kappa0, self.b0() * kappa0)
    }
}

fn invalid_pose(msg: &str) -> Error {
    Error::InvalidParams { kind: "pose".into(), message: msg.into() }
}

/// JSON form of a scalar function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarSpec {
    Const { value: f64 },
    Poly { coeffs: Vec<f64> },
    Table { s: Vec<f64>, values: Vec<f64> },
    /// Curvature only: solve the Mannheim condition against the torsion.
    Mannheim {
        c: f64,
        #[serde(default)]
        branch: Branch,
    },
    /// Torsion only: closed-form partner torsion for the given curvature.
    PartnerTorsion {
        a: f64,
        #[serde(default)]
        c0: f64,
        #[serde(default)]
        s0: Option<f64>,
    },
}

/// JSON profile: `{"kappa": {...}, "tau": {...}, "domain": [s0, s1]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub kappa: ScalarSpec,
    pub tau: ScalarSpec,
    pub domain: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pose: Option<FramePose>,
}

fn plain(spec: &ScalarSpec) -> Result<Option<ScalarFn>> {
    Ok(match spec {
        ScalarSpec::Const { value } => Some(ScalarFn::Const(*value)),
        ScalarSpec::Poly { coeffs } => Some(ScalarFn::Poly(coeffs.clone())),
        ScalarSpec::Table { s, values } => Some(ScalarFn::table(s.clone(), values.clone())?),
        _ => None,
    })
}

impl ProfileSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<CurvatureProfile> {
        let [lo, hi] = self.domain;
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParams { kind: "profile".into(), message: format!("bad domain [{lo}, {hi}]") });
        }
        let domain = Interval::new(lo, hi);
        let (kappa, tau) = match (plain(&self.kappa)?, plain(&self.tau)?) {
            (Some(k), Some(t)) => (k, t),
            (None, Some(t)) => match &self.kappa {
                ScalarSpec::Mannheim { c, branch } => {
                    (super::torsion::kappa_from_mannheim_condition(*c, &t, *branch, domain)?, t)
                }
                _ => return Err(wrong_slot("partner_torsion", "kappa")),
            },
            (Some(k), None) => match &self.tau {
                ScalarSpec::PartnerTorsion { a, c0, s0 } => {
                    let t = super::torsion::partner_torsion_closed_form(*a, &k, s0.unwrap_or(lo), *c0, domain, 1e-3)?;
                    (k, t)
                }
                _ => return Err(wrong_slot("mannheim", "tau")),
            },
            (None, None) => {
                return Err(Error::InvalidParams { kind: "profile".into(), message: "kappa and tau cannot both be derived".into() })
            }
        };
        let description = self.description.clone().unwrap_or_else(|| format!("kappa: {:?}; tau: {:?}", self.kappa, self.tau));
        Ok(CurvatureProfile { kappa, tau, domain, description })
    }
}

fn wrong_slot(kind: &str, slot: &str) -> Error {
    Error::InvalidParams { kind: "profile".into(), message: format!("'{kind}' is not allowed for {slot}") }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives_and_integral() {
        let p = ScalarFn::Poly(vec![1.0, -2.0, 0.5, 3.0]);
        let s = 0.7;
        let [v, d1, d2] = p.derivs(s);
        assert!((v - (1.0 - 2.0 * s + 0.5 * s * s + 3.0 * s.powi(3))).abs() < 1e-14);
        assert!((d1 - (-2.0 + s + 9.0 * s * s)).abs() < 1e-14);
        assert!((d2 - (1.0 + 18.0 * s)).abs() < 1e-14);
        let exact = |x: f64| x - x * x + x.powi(3) / 6.0 + 0.75 * x.powi(4);
        assert!((p.integral(0.2, 1.3) - (exact(1.3) - exact(0.2))).abs() < 1e-14);
    }

    #[test]
    fn mannheim_kappa_derivatives_match_finite_differences() {
        let tau = ScalarFn::Poly(vec![0.2, 0.01, -0.002]);
        let k = ScalarFn::MannheimKappa { c: 2.0, tau: Box::new(tau), branch: Branch::Plus };
        let s = 1.3;
        let h = 1e-4;
        let [_, d1, d2] = k.derivs(s);
        let fd1 = (k.value(s + h) - k.value(s - h)) / (2.0 * h);
        let fd2 = (k.value(s + h) - 2.0 * k.value(s) + k.value(s - h)) / (h * h);
        assert!((d1 - fd1).abs() < 1e-9);
        assert!((d2 - fd2).abs() < 1e-5);
    }

    #[test]
    fn partner_torsion_derivatives() {
        let t = ScalarFn::PartnerTorsion { a: 3.0, kappa: Box::new(ScalarFn::Poly(vec![0.0, 1.0])), s0: 0.0, c0: 0.1 };
        let s = 0.8;
        let [v, d1, _] = t.derivs(s);
        assert!((v - (s * s / 2.0 + 0.1).tan() / 3.0).abs() < 1e-14);
        let h = 1e-5;
        assert!((d1 - (t.value(s + h) - t.value(s - h)) / (2.0 * h)).abs() < 1e-8);
    }

    #[test]
    fn profile_json_round_trip() {
        let text = r#"{"kappa": {"kind": "mannheim", "c": 2}, "tau": {"kind": "const", "value": 0.2}, "domain": [0, 10]}"#;
        let spec = ProfileSpec::from_json(text).unwrap();
        let profile = spec.build().unwrap();
        assert!((profile.kappa.value(3.0) - 0.4).abs() < 1e-15);
        let again: ProfileSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(again, spec);
        let bad = r#"{"kappa": {"kind": "mannheim", "c": 2}, "tau": {"kind": "partner_torsion", "a": 1}, "domain": [0, 1]}"#;
        assert!(ProfileSpec::from_json(bad).unwrap().build().is_err());
    }

    #[test]
    fn pose_orthonormalizes() {
        let p = FramePose::new(Vec3::zeros(), Vec3::new(2.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 0.0)).unwrap();
        assert!((p.t0 - Vec3::x()).norm() < 1e-15);
        assert!((p.n0 - Vec3::y()).norm() < 1e-15);
        assert!(FramePose::new(Vec3::zeros(), Vec3::x(), Vec3::x()).is_err());
    }
}
