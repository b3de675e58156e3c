use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters for {kind}: {message}")]
    InvalidParams { kind: String, message: String },

    #[error("parameter {t} outside curve domain [{lo}, {hi}]")]
    OutsideDomain { t: f64, lo: f64, hi: f64 },

    #[error("curve is irregular near t = {t} (speed {speed:e})")]
    IrregularCurve { t: f64, speed: f64 },

    #[error("need at least {needed} sample points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("consecutive sample points {index} and {} coincide", index + 1)]
    DuplicatePoints { index: usize },

    #[error("curve is not unit speed at s = {s}: |d1|^2 = {speed_sq}")]
    NotUnitSpeed { s: f64, speed_sq: f64 },

    #[error("classical Frenet frame undefined at s = {s}: curvature^2 = {kappa_sq:e}")]
    CurvatureDegenerate { s: f64, kappa_sq: f64 },

    #[error("integration failed at s = {last_good_s}: {reason}")]
    IntegrationFailure { last_good_s: f64, reason: String },

    #[error("profile infeasible: 4c^2 tau^2 > 1 at {} node(s), first at s = {}", violations.len(), violations.first().copied().unwrap_or(f64::NAN))]
    InfeasibleProfile { violations: Vec<f64> },

    #[error("argument {argument} within {distance:e} of a tangent pole at s = {s}")]
    PoleProximity { s: f64, argument: f64, distance: f64 },

    #[error("partner curve degenerates: speed vanishes identically")]
    DegeneratePartner,

    #[error("conjugate undefined: binormal offset needs nonzero curvature ({} degenerate nodes, first at s* = {})", s_star.len(), s_star.first().copied().unwrap_or(f64::NAN))]
    ConjugateUndefined { s_star: Vec<f64> },

    #[error("cannot fit the Mannheim constant: curvature^2 + torsion^2 vanishes identically")]
    Unfittable,

    #[error("numerical derivative unstable: noise estimate {noise:e} exceeds signal {signal:e}")]
    UnstableDerivative { noise: f64, signal: f64 },

    #[error("nothing to verify: no sample with a valid base frame")]
    NothingToVerify,

    #[error("indeterminate: every sample is curvature-degenerate")]
    Indeterminate,

    #[error("curve is not planar: max |tau| = {max_tau:e}")]
    NotPlanar { max_tau: f64 },

    #[error("offset curve irregular: 1 + eps*a*kappa changes sign near s = {s}")]
    OffsetRegularity { s: f64 },

    #[error("alignment needs two point lists of equal length >= 3 (got {a} and {b})")]
    AlignmentInput { a: usize, b: usize },

    #[error("nothing to plot")]
    NothingToPlot,

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
