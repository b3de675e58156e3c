//! Pipelines behind each command, producing in-memory artifacts that are
//! then written next to a manifest.

use std::fs::File;
use std::path::PathBuf;

use mannheim_core::curves::{arc_length_map, parse_curve_spec, read_samples_csv, reparametrize};
use mannheim_core::export::{correspondence_string, frame_dump_string, json_string};
use mannheim_core::frames::{gram_residuals, modified_frame, sample_frames, ModifiedFrame, TorsionKind};
use mannheim_core::mannheim::{
    classify_fm, construct_conjugate, construct_partner, correspondence_table, is_generalized_helix, mannheim_residual, partner_residual, verify_pair,
    FmClass, MannheimPair, PairReport,
};
use mannheim_core::numeric::ode::StepPolicy;
use mannheim_core::plot::{pair_figure, Figure};
use mannheim_core::synthesis::{integrate_frame, FramePose, Synthesis};
use mannheim_core::{ParamCurve, Vec3};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Command, ExperimentConfig, Format};
use crate::RunError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn new(name: &str, text: String) -> Self {
        Self { name: name.into(), bytes: text.into_bytes() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub core_version: String,
    pub command: Command,
    pub config_hash: String,
    pub files: Vec<ManifestEntry>,
}

#[derive(Clone, Debug)]
pub struct Execution {
    pub artifacts: Vec<Artifact>,
    /// Set by `verify`: whether every residual met its tolerance.
    pub verify_passed: Option<bool>,
    /// One-line human summary.
    pub summary: String,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub manifest: Manifest,
    pub written: Vec<PathBuf>,
    pub verify_passed: Option<bool>,
    pub summary: String,
}

fn hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// The input curve, reparametrized by arc length.
pub fn load_curve(cfg: &ExperimentConfig) -> Result<(ParamCurve, Option<Synthesis>), RunError> {
    if let Some(spec) = &cfg.curve {
        let raw = parse_curve_spec(spec).map_err(|e| match e {
            mannheim_core::Error::Parse(m) | mannheim_core::Error::InvalidParams { message: m, .. } => RunError::Usage(format!("--curve {spec}: {m}")),
            other => other.into(),
        })?;
        let map = arc_length_map(&raw, cfg.arc_length_tol)?;
        return Ok((reparametrize(&raw, &map), None));
    }
    if let Some(path) = &cfg.samples {
        let file = File::open(path).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))?;
        let mut samples = read_samples_csv(file)?;
        if cfg.noise > 0.0 {
            let seed = cfg.seed.expect("validated: noise needs a seed");
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for p in &mut samples.points {
                *p += Vec3::new(
                    rng.random_range(-cfg.noise..=cfg.noise),
                    rng.random_range(-cfg.noise..=cfg.noise),
                    rng.random_range(-cfg.noise..=cfg.noise),
                );
            }
        }
        let raw = samples.into_curve(cfg.closed, cfg.smoothing)?;
        let map = arc_length_map(&raw, cfg.arc_length_tol)?;
        return Ok((reparametrize(&raw, &map), None));
    }
    let spec = cfg.profile.as_ref().ok_or_else(|| RunError::Usage("no curve source".into()))?;
    let profile = spec.build()?;
    let pose = spec.pose.unwrap_or_default();
    let syn = integrate_frame(&profile, &pose, &StepPolicy::with_tol(cfg.integrator_tol))?;
    Ok((syn.curve.clone(), Some(syn)))
}

#[derive(Clone, Debug, Serialize)]
struct FrameSummary {
    curve: String,
    length: f64,
    nodes: usize,
    max_gram_residual: f64,
    kappa_min: f64,
    kappa_max: f64,
    tau_min: f64,
    tau_max: f64,
    degenerate_count: usize,
    removable_limit_count: usize,
}

fn frame_summary(curve: &ParamCurve, frames: &[ModifiedFrame]) -> FrameSummary {
    let fold = |f: &dyn Fn(&ModifiedFrame) -> f64| {
        frames.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (kappa_min, kappa_max) = fold(&|f| f.kappa());
    let (tau_min, tau_max) = fold(&|f| f.tau);
    FrameSummary {
        curve: curve.kind().to_string(),
        length: curve.domain().len(),
        nodes: frames.len(),
        max_gram_residual: frames.iter().flat_map(gram_residuals).fold(0.0, f64::max),
        kappa_min,
        kappa_max,
        tau_min,
        tau_max,
        degenerate_count: frames.iter().filter(|f| !f.kappa_valid).count(),
        removable_limit_count: frames.iter().filter(|f| f.torsion_kind == TorsionKind::RemovableLimit).count(),
    }
}

fn curve_svg(curve: &ParamCurve, cfg: &ExperimentConfig, title: &str) -> Result<String, RunError> {
    let mut fig = Figure::new(cfg.projection).with_title(title);
    fig.add_curve(curve, cfg.nodes, curve.kind().to_string())?;
    Ok(fig.render()?)
}

fn build_pair(curve: &ParamCurve, cfg: &ExperimentConfig) -> Result<Option<MannheimPair>, RunError> {
    Ok(match (cfg.c, cfg.a) {
        (Some(c), _) => Some(construct_partner(curve, c)?),
        (None, Some(a)) => Some(construct_conjugate(curve, a)?),
        (None, None) => None,
    })
}

fn pair_artifacts(pair: &MannheimPair, report: &PairReport, cfg: &ExperimentConfig, out: &mut Vec<Artifact>) -> Result<(), RunError> {
    if cfg.wants(Format::Csv) {
        let table = correspondence_table(pair, cfg.nodes)?;
        let base: Vec<ModifiedFrame> = table.iter().map(|r| modified_frame(&pair.base, r.s)).collect::<Result<_, _>>()?;
        let partner: Vec<ModifiedFrame> = table.iter().map(|r| modified_frame(&pair.partner, r.s_star)).collect::<Result<_, _>>()?;
        out.push(Artifact::new("base_frames.csv", frame_dump_string(&base)?));
        out.push(Artifact::new("partner_frames.csv", frame_dump_string(&partner)?));
        out.push(Artifact::new("correspondence.csv", correspondence_string(&table)?));
    }
    if cfg.wants(Format::Json) {
        out.push(Artifact::new("report.json", json_string(report)?));
    }
    if cfg.wants(Format::Svg) {
        out.push(Artifact::new("pair.svg", pair_svg(pair, report, cfg)?));
    }
    Ok(())
}

fn pair_svg(pair: &MannheimPair, report: &PairReport, cfg: &ExperimentConfig) -> Result<String, RunError> {
    let fig = pair_figure(pair, cfg.projection, cfg.nodes, cfg.segment_every, &report.degenerate_set)?;
    let title = format!("Mannheim pair, c = {}, a = {}, epsilon = {}", report.c, report.a, report.epsilon);
    Ok(fig.with_title(title).render()?)
}

fn report_summary(report: &PairReport) -> String {
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        format!("PASS: {} checks within tol {:e}", report.checks.len(), report.tol)
    } else {
        format!("FAIL: {} of {} checks exceed tol {:e} ({})", failed.len(), report.checks.len(), report.tol, failed.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// `c` (normal offset of the input) or `a` (binormal offset).
    pub param: String,
    pub value: f64,
    /// Mannheim residual for `c`, partner residual for `a`.
    pub residual: Option<f64>,
    pub verify_passed: Option<bool>,
    pub colinearity_max: Option<f64>,
    pub degenerate_count: Option<usize>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config_hash: String,
    pub tool_version: String,
    pub rows: Vec<SweepRow>,
}

fn sweep_row(curve: &ParamCurve, cfg: &ExperimentConfig, param: &str, value: f64) -> SweepRow {
    let mut errors = Vec::new();
    let residual = if param == "c" { mannheim_residual(curve, Some(value), cfg.nodes).map(|r| r.1) } else { partner_residual(curve, value, cfg.nodes) };
    let residual = residual.map_err(|e| errors.push(e.to_string())).ok();
    let pair = if param == "c" { construct_partner(curve, value) } else { construct_conjugate(curve, value) };
    let report = pair.and_then(|p| verify_pair(&p, cfg.nodes, cfg.tol)).map_err(|e| errors.push(e.to_string())).ok();
    SweepRow {
        param: param.into(),
        value,
        residual,
        verify_passed: report.as_ref().map(|r| r.passed),
        colinearity_max: report.as_ref().filter(|r| r.colinearity_samples > 0).map(|r| r.colinearity_max),
        degenerate_count: report.as_ref().map(|r| r.degenerate_set.len()),
        error: (!errors.is_empty()).then(|| errors.join("; ")),
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("param,value,residual,verify_passed,colinearity_max,degenerate_count,error\n");
    for r in rows {
        let err = r.error.as_deref().unwrap_or("").replace('"', "'");
        s += &format!(
            "{},{},{},{},{},{},\"{}\"\n",
            r.param,
            r.value,
            opt(&r.residual),
            opt(&r.verify_passed),
            opt(&r.colinearity_max),
            opt(&r.degenerate_count),
            err
        );
    }
    s
}

#[derive(Clone, Debug, Serialize)]
struct Classification {
    curve: String,
    fm_class: FmClass,
    generalized_helix: Option<bool>,
    axis: Option<[f64; 3]>,
    mannheim_c: Option<f64>,
    mannheim_residual: Option<f64>,
    notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
struct SynthesisSummary {
    description: String,
    domain: [f64; 2],
    pose: FramePose,
    steps: usize,
    max_gram_residual: f64,
    start: [f64; 3],
    end: [f64; 3],
}

fn arr(v: Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Run the configured pipeline without touching the output directory.
pub fn execute(cfg: &ExperimentConfig) -> Result<Execution, RunError> {
    cfg.validate()?;
    let (curve, syn) = load_curve(cfg)?;
    let mut out = Vec::new();
    let mut verify_passed = None;
    let summary;
    match cfg.command {
        Command::Frame => {
            let frames = sample_frames(&curve, cfg.nodes)?;
            let sum = frame_summary(&curve, &frames);
            summary = format!("{} frames, max Gram residual {:e}", frames.len(), sum.max_gram_residual);
            if cfg.wants(Format::Csv) {
                out.push(Artifact::new("frames.csv", frame_dump_string(&frames)?));
            }
            if cfg.wants(Format::Json) {
                out.push(Artifact::new("frames_summary.json", json_string(&sum)?));
            }
            if cfg.wants(Format::Svg) {
                out.push(Artifact::new("curve.svg", curve_svg(&curve, cfg, &format!("{} curve", curve.kind()))?));
            }
        }
        Command::Partner | Command::Conjugate | Command::Verify => {
            let pair = build_pair(&curve, cfg)?.expect("validated: c or a present");
            let report = verify_pair(&pair, cfg.nodes, cfg.tol)?;
            summary = report_summary(&report);
            if cfg.command == Command::Verify {
                verify_passed = Some(report.passed);
            }
            pair_artifacts(&pair, &report, cfg, &mut out)?;
        }
        Command::Synthesize => {
            let syn = syn.expect("validated: synthesize has a profile");
            let frames = sample_frames(&syn.curve, cfg.nodes)?;
            let spec = cfg.profile.as_ref().expect("validated");
            let d = syn.curve.domain();
            let sum = SynthesisSummary {
                description: spec.build()?.description,
                domain: [d.lo, d.hi],
                pose: spec.pose.unwrap_or_default(),
                steps: syn.frames.len(),
                max_gram_residual: syn.max_gram_residual,
                start: arr(syn.curve.point(d.lo)?),
                end: arr(syn.curve.point(d.hi)?),
            };
            summary = format!("{} integrator steps, max Gram residual {:e}", sum.steps, sum.max_gram_residual);
            if cfg.wants(Format::Csv) {
                out.push(Artifact::new("frames.csv", frame_dump_string(&frames)?));
            }
            if cfg.wants(Format::Json) {
                out.push(Artifact::new("synthesis.json", json_string(&sum)?));
            }
            if cfg.wants(Format::Svg) {
                out.push(Artifact::new("curve.svg", curve_svg(&syn.curve, cfg, "synthesized curve")?));
            }
        }
        Command::Sweep => {
            let jobs: Vec<(&str, f64)> = cfg.c_values.iter().map(|&v| ("c", v)).chain(cfg.a_values.iter().map(|&v| ("a", v))).collect();
            let mut rows: Vec<SweepRow> = jobs.par_iter().map(|&(p, v)| sweep_row(&curve, cfg, p, v)).collect();
            rows.sort_by(|x, y| x.param.cmp(&y.param).reverse().then(x.value.total_cmp(&y.value)));
            summary = format!("{} sweep rows", rows.len());
            let result = SweepResult { config_hash: cfg.hash(), tool_version: env!("CARGO_PKG_VERSION").into(), rows };
            if cfg.wants(Format::Csv) {
                out.push(Artifact::new("sweep.csv", sweep_csv(&result.rows)));
            }
            if cfg.wants(Format::Json) || !cfg.wants(Format::Csv) {
                out.push(Artifact::new("sweep.json", json_string(&result)?));
            }
        }
        Command::Classify => {
            let mut notes = Vec::new();
            let fm_class = classify_fm(&curve, cfg.tol)?;
            let (generalized_helix, axis) = match is_generalized_helix(&curve, cfg.tol) {
                Ok((flag, axis)) => (Some(flag), axis.map(arr)),
                Err(e) => {
                    notes.push(format!("generalized helix: {e}"));
                    (None, None)
                }
            };
            let (mannheim_c, mannheim_res) = match mannheim_residual(&curve, None, cfg.nodes) {
                Ok((c, r)) => (Some(c), Some(r)),
                Err(e) => {
                    notes.push(format!("mannheim fit: {e}"));
                    (None, None)
                }
            };
            let cls = Classification {
                curve: curve.kind().to_string(),
                fm_class,
                generalized_helix,
                axis,
                mannheim_c,
                mannheim_residual: mannheim_res,
                notes,
            };
            summary = format!("{:?}", cls.fm_class);
            out.push(Artifact::new("classify.json", json_string(&cls)?));
        }
        Command::Plot => {
            let svg = match build_pair(&curve, cfg)? {
                Some(pair) => {
                    let report = verify_pair(&pair, cfg.nodes, cfg.tol)?;
                    pair_svg(&pair, &report, cfg)?
                }
                None => curve_svg(&curve, cfg, &format!("{} curve", curve.kind()))?,
            };
            summary = "plot written".into();
            out.push(Artifact::new("plot.svg", svg));
        }
    }
    Ok(Execution { artifacts: out, verify_passed, summary })
}

pub fn manifest(cfg: &ExperimentConfig, artifacts: &[Artifact]) -> Manifest {
    Manifest {
        tool: "mannheim".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        core_version: mannheim_core::VERSION.into(),
        command: cfg.command,
        config_hash: cfg.hash(),
        files: artifacts.iter().map(|a| ManifestEntry { name: a.name.clone(), bytes: a.bytes.len(), sha256: hex(&a.bytes) }).collect(),
    }
}

/// Execute and write every artifact plus `manifest.json` into the output
/// directory.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let exec = execute(cfg)?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    let manifest = manifest(cfg, &exec.artifacts);
    let mut written = Vec::new();
    for a in &exec.artifacts {
        let path = cfg.output_dir.join(&a.name);
        std::fs::write(&path, &a.bytes)?;
        written.push(path);
    }
    let path = cfg.output_dir.join("manifest.json");
    std::fs::write(&path, json_string(&manifest)?)?;
    written.push(path);
    Ok(RunOutcome { manifest, written, verify_passed: exec.verify_passed, summary: exec.summary })
}
