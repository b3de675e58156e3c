//! Experiment configuration: a JSON file merged with command-line flags.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use mannheim_core::plot::Projection;
use mannheim_core::synthesis::ProfileSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Frame,
    Partner,
    Conjugate,
    Verify,
    Synthesize,
    Sweep,
    Classify,
    Plot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, RunError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(RunError::Usage(format!("unknown format '{other}' (expected csv, json or svg)"))),
        }
    }
}

fn default_nodes() -> usize {
    512
}
fn default_tol() -> f64 {
    1e-6
}
fn default_integrator_tol() -> f64 {
    1e-11
}
fn default_arc_length_tol() -> f64 {
    1e-12
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json, Format::Svg]
}
fn default_every() -> usize {
    16
}

/// A fully resolved experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Catalog curve, e.g. `helix:r=2,b=1` or `cubic:t0=-2,t1=2`.
    #[serde(default)]
    pub curve: Option<String>,
    /// CSV of sample points (`x,y,z` or `t,x,y,z`).
    #[serde(default)]
    pub samples: Option<PathBuf>,
    #[serde(default)]
    pub closed: bool,
    #[serde(default)]
    pub smoothing: f64,
    /// Curvature/torsion profile for synthesized curves.
    #[serde(default)]
    pub profile: Option<ProfileSpec>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub a: Option<f64>,
    /// Sweep values of the Mannheim constant `c`.
    #[serde(default)]
    pub c_values: Vec<f64>,
    /// Sweep values of the conjugate constant `a`.
    #[serde(default)]
    pub a_values: Vec<f64>,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    /// Tolerance for every verification residual.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_integrator_tol")]
    pub integrator_tol: f64,
    #[serde(default = "default_arc_length_tol")]
    pub arc_length_tol: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    #[serde(default)]
    pub projection: Projection,
    /// Correspondence segment spacing in pair plots.
    #[serde(default = "default_every")]
    pub segment_every: usize,
    /// Seed for sample noise. Randomness is only used when this is set.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Uniform noise amplitude added to sample points (requires `seed`).
    #[serde(default)]
    pub noise: f64,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            curve: None,
            samples: None,
            closed: false,
            smoothing: 0.0,
            profile: None,
            c: None,
            a: None,
            c_values: Vec::new(),
            a_values: Vec::new(),
            nodes: default_nodes(),
            tol: default_tol(),
            integrator_tol: default_integrator_tol(),
            arc_length_tol: default_arc_length_tol(),
            output_dir: default_output_dir(),
            formats: default_formats(),
            projection: Projection::default(),
            segment_every: default_every(),
            seed: None,
            noise: 0.0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Usage(format!("config: {e}")))
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    /// SHA-256 of the configuration without its output directory, so the
    /// same experiment written to two places carries the same hash.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        let text = serde_json::to_string(&c).expect("config serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let usage = |m: String| Err(RunError::Usage(m));
        let sources = [self.curve.is_some(), self.samples.is_some(), self.profile.is_some()].iter().filter(|v| **v).count();
        if sources != 1 {
            return usage(format!("exactly one curve source (curve, samples or profile) is required, got {sources}"));
        }
        if self.command == Command::Synthesize && self.profile.is_none() {
            return usage("synthesize needs a profile".into());
        }
        if self.nodes < 16 {
            return usage(format!("nodes must be at least 16, got {}", self.nodes));
        }
        for (name, v) in [("tol", self.tol), ("integrator_tol", self.integrator_tol), ("arc_length_tol", self.arc_length_tol)] {
            if !(v > 0.0) || !v.is_finite() {
                return usage(format!("{name} must be positive, got {v}"));
            }
        }
        if self.formats.is_empty() {
            return usage("at least one output format is required".into());
        }
        if !(self.noise >= 0.0) || !self.noise.is_finite() {
            return usage(format!("noise must be nonnegative, got {}", self.noise));
        }
        if self.noise > 0.0 && self.seed.is_none() {
            return usage("noise needs an explicit seed".into());
        }
        if self.noise > 0.0 && self.samples.is_none() {
            return usage("noise applies to sample files only".into());
        }
        match self.command {
            Command::Partner if self.c.is_none() => return usage("partner needs c".into()),
            Command::Conjugate if self.a.is_none() => return usage("conjugate needs a".into()),
            Command::Verify if self.c.is_some() == self.a.is_some() => return usage("verify needs exactly one of c or a".into()),
            Command::Plot if self.c.is_some() && self.a.is_some() => return usage("plot takes at most one of c or a".into()),
            Command::Sweep if self.c_values.is_empty() && self.a_values.is_empty() => {
                return usage("sweep needs c_values or a_values".into())
            }
            _ => {}
        }
        Ok(())
    }
}

/// Command-line flags. Flags override values from `--config`.
#[derive(Debug, Parser)]
#[command(name = "mannheim", version, about = "Mannheim curve pairs and modified-frame experiments", allow_negative_numbers = true)]
pub struct Args {
    /// Pipeline to run (overrides the config file).
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON experiment config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Catalog curve, e.g. `helix:r=2,b=1`.
    #[arg(long)]
    pub curve: Option<String>,
    /// CSV of sample points.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Treat samples as a closed curve.
    #[arg(long)]
    pub closed: bool,
    #[arg(long)]
    pub smoothing: Option<f64>,
    /// JSON curvature/torsion profile.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    /// Comma-separated sweep values of c.
    #[arg(long, value_delimiter = ',')]
    pub c_values: Option<Vec<f64>>,
    /// Comma-separated sweep values of a.
    #[arg(long, value_delimiter = ',')]
    pub a_values: Option<Vec<f64>>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub integrator_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, json, svg.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<String>>,
    /// xy, xz, yz or iso.
    #[arg(long)]
    pub projection: Option<String>,
    #[arg(long)]
    pub every: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub noise: Option<f64>,
}

fn read(path: &Path) -> Result<String, RunError> {
    std::fs::read_to_string(path).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))
}

impl Args {
    pub fn resolve(&self) -> Result<ExperimentConfig, RunError> {
        let mut cfg = match &self.config {
            Some(p) => {
                let mut cfg = ExperimentConfig::from_json(&read(p)?)?;
                if let Some(cmd) = self.command {
                    cfg.command = cmd;
                }
                cfg
            }
            None => ExperimentConfig::new(self.command.ok_or_else(|| RunError::Usage("a command or --config is required".into()))?),
        };
        if let Some(v) = &self.curve {
            cfg.curve = Some(v.clone());
        }
        if let Some(v) = &self.samples {
            cfg.samples = Some(v.clone());
        }
        if self.closed {
            cfg.closed = true;
        }
        if let Some(v) = self.smoothing {
            cfg.smoothing = v;
        }
        if let Some(p) = &self.profile {
            let spec = ProfileSpec::from_json(&read(p)?).map_err(|e| RunError::Usage(format!("{}: {e}", p.display())))?;
            cfg.profile = Some(spec);
        }
        if self.c.is_some() {
            cfg.c = self.c;
        }
        if self.a.is_some() {
            cfg.a = self.a;
        }
        if let Some(v) = &self.c_values {
            cfg.c_values = v.clone();
        }
        if let Some(v) = &self.a_values {
            cfg.a_values = v.clone();
        }
        if let Some(v) = self.nodes {
            cfg.nodes = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.integrator_tol {
            cfg.integrator_tol = v;
        }
        if let Some(v) = &self.out {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = &self.format {
            let mut f: Vec<Format> = v.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
            f.sort();
            f.dedup();
            cfg.formats = f;
        }
        if let Some(v) = &self.projection {
            cfg.projection = v.parse().map_err(|e: mannheim_core::Error| RunError::Usage(e.to_string()))?;
        }
        if let Some(v) = self.every {
            cfg.segment_every = v;
        }
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if let Some(v) = self.noise {
            cfg.noise = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Args {
        Args::try_parse_from(std::iter::once("mannheim").chain(list.iter().copied())).unwrap()
    }

    #[test]
    fn flags_build_a_config() {
        let cfg = args(&["verify", "--curve", "helix:r=2,b=1", "--c", "-2", "--format", "json,csv"]).resolve().unwrap();
        assert_eq!(cfg.command, Command::Verify);
        assert_eq!(cfg.c, Some(-2.0));
        assert_eq!(cfg.formats, vec![Format::Csv, Format::Json]);
    }

    #[test]
    fn usage_errors() {
        for list in [
            &["verify", "--curve", "line"][..],
            &["frame"][..],
            &["frame", "--curve", "line", "--nodes", "8"][..],
            &["frame", "--curve", "line", "--tol", "0"][..],
            &["partner", "--curve", "line"][..],
        ] {
            assert!(matches!(args(list).resolve(), Err(RunError::Usage(_))), "{list:?}");
        }
    }

    #[test]
    fn hash_ignores_output_dir() {
        let mut a = ExperimentConfig::new(Command::Frame);
        a.curve = Some("line".into());
        let mut b = a.clone();
        b.output_dir = PathBuf::from("elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.nodes = 100;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn config_json_round_trip() {
        let text = r#"{"command": "sweep", "curve": "twisted_cubic", "c_values": [0.5, 1, 2, 4]}"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.nodes, 512);
        let back = ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(ExperimentConfig::from_json(r#"{"command": "frame", "bogus": 1}"#).is_err());
    }
}
