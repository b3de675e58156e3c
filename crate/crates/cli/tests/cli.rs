use std::path::Path;
use std::process::{Command, Output};

use mannheim_cli::{Manifest, SweepResult};
use mannheim_core::curves::{arc_length_map, make_catalog_curve, reparametrize};
use mannheim_core::export::{read_correspondence, read_frame_dump};
use mannheim_core::mannheim::PairReport;
use mannheim_core::synthesis::rigid_align;
use mannheim_core::{CurveKind, Vec3};
use sha2::{Digest, Sha256};

fn mannheim(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mannheim")).args(args).arg("--out").arg(out).output().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn verify_helix_axis_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = mannheim(&["verify", "--curve", "helix:r=2,b=1", "--c", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: PairReport = serde_json::from_str(&read(dir.path(), "report.json")).unwrap();
    assert!((report.distance_mean - 2.0).abs() < 1e-9);
    assert!(report.partner_is_line && report.passed && report.distance_kappa_claim_flag);
    let rows = read_correspondence(read(dir.path(), "correspondence.csv").as_bytes()).unwrap();
    assert_eq!(rows.len(), 512);
    assert!(rows.iter().all(|r| (r.distance - 2.0).abs() < 1e-9));
    let base = read_frame_dump(read(dir.path(), "base_frames.csv").as_bytes()).unwrap();
    let partner = read_frame_dump(read(dir.path(), "partner_frames.csv").as_bytes()).unwrap();
    assert_eq!(base.len(), 512);
    for (b, p) in base.iter().zip(&partner) {
        assert!(((b.position() - p.position()).norm() - 2.0).abs() < 1e-9);
        assert!(!p.kappa_valid);
    }
    assert!(read(dir.path(), "pair.svg").starts_with("<svg"));
}

#[test]
fn synthesized_helix_matches_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let len = 4.0 * std::f64::consts::PI * 5f64.sqrt();
    let profile = dir.path().join("p.json");
    std::fs::write(&profile, format!(r#"{{"kappa":{{"kind":"const","value":0.4}},"tau":{{"kind":"const","value":0.2}},"domain":[0,{len}]}}"#)).unwrap();
    let out = mannheim(&["synthesize", "--profile", profile.to_str().unwrap(), "--nodes", "400"], &dir.path().join("o"));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let frames = read_frame_dump(read(&dir.path().join("o"), "frames.csv").as_bytes()).unwrap();
    let got: Vec<Vec3> = frames.iter().map(|f| f.position()).collect();
    let helix = make_catalog_curve(CurveKind::CircularHelix, &[2.0, 1.0]).unwrap();
    let helix = reparametrize(&helix, &arc_length_map(&helix, 1e-13).unwrap());
    let want = helix.sample_points(400).unwrap();
    assert!(rigid_align(&got, &want).unwrap().rmse < 1e-6);
}

#[test]
fn sweep_on_twisted_cubic_is_ordered_and_far_from_mannheim() {
    let dir = tempfile::tempdir().unwrap();
    let out = mannheim(&["sweep", "--curve", "twisted_cubic", "--c-values", "4,0.5,2,1", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let res: SweepResult = serde_json::from_str(&read(dir.path(), "sweep.json")).unwrap();
    let values: Vec<f64> = res.rows.iter().map(|r| r.value).collect();
    assert_eq!(values, [0.5, 1.0, 2.0, 4.0]);
    let residuals: Vec<f64> = res.rows.iter().map(|r| r.residual.unwrap()).collect();
    assert!(residuals.windows(2).all(|w| w[0] < w[1]));
    assert!(residuals.iter().all(|&r| r > 0.1));
    assert!(res.rows.iter().all(|r| r.verify_passed == Some(false)));
    assert!(!dir.path().join("sweep.csv").exists());
}

#[test]
fn manifest_lists_every_artifact_with_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let out = mannheim(&["frame", "--curve", "ellipse:a=2,b=1", "--nodes", "64"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let m: Manifest = serde_json::from_str(&read(dir.path(), "manifest.json")).unwrap();
    let mut listed: Vec<&str> = m.files.iter().map(|f| f.name.as_str()).collect();
    listed.push("manifest.json");
    listed.sort();
    let mut on_disk: Vec<String> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    on_disk.sort();
    assert_eq!(listed, on_disk);
    for f in &m.files {
        let bytes = std::fs::read(dir.path().join(&f.name)).unwrap();
        assert_eq!(bytes.len(), f.bytes);
        let hex: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(hex, f.sha256);
    }
    assert_eq!(m.core_version, mannheim_core::VERSION);
    assert_eq!(m.config_hash.len(), 64);
}

#[test]
fn config_file_and_flags_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"command":"partner","curve":"helix:r=3,b=0.5","c":3.0,"nodes":128,"formats":["json"]}"#).unwrap();
    let a = mannheim(&["--config", cfg.to_str().unwrap()], &dir.path().join("a"));
    let b = mannheim(&["partner", "--curve", "helix:r=3,b=0.5", "--c", "3", "--nodes", "128", "--format", "json"], &dir.path().join("b"));
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(b.status.code(), Some(0));
    for name in ["report.json", "manifest.json"] {
        assert_eq!(read(&dir.path().join("a"), name), read(&dir.path().join("b"), name));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| mannheim(args, dir.path()).status.code();
    assert_eq!(code(&["verify", "--curve", "twisted_cubic", "--c", "1", "--format", "json"]), Some(3));
    assert_eq!(code(&["verify", "--curve", "no_such_curve", "--c", "1"]), Some(2));
    assert_eq!(code(&["partner", "--curve", "helix:r=2,b=1"]), Some(2));
    assert_eq!(code(&["frame", "--curve", "helix:r=2,b=1", "--nodes", "4"]), Some(2));
    assert_eq!(code(&["bogus"]), Some(2));
    // A normal offset of the line is degenerate everywhere.
    assert_eq!(code(&["partner", "--curve", "line", "--c", "1"]), Some(1));
}

#[test]
fn classify_reports_helix_parameters() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mannheim(&["classify", "--curve", "helix:r=3,b=0.5"], dir.path()).status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&read(dir.path(), "classify.json")).unwrap();
    assert_eq!(v["fm_class"]["class"], "circular_helix");
    assert!((v["fm_class"]["r"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert_eq!(v["generalized_helix"], true);
    assert!((v["mannheim_c"].as_f64().unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn noisy_samples_are_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pts.csv");
    let mut text = String::from("t,x,y,z\n");
    for i in 0..200 {
        let t = i as f64 * 0.05;
        text += &format!("{t},{},{},{}\n", 2.0 * t.cos(), 2.0 * t.sin(), t);
    }
    std::fs::write(&csv, text).unwrap();
    let run = |seed: &str, sub: &str| {
        let out = mannheim(&["frame", "--samples", csv.to_str().unwrap(), "--noise", "1e-6", "--seed", seed, "--format", "csv"], &dir.path().join(sub));
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        read(&dir.path().join(sub), "frames.csv")
    };
    assert_eq!(run("7", "a"), run("7", "b"));
    assert_ne!(run("7", "a"), run("8", "c"));
    assert_eq!(mannheim(&["frame", "--samples", csv.to_str().unwrap(), "--noise", "1e-6"], &dir.path().join("d")).status.code(), Some(2));
}
