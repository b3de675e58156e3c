//! WebAssembly bindings for the static demo page in `index.html`.
//!
//! Each export returns a [`Demo`]: an SVG drawing plus a JSON summary. The
//! `*_demo` functions hold the logic and are plain Rust so they can be tested
//! natively.

use mannheim_core::curves::{arc_length_map, make_catalog_curve, reparametrize};
use mannheim_core::export::json_string;
use mannheim_core::mannheim::{construct_partner, mannheim_residual, planar_fm_conjugate, verify_pair};
use mannheim_core::numeric::ode::StepPolicy;
use mannheim_core::plot::{pair_figure, Figure, Projection};
use mannheim_core::synthesis::{integrate_frame, CurvatureProfile, FramePose, ScalarFn};
use mannheim_core::{CurveKind, Interval, ParamCurve};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const NODES: usize = 256;

#[wasm_bindgen(getter_with_clone)]
#[derive(Clone, Debug)]
pub struct Demo {
    pub svg: String,
    pub summary: String,
}

type Outcome = Result<Demo, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn unit(kind: CurveKind, params: &[f64]) -> Result<ParamCurve, String> {
    let c = make_catalog_curve(kind, params).map_err(err)?;
    Ok(reparametrize(&c, &arc_length_map(&c, 1e-12).map_err(err)?))
}

fn projection(name: &str) -> Result<Projection, String> {
    name.parse().map_err(err)
}

fn coeffs(text: &str) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = text.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: '{}'", t.trim()))).collect::<Result<_, _>>()?;
    if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
        return Err("need finite coefficients".into());
    }
    Ok(v)
}

/// Circular helix `(r cos t, r sin t, b t)` with its normal offset at
/// distance `c`; `c = r` gives the axis.
pub fn helix_partner_demo(r: f64, b: f64, c: f64, view: &str) -> Outcome {
    let helix = unit(CurveKind::CircularHelix, &[r, b])?;
    let pair = construct_partner(&helix, c).map_err(err)?;
    let report = verify_pair(&pair, NODES, 1e-6).map_err(err)?;
    let fig = pair_figure(&pair, projection(view)?, NODES, 8, &report.degenerate_set).map_err(err)?;
    let svg = fig.with_title(format!("helix r = {r}, b = {b}, offset c = {c}")).render().map_err(err)?;
    Ok(Demo { svg, summary: json_string(&report).map_err(err)? })
}

#[derive(Serialize)]
struct SynthesisSummary {
    length: f64,
    steps: usize,
    max_gram_residual: f64,
    mannheim_c: Option<f64>,
    mannheim_residual: Option<f64>,
}

/// Integrate the frame equations for polynomial `κ(s)` and `τ(s)` given as
/// comma-separated ascending coefficients.
pub fn synthesize_demo(kappa: &str, tau: &str, length: f64, view: &str) -> Outcome {
    if !(length > 0.0 && length <= 1e3) {
        return Err(format!("length must be in (0, 1000], got {length}"));
    }
    let profile = CurvatureProfile::new(ScalarFn::Poly(coeffs(kappa)?), ScalarFn::Poly(coeffs(tau)?), Interval::new(0.0, length));
    let syn = integrate_frame(&profile, &FramePose::canonical(), &StepPolicy::with_tol(1e-10)).map_err(err)?;
    let fit = mannheim_residual(&syn.curve, None, NODES).ok();
    let mut fig = Figure::new(projection(view)?).with_title(format!("kappa = [{kappa}], tau = [{tau}]"));
    fig.add_curve(&syn.curve, 4 * NODES, "synthesized").map_err(err)?;
    let summary = SynthesisSummary {
        length,
        steps: syn.frames.len(),
        max_gram_residual: syn.max_gram_residual,
        mannheim_c: fit.map(|f| f.0),
        mannheim_residual: fit.map(|f| f.1),
    };
    Ok(Demo { svg: fig.render().map_err(err)?, summary: json_string(&summary).map_err(err)? })
}

#[derive(Serialize)]
struct ConjugateSummary {
    a: f64,
    epsilon: f64,
    conjugate_length: f64,
    max_tangent_angle: f64,
}

/// Planar conjugate of the ellipse `(p cos t, q sin t, 0)` at offset `a`.
pub fn ellipse_conjugate_demo(p: f64, q: f64, a: f64, epsilon: f64) -> Outcome {
    let ellipse = unit(CurveKind::Ellipse, &[p, q])?;
    let pc = planar_fm_conjugate(&ellipse, a, epsilon, 1e-8).map_err(err)?;
    let mut fig = Figure::new(Projection::Xy).with_title(format!("ellipse {p} x {q}, a = {a}"));
    fig.add_curve(&ellipse, NODES, "ellipse").map_err(err)?;
    fig.add_curve(&pc.raw, NODES, "conjugate").map_err(err)?;
    let d = ellipse.domain();
    for s in d.grid(33) {
        fig.segments.push((ellipse.point(s).map_err(err)?, pc.raw.point(s).map_err(err)?));
    }
    let summary = ConjugateSummary { a, epsilon, conjugate_length: pc.curve.domain().len(), max_tangent_angle: pc.max_tangent_angle };
    Ok(Demo { svg: fig.render().map_err(err)?, summary: json_string(&summary).map_err(err)? })
}

fn js(r: Outcome) -> Result<Demo, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn helix_partner(r: f64, b: f64, c: f64, view: &str) -> Result<Demo, JsError> {
    js(helix_partner_demo(r, b, c, view))
}

#[wasm_bindgen]
pub fn synthesize(kappa: &str, tau: &str, length: f64, view: &str) -> Result<Demo, JsError> {
    js(synthesize_demo(kappa, tau, length, view))
}

#[wasm_bindgen]
pub fn ellipse_conjugate(p: f64, q: f64, a: f64, epsilon: f64) -> Result<Demo, JsError> {
    js(ellipse_conjugate_demo(p, q, a, epsilon))
}

#[wasm_bindgen]
pub fn version() -> String {
    mannheim_core::VERSION.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helix_axis_partner() {
        let d = helix_partner_demo(2.0, 1.0, 2.0, "iso").unwrap();
        assert!(d.svg.starts_with("<svg") && d.svg.contains("<rect"));
        assert!(d.summary.contains("\"partner_is_line\": true"));
    }

    #[test]
    fn synthesis_of_helix_profile_fits_mannheim() {
        let d = synthesize_demo("0.4", "0.2", 20.0, "xy").unwrap();
        assert!(d.svg.contains("<polyline"));
        let v: serde_json::Value = serde_json::from_str(&d.summary).unwrap();
        assert!((v["mannheim_c"].as_f64().unwrap() - 2.0).abs() < 1e-8);
        assert!(synthesize_demo("0.4,x", "0.2", 20.0, "xy").is_err());
        assert!(synthesize_demo("0.4", "0.2", -1.0, "xy").is_err());
    }

    #[test]
    fn ellipse_conjugate_and_regularity() {
        let d = ellipse_conjugate_demo(2.0, 1.0, 0.1, 1.0).unwrap();
        assert!(d.svg.contains("<line"));
        let e = ellipse_conjugate_demo(2.0, 1.0, -1.0, 1.0).unwrap_err();
        assert!(e.contains("regular"), "{e}");
        assert!(helix_partner_demo(2.0, 1.0, 2.0, "sideways").is_err());
    }
}
