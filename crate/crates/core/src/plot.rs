//! Deterministic SVG rendering of projected curves and pairs.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curves::{ParamCurve, Vec3};
use crate::error::{Error, Result};
use crate::mannheim::MannheimPair;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Projection {
    #[default]
    Xy,
    Xz,
    Yz,
    Iso,
}

impl Projection {
    /// Plane coordinates with the second axis pointing up.
    pub fn project(self, p: &Vec3) -> (f64, f64) {
        match self {
            Projection::Xy => (p.x, p.y),
            Projection::Xz => (p.x, p.z),
            Projection::Yz => (p.y, p.z),
            Projection::Iso => ((p.x - p.y) * 0.75f64.sqrt(), p.z - 0.5 * (p.x + p.y)),
        }
    }
}

impl FromStr for Projection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "xy" => Ok(Projection::Xy),
            "xz" => Ok(Projection::Xz),
            "yz" => Ok(Projection::Yz),
            "iso" => Ok(Projection::Iso),
            other => Err(Error::Parse(format!("unknown projection '{other}' (expected xy, xz, yz or iso)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Polyline {
    pub points: Vec<Vec3>,
    pub color: String,
    pub label: String,
}

#[derive(Clone, Debug, Default)]
pub struct Figure {
    pub projection: Projection,
    pub title: String,
    pub polylines: Vec<Polyline>,
    /// Correspondence segments.
    pub segments: Vec<(Vec3, Vec3)>,
    /// Degenerate samples.
    pub markers: Vec<Vec3>,
    pub size: u32,
}

const PALETTE: [&str; 4] = ["#1f5fa8", "#c0392b", "#2e8b57", "#8e44ad"];

impl Figure {
    pub fn new(projection: Projection) -> Self {
        Self { projection, size: 640, ..Default::default() }
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = title.into();
        self
    }

    pub fn add_polyline(&mut self, points: Vec<Vec3>, label: impl Into<String>) {
        let color = PALETTE[self.polylines.len() % PALETTE.len()].to_string();
        self.polylines.push(Polyline { points, color, label: label.into() });
    }

    pub fn add_curve(&mut self, curve: &ParamCurve, nodes: usize, label: impl Into<String>) -> Result<()> {
        let pts = curve.sample_points(nodes.max(2))?;
        self.add_polyline(pts, label);
        Ok(())
    }

    pub fn render(&self) -> Result<String> {
        let proj = |p: &Vec3| self.projection.project(p);
        let all: Vec<(f64, f64)> = self
            .polylines
            .iter()
            .flat_map(|l| l.points.iter())
            .chain(self.segments.iter().flat_map(|(a, b)| [a, b]))
            .chain(self.markers.iter())
            .map(proj)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        if all.is_empty() {
            return Err(Error::NothingToPlot);
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let mut extent = (x1 - x0).max(y1 - y0);
        if !(extent > 1e-12) {
            extent = 1.0;
        }
        let size = self.size.max(64) as f64;
        let margin = 0.06 * size;
        let scale = (size - 2.0 * margin) / extent;
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let map = |p: &Vec3| {
            let (x, y) = proj(p);
            (0.5 * size + (x - cx) * scale, 0.5 * size - (y - cy) * scale)
        };

        let mut out = String::new();
        let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
        let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
        if !self.title.is_empty() {
            let _ = writeln!(out, r##"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" fill="#333">{}</text>"##, margin, 0.6 * margin, escape(&self.title));
        }
        let _ = writeln!(out, r##"<g class="segments" stroke="#999999" stroke-width="0.8">"##);
        for (a, b) in &self.segments {
            let (ax, ay) = map(a);
            let (bx, by) = map(b);
            if [ax, ay, bx, by].iter().all(|v| v.is_finite()) {
                let _ = writeln!(out, r#"<line x1="{ax:.3}" y1="{ay:.3}" x2="{bx:.3}" y2="{by:.3}"/>"#);
            }
        }
        let _ = writeln!(out, "</g>");
        for line in &self.polylines {
            let pts: Vec<(f64, f64)> = line.points.iter().map(map).filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
            if pts.is_empty() {
                continue;
            }
            let (mut lx0, mut lx1, mut ly0, mut ly1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
            for &(x, y) in &pts {
                lx0 = lx0.min(x);
                lx1 = lx1.max(x);
                ly0 = ly0.min(y);
                ly1 = ly1.max(y);
            }
            let label = escape(&line.label);
            if (lx1 - lx0).max(ly1 - ly0) < 0.5 {
                let _ = writeln!(out, r#"<circle class="curve" data-label="{label}" cx="{:.3}" cy="{:.3}" r="4" fill="{}"/>"#, pts[0].0, pts[0].1, line.color);
                continue;
            }
            let _ = write!(out, r#"<polyline class="curve" data-label="{label}" fill="none" stroke="{}" stroke-width="1.6" points=""#, line.color);
            for (i, (x, y)) in pts.iter().enumerate() {
                let _ = write!(out, "{}{x:.3},{y:.3}", if i == 0 { "" } else { " " });
            }
            let _ = writeln!(out, r#""/>"#);
        }
        let _ = writeln!(out, r##"<g class="degenerate" fill="none" stroke="#e67e22" stroke-width="1.2">"##);
        for m in &self.markers {
            let (x, y) = map(m);
            if x.is_finite() && y.is_finite() {
                let _ = writeln!(out, r#"<rect x="{:.3}" y="{:.3}" width="5" height="5"/>"#, x - 2.5, y - 2.5);
            }
        }
        let _ = writeln!(out, "</g>");
        for (i, line) in self.polylines.iter().enumerate() {
            let y = size - margin * 0.4 - 16.0 * (self.polylines.len() - 1 - i) as f64;
            let _ = writeln!(out, r#"<text x="{:.1}" y="{y:.1}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#, margin, line.color, escape(&line.label));
        }
        out.push_str("</svg>\n");
        Ok(out)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Base and partner polylines with a correspondence segment every `every`
/// samples and a marker at each base arc length in `degenerate`.
pub fn pair_figure(pair: &MannheimPair, projection: Projection, nodes: usize, every: usize, degenerate: &[f64]) -> Result<Figure> {
    let nodes = nodes.max(2);
    let every = every.max(1);
    let mut base = Vec::with_capacity(nodes);
    let mut partner = Vec::with_capacity(nodes);
    let mut fig = Figure::new(projection);
    for (i, u) in pair.sample_domain().grid(nodes).into_iter().enumerate() {
        let smp = pair.sample(u)?;
        if i % every == 0 {
            fig.segments.push((smp.base.p, smp.partner.p));
        }
        base.push(smp.base.p);
        partner.push(smp.partner.p);
    }
    fig.add_polyline(base, "base");
    fig.add_polyline(partner, "partner");
    let dom = pair.base.domain();
    for &s in degenerate {
        fig.markers.push(pair.base.point(dom.clamp(s))?);
    }
    Ok(fig)
}
