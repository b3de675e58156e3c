//! Curves fitted to sampled points with a quintic (C⁴) spline.

use std::io::Read;

use super::{CurveJet, Interval, ParamCurve, Vec3};
use crate::error::{Error, Result};
use crate::numeric::spline::{QuinticSpline, SplineError};

pub const MIN_POINTS: usize = 8;

/// Points read from a sample file, with parameters when the file has a `t`
/// column.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Samples {
    pub t: Option<Vec<f64>>,
    pub points: Vec<Vec3>,
}

impl Samples {
    /// Fit a curve: parametrized samples keep their `t`, bare points use
    /// chord length.
    pub fn into_curve(self, closed: bool, smoothing: f64) -> Result<ParamCurve> {
        match self.t {
            Some(t) => curve_from_parametrized_samples(&t, &self.points, smoothing),
            None => curve_from_samples(&self.points, closed, smoothing),
        }
    }
}

fn check_points(points: &[Vec3]) -> Result<()> {
    if points.len() < MIN_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_POINTS, got: points.len() });
    }
    let scale = points.iter().map(|p| p.amax()).fold(0.0, f64::max).max(1.0);
    for (i, w) in points.windows(2).enumerate() {
        if (w[1] - w[0]).norm() <= 1e-14 * scale {
            return Err(Error::DuplicatePoints { index: i });
        }
    }
    if points.iter().any(|p| !p.iter().all(|x| x.is_finite())) {
        return Err(Error::Parse("non-finite sample coordinate".into()));
    }
    Ok(())
}

fn fit(params: &[f64], points: &[Vec3], smoothing: f64) -> Result<QuinticSpline> {
    let values: Vec<Vec<f64>> = points.iter().map(|p| vec![p.x, p.y, p.z]).collect();
    QuinticSpline::fit(params, &values, smoothing).map_err(|e| match e {
        SplineError::TooFewPoints(n) => Error::TooFewPoints { needed: MIN_POINTS, got: n },
        SplineError::NonIncreasing(i) => Error::Parse(format!("sample parameters not strictly increasing at row {i}")),
        SplineError::Singular => Error::Parse("spline system is singular".into()),
    })
}

/// Fit a curve to ordered points, parametrized by cumulative chord length.
///
/// `smoothing = 0` interpolates. For `closed` data the spline is fitted on a
/// periodically padded copy so the seam is as smooth as the interior.
pub fn curve_from_samples(points: &[Vec3], closed: bool, smoothing: f64) -> Result<ParamCurve> {
    let mut pts = points.to_vec();
    if closed && pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() == 0.0 {
        pts.pop();
    }
    check_points(&pts)?;
    let n = pts.len();
    let mut u = Vec::with_capacity(n);
    let mut acc = 0.0;
    u.push(0.0);
    for w in pts.windows(2) {
        acc += (w[1] - w[0]).norm();
        u.push(acc);
    }
    if !closed {
        let spline = fit(&u, &pts, smoothing)?;
        return Ok(ParamCurve::spline(spline, Interval::new(0.0, acc)));
    }
    let closing = (pts[0] - pts[n - 1]).norm();
    if closing == 0.0 {
        return Err(Error::DuplicatePoints { index: n - 1 });
    }
    let period = acc + closing;
    let pad = (n - 1).min(10);
    let mut params = Vec::with_capacity(n + 2 * pad);
    let mut padded = Vec::with_capacity(n + 2 * pad);
    for i in (n - pad)..n {
        params.push(u[i] - period);
        padded.push(pts[i]);
    }
    params.extend_from_slice(&u);
    padded.extend_from_slice(&pts);
    for i in 0..pad {
        params.push(u[i] + period);
        padded.push(pts[i]);
    }
    let spline = fit(&params, &padded, smoothing)?;
    Ok(ParamCurve::spline(spline, Interval::new(0.0, period)))
}

/// Fit a curve to points with given strictly increasing parameters.
pub fn curve_from_parametrized_samples(t: &[f64], points: &[Vec3], smoothing: f64) -> Result<ParamCurve> {
    check_points(points)?;
    if t.len() != points.len() {
        return Err(Error::Parse(format!("{} parameters for {} points", t.len(), points.len())));
    }
    let spline = fit(t, points, smoothing)?;
    Ok(ParamCurve::spline(spline, Interval::new(t[0], t[t.len() - 1])))
}

pub(super) fn spline_jet(s: &QuinticSpline, t: f64, order: usize) -> CurveJet {
    let rows = s.eval(t, order);
    let v = |k: usize| rows.get(k).map_or(Vec3::zeros(), |r| Vec3::new(r[0], r[1], r[2]));
    CurveJet::new(t, v(0), [v(1), v(2), v(3), v(4)], order)
}

/// Read samples from CSV with header `t,x,y,z` or `x,y,z`. Headerless files
/// with three or four numeric columns are accepted too.
pub fn read_samples_csv<R: Read>(reader: R) -> Result<Samples> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).comment(Some(b'#')).from_reader(reader);
    let mut records = rdr.records();
    let first = match records.next() {
        Some(r) => r?,
        None => return Ok(Samples::default()),
    };
    let numeric = first.iter().all(|f| f.parse::<f64>().is_ok());
    let columns: Vec<String> = if numeric {
        match first.len() {
            3 => vec!["x", "y", "z"],
            4 => vec!["t", "x", "y", "z"],
            n => return Err(Error::Parse(format!("expected 3 or 4 columns, got {n}"))),
        }
        .into_iter()
        .map(String::from)
        .collect()
    } else {
        first.iter().map(|h| h.to_ascii_lowercase()).collect()
    };
    let idx = |name: &str| columns.iter().position(|c| c == name);
    let (ix, iy, iz) = match (idx("x"), idx("y"), idx("z")) {
        (Some(x), Some(y), Some(z)) => (x, y, z),
        _ => return Err(Error::Parse(format!("header must contain x, y, z (got {columns:?})"))),
    };
    let it = idx("t");
    let mut out = Samples { t: it.map(|_| Vec::new()), points: Vec::new() };
    let mut push = |rec: &csv::StringRecord, row: usize| -> Result<()> {
        let get = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::Parse(format!("row {row}: missing column {i}")))?
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("row {row}: bad number in column {i}")))
        };
        out.points.push(Vec3::new(get(ix)?, get(iy)?, get(iz)?));
        if let (Some(i), Some(ts)) = (it, out.t.as_mut()) {
            ts.push(get(i)?);
        }
        Ok(())
    };
    if numeric {
        push(&first, 1)?;
    }
    for (row, rec) in records.enumerate() {
        push(&rec?, row + 2)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{make_catalog_curve, CurveKind};
    use super::*;

    fn helix_points(n: usize) -> Vec<Vec3> {
        let h = make_catalog_curve(CurveKind::CircularHelix, &[2.0, 1.0]).unwrap();
        h.sample_points(n).unwrap()
    }

    #[test]
    fn interpolating_fit_passes_through_points() {
        let pts = helix_points(200);
        let c = curve_from_samples(&pts, false, 0.0).unwrap();
        let mut u = 0.0;
        for (i, p) in pts.iter().enumerate() {
            if i > 0 {
                u += (pts[i] - pts[i - 1]).norm();
            }
            assert!((c.point(u.min(c.domain().hi)).unwrap() - p).norm() < 1e-9);
        }
    }

    #[test]
    fn collinear_points_give_flat_spline() {
        let pts: Vec<Vec3> = (0..8).map(|i| Vec3::new(i as f64, 2.0 * i as f64, 0.0)).collect();
        let c = curve_from_samples(&pts, false, 0.0).unwrap();
        assert_eq!(c.kind(), CurveKind::Sampled);
        for t in c.domain().grid(50) {
            assert!(c.eval_jet(t, 2).unwrap().d2.norm() < 1e-9);
        }
    }

    #[test]
    fn too_few_and_duplicate_points() {
        let pts: Vec<Vec3> = (0..7).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        assert_eq!(curve_from_samples(&pts, false, 0.0).unwrap_err(), Error::TooFewPoints { needed: 8, got: 7 });
        let mut pts: Vec<Vec3> = (0..9).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        pts[4] = pts[3];
        assert_eq!(curve_from_samples(&pts, false, 0.0).unwrap_err(), Error::DuplicatePoints { index: 3 });
    }

    #[test]
    fn closed_fit_is_smooth_across_seam() {
        let n = 64;
        let pts: Vec<Vec3> = (0..n)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Vec3::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        let c = curve_from_samples(&pts, true, 0.0).unwrap();
        let d = c.domain();
        let a = c.eval_jet(d.lo, 2).unwrap();
        let b = c.eval_jet(d.hi, 2).unwrap();
        assert!((a.p - b.p).norm() < 1e-8);
        assert!((a.d1 - b.d1).norm() < 1e-6);
        assert!((a.d2 - b.d2).norm() < 1e-4);
    }

    #[test]
    fn reads_csv_with_and_without_parameter() {
        let s = read_samples_csv("t,x,y,z\n0,1,2,3\n1,4,5,6\n".as_bytes()).unwrap();
        assert_eq!(s.t, Some(vec![0.0, 1.0]));
        assert_eq!(s.points[1], Vec3::new(4.0, 5.0, 6.0));
        let s = read_samples_csv("x,y,z\n1,2,3\n".as_bytes()).unwrap();
        assert!(s.t.is_none());
        let s = read_samples_csv("1,2,3\n4,5,6\n".as_bytes()).unwrap();
        assert_eq!(s.points.len(), 2);
        assert!(read_samples_csv("a,b\n1,2\n".as_bytes()).is_err());
        assert!(read_samples_csv("x,y,z\n1,oops,3\n".as_bytes()).is_err());
    }
}
