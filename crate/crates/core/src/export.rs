//! CSV and JSON artifacts.
//!
//! Frame dumps use the header
//! `s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa_sq,tau,kappa_valid`; pair
//! correspondences use `s,s_star,distance,theta`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::curves::Vec3;
use crate::error::Result;
use crate::frames::{ModifiedFrame, TorsionKind};
use crate::mannheim::CorrespondenceRow;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    #[serde(rename = "Tx")]
    pub tx: f64,
    #[serde(rename = "Ty")]
    pub ty: f64,
    #[serde(rename = "Tz")]
    pub tz: f64,
    #[serde(rename = "Nx")]
    pub nx: f64,
    #[serde(rename = "Ny")]
    pub ny: f64,
    #[serde(rename = "Nz")]
    pub nz: f64,
    #[serde(rename = "Bx")]
    pub bx: f64,
    #[serde(rename = "By")]
    pub by: f64,
    #[serde(rename = "Bz")]
    pub bz: f64,
    pub kappa_sq: f64,
    pub tau: f64,
    pub kappa_valid: bool,
}

impl From<&ModifiedFrame> for FrameRecord {
    fn from(f: &ModifiedFrame) -> Self {
        let (p, t, n, b) = (f.position, f.tangent, f.normal, f.binormal);
        Self {
            s: f.s,
            x: p.x,
            y: p.y,
            z: p.z,
            tx: t.x,
            ty: t.y,
            tz: t.z,
            nx: n.x,
            ny: n.y,
            nz: n.z,
            bx: b.x,
            by: b.y,
            bz: b.z,
            kappa_sq: f.kappa_sq,
            tau: f.tau,
            kappa_valid: f.kappa_valid,
        }
    }
}

impl FrameRecord {
    pub fn position(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    /// Frame with `torsion_kind` reconstructed from `kappa_valid` only.
    pub fn to_frame(&self) -> ModifiedFrame {
        ModifiedFrame {
            s: self.s,
            position: self.position(),
            tangent: Vec3::new(self.tx, self.ty, self.tz),
            normal: Vec3::new(self.nx, self.ny, self.nz),
            binormal: Vec3::new(self.bx, self.by, self.bz),
            kappa_sq: self.kappa_sq,
            tau: self.tau,
            torsion_kind: if self.kappa_valid { TorsionKind::Regular } else { TorsionKind::RemovableLimit },
            kappa_valid: self.kappa_valid,
        }
    }
}

fn write_records<W: Write, T: Serialize>(w: W, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

fn to_string<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut buf = Vec::new();
    write_records(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn write_frame_dump<W: Write>(w: W, frames: &[ModifiedFrame]) -> Result<()> {
    write_records(w, frames.iter().map(FrameRecord::from))
}

pub fn frame_dump_string(frames: &[ModifiedFrame]) -> Result<String> {
    to_string(frames.iter().map(FrameRecord::from))
}

pub fn read_frame_dump<R: Read>(r: R) -> Result<Vec<FrameRecord>> {
    let mut rd = csv::Reader::from_reader(r);
    Ok(rd.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub fn write_correspondence<W: Write>(w: W, rows: &[CorrespondenceRow]) -> Result<()> {
    write_records(w, rows.iter())
}

pub fn correspondence_string(rows: &[CorrespondenceRow]) -> Result<String> {
    to_string(rows.iter())
}

pub fn read_correspondence<R: Read>(r: R) -> Result<Vec<CorrespondenceRow>> {
    let mut rd = csv::Reader::from_reader(r);
    Ok(rd.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Pretty JSON with a trailing newline.
pub fn json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{arc_length_map, make_catalog_curve, reparametrize, CurveKind};
    use crate::frames::sample_frames;

    #[test]
    fn frame_dump_round_trip() {
        let h = make_catalog_curve(CurveKind::CircularHelix, &[2.0, 1.0]).unwrap();
        let u = reparametrize(&h, &arc_length_map(&h, 1e-13).unwrap());
        let frames = sample_frames(&u, 17).unwrap();
        let text = frame_dump_string(&frames).unwrap();
        assert!(text.starts_with("s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa_sq,tau,kappa_valid\n"));
        let back = read_frame_dump(text.as_bytes()).unwrap();
        assert_eq!(back.len(), 17);
        for (r, f) in back.iter().zip(&frames) {
            assert_eq!(*r, FrameRecord::from(f));
        }
    }

    #[test]
    fn correspondence_header() {
        let rows = [CorrespondenceRow { s: 0.0, s_star: 0.5, distance: 2.0, theta: f64::NAN }];
        let text = correspondence_string(&rows).unwrap();
        assert_eq!(text, "s,s_star,distance,theta\n0.0,0.5,2.0,NaN\n");
    }
}
