//! Serialization and rendering: the `rep.json` document, report files, PPM
//! images and CSV point lists.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::builder::{Level, RepTable, Tolerances, VertexData};
use crate::moebius::{GeometryError, Point, Side};
use crate::tree::{TreeError, VertexAddress};
use crate::{Circle, Disk, Hp, Moebius};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("invalid representation file: {0}")]
    Invalid(String),
}

/// Pretty JSON whose floats are written with 17 significant digits.
struct SeventeenDigits<'a>(PrettyFormatter<'a>);

impl Formatter for SeventeenDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serializes any value as pretty JSON with 17-significant-digit floats.
/// Non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, IoError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    fs::write(path, bytes).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

fn read_file(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn save_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), IoError> {
    write_file(path, to_json(value)?.as_bytes())
}

// Each double-double number is stored as its leading f64 (the documented
// field) plus a `_lo` companion holding the trailing part.

#[derive(Debug, Serialize, Deserialize)]
struct DiskJson {
    circle: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    circle_lo: Option<[f64; 4]>,
    side: i64,
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexJson {
    addr: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<[f64; 8]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix_lo: Option<[f64; 8]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    plane_circle: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    plane_circle_lo: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta_disk: Option<DiskJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    combination_circle: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    combination_circle_lo: Option<[f64; 4]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RepJson {
    depth: usize,
    tolerances: Tolerances,
    levels: Vec<Level>,
    vertices: Vec<VertexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
}

fn split<const N: usize>(x: [Hp; N]) -> ([f64; N], [f64; N]) {
    (x.map(|v| v.hi()), x.map(|v| v.lo()))
}

fn join<const N: usize>(hi: [f64; N], lo: Option<[f64; N]>) -> [Hp; N] {
    let lo = lo.unwrap_or([0.0; N]);
    std::array::from_fn(|i| Hp::new(hi[i], lo[i]))
}

fn circle_from(hi: [f64; 4], lo: Option<[f64; 4]>) -> Result<Circle, IoError> {
    Ok(Circle::from_array(join(hi, lo))?)
}

fn vertex_to_json(v: &VertexAddress, d: &VertexData) -> VertexJson {
    let matrix = d.matrix.map(|m| split(m.to_array()));
    let plane = d.plane_circle.map(|c| split(c.to_array()));
    let combination = d.combination_circle.map(|c| split(c.to_array()));
    VertexJson {
        addr: v.to_string(),
        matrix: matrix.map(|m| m.0),
        matrix_lo: matrix.map(|m| m.1),
        plane_circle: plane.map(|c| c.0),
        plane_circle_lo: plane.map(|c| c.1),
        delta_disk: d.delta_disk.map(|disk| {
            let (hi, lo) = split(disk.circle.to_array());
            DiskJson {
                circle: hi,
                circle_lo: Some(lo),
                side: disk.side.sign() as i64,
            }
        }),
        combination_circle: combination.map(|c| c.0),
        combination_circle_lo: combination.map(|c| c.1),
    }
}

fn vertex_from_json(v: VertexJson) -> Result<(VertexAddress, VertexData), IoError> {
    let addr: VertexAddress = v.addr.parse()?;
    let matrix = v.matrix.map(|m| Moebius::from_array(join(m, v.matrix_lo))).transpose()?;
    let plane_circle = v.plane_circle.map(|c| circle_from(c, v.plane_circle_lo)).transpose()?;
    let delta_disk = v
        .delta_disk
        .map(|d| -> Result<Disk, IoError> { Ok(Disk::new(circle_from(d.circle, d.circle_lo)?, Side::from_sign(d.side)?)) })
        .transpose()?;
    let combination_circle = v.combination_circle.map(|c| circle_from(c, v.combination_circle_lo)).transpose()?;
    Ok((
        addr,
        VertexData {
            matrix,
            plane_circle,
            delta_disk,
            combination_circle,
        },
    ))
}

pub fn rep_to_json(rep: &RepTable) -> Result<String, IoError> {
    let doc = RepJson {
        depth: rep.depth,
        tolerances: rep.tolerances,
        levels: rep.levels.clone(),
        vertices: rep.addresses().iter().map(|v| vertex_to_json(v, &rep.vertices[v])).collect(),
        provenance: rep.provenance.clone(),
    };
    to_json(&doc)
}

/// Parses a `rep.json` document and checks that every generator up to the
/// stated depth is present.
pub fn rep_from_json(text: &str) -> Result<RepTable, IoError> {
    let doc: RepJson = serde_json::from_str(text)?;
    if doc.depth == 0 {
        return Err(IoError::Invalid("depth must be at least 1".into()));
    }
    let mut vertices = BTreeMap::new();
    for v in doc.vertices {
        let (addr, data) = vertex_from_json(v)?;
        if addr.depth() > doc.depth {
            return Err(IoError::Invalid(format!("vertex {addr} deeper than depth {}", doc.depth)));
        }
        if vertices.insert(addr.clone(), data).is_some() {
            return Err(IoError::Invalid(format!("vertex \"{addr}\" listed twice")));
        }
    }
    for v in VertexAddress::all_up_to(doc.depth) {
        if !v.is_root() && vertices.get(&v).and_then(|d| d.matrix).is_none() {
            return Err(IoError::Invalid(format!("generator g{v} has no matrix")));
        }
    }
    Ok(RepTable {
        depth: doc.depth,
        tolerances: doc.tolerances,
        levels: doc.levels,
        vertices,
        provenance: doc.provenance,
    })
}

pub fn save_rep(path: &Path, rep: &RepTable) -> Result<(), IoError> {
    write_file(path, rep_to_json(rep)?.as_bytes())
}

pub fn load_rep(path: &Path) -> Result<RepTable, IoError> {
    rep_from_json(&read_file(path)?)
}

/// Counts from a render.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RenderStats {
    pub drawn: usize,
    pub outside_window: usize,
    pub at_infinity: usize,
}

/// Half-width of the square render window centred at the origin.
pub const RENDER_HALF_WIDTH: f64 = 2.0;

/// Binary PPM (P6, max value 255) of the window `[-2, 2]^2`: one white
/// pixel per point on black, rows from the top.
pub fn render_ppm(points: &[Point<f64>], width: usize, height: usize) -> (Vec<u8>, RenderStats) {
    let mut pixels = vec![0u8; width * height * 3];
    let mut stats = RenderStats::default();
    let span = 2.0 * RENDER_HALF_WIDTH;
    for p in points {
        let Some(z) = p.finite() else {
            stats.at_infinity += 1;
            continue;
        };
        let x = ((z.re + RENDER_HALF_WIDTH) / span * width as f64).floor();
        let y = ((RENDER_HALF_WIDTH - z.im) / span * height as f64).floor();
        if !(x >= 0.0 && y >= 0.0 && x < width as f64 && y < height as f64) {
            stats.outside_window += 1;
            continue;
        }
        let i = (y as usize * width + x as usize) * 3;
        pixels[i..i + 3].fill(255);
        stats.drawn += 1;
    }
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(&pixels);
    (out, stats)
}

/// `re,im` CSV of the finite points; returns the text and the number of
/// points at infinity dropped.
pub fn points_csv(points: &[Point<f64>]) -> (String, usize) {
    let mut out = String::from("re,im\n");
    let mut dropped = 0;
    for p in points {
        match p.finite() {
            Some(z) => out.push_str(&format!("{:?},{:?}\n", z.re, z.im)),
            None => dropped += 1,
        }
    }
    (out, dropped)
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    write_file(path, bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_all, build_level1, BuildParams};
    use crate::verify::Report;
    use num_complex::Complex64;

    #[test]
    fn rep_round_trips_exactly() {
        let levels = build_all(3, &BuildParams::default()).unwrap();
        for tuned in &levels {
            let mut rep = tuned.rep.clone();
            rep.provenance = Some("test".into());
            let text = rep_to_json(&rep).unwrap();
            assert_eq!(rep_from_json(&text).unwrap(), rep);
        }
    }

    #[test]
    fn rep_json_has_the_documented_shape() {
        let text = rep_to_json(&build_level1()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["depth"], 1);
        assert_eq!(v["tolerances"]["identity_tol"], 1e-8);
        let vertices = v["vertices"].as_array().unwrap();
        assert_eq!(vertices[0]["addr"], "");
        assert!(vertices[0].get("matrix").is_none());
        assert_eq!(vertices[0]["delta_disk"]["side"], -1);
        assert_eq!(vertices[1]["addr"], "1");
        assert_eq!(vertices[1]["matrix"].as_array().unwrap().len(), 8);
        // 17 significant digits
        assert!(text.contains("7.0710678118654746e-1") || text.contains("e-1"), "{text}");
    }

    #[test]
    fn floats_are_written_with_seventeen_digits() {
        let text = to_json(&[0.1f64, 1.0, -2.5e-300]).unwrap();
        assert!(text.contains("1.0000000000000001e-1"));
        assert!(text.contains("1.0000000000000000e0"));
        assert!(text.contains("-2.5000000000000000e-300"));
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vec![0.1, 1.0, -2.5e-300]);
    }

    #[test]
    fn hi_parts_alone_still_load() {
        let text = rep_to_json(&build_level1()).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for vertex in v["vertices"].as_array_mut().unwrap() {
            let obj = vertex.as_object_mut().unwrap();
            obj.retain(|k, _| !k.ends_with("_lo"));
            if let Some(d) = obj.get_mut("delta_disk") {
                d.as_object_mut().unwrap().remove("circle_lo");
            }
        }
        let rep = rep_from_json(&v.to_string()).unwrap();
        let original = build_level1();
        for (addr, m) in original.generators() {
            assert!(rep.matrix(&addr).unwrap().approx_eq(&m, crate::hp(1e-15)));
        }
    }

    #[test]
    fn malformed_reps_are_rejected() {
        assert!(rep_from_json("{").is_err());
        let text = rep_to_json(&build_level1()).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["vertices"].as_array_mut().unwrap().pop();
        assert!(matches!(rep_from_json(&v.to_string()), Err(IoError::Invalid(_))));
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["vertices"][0]["delta_disk"]["side"] = 0.into();
        assert!(rep_from_json(&v.to_string()).is_err());
    }

    #[test]
    fn report_json_shape() {
        let report = Report {
            check: "relators".into(),
            pass: true,
            min_margin: f64::INFINITY,
            failures: vec![],
        };
        let v: serde_json::Value = serde_json::from_str(&to_json(&report).unwrap()).unwrap();
        assert_eq!(v["check"], "relators");
        assert_eq!(v["pass"], true);
        assert!(v["min_margin"].is_null());
        assert!(v["failures"].as_array().unwrap().is_empty());
    }

    #[test]
    fn ppm_layout() {
        let pts = [
            Point::Finite(Complex64::new(-2.0, 2.0)),
            Point::Finite(Complex64::new(1.999, -1.999)),
            Point::Finite(Complex64::new(3.0, 0.0)),
            Point::Infinity,
        ];
        let (bytes, stats) = render_ppm(&pts, 4, 2);
        let header = b"P6\n4 2\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        let px = &bytes[header.len()..];
        assert_eq!(px.len(), 24);
        assert_eq!(&px[0..3], &[255, 255, 255]);
        assert_eq!(&px[21..24], &[255, 255, 255]);
        assert_eq!(px.iter().filter(|&&b| b == 255).count(), 6);
        assert_eq!(
            stats,
            RenderStats {
                drawn: 2,
                outside_window: 1,
                at_infinity: 1
            }
        );
    }

    #[test]
    fn csv_drops_infinity() {
        let pts = [Point::Finite(Complex64::new(0.5, -1.0)), Point::Infinity];
        let (text, dropped) = points_csv(&pts);
        assert_eq!(text, "re,im\n0.5,-1.0\n");
        assert_eq!(dropped, 1);
    }
}
