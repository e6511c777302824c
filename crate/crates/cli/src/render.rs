//! Frames of the moving moment polytope as SVG pictures or CSV vertex tables.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::ValueEnum;

use polymmp::mmp::{FamilyData, MmpError};
use polymmp::parametric::Decomposition;
use polymmp::{Rat, RatVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Image {
    Svg,
    Csv,
}

/// The moment polytope at one class representative.
#[derive(Debug, Clone)]
pub struct Frame {
    pub interval: String,
    pub epsilon: Rat,
    pub points: Vec<RatVec>,
    pub edges: Vec<(usize, usize)>,
}

pub fn frames(data: &FamilyData, dec: &Decomposition) -> Result<Vec<Frame>, MmpError> {
    dec.classes
        .iter()
        .map(|c| {
            let view = data.view_of(c)?;
            Ok(Frame {
                interval: c.interval.to_string(),
                epsilon: c.representative.clone(),
                points: view.moment_vertices(&data.embedding.space, &data.rows),
                edges: view.edges(),
            })
        })
        .collect()
}

pub struct Written {
    pub files: Vec<PathBuf>,
    pub notes: Vec<String>,
}

pub fn write_all(frames: &[Frame], dir: &Path, image: Image, name: Option<&str>) -> Result<Written, (PathBuf, io::Error)> {
    let dim = frames.iter().flat_map(|f| f.points.first()).map(RatVec::len).max().unwrap_or(0);
    let mut notes = Vec::new();
    let mut files = Vec::new();
    let csv_path = dir.join("vertices.csv");
    let svg = image == Image::Svg && dim <= 3;
    if image == Image::Svg && !svg {
        notes.push(format!("render unsupported for dimension {dim} > 3; writing CSV vertex data instead"));
    }
    if !svg {
        write_csv(frames, dim, &csv_path).map_err(|e| (csv_path.clone(), e))?;
        files.push(csv_path);
        return Ok(Written { files, notes });
    }
    let bounds = Bounds::of(frames.iter().flat_map(|f| f.points.iter().map(project)));
    for (k, f) in frames.iter().enumerate() {
        let path = dir.join(format!("frame_{:02}.svg", k + 1));
        fs::write(&path, svg_frame(f, &bounds, dim, name)).map_err(|e| (path.clone(), e))?;
        files.push(path);
    }
    Ok(Written { files, notes })
}

fn write_csv(frames: &[Frame], dim: usize, path: &Path) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["frame".to_string(), "interval".into(), "epsilon".into(), "vertex".into()];
    header.extend((1..=dim).map(|i| format!("c{i}")));
    w.write_record(&header)?;
    for (k, f) in frames.iter().enumerate() {
        for (j, p) in f.points.iter().enumerate() {
            let mut rec = vec![(k + 1).to_string(), f.interval.clone(), f.epsilon.to_string(), j.to_string()];
            rec.extend(p.iter().map(ToString::to_string));
            w.write_record(&rec)?;
        }
    }
    w.flush()
}

/// Plane projection: a line is drawn horizontally, space is seen from the top (drop the last coordinate).
fn project(p: &RatVec) -> (f64, f64) {
    match p.len() {
        0 => (0.0, 0.0),
        1 => (p[0].to_f64(), 0.0),
        _ => (p[0].to_f64(), p[1].to_f64()),
    }
}

struct Bounds {
    min: (f64, f64),
    max: (f64, f64),
}

impl Bounds {
    fn of(points: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut b = Bounds { min: (f64::INFINITY, f64::INFINITY), max: (f64::NEG_INFINITY, f64::NEG_INFINITY) };
        for (x, y) in points {
            b.min = (b.min.0.min(x), b.min.1.min(y));
            b.max = (b.max.0.max(x), b.max.1.max(y));
        }
        if !b.min.0.is_finite() {
            b = Bounds { min: (0.0, 0.0), max: (0.0, 0.0) };
        }
        b
    }

    fn to_canvas(&self, (x, y): (f64, f64)) -> (f64, f64) {
        const SIZE: f64 = 360.0;
        const MARGIN: f64 = 60.0;
        let span = (self.max.0 - self.min.0).max(self.max.1 - self.min.1).max(1e-9);
        let s = SIZE / span;
        (MARGIN + (x - self.min.0) * s, MARGIN + SIZE - (y - self.min.1) * s)
    }
}

fn svg_frame(f: &Frame, b: &Bounds, dim: usize, name: Option<&str>) -> String {
    let projection = match dim {
        0 | 1 => "first coordinate on the horizontal axis",
        2 => "coordinates as drawn",
        _ => "view from the top: last coordinate dropped",
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="480" height="520" viewBox="0 0 480 520">"#);
    let _ = writeln!(s, "  <desc>projection: {projection}</desc>");
    let title = match name {
        Some(n) => format!("{n}: class {} at eps = {}", f.interval, f.epsilon),
        None => format!("class {} at eps = {}", f.interval, f.epsilon),
    };
    let _ = writeln!(s, r#"  <text x="20" y="24" font-family="monospace" font-size="14">{}</text>"#, escape(&title));
    for &(i, j) in &f.edges {
        let (x1, y1) = b.to_canvas(project(&f.points[i]));
        let (x2, y2) = b.to_canvas(project(&f.points[j]));
        let _ = writeln!(s, r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="1.5"/>"#);
    }
    for p in &f.points {
        let (x, y) = b.to_canvas(project(p));
        let _ = writeln!(s, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="crimson"/>"#);
        let _ = writeln!(
            s,
            r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="11">{}</text>"#,
            x + 6.0,
            y - 6.0,
            escape(&p.to_string())
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
