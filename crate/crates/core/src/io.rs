//! Matrix files, curve CSVs and SVG figures.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundarySample, FlatSegment};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// On-disk matrix: `{"d": 3, "entries": [[[re, im], ...], ...], "label": "..."}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub d: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix, label: Option<String>, source: Option<String>) -> Self {
        let entries = m.rows().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect();
        Self { d: m.dim(), entries, label, source }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.d {
            return Err(Error::InvalidMatrix(format!("d = {} but {} rows", self.d, self.entries.len())));
        }
        let mut flat = Vec::with_capacity(self.d * self.d);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.d {
                return Err(Error::InvalidMatrix(format!("row {i} has {} entries, expected {}", row.len(), self.d)));
            }
            flat.extend(row.iter().map(|&[re, im]| Complex64::new(re, im)));
        }
        ComplexMatrix::new(self.d, flat)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text)?;
        file.to_matrix()?;
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct BoundaryRow {
    theta: f64,
    #[serde(rename = "wM")]
    w_m: f64,
    #[serde(rename = "dwM")]
    dw_m: f64,
    re_zeta: f64,
    im_zeta: f64,
    flag: &'static str,
}

pub fn write_boundary_csv<W: Write>(out: W, samples: &[BoundarySample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(BoundaryRow {
            theta: s.theta,
            w_m: s.w_m,
            dw_m: s.dw_m,
            re_zeta: s.zeta.re,
            im_zeta: s.zeta.im,
            flag: s.flag.as_str(),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_polar_csv<W: Write>(out: W, points: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["psi", "r"])?;
    for &(psi, r) in points {
        w.serialize((psi, r))?;
    }
    w.flush()?;
    Ok(())
}

pub const SVG_SIZE: f64 = 512.0;
const SVG_MARGIN: f64 = 0.05;

/// Curve, flat segments and the `kπ/d` axes on a square canvas centred at 0.
pub fn render_svg(samples: &[BoundarySample], flats: &[FlatSegment], d: usize) -> String {
    let extent = samples
        .iter()
        .map(|s| s.zeta.norm())
        .chain(flats.iter().flat_map(|f| [f.endpoint_minus.norm(), f.endpoint_plus.norm()]))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let half = 0.5 * SVG_SIZE * (1.0 - 2.0 * SVG_MARGIN);
    let centre = 0.5 * SVG_SIZE;
    let map = |z: Complex64| (centre + half * z.re / extent, centre - half * z.im / extent);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = SVG_SIZE
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for k in 0..2 * d.max(1) {
        let (x, y) = map(Complex64::from_polar(extent, k as f64 * PI / d.max(1) as f64));
        let _ = writeln!(
            svg,
            r##"<line x1="{centre:.3}" y1="{centre:.3}" x2="{x:.3}" y2="{y:.3}" stroke="#999999" stroke-width="0.75" stroke-dasharray="4 3"/>"##
        );
    }
    let points: Vec<String> = samples
        .iter()
        .map(|s| {
            let (x, y) = map(s.zeta);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        svg,
        r##"<polygon points="{}" fill="none" stroke="#1f4e99" stroke-width="1.5"/>"##,
        points.join(" ")
    );
    for f in flats {
        let (x1, y1) = map(f.endpoint_minus);
        let (x2, y2) = map(f.endpoint_plus);
        let _ = writeln!(
            svg,
            r##"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="#c0392b" stroke-width="3"/>"##
        );
    }
    svg.push_str("</svg>\n");
    svg
}
