use std::env;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use qshear_core::geometry::bounds;
use qshear_core::Complex64;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const OUT_DIR_VAR: &str = "QSHEAR_OUT_DIR";

/// Destination for a command's main document: an explicit path (relative
/// paths resolve against `QSHEAR_OUT_DIR`), else `QSHEAR_OUT_DIR/<stem>.<ext>`,
/// else stdout.
pub fn resolve_output(out: Option<&Path>, stem: &str, ext: &str) -> Option<PathBuf> {
    let dir = env::var_os(OUT_DIR_VAR).map(PathBuf::from);
    match (out, dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(format!("{stem}.{ext}"))),
        (None, None) => None,
    }
}

/// Write `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial document.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Emit the document to its destination.
pub fn emit(out: Option<&Path>, stem: &str, ext: &str, contents: &str) -> CliResult<()> {
    match resolve_output(out, stem, ext) {
        Some(path) => write_atomic(&path, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Fixed 15-significant-digit scientific notation.
pub fn sig15(v: f64) -> String {
    format!("{v:.14e}")
}

/// Sampled images of circles and radial segments.
#[derive(Debug, Clone, Serialize)]
pub struct Drawing {
    pub circles: Vec<Curve>,
    pub radials: Vec<Curve>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Curve {
    /// Radius of a circle, or angle of a radial segment.
    pub param: f64,
    pub points: Vec<Sample>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Sample {
    pub r: f64,
    pub theta: f64,
    pub re: f64,
    pub im: f64,
}

impl Drawing {
    fn all_points(&self) -> impl Iterator<Item = &Sample> {
        self.circles.iter().chain(&self.radials).flat_map(|c| &c.points)
    }

    /// One row per sample: `r,theta,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,theta,re,im\n");
        for p in self.all_points() {
            let _ = writeln!(s, "{},{},{},{}", sig15(p.r), sig15(p.theta), sig15(p.re), sig15(p.im));
        }
        s
    }

    /// SVG 1.1 with one polyline per curve. The y axis is flipped so the
    /// picture reads like the complex plane, and the view box pads the image
    /// extent by 5% on every side.
    pub fn to_svg(&self) -> String {
        let pts: Vec<Complex64> = self.all_points().map(|p| Complex64::new(p.re, p.im)).collect();
        let (x0, x1, y0, y1) = if pts.is_empty() { (-1.0, 1.0, -1.0, 1.0) } else { bounds(&pts) };
        let (w, h) = ((x1 - x0).max(1e-12), (y1 - y0).max(1e-12));
        let (px, py) = (0.05 * w, 0.05 * h);
        let stroke = 0.002 * w.max(h);
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
            sig15(x0 - px),
            sig15(-y1 - py),
            sig15(w + 2.0 * px),
            sig15(h + 2.0 * py)
        );
        let groups = [("circles", "closed", &self.circles, "#1f4e9c"), ("radials", "open", &self.radials, "#b5441d")];
        for (id, kind, curves, color) in groups {
            let _ = writeln!(s, r#"<g id="{id}" fill="none" stroke="{color}" stroke-width="{}">"#, sig15(stroke));
            for c in curves {
                // closed curves repeat their first point
                let first = if kind == "closed" { c.points.first() } else { None };
                let coords: Vec<String> =
                    c.points.iter().chain(first).map(|p| format!("{},{}", sig15(p.re), sig15(-p.im))).collect();
                let _ = writeln!(s, r#"<polyline points="{}"/>"#, coords.join(" "));
            }
            let _ = writeln!(s, "</g>");
        }
        s.push_str("</svg>\n");
        s
    }
}
