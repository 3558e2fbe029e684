//! Grid-based verification of geometric properties of harmonic maps.
//!
//! Every check samples either a polar grid in the disk or the image of a
//! single circle `|z| = r`, and returns a [`VerificationReport`] carrying the
//! extremal value that decided the outcome.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geometry;
use crate::harmonic::HarmonicMap;
use crate::qseries::{QParam, TruncatedSeries};
use crate::{DEFAULT_MARGIN, DEFAULT_TOL};

pub const EVIDENCE_NOTE: &str = "numerical evidence on a sampled grid, not a proof";

/// Comparison tolerance and strict-inequality margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol: f64,
    pub margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, margin: DEFAULT_MARGIN }
    }
}

/// Polar sample of the disk: every radius crossed with `angles` equally
/// spaced angles in `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    radii: Vec<f64>,
    angles: usize,
}

/// One grid node. Indices give the lexicographic order used to break ties.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub radius_index: usize,
    pub angle_index: usize,
    pub z: Complex64,
}

impl Default for SampleGrid {
    /// Radii `0.1, 0.2, ..., 0.9, 0.95` and 360 angles.
    fn default() -> Self {
        let mut radii: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
        radii.push(0.95);
        Self { radii, angles: 360 }
    }
}

impl SampleGrid {
    pub fn new(radii: Vec<f64>, angles: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidGrid("no radii".into()));
        }
        if let Some(r) = radii.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidGrid(format!("radius {r} outside (0, 1)")));
        }
        if angles < 16 {
            return Err(Error::InvalidGrid(format!("{angles} angles, need at least 16")));
        }
        Ok(Self { radii, angles })
    }

    /// Default radii not exceeding `r_max`, plus `r_max` itself.
    pub fn up_to(r_max: f64, angles: usize) -> Result<Self> {
        let mut radii: Vec<f64> = Self::default().radii.into_iter().filter(|&r| r < r_max - 1e-12).collect();
        radii.push(r_max);
        Self::new(radii, angles)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn r_max(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let m = self.angles;
        self.radii.iter().enumerate().flat_map(move |(ri, &r)| {
            (0..m).map(move |k| GridPoint {
                radius_index: ri,
                angle_index: k,
                z: Complex64::from_polar(r, TAU * k as f64 / m as f64),
            })
        })
    }

    fn summary(&self) -> Value {
        json!({ "radii": self.radii, "angles": self.angles })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremal {
    pub value: f64,
    pub at_z: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusSummary {
    pub r: f64,
    pub min: f64,
    pub max: f64,
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub pass: bool,
    pub extremal: Extremal,
    #[serde(default)]
    pub per_radius: Vec<RadiusSummary>,
    pub params: Map<String, Value>,
    pub grid: Value,
    #[serde(default)]
    pub details: Map<String, Value>,
    pub note: String,
}

impl VerificationReport {
    pub(crate) fn new(check: &str, pass: bool, extremal: Extremal, grid: Value) -> Self {
        Self {
            check: check.to_string(),
            pass,
            extremal,
            per_radius: Vec::new(),
            params: Map::new(),
            grid,
            details: Map::new(),
            note: EVIDENCE_NOTE.to_string(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), json!(value));
        self
    }

    pub(crate) fn detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(key.to_string(), json!(value));
        self
    }

    /// Numeric detail lookup, for tests and aggregation.
    pub fn detail_f64(&self, key: &str) -> Option<f64> {
        self.details.get(key).and_then(Value::as_f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Seek {
    Min,
    Max,
}

/// Reduction of per-point values over a grid.
#[derive(Debug, Clone)]
pub(crate) struct Scan {
    pub extremal: Option<Extremal>,
    pub per_radius: Vec<RadiusSummary>,
    pub skipped: usize,
}

impl Scan {
    pub fn value(&self) -> f64 {
        self.extremal.map_or(f64::NAN, |e| e.value)
    }

    pub fn extremal_or_origin(&self) -> Extremal {
        self.extremal.unwrap_or(Extremal { value: f64::NAN, at_z: [0.0, 0.0] })
    }
}

/// Scan a grid in lexicographic order; the first point attaining the extremum
/// wins ties. `None` or non-finite values are counted as skipped.
pub(crate) fn scan_grid(grid: &SampleGrid, seek: Seek, mut f: impl FnMut(Complex64) -> Option<f64>) -> Scan {
    let mut per_radius: Vec<RadiusSummary> =
        grid.radii.iter().map(|&r| RadiusSummary { r, min: f64::INFINITY, max: f64::NEG_INFINITY }).collect();
    let mut best: Option<Extremal> = None;
    let mut skipped = 0;
    for p in grid.points() {
        let Some(v) = f(p.z).filter(|v| v.is_finite()) else {
            skipped += 1;
            continue;
        };
        let summary = &mut per_radius[p.radius_index];
        summary.min = summary.min.min(v);
        summary.max = summary.max.max(v);
        let better = match (best, seek) {
            (None, _) => true,
            (Some(b), Seek::Min) => v < b.value,
            (Some(b), Seek::Max) => v > b.value,
        };
        if better {
            best = Some(Extremal { value: v, at_z: [p.z.re, p.z.im] });
        }
    }
    Scan { extremal: best, per_radius, skipped }
}

/// q-deformed directional kernel `z / ((1 + z e^{i theta})(1 + q z e^{-i theta}))`.
///
/// At `theta = pi` this is `z / ((1 - z)(1 - qz))`; at the classical marker
/// it is the symmetric kernel `z / ((1 + z e^{i theta})(1 + z e^{-i theta}))`.
pub fn phi_q(z: Complex64, theta: f64, q: QParam) -> Complex64 {
    let rot = Complex64::from_polar(1.0, theta);
    z / ((1.0 + z * rot) * (1.0 + z * q.value() * rot.conj()))
}

/// `Re(z dq F(z) / phi_q(z))` given the precomputed `dq F`. The removable
/// singularity at the origin takes the value `Re(dq F(0))`.
pub fn cdr_value(dq_f: &TruncatedSeries, z: Complex64, theta: f64, q: QParam) -> f64 {
    if z == Complex64::default() {
        return dq_f.coeff(0).re;
    }
    (z * dq_f.eval(z) / phi_q(z, theta, q)).re
}

/// Directional-convexity criterion: minimum over the grid of
/// `Re(z dq F / phi_q)`; passes when the minimum is at least the margin.
pub fn check_cdr_criterion(
    f: &TruncatedSeries,
    q: QParam,
    theta: f64,
    grid: &SampleGrid,
    tol: Tolerances,
) -> Result<VerificationReport> {
    let dq_f = f.q_derivative(q);
    if f.coeff(0).norm() > tol.tol {
        return Err(Error::HypothesisViolated(format!("F(0) = {} is not zero", f.coeff(0))));
    }
    if dq_f.coeff(0).norm() <= tol.tol {
        return Err(Error::HypothesisViolated("dq F(0) vanishes".into()));
    }
    let scan = scan_grid(grid, Seek::Min, |z| Some(cdr_value(&dq_f, z, theta, q)));
    let pass = scan.skipped == 0 && scan.value() >= tol.margin;
    let mut report = VerificationReport::new("cdr_criterion", pass, scan.extremal_or_origin(), grid.summary())
        .param("q", q)
        .param("theta", theta)
        .param("margin", tol.margin)
        .detail("skipped", scan.skipped);
    report.per_radius = scan.per_radius;
    Ok(report)
}

/// Lewy-type check: largest `|omega_q|` and smallest Jacobian over the grid.
pub fn check_sense_preserving(f: &HarmonicMap, grid: &SampleGrid, tol: Tolerances) -> VerificationReport {
    let dil = f.dilatation().ok();
    let omega = scan_grid(grid, Seek::Max, |z| dil.as_ref().and_then(|d| d.eval(z)).map(|w| w.norm()));
    let kernel = f.jacobian_kernel();
    let jac = scan_grid(grid, Seek::Min, |z| Some(kernel.eval(z)));
    let pass = dil.is_some() && omega.skipped == 0 && omega.value() <= 1.0 - tol.margin && jac.value() >= tol.margin;
    let mut report = VerificationReport::new("sense_preserving", pass, omega.extremal_or_origin(), grid.summary())
        .param("q", f.q())
        .param("map", f.provenance())
        .param("margin", tol.margin)
        .detail("max_abs_omega", omega.value())
        .detail("min_jacobian", jac.value())
        .detail("min_jacobian_at_z", jac.extremal_or_origin().at_z)
        .detail("skipped", omega.skipped);
    report.per_radius = omega.per_radius;
    report
}

/// Image of the circle `|z| = r` sampled at `m` equally spaced angles.
pub fn boundary_polyline(f: &HarmonicMap, r: f64, m: usize) -> Vec<Complex64> {
    (0..m).map(|k| f.eval(Complex64::from_polar(r, TAU * k as f64 / m as f64))).collect()
}

fn circle_grid(r: f64, m: usize) -> Value {
    json!({ "radii": [r], "angles": m })
}

fn check_circle_args(r: f64, m: usize) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidGrid(format!("radius {r} outside (0, 1)")));
    }
    if m < 64 {
        return Err(Error::InvalidGrid(format!("{m} boundary samples, need at least 64")));
    }
    Ok(())
}

fn image_scale(poly: &[Complex64]) -> f64 {
    let (x0, x1, y0, y1) = geometry::bounds(poly);
    (x1 - x0).max(y1 - y0).max(1.0)
}

/// The image polyline of `|z| = r` must be a simple, positively oriented
/// closed curve. Fails with [`Error::DegenerateCurve`] when consecutive image
/// points coincide.
pub fn check_univalence_boundary(f: &HarmonicMap, r: f64, m: usize, tol: Tolerances) -> Result<VerificationReport> {
    check_circle_args(r, m)?;
    let poly = boundary_polyline(f, r, m);
    let eps = tol.tol * image_scale(&poly);
    for i in 0..m {
        let j = (i + 1) % m;
        if (poly[i] - poly[j]).norm() <= eps {
            return Err(Error::DegenerateCurve(i, j));
        }
    }
    let hits = geometry::self_intersections(&poly, eps);
    let area = geometry::signed_area(&poly);
    let pass = hits.is_empty() && area > 0.0;
    let at = hits.first().map_or(r, |&(i, _)| i as f64);
    let at_z = Complex64::from_polar(r, TAU * at / m as f64);
    Ok(VerificationReport::new(
        "univalence_boundary",
        pass,
        Extremal { value: area, at_z: if hits.is_empty() { [r, 0.0] } else { [at_z.re, at_z.im] } },
        circle_grid(r, m),
    )
    .param("map", f.provenance())
    .param("q", f.q())
    .detail("signed_area", area)
    .detail("intersecting_edge_pairs", hits.len())
    .detail("first_intersection", hits.first().map(|&(i, j)| [i, j])))
}

/// Default number of horizontal levels for [`check_convex_real_direction`].
pub const DEFAULT_LEVELS: usize = 64;

/// Every horizontal line must meet the image of `|z| = r` in 0 or 2 points.
///
/// Levels sit at the midpoints of `levels` equal bands of the image's
/// vertical extent. A level passing within tolerance of a vertex is nudged by
/// a thousandth of the band and retried once.
pub fn check_convex_real_direction(
    f: &HarmonicMap,
    r: f64,
    m: usize,
    levels: usize,
    tol: Tolerances,
) -> Result<VerificationReport> {
    check_circle_args(r, m)?;
    if levels == 0 {
        return Err(Error::InvalidGrid("no horizontal levels".into()));
    }
    let poly = boundary_polyline(f, r, m);
    let eps = tol.tol * image_scale(&poly);
    if !geometry::self_intersections(&poly, eps).is_empty() {
        return Err(Error::HypothesisViolated(format!("image of |z| = {r} is not a simple curve")));
    }
    let (_, _, y0, y1) = geometry::bounds(&poly);
    let band = (y1 - y0) / levels as f64;
    let mut worst: Option<(usize, f64)> = None;
    let mut bad_levels = 0usize;
    let mut odd_levels = 0usize;
    let mut perturbed = 0usize;
    let mut counts = Vec::with_capacity(levels);
    for k in 0..levels {
        let mut level = y0 + (k as f64 + 0.5) * band;
        if geometry::vertex_near_level(&poly, level, eps) {
            level += band * 1e-3;
            perturbed += 1;
            if geometry::vertex_near_level(&poly, level, eps) {
                return Err(Error::TangencyUnresolved(level));
            }
        }
        let n = geometry::horizontal_crossings(&poly, level);
        counts.push(n);
        if n % 2 == 1 {
            odd_levels += 1;
        }
        if n != 0 && n != 2 {
            bad_levels += 1;
        }
        if worst.is_none_or(|(w, _)| n > w) {
            worst = Some((n, level));
        }
    }
    let (max_count, at_level) = worst.unwrap_or((0, y0));
    Ok(VerificationReport::new(
        "convex_real_direction",
        bad_levels == 0,
        // the location is in the image plane: (0, level of the worst slice)
        Extremal { value: max_count as f64, at_z: [0.0, at_level] },
        circle_grid(r, m),
    )
    .param("map", f.provenance())
    .param("q", f.q())
    .param("levels", levels)
    .detail("bad_levels", bad_levels)
    .detail("odd_levels", odd_levels)
    .detail("perturbed_levels", perturbed)
    .detail("crossings", counts))
}

/// Containment of the sampled image in `Re w > -1/2`.
pub fn check_half_plane_range(f: &HarmonicMap, grid: &SampleGrid, tol: Tolerances) -> VerificationReport {
    let scan = scan_grid(grid, Seek::Min, |z| Some(f.eval(z).re));
    let pass = scan.skipped == 0 && scan.value() > -0.5 - tol.tol;
    let mut report = VerificationReport::new("half_plane_range", pass, scan.extremal_or_origin(), grid.summary())
        .param("map", f.provenance())
        .param("q", f.q())
        .param("bound", -0.5);
    report.per_radius = scan.per_radius;
    report
}

/// Default direction: the real axis kernel `(1 - z)(1 - qz)`.
pub const DEFAULT_THETA: f64 = PI;
