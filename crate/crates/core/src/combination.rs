//! Convex combinations `sum t_j f_j` of harmonic maps and the sufficient
//! conditions for the combination to stay univalent and convex in the
//! direction of the real axis.

use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::harmonic::HarmonicMap;
use crate::qseries::{QParam, TruncatedSeries};
use crate::verify::{cdr_value, scan_grid, SampleGrid, Seek, Tolerances, VerificationReport};

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Maps with convex weights. All maps share `q` and truncation order.
#[derive(Debug, Clone)]
pub struct CombinationSpec {
    maps: Vec<HarmonicMap>,
    weights: Vec<f64>,
}

impl CombinationSpec {
    pub fn new(maps: Vec<HarmonicMap>, weights: Vec<f64>) -> Result<Self> {
        if maps.len() < 2 {
            return Err(Error::WeightError(format!("need at least two maps, got {}", maps.len())));
        }
        if maps.len() != weights.len() {
            return Err(Error::WeightError(format!("{} maps but {} weights", maps.len(), weights.len())));
        }
        if let Some(t) = weights.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::WeightError(format!("weight {t} outside [0, 1]")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightError(format!("weights sum to {sum}")));
        }
        let (q, order) = (maps[0].q(), maps[0].order());
        if maps.iter().any(|m| m.q() != q) {
            return Err(Error::MixedParamError("q".into()));
        }
        if maps.iter().any(|m| m.order() != order) {
            return Err(Error::MixedParamError("truncation order".into()));
        }
        Ok(Self { maps, weights })
    }

    /// `t f1 + (1 - t) f2`
    pub fn pair(f1: HarmonicMap, f2: HarmonicMap, t: f64) -> Result<Self> {
        Self::new(vec![f1, f2], vec![t, 1.0 - t])
    }

    pub fn maps(&self) -> &[HarmonicMap] {
        &self.maps
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn q(&self) -> QParam {
        self.maps[0].q()
    }

    fn kernel(&self) -> CombinedKernel {
        let q = self.q();
        let weighted = |part: fn(&HarmonicMap) -> &TruncatedSeries| {
            self.maps.iter().zip(&self.weights).fold(TruncatedSeries::zero(self.maps[0].order()), |acc, (m, &t)| {
                &acc + &part(m).q_derivative(q).scale(Complex64::new(t, 0.0))
            })
        };
        CombinedKernel { dq_g: weighted(HarmonicMap::g), dq_h: weighted(HarmonicMap::h) }
    }
}

/// Weighted q-derivatives of a combination, cached for grid sweeps.
struct CombinedKernel {
    dq_g: TruncatedSeries,
    dq_h: TruncatedSeries,
}

impl CombinedKernel {
    fn dilatation(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        let den = self.dq_h.eval(z);
        if den.norm() < tol {
            return Err(Error::DenominatorZero { re: z.re, im: z.im });
        }
        Ok(self.dq_g.eval(z) / den)
    }
}

/// Coefficient-wise `h = sum t_j h_j`, `g = sum t_j g_j`.
pub fn combine(spec: &CombinationSpec) -> Result<HarmonicMap> {
    let order = spec.maps[0].order();
    let (mut h, mut g) = (TruncatedSeries::zero(order), TruncatedSeries::zero(order));
    for (m, &t) in spec.maps.iter().zip(&spec.weights) {
        let t = Complex64::new(t, 0.0);
        h = &h + &m.h().scale(t);
        g = &g + &m.g().scale(t);
    }
    let label = spec.weights.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",");
    HarmonicMap::new(h, g, spec.q(), format!("combine[{label}]"))
}

/// Pointwise dilatation of the combination,
/// `sum t_j dq g_j(z) / sum t_j dq h_j(z)`.
pub fn combined_dilatation(spec: &CombinationSpec, z: Complex64) -> Result<Complex64> {
    spec.kernel().dilatation(z, crate::DEFAULT_TOL)
}

/// Hypothesis check for a combination of maps sharing one dilatation.
///
/// Reports (i) the pointwise dilatation mismatch against the first map and
/// the coefficient mismatch of the cross-multiplied series
/// `dq g_1 dq h_j - dq g_j dq h_1`, and (ii) per map the grid minimum of
/// `Re(z dq F_j / phi_q)` with `F_j = h_j - g_j`. Passes when both mismatches
/// are within tolerance and every minimum clears the margin.
pub fn check_th1(spec: &CombinationSpec, theta: f64, grid: &SampleGrid, tol: Tolerances) -> Result<VerificationReport> {
    let q = spec.q();
    let dils = spec.maps.iter().map(HarmonicMap::dilatation).collect::<Result<Vec<_>>>()?;
    let base = &dils[0];

    let mut coeff_residual: f64 = 0.0;
    for d in &dils[1..] {
        let lhs = base.numerator() * d.denominator();
        let rhs = d.numerator() * base.denominator();
        let scale = 1.0 + lhs.max_abs_coeff().max(rhs.max_abs_coeff());
        coeff_residual = coeff_residual.max(lhs.max_abs_diff(&rhs) / scale);
    }

    let pointwise = scan_grid(grid, Seek::Max, |z| {
        let w0 = base.eval(z)?;
        dils[1..].iter().try_fold(0.0f64, |acc, d| Some(acc.max((d.eval(z)? - w0).norm())))
    });

    let dq_fs: Vec<TruncatedSeries> = spec.maps.iter().map(|m| m.analytic_difference().q_derivative(q)).collect();
    if let Some(j) = dq_fs.iter().position(|d| d.coeff(0).norm() <= tol.tol) {
        return Err(Error::HypothesisViolated(format!("dq F_{} vanishes at the origin", j + 1)));
    }
    let per_map: Vec<_> =
        dq_fs.iter().map(|d| scan_grid(grid, Seek::Min, |z| Some(cdr_value(d, z, theta, q)))).collect();
    let overall = scan_grid(grid, Seek::Min, |z| {
        Some(dq_fs.iter().map(|d| cdr_value(d, z, theta, q)).fold(f64::INFINITY, f64::min))
    });
    let max_abs_omega =
        dils.iter().map(|d| scan_grid(grid, Seek::Max, |z| d.eval(z).map(|w| w.norm())).value()).fold(0.0, f64::max);

    let dil_ok = pointwise.skipped == 0 && pointwise.value() <= tol.tol && coeff_residual <= tol.tol;
    let crit_ok = overall.skipped == 0 && overall.value() >= tol.margin;
    let mut report = VerificationReport::new("th1", dil_ok && crit_ok, overall.extremal_or_origin(), grid_json(grid))
        .param("q", q)
        .param("theta", theta)
        .param("weights", spec.weights())
        .param("maps", spec.maps.iter().map(|m| m.provenance()).collect::<Vec<_>>())
        .detail("dilatation_residual_pointwise", pointwise.value())
        .detail("dilatation_residual_coefficient", coeff_residual)
        .detail("dilatations_equal", dil_ok)
        .detail("criterion_min_per_map", per_map.iter().map(|s| s.value()).collect::<Vec<_>>())
        .detail("max_abs_omega", max_abs_omega);
    report.per_radius = overall.per_radius;
    Ok(report)
}

fn grid_json(grid: &SampleGrid) -> serde_json::Value {
    json!({ "radii": grid.radii(), "angles": grid.angles() })
}

/// Pointwise pieces of the cross-term condition.
struct PairPoint {
    w1: Complex64,
    w2: Complex64,
    dh1: Complex64,
    dh2: Complex64,
    dg1: Complex64,
    dg2: Complex64,
}

struct PairKernel {
    dh1: TruncatedSeries,
    dh2: TruncatedSeries,
    dg1: TruncatedSeries,
    dg2: TruncatedSeries,
}

impl PairKernel {
    fn new(f1: &HarmonicMap, f2: &HarmonicMap) -> Self {
        Self {
            dh1: f1.h().q_derivative(f1.q()),
            dh2: f2.h().q_derivative(f2.q()),
            dg1: f1.g().q_derivative(f1.q()),
            dg2: f2.g().q_derivative(f2.q()),
        }
    }

    fn at(&self, z: Complex64, tol: f64) -> Result<PairPoint> {
        let (dh1, dh2) = (self.dh1.eval(z), self.dh2.eval(z));
        if dh1.norm() < tol || dh2.norm() < tol {
            return Err(Error::DenominatorZero { re: z.re, im: z.im });
        }
        let (dg1, dg2) = (self.dg1.eval(z), self.dg2.eval(z));
        Ok(PairPoint { w1: dg1 / dh1, w2: dg2 / dh2, dh1, dh2, dg1, dg2 })
    }
}

impl PairPoint {
    /// `Re{(1 - w1 conj w2) dq h1 conj(dq h2)}`
    fn condition(&self) -> f64 {
        ((1.0 - self.w1 * self.w2.conj()) * self.dh1 * self.dh2.conj()).re
    }

    fn omega3(&self, t: f64) -> Option<Complex64> {
        let den = self.dh1 * t + self.dh2 * (1.0 - t);
        (den.norm() > 0.0).then(|| (self.dg1 * t + self.dg2 * (1.0 - t)) / den)
    }
}

/// Cross-term condition for `t f1 + (1 - t) f2` with unequal dilatations.
///
/// Reports the grid minimum of `Re{(1 - w1 conj w2) dq h1 conj(dq h2)}` and,
/// at every point where that value is non-negative and both `|w_j|` clear the
/// margin, confirms `|w3| < 1` for the combined dilatation. Passes when the
/// minimum is at least `-tol`, both input dilatations stay inside the unit
/// disk, and no such point has `|w3| >= 1`.
pub fn check_qth(
    f1: &HarmonicMap,
    f2: &HarmonicMap,
    t: f64,
    grid: &SampleGrid,
    tol: Tolerances,
) -> Result<VerificationReport> {
    if f1.q() != f2.q() {
        return Err(Error::MixedParamError("q".into()));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::WeightError(format!("t = {t} outside [0, 1]")));
    }
    let kernel = PairKernel::new(f1, f2);
    let mut max_w1: f64 = 0.0;
    let mut max_w2: f64 = 0.0;
    let mut max_w3: f64 = 0.0;
    let mut violations = 0usize;
    let cond = scan_grid(grid, Seek::Min, |z| {
        let p = kernel.at(z, tol.tol).ok()?;
        let (a1, a2) = (p.w1.norm(), p.w2.norm());
        max_w1 = max_w1.max(a1);
        max_w2 = max_w2.max(a2);
        let c = p.condition();
        if let Some(w3) = p.omega3(t) {
            max_w3 = max_w3.max(w3.norm());
            if c >= 0.0 && a1 <= 1.0 - tol.margin && a2 <= 1.0 - tol.margin && w3.norm() >= 1.0 {
                violations += 1;
            }
        }
        Some(c)
    });
    let omega_in_range = max_w1 < 1.0 && max_w2 < 1.0;
    let pass = cond.skipped == 0 && cond.value() >= -tol.tol && omega_in_range && violations == 0;
    let mut report = VerificationReport::new("qth", pass, cond.extremal_or_origin(), grid_json(grid))
        .param("q", f1.q())
        .param("t", t)
        .param("maps", [f1.provenance(), f2.provenance()])
        .detail("max_abs_omega1", max_w1)
        .detail("max_abs_omega2", max_w2)
        .detail("max_abs_omega3", max_w3)
        .detail("omega_in_range", omega_in_range)
        .detail("omega3_violations", violations)
        .detail("skipped", cond.skipped);
    report.per_radius = cond.per_radius;
    Ok(report)
}

/// `|LHS - RHS|` for the expansion
///
/// ```text
/// |t h1' + (1-t) h2'|^2 - |t w1 h1' + (1-t) w2 h2'|^2
///   = t^2 (1 - |w1|^2) |h1'|^2 + (1-t)^2 (1 - |w2|^2) |h2'|^2
///     + 2 t (1-t) Re{(1 - w1 conj w2) h1' conj h2'}
/// ```
///
/// with `'` the q-derivative and `w_j` the q-dilatations. The difference is
/// divided by `max(1, (t|h1'| + (1-t)|h2'|)^2 (1 + max|w_j|)^2)`, which bounds
/// every term, so the value is an absolute residual for moderate derivatives
/// and a relative one where `|h'|^2` outgrows double precision.
pub fn qth_identity_residual(f1: &HarmonicMap, f2: &HarmonicMap, t: f64, z: Complex64) -> Result<f64> {
    let p = PairKernel::new(f1, f2).at(z, crate::DEFAULT_TOL)?;
    let s = 1.0 - t;
    let lhs = (p.dh1 * t + p.dh2 * s).norm_sqr() - (p.w1 * p.dh1 * t + p.w2 * p.dh2 * s).norm_sqr();
    let rhs = t * t * (1.0 - p.w1.norm_sqr()) * p.dh1.norm_sqr()
        + s * s * (1.0 - p.w2.norm_sqr()) * p.dh2.norm_sqr()
        + 2.0 * t * s * p.condition();
    let scale = (t * p.dh1.norm() + s * p.dh2.norm()) * (1.0 + p.w1.norm().max(p.w2.norm()));
    Ok((lhs - rhs).abs() / scale.powi(2).max(1.0))
}
