//! Harmonic maps `f = h + conj(g)`, their q-dilatation, and the q-shear
//! construction.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{q_number, QParam, TruncatedSeries};
use crate::verify::SampleGrid;
use crate::DEFAULT_TOL;

const NORMALIZATION_TOL: f64 = 1e-12;

/// A harmonic map of the disk, `f = h + conj(g)`, with `h(0) = g(0) = 0` and
/// `h'(0) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapJson")]
pub struct HarmonicMap {
    q: QParam,
    h: TruncatedSeries,
    g: TruncatedSeries,
    provenance: String,
}

#[derive(Deserialize)]
struct MapJson {
    q: QParam,
    h: TruncatedSeries,
    g: TruncatedSeries,
    #[serde(default)]
    provenance: String,
}

impl TryFrom<MapJson> for HarmonicMap {
    type Error = Error;

    fn try_from(raw: MapJson) -> Result<Self> {
        HarmonicMap::new(raw.h, raw.g, raw.q, raw.provenance)
    }
}

impl HarmonicMap {
    /// Validate normalization and bring both parts to a common order.
    pub fn new(h: TruncatedSeries, g: TruncatedSeries, q: QParam, provenance: impl Into<String>) -> Result<Self> {
        let order = h.order().max(g.order());
        if order < 1 {
            return Err(Error::NotNormalized("order must be at least 1".into()));
        }
        let (h, g) = (h.resized(order), g.resized(order));
        if h.coeff(0).norm() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(format!("h(0) = {}", h.coeff(0))));
        }
        if g.coeff(0).norm() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(format!("g(0) = {}", g.coeff(0))));
        }
        if (h.coeff(1) - 1.0).norm() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(format!("h'(0) = {}", h.coeff(1))));
        }
        let mut h_coeffs = h.coeffs().to_vec();
        let mut g_coeffs = g.coeffs().to_vec();
        h_coeffs[0] = Complex64::default();
        g_coeffs[0] = Complex64::default();
        Ok(Self {
            q,
            h: TruncatedSeries::new(h_coeffs)?,
            g: TruncatedSeries::new(g_coeffs)?,
            provenance: provenance.into(),
        })
    }

    pub fn h(&self) -> &TruncatedSeries {
        &self.h
    }

    pub fn g(&self) -> &TruncatedSeries {
        &self.g
    }

    pub fn q(&self) -> QParam {
        self.q
    }

    pub fn order(&self) -> usize {
        self.h.order()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// `h(z) + conj(g(z))`
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.h.eval(z) + self.g.eval(z).conj()
    }

    /// The analytic function `F = h - g` whose image governs horizontal convexity.
    pub fn analytic_difference(&self) -> TruncatedSeries {
        &self.h - &self.g
    }

    /// The q-dilatation pair `(dq g, dq h)`.
    pub fn dilatation(&self) -> Result<Dilatation> {
        Dilatation::new(self.g.q_derivative(self.q), self.h.q_derivative(self.q))
    }

    /// `|h'(z)|^2 - |g'(z)|^2` with ordinary derivatives.
    pub fn jacobian(&self, z: Complex64) -> f64 {
        self.jacobian_kernel().eval(z)
    }

    /// Precomputed classical derivatives for repeated Jacobian evaluation.
    pub fn jacobian_kernel(&self) -> JacobianKernel {
        JacobianKernel { dh: self.h.derivative(), dg: self.g.derivative() }
    }
}

/// Classical derivatives of a map, cached for grid sweeps.
#[derive(Debug, Clone)]
pub struct JacobianKernel {
    dh: TruncatedSeries,
    dg: TruncatedSeries,
}

impl JacobianKernel {
    pub fn eval(&self, z: Complex64) -> f64 {
        self.dh.eval(z).norm_sqr() - self.dg.eval(z).norm_sqr()
    }
}

/// q-dilatation `omega_q = dq g / dq h`, kept as a numerator/denominator pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilatation {
    num: TruncatedSeries,
    den: TruncatedSeries,
}

impl Dilatation {
    pub fn new(num: TruncatedSeries, den: TruncatedSeries) -> Result<Self> {
        let d0 = den.coeff(0).norm();
        if d0 < DEFAULT_TOL {
            return Err(Error::ZeroConstantTerm(d0));
        }
        Ok(Self { num, den })
    }

    pub fn numerator(&self) -> &TruncatedSeries {
        &self.num
    }

    pub fn denominator(&self) -> &TruncatedSeries {
        &self.den
    }

    /// Pointwise ratio, or `None` where the denominator vanishes.
    pub fn eval(&self, z: Complex64) -> Option<Complex64> {
        let d = self.den.eval(z);
        if d.norm() < DEFAULT_TOL {
            None
        } else {
            Some(self.num.eval(z) / d)
        }
    }

    /// The ratio expanded as a truncated series.
    pub fn series(&self) -> Result<TruncatedSeries> {
        self.num.checked_div(&self.den)
    }
}

/// Which analytic combination of `h` and `g` the shear prescribes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShearConvention {
    /// `h - g = F`
    Minus,
    /// `h + g = F`
    Plus,
}

impl ShearConvention {
    /// Sign of `omega` in the shear denominator `1 -/+ omega`.
    fn sign(self) -> f64 {
        match self {
            ShearConvention::Minus => -1.0,
            ShearConvention::Plus => 1.0,
        }
    }
}

impl fmt::Display for ShearConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShearConvention::Minus => "minus",
            ShearConvention::Plus => "plus",
        })
    }
}

impl FromStr for ShearConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "minus" => Ok(ShearConvention::Minus),
            "plus" => Ok(ShearConvention::Plus),
            other => Err(format!("unknown shear convention `{other}` (expected minus|plus)")),
        }
    }
}

/// Output of [`q_shear`]: the map plus the largest `|omega|` seen on the
/// default grid.
#[derive(Debug, Clone)]
pub struct Sheared {
    pub map: HarmonicMap,
    pub max_abs_omega: f64,
}

impl Sheared {
    pub fn dilatation_in_range(&self) -> bool {
        self.max_abs_omega < 1.0
    }
}

/// Shear an analytic `F` along the dilatation `omega`.
///
/// Solves `dq h (1 -/+ omega) = dq F` and `dq g = omega dq h` in series
/// arithmetic, then Jackson-integrates both parts with zero constant. The
/// result satisfies `h -/+ g = F` through the common truncation order.
///
/// `|omega| >= 1` on the default grid only logs a warning, since the
/// hypothesis may itself be what is under test.
pub fn q_shear(
    f: &TruncatedSeries,
    omega: &TruncatedSeries,
    q: QParam,
    convention: ShearConvention,
) -> Result<Sheared> {
    if f.coeff(0).norm() > NORMALIZATION_TOL || (f.coeff(1) - 1.0).norm() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(format!(
            "shear source needs F(0) = 0 and F'(0) = 1, got {} and {}",
            f.coeff(0),
            f.coeff(1)
        )));
    }
    let order = f.order().max(omega.order());
    let omega = omega.resized(order);
    let one_pm_omega = &TruncatedSeries::one(order) + &omega.scale(Complex64::new(convention.sign(), 0.0));
    if one_pm_omega.coeff(0).norm() < DEFAULT_TOL {
        return Err(Error::ShearSingularity { sign: if convention == ShearConvention::Minus { '-' } else { '+' } });
    }
    let df = f.resized(order).q_derivative(q);
    let dh = df.checked_div(&one_pm_omega)?;
    let dg = &omega * &dh;
    let h = dh.q_integrate(q).resized(order);
    let g = dg.q_integrate(q).resized(order);

    let max_abs_omega = SampleGrid::default().points().map(|p| omega.eval(p.z).norm()).fold(0.0, f64::max);
    if max_abs_omega >= 1.0 {
        log::warn!("sheared dilatation reaches |omega| = {max_abs_omega:.6} on the default grid");
    }
    let map = HarmonicMap::new(h, g, q, format!("q_shear({convention})"))?;
    Ok(Sheared { map, max_abs_omega })
}

/// Named maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Classical right half-plane map `h + g = z/(1-z)`, `omega = -z`.
    HalfPlane,
    /// q-deformed half-plane map, closed-form coefficients.
    QHalfPlane,
    /// Shear of `z - z^2/2` with `omega_q = ([2]_q/2) z`.
    Example1,
    /// `h = z`, `omega_q = -([2]_q/2) z`.
    S3F1,
    /// `h = z`, `omega_q = ([3]_q/3) z^2`.
    S3F2,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::HalfPlane, Preset::QHalfPlane, Preset::Example1, Preset::S3F1, Preset::S3F2];

    pub fn name(self) -> &'static str {
        match self {
            Preset::HalfPlane => "half_plane",
            Preset::QHalfPlane => "q_half_plane",
            Preset::Example1 => "example1",
            Preset::S3F1 => "s3_f1",
            Preset::S3F2 => "s3_f2",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// Build a named map at truncation order `order`.
///
/// `half_plane` is a classical object and always carries the classical marker.
pub fn preset(which: Preset, q: QParam, order: usize) -> Result<HarmonicMap> {
    let order = order.max(3);
    let real = |v: f64| Complex64::new(v, 0.0);
    match which {
        Preset::HalfPlane => {
            // h = (z - z^2/2)/(1-z)^2, g = -(z^2/2)/(1-z)^2
            let h = (0..=order).map(|n| if n == 0 { 0.0 } else { (n as f64 + 1.0) / 2.0 });
            let g = (0..=order).map(|n| if n == 0 { 0.0 } else { -(n as f64 - 1.0) / 2.0 });
            HarmonicMap::new(
                TruncatedSeries::new(h.map(real).collect())?,
                TruncatedSeries::new(g.map(real).collect())?,
                QParam::classical(),
                "preset:half_plane",
            )
        }
        Preset::QHalfPlane => {
            let (mut h, mut g) = (vec![real(0.0); order + 1], vec![real(0.0); order + 1]);
            for n in 0..order {
                let m = n as f64 + 1.0;
                let qn = q_number(n + 1, q);
                let a = m * (m + 1.0) / (2.0 * qn);
                h[n + 1] = real(a);
                g[n + 1] = real((2.0 * qn - m * (m + 1.0)) / (2.0 * qn));
            }
            HarmonicMap::new(TruncatedSeries::new(h)?, TruncatedSeries::new(g)?, q, "preset:q_half_plane")
        }
        Preset::Example1 => {
            let f = TruncatedSeries::from_real(&[0.0, 1.0, -0.5])?.resized(order);
            let omega = example1_dilatation(q, order);
            Ok(q_shear(&f, &omega, q, ShearConvention::Minus)?.map.with_provenance("preset:example1"))
        }
        Preset::S3F1 => {
            let omega = TruncatedSeries::monomial(1, real(-q_number(2, q) / 2.0), order);
            analytic_identity_shear(omega, q, "preset:s3_f1")
        }
        Preset::S3F2 => {
            let omega = TruncatedSeries::monomial(2, real(q_number(3, q) / 3.0), order);
            analytic_identity_shear(omega, q, "preset:s3_f2")
        }
    }
}

/// `h = z` and `g` the Jackson integral of `omega`, so that `dq g / dq h = omega`.
fn analytic_identity_shear(omega: TruncatedSeries, q: QParam, provenance: &str) -> Result<HarmonicMap> {
    let order = omega.order();
    let g = omega.q_integrate(q).resized(order);
    HarmonicMap::new(TruncatedSeries::identity(order), g, q, provenance)
}

/// `([2]_q / 2) z`
pub fn example1_dilatation(q: QParam, order: usize) -> TruncatedSeries {
    TruncatedSeries::monomial(1, Complex64::new(q_number(2, q) / 2.0, 0.0), order)
}

/// `(z^2 - 2z + qz) / (1 - qz)` expanded to `order`.
pub fn q_half_plane_dilatation(q: QParam, order: usize) -> Result<TruncatedSeries> {
    let qv = q.value();
    let num = TruncatedSeries::from_real(&[0.0, qv - 2.0, 1.0])?.resized(order);
    let den = TruncatedSeries::from_real(&[1.0, -qv])?.resized(order);
    num.checked_div(&den)
}

/// `z/(1-z) = z + z^2 + ...`
pub fn half_plane_source(order: usize) -> TruncatedSeries {
    &TruncatedSeries::geometric(order) - &TruncatedSeries::one(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    fn map(h: &[f64], g: &[f64]) -> HarmonicMap {
        HarmonicMap::new(TruncatedSeries::from_real(h).unwrap(), TruncatedSeries::from_real(g).unwrap(), q(0.5), "test")
            .unwrap()
    }

    #[test]
    fn eval_map_examples() {
        let f = map(&[0.0, 1.0, 0.3], &[0.0]);
        let z = c(0.2, -0.4);
        assert_eq!(f.eval(z), f.h().eval(z));

        let f = map(&[0.0, 1.0], &[0.0, 0.0, -0.5]);
        assert!((f.eval(c(0.0, 1.0)) - c(0.5, 1.0)).norm() < 1e-15);

        let hp = preset(Preset::HalfPlane, QParam::classical(), 64).unwrap();
        assert_eq!(hp.eval(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn normalization_is_enforced() {
        let h = TruncatedSeries::from_real(&[0.1, 1.0]).unwrap();
        let g = TruncatedSeries::zero(1);
        assert!(matches!(HarmonicMap::new(h, g.clone(), q(0.5), ""), Err(Error::NotNormalized(_))));
        let h = TruncatedSeries::from_real(&[0.0, 2.0]).unwrap();
        assert!(matches!(HarmonicMap::new(h, g, q(0.5), ""), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn dilatation_examples() {
        let qq = q(0.5);
        let f = HarmonicMap::new(TruncatedSeries::identity(4), TruncatedSeries::monomial(2, c(0.5, 0.0), 4), qq, "")
            .unwrap();
        let w = f.dilatation().unwrap();
        let z = c(0.3, 0.4);
        assert!((w.eval(z).unwrap() - z * (q_number(2, qq) / 2.0)).norm() < 1e-15);

        let f = map(&[0.0, 1.0, 0.2], &[0.0]);
        assert_eq!(f.dilatation().unwrap().eval(z).unwrap(), c(0.0, 0.0));

        let qh = preset(Preset::QHalfPlane, qq, 256).unwrap();
        let w = qh.dilatation().unwrap().eval(c(0.3, 0.0)).unwrap();
        let closed = (0.09 - 0.6 + 0.15) / 0.85;
        assert!((w - c(closed, 0.0)).norm() < 1e-12, "{w} vs {closed}");
        assert!((closed + 0.4235).abs() < 1e-4);
    }

    #[test]
    fn jacobian_examples() {
        let id = map(&[0.0, 1.0], &[0.0]);
        assert_eq!(id.jacobian(c(0.4, 0.1)), 1.0);
        let f = map(&[0.0, 1.0], &[0.0, 0.0, 0.5]);
        assert_eq!(f.jacobian(c(0.0, 0.0)), 1.0);
        assert!((f.jacobian(c(0.9, 0.0)) - 0.19).abs() < 1e-15);
    }

    #[test]
    fn example1_shear_gives_identity_analytic_part() {
        for qv in [0.2, 0.5, 0.8] {
            let qq = q(qv);
            let f = TruncatedSeries::from_real(&[0.0, 1.0, -0.5]).unwrap().resized(16);
            let s = q_shear(&f, &example1_dilatation(qq, 16), qq, ShearConvention::Minus).unwrap();
            assert!(s.map.h().max_abs_diff(&TruncatedSeries::identity(16)) < 1e-15);
            // Jackson integration of ([2]_q/2) z gives z^2/2, not ([2]_q/4) z^2.
            let expected_g = TruncatedSeries::monomial(2, c(0.5, 0.0), 16);
            assert!(s.map.g().max_abs_diff(&expected_g) < 1e-15, "q = {qv}: {:?}", s.map.g());
        }
    }

    #[test]
    fn q_half_plane_shear_matches_closed_form() {
        for qv in [0.2, 0.5, 0.8] {
            let qq = q(qv);
            let n = 48;
            let omega = q_half_plane_dilatation(qq, n).unwrap();
            let s = q_shear(&half_plane_source(n), &omega, qq, ShearConvention::Plus).unwrap();
            let direct = preset(Preset::QHalfPlane, qq, n).unwrap();
            assert!(s.map.h().max_abs_diff(direct.h()) < 1e-10);
            assert!(s.map.g().max_abs_diff(direct.g()) < 1e-10);
        }
    }

    #[test]
    fn q_half_plane_coefficient_examples() {
        let m = preset(Preset::QHalfPlane, q(0.5), 32).unwrap();
        assert!((m.h().coeff(2).re - 2.0).abs() < 1e-15);
        assert!((m.g().coeff(2).re + 1.0).abs() < 1e-15);
        let classical = preset(Preset::QHalfPlane, QParam::classical(), 32).unwrap();
        assert_eq!(classical.h().coeff(2).re, 1.5);
        let hp = preset(Preset::HalfPlane, QParam::classical(), 32).unwrap();
        assert!(classical.h().max_abs_diff(hp.h()) < 1e-13);
        assert!(classical.g().max_abs_diff(hp.g()) < 1e-13);
    }

    #[test]
    fn classical_shear_reproduces_half_plane_map() {
        let n = 40;
        let omega = TruncatedSeries::monomial(1, c(-1.0, 0.0), n);
        let s = q_shear(&half_plane_source(n), &omega, QParam::classical(), ShearConvention::Plus).unwrap();
        let hp = preset(Preset::HalfPlane, QParam::classical(), n).unwrap();
        assert!(s.map.h().max_abs_diff(hp.h()) < 1e-12);
        assert!(s.map.g().max_abs_diff(hp.g()) < 1e-12);
    }

    #[test]
    fn shear_singularity_and_normalization_errors() {
        let n = 8;
        let f = half_plane_source(n);
        let one = TruncatedSeries::one(n);
        assert_eq!(
            q_shear(&f, &one, q(0.5), ShearConvention::Minus).unwrap_err(),
            Error::ShearSingularity { sign: '-' }
        );
        let minus_one = one.scale(c(-1.0, 0.0));
        assert_eq!(
            q_shear(&f, &minus_one, q(0.5), ShearConvention::Plus).unwrap_err(),
            Error::ShearSingularity { sign: '+' }
        );
        let bad = f.scale(c(2.0, 0.0));
        assert!(matches!(
            q_shear(&bad, &TruncatedSeries::zero(n), q(0.5), ShearConvention::Minus),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn out_of_range_dilatation_only_warns() {
        let n = 32;
        let omega = TruncatedSeries::monomial(1, c(0.0, 0.0), n);
        let omega = &omega + &TruncatedSeries::monomial(2, c(1.5, 0.0), n);
        let s = q_shear(&half_plane_source(n), &omega, q(0.5), ShearConvention::Minus).unwrap();
        assert!(!s.dilatation_in_range());
        assert!(s.max_abs_omega > 1.0);
    }

    #[test]
    fn s3_presets_carry_stated_dilatations() {
        let qq = q(0.5);
        let z = c(0.5, 0.0);
        let f1 = preset(Preset::S3F1, qq, 16).unwrap();
        let f2 = preset(Preset::S3F2, qq, 16).unwrap();
        let w1 = f1.dilatation().unwrap().eval(z).unwrap();
        let w2 = f2.dilatation().unwrap().eval(z).unwrap();
        assert!((w1 - c(-0.75 * 0.5, 0.0)).norm() < 1e-15);
        assert!((w2 - c(1.75 / 3.0 * 0.25, 0.0)).norm() < 1e-15);
        assert!((f2.g().coeff(3).re - 1.0 / 3.0).abs() < 1e-15);
        assert!((f1.g().coeff(2).re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert_eq!("unknown".parse::<Preset>().unwrap_err(), Error::UnknownPreset("unknown".into()));
    }

    #[test]
    fn map_json_round_trip() {
        let m = preset(Preset::Example1, q(0.5), 8).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.starts_with(r#"{"q":0.5,"h":{"order":8"#));
        let back: HarmonicMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        let broken = json.replacen(r#""re":[0.0,1.0"#, r#""re":[0.0,3.0"#, 1);
        assert!(serde_json::from_str::<HarmonicMap>(&broken).is_err());
    }
}
