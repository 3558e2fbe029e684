//! Truncated complex power series with Jackson q-calculus.
//!
//! A [`TruncatedSeries`] holds `a_0 + a_1 z + ... + a_N z^N`. Products and
//! quotients are truncated at the larger order of the operands. The Jackson
//! q-derivative maps `z^k` to `[k]_q z^(k-1)` and the Jackson q-integral maps
//! `z^n` to `z^(n+1) / [n+1]_q`; at the classical marker both reduce to the
//! ordinary derivative and integral.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::{DEFAULT_TOL, Q_MAX, Q_MIN};

/// Deformation parameter `q` in `(0, 1)`, or the classical limit `q -> 1-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParam(Option<f64>);

impl QParam {
    /// A proper deformation parameter. Values outside `[1e-6, 1 - 1e-6]` are
    /// rejected because `1 - q` appears in denominators.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (Q_MIN..=Q_MAX).contains(&value) {
            Ok(QParam(Some(value)))
        } else {
            Err(Error::InvalidQ(value))
        }
    }

    pub const fn classical() -> Self {
        QParam(None)
    }

    pub fn is_classical(&self) -> bool {
        self.0.is_none()
    }

    /// Numeric value; the classical marker reads as 1.
    pub fn value(&self) -> f64 {
        self.0.unwrap_or(1.0)
    }

    /// Parse `"classical"` or a decimal number.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("classical") {
            return Ok(Self::classical());
        }
        let v: f64 = s.parse().map_err(|_| Error::InvalidQ(f64::NAN))?;
        Self::new(v)
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("classical"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum QParamRepr {
    Value(f64),
    Marker(String),
}

impl Serialize for QParam {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(v) => QParamRepr::Value(v),
            None => QParamRepr::Marker("classical".into()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QParam {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match QParamRepr::deserialize(deserializer)? {
            QParamRepr::Value(v) => QParam::new(v).map_err(D::Error::custom),
            QParamRepr::Marker(m) if m == "classical" => Ok(QParam::classical()),
            QParamRepr::Marker(m) => Err(D::Error::custom(format!("unknown q marker `{m}`"))),
        }
    }
}

/// The q-integer `[k]_q = 1 + q + ... + q^(k-1)`; equals `k` at the classical marker.
pub fn q_number(k: usize, q: QParam) -> f64 {
    match q.0 {
        None => k as f64,
        Some(q) => {
            let mut sum = 0.0;
            let mut power = 1.0;
            for _ in 0..k {
                sum += power;
                power *= q;
            }
            sum
        }
    }
}

/// The q-factorial `[1]_q [2]_q ... [k]_q`, with `[0]_q! = 1`.
pub fn q_factorial(k: usize, q: QParam) -> f64 {
    (1..=k).map(|j| q_number(j, q)).product()
}

/// Complex power series truncated at a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Build from coefficients `a_0 ..= a_N`. At least one coefficient is
    /// required and all must be finite.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::MalformedSeries("no coefficients".into()));
        }
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFiniteCoefficient { index });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0), order)
    }

    /// `c z^k`, or the zero series if `k` exceeds the order.
    pub fn monomial(k: usize, c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The identity `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(1, Complex64::new(1.0, 0.0), order)
    }

    /// `1/(1 - z) = 1 + z + z^2 + ...`
    pub fn geometric(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(1.0, 0.0); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Pad with zeros or truncate to the given order.
    pub fn resized(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::default());
        Self { coeffs }
    }

    /// Horner evaluation of the retained polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::default(), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&a| a * c).collect() }
    }

    /// `s(c z)`: coefficient `a_k` becomes `a_k c^k`.
    pub fn scale_argument(&self, c: Complex64) -> Self {
        let mut power = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let out = a * power;
                power *= c;
                out
            })
            .collect();
        Self { coeffs }
    }

    /// Power-series quotient `self / den`, truncated at the larger order.
    ///
    /// Fails with [`Error::ZeroConstantTerm`] when `|den_0|` is below the
    /// global tolerance.
    pub fn checked_div(&self, den: &TruncatedSeries) -> Result<Self> {
        let d0 = den.coeffs[0];
        if d0.norm() < DEFAULT_TOL {
            return Err(Error::ZeroConstantTerm(d0.norm()));
        }
        let order = self.order().max(den.order());
        let inv_d0 = d0.inv();
        let mut out: Vec<Complex64> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(den.order()) {
                acc -= den.coeffs[j] * out[k - j];
            }
            out.push(acc * inv_d0);
        }
        Self::new(out)
    }

    /// Jackson q-derivative, re-padded to the input order.
    pub fn q_derivative(&self, q: QParam) -> Self {
        let order = self.order();
        let mut coeffs = vec![Complex64::default(); order + 1];
        for k in 1..=order {
            coeffs[k - 1] = self.coeffs[k] * q_number(k, q);
        }
        Self { coeffs }
    }

    /// Ordinary derivative, re-padded to the input order.
    pub fn derivative(&self) -> Self {
        self.q_derivative(QParam::classical())
    }

    /// Jackson q-integral from 0 with zero integration constant. The result has
    /// order `N + 1`.
    pub fn q_integrate(&self, q: QParam) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::default());
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, &a)| a / q_number(k + 1, q)));
        Self { coeffs }
    }

    /// Pointwise Jackson derivative from the difference quotient
    /// `(s(z) - s(qz)) / ((1 - q) z)`, with value `a_1` at the origin. At the
    /// classical marker this is the ordinary derivative.
    pub fn q_derivative_at(&self, z: Complex64, q: QParam) -> Complex64 {
        if z == Complex64::default() {
            return self.coeff(1);
        }
        match q.0 {
            None => self.derivative().eval(z),
            Some(qv) => (self.eval(z) - self.eval(z * qv)) / (z * (1.0 - qv)),
        }
    }

    /// Largest coefficient gap, treating missing coefficients as zero.
    pub fn max_abs_diff(&self, other: &TruncatedSeries) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        TruncatedSeries { coeffs: (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        TruncatedSeries { coeffs: (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect() }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }
}

/// Cauchy product truncated at the larger order.
impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().max(rhs.order());
        let mut coeffs = vec![Complex64::default(); order + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::default() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;

            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    order: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            order: self.order(),
            re: self.coeffs.iter().map(|c| c.re).collect(),
            im: self.coeffs.iter().map(|c| c.im).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeriesJson::deserialize(deserializer)?;
        if raw.re.len() != raw.order + 1 || raw.im.len() != raw.order + 1 {
            return Err(D::Error::custom(format!(
                "order {} needs {} coefficients, got re: {}, im: {}",
                raw.order,
                raw.order + 1,
                raw.re.len(),
                raw.im.len()
            )));
        }
        let coeffs = raw.re.iter().zip(&raw.im).map(|(&re, &im)| Complex64::new(re, im)).collect();
        TruncatedSeries::new(coeffs).map_err(D::Error::custom)
    }
}
