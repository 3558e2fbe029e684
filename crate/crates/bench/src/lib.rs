//! Shared fixtures for the criterion benchmarks.

use num_complex::Complex64;
use qshear_core::TruncatedSeries;

/// Deterministic series of the given order with decaying, non-trivial
/// coefficients and constant term `c0`.
pub fn fixture_series(order: usize, c0: f64) -> TruncatedSeries {
    let coeffs = (0..=order)
        .map(|k| {
            if k == 0 {
                return Complex64::new(c0, 0.0);
            }
            let x = k as f64;
            Complex64::new((0.9 * x).cos(), (1.7 * x).sin()) / (1.0 + x)
        })
        .collect();
    TruncatedSeries::new(coeffs).expect("finite by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_has_requested_shape() {
        let s = fixture_series(16, 2.0);
        assert_eq!(s.order(), 16);
        assert_eq!(s.coeff(0), Complex64::new(2.0, 0.0));
    }
}
