use std::path::PathBuf;

use qshear_core::{QParam, SampleGrid, Tolerances, DEFAULT_ORDER};

use crate::args::Common;
use crate::error::{CliError, CliResult};

pub const MIN_ORDER: usize = 8;

/// Validated settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub q: QParam,
    pub theta: f64,
    pub order: usize,
    pub radius: f64,
    pub samples: usize,
    pub tol: Tolerances,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_common(command: &'static str, c: &Common) -> CliResult<Self> {
        let q = if c.q.trim().eq_ignore_ascii_case("classical") {
            QParam::classical()
        } else {
            let v: f64 =
                c.q.trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("--q expects a number or `classical`, got `{}`", c.q)))?;
            QParam::new(v)?
        };
        let order = c.order.unwrap_or(DEFAULT_ORDER);
        if order < MIN_ORDER {
            return Err(CliError::Config(format!("--order {order} is below the minimum {MIN_ORDER}")));
        }
        if !(c.radius > 0.0 && c.radius < 1.0) {
            return Err(CliError::Config(format!("--radius {} must lie in (0, 1)", c.radius)));
        }
        if !c.theta.is_finite() {
            return Err(CliError::Config("--theta must be finite".into()));
        }
        if !(c.tol.is_finite() && c.tol > 0.0) {
            return Err(CliError::Config(format!("--tol {} must be positive", c.tol)));
        }
        if !(c.margin.is_finite() && c.margin >= 0.0) {
            return Err(CliError::Config(format!("--margin {} must be non-negative", c.margin)));
        }
        Ok(Self {
            command,
            q,
            theta: c.theta,
            order,
            radius: c.radius,
            samples: c.samples,
            tol: Tolerances { tol: c.tol, margin: c.margin },
            out: c.out.clone(),
        })
    }

    /// Default radii up to `radius`, `samples` angles each.
    pub fn grid(&self) -> CliResult<SampleGrid> {
        Ok(SampleGrid::up_to(self.radius, self.samples)?)
    }
}

/// Check that every t lies in [0, 1].
pub fn validate_t(values: &[f64]) -> CliResult<()> {
    match values.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        Some(t) => Err(CliError::Config(format!("t = {t} is outside [0, 1]"))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[derive(Parser)]
    struct Wrap {
        #[command(flatten)]
        common: Common,
    }

    fn config(args: &[&str]) -> CliResult<RunConfig> {
        let w = Wrap::try_parse_from(std::iter::once("x").chain(args.iter().copied())).unwrap();
        RunConfig::from_common("test", &w.common)
    }

    #[test]
    fn accepts_defaults_and_classical() {
        let c = config(&[]).unwrap();
        assert_eq!(c.q.value(), 0.5);
        assert_eq!(c.order, DEFAULT_ORDER);
        assert!(config(&["--q", "classical"]).unwrap().q.is_classical());
        assert!(config(&["--q", "1e-6"]).is_ok());
    }

    #[test]
    fn rejects_out_of_range_values() {
        for args in [
            &["--q", "1.5"][..],
            &["--q", "0"],
            &["--q", "abc"],
            &["--order", "7"],
            &["--radius", "1"],
            &["--radius", "0"],
            &["--tol", "0"],
        ] {
            assert!(matches!(config(args), Err(CliError::Config(_))), "{args:?}");
        }
    }

    #[test]
    fn t_range() {
        assert!(validate_t(&[0.0, 0.5, 1.0]).is_ok());
        assert!(validate_t(&[1.1]).is_err());
        assert!(validate_t(&[-0.1]).is_err());
    }
}
