//! Built-in test functions named on the command line.

use std::f64::consts::PI;
use std::path::Path;

use frac_hirota::grid::{Boundary, GridFunction};
use frac_hirota::marchaud::AnalyticFunction;
use frac_hirota::Complex64;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FuncSpec {
    Gaussian(f64),
    XGaussian,
    Sech(f64),
    Mode(f64),
    FromCsv,
}

impl FuncSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let number = |a: Option<&str>, default: Option<f64>| -> Result<f64, CliError> {
            match a {
                Some(a) => a
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad number `{a}` in function `{s}`"))),
                None => default.ok_or_else(|| CliError::Usage(format!("`{name}` needs a parameter, e.g. `{name}:1`"))),
            }
        };
        match name {
            "gaussian" => Ok(Self::Gaussian(number(arg, Some(0.0))?)),
            "sech" => Ok(Self::Sech(number(arg, Some(0.0))?)),
            "x-gaussian" if arg.is_none() => Ok(Self::XGaussian),
            "mode" => Ok(Self::Mode(number(arg, None)?)),
            "from-csv" if arg.is_none() => Ok(Self::FromCsv),
            _ => Err(CliError::Usage(format!(
                "unknown function `{s}`; expected gaussian[:c], sech[:c], x-gaussian, mode:k or from-csv"
            ))),
        }
    }

    /// Default `(L, N)` for the function.
    pub fn default_grid(self) -> (f64, usize) {
        match self {
            Self::Gaussian(_) | Self::XGaussian => (20.0, 2048),
            Self::Sech(_) => (40.0, 2048),
            Self::Mode(_) => (PI, 64),
            Self::FromCsv => (0.0, 0),
        }
    }

    pub fn handle(self) -> Option<AnalyticFunction> {
        match self {
            Self::Gaussian(c) => Some(AnalyticFunction::gaussian(c)),
            Self::XGaussian => Some(AnalyticFunction::x_gaussian()),
            Self::Sech(c) => Some(AnalyticFunction::sech(c)),
            Self::Mode(k) => Some(AnalyticFunction::mode(k)),
            Self::FromCsv => None,
        }
    }

    pub fn wavenumber(self) -> Option<f64> {
        match self {
            Self::Mode(k) => Some(k),
            _ => None,
        }
    }
}

/// Grid data from a CSV of `x, re[, im]` rows on a uniform grid of `[-L, L)`.
pub fn read_grid_csv(path: &Path) -> Result<GridFunction, CliError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let field = |j: usize| -> Result<f64, CliError> {
            record
                .get(j)
                .unwrap_or("0")
                .parse()
                .map_err(|_| CliError::Usage(format!("{}: row {}: column {} is not a number", path.display(), row + 1, j + 1)))
        };
        if record.len() < 2 {
            return Err(CliError::Usage(format!("{}: row {} needs x and re columns", path.display(), row + 1)));
        }
        xs.push(field(0)?);
        values.push(Complex64::new(field(1)?, field(2)?));
    }
    if xs.len() < 2 {
        return Err(CliError::Usage(format!("{}: fewer than two samples", path.display())));
    }
    let l = -xs[0];
    let n = xs.len();
    let h = 2.0 * l / n as f64;
    if !(l > 0.0) || xs.iter().enumerate().any(|(j, &x)| (x - (-l + j as f64 * h)).abs() > 1e-9 * l) {
        return Err(CliError::Usage(format!(
            "{}: x must be the uniform grid x_j = -L + 2Lj/N starting at -L",
            path.display()
        )));
    }
    Ok(GridFunction::new(values, l)?)
}

/// Samples of `spec` on `[-L, L)`, marked periodic when requested.
pub fn sample(spec: FuncSpec, l: f64, n: usize, input: Option<&Path>, periodic: bool) -> Result<GridFunction, CliError> {
    let f = match spec.handle() {
        Some(h) => h.sample(l, n)?,
        None => {
            let path = input.ok_or_else(|| CliError::Usage("`--func from-csv` needs `--input PATH`".into()))?;
            read_grid_csv(path)?
        }
    };
    Ok(if periodic { f.with_boundary(Boundary::Periodic) } else { f })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        assert_eq!(FuncSpec::parse("gaussian").unwrap(), FuncSpec::Gaussian(0.0));
        assert_eq!(FuncSpec::parse("sech:-1.5").unwrap(), FuncSpec::Sech(-1.5));
        assert_eq!(FuncSpec::parse("mode:2").unwrap(), FuncSpec::Mode(2.0));
        assert!(FuncSpec::parse("mode").is_err());
        assert!(FuncSpec::parse("cosine").is_err());
        assert!(FuncSpec::parse("mode:x").is_err());
    }

    #[test]
    fn mode_grid_is_two_pi_periodic() {
        assert_eq!(FuncSpec::Mode(1.0).default_grid(), (PI, 64));
    }
}
