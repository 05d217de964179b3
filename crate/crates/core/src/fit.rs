//! Ordinary least squares on transformed data, used for log-log and
//! log-linear scaling exponents.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero when the fit is exact or has only
    /// two points.
    pub slope_stderr: f64,
    pub residuals: Vec<f64>,
}

/// Fits `y = intercept + slope * x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::shape(format!("{} x values vs {} y values", xs.len(), ys.len())));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::argument("a line fit needs at least two points"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::argument("fit data must be finite"));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::argument("x values are all equal"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    let slope_stderr = if n > 2 {
        let sse: f64 = residuals.iter().map(|r| r * r).sum();
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LinearFit { slope, intercept, slope_stderr, residuals })
}

/// Exponent `b` of `y ≈ a · x^b`, fitted on natural logs.
pub fn power_law_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.iter().chain(ys).any(|v| *v <= 0.0) {
        return Err(Error::argument("power-law fit needs positive data"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly)
}

/// Slope of `ln y` against `x`, i.e. `ln(base)` of `y ≈ a · base^x`.
pub fn exponential_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if ys.iter().any(|v| *v <= 0.0) {
        return Err(Error::argument("exponential fit needs positive data"));
    }
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(xs, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 0.5 * x).collect();
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12);
        assert!((f.intercept - 3.0).abs() < 1e-12);
        assert!(f.slope_stderr < 1e-12);
    }

    #[test]
    fn power_and_exponential() {
        let xs = [8.0, 16.0, 32.0, 64.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 5.0 * x.powf(1.5)).collect();
        assert!((power_law_fit(&xs, &ys).unwrap().slope - 1.5).abs() < 1e-12);
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 2f64.powf(0.3 * x)).collect();
        let f = exponential_fit(&xs, &ys).unwrap();
        assert!((f.slope.exp() - 2f64.powf(0.3)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(linear_fit(&[1.0], &[1.0]).is_err());
        assert!(linear_fit(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(linear_fit(&[1.0, 2.0], &[1.0]).is_err());
        assert!(power_law_fit(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn noisy_fit_has_stderr() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys = [1.1, 1.9, 3.2, 3.9, 5.1];
        let f = linear_fit(&xs, &ys).unwrap();
        assert!(f.slope_stderr > 0.0);
        assert!((f.residuals.iter().sum::<f64>()).abs() < 1e-12);
    }
}
