use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::ols;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    Linear,
    Exponential,
}

/// `y = slope x + intercept` (linear) or `y = prefactor exp(rate x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub kind: FitKind,
    pub slope_or_rate: f64,
    pub intercept_or_prefactor: f64,
    pub r_squared: f64,
    pub points: Vec<(f64, f64)>,
}

impl ScalingFit {
    pub fn evaluate(&self, x: f64) -> f64 {
        evaluate(
            self.kind,
            self.slope_or_rate,
            self.intercept_or_prefactor,
            x,
        )
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|&(x, y)| y - self.evaluate(x))
            .collect()
    }
}

fn evaluate(kind: FitKind, a: f64, b: f64, x: f64) -> f64 {
    match kind {
        FitKind::Linear => a * x + b,
        FitKind::Exponential => b * (a * x).exp(),
    }
}

fn check_points(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::invalid("a fit needs at least two points"));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::invalid("fit points must be finite"));
    }
    Ok(())
}

pub fn fit_linear(points: &[(f64, f64)]) -> Result<ScalingFit> {
    check_points(points)?;
    let (slope, intercept, r2) =
        ols(points).ok_or_else(|| Error::invalid("fit needs at least two distinct x values"))?;
    Ok(ScalingFit {
        kind: FitKind::Linear,
        slope_or_rate: slope,
        intercept_or_prefactor: intercept,
        r_squared: r2,
        points: points.to_vec(),
    })
}

/// Least squares on `(x, ln y)`. `r_squared` refers to the log-space fit.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<ScalingFit> {
    check_points(points)?;
    if let Some((x, y)) = points.iter().find(|(_, y)| *y <= 0.0) {
        return Err(Error::invalid(format!(
            "exponential fit needs positive y, got ({x}, {y})"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x, y.ln())).collect();
    let (rate, ln_a, r2) =
        ols(&logs).ok_or_else(|| Error::invalid("fit needs at least two distinct x values"))?;
    Ok(ScalingFit {
        kind: FitKind::Exponential,
        slope_or_rate: rate,
        intercept_or_prefactor: ln_a.exp(),
        r_squared: r2,
        points: points.to_vec(),
    })
}

/// Published coefficients and the extrapolations quoted alongside them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceFit {
    pub kind: FitKind,
    pub slope_or_rate: f64,
    pub intercept_or_prefactor: f64,
    #[serde(default)]
    pub quoted_extrapolations: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceFits {
    pub quantum_linear: ReferenceFit,
    pub classical_exponential: ReferenceFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationRow {
    pub x: f64,
    pub fitted: f64,
    pub reference_formula: f64,
    pub quoted: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitComparison {
    pub fit: ScalingFit,
    pub reference: ReferenceFit,
    pub coefficients_match: bool,
    pub annotation: String,
    /// Reference formula evaluated at the fitted points.
    pub reference_at_points: Vec<(f64, f64)>,
    pub extrapolations: Vec<ExtrapolationRow>,
}

impl ReferenceFit {
    pub fn evaluate(&self, x: f64) -> f64 {
        evaluate(
            self.kind,
            self.slope_or_rate,
            self.intercept_or_prefactor,
            x,
        )
    }

    /// Compare a fresh fit against these coefficients. Coefficients match
    /// when both agree within `rel_tol`.
    pub fn compare(&self, fit: &ScalingFit, rel_tol: f64, xs: &[f64]) -> FitComparison {
        let close = |a: f64, b: f64| (a - b).abs() <= rel_tol * b.abs().max(f64::MIN_POSITIVE);
        let coefficients_match = self.kind == fit.kind
            && close(fit.slope_or_rate, self.slope_or_rate)
            && close(fit.intercept_or_prefactor, self.intercept_or_prefactor);
        let annotation = if coefficients_match {
            "fitted coefficients agree with the published ones".to_string()
        } else {
            format!(
                "MISMATCH: fitted ({:.6}, {:.6}) vs published ({}, {}); the published formula does not reproduce the input points",
                fit.slope_or_rate, fit.intercept_or_prefactor, self.slope_or_rate, self.intercept_or_prefactor
            )
        };
        let mut grid: Vec<f64> = xs.to_vec();
        for (x, _) in &self.quoted_extrapolations {
            if !grid.contains(x) {
                grid.push(*x);
            }
        }
        grid.sort_by(f64::total_cmp);
        FitComparison {
            fit: fit.clone(),
            reference: self.clone(),
            coefficients_match,
            annotation,
            reference_at_points: fit
                .points
                .iter()
                .map(|&(x, _)| (x, self.evaluate(x)))
                .collect(),
            extrapolations: grid
                .into_iter()
                .map(|x| ExtrapolationRow {
                    x,
                    fitted: fit.evaluate(x),
                    reference_formula: self.evaluate(x),
                    quoted: self
                        .quoted_extrapolations
                        .iter()
                        .find(|(qx, _)| *qx == x)
                        .map(|(_, y)| *y),
                })
                .collect(),
        }
    }
}
