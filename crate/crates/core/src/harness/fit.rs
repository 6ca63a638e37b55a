//! Log-log least-squares exponent estimation over sweep records.

use super::sweep::ScalingRecord;
use crate::error::{Error, Result};

/// Fitted power-law exponent with its regression diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub predictor: String,
    pub exponent: f64,
    pub std_error: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Least-squares slope of `ln y` against `ln x`. Requires at least
/// three distinct positive abscissas and positive ordinates.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<SlopeFit> {
    for &(x, y) in points {
        if !(x > 0.0 && x.is_finite() && y > 0.0 && y.is_finite()) {
            return Err(Error::invalid(format!(
                "log-log fit needs positive finite points, got ({x}, {y})"
            )));
        }
    }
    let mut xs: Vec<f64> = points.iter().map(|&(x, _)| x).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    if xs.len() < 3 {
        return Err(Error::invalid(format!(
            "log-log fit needs at least 3 distinct x values, got {}",
            xs.len()
        )));
    }

    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in &logs {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut sse = 0.0;
    for &(x, y) in &logs {
        let resid = y - (intercept + slope * x);
        sse += resid * resid;
    }
    let dof = m - 2.0;
    let std_error = if dof > 0.0 {
        (sse / dof / sxx).sqrt()
    } else {
        0.0
    };
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(SlopeFit {
        predictor: String::new(),
        exponent: slope,
        std_error,
        r_squared: r_squared.clamp(0.0, 1.0),
        points: points.len(),
    })
}

/// Fit `y_field` against `x_field` across records, one fit per value
/// combination of `group_by` fields. Rows missing either field are
/// skipped. Returns (group label, fit) pairs in first-seen order.
pub fn fit_slope(
    records: &[ScalingRecord],
    x_field: &str,
    y_field: &str,
    group_by: &[&str],
) -> Result<Vec<(String, SlopeFit)>> {
    let mut groups: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for rec in records {
        let (Some(x), Some(y)) = (rec.numeric_field(x_field)?, rec.numeric_field(y_field)?) else {
            continue;
        };
        let mut label_parts = Vec::with_capacity(group_by.len());
        for field in group_by {
            label_parts.push(format!("{field}={}", rec.display_field(field)?));
        }
        let label = if label_parts.is_empty() {
            "all".to_string()
        } else {
            label_parts.join(" ")
        };
        match groups.iter_mut().find(|(l, _)| *l == label) {
            Some((_, pts)) => pts.push((x, y)),
            None => groups.push((label, vec![(x, y)])),
        }
    }
    if groups.is_empty() {
        return Err(Error::invalid(format!(
            "no records carry both {x_field:?} and {y_field:?}"
        )));
    }
    let mut fits = Vec::with_capacity(groups.len());
    for (label, pts) in groups {
        let mut fit = fit_loglog(&pts)?;
        fit.predictor = x_field.to_string();
        fits.push((label, fit));
    }
    Ok(fits)
}
