use super::NuTable;
use crate::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(Error::domain(format!("alpha must be > 1, got {alpha}")));
    }
    Ok(())
}

/// Distribution-dependent RCUCB regret bound after `horizon` rounds:
///
/// `Σ_{Δ > 0} 4α ln T / Δ + Δ (1 + 4 / ln((α+1)/2) · ((α+1)/(α-1))²)`.
pub fn regret_upper_bound(table: &NuTable, horizon: u64, alpha: f64) -> Result<f64> {
    regret_bound_from_gaps(table.pairs.iter().map(|p| p.gap), horizon, alpha)
}

pub fn regret_bound_from_gaps(gaps: impl IntoIterator<Item = f64>, horizon: u64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if horizon == 0 {
        return Err(Error::domain("horizon must be >= 1"));
    }
    let ln_t = (horizon as f64).ln();
    let ratio = (alpha + 1.0) / (alpha - 1.0);
    let constant = 1.0 + 4.0 / ((alpha + 1.0) / 2.0).ln() * ratio * ratio;
    Ok(gaps
        .into_iter()
        .filter(|&d| d > 0.0)
        .map(|d| 4.0 * alpha * ln_t / d + d * constant)
        .sum())
}

/// One-sided tail bound on `ν̂ - ν` exceeding the confidence radius at round `t`:
/// `(1 + ln t / ln((α+1)/2)) · t^(-2α/(α+1))`.
pub fn concentration_bound(t: u64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if t < 2 {
        return Err(Error::domain(format!("round must be >= 2, got {t}")));
    }
    let t = t as f64;
    Ok((1.0 + t.ln() / ((alpha + 1.0) / 2.0).ln()) * t.powf(-2.0 * alpha / (alpha + 1.0)))
}
