//! PSNR and sparsity-pattern error rates.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::sparsity::SparsityPattern;

pub const PEAK: f64 = 255.0;

/// Full-image PSNR in dB against a fixed peak of 255. Identical images give
/// `f64::INFINITY`.
pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    b.check_dims(a.rows(), a.cols())?;
    let sse: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    let mse = sse / a.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / mse).log10())
}

/// Both rates are percentages of the total coefficient count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternError {
    /// Truly zeroed coefficients the estimate missed.
    pub miss_detection_pct: f64,
    /// Coefficients the estimate zeroed that should have been kept.
    pub false_alarm_pct: f64,
}

pub fn pattern_error(estimated: &SparsityPattern, reference: &SparsityPattern) -> Result<PatternError> {
    if estimated.dims() != reference.dims() {
        return Err(Error::dims(reference.dims(), estimated.dims()));
    }
    if estimated.kind() != reference.kind() {
        return Err(Error::KindMismatch {
            expected: reference.kind(),
            actual: estimated.kind(),
        });
    }
    let (mut miss, mut false_alarm) = (0usize, 0usize);
    for (&e, &r) in estimated.zero_set().iter().zip(reference.zero_set()) {
        match (e, r) {
            (false, true) => miss += 1,
            (true, false) => false_alarm += 1,
            _ => {}
        }
    }
    let n = reference.len() as f64;
    Ok(PatternError {
        miss_detection_pct: 100.0 * miss as f64 / n,
        false_alarm_pct: 100.0 * false_alarm as f64 / n,
    })
}
