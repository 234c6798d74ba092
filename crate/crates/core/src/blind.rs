//! Recovery without side information.
//!
//! The receiver estimates the sparsity pattern from a low-pass quotient
//! reconstruction of the damaged image, builds a degraded sparse image from
//! it, runs the side-information recovery loop with the estimated pattern,
//! and finally pastes the received pixels back in.

use crate::error::{Error, Result};
use crate::image::{apply_mask, Image, Mask};
use crate::pocs::{inpaint_with_side_info, project_sparse_with, RecoveryConfig, RecoveryReport};
use crate::sparsity::{derive_pattern, SparsityPattern};
use crate::transform::{TransformKind, Transformer};
use crate::tvrecon::tv_reconstruct;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlindConfig {
    pub kind: TransformKind,
    /// Sparsity fraction the sender is assumed to have used.
    pub fraction: f64,
    pub iterations: usize,
}

impl BlindConfig {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.fraction) {
            return Err(Error::InvalidParameter(format!(
                "sparsity fraction {} outside [0, 1]",
                self.fraction
            )));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidParameter(
                "blind recovery needs at least one iteration".into(),
            ));
        }
        Ok(())
    }
}

/// Pattern of the low-pass quotient reconstruction.
pub fn estimate_pattern(
    corrupted: &Image,
    mask: &Mask,
    kind: TransformKind,
    fraction: f64,
) -> Result<SparsityPattern> {
    let reconstructed = tv_reconstruct(corrupted, mask)?;
    let transformer = Transformer::new(corrupted.rows(), corrupted.cols(), kind);
    derive_pattern(&transformer.forward(&reconstructed)?, fraction)
}

pub fn inpaint_blind(corrupted: &Image, mask: &Mask, config: &BlindConfig) -> Result<RecoveryReport> {
    config.validate()?;
    let transformer = Transformer::new(corrupted.rows(), corrupted.cols(), config.kind);

    let reconstructed = tv_reconstruct(corrupted, mask)?;
    let pattern = derive_pattern(&transformer.forward(&reconstructed)?, config.fraction)?;

    let degraded_sparse = apply_mask(
        &project_sparse_with(&transformer, &reconstructed, &pattern)?,
        mask,
    )?;

    let recovery = RecoveryConfig {
        kind: config.kind,
        iterations: config.iterations,
        residual_log: false,
        early_stop: None,
    };
    let mut report = inpaint_with_side_info(&degraded_sparse, mask, &pattern, &recovery)?;

    let pixels = report
        .output
        .pixels()
        .iter()
        .zip(corrupted.pixels())
        .zip(mask.bits())
        .map(|((&inpainted, &received), &known)| if known { received } else { inpainted })
        .collect();
    report.output = Image::new(corrupted.rows(), corrupted.cols(), pixels)?;
    Ok(report)
}
