//! Alternating projections between the transform-sparsity set and the
//! data-consistency set.
//!
//! The sparsity set holds every image whose coefficients vanish on a given
//! pattern; the data set holds every image agreeing with the received pixels
//! on the known locations. Both are closed affine subspaces, so alternating
//! their projections converges toward a point of the intersection and the
//! distance to any such point never increases.

use crate::error::{Error, Result};
use crate::image::{Image, Mask};
use crate::sparsity::SparsityPattern;
use crate::transform::{TransformKind, Transformer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryConfig {
    pub kind: TransformKind,
    /// Rounds of sparsity-then-data projection. 0 returns the input.
    pub iterations: usize,
    /// Record the max-abs change of every round.
    pub residual_log: bool,
    /// Stop once a round changes no pixel by more than this much.
    pub early_stop: Option<f64>,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        Self {
            kind: TransformKind::Dct,
            iterations: 500,
            residual_log: false,
            early_stop: None,
        }
    }
}

/// Threshold used when early stopping is switched on without a value.
pub const DEFAULT_EARLY_STOP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryReport {
    pub output: Image,
    pub iterations_run: usize,
    /// One entry per round when `residual_log` was set.
    pub per_iteration_delta: Option<Vec<f64>>,
}

/// Projection onto the sparsity set: transform, zero the pattern, invert.
pub fn project_sparse(image: &Image, pattern: &SparsityPattern) -> Result<Image> {
    let transformer = Transformer::new(image.rows(), image.cols(), pattern.kind());
    project_sparse_with(&transformer, image, pattern)
}

pub fn project_sparse_with(
    transformer: &Transformer,
    image: &Image,
    pattern: &SparsityPattern,
) -> Result<Image> {
    pattern.check_compatible(image.rows(), image.cols(), transformer.kind())?;
    let mut coeffs = transformer.forward(image)?;
    coeffs.zero_where(pattern.zero_set());
    transformer.inverse(&coeffs)
}

/// Projection onto the data set: known pixels from `known`, the rest from
/// `image`.
pub fn project_data(image: &Image, known: &Image, mask: &Mask) -> Result<Image> {
    known.check_dims(image.rows(), image.cols())?;
    mask.check_dims(image.rows(), image.cols())?;
    let pixels = image
        .pixels()
        .iter()
        .zip(known.pixels())
        .zip(mask.bits())
        .map(|((&x, &k), &m)| if m { k } else { x })
        .collect();
    Ok(Image::from_parts(image.rows(), image.cols(), pixels))
}

/// Stepwise recovery state.
///
/// Starts from the corrupted image; each [`step`](Pocs::step) applies the
/// sparsity projection followed by the data projection, so the current
/// iterate always matches the received pixels exactly.
#[derive(Debug)]
pub struct Pocs<'a> {
    transformer: Transformer,
    known: &'a Image,
    mask: &'a Mask,
    pattern: &'a SparsityPattern,
    current: Image,
    steps: usize,
}

impl<'a> Pocs<'a> {
    pub fn new(known: &'a Image, mask: &'a Mask, pattern: &'a SparsityPattern) -> Result<Self> {
        mask.check_dims(known.rows(), known.cols())?;
        pattern.check_compatible(known.rows(), known.cols(), pattern.kind())?;
        Ok(Self {
            transformer: Transformer::new(known.rows(), known.cols(), pattern.kind()),
            known,
            mask,
            pattern,
            current: known.clone(),
            steps: 0,
        })
    }

    /// Runs one round and returns the largest per-pixel change.
    pub fn step(&mut self) -> Result<f64> {
        let sparse = project_sparse_with(&self.transformer, &self.current, self.pattern)?;
        let next = project_data(&sparse, self.known, self.mask)?;
        let delta = next
            .pixels()
            .iter()
            .zip(self.current.pixels())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        self.current = next;
        self.steps += 1;
        Ok(delta)
    }

    pub fn current(&self) -> &Image {
        &self.current
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn into_image(self) -> Image {
        self.current
    }
}

/// Recovers missing pixels given the sender's sparsity pattern.
///
/// `corrupted` supplies both the starting point and the known data; its
/// missing pixels are expected to be zero.
pub fn inpaint_with_side_info(
    corrupted: &Image,
    mask: &Mask,
    pattern: &SparsityPattern,
    config: &RecoveryConfig,
) -> Result<RecoveryReport> {
    if config.kind != pattern.kind() {
        return Err(Error::KindMismatch {
            expected: config.kind,
            actual: pattern.kind(),
        });
    }
    let mut pocs = Pocs::new(corrupted, mask, pattern)?;
    let mut deltas = config.residual_log.then(|| Vec::with_capacity(config.iterations));
    for _ in 0..config.iterations {
        let delta = pocs.step()?;
        if let Some(log) = deltas.as_mut() {
            log.push(delta);
        }
        if config.early_stop.is_some_and(|tol| delta < tol) {
            break;
        }
    }
    Ok(RecoveryReport {
        iterations_run: pocs.steps(),
        output: pocs.into_image(),
        per_iteration_delta: deltas,
    })
}
