//! Grayscale image inpainting with transform-domain sparsity.
//!
//! A sender sparsifies an image by zeroing its smallest DCT or FFT
//! coefficients and ships the resulting zero pattern as side information.
//! A receiver recovers lost pixels by alternating between two projections:
//! one that re-imposes the zero pattern in the transform domain, and one that
//! restores the pixels that survived. When no side information is available
//! the pattern is estimated from a low-pass reconstruction of the damaged
//! image.
//!
//! Module map:
//!
//! - [`image`]: `Image`/`Mask` value types and PGM I/O.
//! - [`masks`]: seeded block and stroke loss patterns.
//! - [`transform`]: orthonormal 2D DCT and unnormalized 2D FFT.
//! - [`sparsity`]: zero-pattern derivation, the sparsity operator, and the
//!   `.spin` side-information codec.
//! - [`pocs`]: the two projections and the alternating recovery loop.
//! - [`tvrecon`]: low-pass quotient reconstruction from irregular samples.
//! - [`blind`]: recovery without side information.
//! - [`metrics`]: PSNR and pattern error rates.

pub mod blind;
pub mod error;
pub mod image;
pub mod masks;
pub mod metrics;
pub mod pocs;
pub mod rng;
pub mod sparsity;
pub mod transform;
pub mod tvrecon;

pub use blind::{estimate_pattern, inpaint_blind, BlindConfig};
pub use error::{Error, Result};
pub use image::{
    apply_mask, decode_pgm, encode_pgm, read_mask, read_pgm, write_mask, write_pgm, Image, Mask,
};
pub use masks::{block_mask, combine_masks, stroke_mask, BlockSpec};
pub use metrics::{pattern_error, psnr, PatternError};
pub use pocs::{inpaint_with_side_info, project_data, project_sparse, Pocs, RecoveryConfig, RecoveryReport};
pub use sparsity::{
    apply_sparsity, decode_pattern, derive_pattern, encode_pattern, read_pattern, sparsify, write_pattern,
    SparsityPattern,
};
pub use transform::{forward, inverse, CoeffPlane, Coeffs, TransformKind, Transformer};
pub use tvrecon::{lowpass, tv_reconstruct};
