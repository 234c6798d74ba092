//! Reconstruction from irregular samples by low-pass quotient.
//!
//! The masked image and the mask are smoothed with the same normalized
//! cross-shaped window, pass after pass, until the smoothed mask is positive
//! everywhere. Their ratio fills in each missing pixel with a weighted
//! average of the known ones.

use crate::error::{Error, Result};
use crate::image::{apply_mask, Image, Mask};

/// Smoothed-mask floor below which the quotient is not trusted.
pub const SUPPORT_EPSILON: f64 = 1e-6;

/// The 3×3 window `(1/5)·[[0,1,0],[1,1,1],[0,1,0]]`, as (row, col) offsets.
const CROSS: [(isize, isize); 5] = [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)];

/// Convolves `passes` times with the cross window, replicating edge pixels.
pub fn lowpass(image: &Image, passes: usize) -> Result<Image> {
    if passes == 0 {
        return Err(Error::InvalidParameter("lowpass needs at least one pass".into()));
    }
    let mut out = image.pixels().to_vec();
    let mut scratch = vec![0.0; out.len()];
    for _ in 0..passes {
        cross_pass(&out, &mut scratch, image.rows(), image.cols());
        std::mem::swap(&mut out, &mut scratch);
    }
    Ok(Image::from_parts(image.rows(), image.cols(), out))
}

fn cross_pass(src: &[f64], dst: &mut [f64], rows: usize, cols: usize) {
    let clamp = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
    for r in 0..rows {
        for c in 0..cols {
            let sum: f64 = CROSS
                .iter()
                .map(|&(dr, dc)| {
                    let rr = clamp(r as isize + dr, rows);
                    let cc = clamp(c as isize + dc, cols);
                    src[rr * cols + cc]
                })
                .sum();
            dst[r * cols + c] = sum / 5.0;
        }
    }
}

/// Fills missing pixels with the low-pass quotient; known pixels are copied
/// through unchanged.
pub fn tv_reconstruct(corrupted: &Image, mask: &Mask) -> Result<Image> {
    tv_reconstruct_with_passes(corrupted, mask).map(|(image, _)| image)
}

/// As [`tv_reconstruct`], also returning the number of smoothing passes.
///
/// The pass count is the smallest `p` for which every entry of the smoothed
/// mask exceeds [`SUPPORT_EPSILON`], searched up to `max(rows, cols)`.
pub fn tv_reconstruct_with_passes(corrupted: &Image, mask: &Mask) -> Result<(Image, usize)> {
    mask.check_dims(corrupted.rows(), corrupted.cols())?;
    let (rows, cols) = corrupted.dims();
    let cap = rows.max(cols);
    if mask.known_count() == 0 {
        return Err(Error::InsufficientSupport {
            passes: 0,
            epsilon: SUPPORT_EPSILON,
        });
    }

    let mut num = apply_mask(corrupted, mask)?.into_pixels();
    let mut den = mask.to_image().into_pixels();
    let mut scratch = vec![0.0; num.len()];
    let mut passes = 0;
    while passes < cap {
        cross_pass(&num, &mut scratch, rows, cols);
        std::mem::swap(&mut num, &mut scratch);
        cross_pass(&den, &mut scratch, rows, cols);
        std::mem::swap(&mut den, &mut scratch);
        passes += 1;
        if den.iter().all(|&d| d > SUPPORT_EPSILON) {
            let pixels = corrupted
                .pixels()
                .iter()
                .zip(mask.bits())
                .zip(num.iter().zip(&den))
                .map(|((&x, &known), (&n, &d))| if known { x } else { n / d })
                .collect();
            return Ok((Image::from_parts(rows, cols, pixels), passes));
        }
    }
    Err(Error::InsufficientSupport {
        passes,
        epsilon: SUPPORT_EPSILON,
    })
}
