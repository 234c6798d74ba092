//! Seeded loss-pattern generators: square block losses and straight strokes
//! standing in for overlaid text.
//!
//! All randomness comes from [`XorShift64Star`], so a seed fully determines
//! a mask.

use crate::error::{Error, Result};
use crate::image::Mask;
use crate::rng::XorShift64Star;

/// Placement attempts allowed per requested block.
pub const ATTEMPTS_PER_BLOCK: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSpec {
    pub block_size: usize,
    pub count: usize,
    pub seed: u64,
}

/// Places `count` pairwise-disjoint `block_size`×`block_size` holes.
///
/// Each attempt draws a top-left corner `(row, col)` with `row` drawn first,
/// both uniform over positions that keep the block inside the image. A
/// candidate overlapping an already placed block is discarded.
pub fn block_mask(rows: usize, cols: usize, spec: BlockSpec) -> Result<Mask> {
    let mut mask = Mask::all_known(rows, cols)?;
    let size = spec.block_size;
    if size == 0 || size > rows.min(cols) {
        return Err(Error::InvalidParameter(format!(
            "block size {size} must be in 1..={}",
            rows.min(cols)
        )));
    }
    if spec.count == 0 {
        return Ok(mask);
    }

    let mut rng = XorShift64Star::new(spec.seed);
    let budget = ATTEMPTS_PER_BLOCK.saturating_mul(spec.count);
    let mut placed: Vec<(usize, usize)> = Vec::with_capacity(spec.count);
    let mut attempts = 0;
    while placed.len() < spec.count {
        if attempts == budget {
            return Err(Error::PlacementInfeasible {
                count: spec.count,
                size,
                attempts,
            });
        }
        attempts += 1;
        let r = rng.below((rows - size + 1) as u64) as usize;
        let c = rng.below((cols - size + 1) as u64) as usize;
        let overlaps = placed
            .iter()
            .any(|&(pr, pc)| r < pr + size && pr < r + size && c < pc + size && pc < c + size);
        if !overlaps {
            placed.push((r, c));
        }
    }

    for (r0, c0) in placed {
        for r in r0..r0 + size {
            mask.bits_mut()[r * cols + c0..r * cols + c0 + size].fill(false);
        }
    }
    Ok(mask)
}

/// Zeroes `stroke_count` random line segments of the given width.
///
/// Per stroke the generator draws, in order, start row, start column, end
/// row and end column, each uniform over the image. Segments are drawn with
/// [`draw_stroke`].
pub fn stroke_mask(
    rows: usize,
    cols: usize,
    stroke_count: usize,
    stroke_width: usize,
    seed: u64,
) -> Result<Mask> {
    if stroke_width == 0 {
        return Err(Error::InvalidParameter("stroke width must be at least 1".into()));
    }
    let mut mask = Mask::all_known(rows, cols)?;
    let mut rng = XorShift64Star::new(seed);
    for _ in 0..stroke_count {
        let start = (rng.below(rows as u64) as i64, rng.below(cols as u64) as i64);
        let end = (rng.below(rows as u64) as i64, rng.below(cols as u64) as i64);
        draw_stroke(&mut mask, start, end, stroke_width);
    }
    Ok(mask)
}

/// Marks a straight segment between two pixel centres as missing.
///
/// With `n = max(|Δrow|, |Δcol|)`, the segment visits the `n + 1` points
/// `start + round(t·Δ/n)` for `t = 0..=n`, rounding half away from zero.
/// Each visited point is stamped with a `width`×`width` square covering
/// offsets `-(width-1)/2 ..= width/2` on both axes. Pixels outside the image
/// are ignored.
pub fn draw_stroke(mask: &mut Mask, start: (i64, i64), end: (i64, i64), width: usize) {
    let (rows, cols) = (mask.rows() as i64, mask.cols() as i64);
    let dr = end.0 - start.0;
    let dc = end.1 - start.1;
    let steps = dr.abs().max(dc.abs());
    let lo = -((width as i64 - 1) / 2);
    let hi = width as i64 / 2;
    for t in 0..=steps {
        let (r, c) = if steps == 0 {
            start
        } else {
            (
                start.0 + round_div(t * dr, steps),
                start.1 + round_div(t * dc, steps),
            )
        };
        for rr in (r + lo)..=(r + hi) {
            for cc in (c + lo)..=(c + hi) {
                if (0..rows).contains(&rr) && (0..cols).contains(&cc) {
                    let idx = (rr * cols + cc) as usize;
                    mask.bits_mut()[idx] = false;
                }
            }
        }
    }
}

/// `num / den` rounded half away from zero, for `den > 0`.
fn round_div(num: i64, den: i64) -> i64 {
    let q = (2 * num.abs() + den) / (2 * den);
    if num < 0 {
        -q
    } else {
        q
    }
}

/// Pixel is known only if known in both masks.
pub fn combine_masks(a: &Mask, b: &Mask) -> Result<Mask> {
    b.check_dims(a.rows(), a.cols())?;
    let bits = a.bits().iter().zip(b.bits()).map(|(&x, &y)| x && y).collect();
    Mask::new(a.rows(), a.cols(), bits)
}
