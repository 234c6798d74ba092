//! Sparsity patterns: which transform coefficients are forced to zero.
//!
//! A pattern is derived by ranking coefficient magnitudes and zeroing the
//! smallest `floor(fraction · N)` of them. Applying the pattern to a plane is
//! the sparsity operator; applying it between a forward and an inverse
//! transform produces the sparse image a sender transmits.
//!
//! The pattern itself travels as side information in the `.spin` format:
//!
//! ```text
//! offset  size  field
//! 0       4     magic "SPIN"
//! 4       1     version, 0x01
//! 5       1     transform kind, 0 = DCT, 1 = FFT
//! 6       4     rows, u32 big-endian
//! 10      4     cols, u32 big-endian
//! 14      8     zero count, u64 big-endian
//! 22      ⌈rows·cols/8⌉  bitset, row-major, MSB first, zero padded
//! ```

use std::cmp::Ordering;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::transform::{conjugate_index, CoeffPlane, TransformKind, Transformer};

pub const MAGIC: &[u8; 4] = b"SPIN";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 22;

/// Set of transform indices whose coefficients are forced to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsityPattern {
    rows: usize,
    cols: usize,
    kind: TransformKind,
    zero_set: Vec<bool>,
}

impl SparsityPattern {
    /// Validates dimensions and, for FFT patterns, closure under the
    /// conjugate mirror.
    pub fn new(rows: usize, cols: usize, kind: TransformKind, zero_set: Vec<bool>) -> Result<Self> {
        if rows == 0 || cols == 0 || zero_set.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "pattern {rows}x{cols} holds {} entries",
                zero_set.len()
            )));
        }
        let pattern = Self {
            rows,
            cols,
            kind,
            zero_set,
        };
        if kind == TransformKind::Fft {
            if let Some(i) = pattern.first_asymmetric_index() {
                return Err(Error::InvalidParameter(format!(
                    "FFT pattern is not closed under conjugation at index {i}"
                )));
            }
        }
        Ok(pattern)
    }

    pub fn empty(rows: usize, cols: usize, kind: TransformKind) -> Result<Self> {
        Self::new(rows, cols, kind, vec![false; rows * cols])
    }

    pub fn full(rows: usize, cols: usize, kind: TransformKind) -> Result<Self> {
        Self::new(rows, cols, kind, vec![true; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.zero_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zero_set.is_empty()
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn zero_set(&self) -> &[bool] {
        &self.zero_set
    }

    pub fn contains(&self, index: usize) -> bool {
        self.zero_set[index]
    }

    /// Number of zeroed coefficients.
    pub fn zero_count(&self) -> usize {
        self.zero_set.iter().filter(|&&z| z).count()
    }

    /// Realized sparsity: zero count over total coefficient count.
    pub fn fraction(&self) -> f64 {
        self.zero_count() as f64 / self.len() as f64
    }

    fn first_asymmetric_index(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.zero_set[i] != self.zero_set[conjugate_index(i, self.rows, self.cols)])
    }

    pub(crate) fn check_compatible(&self, rows: usize, cols: usize, kind: TransformKind) -> Result<()> {
        if self.dims() != (rows, cols) {
            return Err(Error::dims(self.dims(), (rows, cols)));
        }
        if self.kind != kind {
            return Err(Error::KindMismatch {
                expected: self.kind,
                actual: kind,
            });
        }
        Ok(())
    }
}

/// `floor(fraction · n)`, tolerant of products that land a hair below an
/// integer.
pub fn target_count(fraction: f64, n: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!(
            "sparsity fraction {fraction} outside [0, 1]"
        )));
    }
    Ok(((fraction * n as f64 + 1e-9).floor() as usize).min(n))
}

/// Smaller magnitude first; among equal magnitudes the larger index first.
fn zeroing_order(a: (f64, usize), b: (f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(b.1.cmp(&a.1))
}

/// Zeroes the `floor(fraction · N)` smallest-magnitude coefficients.
///
/// FFT planes are ranked by conjugate orbit (an index together with its
/// mirror), using the larger member magnitude and the smaller member index
/// as the orbit's key. Orbits are zeroed whole, in order, until the next one
/// would overshoot the target; the realized count is therefore the target
/// or one below it.
pub fn derive_pattern(coeffs: &CoeffPlane, fraction: f64) -> Result<SparsityPattern> {
    let (rows, cols) = coeffs.dims();
    let n = rows * cols;
    let target = target_count(fraction, n)?;
    let magnitudes = coeffs.magnitudes();
    let mut zero_set = vec![false; n];

    match coeffs.kind() {
        TransformKind::Dct => {
            let mut order: Vec<(f64, usize)> = magnitudes.iter().copied().zip(0..n).collect();
            if target < n {
                order.select_nth_unstable_by(target, |&a, &b| zeroing_order(a, b));
            }
            for &(_, i) in &order[..target] {
                zero_set[i] = true;
            }
        }
        TransformKind::Fft => {
            let mut orbits: Vec<(f64, usize)> = (0..n)
                .filter_map(|i| {
                    let j = conjugate_index(i, rows, cols);
                    (i <= j).then(|| (magnitudes[i].max(magnitudes[j]), i))
                })
                .collect();
            orbits.sort_unstable_by(|&a, &b| zeroing_order(a, b));
            let mut count = 0;
            for (_, i) in orbits {
                let j = conjugate_index(i, rows, cols);
                let size = if i == j { 1 } else { 2 };
                if count + size > target {
                    break;
                }
                zero_set[i] = true;
                zero_set[j] = true;
                count += size;
            }
        }
    }
    SparsityPattern::new(rows, cols, coeffs.kind(), zero_set)
}

/// The sparsity operator: zero on the pattern, identity elsewhere.
pub fn apply_sparsity(coeffs: &CoeffPlane, pattern: &SparsityPattern) -> Result<CoeffPlane> {
    pattern.check_compatible(coeffs.rows(), coeffs.cols(), coeffs.kind())?;
    let mut out = coeffs.clone();
    out.zero_where(&pattern.zero_set);
    Ok(out)
}

/// Transforms, derives the pattern for `fraction`, zeroes it, and transforms
/// back. Returns the sparse image with its pattern.
pub fn sparsify(image: &Image, kind: TransformKind, fraction: f64) -> Result<(Image, SparsityPattern)> {
    let transformer = Transformer::new(image.rows(), image.cols(), kind);
    let coeffs = transformer.forward(image)?;
    let pattern = derive_pattern(&coeffs, fraction)?;
    let sparse = transformer.inverse(&apply_sparsity(&coeffs, &pattern)?)?;
    Ok((sparse, pattern))
}

pub fn encode_pattern(pattern: &SparsityPattern) -> Vec<u8> {
    let n = pattern.len();
    let mut out = Vec::with_capacity(HEADER_LEN + n.div_ceil(8));
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(match pattern.kind {
        TransformKind::Dct => 0,
        TransformKind::Fft => 1,
    });
    out.extend_from_slice(&(pattern.rows as u32).to_be_bytes());
    out.extend_from_slice(&(pattern.cols as u32).to_be_bytes());
    out.extend_from_slice(&(pattern.zero_count() as u64).to_be_bytes());
    for chunk in pattern.zero_set.chunks(8) {
        let byte = chunk
            .iter()
            .enumerate()
            .fold(0u8, |acc, (bit, &z)| acc | (u8::from(z) << (7 - bit)));
        out.push(byte);
    }
    out
}

pub fn decode_pattern(bytes: &[u8]) -> Result<SparsityPattern> {
    let bad = |msg: String| Error::SideInfo(msg);
    if bytes.len() < HEADER_LEN {
        return Err(bad(format!(
            "header truncated: {} of {HEADER_LEN} bytes",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(bad("bad magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(bad(format!("unsupported version {}", bytes[4])));
    }
    let kind = match bytes[5] {
        0 => TransformKind::Dct,
        1 => TransformKind::Fft,
        k => return Err(bad(format!("unknown transform kind byte {k}"))),
    };
    let rows = u32::from_be_bytes(bytes[6..10].try_into().unwrap()) as usize;
    let cols = u32::from_be_bytes(bytes[10..14].try_into().unwrap()) as usize;
    let declared = u64::from_be_bytes(bytes[14..22].try_into().unwrap());
    if rows == 0 || cols == 0 {
        return Err(bad(format!("empty dimensions {rows}x{cols}")));
    }
    let n = rows
        .checked_mul(cols)
        .ok_or_else(|| bad("dimensions overflow".into()))?;
    let payload = &bytes[HEADER_LEN..];
    let expected = n.div_ceil(8);
    match payload.len().cmp(&expected) {
        Ordering::Less => {
            return Err(bad(format!(
                "bitset truncated: {} of {expected} bytes",
                payload.len()
            )))
        }
        Ordering::Greater => {
            return Err(bad(format!(
                "{} trailing bytes after bitset",
                payload.len() - expected
            )))
        }
        Ordering::Equal => {}
    }
    let zero_set: Vec<bool> = (0..n).map(|i| payload[i / 8] & (0x80 >> (i % 8)) != 0).collect();
    if n % 8 != 0 && payload[expected - 1] & (0xFF >> (n % 8)) != 0 {
        return Err(bad("nonzero padding bits".into()));
    }
    let count = zero_set.iter().filter(|&&z| z).count() as u64;
    if count != declared {
        return Err(bad(format!(
            "declared zero count {declared}, bitset holds {count}"
        )));
    }
    SparsityPattern::new(rows, cols, kind, zero_set).map_err(|e| bad(e.to_string()))
}

pub fn read_pattern(path: impl AsRef<Path>) -> Result<SparsityPattern> {
    decode_pattern(&fs::read(path)?)
}

pub fn write_pattern(pattern: &SparsityPattern, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pattern(pattern))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{forward, Coeffs};
    use num_complex::Complex64;

    fn dct_plane(rows: usize, cols: usize, values: Vec<f64>) -> CoeffPlane {
        CoeffPlane::new(rows, cols, Coeffs::Dct(values)).unwrap()
    }

    /// 4x4 plane whose magnitudes are 1..=16 in a scrambled order with
    /// alternating signs.
    fn scrambled_plane() -> CoeffPlane {
        let mags = [
            7.0, 12.0, 1.0, 16.0, 3.0, 9.0, 14.0, 5.0, 11.0, 2.0, 15.0, 8.0, 4.0, 13.0, 6.0, 10.0,
        ];
        let values = mags
            .iter()
            .enumerate()
            .map(|(i, &m)| if i % 2 == 0 { m } else { -m })
            .collect();
        dct_plane(4, 4, values)
    }

    #[test]
    fn target_count_floors() {
        assert_eq!(target_count(0.75, 16).unwrap(), 12);
        assert_eq!(target_count(0.29, 100).unwrap(), 29);
        assert_eq!(target_count(0.95, 262_144).unwrap(), 249_036);
        assert_eq!(target_count(1.0, 7).unwrap(), 7);
        assert!(target_count(1.5, 7).is_err());
        assert!(target_count(f64::NAN, 7).is_err());
    }

    #[test]
    fn fraction_extremes() {
        let plane = scrambled_plane();
        assert_eq!(derive_pattern(&plane, 0.0).unwrap().zero_count(), 0);
        let full = derive_pattern(&plane, 1.0).unwrap();
        assert_eq!(full, SparsityPattern::full(4, 4, TransformKind::Dct).unwrap());
    }

    #[test]
    fn zeroes_smallest_magnitudes() {
        let plane = scrambled_plane();
        let pattern = derive_pattern(&plane, 0.75).unwrap();
        let mags = plane.magnitudes();
        for (i, &mag) in mags.iter().enumerate() {
            assert_eq!(pattern.contains(i), mag <= 12.0, "index {i}");
        }
        let applied = apply_sparsity(&plane, &pattern).unwrap();
        let Coeffs::Dct(v) = applied.coeffs() else {
            unreachable!()
        };
        for i in 0..16 {
            let expected = if mags[i] <= 12.0 { 0.0 } else { plane.magnitude(i) };
            assert_eq!(v[i].abs(), expected);
        }
    }

    #[test]
    fn ties_zero_larger_index_first() {
        let plane = dct_plane(1, 4, vec![1.0, 1.0, -1.0, 1.0]);
        let pattern = derive_pattern(&plane, 0.5).unwrap();
        assert_eq!(pattern.zero_set(), [false, false, true, true]);
    }

    #[test]
    fn sparsity_operator_branches() {
        let plane = scrambled_plane();
        let empty = SparsityPattern::empty(4, 4, TransformKind::Dct).unwrap();
        assert_eq!(apply_sparsity(&plane, &empty).unwrap(), plane);
        let full = SparsityPattern::full(4, 4, TransformKind::Dct).unwrap();
        assert_eq!(
            apply_sparsity(&plane, &full).unwrap(),
            dct_plane(4, 4, vec![0.0; 16])
        );
        let fft = SparsityPattern::empty(4, 4, TransformKind::Fft).unwrap();
        assert!(matches!(
            apply_sparsity(&plane, &fft),
            Err(Error::KindMismatch { .. })
        ));
        let small = SparsityPattern::empty(2, 8, TransformKind::Dct).unwrap();
        assert!(apply_sparsity(&plane, &small).is_err());
    }

    #[test]
    fn fft_orbits_are_atomic_and_never_overshoot() {
        // 1x4 FFT plane: orbits {0}, {1,3}, {2}.
        let values = vec![
            Complex64::new(10.0, 0.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(5.0, 0.0),
            Complex64::new(1.0, -1.0),
        ];
        let plane = CoeffPlane::new(1, 4, Coeffs::Fft(values)).unwrap();
        // Target 1: the smallest orbit has two members and does not fit.
        assert_eq!(derive_pattern(&plane, 0.25).unwrap().zero_count(), 0);
        assert_eq!(
            derive_pattern(&plane, 0.5).unwrap().zero_set(),
            [false, true, false, true]
        );
        assert_eq!(
            derive_pattern(&plane, 0.75).unwrap().zero_set(),
            [false, true, true, true]
        );
    }

    #[test]
    fn fft_pattern_must_be_symmetric() {
        let mut zero = vec![false; 16];
        zero[1] = true;
        assert!(SparsityPattern::new(4, 4, TransformKind::Fft, zero.clone()).is_err());
        zero[3] = true;
        assert!(SparsityPattern::new(4, 4, TransformKind::Fft, zero).is_ok());
    }

    #[test]
    fn sparsify_extremes() {
        let image = Image::from_fn(8, 8, |r, c| ((r * 31 + c * 17) % 23) as f64).unwrap();
        let (same, empty) = sparsify(&image, TransformKind::Dct, 0.0).unwrap();
        assert_eq!(empty.zero_count(), 0);
        assert!(same
            .pixels()
            .iter()
            .zip(image.pixels())
            .all(|(a, b)| (a - b).abs() < 1e-9));
        let (zero, full) = sparsify(&image, TransformKind::Dct, 1.0).unwrap();
        assert_eq!(full.zero_count(), 64);
        assert!(zero.pixels().iter().all(|p| p.abs() < 1e-12));
    }

    #[test]
    fn sparsified_fft_image_is_real_and_on_pattern() {
        let image = Image::from_fn(9, 6, |r, c| ((r * 13 + c * 7) % 11) as f64 * 20.0).unwrap();
        let (sparse, pattern) = sparsify(&image, TransformKind::Fft, 0.6).unwrap();
        assert!(pattern.zero_count() <= 32 && pattern.zero_count() >= 31);
        let mags = forward(&sparse, TransformKind::Fft).magnitudes();
        for (i, m) in mags.iter().enumerate() {
            if pattern.contains(i) {
                assert!(*m < 1e-9);
            }
        }
    }

    #[test]
    fn empty_2x2_encoding() {
        let p = SparsityPattern::empty(2, 2, TransformKind::Dct).unwrap();
        let mut expected = b"SPIN".to_vec();
        expected.extend_from_slice(&[1, 0]);
        expected.extend_from_slice(&2u32.to_be_bytes());
        expected.extend_from_slice(&2u32.to_be_bytes());
        expected.extend_from_slice(&0u64.to_be_bytes());
        expected.push(0);
        // 22-byte header plus one bitset byte.
        assert_eq!(encode_pattern(&p), expected);
        assert_eq!(expected.len(), 23);
    }

    #[test]
    fn bitset_is_msb_first() {
        let mut zero = vec![false; 10];
        zero[0] = true;
        zero[9] = true;
        let p = SparsityPattern::new(2, 5, TransformKind::Dct, zero).unwrap();
        let bytes = encode_pattern(&p);
        assert_eq!(&bytes[14..22], &2u64.to_be_bytes());
        assert_eq!(&bytes[22..], &[0x80, 0x40]);
        assert_eq!(decode_pattern(&bytes).unwrap(), p);
    }

    #[test]
    fn decoding_rejects_damage() {
        let mut zero = vec![false; 12];
        zero[4] = true;
        let p = SparsityPattern::new(3, 4, TransformKind::Dct, zero).unwrap();
        let good = encode_pattern(&p);

        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        assert!(matches!(decode_pattern(&bad_magic), Err(Error::SideInfo(_))));

        let mut bad_version = good.clone();
        bad_version[4] = 2;
        assert!(decode_pattern(&bad_version).is_err());

        let mut bad_kind = good.clone();
        bad_kind[5] = 7;
        assert!(decode_pattern(&bad_kind).is_err());

        assert!(decode_pattern(&good[..good.len() - 1]).is_err());
        assert!(decode_pattern(&good[..10]).is_err());

        let mut trailing = good.clone();
        trailing.push(0);
        assert!(decode_pattern(&trailing).is_err());

        let mut bad_count = good.clone();
        bad_count[21] = 5;
        assert!(decode_pattern(&bad_count).is_err());

        let mut bad_padding = good.clone();
        *bad_padding.last_mut().unwrap() |= 0x01;
        assert!(decode_pattern(&bad_padding).is_err());

        // Same bits relabelled FFT: index 4 = (1,0) mirrors to (2,0), unset.
        let mut asym = good.clone();
        asym[5] = 1;
        assert!(decode_pattern(&asym).is_err());
    }

    #[test]
    fn large_pattern_payload_size() {
        let p = SparsityPattern::empty(512, 512, TransformKind::Dct).unwrap();
        assert_eq!(encode_pattern(&p).len() - HEADER_LEN, 32_768);
    }
}
