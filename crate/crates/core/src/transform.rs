//! Separable 2D transforms: orthonormal DCT-II/III and the unnormalized DFT.
//!
//! Conventions:
//!
//! - DCT: `X(u,v) = a(u) a(v) Σ x(r,c) cos(π(2r+1)u / 2R) cos(π(2c+1)v / 2C)`
//!   with `a(0) = √(1/N)` and `a(k) = √(2/N)` otherwise. The inverse is the
//!   transpose, so both directions preserve the Euclidean norm.
//! - FFT: `X(u,v) = Σ x(r,c) e^{-2πi(ur/R + vc/C)}` with no scaling; the
//!   inverse carries the `1/(R·C)` factor.
//!
//! Any size is supported. Plans are built once per [`Transformer`] and can be
//! reused across calls, which matters inside the recovery loop.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rustdct::{DctPlanner, TransformType2And3};
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::image::Image;

/// Largest imaginary part tolerated when an inverse FFT should be real.
pub const IMAGINARY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    Dct,
    Fft,
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformKind::Dct => "dct",
            TransformKind::Fft => "fft",
        })
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dct" => Ok(TransformKind::Dct),
            "fft" => Ok(TransformKind::Fft),
            other => Err(Error::InvalidParameter(format!(
                "unknown transform kind {other:?}, expected dct or fft"
            ))),
        }
    }
}

/// Row-major transform coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum Coeffs {
    Dct(Vec<f64>),
    Fft(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffPlane {
    rows: usize,
    cols: usize,
    coeffs: Coeffs,
}

impl CoeffPlane {
    pub fn new(rows: usize, cols: usize, coeffs: Coeffs) -> Result<Self> {
        let len = match &coeffs {
            Coeffs::Dct(v) => v.len(),
            Coeffs::Fft(v) => v.len(),
        };
        if rows == 0 || cols == 0 || len != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "coefficient plane {rows}x{cols} holds {len} values"
            )));
        }
        Ok(Self { rows, cols, coeffs })
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
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> TransformKind {
        match self.coeffs {
            Coeffs::Dct(_) => TransformKind::Dct,
            Coeffs::Fft(_) => TransformKind::Fft,
        }
    }

    pub fn coeffs(&self) -> &Coeffs {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Coeffs {
        self.coeffs
    }

    /// Absolute value of every coefficient, row-major.
    pub fn magnitudes(&self) -> Vec<f64> {
        match &self.coeffs {
            Coeffs::Dct(v) => v.iter().map(|x| x.abs()).collect(),
            Coeffs::Fft(v) => v.iter().map(|z| z.norm()).collect(),
        }
    }

    pub fn magnitude(&self, index: usize) -> f64 {
        match &self.coeffs {
            Coeffs::Dct(v) => v[index].abs(),
            Coeffs::Fft(v) => v[index].norm(),
        }
    }

    pub(crate) fn zero_where(&mut self, zero: &[bool]) {
        match &mut self.coeffs {
            Coeffs::Dct(v) => v
                .iter_mut()
                .zip(zero)
                .filter(|(_, &z)| z)
                .for_each(|(x, _)| *x = 0.0),
            Coeffs::Fft(v) => v
                .iter_mut()
                .zip(zero)
                .filter(|(_, &z)| z)
                .for_each(|(x, _)| *x = Complex64::new(0.0, 0.0)),
        }
    }
}

/// Index of the conjugate partner `((−u) mod R, (−v) mod C)` of a row-major
/// index.
pub fn conjugate_index(index: usize, rows: usize, cols: usize) -> usize {
    let (u, v) = (index / cols, index % cols);
    ((rows - u) % rows) * cols + (cols - v) % cols
}

enum Plans {
    Dct {
        row: Arc<dyn TransformType2And3<f64>>,
        col: Arc<dyn TransformType2And3<f64>>,
    },
    Fft {
        row_fwd: Arc<dyn Fft<f64>>,
        col_fwd: Arc<dyn Fft<f64>>,
        row_inv: Arc<dyn Fft<f64>>,
        col_inv: Arc<dyn Fft<f64>>,
    },
}

/// Planned 2D transform for one image size and kind.
pub struct Transformer {
    rows: usize,
    cols: usize,
    plans: Plans,
}

impl fmt::Debug for Transformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transformer")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("kind", &self.kind())
            .finish()
    }
}

impl Transformer {
    pub fn new(rows: usize, cols: usize, kind: TransformKind) -> Self {
        let plans = match kind {
            TransformKind::Dct => {
                let mut planner = DctPlanner::new();
                Plans::Dct {
                    row: planner.plan_dct2(cols),
                    col: planner.plan_dct2(rows),
                }
            }
            TransformKind::Fft => {
                let mut planner = FftPlanner::new();
                Plans::Fft {
                    row_fwd: planner.plan_fft_forward(cols),
                    col_fwd: planner.plan_fft_forward(rows),
                    row_inv: planner.plan_fft_inverse(cols),
                    col_inv: planner.plan_fft_inverse(rows),
                }
            }
        };
        Self { rows, cols, plans }
    }

    pub fn kind(&self) -> TransformKind {
        match self.plans {
            Plans::Dct { .. } => TransformKind::Dct,
            Plans::Fft { .. } => TransformKind::Fft,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn forward(&self, image: &Image) -> Result<CoeffPlane> {
        image.check_dims(self.rows, self.cols)?;
        let (rows, cols) = (self.rows, self.cols);
        let coeffs = match &self.plans {
            Plans::Dct { row, col } => {
                let mut buf = image.pixels().to_vec();
                dct2_rows(row.as_ref(), &mut buf, cols);
                let mut t = transpose(&buf, rows, cols);
                dct2_rows(col.as_ref(), &mut t, rows);
                Coeffs::Dct(transpose(&t, cols, rows))
            }
            Plans::Fft { row_fwd, col_fwd, .. } => {
                let mut buf: Vec<Complex64> =
                    image.pixels().iter().map(|&p| Complex64::new(p, 0.0)).collect();
                fft_rows(row_fwd.as_ref(), &mut buf);
                let mut t = transpose(&buf, rows, cols);
                fft_rows(col_fwd.as_ref(), &mut t);
                Coeffs::Fft(transpose(&t, cols, rows))
            }
        };
        Ok(CoeffPlane { rows, cols, coeffs })
    }

    /// Inverse transform. For FFT planes the result must be real: an
    /// imaginary part above [`IMAGINARY_TOLERANCE`] anywhere is an error.
    pub fn inverse(&self, plane: &CoeffPlane) -> Result<Image> {
        if plane.dims() != (self.rows, self.cols) {
            return Err(Error::dims((self.rows, self.cols), plane.dims()));
        }
        if plane.kind() != self.kind() {
            return Err(Error::KindMismatch {
                expected: self.kind(),
                actual: plane.kind(),
            });
        }
        let (rows, cols) = (self.rows, self.cols);
        let pixels = match (&self.plans, &plane.coeffs) {
            (Plans::Dct { row, col }, Coeffs::Dct(values)) => {
                let mut t = transpose(values, rows, cols);
                dct3_rows(col.as_ref(), &mut t, rows);
                let mut buf = transpose(&t, cols, rows);
                dct3_rows(row.as_ref(), &mut buf, cols);
                buf
            }
            (Plans::Fft { row_inv, col_inv, .. }, Coeffs::Fft(values)) => {
                let mut t = transpose(values, rows, cols);
                fft_rows(col_inv.as_ref(), &mut t);
                let mut buf = transpose(&t, cols, rows);
                fft_rows(row_inv.as_ref(), &mut buf);
                let scale = 1.0 / (rows * cols) as f64;
                let residue = buf.iter().fold(0.0f64, |m, z| m.max((z.im * scale).abs()));
                // A NaN residue must fail too, so this is not `>=`.
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                if !(residue < IMAGINARY_TOLERANCE) {
                    return Err(Error::SymmetryViolation { residue });
                }
                buf.iter().map(|z| z.re * scale).collect()
            }
            _ => unreachable!("kind checked above"),
        };
        Image::new(rows, cols, pixels)
    }
}

/// One-shot forward transform.
pub fn forward(image: &Image, kind: TransformKind) -> CoeffPlane {
    Transformer::new(image.rows(), image.cols(), kind)
        .forward(image)
        .expect("planner built for these dimensions")
}

/// One-shot inverse transform.
pub fn inverse(plane: &CoeffPlane) -> Result<Image> {
    Transformer::new(plane.rows, plane.cols, plane.kind()).inverse(plane)
}

fn dct2_rows(plan: &dyn TransformType2And3<f64>, buf: &mut [f64], len: usize) {
    let mut scratch = vec![0.0; plan.get_scratch_len()];
    let dc = (1.0 / len as f64).sqrt();
    let ac = (2.0 / len as f64).sqrt();
    for row in buf.chunks_exact_mut(len) {
        plan.process_dct2_with_scratch(row, &mut scratch);
        row[0] *= dc;
        row[1..].iter_mut().for_each(|x| *x *= ac);
    }
}

fn dct3_rows(plan: &dyn TransformType2And3<f64>, buf: &mut [f64], len: usize) {
    let mut scratch = vec![0.0; plan.get_scratch_len()];
    // rustdct's DCT-III halves the first input term.
    let dc = 2.0 * (1.0 / len as f64).sqrt();
    let ac = (2.0 / len as f64).sqrt();
    for row in buf.chunks_exact_mut(len) {
        row[0] *= dc;
        row[1..].iter_mut().for_each(|x| *x *= ac);
        plan.process_dct3_with_scratch(row, &mut scratch);
    }
}

fn fft_rows(plan: &dyn Fft<f64>, buf: &mut [Complex64]) {
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    plan.process_with_scratch(buf, &mut scratch);
}

fn transpose<T: Copy>(src: &[T], rows: usize, cols: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(src.len());
    for c in 0..cols {
        out.extend((0..rows).map(|r| src[r * cols + c]));
    }
    out
}
