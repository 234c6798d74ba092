//! Test-only oracles and fixtures, independent of the library's fast paths.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;
use spinpaint::rng::XorShift64Star;
use spinpaint::Image;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn random_image(rows: usize, cols: usize, scale: f64, seed: u64) -> Image {
    let mut rng = XorShift64Star::new(seed);
    Image::new(rows, cols, (0..rows * cols).map(|_| rng.unit() * scale).collect()).unwrap()
}

pub fn random_bytes_image(rows: usize, cols: usize, seed: u64) -> Image {
    let mut rng = XorShift64Star::new(seed);
    Image::new(
        rows,
        cols,
        (0..rows * cols).map(|_| rng.below(256) as f64).collect(),
    )
    .unwrap()
}

fn dct_weight(k: usize, n: usize) -> f64 {
    if k == 0 {
        (1.0 / n as f64).sqrt()
    } else {
        (2.0 / n as f64).sqrt()
    }
}

fn dct_basis(k: usize, i: usize, n: usize) -> f64 {
    dct_weight(k, n) * (PI * (2 * i + 1) as f64 * k as f64 / (2 * n) as f64).cos()
}

/// Direct O(N⁴) orthonormal 2D DCT-II.
pub fn naive_dct(x: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; rows * cols];
    for u in 0..rows {
        for v in 0..cols {
            let mut acc = 0.0;
            for r in 0..rows {
                for c in 0..cols {
                    acc += x[r * cols + c] * dct_basis(u, r, rows) * dct_basis(v, c, cols);
                }
            }
            out[u * cols + v] = acc;
        }
    }
    out
}

/// Direct O(N⁴) orthonormal 2D DCT-III.
pub fn naive_idct(coeffs: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let mut acc = 0.0;
            for u in 0..rows {
                for v in 0..cols {
                    acc += coeffs[u * cols + v] * dct_basis(u, r, rows) * dct_basis(v, c, cols);
                }
            }
            out[r * cols + c] = acc;
        }
    }
    out
}

fn twiddle(sign: f64, u: usize, r: usize, rows: usize, v: usize, c: usize, cols: usize) -> Complex64 {
    let phase = 2.0 * PI * ((u * r) as f64 / rows as f64 + (v * c) as f64 / cols as f64);
    Complex64::from_polar(1.0, sign * phase)
}

/// Direct unnormalized 2D DFT.
pub fn naive_dft(x: &[f64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    for u in 0..rows {
        for v in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..rows {
                for c in 0..cols {
                    acc += x[r * cols + c] * twiddle(-1.0, u, r, rows, v, c, cols);
                }
            }
            out[u * cols + v] = acc;
        }
    }
    out
}

/// Direct inverse DFT with the 1/(R·C) factor.
pub fn naive_idft(coeffs: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    let scale = 1.0 / (rows * cols) as f64;
    for r in 0..rows {
        for c in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for u in 0..rows {
                for v in 0..cols {
                    acc += coeffs[u * cols + v] * twiddle(1.0, u, r, rows, v, c, cols);
                }
            }
            out[r * cols + c] = acc * scale;
        }
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn max_abs_diff_complex(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

pub fn l2_distance(a: &Image, b: &Image) -> f64 {
    a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Smooth-plus-texture test image that is not trivially sparse.
pub fn synthetic_scene(rows: usize, cols: usize, seed: u64) -> Image {
    let mut rng = XorShift64Star::new(seed);
    Image::from_fn(rows, cols, |r, c| {
        let (y, x) = (r as f64 / rows as f64, c as f64 / cols as f64);
        let base = 110.0 + 60.0 * (3.0 * PI * x).sin() * (2.0 * PI * y).cos();
        let edge = if x + 0.5 * y > 0.7 { 40.0 } else { 0.0 };
        base + edge + 10.0 * (rng.unit() - 0.5)
    })
    .unwrap()
}
