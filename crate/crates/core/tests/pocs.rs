mod common;

use common::*;
use spinpaint::pocs::project_sparse_with;
use spinpaint::{
    apply_mask, derive_pattern, forward, inpaint_with_side_info, project_data, project_sparse, psnr,
    sparsify, Coeffs, Image, Mask, Pocs, RecoveryConfig, SparsityPattern, TransformKind, Transformer,
};

fn block_hole(rows: usize, cols: usize, top: usize, left: usize, size: usize) -> Mask {
    Mask::new(
        rows,
        cols,
        (0..rows * cols)
            .map(|i| {
                let (r, c) = (i / cols, i % cols);
                !((top..top + size).contains(&r) && (left..left + size).contains(&c))
            })
            .collect(),
    )
    .unwrap()
}

/// Ground truth in the sparsity set, its pattern, the hole mask and the
/// corrupted observation.
fn feasible_problem() -> (Image, SparsityPattern, Mask, Image) {
    let (truth, pattern) = sparsify(&synthetic_scene(64, 64, 11), TransformKind::Dct, 0.9).unwrap();
    let mask = block_hole(64, 64, 28, 20, 8);
    let corrupted = apply_mask(&truth, &mask).unwrap();
    (truth, pattern, mask, corrupted)
}

#[test]
fn sparse_projection_matches_naive_oracle() {
    let x = random_image(8, 8, 255.0, 8);
    let pattern = derive_pattern(&forward(&random_image(8, 8, 255.0, 9), TransformKind::Dct), 0.5).unwrap();
    let fast = project_sparse(&x, &pattern).unwrap();

    let mut coeffs = naive_dct(x.pixels(), 8, 8);
    for (i, c) in coeffs.iter_mut().enumerate() {
        if pattern.contains(i) {
            *c = 0.0;
        }
    }
    let slow = naive_idct(&coeffs, 8, 8);
    assert!(max_abs_diff(fast.pixels(), &slow) < 1e-9);

    let Coeffs::Dct(v) = forward(&fast, TransformKind::Dct).into_coeffs() else {
        unreachable!()
    };
    assert!((0..64)
        .filter(|&i| pattern.contains(i))
        .all(|i| v[i].abs() < 1e-9));
}

#[test]
fn projections_are_idempotent() {
    for kind in [TransformKind::Dct, TransformKind::Fft] {
        let x = random_image(20, 18, 255.0, 4);
        let (_, pattern) = sparsify(&random_image(20, 18, 255.0, 5), kind, 0.7).unwrap();
        let once = project_sparse(&x, &pattern).unwrap();
        let twice = project_sparse(&once, &pattern).unwrap();
        assert!(max_abs_diff(once.pixels(), twice.pixels()) < 1e-9, "{kind}");

        let known = random_image(20, 18, 255.0, 6);
        let mask = Mask::new(20, 18, (0..360).map(|i| i % 4 != 0).collect()).unwrap();
        let d1 = project_data(&x, &known, &mask).unwrap();
        assert_eq!(project_data(&d1, &known, &mask).unwrap(), d1);
    }
}

#[test]
fn empty_pattern_projection_is_identity() {
    let x = random_image(10, 12, 255.0, 1);
    for kind in [TransformKind::Dct, TransformKind::Fft] {
        let p = SparsityPattern::empty(10, 12, kind).unwrap();
        assert!(max_abs_diff(project_sparse(&x, &p).unwrap().pixels(), x.pixels()) < 1e-9);
    }
}

#[test]
fn member_of_sparsity_set_is_unchanged() {
    let (sparse, pattern) = sparsify(&synthetic_scene(32, 24, 2), TransformKind::Fft, 0.9).unwrap();
    let p = project_sparse(&sparse, &pattern).unwrap();
    assert!(max_abs_diff(p.pixels(), sparse.pixels()) < 1e-9);
}

#[test]
fn feasible_recovery_and_fejer_monotonicity() {
    let (truth, pattern, mask, corrupted) = feasible_problem();
    let mut pocs = Pocs::new(&corrupted, &mask, &pattern).unwrap();
    let mut previous = l2_distance(pocs.current(), &truth);
    for k in 0..1000 {
        pocs.step().unwrap();
        let d = l2_distance(pocs.current(), &truth);
        assert!(
            d <= previous + 1e-9,
            "distance rose at step {k}: {previous} -> {d}"
        );
        previous = d;
    }
    let quality = psnr(pocs.current(), &truth).unwrap();
    eprintln!("feasible recovery PSNR {quality:.2} dB");
    assert!(quality >= 50.0);
}

#[test]
fn output_matches_known_pixels_exactly() {
    let (_, pattern, mask, corrupted) = feasible_problem();
    let config = RecoveryConfig {
        iterations: 25,
        residual_log: true,
        ..RecoveryConfig::default()
    };
    let report = inpaint_with_side_info(&corrupted, &mask, &pattern, &config).unwrap();
    assert_eq!(report.iterations_run, 25);
    assert_eq!(report.per_iteration_delta.as_ref().map(Vec::len), Some(25));
    for (i, &known) in mask.bits().iter().enumerate() {
        if known {
            assert_eq!(
                report.output.pixels()[i].to_bits(),
                corrupted.pixels()[i].to_bits()
            );
        }
    }
}

#[test]
fn deltas_settle_on_feasible_problem() {
    let (_, pattern, mask, corrupted) = feasible_problem();
    let config = RecoveryConfig {
        iterations: 1000,
        residual_log: true,
        ..RecoveryConfig::default()
    };
    let report = inpaint_with_side_info(&corrupted, &mask, &pattern, &config).unwrap();
    let log = report.per_iteration_delta.unwrap();
    let tail = &log[900..];
    for w in tail.windows(2) {
        assert!(w[1] <= w[0] + 1e-9, "{} -> {}", w[0], w[1]);
    }
}

#[test]
fn uncorrupted_sparse_image_is_a_fixed_point_for_any_run_length() {
    let (sparse, pattern) = sparsify(&synthetic_scene(32, 32, 5), TransformKind::Dct, 0.9).unwrap();
    let mask = Mask::all_known(32, 32).unwrap();
    for iterations in [1, 10, 100] {
        let config = RecoveryConfig {
            iterations,
            ..RecoveryConfig::default()
        };
        let out = inpaint_with_side_info(&sparse, &mask, &pattern, &config)
            .unwrap()
            .output;
        assert!(max_abs_diff(out.pixels(), sparse.pixels()) < 1e-9);
    }
}

#[test]
fn planned_and_one_shot_projections_agree() {
    let x = random_image(16, 16, 255.0, 12);
    let (_, pattern) = sparsify(&x, TransformKind::Fft, 0.8).unwrap();
    let t = Transformer::new(16, 16, TransformKind::Fft);
    let a = project_sparse_with(&t, &x, &pattern).unwrap();
    let b = project_sparse(&x, &pattern).unwrap();
    assert_eq!(a, b);
}
