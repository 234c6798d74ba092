//! Execution of a parsed [`CommandPlan`].

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use spinpaint::{
    apply_mask, block_mask, combine_masks, inpaint_blind, inpaint_with_side_info, pattern_error, psnr,
    read_mask, read_pattern, read_pgm, sparsify, stroke_mask, tv_reconstruct, write_mask, write_pattern,
    write_pgm, BlindConfig, BlockSpec, Error, Image, Mask, RecoveryConfig, Result,
};

use crate::plan::{BenchArgs, BenchCell, CommandPlan, LossArgs};

/// Header of the CSV written by `bench`.
pub const BENCH_HEADER: &str = "image,kind,fraction,iterations,psnr_vs_original,psnr_vs_sparse,seed";

/// Files written so far by one command. Unless [`Outputs::commit`] is
/// called, dropping the tracker deletes them.
struct Outputs {
    written: Vec<PathBuf>,
    committed: bool,
}

impl Outputs {
    fn new() -> Self {
        Self {
            written: Vec::new(),
            committed: false,
        }
    }

    fn write(&mut self, path: &Path, write: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
        self.written.push(path.to_path_buf());
        write(path)
    }

    fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.committed {
            for path in &self.written {
                let _ = std::fs::remove_file(path);
            }
        }
    }
}

/// Formats a metric with two fraction digits, or `inf`.
pub fn format_metric(value: f64) -> String {
    if value.is_infinite() {
        "inf".to_string()
    } else {
        format!("{value:.2}")
    }
}

fn check_inputs(plan: &CommandPlan) -> Result<()> {
    for path in plan.inputs() {
        if !path.is_file() {
            return Err(Error::Io(io::Error::new(
                io::ErrorKind::NotFound,
                format!("input not found: {}", path.display()),
            )));
        }
    }
    Ok(())
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(suffix);
    path.with_file_name(name)
}

/// Reads a mask and checks it against the image it belongs to.
fn read_mask_for(path: &Path, image: &Image) -> Result<Mask> {
    let mask = read_mask(path)?;
    if mask.dims() != image.dims() {
        return Err(Error::DimensionMismatch {
            expected_rows: image.rows(),
            expected_cols: image.cols(),
            rows: mask.rows(),
            cols: mask.cols(),
        });
    }
    Ok(mask)
}

fn generate_mask(rows: usize, cols: usize, losses: &LossArgs) -> Result<Mask> {
    let mut mask = Mask::all_known(rows, cols)?;
    if losses.blocks > 0 {
        let spec = BlockSpec {
            block_size: losses.block_size as usize,
            count: losses.blocks,
            seed: losses.seed,
        };
        mask = block_mask(rows, cols, spec)?;
    }
    if losses.strokes > 0 {
        let strokes = stroke_mask(
            rows,
            cols,
            losses.strokes,
            losses.stroke_width as usize,
            losses.seed,
        )?;
        mask = combine_masks(&mask, &strokes)?;
    }
    Ok(mask)
}

/// Runs a plan, writing any report lines to `stdout`.
pub fn run_to(plan: &CommandPlan, stdout: &mut dyn Write) -> Result<()> {
    check_inputs(plan)?;
    let mut outputs = Outputs::new();
    match plan {
        CommandPlan::Sparsify {
            input,
            output,
            side,
            kind,
            fraction,
        } => {
            let image = read_pgm(input)?;
            let (sparse, pattern) = sparsify(&image, (*kind).into(), *fraction)?;
            let side = side.clone().unwrap_or_else(|| output.with_extension("spin"));
            outputs.write(output, |p| write_pgm(&sparse, p))?;
            outputs.write(&side, |p| write_pattern(&pattern, p))?;
        }
        CommandPlan::Corrupt {
            input,
            output,
            mask_out,
            mask,
            losses,
        } => {
            let image = read_pgm(input)?;
            let mask = match mask {
                Some(path) => read_mask_for(path, &image)?,
                None => generate_mask(image.rows(), image.cols(), losses)?,
            };
            let corrupted = apply_mask(&image, &mask)?;
            let mask_out = mask_out
                .clone()
                .unwrap_or_else(|| with_suffix(output, ".mask.pgm"));
            outputs.write(output, |p| write_pgm(&corrupted, p))?;
            outputs.write(&mask_out, |p| write_mask(&mask, p))?;
        }
        CommandPlan::Inpaint {
            input,
            mask,
            side,
            output,
            iterations,
            early_stop,
        } => {
            let image = read_pgm(input)?;
            let mask = read_mask_for(mask, &image)?;
            let pattern = read_pattern(side)?;
            let corrupted = apply_mask(&image, &mask)?;
            let config = RecoveryConfig {
                kind: pattern.kind(),
                iterations: *iterations as usize,
                early_stop: early_stop.then_some(spinpaint::pocs::DEFAULT_EARLY_STOP),
                ..RecoveryConfig::default()
            };
            let report = inpaint_with_side_info(&corrupted, &mask, &pattern, &config)?;
            outputs.write(output, |p| write_pgm(&report.output, p))?;
        }
        CommandPlan::InpaintBlind {
            input,
            mask,
            output,
            kind,
            fraction,
            iterations,
        } => {
            let image = read_pgm(input)?;
            let mask = read_mask_for(mask, &image)?;
            let corrupted = apply_mask(&image, &mask)?;
            let config = BlindConfig {
                kind: (*kind).into(),
                fraction: *fraction,
                iterations: *iterations as usize,
            };
            let report = inpaint_blind(&corrupted, &mask, &config)?;
            outputs.write(output, |p| write_pgm(&report.output, p))?;
        }
        CommandPlan::Tv { input, mask, output } => {
            let image = read_pgm(input)?;
            let mask = read_mask_for(mask, &image)?;
            let reconstructed = tv_reconstruct(&apply_mask(&image, &mask)?, &mask)?;
            outputs.write(output, |p| write_pgm(&reconstructed, p))?;
        }
        CommandPlan::Psnr { a, b } => {
            let value = psnr(&read_pgm(a)?, &read_pgm(b)?)?;
            writeln!(stdout, "{}", format_metric(value))?;
        }
        CommandPlan::PatternDiff { estimated, reference } => {
            let e = pattern_error(&read_pattern(estimated)?, &read_pattern(reference)?)?;
            writeln!(
                stdout,
                "miss_detection_pct={} false_alarm_pct={}",
                format_metric(e.miss_detection_pct),
                format_metric(e.false_alarm_pct)
            )?;
        }
        CommandPlan::Bench(args) => {
            let csv = bench_csv(args)?;
            match &args.output {
                Some(path) => outputs.write(path, |p| Ok(std::fs::write(p, &csv)?))?,
                None => stdout.write_all(csv.as_bytes())?,
            }
        }
    }
    outputs.commit();
    Ok(())
}

/// Runs a plan against the process's standard output.
pub fn run(plan: &CommandPlan) -> Result<()> {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    run_to(plan, &mut lock)?;
    lock.flush()?;
    Ok(())
}

/// One scored grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub cell: BenchCell,
    pub psnr_vs_original: f64,
    pub psnr_vs_sparse: f64,
}

fn bench_cell(cell: &BenchCell, image: &Image, args: &BenchArgs) -> Result<BenchRow> {
    let (sparse, pattern) = sparsify(image, cell.kind, cell.fraction)?;
    let spec = BlockSpec {
        block_size: args.block_size as usize,
        count: args.blocks,
        seed: args.seed,
    };
    let mask = block_mask(image.rows(), image.cols(), spec)?;
    let corrupted = apply_mask(&sparse, &mask)?;
    let config = RecoveryConfig {
        kind: cell.kind,
        iterations: args.iterations as usize,
        ..RecoveryConfig::default()
    };
    let recovered = inpaint_with_side_info(&corrupted, &mask, &pattern, &config)?.output;
    Ok(BenchRow {
        cell: cell.clone(),
        psnr_vs_original: psnr(&recovered, image)?,
        psnr_vs_sparse: psnr(&recovered, &sparse)?,
    })
}

/// Scores every grid cell in parallel; rows come back in grid order.
pub fn bench(args: &BenchArgs) -> Result<Vec<BenchRow>> {
    let images = args
        .grid
        .iter()
        .map(|path| Ok((path.clone(), read_pgm(path)?)))
        .collect::<Result<Vec<_>>>()?;
    let cells = args.cells();
    cells
        .par_iter()
        .map(|cell| {
            let image = &images
                .iter()
                .find(|(path, _)| *path == cell.image)
                .expect("every cell image is loaded")
                .1;
            bench_cell(cell, image, args)
        })
        .collect()
}

/// The bench table as CSV text, header included.
pub fn bench_csv(args: &BenchArgs) -> Result<String> {
    let mut csv = format!("{BENCH_HEADER}\n");
    for row in bench(args)? {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.cell.image.display(),
            row.cell.kind,
            row.cell.fraction,
            args.iterations,
            format_metric(row.psnr_vs_original),
            format_metric(row.psnr_vs_sparse),
            args.seed
        ));
    }
    Ok(csv)
}
