//! Argument grammar and the validated plan it produces.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinpaint::TransformKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Dct,
    Fft,
}

impl From<Kind> for TransformKind {
    fn from(kind: Kind) -> Self {
        match kind {
            Kind::Dct => TransformKind::Dct,
            Kind::Fft => TransformKind::Fft,
        }
    }
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "spinpaint", version, about = "Transform-sparsity image inpainting")]
struct Cli {
    #[command(subcommand)]
    command: CommandPlan,
}

/// One validated command with its inputs, outputs and parameters.
#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum CommandPlan {
    /// Zero the smallest transform coefficients; write the sparse image and
    /// its pattern.
    Sparsify {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Side-information file; defaults to the output path with a .spin
        /// extension.
        #[arg(long)]
        side: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dct")]
        kind: Kind,
        #[arg(long, default_value_t = 0.95, value_parser = parse_fraction)]
        fraction: f64,
    },
    /// Punch holes into an image with a generated or loaded mask.
    Corrupt {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Where to write the mask; defaults to `<output>.mask.pgm`.
        #[arg(long)]
        mask_out: Option<PathBuf>,
        /// Use this mask PGM instead of generating one.
        #[arg(long, conflicts_with_all = ["blocks", "block_size", "strokes", "stroke_width", "seed"])]
        mask: Option<PathBuf>,
        #[command(flatten)]
        losses: LossArgs,
    },
    /// Recover with side information.
    Inpaint {
        input: PathBuf,
        mask: PathBuf,
        side: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u32).range(1..))]
        iterations: u32,
        /// Stop when no pixel changes by more than 1e-6 in a round.
        #[arg(long)]
        early_stop: bool,
    },
    /// Recover without side information.
    InpaintBlind {
        input: PathBuf,
        mask: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "dct")]
        kind: Kind,
        #[arg(long, default_value_t = 0.95, value_parser = parse_fraction)]
        fraction: f64,
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u32).range(1..))]
        iterations: u32,
    },
    /// Low-pass quotient reconstruction only.
    Tv {
        input: PathBuf,
        mask: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the PSNR between two images.
    Psnr { a: PathBuf, b: PathBuf },
    /// Print miss-detection and false-alarm percentages of two patterns.
    PatternDiff { estimated: PathBuf, reference: PathBuf },
    /// Table-style grid: sparsify, corrupt with blocks, inpaint, score.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct LossArgs {
    #[arg(long, default_value_t = 10)]
    pub blocks: usize,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    pub block_size: u32,
    #[arg(long, default_value_t = 0)]
    pub strokes: usize,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub stroke_width: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct BenchArgs {
    /// Source images, one grid row group each.
    #[arg(long, required = true, num_args = 1..)]
    pub grid: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "0.95", value_parser = parse_fraction)]
    pub fractions: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_enum, default_value = "dct")]
    pub kinds: Vec<Kind>,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u32).range(1..))]
    pub iterations: u32,
    #[arg(long, default_value_t = 10)]
    pub blocks: usize,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    pub block_size: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// CSV destination; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub image: PathBuf,
    pub kind: TransformKind,
    pub fraction: f64,
}

impl BenchArgs {
    /// Cross product image × kind × fraction, in that nesting order.
    pub fn cells(&self) -> Vec<BenchCell> {
        let mut cells = Vec::new();
        for image in &self.grid {
            for &kind in &self.kinds {
                for &fraction in &self.fractions {
                    cells.push(BenchCell {
                        image: image.clone(),
                        kind: kind.into(),
                        fraction,
                    });
                }
            }
        }
        cells
    }
}

impl CommandPlan {
    pub fn name(&self) -> &'static str {
        match self {
            CommandPlan::Sparsify { .. } => "sparsify",
            CommandPlan::Corrupt { .. } => "corrupt",
            CommandPlan::Inpaint { .. } => "inpaint",
            CommandPlan::InpaintBlind { .. } => "inpaint-blind",
            CommandPlan::Tv { .. } => "tv",
            CommandPlan::Psnr { .. } => "psnr",
            CommandPlan::PatternDiff { .. } => "pattern-diff",
            CommandPlan::Bench(_) => "bench",
        }
    }

    /// Files the command reads; each must exist when it runs.
    pub fn inputs(&self) -> Vec<&PathBuf> {
        match self {
            CommandPlan::Sparsify { input, .. } => vec![input],
            CommandPlan::Corrupt { input, mask, .. } => std::iter::once(input).chain(mask).collect(),
            CommandPlan::Inpaint {
                input, mask, side, ..
            } => vec![input, mask, side],
            CommandPlan::InpaintBlind { input, mask, .. } | CommandPlan::Tv { input, mask, .. } => {
                vec![input, mask]
            }
            CommandPlan::Psnr { a, b } => vec![a, b],
            CommandPlan::PatternDiff { estimated, reference } => vec![estimated, reference],
            CommandPlan::Bench(args) => args.grid.iter().collect(),
        }
    }
}

/// Parses a full argument vector, program name first.
pub fn parse_args<I, T>(argv: I) -> Result<CommandPlan, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv).map(|cli| cli.command)
}
