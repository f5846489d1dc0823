//! `hydrofield` command-line front end.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hydrofield::grid::{AzimuthalForm, Plane};

/// Exact hydrogen energy decompositions, spinning-field numbers and density sections.
#[derive(Debug, Parser)]
#[command(name = "hydrofield", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format; `pgm` applies to `section` only.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output here instead of stdout (`section`: the raster).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file overriding the SI constants (camelCase fields, `E1` in joules).
    #[arg(long, global = true)]
    pub constants: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Pgm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Unit {
    /// Multiples of E1.
    E1,
    /// Multiples of the level energy E1/n².
    En,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Standing,
    Complex,
}

impl From<FormArg> for AzimuthalForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Standing => AzimuthalForm::Standing,
            FormArg::Complex => AzimuthalForm::Complex,
        }
    }
}

#[derive(Debug, Args)]
pub struct StateArgs {
    pub n: i64,
    pub l: i64,
    #[arg(allow_negative_numbers = true)]
    pub m: i64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy breakdown of one state.
    State {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = Unit::E1)]
        unit: Unit,
    },
    /// The 14-row energy table.
    Table2 {
        #[arg(long, value_enum, default_value_t = Unit::E1)]
        unit: Unit,
    },
    /// Spinning-field analysis of the 2p states.
    Spin2p,
    /// Density section through a plane, with lobe counts.
    Section {
        #[command(flatten)]
        state: StateArgs,
        /// `x=…`, `y=…` or `z=…`, in Bohr radii.
        #[arg(long, default_value = "z=0")]
        plane: Plane,
        /// Half-width in Bohr radii [default: 2n(n+1)].
        #[arg(long)]
        extent: Option<f64>,
        #[arg(long, default_value_t = hydrofield::grid::DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = FormArg::Standing)]
        form: FormArg,
        /// Also write the 2p velocity arrows as JSON.
        #[arg(long)]
        arrows: Option<PathBuf>,
        /// Pixel stride between arrows.
        #[arg(long, default_value_t = 16)]
        arrow_stride: usize,
    },
    /// Exact ⟨r^k⟩ in units of a^k.
    Expect {
        #[command(flatten)]
        state: StateArgs,
        #[arg(allow_negative_numbers = true)]
        k: i32,
    },
    /// Run every invariant family.
    Verify {
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long, hide = true)]
        inject_fault: Option<hydrofield::suite::Fault>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
