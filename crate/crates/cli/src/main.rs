mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hurwitz_core::HurwitzKind;

use crate::render::Format;

#[derive(Parser, Debug)]
#[command(name = "hurwitz", version, about = "Exact orbifold Hurwitz numbers and their structural checks")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Directory holding the character-table cache (overrides HURWITZ_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Character,
    Fock,
    Oracle,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// One Hurwitz number by one or all routes.
    Compute {
        #[arg(long, value_parser = parse_kind)]
        kind: HurwitzKind,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        g: i64,
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Character)]
        method: MethodArg,
        /// Compute the disconnected number instead of the connected one.
        #[arg(long)]
        disconnected: bool,
    },
    /// The generating series in `u` (character route).
    Series {
        #[arg(long, value_parser = parse_kind)]
        kind: HurwitzKind,
        #[arg(long)]
        r: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<usize>,
        #[arg(long, default_value_t = 8)]
        order: i64,
        #[arg(long)]
        disconnected: bool,
    },
    /// Interpolates normalised numbers per residue class and checks the degree bound.
    VerifyQuasipoly {
        #[arg(long, value_parser = parse_kind)]
        kind: HurwitzKind,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        g: i64,
        #[arg(long)]
        n: usize,
        /// One residue class; all admissible classes when omitted.
        #[arg(long, value_delimiter = ',')]
        residues: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1)]
        grid_base: i64,
        #[arg(long, default_value_t = 3)]
        holdouts: usize,
    },
    /// Expansion of the basis functions on the spectral curve against their closed forms.
    Xi {
        #[arg(long, value_parser = parse_kind)]
        kind: HurwitzKind,
        #[arg(long)]
        r: usize,
        /// A single basis index; all `0..r` when omitted.
        #[arg(long)]
        i: Option<usize>,
        #[arg(long, default_value_t = 12)]
        order: i64,
        /// Number of `d/dx` derivatives to apply.
        #[arg(long, default_value_t = 0)]
        p: u32,
    },
    /// Genus-zero one- and two-point checks on the spectral curve.
    UnstableCheck {
        #[arg(long, value_parser = parse_kind)]
        kind: HurwitzKind,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 12)]
        order: i64,
    },
    /// Compares the character, Fock and group-algebra routes on all small profiles.
    CrossValidate {
        /// Restrict to one kind; all three when omitted.
        #[arg(long, value_parser = parse_kind)]
        kind: Option<HurwitzKind>,
        /// Restrict to one `r`; `1..=3` when omitted.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        /// Largest number of simple ramifications compared.
        #[arg(long, default_value_t = 5)]
        max_b: i64,
    },
    /// Manage the character-table cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum CacheAction {
    /// Compute full character tables up to the given degree and store them.
    Build {
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
    },
    /// Report the cache location and record count.
    Info,
    /// Delete the cache file.
    Clear,
}

fn parse_kind(s: &str) -> Result<HurwitzKind, String> {
    s.parse().map_err(|e: hurwitz_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            print!("{}", render::render(&report, cli.format));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
