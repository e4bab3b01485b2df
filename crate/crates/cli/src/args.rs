use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hstarkit::oracle::DEFAULT_SCAN_CAP;
use hstarkit::DEFAULT_VOLUME_CAP;

#[derive(Debug, Parser)]
#[command(name = "hstarkit", version, about = "Exact h*-vectors of lattice simplices")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Enforce the extraction theorem's hypotheses (k >= 3 and the zero
    /// window) instead of only reporting them.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// h*-vector via the box-point group.
    Hstar {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VOLUME_CAP)]
        max_volume: u64,
    },
    /// List the box-point group with heights.
    BoxGroup {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VOLUME_CAP)]
        max_volume: u64,
    },
    /// Number of lattice points in the n-th dilate.
    Ehrhart {
        file: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_VOLUME_CAP)]
        max_volume: u64,
        #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
        scan_cap: u64,
    },
    /// Compare the box-group h* with one interpolated from point counts.
    OracleVerify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VOLUME_CAP)]
        max_volume: u64,
        #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
        scan_cap: u64,
    },
    /// Extract the face spanned by the supports of low-height box points.
    ExtractFace {
        file: PathBuf,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = DEFAULT_VOLUME_CAP)]
        max_volume: u64,
    },
    /// Generate a simplex from one of the built-in families.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Evaluate known necessary conditions on a candidate h*-vector.
    CheckConditions {
        /// Comma-separated coefficients starting with 1, e.g. "1,7,1".
        #[arg(long)]
        hstar: String,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Run every invariant over a directory of simplex documents.
    VerifySuite {
        #[arg(long)]
        corpus: PathBuf,
        /// Largest volume for the exhaustive group and oracle checks.
        #[arg(long, default_value_t = 200)]
        max_volume: u64,
    },
    /// Enumerate cyclic box groups and record those matching a zero window.
    Search {
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = WindowKind::Strong)]
        window: WindowKind,
        #[arg(long)]
        max_order: u64,
        #[arg(long, default_value_t = 5)]
        max_dim: usize,
        /// Output file for the JSON lines; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stop after examining this many generators.
        #[arg(long, default_value_t = 100_000)]
        max_candidates: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowKind {
    /// h*_{k+1} = ... = h*_{2k-1} = 0
    Weak,
    /// h*_{k+1} = ... = h*_{2k} = 0
    Strong,
}

impl WindowKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WindowKind::Weak => "weak",
            WindowKind::Strong => "strong",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Simplex with h* = 1 + c t^m.
    #[command(name = "delta_cm")]
    DeltaCm {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        m: u64,
    },
    /// Join of two simplex documents.
    Join {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Join of delta_cm(a, k) and delta_cm(b, l).
    Lemma41 {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
    },
    /// Simplex whose truncation at k is not an h*-vector.
    Prop43 {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        j: u64,
        #[arg(long, default_value_t = 5)]
        p: u64,
    },
    /// Volume-3 simplex with h* = 1 + t^k + t^2k.
    Remark44 {
        #[arg(long)]
        k: u64,
    },
    /// Standard unimodular simplex.
    Unit {
        #[arg(long)]
        dim: usize,
    },
    /// Simplex whose box group is generated by a/q.
    Cyclic {
        #[arg(long)]
        q: u64,
        /// Comma-separated numerators.
        #[arg(long, value_delimiter = ',')]
        a: Vec<u64>,
    },
}
