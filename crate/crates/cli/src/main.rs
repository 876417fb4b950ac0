use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgr_core::pairing::{with_jobs, DualModel, ModelConfig};
use qgr_core::uq::RootConvention;
use qgr_core::QgrError;

mod report;
mod suites;

#[derive(Parser)]
#[command(name = "qgr", version, about = "Covariant first order calculi on quantum Grassmannians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate tangent spaces of dimension at most --max-dim.
    Classify(Common),
    /// Compare dim B/(B+)^{k+1} computed by rank with the binomial count.
    Dims {
        #[command(flatten)]
        common: Common,
        /// Largest degree k in the table.
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Run one of the verification suites.
    Verify {
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq, Debug)]
pub enum Suite {
    Relations,
    Pairing,
    Primitives,
    Actions,
    Nilpotency,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    r: usize,
    /// Largest calculus dimension, or "auto" for 2r(N-r).
    #[arg(long, default_value = "auto")]
    max_dim: String,
    #[arg(long, default_value_t = 3)]
    truncation: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cache directory for pairing tables; falls back to QGR_CACHE_DIR.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Seed for the random-evaluation rank precheck.
    #[arg(long, default_value_t = 1)]
    probe_seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    /// Use the q <-> 1/q mirrored recursion for root vectors.
    #[arg(long)]
    alternate_roots: bool,
    /// Allow (N, r) outside the tested range N <= 4.
    #[arg(long)]
    force: bool,
}

/// Validated run settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub r: usize,
    pub max_dim: usize,
    pub max_dim_auto: bool,
    pub truncation: usize,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub probe_seed: u64,
    pub jobs: usize,
    pub convention: RootConvention,
}

impl RunConfig {
    fn from_common(c: &Common) -> Result<RunConfig, QgrError> {
        if c.r == 0 || c.r >= c.n {
            return Err(QgrError::IndexOutOfRange(format!("need 1 <= r <= N-1, got N={} r={}", c.n, c.r)));
        }
        if c.truncation == 0 {
            return Err(QgrError::IndexOutOfRange("truncation must be at least 1".into()));
        }
        if c.n > 4 && !c.force {
            return Err(QgrError::Unsupported(c.n, c.r, "N > 4 is beyond the tested range; pass --force".into()));
        }
        let auto = 2 * c.r * (c.n - c.r);
        let (max_dim, max_dim_auto) = if c.max_dim == "auto" {
            (auto, true)
        } else {
            let v: usize = c.max_dim.parse().map_err(|_| QgrError::Parse(format!("--max-dim {}", c.max_dim)))?;
            (v, v == auto)
        };
        let cache_dir = c.cache_dir.clone().or_else(|| std::env::var_os("QGR_CACHE_DIR").map(PathBuf::from));
        let jobs = c.jobs.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
        Ok(RunConfig {
            n: c.n,
            r: c.r,
            max_dim,
            max_dim_auto,
            truncation: c.truncation,
            format: c.format,
            cache_dir,
            probe_seed: c.probe_seed,
            jobs,
            convention: if c.alternate_roots { RootConvention::Alternate } else { RootConvention::Standard },
        })
    }

    pub fn model(&self, m: usize) -> Result<DualModel, QgrError> {
        let cfg = ModelConfig { n: self.n, r: self.r, truncation: m, convention: self.convention, cache_dir: self.cache_dir.clone() };
        DualModel::build(&cfg)
    }
}

pub fn exit_code(e: &QgrError) -> u8 {
    match e {
        QgrError::AuditRefused(_) | QgrError::Unsupported(..) | QgrError::IndexOutOfRange(_) | QgrError::Parse(_) => 2,
        QgrError::InfiniteFamily(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Classify(c) => c,
        Command::Dims { common, .. } => common,
        Command::Verify { common, .. } => common,
    };
    let cfg = match RunConfig::from_common(common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let result = with_jobs(cfg.jobs, || match &cli.command {
        Command::Classify(_) => report::cmd_classify(&cfg),
        Command::Dims { k, .. } => report::cmd_dims(&cfg, *k),
        Command::Verify { suite, .. } => suites::cmd_verify(*suite, &cfg),
    });
    match result {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&QgrError::InfiniteFamily("weight 0".into())), 3);
        assert_eq!(exit_code(&QgrError::AuditRefused("x".into())), 2);
        assert_eq!(exit_code(&QgrError::Unsupported(5, 2, "x".into())), 2);
        assert_eq!(exit_code(&QgrError::Inconsistent("x".into())), 1);
    }

    #[test]
    fn max_dim_parsing() {
        let cli = Cli::parse_from(["qgr", "classify", "--N", "4", "--r", "2"]);
        let Command::Classify(c) = cli.command else { panic!() };
        let cfg = RunConfig::from_common(&c).unwrap();
        assert_eq!((cfg.max_dim, cfg.max_dim_auto), (8, true));
        let cli = Cli::parse_from(["qgr", "classify", "--N", "4", "--r", "2", "--max-dim", "3"]);
        let Command::Classify(c) = cli.command else { panic!() };
        assert!(!RunConfig::from_common(&c).unwrap().max_dim_auto);
    }
}
