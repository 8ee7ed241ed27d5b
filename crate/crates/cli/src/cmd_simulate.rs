//! The `simulate` command: generate a series from a process model.

use std::path::PathBuf;

use periomax_core::processes::SeedSpec;

use crate::config::{pick, resolve_seed, Config};
use crate::data::write_series;
use crate::errors::CliResult;
use crate::procspec::ProcessFlags;
use crate::report::Echo;

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub process: ProcessFlags,
    /// Series length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Master seed (PERIOMAX_SEED as fallback, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat key-value config file mirroring the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: &SimulateArgs) -> CliResult<()> {
    let cfg = Config::load(args.config.as_deref())?;
    let mut echo = Echo::new();
    let spec = args.process.resolve(&cfg, &mut echo)?;
    let n = pick(args.n, cfg.usize("n")?, 1024);
    let seed = resolve_seed(args.seed, &cfg)?;
    let out = args.out.clone().or(cfg.string("out")?.map(PathBuf::from));

    let process = spec.build()?;
    let series = process.generate(n, SeedSpec::new(seed, 0))?;
    write_series(out.as_deref(), series.values())
}
