use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ansps::SolverConfig;
use ansps_cli::experiment::{ExperimentSpec, ProblemSource, TargetGap};
use ansps_cli::{cmd_compare, cmd_run, cmd_sweep, parse, CliError};

#[derive(Parser)]
#[command(name = "ansps", version, about = "Adaptive-sample-size spectral projected subgradient experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every cell and write one trace CSV per cell.
    Run(Common),
    /// Run every cell and rank them by FEV to reach a target objective.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        target: Target,
    },
    /// Run the spectral × nonmonotone grid per strategy and pick the best cells.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Args)]
struct Target {
    /// Absolute gap above the reference optimum.
    #[arg(long, default_value_t = 0.01)]
    target_gap: f64,
    /// Relative gap (fraction of |f_ref|); overrides --target-gap.
    #[arg(long)]
    target_rel: Option<f64>,
}

#[derive(Args)]
struct Common {
    /// LIBSVM data file.
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    data: Option<PathBuf>,
    /// Synthetic problem `n,N,seed`.
    #[arg(long)]
    synthetic: Option<String>,
    /// Regularization weight (0 for the plain hinge loss).
    #[arg(long, default_value_t = 10.0)]
    delta: f64,
    /// Comma list of ansps, heur, full.
    #[arg(long)]
    strategy: Option<String>,
    /// Comma list of bb1, bb2, abb, abbmin, const[:VALUE].
    #[arg(long)]
    spectral: Option<String>,
    /// Comma list of max, cca, mon, ada.
    #[arg(long)]
    nonmonotone: Option<String>,
    #[arg(long = "C2", default_value_t = 100.0)]
    c2: f64,
    #[arg(long, default_value_t = 1e-4)]
    eta: f64,
    /// Line-search candidates per iteration.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Adaptive growth factor.
    #[arg(long, default_value_t = 1.1)]
    r: f64,
    /// Initial sample fraction.
    #[arg(long, default_value_t = 0.1)]
    n0_frac: f64,
    /// Comma list of run seeds.
    #[arg(long, default_value = "0")]
    seed: String,
    /// Last iteration index.
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Stop once the cumulative scalar-product count reaches this
    #[arg(long)]
    fev_budget: Option<u64>,
    /// Stride of the (uncharged) full-objective column.
    #[arg(long, default_value_t = 10)]
    full_every: usize,
    /// Output directory for traces and summaries
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

const ALL_STRATEGIES: &str = "ansps,heur,full";
const ALL_SPECTRAL: &str = "bb1,bb2,abb,abbmin";
const ALL_NONMONOTONE: &str = "max,cca,mon,ada";

impl Common {
    fn spec(&self, defaults: (&str, &str, &str)) -> Result<ExperimentSpec, CliError> {
        let source = match (&self.data, &self.synthetic) {
            (Some(p), None) => ProblemSource::Libsvm(p.clone()),
            (None, Some(s)) => ProblemSource::Synthetic(parse::synthetic(s)?),
            _ => return Err(CliError::Usage("give exactly one of --data or --synthetic".into())),
        };
        let base = SolverConfig {
            c2: self.c2,
            eta: self.eta,
            m: self.m,
            n0_frac: self.n0_frac,
            max_iterations: self.max_iters,
            fev_budget: self.fev_budget,
            full_value_stride: self.full_every,
            ..SolverConfig::default()
        };
        Ok(ExperimentSpec {
            source,
            delta: self.delta,
            strategies: parse::strategies(self.strategy.as_deref().unwrap_or(defaults.0), self.r)?,
            spectral: parse::spectral_rules(self.spectral.as_deref().unwrap_or(defaults.1))?,
            nonmonotone: parse::nonmonotone_rules(
                self.nonmonotone.as_deref().unwrap_or(defaults.2),
            )?,
            seeds: parse::seeds(&self.seed)?,
            base,
            out_dir: self.out.clone(),
        })
    }
}

impl Target {
    fn gap(&self) -> TargetGap {
        match self.target_rel {
            Some(r) => TargetGap::Relative(r),
            None => TargetGap::Absolute(self.target_gap),
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(common) => {
            let spec = common.spec(("ansps", "abb", "ada"))?;
            let out = cmd_run(&spec)?;
            for f in &out.files {
                println!("{}", f.display());
            }
        }
        Command::Compare { common, target } => {
            let spec = common.spec((ALL_STRATEGIES, "abb", "ada"))?;
            let out = cmd_compare(&spec, target.gap())?;
            print!("{}", out.table.render());
        }
        Command::Sweep { common, target } => {
            let spec = common.spec((ALL_STRATEGIES, ALL_SPECTRAL, ALL_NONMONOTONE))?;
            let out = cmd_sweep(&spec, target.gap())?;
            print!("{}", out.table.render());
            for (strategy, i) in &out.best {
                let row = &out.table.rows[*i];
                println!("best {strategy}: {} seed {}", row.cell.label(), row.cell.seed);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
