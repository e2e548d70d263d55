use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jnlab::suite::{self, Family, Report, SuiteConfig};
use jnlab::{bellring, Error};

#[derive(Parser)]
#[command(name = "jnlab", version, about = "Exact certificate suites for J_n block operators, cylinder measures and shift models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Weight, W1, translation, continuity, circle and singularity certificates.
    Measure,
    /// Finite-dimensional operator certificates on seeded random matrices.
    Op,
    /// Weighted-shift stability decisions.
    Shift,
    /// Diagonal-unitary stability decisions.
    Diag,
    /// Ring identities for the Bell counterexample.
    Bell {
        #[command(subcommand)]
        action: Option<BellAction>,
    },
    /// Every family selected by `--families` (all by default).
    Suite,
}

#[derive(Subcommand)]
enum BellAction {
    /// Print the three certificates as JSON.
    Verify,
}

#[derive(Args)]
struct Opts {
    /// Flat `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long = "N", global = true, value_name = "N")]
    base: Option<String>,
    /// Forbidden-set indices, `|` between measures, e.g. `1|1,3`; "" is the empty set.
    #[arg(long, global = true, allow_hyphen_values = true)]
    forbidden: Option<String>,
    #[arg(long, global = true)]
    depth: Option<String>,
    #[arg(long = "base-depth", global = true)]
    base_depth: Option<String>,
    #[arg(long = "cylinder-depth", global = true)]
    cylinder_depth: Option<String>,
    #[arg(long, global = true)]
    n: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long = "op-trials", global = true)]
    op_trials: Option<String>,
    #[arg(long = "op-size", global = true)]
    op_size: Option<String>,
    /// Angle sets, `|` separated, e.g. `class:0@2|single:0`.
    #[arg(long, global = true)]
    angles: Option<String>,
    /// Weight sequences, `|` separated, e.g. `bilateral;0:2|unilateral;`.
    #[arg(long, global = true)]
    weights: Option<String>,
    /// Directory for CSV companions.
    #[arg(long, global = true)]
    emit: Option<String>,
    /// Path for the JSON report.
    #[arg(long, global = true)]
    report: Option<String>,
    #[arg(long, global = true)]
    cap: Option<String>,
    /// Comma-separated families for `suite`.
    #[arg(long, global = true)]
    families: Option<String>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    /// Print the JSON report to stdout instead of summary lines.
    #[arg(long, global = true)]
    json: bool,
}

impl Opts {
    fn pairs(&self) -> Vec<(String, String)> {
        let fields = [
            ("N", &self.base),
            ("forbidden", &self.forbidden),
            ("depth", &self.depth),
            ("base-depth", &self.base_depth),
            ("cylinder-depth", &self.cylinder_depth),
            ("n", &self.n),
            ("seed", &self.seed),
            ("op-trials", &self.op_trials),
            ("op-size", &self.op_size),
            ("angles", &self.angles),
            ("weights", &self.weights),
            ("emit", &self.emit),
            ("report", &self.report),
            ("cap", &self.cap),
            ("families", &self.families),
        ];
        let mut out: Vec<_> = fields
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        if self.timings {
            out.push(("timings".into(), "true".into()));
        }
        out
    }
}

fn finish(report: &Report, cfg: &SuiteConfig, json: bool) -> Result<bool, Error> {
    if let Some(path) = &cfg.report {
        suite::emit_report(report, path)?;
    }
    if let Some(dir) = &cfg.emit {
        let path = dir.join("certificates.csv");
        let mut buf = Vec::new();
        suite::write_summary_csv(report, &mut buf).expect("in-memory write");
        std::fs::create_dir_all(dir)
            .and_then(|_| std::fs::write(&path, buf))
            .map_err(|e| Error::Emit { path: path.display().to_string(), source: e })?;
    }
    if json {
        print!("{}", report.to_json());
    } else {
        for c in &report.certificates {
            match c.params.get("decision") {
                Some(d) => println!("{} -> {d}", c.summary_line()),
                None => println!("{}", c.summary_line()),
            }
        }
        let (p, f, s) = report.counts();
        println!("{p} passed, {f} failed, {s} skipped");
        if let Some(ts) = &report.timings {
            for t in ts {
                println!("{}: {:.3}s", t.family, t.seconds);
            }
        }
    }
    Ok(report.all_passed())
}

fn run(cli: Cli) -> Result<bool, Error> {
    let mut pairs = cli.opts.pairs();
    let family = match &cli.command {
        Command::Measure => Some(Family::Measure),
        Command::Op => Some(Family::Op),
        Command::Shift => Some(Family::Shift),
        Command::Diag => Some(Family::Diag),
        Command::Bell { .. } => Some(Family::Bell),
        Command::Suite => None,
    };
    if let Some(f) = family {
        pairs.push(("families".into(), f.name().into()));
    }
    let cfg = suite::parse_config(cli.opts.config.as_deref(), &pairs)?;

    if let Command::Bell { action: Some(BellAction::Verify) } = cli.command {
        let certs = bellring::verify_all();
        println!("{}", serde_json::to_string_pretty(&certs).expect("certificates serialise"));
        return Ok(certs.iter().all(|c| c.passed()));
    }
    let report = suite::run_suite(&cfg);
    finish(&report, &cfg, cli.opts.json)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Parse { .. }) => {
            eprintln!("jnlab: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("jnlab: {e}");
            ExitCode::from(1)
        }
    }
}
