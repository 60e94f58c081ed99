use std::path::PathBuf;
use std::process::ExitCode;

use amr_gpc::experiment::{self, parse_config, Experiment, ExperimentConfig, ReferenceSpec};
use amr_gpc::{Error, Result};
use clap::{Args, Parser, Subcommand};

/// Adaptive multi-element gPC experiment runner.
#[derive(Parser, Debug)]
#[command(name = "amr-gpc", version)]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run one experiment and write its artifacts.
    #[command(allow_negative_numbers = true)]
    Run(Overrides),
    /// Run every section of a config against a shared reference and print
    /// an error table.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Also write the table as CSV here.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

/// Flags override the config file, which overrides the experiment defaults.
#[derive(Args, Debug)]
struct Overrides {
    /// Config file; its first section is used unless --section is given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    section: Option<String>,
    /// ode, ko1d, ko2d, ko3d, ks or burgers.
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    p0: Option<String>,
    #[arg(long)]
    tol1: Option<String>,
    #[arg(long)]
    tol2: Option<String>,
    #[arg(long, value_parser = ["s1", "s2"])]
    criterion: Option<String>,
    /// Initial element counts per dimension, `n1[,n2[,n3]]`.
    #[arg(long)]
    elements: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    t_final: Option<String>,
    /// Mesh snapshot times, `t1,t2,...`.
    #[arg(long)]
    dump_mesh_at: Option<String>,
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// none, exact, generate or file:<path>.
    #[arg(long)]
    reference: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        let fields = [
            ("mode", &self.mode),
            ("p", &self.p),
            ("p0", &self.p0),
            ("tol1", &self.tol1),
            ("tol2", &self.tol2),
            ("criterion", &self.criterion),
            ("elements", &self.elements),
            ("dt", &self.dt),
            ("t_final", &self.t_final),
            ("dump_mesh_at", &self.dump_mesh_at),
            ("output", &self.output),
            ("seed", &self.seed),
            ("samples", &self.samples),
            ("reference", &self.reference),
        ];
        fields
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
            .collect()
    }

    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let configs = parse_config(&std::fs::read_to_string(path)?)?;
                let found = match &self.section {
                    Some(label) => configs.into_iter().find(|c| &c.label == label),
                    None => configs.into_iter().next(),
                };
                found.ok_or_else(|| Error::Config(vec![format!("no matching section in {}", path.display())]))?
            }
            None => {
                let name = self
                    .experiment
                    .as_deref()
                    .ok_or_else(|| Error::Config(vec!["either --config or --experiment is required".into()]))?;
                let e: Experiment = name.parse().map_err(|e: String| Error::Config(vec![e]))?;
                ExperimentConfig::defaults(e)
            }
        };
        if let (Some(_), Some(name)) = (&self.config, &self.experiment) {
            if name != config.experiment.name() {
                return Err(Error::Config(vec![format!(
                    "--experiment {name} conflicts with section [{}]",
                    config.label
                )]));
            }
        }
        let errs: Vec<String> = self
            .pairs()
            .into_iter()
            .filter_map(|(k, v)| {
                config
                    .set(k, v)
                    .err()
                    .map(|e| format!("--{}: {e}", k.replace('_', "-")))
            })
            .collect();
        if !errs.is_empty() {
            return Err(Error::Config(errs));
        }
        config.validate()?;
        Ok(config)
    }
}

fn report(summary: &experiment::RunSummary, config: &ExperimentConfig) {
    let elements = summary.elements.map_or("-".to_string(), |n| n.to_string());
    println!(
        "{} ({} {}): t = {}, elements = {elements}, points = {}",
        summary.label, summary.experiment, summary.mode, summary.final_time, summary.points
    );
    if let (Some(em), Some(ev)) = (summary.max_rel_error_mean, summary.max_rel_error_variance) {
        println!(
            "max relative error: mean {em:.3e}, variance {ev:.3e} (reference {})",
            config.reference
        );
    } else if config.reference == ReferenceSpec::None && summary.total_variation.is_none() {
        println!("no reference configured");
    }
    if let Some(tv) = summary.total_variation {
        println!("total variation {tv:.6}");
    }
    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    println!("artifacts in {}", config.output.display());
}

fn main_inner(cli: Cli) -> Result<()> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    }
    match cli.command {
        Command::Run(overrides) => {
            let config = overrides.resolve()?;
            let outcome = experiment::run(&config)?;
            report(&outcome.summary, &config);
        }
        Command::Compare { config, table } => {
            let configs = parse_config(&std::fs::read_to_string(&config)?)?;
            let rows = experiment::compare(&configs)?;
            print!("{}", experiment::format_table(&rows));
            if let Some(path) = table {
                let file = std::fs::File::create(path)?;
                experiment::write_table_csv(&rows, std::io::BufWriter::new(file))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
