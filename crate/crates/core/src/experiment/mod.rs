//! Named benchmark runs: config parsing, execution and artifact output.
//!
//! A run produces `moments.csv` (or `solution.csv` for Burgers),
//! `mesh_t<t>.csv` snapshots, `refinement.csv`, `summary.json` and the
//! effective `config.txt`, which parses back to the same settings.

mod config;

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub use config::{parse_config, parse_sections, Experiment, ExperimentConfig, ReferenceSpec, RunMode, Sections};

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::models::{KraichnanOrszag, KuramotoSivashinsky, LinearOde, Model};
use crate::propagation::{
    BurgersConfig, BurgersSolver, Mode, Moments, PropagationConfig, SolverConfig, StochasticSolver,
};
use crate::random_space::ElementMesh;
use crate::reference::{mc_estimate, ode_exact_stats, relative_error, MomentSeries, Sampler};
use crate::refinement::{ReducedOrderPolicy, RefinementReport, Tolerances};

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub label: String,
    pub experiment: String,
    pub mode: String,
    pub final_time: f64,
    pub steps: u64,
    /// Live elements at the end; absent for sampling runs.
    pub elements: Option<usize>,
    /// Collocation or quadrature nodes (samples for sampling runs).
    pub points: usize,
    /// Splits along each dimension over the whole run.
    pub split_counts: Option<Vec<usize>>,
    pub max_rel_error_mean: Option<f64>,
    pub max_rel_error_variance: Option<f64>,
    /// Times skipped by the error because a reference variance was zero.
    pub excluded_times: Vec<f64>,
    /// Sampling realizations dropped after a blow-up.
    pub excluded_samples: usize,
    pub warnings: Vec<String>,
    pub total_variation: Option<f64>,
    pub integral: Option<f64>,
}

/// Everything a run computes, before it is written out.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: RunSummary,
    /// Empty for Burgers.
    pub series: MomentSeries,
    pub mesh: Option<ElementMesh>,
    /// `(file name, contents)` of each mesh snapshot.
    pub snapshots: Vec<(String, String)>,
    pub refinement_csv: String,
    /// `x,u` rows of the final Burgers solution.
    pub solution_csv: Option<String>,
}

impl RunOutcome {
    /// Writes every artifact into `dir`, creating it if needed.
    pub fn write(&self, config: &ExperimentConfig, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        match &self.solution_csv {
            Some(s) => fs::write(dir.join("solution.csv"), s)?,
            None => {
                let mut buf = Vec::new();
                self.series.write_csv(&mut buf)?;
                fs::write(dir.join("moments.csv"), buf)?;
            }
        }
        for (name, body) in &self.snapshots {
            fs::write(dir.join(name), body)?;
        }
        fs::write(dir.join("refinement.csv"), &self.refinement_csv)?;
        fs::write(
            dir.join("summary.json"),
            serde_json::to_string_pretty(&self.summary)? + "\n",
        )?;
        fs::write(dir.join("config.txt"), config.to_text())?;
        Ok(())
    }
}

/// Validates, executes and writes to `config.output`.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome> {
    let outcome = execute(config)?;
    outcome.write(config, &config.output)?;
    Ok(outcome)
}

/// Validates and executes without touching the file system, except to read
/// a `file:` reference.
pub fn execute(config: &ExperimentConfig) -> Result<RunOutcome> {
    config.validate()?;
    let mut outcome = match config.experiment {
        Experiment::Ode => simulate(LinearOde::default(), config)?,
        Experiment::Ko1d | Experiment::Ko2d | Experiment::Ko3d => {
            let model = KraichnanOrszag::with_dim(config.experiment.random_dim()).expect("dimension 1 to 3");
            simulate(model, config)?
        }
        Experiment::Ks => simulate(KuramotoSivashinsky::new(config.ks_modes)?, config)?,
        Experiment::Burgers => return burgers(config),
    };
    if let Some(reference) = reference_series(config, &outcome.series.times)? {
        let (em, ev, excluded) = errors(&outcome.series, &reference)?;
        outcome.summary.max_rel_error_mean = Some(em);
        outcome.summary.max_rel_error_variance = Some(ev);
        outcome.summary.excluded_times = excluded;
    }
    Ok(outcome)
}

fn output_steps(config: &ExperimentConfig) -> (u64, Vec<u64>) {
    let n = (config.t_final / config.dt).round().max(1.0) as u64;
    let every = config.output_interval as u64;
    let mut steps: Vec<u64> = (0..=n).filter(|k| k % every == 0).collect();
    if steps.last() != Some(&n) {
        steps.push(n);
    }
    (n, steps)
}

fn dump_steps(config: &ExperimentConfig, n: u64) -> Vec<(u64, f64)> {
    let mut out: Vec<(u64, f64)> = config
        .dump_mesh_at
        .iter()
        .map(|&t| (((t / config.dt).round() as u64).min(n), t))
        .collect();
    if !out.iter().any(|(k, _)| *k == n) {
        out.push((n, config.t_final));
    }
    out
}

fn snapshot(mesh: &ElementMesh, t: f64) -> Result<(String, String)> {
    let mut buf = Vec::new();
    mesh.write_snapshot(&mut buf)?;
    Ok((format!("mesh_t{t}.csv"), String::from_utf8(buf).expect("ascii csv")))
}

fn solver_config(config: &ExperimentConfig) -> Result<SolverConfig> {
    let mode = match config.mode {
        RunMode::AmrGalerkin | RunMode::GlobalGpc => Mode::Galerkin,
        _ => Mode::Collocation,
    };
    let policy = match config.p0 {
        Some(p0) => ReducedOrderPolicy::with_p0(config.p, p0)?,
        None => ReducedOrderPolicy::new(config.p)?,
    }
    .variant(config.variant);
    Ok(SolverConfig {
        propagation: PropagationConfig {
            mode,
            dt: config.dt,
            t_final: config.t_final,
            check_interval: config.check_interval,
        },
        policy,
        quad_points: config.quad_points,
        tolerances: tolerances(config),
    })
}

fn tolerances(config: &ExperimentConfig) -> Tolerances {
    Tolerances {
        tol1: if config.mode.refines() {
            config.tol1
        } else {
            f64::INFINITY
        },
        tol2: config.tol2,
        criterion: config.criterion,
        weight: config.trigger,
        max_depth: config.max_depth,
        max_elements: config.max_elements,
    }
}

fn blank_summary(config: &ExperimentConfig) -> RunSummary {
    RunSummary {
        label: config.label.clone(),
        experiment: config.experiment.to_string(),
        mode: config.mode.to_string(),
        final_time: 0.0,
        steps: 0,
        elements: None,
        points: 0,
        split_counts: None,
        max_rel_error_mean: None,
        max_rel_error_variance: None,
        excluded_times: Vec::new(),
        excluded_samples: 0,
        warnings: Vec::new(),
        total_variation: None,
        integral: None,
    }
}

fn simulate<M: Model>(model: M, config: &ExperimentConfig) -> Result<RunOutcome> {
    let (n, outputs) = output_steps(config);
    let mut summary = blank_summary(config);
    let dim = model.random_dim();
    let mut refinement_csv = RefinementReport::csv_header(dim) + "\n";

    if config.mode.is_sampling() {
        let sampler = match config.mode {
            RunMode::Mc => Sampler::Uniform { seed: config.seed },
            _ => Sampler::Sobol,
        };
        let times: Vec<f64> = outputs.iter().map(|&k| k as f64 * config.dt).collect();
        let est = mc_estimate(&model, sampler, config.samples, &times, config.dt)?;
        summary.final_time = n as f64 * config.dt;
        summary.steps = n;
        summary.points = config.samples;
        summary.excluded_samples = est.excluded;
        return Ok(RunOutcome {
            summary,
            series: est.series,
            mesh: None,
            snapshots: Vec::new(),
            refinement_csv,
            solution_csv: None,
        });
    }

    let mut solver = StochasticSolver::new(model, &config.elements, solver_config(config)?)?;
    let dumps = dump_steps(config, n);
    let mut snapshots = Vec::new();
    let mut series = MomentSeries::default();
    let mut next_output = outputs.iter().peekable();
    let mut take = |solver: &StochasticSolver<M>,
                    k: u64,
                    series: &mut MomentSeries,
                    snaps: &mut Vec<(String, String)>|
     -> Result<()> {
        if next_output.peek() == Some(&&k) {
            next_output.next();
            series.push(k as f64 * config.dt, &solver.moments());
        }
        for (_, t) in dumps.iter().filter(|(s, _)| *s == k) {
            snaps.push(snapshot(solver.mesh(), *t)?);
        }
        Ok(())
    };
    take(&solver, 0, &mut series, &mut snapshots)?;
    for k in 1..=n {
        if let Some(report) = solver.step()? {
            let mut buf = Vec::new();
            report.write_rows(&mut buf)?;
            refinement_csv.push_str(std::str::from_utf8(&buf).expect("ascii csv"));
            summary.warnings.extend(report.warnings);
        }
        take(&solver, k, &mut series, &mut snapshots)?;
    }
    summary.final_time = solver.time();
    summary.steps = solver.steps();
    summary.elements = Some(solver.mesh().len());
    summary.points = solver.collocation_points();
    summary.split_counts = Some(solver.mesh().split_counts());
    Ok(RunOutcome {
        summary,
        series,
        mesh: Some(solver.mesh().clone()),
        snapshots,
        refinement_csv,
        solution_csv: None,
    })
}

fn burgers(config: &ExperimentConfig) -> Result<RunOutcome> {
    let (n, _) = output_steps(config);
    let mut solver = match config.mode {
        RunMode::GlobalCollocation => BurgersSolver::global(config.global_points, config.dt)?,
        _ => {
            let p0 = match config.p0 {
                Some(p0) => p0,
                None => ReducedOrderPolicy::new(config.p)?.p0,
            };
            BurgersSolver::new(BurgersConfig {
                p: config.p,
                p0,
                initial_elements: config.elements[0],
                dt: config.dt,
                check_interval: config.check_interval,
                tolerances: tolerances(config),
            })?
        }
    };
    let mut summary = blank_summary(config);
    let mut refinement_csv = RefinementReport::csv_header(1) + "\n";
    let dumps = dump_steps(config, n);
    let mut snapshots = Vec::new();
    for (_, t) in dumps.iter().filter(|(s, _)| *s == 0) {
        snapshots.push(snapshot(solver.mesh(), *t)?);
    }
    for k in 1..=n {
        if let Some(report) = solver.step()? {
            let mut buf = Vec::new();
            report.write_rows(&mut buf)?;
            refinement_csv.push_str(std::str::from_utf8(&buf).expect("ascii csv"));
            summary.warnings.extend(report.warnings);
        }
        for (_, t) in dumps.iter().filter(|(s, _)| *s == k) {
            snapshots.push(snapshot(solver.mesh(), *t)?);
        }
    }
    let nodal = solver.nodal_solution();
    let mut solution_csv = String::from("x,u\n");
    for (x, u) in &nodal {
        solution_csv.push_str(&format!("{},{}\n", fmt_f64(*x), fmt_f64(*u)));
    }
    summary.final_time = solver.time();
    summary.steps = n;
    summary.elements = Some(solver.mesh().len());
    summary.points = nodal.len();
    summary.split_counts = Some(solver.mesh().split_counts());
    summary.total_variation = Some(solver.total_variation());
    summary.integral = Some(solver.integral());
    Ok(RunOutcome {
        summary,
        series: MomentSeries::default(),
        mesh: Some(solver.mesh().clone()),
        snapshots,
        refinement_csv,
        solution_csv: Some(solution_csv),
    })
}

/// Reference statistics at `times` as configured, or `None`.
pub fn reference_series(config: &ExperimentConfig, times: &[f64]) -> Result<Option<MomentSeries>> {
    match &config.reference {
        ReferenceSpec::None => Ok(None),
        ReferenceSpec::Exact => {
            let u0 = LinearOde::default().u0;
            let mut s = MomentSeries::default();
            for &t in times {
                let (m, v) = ode_exact_stats(t, u0);
                s.push(
                    t,
                    &Moments {
                        mean: vec![m],
                        variance: vec![v],
                    },
                );
            }
            Ok(Some(s))
        }
        ReferenceSpec::File(path) => {
            let file = fs::File::open(path)
                .map_err(|e| Error::Validation(format!("cannot open reference {}: {e}", path.display())))?;
            Ok(Some(MomentSeries::read_csv(std::io::BufReader::new(file))?))
        }
        ReferenceSpec::Generate => {
            let generator = reference_generator(config);
            Ok(Some(execute(&generator)?.series))
        }
    }
}

/// Settings used for `reference = generate`: high-order adaptive
/// collocation for K-O 1D, Sobol sampling for the rest.
pub fn reference_generator(config: &ExperimentConfig) -> ExperimentConfig {
    let mut g = config.clone();
    g.label = format!("{}.reference", config.label);
    g.reference = ReferenceSpec::None;
    g.dump_mesh_at.clear();
    g.p0 = None;
    g.quad_points = None;
    match config.experiment {
        Experiment::Ko1d => {
            g.mode = RunMode::AmrCollocation;
            g.p = 13;
            g.tol1 = 1e-8;
        }
        _ => {
            g.mode = RunMode::Sobol;
            g.samples = config.reference_samples;
        }
    }
    g
}

/// Maximum relative mean and variance errors over `t > 0`, plus the times
/// where a zero reference variance was skipped.
fn errors(series: &MomentSeries, reference: &MomentSeries) -> Result<(f64, f64, Vec<f64>)> {
    let var = relative_error(series, reference)?;
    let mut em: f64 = 0.0;
    for (i, &t) in series.times.iter().enumerate() {
        if t <= 0.0 {
            continue;
        }
        let r = reference
            .at(t)
            .ok_or_else(|| Error::Validation(format!("reference does not cover t = {t}")))?;
        for (m, mr) in series.mean[i].iter().zip(&r.mean) {
            if *mr != 0.0 {
                em = em.max((m - mr).abs() / mr.abs());
            }
        }
    }
    Ok((em, var.value, var.excluded_times))
}

/// One line of a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub label: String,
    pub method: String,
    pub points: usize,
    pub elements: Option<usize>,
    /// Maximum relative variance error against the shared reference.
    pub error: f64,
}

/// Runs every config against one shared reference. The first row compares
/// the reference with itself.
pub fn compare(configs: &[ExperimentConfig]) -> Result<Vec<CompareRow>> {
    let first = configs
        .first()
        .ok_or_else(|| Error::InvalidArgument("compare needs at least one config".into()))?;
    for c in configs {
        c.validate()?;
        if c.experiment != first.experiment || c.reference != first.reference {
            return Err(Error::Validation(format!(
                "[{}] uses {} with reference {}, but [{}] uses {} with reference {}",
                c.label, c.experiment, c.reference, first.label, first.experiment, first.reference
            )));
        }
        if first.experiment == Experiment::Burgers {
            return Err(Error::Validation(
                "burgers runs have no moment reference to compare".into(),
            ));
        }
        if c.reference == ReferenceSpec::None {
            return Err(Error::Validation(format!("[{}] has no reference", c.label)));
        }
    }
    let (_, steps) = output_steps(first);
    let times: Vec<f64> = steps.iter().map(|&k| k as f64 * first.dt).collect();
    let reference = reference_series(first, &times)?.expect("reference checked above");

    let mut rows = vec![CompareRow {
        label: "reference".into(),
        method: first.reference.to_string(),
        points: 0,
        elements: None,
        error: relative_error(&reference, &reference)?.value,
    }];
    for c in configs {
        let mut plain = c.clone();
        plain.reference = ReferenceSpec::None;
        let out = execute(&plain)?;
        for t in &out.series.times {
            if !reference.times.iter().any(|r| (r - t).abs() <= 1e-9 * t.abs().max(1.0)) {
                return Err(Error::Validation(format!(
                    "[{}] reports t = {t}, which is not on the reference grid",
                    c.label
                )));
            }
        }
        rows.push(CompareRow {
            label: c.label.clone(),
            method: c.mode.to_string(),
            points: out.summary.points,
            elements: out.summary.elements,
            error: relative_error(&out.series, &reference)?.value,
        });
    }
    Ok(rows)
}

/// Aligned text table of `rows`.
pub fn format_table(rows: &[CompareRow]) -> String {
    let mut out = format!(
        "{:<24} {:<20} {:>10} {:>9} {:>24}\n",
        "label", "method", "points", "elements", "error"
    );
    for r in rows {
        let elements = r.elements.map_or("-".to_string(), |n| n.to_string());
        out.push_str(&format!(
            "{:<24} {:<20} {:>10} {:>9} {:>24}\n",
            r.label,
            r.method,
            r.points,
            elements,
            fmt_f64(r.error)
        ));
    }
    out
}

/// Writes `rows` as CSV.
pub fn write_table_csv<W: Write>(rows: &[CompareRow], mut w: W) -> Result<()> {
    writeln!(w, "label,method,points,elements,error")?;
    for r in rows {
        let elements = r.elements.map_or(String::new(), |n| n.to_string());
        writeln!(
            w,
            "{},{},{},{},{}",
            r.label,
            r.method,
            r.points,
            elements,
            fmt_f64(r.error)
        )?;
    }
    Ok(())
}
