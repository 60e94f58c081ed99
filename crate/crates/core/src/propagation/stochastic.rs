use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{first_blowup, rk4_step_checked, Discretization, GpcState, Mode, PropagationConfig};
use crate::basis::{eval_gpc, BasisTable, TensorRule};
use crate::error::{Error, Result};
use crate::models::Model;
use crate::random_space::{Element, ElementId, ElementMesh};
use crate::refinement::{decide, indicator_q, transfer_children, Decision, IndicatorValues, ReducedOrderPolicy};
use crate::refinement::{RefinementReport, ReportRow, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub propagation: PropagationConfig,
    pub policy: ReducedOrderPolicy,
    /// Gauss points per dimension per element; `p + 1` when unset.
    pub quad_points: Option<usize>,
    pub tolerances: Tolerances,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            propagation: PropagationConfig::default(),
            policy: ReducedOrderPolicy::new(5).expect("p = 5 is valid"),
            quad_points: None,
            tolerances: Tolerances::default(),
        }
    }
}

impl SolverConfig {
    /// Degree `p` with the default reduced degree and everything else default.
    pub fn with_degree(p: usize) -> Result<Self> {
        Ok(Self {
            policy: ReducedOrderPolicy::new(p)?,
            ..Self::default()
        })
    }

    pub fn quad_points(&self) -> usize {
        self.quad_points.unwrap_or(self.policy.p + 1)
    }

    pub fn validate(&self) -> Result<()> {
        self.policy.validate()?;
        self.propagation.validate()?;
        self.tolerances.validate()?;
        if self.quad_points() < self.policy.p + 1 {
            return Err(Error::Config(vec![format!(
                "quad_points = {} is below p + 1 = {}",
                self.quad_points(),
                self.policy.p + 1
            )]));
        }
        Ok(())
    }
}

/// Global mean and variance per state component.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

/// Advances every node of a collocation element by one step of the model's
/// integrator. `values` is point-major on `rule` mapped into `element`.
pub fn evolve_element_collocation<M: Model + ?Sized>(
    model: &M,
    element: &Element,
    rule: &TensorRule,
    values: &mut [f64],
    t: f64,
    dt: f64,
) -> Result<()> {
    let s = values.len() / rule.len();
    let mut xi = vec![0.0; element.dim()];
    for (j, u) in values.chunks_mut(s).enumerate() {
        element.to_global_into(rule.node(j), &mut xi);
        model.step(t, dt, u, &xi);
        if let Some(c) = first_blowup(u) {
            return Err(Error::NumericalBlowup {
                element: element.id,
                time: t + dt,
                detail: format!("node xi = {xi:?}, component {c} = {}", u[c]),
            });
        }
    }
    Ok(())
}

/// Pseudo-spectral Galerkin right-hand side: synthesise the first `n`
/// coefficients on `rule`, apply the model pointwise, project back.
#[allow(clippy::too_many_arguments)]
fn galerkin_rhs<M: Model + ?Sized>(
    model: &M,
    xis: &[Vec<f64>],
    rule: &TensorRule,
    table: &BasisTable,
    n: usize,
    t: f64,
    coeffs: &[f64],
    out: &mut [f64],
) {
    let s = coeffs.len() / n;
    let nodal = table.synthesize(coeffs, n, s);
    let mut rates = vec![0.0; nodal.len()];
    for (j, xi) in xis.iter().enumerate() {
        model.rhs(t, &nodal[j * s..(j + 1) * s], xi, &mut rates[j * s..(j + 1) * s]);
    }
    out.copy_from_slice(&table.project(&rates, rule.weights(), n, s));
}

/// One RK4 step of the projected coefficient system `dû_i/dt = ⟨L(Σ û_k Φ_k), Φ_i⟩`
/// using the first `n` basis functions of `table`.
#[allow(clippy::too_many_arguments)]
pub fn evolve_element_galerkin<M: Model + ?Sized>(
    model: &M,
    element: &Element,
    rule: &TensorRule,
    table: &BasisTable,
    n: usize,
    coeffs: &mut [f64],
    t: f64,
    dt: f64,
) -> Result<()> {
    let xis: Vec<Vec<f64>> = (0..rule.len()).map(|j| element.to_global(rule.node(j))).collect();
    rk4_step_checked(coeffs, t, dt, element.id, |t, y, dy| {
        galerkin_rhs(model, &xis, rule, table, n, t, y, dy)
    })
}

/// Multi-element gPC solver in random space with adaptive refinement.
pub struct StochasticSolver<M> {
    model: M,
    config: SolverConfig,
    disc: Discretization,
    mesh: ElementMesh,
    states: BTreeMap<ElementId, GpcState>,
    steps: u64,
}

impl<M: Model> StochasticSolver<M> {
    /// Uniform initial mesh with `counts[i]` elements along dimension `i`.
    pub fn new(model: M, counts: &[usize], config: SolverConfig) -> Result<Self> {
        if counts.len() != model.random_dim() {
            return Err(Error::InvalidArgument(format!(
                "{} element counts for a {}-dimensional random input",
                counts.len(),
                model.random_dim()
            )));
        }
        Self::with_mesh(model, ElementMesh::decompose_uniform(counts)?, config)
    }

    pub fn with_mesh(model: M, mesh: ElementMesh, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        if mesh.dim() != model.random_dim() {
            return Err(Error::InvalidArgument(format!(
                "mesh dimension {} differs from model dimension {}",
                mesh.dim(),
                model.random_dim()
            )));
        }
        let disc = Discretization::new(
            mesh.dim(),
            config.policy,
            config.quad_points(),
            config.propagation.mode,
            model.state_len(),
        );
        let states = mesh
            .elements()
            .map(|el| (el.id, disc.initial_state(&model, el)))
            .collect();
        Ok(Self {
            model,
            config,
            disc,
            mesh,
            states,
            steps: 0,
        })
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn discretization(&self) -> &Discretization {
        &self.disc
    }

    pub fn mesh(&self) -> &ElementMesh {
        &self.mesh
    }

    pub fn states(&self) -> &BTreeMap<ElementId, GpcState> {
        &self.states
    }

    pub fn state(&self, id: ElementId) -> Option<&GpcState> {
        self.states.get(&id)
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.config.propagation.dt
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Deterministic solves per step: elements times nodes per element.
    pub fn collocation_points(&self) -> usize {
        self.mesh.len() * self.disc.rule.len()
    }

    /// Advances all elements by one step without refining.
    pub fn propagate(&mut self) -> Result<()> {
        let t = self.time();
        let dt = self.config.propagation.dt;
        let (model, disc, mesh) = (&self.model, &self.disc, &self.mesh);
        self.states.par_iter_mut().try_for_each(|(id, state)| {
            let element = mesh.get(*id).ok_or(Error::StaleId(*id))?;
            match state.mode() {
                Mode::Collocation => {
                    evolve_element_collocation(model, element, &disc.rule, state.full_mut(), t, dt)?;
                    if let Some(r) = state.reduced_mut() {
                        evolve_element_collocation(model, element, &disc.reduced_rule, r, t, dt)?;
                    }
                }
                Mode::Galerkin => {
                    let n = disc.set.len();
                    evolve_element_galerkin(model, element, &disc.rule, &disc.table, n, state.full_mut(), t, dt)?;
                    if let Some(r) = state.reduced_mut() {
                        let n0 = disc.reduced_set.len();
                        evolve_element_galerkin(model, element, &disc.rule, &disc.table, n0, r, t, dt)?;
                    }
                }
            }
            Ok::<(), Error>(())
        })?;
        self.steps += 1;
        Ok(())
    }

    /// One time step followed, at check steps, by a refinement pass.
    pub fn step(&mut self) -> Result<Option<RefinementReport>> {
        self.propagate()?;
        let check = self.steps.is_multiple_of(self.config.propagation.check_interval as u64);
        if check && self.config.tolerances.refinement_enabled() {
            Ok(Some(self.refine()))
        } else {
            Ok(None)
        }
    }

    /// Steps until `t_end` (to within half a step).
    pub fn advance_to(&mut self, t_end: f64) -> Result<()> {
        self.advance_with(t_end, |_, _| {})
    }

    /// [`StochasticSolver::advance_to`] calling `observe` after every step.
    pub fn advance_with<F>(&mut self, t_end: f64, mut observe: F) -> Result<()>
    where
        F: FnMut(&Self, Option<&RefinementReport>),
    {
        let dt = self.config.propagation.dt;
        while self.time() < t_end - 0.5 * dt {
            let report = self.step()?;
            observe(self, report.as_ref());
        }
        Ok(())
    }

    /// Indicator values of every live element at the current time.
    pub fn indicators(&self) -> Vec<(ElementId, IndicatorValues)> {
        let t = self.time();
        let items: Vec<(&ElementId, &GpcState)> = self.states.iter().collect();
        items
            .par_iter()
            .map(|(id, state)| {
                let element = self.mesh.get(**id).expect("state without element");
                (**id, indicator_q(&self.model, &self.disc, element, state, t))
            })
            .collect()
    }

    /// Evaluates the indicator on every element and splits the triggered ones.
    pub fn refine(&mut self) -> RefinementReport {
        let time = self.time();
        let tol = self.config.tolerances;
        let mut report = RefinementReport {
            time,
            ..RefinementReport::default()
        };
        for (id, values) in self.indicators() {
            let element = self.mesh.get(id).expect("live element").clone();
            let (q_hat, mut decision) = decide(&values, &element, &tol);
            if let Decision::Split(dims) = &decision {
                if self.mesh.len() + (1 << dims.len()) - 1 > tol.max_elements {
                    decision = Decision::Skipped("max_elements".into());
                } else {
                    let kids = self.mesh.split_element(id, dims, time).expect("live element");
                    let parent = self.states.remove(&id).expect("state of live element");
                    let children: Vec<&Element> = kids.iter().map(|k| self.mesh.get(*k).unwrap()).collect();
                    let states = transfer_children(&element, &parent, &children, &self.disc);
                    self.states.extend(kids.iter().copied().zip(states));
                }
            }
            if let Decision::Skipped(reason) = &decision {
                report
                    .warnings
                    .push(format!("t = {time}: element {id} not split ({reason})"));
            }
            report.rows.push(ReportRow {
                element: id,
                probability: element.probability(),
                q_total: values.q_total,
                q_hat,
                s1: values.s1,
                s2: values.s2,
                decision,
            });
        }
        report
    }

    /// Conditional first and second moments of one element.
    pub fn conditional_moments(&self, id: ElementId) -> Result<(Vec<f64>, Vec<f64>)> {
        let state = self.states.get(&id).ok_or(Error::StaleId(id))?;
        Ok(self.disc.conditional_moments(state))
    }

    /// Probability-weighted assembly of the conditional moments.
    pub fn moments(&self) -> Moments {
        let s = self.disc.components;
        let mut mean = vec![0.0; s];
        let mut second = vec![0.0; s];
        for (id, state) in &self.states {
            let prob = self.mesh.get(*id).expect("live element").probability();
            let (m1, m2) = self.disc.conditional_moments(state);
            for c in 0..s {
                mean[c] += prob * m1[c];
                second[c] += prob * m2[c];
            }
        }
        let variance = mean.iter().zip(&second).map(|(m, m2)| m2 - m * m).collect();
        Moments { mean, variance }
    }

    /// Value of the piecewise gPC approximation at a global point.
    pub fn evaluate(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let id = self.mesh.locate(xi)?;
        let element = self.mesh.get(id).expect("located element");
        let coeffs = self.disc.coefficients(&self.states[&id]);
        let local = element.to_local(xi);
        let s = self.disc.components;
        let n = self.disc.set.len();
        Ok((0..s)
            .map(|c| {
                let cc: Vec<f64> = (0..n).map(|k| coeffs[k * s + c]).collect();
                eval_gpc(&cc, &self.disc.set, &local)
            })
            .collect())
    }
}
