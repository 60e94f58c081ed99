//! Spectral-element solver for the inviscid Burgers equation with adaptive
//! refinement of the physical interval `(-1, 1)`.
//!
//! Each element carries nodal values at `p + 1` Gauss points. Elements are
//! coupled through upwind interface values exchanged before every Runge-Kutta
//! stage, and split with the same energy-transfer indicator used in random
//! space, applied to `L(u) = -u u_x`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::{first_blowup, rk4_step};
use crate::basis::{BasisTable, MultiIndexSet, TensorRule};
use crate::error::{Error, Result};
use crate::models::BurgersElementOperator;
use crate::random_space::{Element, ElementId, ElementMesh};
use crate::refinement::{decide, energy_transfer, transfer_nodal, Decision, IndicatorValues, ProjectedRates};
use crate::refinement::{RefinementReport, ReportRow, Tolerances};

/// Shared interface values `(left edge, right edge)` of each element, given
/// the elements' one-sided boundary values `(u(a⁺), u(b⁻))` ordered left to
/// right.
///
/// At an interior interface the side selected by the sign of the average of
/// the two one-sided values supplies the value; a zero average selects the
/// left side. The domain ends take the homogeneous boundary value.
pub fn burgers_interface_exchange(boundary: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = boundary.len();
    let mut shared = vec![0.0; n + 1];
    for e in 1..n {
        let left = boundary[e - 1].1;
        let right = boundary[e].0;
        shared[e] = if 0.5 * (left + right) >= 0.0 { left } else { right };
    }
    (0..n).map(|e| (shared[e], shared[e + 1])).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersConfig {
    pub p: usize,
    /// Reduced degree used by the indicator.
    pub p0: usize,
    pub initial_elements: usize,
    pub dt: f64,
    pub check_interval: usize,
    pub tolerances: Tolerances,
}

impl Default for BurgersConfig {
    fn default() -> Self {
        Self {
            p: 5,
            p0: 3,
            initial_elements: 8,
            dt: 1e-5,
            check_interval: 10,
            tolerances: Tolerances::default(),
        }
    }
}

impl BurgersConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.p0 >= self.p {
            errs.push(format!("p0 = {} must be below p = {}", self.p0, self.p));
        }
        if self.initial_elements == 0 {
            errs.push("initial_elements must be positive".into());
        }
        if self.dt.is_nan() || self.dt <= 0.0 {
            errs.push(format!("dt must be positive, got {}", self.dt));
        }
        if self.check_interval == 0 {
            errs.push("check_interval must be at least 1".into());
        }
        if let Err(Error::Config(more)) = self.tolerances.validate() {
            errs.extend(more);
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }
}

/// `u(x, 0) = sin(2πx)`.
pub fn burgers_initial_condition(x: f64) -> f64 {
    (2.0 * PI * x).sin()
}

pub struct BurgersSolver {
    config: BurgersConfig,
    op: BurgersElementOperator,
    set: MultiIndexSet,
    rule: TensorRule,
    table: BasisTable,
    mesh: ElementMesh,
    states: BTreeMap<ElementId, Vec<f64>>,
    steps: u64,
}

impl BurgersSolver {
    pub fn new(config: BurgersConfig) -> Result<Self> {
        config.validate()?;
        let mesh = ElementMesh::decompose_uniform(&[config.initial_elements])?;
        let op = BurgersElementOperator::new(config.p + 1);
        let set = MultiIndexSet::total_degree(1, config.p);
        let rule = TensorRule::new(1, config.p + 1);
        let table = BasisTable::for_rule(&set, &rule);
        let states = mesh
            .elements()
            .map(|el| {
                let u = op
                    .nodes()
                    .iter()
                    .map(|&z| burgers_initial_condition(el.to_global(&[z])[0]));
                (el.id, u.collect())
            })
            .collect();
        Ok(Self {
            config,
            op,
            set,
            rule,
            table,
            mesh,
            states,
            steps: 0,
        })
    }

    /// Single element of `points` Gauss points, never refined.
    pub fn global(points: usize, dt: f64) -> Result<Self> {
        Self::new(BurgersConfig {
            p: points - 1,
            p0: (points - 1) / 2,
            initial_elements: 1,
            dt,
            check_interval: 1,
            tolerances: Tolerances {
                tol1: f64::INFINITY,
                ..Tolerances::default()
            },
        })
    }

    pub fn config(&self) -> &BurgersConfig {
        &self.config
    }

    pub fn mesh(&self) -> &ElementMesh {
        &self.mesh
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.config.dt
    }

    /// Element ids ordered left to right.
    fn ordered(&self) -> Vec<ElementId> {
        let mut ids: Vec<(f64, ElementId)> = self.mesh.elements().map(|e| (e.lower[0], e.id)).collect();
        ids.sort_by(|a, b| a.0.total_cmp(&b.0));
        ids.into_iter().map(|(_, id)| id).collect()
    }

    /// `(x, u)` at every node, sorted by `x`.
    pub fn nodal_solution(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for id in self.ordered() {
            let el = self.mesh.get(id).expect("live element");
            for (&z, &u) in self.op.nodes().iter().zip(&self.states[&id]) {
                out.push((el.to_global(&[z])[0], u));
            }
        }
        out
    }

    /// `Σ |u_{j+1} - u_j|` over the sorted nodal values.
    pub fn total_variation(&self) -> f64 {
        self.nodal_solution().windows(2).map(|w| (w[1].1 - w[0].1).abs()).sum()
    }

    /// `∫ u dx` by element quadrature.
    pub fn integral(&self) -> f64 {
        self.mesh
            .elements()
            .map(|el| {
                let h = el.width(0);
                let u = &self.states[&el.id];
                h * self.rule.weights().iter().zip(u).map(|(w, u)| w * u).sum::<f64>()
            })
            .sum()
    }

    /// Lagrange interpolant of the element solution at `x`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let id = self.mesh.locate(&[x])?;
        let el = self.mesh.get(id).expect("located element");
        let grid = self.rule.map_to(el);
        Ok(crate::basis::lagrange_interpolate(
            &self.states[&id],
            &grid,
            &el.to_local(&[x]),
        ))
    }

    fn full_rhs(op: &BurgersElementOperator, widths: &[f64], u: &[f64], du: &mut [f64]) {
        let m = op.points();
        let boundary: Vec<(f64, f64)> = u.chunks(m).map(|c| op.boundary_values(c)).collect();
        let shared = burgers_interface_exchange(&boundary);
        du.par_chunks_mut(m)
            .zip(u.par_chunks(m))
            .enumerate()
            .for_each(|(e, (du, u))| op.rhs(u, widths[e], shared[e].0, shared[e].1, du));
    }

    /// One RK4 step with an interface exchange at every stage.
    pub fn propagate(&mut self) -> Result<()> {
        let ids = self.ordered();
        let m = self.op.points();
        let widths: Vec<f64> = ids.iter().map(|id| self.mesh.get(*id).unwrap().width(0)).collect();
        let mut u: Vec<f64> = ids.iter().flat_map(|id| self.states[id].iter().copied()).collect();
        let t = self.time();
        let op = &self.op;
        rk4_step(&mut u, t, self.config.dt, |_, y, dy| Self::full_rhs(op, &widths, y, dy));
        if let Some(i) = first_blowup(&u) {
            let id = ids[i / m];
            return Err(Error::NumericalBlowup {
                element: id,
                time: t + self.config.dt,
                detail: format!("node {} value {}", i % m, u[i]),
            });
        }
        for (id, chunk) in ids.iter().zip(u.chunks(m)) {
            self.states.get_mut(id).unwrap().copy_from_slice(chunk);
        }
        self.steps += 1;
        Ok(())
    }

    /// Indicator of one element with `L(u) = -u u_x`.
    pub fn indicator(&self, id: ElementId) -> Result<IndicatorValues> {
        let el = self.mesh.get(id).ok_or(Error::StaleId(id))?;
        let h = el.width(0);
        let n = self.set.len();
        let n0 = self.config.p0 + 1;
        let w = self.rule.weights();
        let rates = |u: &[f64]| {
            let ux = self.op.derivative(u, h);
            let l: Vec<f64> = u.iter().zip(&ux).map(|(u, ux)| -u * ux).collect();
            self.table.project(&l, w, n0, 1)
        };
        let u = &self.states[&id];
        let full = self.table.project(u, w, n, 1);
        let full_rates = rates(u);
        let reduced = full[..n0].to_vec();
        let reduced_rates = rates(&self.table.synthesize(&reduced, n0, 1));
        Ok(energy_transfer(
            ProjectedRates {
                components: 1,
                full_coeffs: &full,
                full_rates: &full_rates,
                reduced_coeffs: &reduced,
                reduced_rates: &reduced_rates,
            },
            &self.set,
            self.config.p0,
            &[1.0],
        ))
    }

    /// Splits every element whose weighted indicator reaches `TOL1`.
    pub fn refine(&mut self) -> Result<RefinementReport> {
        let time = self.time();
        let tol = self.config.tolerances;
        let mut report = RefinementReport {
            time,
            ..RefinementReport::default()
        };
        for id in self.ordered() {
            let values = self.indicator(id)?;
            let el: Element = self.mesh.get(id).unwrap().clone();
            let (q_hat, mut decision) = decide(&values, &el, &tol);
            if let Decision::Split(dims) = &decision {
                if self.mesh.len() + 1 > tol.max_elements {
                    decision = Decision::Skipped("max_elements".into());
                } else {
                    let kids = self.mesh.split_element(id, dims, time)?;
                    let parent = self.states.remove(&id).unwrap();
                    let coeffs = self.table.project(&parent, self.rule.weights(), self.set.len(), 1);
                    for k in kids {
                        let child = self.mesh.get(k).unwrap();
                        self.states
                            .insert(k, transfer_nodal(&el, &coeffs, &self.set, child, &self.rule, 1));
                    }
                }
            }
            if let Decision::Skipped(reason) = &decision {
                report
                    .warnings
                    .push(format!("t = {time}: element {id} not split ({reason})"));
            }
            report.rows.push(ReportRow {
                element: id,
                probability: el.probability(),
                q_total: values.q_total,
                q_hat,
                s1: values.s1,
                s2: values.s2,
                decision,
            });
        }
        Ok(report)
    }

    /// One step, then a refinement pass at check steps.
    pub fn step(&mut self) -> Result<Option<RefinementReport>> {
        self.propagate()?;
        if self.steps.is_multiple_of(self.config.check_interval as u64) && self.config.tolerances.refinement_enabled() {
            Ok(Some(self.refine()?))
        } else {
            Ok(None)
        }
    }

    pub fn advance_to(&mut self, t_end: f64) -> Result<Vec<RefinementReport>> {
        let mut reports = Vec::new();
        while self.time() < t_end - 0.5 * self.config.dt {
            if let Some(r) = self.step()? {
                reports.push(r);
            }
        }
        Ok(reports)
    }
}
