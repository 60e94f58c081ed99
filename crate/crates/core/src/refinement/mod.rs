//! Scale-transfer refinement indicator and the split decision.
//!
//! For an element with full coefficients `û` (degree `p`) and reduced
//! coefficients `ũ` (degree `p0 < p`), the indicator is the rate of change of
//! the energy gap between the two truncations,
//!
//! ```text
//! Q = 2 Σ_{|j|≤p0} ⟨L(Σ_{|i|≤p} û_i Φ_i), Φ_j⟩ û_j − 2 Σ_{|j|≤p0} ⟨L(Σ_{|i|≤p0} ũ_i Φ_i), Φ_j⟩ ũ_j,
//! ```
//!
//! integrated as `∫_D |Q| dx` over the spatial grid and summed over state
//! variables. An element is split once that quantity, weighted by the
//! element's probability, reaches `TOL1`. In `d ≥ 2` the terms belonging to
//! the univariate indices `n·e_i` rank the dimensions.

mod decision;
mod indicator;
mod policy;
mod report;
mod transfer;

pub use decision::decide;
pub use indicator::{energy_transfer, truncated_energy, IndicatorValues, ProjectedRates};
pub use policy::{Criterion, ReducedOrderPolicy, Tolerances, TriggerWeight, Variant};
pub use report::{Decision, RefinementReport, ReportRow};
pub use transfer::{transfer_children, transfer_coefficients, transfer_nodal};

use crate::basis::{BasisTable, TensorRule};
use crate::models::Model;
use crate::propagation::{Discretization, GpcState, Mode, StochasticSolver};
use crate::random_space::Element;

/// Runs one refinement check on `solver`, splitting every triggered element.
pub fn refine_step<M: Model>(solver: &mut StochasticSolver<M>) -> RefinementReport {
    solver.refine()
}

/// `⟨L(u), Φ_k⟩` for `k < n_out` by quadrature on `rule` mapped into
/// `element`, from point-major nodal values.
fn projected_rates<M: Model + ?Sized>(
    model: &M,
    element: &Element,
    rule: &TensorRule,
    table: &BasisTable,
    nodal: &[f64],
    n_out: usize,
    t: f64,
) -> Vec<f64> {
    let s = nodal.len() / rule.len();
    let mut rates = vec![0.0; nodal.len()];
    let mut xi = vec![0.0; element.dim()];
    for j in 0..rule.len() {
        element.to_global_into(rule.node(j), &mut xi);
        model.rhs(t, &nodal[j * s..(j + 1) * s], &xi, &mut rates[j * s..(j + 1) * s]);
    }
    table.project(&rates, rule.weights(), n_out, s)
}

/// `Q`, `𝐐`, `s¹` and `s²` of one element at time `t`.
///
/// The full-system rate applies the model to the element's nodal solution
/// (collocation) or to its synthesised expansion (Galerkin). The reduced rate
/// applies it to the degree-`p0` expansion: the truncation of `û` for the
/// single-system variant, the co-evolved reduced system otherwise.
pub fn indicator_q<M: Model + ?Sized>(
    model: &M,
    disc: &Discretization,
    element: &Element,
    state: &GpcState,
    t: f64,
) -> IndicatorValues {
    let s = disc.components;
    let n0 = disc.reduced_set.len();
    let (rule, table) = (&disc.rule, &disc.table);

    let full_coeffs = disc.coefficients(state);
    let full_nodal = disc.nodal_values(state);
    let full_rates = projected_rates(model, element, rule, table, &full_nodal, n0, t);

    let (reduced_coeffs, reduced_rates) = match disc.reduced_coefficients(state) {
        None if n0 == disc.set.len() && state.mode() == Mode::Collocation => {
            // p0 = p: the reduced system is the full one.
            (full_coeffs.clone(), full_rates.clone())
        }
        None => {
            let trunc = full_coeffs[..n0 * s].to_vec();
            let nodal = table.synthesize(&trunc, n0, s);
            let rates = projected_rates(model, element, rule, table, &nodal, n0, t);
            (trunc, rates)
        }
        Some(red) => {
            let rates = match state.mode() {
                Mode::Collocation => projected_rates(
                    model,
                    element,
                    &disc.reduced_rule,
                    &disc.reduced_table,
                    state.reduced().expect("reduced state"),
                    n0,
                    t,
                ),
                Mode::Galerkin => {
                    let nodal = table.synthesize(&red, n0, s);
                    projected_rates(model, element, rule, table, &nodal, n0, t)
                }
            };
            (red, rates)
        }
    };

    energy_transfer(
        ProjectedRates {
            components: s,
            full_coeffs: &full_coeffs,
            full_rates: &full_rates,
            reduced_coeffs: &reduced_coeffs,
            reduced_rates: &reduced_rates,
        },
        &disc.set,
        disc.policy.p0,
        &model.dof_weights(),
    )
}
