use crate::basis::{BasisTable, MultiIndexSet, TensorRule};
use crate::propagation::{Discretization, GpcState, Mode};
use crate::random_space::Element;

/// Evaluates the parent expansion (`coeffs`, basis-major with `s` components)
/// at the nodes of `rule` mapped into `child`. Point-major result.
pub fn transfer_nodal(
    parent: &Element,
    coeffs: &[f64],
    set: &MultiIndexSet,
    child: &Element,
    rule: &TensorRule,
    s: usize,
) -> Vec<f64> {
    let table = BasisTable::new(
        set,
        (0..rule.len()).map(|j| parent.to_local(&child.to_global(rule.node(j)))),
    );
    table.synthesize(coeffs, set.len(), s)
}

/// Child coefficients: child-local quadrature projection of the parent
/// expansion. `table` is `set` tabulated on `rule`.
pub fn transfer_coefficients(
    parent: &Element,
    coeffs: &[f64],
    set: &MultiIndexSet,
    child: &Element,
    rule: &TensorRule,
    table: &BasisTable,
    s: usize,
) -> Vec<f64> {
    let values = transfer_nodal(parent, coeffs, set, child, rule, s);
    table.project(&values, rule.weights(), set.len(), s)
}

/// States of `children` obtained from the parent's gPC expansion.
///
/// Collocation children take the expansion's values at their nodes; Galerkin
/// children take its projection onto their local basis. A co-evolved reduced
/// system is transferred the same way at degree `p0`.
pub fn transfer_children(
    parent: &Element,
    state: &GpcState,
    children: &[&Element],
    disc: &Discretization,
) -> Vec<GpcState> {
    let s = disc.components;
    let full = disc.coefficients(state);
    let reduced = disc.reduced_coefficients(state);
    children
        .iter()
        .map(|child| match state.mode() {
            Mode::Collocation => GpcState::collocation(
                transfer_nodal(parent, &full, &disc.set, child, &disc.rule, s),
                reduced
                    .as_ref()
                    .map(|r| transfer_nodal(parent, r, &disc.reduced_set, child, &disc.reduced_rule, s)),
            ),
            Mode::Galerkin => GpcState::galerkin(
                transfer_coefficients(parent, &full, &disc.set, child, &disc.rule, &disc.table, s),
                reduced.as_ref().map(|r| {
                    let vals = transfer_nodal(parent, r, &disc.reduced_set, child, &disc.rule, s);
                    disc.table
                        .project(&vals, disc.rule.weights(), disc.reduced_set.len(), s)
                }),
            ),
        })
        .collect()
}
