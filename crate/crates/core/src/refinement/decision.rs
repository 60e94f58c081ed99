use super::indicator::IndicatorValues;
use super::policy::{Criterion, Tolerances, TriggerWeight};
use super::report::Decision;
use crate::random_space::Element;

/// Split decision for one element, ignoring the mesh-size guard.
///
/// Returns `(q_hat, decision)`. Both comparisons are inclusive. Dimensions
/// already at `max_depth` are dropped; if none remain the element is skipped.
pub fn decide(values: &IndicatorValues, element: &Element, tol: &Tolerances) -> (f64, Decision) {
    let q_hat = match tol.weight {
        TriggerWeight::Probability => values.q_total * element.probability(),
        TriggerWeight::Unit => values.q_total,
    };
    if q_hat.is_nan() || q_hat < tol.tol1 {
        return (q_hat, Decision::Keep);
    }
    let d = element.dim();
    let dims: Vec<usize> = if d == 1 {
        vec![0]
    } else {
        let crit = match tol.criterion {
            Criterion::S1 => &values.s1,
            Criterion::S2 => &values.s2,
        };
        let max = crit.iter().cloned().fold(0.0_f64, f64::max);
        if max > 0.0 {
            (0..d).filter(|&i| crit[i] >= tol.tol2 * max).collect()
        } else {
            // No directional signal: treat every dimension alike.
            (0..d).collect()
        }
    };
    let open: Vec<usize> = dims
        .iter()
        .copied()
        .filter(|&i| element.depth[i] < tol.max_depth)
        .collect();
    if open.is_empty() {
        return (q_hat, Decision::Skipped("max_depth".into()));
    }
    (q_hat, Decision::Split(open))
}
