use crate::basis::{BasisTable, CollocationGrid, MultiIndexSet};
use crate::error::{Error, Result};

/// Discrete projection `û_k = Σ_j u(z_j) Φ_k(z_j) w_j` of nodal values onto
/// the orthonormal basis, with `Φ` evaluated in element-local coordinates.
pub fn gpc_coeffs_from_nodes(values: &[f64], grid: &CollocationGrid, set: &MultiIndexSet) -> Result<Vec<f64>> {
    if values.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "{} nodal values for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    let mut coeffs = vec![0.0; set.len()];
    for (j, (&v, &w)) in values.iter().zip(grid.weights()).enumerate() {
        let phi = BasisTable::eval_point(set, grid.local_node(j));
        for (c, f) in coeffs.iter_mut().zip(phi) {
            *c += v * w * f;
        }
    }
    Ok(coeffs)
}

/// `Σ_k û_k Φ_k(ξ)` at a local point.
pub fn eval_gpc(coeffs: &[f64], set: &MultiIndexSet, xi: &[f64]) -> f64 {
    BasisTable::eval_point(set, xi)
        .iter()
        .zip(coeffs)
        .map(|(f, c)| f * c)
        .sum()
}

/// Barycentric weights `λ_j = 1 / Π_{k≠j} (x_j - x_k)`.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            1.0 / nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &xk)| xj - xk)
                .product::<f64>()
        })
        .collect()
}

/// Values of the 1D Lagrange cardinal functions at `x` (second barycentric form).
pub fn lagrange_basis_1d(nodes: &[f64], bary: &[f64], x: f64) -> Vec<f64> {
    if let Some(j) = nodes.iter().position(|&xj| xj == x) {
        let mut out = vec![0.0; nodes.len()];
        out[j] = 1.0;
        return out;
    }
    let terms: Vec<f64> = nodes.iter().zip(bary).map(|(&xj, &l)| l / (x - xj)).collect();
    let denom: f64 = terms.iter().sum();
    terms.into_iter().map(|t| t / denom).collect()
}

/// Tensor-product Lagrange interpolant of nodal values at a local point.
pub fn lagrange_interpolate(values: &[f64], grid: &CollocationGrid, xi: &[f64]) -> f64 {
    let nodes = grid.nodes_1d();
    let r = nodes.len();
    let bary = barycentric_weights(nodes);
    let per_dim: Vec<Vec<f64>> = xi.iter().map(|&x| lagrange_basis_1d(nodes, &bary, x)).collect();
    let mut total = 0.0;
    for (j, &v) in values.iter().enumerate() {
        let mut rem = j;
        let mut weight = 1.0;
        for l in &per_dim {
            weight *= l[rem % r];
            rem /= r;
        }
        total += weight * v;
    }
    total
}

/// `D[j][k] = ℓ_k'(x_j)`, row-major.
pub fn differentiation_matrix(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let bary = barycentric_weights(nodes);
    let mut d = vec![0.0; n * n];
    for j in 0..n {
        let mut diag = 0.0;
        for k in 0..n {
            if k != j {
                let v = (bary[k] / bary[j]) / (nodes[j] - nodes[k]);
                d[j * n + k] = v;
                diag -= v;
            }
        }
        d[j * n + j] = diag;
    }
    d
}
