use crate::basis::{gauss_legendre, legendre_orthonormal_all, GaussRule, MultiIndexSet};
use crate::random_space::{Element, ElementId};

/// Tensor-product Gauss-Legendre rule on the reference cube `[-1, 1]^d`.
///
/// Node `j` has 1D indices `(j_1, .., j_d)` with the first dimension varying
/// fastest. Shared by every element; mapping to an element is affine.
#[derive(Debug, Clone)]
pub struct TensorRule {
    dim: usize,
    rule: GaussRule,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TensorRule {
    pub fn new(dim: usize, r: usize) -> Self {
        let rule = gauss_legendre(r);
        let n = r.pow(dim as u32);
        let mut nodes = Vec::with_capacity(n * dim);
        let mut weights = Vec::with_capacity(n);
        for j in 0..n {
            let mut rem = j;
            let mut w = 1.0;
            for _ in 0..dim {
                let k = rem % r;
                rem /= r;
                nodes.push(rule.nodes[k]);
                w *= rule.weights[k];
            }
            weights.push(w);
        }
        Self {
            dim,
            rule,
            nodes,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per dimension.
    pub fn points_per_dim(&self) -> usize {
        self.rule.len()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn rule_1d(&self) -> &GaussRule {
        &self.rule
    }

    /// Local coordinates of node `j`.
    pub fn node(&self, j: usize) -> &[f64] {
        &self.nodes[j * self.dim..(j + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Maps every node into `element`.
    pub fn map_to(&self, element: &Element) -> CollocationGrid {
        let mut nodes = vec![0.0; self.nodes.len()];
        for j in 0..self.len() {
            element.to_global_into(self.node(j), &mut nodes[j * self.dim..(j + 1) * self.dim]);
        }
        CollocationGrid {
            element: element.id,
            dim: self.dim,
            nodes,
            local: self.nodes.clone(),
            weights: self.weights.clone(),
            nodes_1d: self.rule.nodes.clone(),
        }
    }
}

/// Tensor Gauss-Legendre nodes of one element in global coordinates, with
/// weights of the element's conditional (uniform) density.
#[derive(Debug, Clone)]
pub struct CollocationGrid {
    pub element: ElementId,
    dim: usize,
    nodes: Vec<f64>,
    local: Vec<f64>,
    weights: Vec<f64>,
    nodes_1d: Vec<f64>,
}

impl CollocationGrid {
    /// The 1D reference nodes the tensor grid is built from.
    pub fn nodes_1d(&self) -> &[f64] {
        &self.nodes_1d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, j: usize) -> &[f64] {
        &self.nodes[j * self.dim..(j + 1) * self.dim]
    }

    pub fn local_node(&self, j: usize) -> &[f64] {
        &self.local[j * self.dim..(j + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `r^d` tensor Gauss-Legendre nodes mapped into `element`.
pub fn tensor_grid(element: &Element, r: usize) -> CollocationGrid {
    TensorRule::new(element.dim(), r).map_to(element)
}

/// Values `Φ_k(z_j)` of a multi-index basis at a fixed set of local points,
/// stored row-major by point.
#[derive(Debug, Clone)]
pub struct BasisTable {
    n_points: usize,
    n_basis: usize,
    values: Vec<f64>,
}

impl BasisTable {
    pub fn new(set: &MultiIndexSet, points: impl Iterator<Item = Vec<f64>>) -> Self {
        let mut values = Vec::new();
        let mut n_points = 0;
        for z in points {
            values.extend(Self::eval_point(set, &z));
            n_points += 1;
        }
        Self {
            n_points,
            n_basis: set.len(),
            values,
        }
    }

    pub fn for_rule(set: &MultiIndexSet, rule: &TensorRule) -> Self {
        Self::new(set, (0..rule.len()).map(|j| rule.node(j).to_vec()))
    }

    /// `[Φ_k(z)]_k` at one local point.
    pub fn eval_point(set: &MultiIndexSet, z: &[f64]) -> Vec<f64> {
        let p = set.degree();
        let mut per_dim = vec![0.0; z.len() * (p + 1)];
        for (i, &x) in z.iter().enumerate() {
            legendre_orthonormal_all(x, &mut per_dim[i * (p + 1)..(i + 1) * (p + 1)]);
        }
        set.iter()
            .map(|idx| idx.iter().enumerate().map(|(i, &n)| per_dim[i * (p + 1) + n]).product())
            .collect()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_basis(&self) -> usize {
        self.n_basis
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.n_basis..(j + 1) * self.n_basis]
    }

    #[inline]
    pub fn at(&self, j: usize, k: usize) -> f64 {
        self.values[j * self.n_basis + k]
    }

    /// Discrete projection onto the first `n_out` basis functions.
    ///
    /// `values` is point-major with `s` components per point; the result is
    /// basis-major, `out[k * s + c] = Σ_j w_j Φ_k(z_j) values[j * s + c]`.
    pub fn project(&self, values: &[f64], weights: &[f64], n_out: usize, s: usize) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.n_points * s);
        debug_assert!(n_out <= self.n_basis);
        let mut out = vec![0.0; n_out * s];
        for (j, &w) in weights.iter().enumerate().take(self.n_points) {
            let row = self.row(j);
            let v = &values[j * s..(j + 1) * s];
            for k in 0..n_out {
                let a = w * row[k];
                let o = &mut out[k * s..(k + 1) * s];
                for (o, &v) in o.iter_mut().zip(v) {
                    *o += a * v;
                }
            }
        }
        out
    }

    /// Evaluates the expansion built from the first `n_in` basis functions at
    /// every point. Inverse layout of [`BasisTable::project`].
    pub fn synthesize(&self, coeffs: &[f64], n_in: usize, s: usize) -> Vec<f64> {
        debug_assert_eq!(coeffs.len(), n_in * s);
        let mut out = vec![0.0; self.n_points * s];
        for j in 0..self.n_points {
            let row = self.row(j);
            let o = &mut out[j * s..(j + 1) * s];
            for k in 0..n_in {
                let a = row[k];
                for (o, &c) in o.iter_mut().zip(&coeffs[k * s..(k + 1) * s]) {
                    *o += a * c;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_space::ElementMesh;

    fn element(lower: &[f64], upper: &[f64]) -> Element {
        Element {
            id: ElementId(0),
            lower: lower.to_vec(),
            upper: upper.to_vec(),
            depth: vec![0; lower.len()],
            parent: None,
        }
    }

    #[test]
    fn examples() {
        let g = tensor_grid(&element(&[-1.0], &[1.0]), 2);
        let x = 1.0 / 3f64.sqrt();
        assert!((g.node(0)[0] + x).abs() < 1e-15 && (g.node(1)[0] - x).abs() < 1e-15);

        let g = tensor_grid(&element(&[0.0], &[1.0]), 1);
        assert_eq!(g.node(0), &[0.5]);
        assert_eq!(g.weights(), &[1.0]);

        let g = tensor_grid(&element(&[0.0, -1.0], &[1.0, 0.0]), 3);
        assert_eq!(g.len(), 9);
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nodes_strictly_inside() {
        let mesh = ElementMesh::decompose_uniform(&[3, 2, 2]).unwrap();
        for e in mesh.elements() {
            let g = tensor_grid(e, 4);
            for j in 0..g.len() {
                let z = g.node(j);
                for (i, zi) in z.iter().enumerate() {
                    assert!(e.lower[i] < *zi && *zi < e.upper[i]);
                }
            }
        }
    }

    #[test]
    fn gram_matrix_is_identity() {
        for d in 1..=3 {
            for p in 0..=10 {
                if d == 3 && p > 6 {
                    // 3D p ≤ 10 is covered by the integration suite
                    continue;
                }
                let set = MultiIndexSet::total_degree(d, p);
                let rule = TensorRule::new(d, p + 1);
                let table = BasisTable::for_rule(&set, &rule);
                for a in 0..set.len() {
                    for b in 0..=a {
                        let g: f64 = (0..rule.len())
                            .map(|j| table.at(j, a) * table.at(j, b) * rule.weights()[j])
                            .sum();
                        let want = if a == b { 1.0 } else { 0.0 };
                        assert!((g - want).abs() < 1e-12, "d={d} p={p} a={a} b={b} g={g}");
                    }
                }
            }
        }
    }
}
