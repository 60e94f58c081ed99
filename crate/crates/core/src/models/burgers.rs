use crate::basis::{barycentric_weights, differentiation_matrix, gauss_legendre, lagrange_basis_1d};
use crate::error::{Error, Result};

/// Element-local operator for `u_t + (u²/2)_x = 0` on Gauss-Legendre nodes.
///
/// Within an element the flux is differentiated spectrally; the mismatch
/// between the interpolated boundary flux and the flux of the shared
/// interface value is fed back through the boundary Lagrange functions
/// (strong-form nodal discontinuous Galerkin). A constant state with
/// matching interface values is an exact steady state.
#[derive(Debug, Clone)]
pub struct BurgersElementOperator {
    nodes: Vec<f64>,
    /// Reference-cube weights summing to 2.
    weights: Vec<f64>,
    diff: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl BurgersElementOperator {
    pub fn new(points: usize) -> Self {
        let rule = gauss_legendre(points);
        let bary = barycentric_weights(&rule.nodes);
        Self {
            diff: differentiation_matrix(&rule.nodes),
            left: lagrange_basis_1d(&rule.nodes, &bary, -1.0),
            right: lagrange_basis_1d(&rule.nodes, &bary, 1.0),
            weights: rule.weights.iter().map(|w| 2.0 * w).collect(),
            nodes: rule.nodes,
        }
    }

    pub fn points(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Extrapolated one-sided values `(u(-1), u(+1))` of the nodal polynomial.
    pub fn boundary_values(&self, u: &[f64]) -> (f64, f64) {
        let dot = |l: &[f64]| l.iter().zip(u).map(|(a, b)| a * b).sum::<f64>();
        (dot(&self.left), dot(&self.right))
    }

    /// `u_x` at the nodes of an element of length `h`.
    pub fn derivative(&self, u: &[f64], h: f64) -> Vec<f64> {
        let n = self.nodes.len();
        (0..n)
            .map(|j| 2.0 / h * (0..n).map(|k| self.diff[j * n + k] * u[k]).sum::<f64>())
            .collect()
    }

    /// `du/dt` at the nodes of an element of length `h`, given the shared
    /// interface values on its left and right edges.
    pub fn rhs(&self, u: &[f64], h: f64, left: f64, right: f64, du: &mut [f64]) {
        let n = self.nodes.len();
        let flux: Vec<f64> = u.iter().map(|v| 0.5 * v * v).collect();
        let dot = |l: &[f64]| l.iter().zip(&flux).map(|(a, b)| a * b).sum::<f64>();
        let jump_left = 0.5 * left * left - dot(&self.left);
        let jump_right = 0.5 * right * right - dot(&self.right);
        let scale = 2.0 / h;
        for (j, d) in du.iter_mut().enumerate().take(n) {
            let df: f64 = self.diff[j * n..(j + 1) * n]
                .iter()
                .zip(&flux)
                .map(|(a, b)| a * b)
                .sum();
            let lift = (self.right[j] * jump_right - self.left[j] * jump_left) / self.weights[j];
            *d = -scale * (df + lift);
        }
    }
}

/// Checked form of [`BurgersElementOperator::rhs`]: both interface values
/// must be supplied.
pub fn burgers_element_rhs(
    op: &BurgersElementOperator,
    u: &[f64],
    h: f64,
    left: Option<f64>,
    right: Option<f64>,
) -> Result<Vec<f64>> {
    let (Some(l), Some(r)) = (left, right) else {
        return Err(Error::IncompleteCoupling(format!(
            "interface values missing (left: {left:?}, right: {right:?})"
        )));
    };
    if u.len() != op.points() {
        return Err(Error::InvalidArgument(format!(
            "{} nodal values for a {}-point element",
            u.len(),
            op.points()
        )));
    }
    let mut du = vec![0.0; u.len()];
    op.rhs(u, h, l, r, &mut du);
    Ok(du)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_constant_states() {
        let op = BurgersElementOperator::new(6);
        let du = burgers_element_rhs(&op, &[0.0; 6], 0.5, Some(0.0), Some(0.0)).unwrap();
        assert!(du.iter().all(|&v| v == 0.0));
        let du = burgers_element_rhs(&op, &[0.7; 6], 0.5, Some(0.7), Some(0.7)).unwrap();
        assert!(du.iter().all(|&v| v.abs() < 1e-13), "{du:?}");
    }

    #[test]
    fn missing_neighbour() {
        let op = BurgersElementOperator::new(4);
        assert!(matches!(
            burgers_element_rhs(&op, &[0.0; 4], 1.0, None, Some(0.0)),
            Err(Error::IncompleteCoupling(_))
        ));
    }

    #[test]
    fn smooth_interior_matches_minus_u_ux() {
        // consistent interface values: rhs equals -u u_x for a polynomial u
        let op = BurgersElementOperator::new(8);
        let h = 0.5;
        let u: Vec<f64> = op.nodes().iter().map(|z| 0.3 + 0.2 * z).collect();
        let (l, r) = op.boundary_values(&u);
        let mut du = vec![0.0; 8];
        op.rhs(&u, h, l, r, &mut du);
        for (j, z) in op.nodes().iter().enumerate() {
            let (v, vx) = (0.3 + 0.2 * z, 0.2 * 2.0 / h);
            assert!((du[j] + v * vx).abs() < 1e-12);
        }
    }
}
