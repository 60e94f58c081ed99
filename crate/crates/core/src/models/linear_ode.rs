use crate::models::Model;

/// `du/dt = -κ u` with decay rate `κ = ξ ~ U(-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearOde {
    pub u0: f64,
}

impl Default for LinearOde {
    fn default() -> Self {
        Self { u0: 1.0 }
    }
}

pub fn linear_ode_rhs(u: f64, kappa: f64) -> f64 {
    -kappa * u
}

impl Model for LinearOde {
    fn name(&self) -> &str {
        "ode"
    }

    fn random_dim(&self) -> usize {
        1
    }

    fn n_vars(&self) -> usize {
        1
    }

    fn initial_state(&self, _xi: &[f64], out: &mut [f64]) {
        out[0] = self.u0;
    }

    fn rhs(&self, _t: f64, u: &[f64], xi: &[f64], du: &mut [f64]) {
        du[0] = linear_ode_rhs(u[0], xi[0]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(linear_ode_rhs(1.0, 0.0), 0.0);
        assert_eq!(linear_ode_rhs(2.0, -1.0), 2.0);
    }

    #[test]
    fn exact_solution_satisfies_rhs() {
        let (u0, h) = (1.0, 1e-6);
        for &kappa in &[-1.0, -0.3, 0.0, 0.8] {
            for &t in &[0.0, 0.5, 3.0] {
                let u = |t: f64| u0 * f64::exp(-kappa * t);
                let fd = (u(t + h) - u(t - h)) / (2.0 * h);
                assert!((fd - linear_ode_rhs(u(t), kappa)).abs() < 1e-8);
            }
        }
    }
}
