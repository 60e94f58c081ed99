//! Right-hand sides of the benchmark systems.
//!
//! A [`Model`] is a deterministic system `du/dt = L(t, u; ξ)` evaluated at a
//! fixed realization `ξ ∈ [-1, 1]^d` of the random input. State vectors are
//! laid out variable-major: `u[var * n_dof + dof]`.

mod burgers;
mod ko;
mod ks;
mod linear_ode;

pub use burgers::{burgers_element_rhs, BurgersElementOperator};
pub use ko::{ko_rhs, KoSetup, KraichnanOrszag};
pub use ks::{ks_initial_condition, ks_rhs, KuramotoSivashinsky};
pub use linear_ode::{linear_ode_rhs, LinearOde};

use crate::propagation::rk4_step;

/// A deterministic system parameterised by a point of the random domain.
pub trait Model: Send + Sync {
    fn name(&self) -> &str;

    /// Dimension `d` of the random input.
    fn random_dim(&self) -> usize;

    /// Number of state variables per spatial degree of freedom.
    fn n_vars(&self) -> usize;

    /// Spatial degrees of freedom (1 for ODEs).
    fn n_dof(&self) -> usize {
        1
    }

    fn state_len(&self) -> usize {
        self.n_vars() * self.n_dof()
    }

    fn initial_state(&self, xi: &[f64], out: &mut [f64]);

    fn rhs(&self, t: f64, u: &[f64], xi: &[f64], du: &mut [f64]);

    /// Advances `u` from `t` to `t + dt`. Classical RK4 unless overridden.
    fn step(&self, t: f64, dt: f64, u: &mut [f64], xi: &[f64]) {
        rk4_step(u, t, dt, |t, y, dy| self.rhs(t, y, xi, dy));
    }

    /// Quadrature weights for `∫_D · dx` over the spatial grid.
    fn dof_weights(&self) -> Vec<f64> {
        vec![1.0; self.n_dof()]
    }
}

impl<M: Model + ?Sized> Model for Box<M> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn random_dim(&self) -> usize {
        (**self).random_dim()
    }
    fn n_vars(&self) -> usize {
        (**self).n_vars()
    }
    fn n_dof(&self) -> usize {
        (**self).n_dof()
    }
    fn initial_state(&self, xi: &[f64], out: &mut [f64]) {
        (**self).initial_state(xi, out)
    }
    fn rhs(&self, t: f64, u: &[f64], xi: &[f64], du: &mut [f64]) {
        (**self).rhs(t, u, xi, du)
    }
    fn step(&self, t: f64, dt: f64, u: &mut [f64], xi: &[f64]) {
        (**self).step(t, dt, u, xi)
    }
    fn dof_weights(&self) -> Vec<f64> {
        (**self).dof_weights()
    }
}
