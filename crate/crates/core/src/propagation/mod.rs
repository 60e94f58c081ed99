//! Time integration of element systems in random (and physical) space.

pub mod burgers;
mod discretization;
mod ks;
mod rk4;
mod stochastic;

pub use burgers::{burgers_interface_exchange, BurgersConfig, BurgersSolver};
pub use discretization::{Discretization, GpcState};
pub use ks::ks_semi_implicit_step;
pub use rk4::{first_blowup, rk4_step, rk4_step_checked, BLOWUP_THRESHOLD};
pub use stochastic::{evolve_element_collocation, evolve_element_galerkin, Moments, SolverConfig, StochasticSolver};

use crate::error::{Error, Result};

/// How element solutions are represented and advanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Nodal values at tensor Gauss points, each advanced independently.
    #[default]
    Collocation,
    /// gPC coefficients advanced by the projected (Galerkin) system.
    Galerkin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationConfig {
    pub mode: Mode,
    pub dt: f64,
    pub t_final: f64,
    /// Steps between refinement checks.
    pub check_interval: usize,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Collocation,
            dt: 0.01,
            t_final: 1.0,
            check_interval: 1,
        }
    }
}

impl PropagationConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            errs.push(format!("dt must be positive, got {}", self.dt));
        }
        if self.t_final.is_nan() || self.t_final < 0.0 {
            errs.push(format!("t_final must be non-negative, got {}", self.t_final));
        }
        if self.check_interval == 0 {
            errs.push("check_interval must be at least 1".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }
}
