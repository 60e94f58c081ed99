//! Adaptive h-refinement for multi-element generalized polynomial chaos.
//!
//! The random input is a uniform vector on `[-1, 1]^d`, decomposed into
//! hypercube elements ([`random_space`]). On each element the solution is
//! represented either by gPC coefficients propagated with a pseudo-spectral
//! Galerkin projection, or by values at tensor Gauss-Legendre collocation
//! nodes ([`propagation`]). At every check the [`refinement`] module extracts
//! the element's spectral coefficients, measures how fast energy moves
//! between the degree-`p0` and degree-`p` parts of the expansion, and
//! bisects the elements where that rate, weighted by the element's
//! probability, crosses a tolerance. For `d ≥ 2` a per-dimension
//! decomposition of the same rate decides which directions to split.
//!
//! The same indicator drives physical-space refinement of a spectral-element
//! discretisation of the inviscid Burgers equation
//! ([`propagation::burgers`]).
//!
//! ```
//! use amr_gpc::models::LinearOde;
//! use amr_gpc::propagation::{StochasticSolver, SolverConfig};
//! use amr_gpc::refinement::{Tolerances, TriggerWeight};
//! use amr_gpc::reference::ode_exact_stats;
//!
//! let mut config = SolverConfig::with_degree(5).unwrap();
//! config.tolerances = Tolerances { tol1: 1e-1, weight: TriggerWeight::Unit, ..Tolerances::default() };
//! let mut solver = StochasticSolver::new(LinearOde::default(), &[1], config).unwrap();
//! solver.advance_to(2.0).unwrap();
//! let mean = solver.moments().mean[0];
//! let (exact, _) = ode_exact_stats(2.0, 1.0);
//! assert!((mean - exact).abs() / exact < 1e-4);
//! ```

pub mod basis;
pub mod error;
pub mod experiment;
pub mod io;
pub mod models;
pub mod propagation;
pub mod random_space;
pub mod reference;
pub mod refinement;

#[cfg(doctest)]
mod book;

pub use error::{Error, Result};
