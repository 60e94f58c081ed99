//! Orthonormal Legendre bases, Gauss-Legendre rules, total-degree index sets,
//! tensor collocation grids and the two element-local interpolants.
//!
//! Everything here is normalised against the *probability* density of the
//! reference cube, `2^-d` on `[-1, 1]^d`: quadrature weights sum to one and
//! `E[Φ_i Φ_j] = δ_ij`.

mod grid;
mod interp;
mod legendre;
mod multi_index;
mod quadrature;

pub use grid::{tensor_grid, BasisTable, CollocationGrid, TensorRule};
pub use interp::{
    barycentric_weights, differentiation_matrix, eval_gpc, gpc_coeffs_from_nodes, lagrange_basis_1d,
    lagrange_interpolate,
};
pub use legendre::{legendre_orthonormal, legendre_orthonormal_all, legendre_orthonormal_with_derivative};
pub use multi_index::{binomial, MultiIndexSet};
pub use quadrature::{gauss_legendre, GaussRule};
