//! Numerical laboratory for a one-dimensional stabilizer chain competing
//! with an antiferromagnetic two-site coupling.
//!
//! The Hamiltonian under study is
//!
//! H(λ) = −Σ_i σ^x_{i−1} σ^z_i σ^x_{i+1} + λ Σ_i σ^y_i σ^y_{i+1},
//!
//! whose λ = 0 ground state is a cluster state stabilized by the three-site
//! terms and whose large-λ phase orders antiferromagnetically in σ^y. The
//! crate provides exact diagonalization on short chains, a free-fermion
//! solution via a Jordan-Wigner transformation, a bond-algebra duality, the
//! emergent two-copy Pauli algebra built from string operators, geometric
//! entanglement of the ground state, and a mean-field treatment of the
//! cluster phase on hypercubic lattices.

pub mod cli;
pub mod duality;
pub mod ed;
pub mod entanglement;
pub mod error;
pub mod fermion;
pub mod meanfield;
pub mod model;
pub mod pauli;
pub mod symmetry;

#[cfg(test)]
pub(crate) mod testkit;

pub use error::{Error, Result};

/// Largest chain length for which dense 2^N state vectors are supported.
pub const MAX_SITES: usize = 24;

/// Largest chain length for which dense 2^N x 2^N matrices are built;
/// beyond this the iterative matrix-free solver takes over.
pub const DENSE_MAX_SITES: usize = 12;
