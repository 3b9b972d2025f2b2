//! Equal-time spin-spin correlator of the periodic XX chain.
//!
//! The correlator `G(x) = <σ⁺_{i+x} σ⁻_i>` is computed by three independent
//! routes on a finite ring (or in the thermodynamic limit):
//!
//! * [`oracle`]: exact diagonalization of the spin Hamiltonian on small rings,
//! * [`exact::correlator_det`]: the Wick (Toeplitz) determinant of free-fermion
//!   contractions,
//! * [`exact::correlator`]: the closed-form Cauchy sine product, accumulated in
//!   log space.
//!
//! [`asymptotics`] holds the bosonization predictions and [`constants`] the
//! amplitude machinery (polygamma series, the integral representation, the
//! Γ-product and Barnes-G routes, the Glaisher constant).

pub mod asymptotics;
pub mod constants;
pub mod error;
pub mod exact;
pub mod greens;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod sum;

pub use error::{Error, Result};
pub use greens::Lattice;
