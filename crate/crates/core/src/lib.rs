//! Symmetric Weierstrass elliptic functions on tori, induced involutions,
//! the γ function, the Weierstrass representation of minimal surfaces and
//! the doubly periodic field of catenoids built from them.

pub mod cx;
pub mod elliptic;
pub mod error;
pub mod exec;
pub mod field;
pub mod gamma;
pub mod lattice;
pub mod minrep;
pub mod mobius;
pub mod quadrature;

pub use error::{Error, Result};
pub use exec::Execution;
pub use lattice::{Lattice, TorusPoint, TorusShape};
pub use num_complex::Complex64;
