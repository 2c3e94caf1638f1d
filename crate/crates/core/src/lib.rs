#![forbid(unsafe_code)]
//! Exact-arithmetic toolkit for toric varieties over small prime fields.
//!
//! The crate builds toric varieties from lattice fans, realizes the explicit
//! monomial Frobenius lift over length-2 Witt vectors, and verifies the two
//! classical consequences of that lift — vanishing of twisted differential
//! forms for ample divisors and degeneration of the Hodge-to-de Rham spectral
//! sequence — by exact graded Čech cohomology. A separate oracle module
//! reproduces quadric and incidence-variety non-vanishing values through long
//! exact sequence dimension chasing.
//!
//! All arithmetic is exact: lattice geometry over the integers, coefficients
//! in 𝔽ₚ or W₂(𝔽ₚ). No floating point anywhere.

pub mod cech;
pub mod config;
pub mod divisor;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod fp;
pub mod intmat;
pub mod lattice;
pub mod linalg;
pub mod monomial;
pub mod oracle;
pub mod witt;

pub use config::SessionConfig;
pub use error::{Error, Result};
