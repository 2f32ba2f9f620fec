//! Finite groups, Cayley graphs, and exact certification of integral spectra.

pub mod catalog;
pub mod error;
pub mod group;
pub mod integrality;
pub mod cayley;
pub mod linalg;
pub mod repcheck;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use group::{ElementSet, FiniteGroup, Quotient, MAX_ORDER};
pub use linalg::{IntMatrix, IntPolynomial};
