//! Numerics for the Painlevé IV critical regime of a normal matrix model: the τ-function
//! as a Nyström-discretized Fredholm determinant, planar orthogonal polynomials through
//! complex moments, the critical curves of the model, and zero/asymptotic diagnostics.

pub mod error;
pub mod quadrature;
pub mod format;
pub mod geometry;
pub mod mp;
pub mod orthopoly;
pub mod zeros;
pub mod tau;

pub use error::{Error, Result};
