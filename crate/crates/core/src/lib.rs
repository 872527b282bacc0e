//! Finite-scale experiments on distributional chaos: orbit-distance
//! statistics, symbolic shift spaces, a comb dendrite map with exact
//! rational arithmetic and Gehman-style dendrites.

pub mod chaoscore;
pub mod combdendrite;
pub mod error;
pub mod gehman;
pub mod lab;
pub mod rational;
pub mod shiftspace;
pub mod svg;

pub use error::{DcError, Result};
pub use rational::Rational;
