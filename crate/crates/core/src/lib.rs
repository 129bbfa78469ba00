//! Cost estimation toolkit for continuous rotations on surface codes.
//!
//! The crate has two halves. The numeric half ([`costmodel`], [`planner`],
//! [`rusdepth`], [`scenarios`]) evaluates closed-form surface-code cost
//! formulas: logical error rates, code distances, distillation-factory
//! footprints, spacetime volumes and amortized T-counts for three rotation
//! strategies (direct Clifford+T synthesis, in-circuit catalyst towers and
//! independent catalyst towers). The verification half ([`statevec`],
//! [`gadgets`]) checks the catalyst circuit gadgets behind those counts by
//! exact dense statevector simulation with full measurement-branch
//! enumeration.

pub mod cli;
pub mod costmodel;
pub mod error;
pub mod gadgets;
pub mod planner;
pub mod rusdepth;
pub mod scenarios;
pub mod statevec;

pub use error::{Error, Result};
