//! Exact Haar-measure verification on finite topological groups and on the
//! seminorm plane.
//!
//! Finite spaces are stored through minimal neighbourhoods, groups through
//! Cayley tables, and every number is an exact rational.

pub mod covering;
pub mod function;
pub mod group;
pub mod linalg;
pub mod measure;
pub mod plane;
pub mod quotient;
pub mod rational;
pub mod report;
pub mod topology;

/// Largest atom count for which checks enumerate every union of atoms.
/// Above it, checks run on minimal neighbourhoods and atoms only and
/// reports set `exhaustive: false`.
pub const EXHAUSTIVE_ATOM_LIMIT: usize = 16;

pub use function::PointFunction;
pub use group::{BorelAtoms, FiniteGroup, FiniteTopGroup, GroupError, Side};
pub use measure::{FiniteMeasure, HaarReport, MeasureError};
pub use rational::Rational;
pub use topology::{FiniteSpace, Subset, TopologyError};
