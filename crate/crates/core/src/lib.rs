//! Constrained polynomial logical zonotopes and their two ancestors, with
//! generator-space logic, exact intersection, point enumeration and
//! reachability analysis of boolean networks.

pub mod bench;
pub mod bits;
pub mod error;
pub mod netlang;
pub mod oracle;
pub mod reach;
pub mod setreps;

pub use bits::{BitMatrix, BitVector, Gate};
pub use error::{Error, Result};
pub use oracle::{EnumerationBudget, PointSet};
pub use setreps::{Cplz, IdAllocator, Lz, OpMode, Plz};
