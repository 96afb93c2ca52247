//! Exact and asymptotic analytics for linear extensions of finite posets.
//!
//! The crate is organised around one interchange type, [`Poset`], a strict
//! partial order on `0..n` stored as a transitively closed relation.
//!
//! - [`poset`] and [`construct`]: representation, structural statistics
//!   (comparable pairs, height, width, levels) and the standard chain,
//!   antichain and Boolean-lattice families.
//! - [`count`]: exact linear-extension counting over order ideals, a
//!   permutation oracle, hook lengths and acyclic-orientation profiles.
//! - [`bounds`]: closed-form upper and lower bounds on the number of linear
//!   extensions at a given density of comparable pairs, evaluated in log space.
//! - [`entropy`]: clique polytopes, graph entropy and the Monte Carlo volume
//!   estimate of the extension count.
//! - [`random`]: random interval and k-dimensional orders and the dyadic
//!   antichain decomposition of interval families.
//! - [`extremal`]: exhaustive enumeration of labeled posets and the exact
//!   extremal tables built from it.

pub mod bounds;
pub mod construct;
pub mod count;
pub mod entropy;
mod error;
pub mod extremal;
pub mod limits;
pub mod poset;
pub mod random;
mod rng;

pub use bounds::{BoundsReport, Density, LogValue};
pub use count::BigCount;
pub use error::{Error, Result};
pub use limits::Limits;
pub use poset::{LevelPartition, Poset};
