//! Exact Ehrhart-theoretic computations for lattice simplices.
//!
//! The h*-polynomial of a lattice simplex is read off from its group of
//! box points (fractional barycentric weights whose combination of the
//! vertices is a lattice point). Everything here is exact: integers are
//! arbitrary precision and rationals are reduced fractions.
//!
//! Module map:
//!
//! * [`linalg`]: integer matrices, Hermite and Smith normal forms,
//!   determinants and rational solves.
//! * [`simplex`]: validated lattice simplices, faces and their reduction
//!   to full-dimensional coordinates.
//! * [`box_group`]: enumeration and arithmetic of the box-point group.
//! * [`hstar`]: h*-vectors, Ehrhart evaluation and structural facts.
//! * [`oracle`]: brute-force lattice point counting used to cross-check
//!   the box-group path.
//! * [`theorem`]: low-height subgroup, face extraction and its
//!   certificates.
//! * [`conditions`]: checkers for known inequalities and
//!   non-realizability certificates on h*-vectors.
//! * [`constructions`]: joins and the standard example families.

pub mod box_group;
pub mod conditions;
pub mod constructions;
mod error;
pub mod hstar;
pub mod linalg;
pub mod oracle;
pub mod simplex;
pub mod theorem;

pub use box_group::{BoxGroup, BoxPoint, DEFAULT_VOLUME_CAP};
pub use error::{Error, Result};
pub use hstar::HStarVector;
pub use linalg::IntMatrix;
pub use simplex::{FaceSelector, LatticeSimplex};
