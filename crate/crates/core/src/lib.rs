//! Desk-scale machinery for metric big Ramsey degrees.
//!
//! The crate has five workhorse modules and a CLI layer:
//!
//! - [`geometry`]: exact symmetric convex polytopes in the sup-normed cube,
//!   hulls, membership, point and Hausdorff distances;
//! - [`pumpkin`]: growth chains of symmetric bodies, the tuple colouring
//!   into them, a certified chain metric, and witness construction;
//! - [`lipschitz`]: finite metric spaces, the 1-Lipschitz-surjection
//!   quasiorder, isometry testing and factorization search;
//! - [`embeddings`]: linear isometric embeddings between finite sup-normed
//!   spaces, tuple transport, and the support-intertwining colouring;
//! - [`harness`]: rigid surjections, combinatorial-line checks, and
//!   brute-force colour counts over copy systems.
//!
//! Everything is exact rational ([`scalar::Scalar`]); floats only appear in
//! display-convenience output fields.

pub mod cli;
pub mod embeddings;
pub mod geometry;
pub mod harness;
pub mod lipschitz;
pub mod pumpkin;
pub mod report;
pub mod scalar;
pub mod simplex;

/// Library version string, echoed in CLI reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use geometry::{Interval, PointD, SymPolytope};
pub use pumpkin::{Pumpkin, PumpkinDiagnosis, PumpkinSpaceParams, TupleLinf};
pub use scalar::Scalar;
