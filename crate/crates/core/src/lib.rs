//! Planner, verifier and scheduler for all-to-all comparison (ATAC) data
//! distributions on compute clusters.
//!
//! An ATAC workload compares every data item with every other item. Storing
//! the data so that each comparison finds both inputs locally, with as
//! little replication as possible, reduces to incidence structures: finite
//! projective and affine planes and 2-(v,k,1) block designs give provably
//! storage-optimal distributions, and their regularity also makes the
//! comparison workload balance to within one task per machine.
//!
//! Modules:
//! - [`field`]: exact GF(p^r) arithmetic backing the plane constructions.
//! - [`designs`]: plane / triple-system / unital constructors, the design
//!   verifier, and the design file format.
//! - [`bounds`]: the exact-rational lower bound on per-machine storage.
//! - [`distribution`]: (D, s) distributions, locality, reports, planning.
//! - [`scheduler`]: placement and load-balanced comparison schedules.
//! - [`simulator`]: schedule execution with single-machine failure.

pub mod bounds;
pub mod catalog;
pub mod designs;
pub mod distribution;
pub mod field;
pub mod scheduler;
pub mod simulator;
