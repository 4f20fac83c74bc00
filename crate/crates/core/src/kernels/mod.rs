//! Dense optimization kernels.

pub(crate) mod active_set;
pub(crate) mod linalg;
pub mod lp;
pub mod nnls;
pub mod qp;
pub mod simplex;

pub use lp::{solve_lp, Direction, LinearProgram, LpOutcome, LpStatus, RowSense};
pub use nnls::{nnls, NnlsResult};
pub use qp::{qp_motzkin_pair, qp_point_to_motzkin, MotzkinPair, MotzkinProjection};
pub use simplex::project_simplex;
