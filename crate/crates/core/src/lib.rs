//! Green functions, Picard solvers and estimate checks for the diffusion
//! operator with exponential memory
//!
//! ```text
//! u_t - eps u_xx + a u + b ∫_0^t exp(-beta (t - tau)) u(x, tau) dtau = F(x, t, u)
//! ```
//!
//! on the whole line and on a strip `0 <= x <= L`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::too_many_arguments,
    clippy::needless_range_loop
)]

pub mod asympt;
pub mod error;
pub mod fhn;
pub mod field;
pub mod greensolve;
pub mod kernel;
pub mod oracle;
pub mod params;
pub mod problem;
pub mod quad;
pub mod report;
pub mod special;
pub mod theta;

pub use error::{Error, Result};
pub use field::Field;
pub use greensolve::{GreenSolver, SolveReport};
pub use params::{derive_constants, DerivedConstants, OperatorParams};
pub use problem::{BcKind, GridConfig, ProblemSpec, SourceFn, SourceSpec, SpaceFn, TimeFn};
pub use quad::KernelConfig;
pub use report::{Check, Status, VerificationReport};
pub use theta::StripGeometry;
