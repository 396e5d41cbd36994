//! Exact computation of q-permanents and their Pólya-type conversions.
//!
//! The crate evaluates `P_q(A) = Σ_σ q^{ℓ(σ)} Π a_{i,σ(i)}` exactly, and
//! solves and verifies the linear systems that describe Schur-multiplier
//! preservers and converters between the q-permanent, the permanent and
//! the determinant.

pub mod claims;
pub mod dim2;
pub mod eval;
pub mod exact;
pub mod format;
pub mod golden;
pub mod hessenberg;
pub mod mixed;
pub mod perf;
pub mod perm;
pub mod preservers;
pub mod random;
pub mod tau;

mod error;

pub use error::{Error, Result};
