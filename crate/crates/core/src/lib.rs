//! Structure-preserving low-rank CP approximation of antisymmetric and
//! partially antisymmetric order-3 tensors.
//!
//! An antisymmetric tensor built from three vectors,
//! `A6(x,y,z) = anti(x o y o z)`, has rank at most 6 for any size; its
//! partially antisymmetric counterpart `C2(x,y,z) = anti_{1,2}(x o y o z)`
//! has rank 2. This crate provides:
//!
//! - dense order-3 tensor algebra ([`tensor`], [`linalg`]);
//! - antisymmetrizers, validators and the implicit three-vector formats
//!   ([`antisym`]);
//! - generic CP-ALS and the a-posteriori antisymmetrization wrappers
//!   ([`cp`]);
//! - structure-preserving ALS solvers that walk the explicit mode-wise
//!   quadratic forms of the misfit ([`antisym_als`], [`partial_als`]);
//! - a rank-1 power-method reference and compression diagnostics
//!   ([`hopm`]);
//! - deterministic benchmark example generators ([`problems`]) and the
//!   plain-text formats used by the CLI ([`io`]).

pub mod antisym;
pub mod antisym_als;
pub mod cp;
pub mod error;
pub mod hopm;
pub mod io;
pub mod linalg;
pub mod partial_als;
pub mod problems;
mod random;
pub mod tensor;

pub use antisym::{
    antisymmetrize, antisymmetrize_partial, is_antisymmetric, is_partially_antisymmetric,
    levi_civita, A6Repr, C2Repr,
};
pub use antisym_als::{antisym_cp, orthonormal_basis_of};
pub use cp::{
    cp_als, cp_reconstruct, cp_then_antisymmetrize, cp_then_antisymmetrize_partial,
    ConvergenceReport, CpFactors, Init, SolveConfig, StopReason,
};
pub use error::{Error, Result};
pub use hopm::{
    compressed_matrix, compressed_tensor, equivalence_report, hopm_rank1, lambda_star,
    CompressedMatrix, CompressedTensor, EquivalenceReport,
};
pub use partial_als::pantisym_cp;
pub use problems::{
    gen_exp_grid, gen_partial, gen_rank6_random, gen_random_antisym, gen_sine, PartialVariant,
};
pub use tensor::{outer3, Matrix, Mode, Tensor3, Vector};
