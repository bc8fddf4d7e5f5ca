//! Exact linear algebra: Smith normal form over ℤ and echelon forms over ℚ.

pub mod rational;
pub mod snf;

pub use rational::{kernel_basis, Echelon, QVec};
pub use snf::{invariant_factors, SparseMatrix};
