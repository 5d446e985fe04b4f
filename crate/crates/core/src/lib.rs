//! Fast direct solver for hierarchically off-diagonal low-rank (HODLR)
//! matrices.
//!
//! The representation concatenates all leaf diagonal blocks into one buffer
//! and all low-rank bases of one tree level into one panel. Factorization and
//! solution then proceed level by level, each step being a single batched
//! dense kernel (LU, triangular solve or GEMM) over every node of the level:
//!
//! 1. LU-factor every leaf block and apply it to every basis panel.
//! 2. For each level from the leaves up, form and factor the small coupling
//!    systems `[[V_α* Y_α, I], [I, V_β* Y_β]]`, then update the coarser
//!    panels by the resulting low-rank correction.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled; the multithreaded executor needs `std`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod batched;
pub mod compress;
pub mod dense;
pub mod error;
pub mod factor;
pub mod hodlr;
pub mod oracle;
pub mod problems;
pub mod scalar;
pub mod solve;
pub mod svd;
pub mod tree;

pub use batched::Executor;
pub use compress::{compress, recompress, CompressionConfig, LowRankFactor, Method};
pub use dense::Mat;
pub use error::{Error, Result};
pub use factor::{factorize, FactorOptions, HodlrFactorization, KVariant};
pub use hodlr::{EntryOracle, HodlrMatrix};
pub use scalar::{Field, RealScalar, Scalar, C32, C64};
pub use solve::{LogDet, Operator, Refinement};
pub use tree::{ClusterTree, IndexRange};
