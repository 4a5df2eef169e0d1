//! Exact computation of the Z2-Thurston norm in small Seifert fibered 3-manifolds.
//!
//! A small Seifert manifold `S2((a1,b1),(a2,b2),(a3,b3))` has at most three nonzero
//! Z2-homology classes in degree two. Every geometric incompressible one-sided surface
//! is isotopic to a pseudo-vertical or a pseudo-horizontal surface, so the norm of a
//! class is found by enumerating both families and taking the least genus.
//!
//! The crate is `no_std` and only needs `alloc`:
//!
//! * [`lens`] evaluates the one-sided genus function `N(2k, q)` of a solid torus,
//! * [`seifert`] holds presentations, notation parsing and the homology census,
//! * [`surfaces`] checks, measures and classifies candidate surfaces,
//! * [`search`] enumerates candidates with certified pruning and reports norms.
//!
//! ```
//! use sfs_norm_core::{search::{compute_norms, SearchBudget}, seifert::SeifertPresentation};
//!
//! let m: SeifertPresentation = "S2((2,-1),(3,1),(8,1))".parse().unwrap();
//! let report = compute_norms(&m, &SearchBudget::default()).unwrap();
//! assert_eq!(report.classes.len(), 1);
//! assert_eq!(report.classes[0].min_genus, 3);
//! assert_eq!(report.classes[0].norm, 1);
//! ```
#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod arith;
mod error;
pub mod expr;
pub mod lens;
pub mod search;
pub mod seifert;
pub mod surfaces;

pub use error::{Error, ErrorKind, Result};
