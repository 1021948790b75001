//! Packings of subspaces, lines and points via alternating projection.
//!
//! A packing problem asks for N subspaces of dimension K in a d-dimensional
//! real or complex space whose pairwise distances are as large as possible.
//! The solver works on Gram matrices: it alternates between a nearest point
//! with identity diagonal blocks and bounded off-diagonal blocks
//! ([`projections::project_structural`]) and a nearest positive-semidefinite
//! matrix of rank at most d and trace KN ([`projections::project_spectral`]).

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod init;
pub mod io;
pub mod linalg;
pub mod projections;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{Configuration, Field, GramMatrix, Metric, PrincipalAngles};
pub use linalg::CMatrix;
pub use num_complex::Complex64;
