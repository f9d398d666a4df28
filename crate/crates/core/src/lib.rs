//! Exact computer algebra for quivers with potentials.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod field;
pub mod jacobian;
pub mod linalg;
pub mod mutation;
pub mod potential;
pub mod quiver;
pub mod rep_mutation;
pub mod reps;
pub mod series;
pub mod substitution;
pub mod text;

pub use error::{Error, Result};
pub use field::{Field, Fp, Rational};
pub use jacobian::{DimReport, Qp};
pub use potential::Potential;
pub use quiver::{Arrow, ArrowId, Quiver, Vertex};
pub use series::{Path, Series};
pub use substitution::{ArrowSubstitution, SubstitutionKind};
