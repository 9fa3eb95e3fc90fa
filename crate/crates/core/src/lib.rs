//! Exact computations on almost complex Lie algebras: splittings, Chern-flatness
//! criteria, invariant forms, constructions, normal forms and deformations.
//!
//! All arithmetic is over Q or Q(i); every check is an exact equality.

pub mod acs;
pub mod classify;
pub mod constructions;
pub mod deform;
pub mod forms;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod random;

pub use acs::{AlmostComplexStructure, ComplexSplitting, Sector, Witness};
pub use forms::{Bidegree, HermitianMetric, InvariantForm, TypeOperator};
pub use lie::{LieAlgebra, StructureConstants, Subspace};
pub use linalg::{ExactMatrix, Field, GaussianRational, Matrix, Rational, RationalMatrix, Scalar};
