//! Exact computations with graded quiver algebras `kQ/(ρ)`: graded bases,
//! quadratic duals, twisted trivial extensions, higher preprojective
//! presentations and the translation-quiver windows built from them.
//!
//! Paths are stored in traversal order and rendered right to left, so the
//! path "α then β" prints as `β·α`. All scalars are exact rationals.

pub mod algebra;
pub mod document;
pub mod dual;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod preproj;
pub mod quiver;
pub mod resolution;
pub mod trivext;
pub mod verify;
pub mod znq;

pub use algebra::{normalize_relations, BasisOrder, GradedBasis, PathCombination, Presentation, RelationElement};
pub use error::{Error, Result};
pub use linalg::{Matrix, Scalar, SparseVec, Subspace};
pub use quiver::{ArrowId, Path, Quiver, VertexId};
