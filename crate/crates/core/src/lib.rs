//! Nonconforming rotated-Q1 immersed finite elements (IFE) for second-order
//! elliptic interface problems on uniform Cartesian meshes.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`] intersects a level-set interface with mesh squares and
//!   classifies cut elements.
//! * [`element`] builds the standard rotated-Q1 bases and the piecewise IFE
//!   bases on cut elements.
//! * [`quadrature`] holds the Gauss rules used for assembly and error norms.
//! * [`mesh`] enumerates elements and edges and maps edges to global DOFs.
//! * [`assembly`] builds and solves the Galerkin system.
//! * [`interpolation`] maps continuous functions into the IFE spaces.
//! * [`norms`] evaluates the circular-interface benchmark and error norms.
//! * [`study`] runs convergence studies and writes CSV tables.

pub mod assembly;
pub mod element;
pub mod error;
pub mod geometry;
pub mod interpolation;
mod lu;
pub mod mesh;
pub mod norms;
pub mod quadrature;
pub mod space;
pub mod study;

pub use assembly::{ProblemSpec, SolveOutcome, SparseSystem};
pub use element::{Coefficient, DofKind, PiecewiseRQ1, RQ1Poly};
pub use error::{IfeError, Result};
pub use geometry::{
    Circle, CutElement, CutKind, ElementCut, HalfPlane, LevelSet, Point, Rect, Region,
};
pub use interpolation::DofVector;
pub use mesh::{CartesianMesh, DofMap, InterfaceTagging};
pub use norms::{ErrorReport, ExactSolution, LevelErrors};
pub use space::IfeSpace;
pub use study::{Mode, StudyConfig, StudyResult};
