//! Exact construction and numeric verification of 3D geometric moment
//! invariants.
//!
//! Rotation invariants of the normalized central moments `η_{j,k,l}` are
//! computed through the isomorphism `so(3) ≅ sl(2)`: the moment variables of
//! order `d` form an `sl2`-module, its lowest-weight vectors realize standard
//! modules `V_s`, and classical binary-form invariants substituted into those
//! realizations yield moment invariants. Every symbolic step runs over exact
//! Gaussian rationals; floating point appears only when invariants are
//! evaluated on data.
//!
//! The crate is `no_std` with `alloc`. File formats and the command-line tool
//! live in the companion `geomoment` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod gaussian;
pub mod invariants;
pub mod linalg;
pub mod moments;
pub mod parse;
pub mod poly;
pub mod selfcheck;
pub mod sl2;
pub mod templates;
pub mod variable;
pub mod verify;

pub use error::{Error, Result};
pub use gaussian::GaussianRational;
pub use invariants::{NamedInvariant, Realization, RealizationSource};
pub use moments::{MomentKind, MomentTensor, PointCloud, VoxelGrid, WeightedPoint};
pub use poly::{Monomial, Polynomial};
pub use sl2::{Derivation, ModuleDecomposition, OrderSet};
pub use templates::{InvariantTemplate, TemplateLibrary, TemplateSet};
pub use variable::{Family, MomentIndex, Variable};
pub use verify::{InvarianceReport, Rotation};
