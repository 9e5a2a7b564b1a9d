//! Dynnikov coordinates for integral laminations on the punctured disk, the
//! Artin braid group action on them, and tools for detecting pseudo-Anosov
//! braids and estimating their dilatations.

pub mod action;
pub mod analysis;
pub mod braid;
pub mod coords;
pub mod error;
pub mod scalar;
pub mod spectral;

pub use action::{
    apply_generator, apply_word, apply_word_projective, linearize, signature_at, BranchSignature,
    LinearizedAction,
};
pub use braid::BraidWord;
pub use coords::{
    component_counts, dynnikov_from_triangle, triangle_from_dynnikov, validate_triangle,
    DynnikovCoords, IntCoords, IntTriangle, RealCoords, RealTriangle, TriangleCoords,
};
pub use error::{Error, Result};
pub use scalar::Scalar;
