//! Ideal triangulations of cusped 3-manifolds.

pub mod census;
pub mod perm;
pub mod skeleton;
pub mod triangulation;
mod union_find;

pub use perm::Perm4;
pub use triangulation::{FaceRef, Gluing, TetEdge, Triangulation};
pub mod builders;
pub mod geom;
pub mod homology;
pub mod io;
pub mod iso;
pub mod moves;
pub mod search;
