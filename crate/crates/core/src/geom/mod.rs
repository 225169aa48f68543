//! Volume of an ideal triangulation as the maximum of `Σ Λ(angle)` over
//! its angle structures.

pub mod angles;
pub mod lobachevsky;
pub mod lp;
pub mod volume;

use thiserror::Error;

pub use angles::{angle_equations, angle_slot, AnglePoint, AngleSystem};
pub use lobachevsky::{lobachevsky, lobachevsky_derivative};
pub use volume::{
    feasible_point, max_volume, max_volume_with, maximize_on, relative_interior_point, volume, volume_gradient,
    ConstraintSpace, Residuals, VolumeOptions, VolumeResult, VolumeStatus,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("triangulation is not a closed table with valid edges")]
    Invalid,
}
