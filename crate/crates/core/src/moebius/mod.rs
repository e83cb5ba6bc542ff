//! Moebius transformations of the Riemann sphere, generalized circles and
//! disks, and the few upper-half-space constructions the builder needs.

mod circle;
mod map;
mod point;

pub use circle::{circle_image, disks_disjoint, perpendicular_circle_at, DiskShape, GeneralizedCircle, OrientedDisk, Side};
pub use map::{axis_standardizer, vertical_translation, Classification, FixedPoints, MoebiusMap};
pub use point::{H3Point, Point};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("matrix is singular")]
    Singular,
    #[error("hermitian form does not describe a real circle")]
    DegenerateCircle,
    #[error("the identity has no isolated fixed points")]
    IdentityHasNoFixedPoints,
    #[error("map must have two distinct fixed points")]
    NeedsTwoFixedPoints,
    #[error("distance along the axis must be non-negative")]
    NegativeDistance,
    #[error("axis point height must be positive")]
    NonPositiveHeight,
    #[error("disk side must be -1 or 1, got {0}")]
    InvalidSide(i64),
}
