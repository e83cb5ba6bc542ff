#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builder;
pub mod cli;
pub mod dd;
pub mod groups;
pub mod io;
pub mod moebius;
pub mod rng;
pub mod scalar;
pub mod tree;
pub mod triangle;
pub mod verify;

use num_complex::{Complex, Complex64};

/// Scalar of the built representations (double-double).
pub type Hp = dd::Dd;
pub type Moebius = moebius::MoebiusMap<Hp>;
pub type Circle = moebius::GeneralizedCircle<Hp>;
pub type Disk = moebius::OrientedDisk<Hp>;
pub type SpherePoint = moebius::Point<Hp>;

pub fn hp(x: f64) -> Hp {
    Hp::from(x)
}

pub fn hp_complex(z: Complex64) -> Complex<Hp> {
    Complex::new(hp(z.re), hp(z.im))
}

/// Nearest f64 point.
pub fn to_f64_point(p: &SpherePoint) -> moebius::Point<f64> {
    match p {
        moebius::Point::Infinity => moebius::Point::Infinity,
        moebius::Point::Finite(z) => moebius::Point::new(f64::from(z.re), f64::from(z.im)),
    }
}
