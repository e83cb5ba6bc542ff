use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the geometry is generic over (`f32` or `f64`).
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Projective distance below which a matrix counts as the identity.
    const IDENTITY_TOL: f64;
    /// Circles whose normalized `|A|` falls below this are treated as lines.
    const LINE_TOL: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn identity_tol() -> Self {
        Self::lit(Self::IDENTITY_TOL)
    }

    fn line_tol() -> Self {
        Self::lit(Self::LINE_TOL)
    }
}

impl Real for f32 {
    const IDENTITY_TOL: f64 = 1e-3;
    const LINE_TOL: f64 = 1e-6;
}

impl Real for f64 {
    const IDENTITY_TOL: f64 = 1e-8;
    const LINE_TOL: f64 = 1e-12;
}

/// Double-double, for the deep levels of the construction where generator
/// norms make f64 products lose every digit the relator checks need.
impl Real for crate::dd::Dd {
    const IDENTITY_TOL: f64 = 1e-12;
    const LINE_TOL: f64 = 1e-24;
}

/// Principal square root computed algebraically, so it is as accurate as the
/// scalar's `sqrt` (the polar route through `atan2` is not, for double-double).
pub fn complex_sqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = T::lit(2.0);
    let r = z.norm();
    if r == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    if z.re >= T::zero() {
        let t = ((r + z.re) / two).sqrt();
        Complex::new(t, z.im / (two * t))
    } else {
        let t = ((r - z.re) / two).sqrt();
        let t = if z.im < T::zero() { -t } else { t };
        Complex::new(z.im / (two * t), t)
    }
}
