use num_complex::Complex;

use crate::scalar::Real;

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> Point<T> {
    pub fn new(re: T, im: T) -> Self {
        Point::Finite(Complex::new(re, im))
    }

    pub fn finite(&self) -> Option<Complex<T>> {
        match *self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    /// Chordal distance on the unit sphere (at most 2).
    pub fn chordal_distance(&self, other: &Point<T>) -> T {
        let two = T::lit(2.0);
        match (*self, *other) {
            (Point::Infinity, Point::Infinity) => T::zero(),
            (Point::Finite(z), Point::Infinity) | (Point::Infinity, Point::Finite(z)) => {
                two / (T::one() + z.norm_sqr()).sqrt()
            }
            (Point::Finite(z), Point::Finite(w)) => {
                two * (z - w).norm() / ((T::one() + z.norm_sqr()) * (T::one() + w.norm_sqr())).sqrt()
            }
        }
    }
}

impl<T> From<Complex<T>> for Point<T> {
    fn from(z: Complex<T>) -> Self {
        Point::Finite(z)
    }
}

/// A point of upper half-space `{(z, t) : t > 0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct H3Point<T> {
    pub z: Complex<T>,
    pub t: T,
}

impl<T: Real> H3Point<T> {
    pub fn new(z: Complex<T>, t: T) -> Self {
        assert!(t > T::zero(), "upper half-space height must be positive");
        Self { z, t }
    }

    /// Hyperbolic distance.
    pub fn distance(&self, other: &H3Point<T>) -> T {
        let num = (self.z - other.z).norm_sqr() + (self.t - other.t).powi(2);
        (T::one() + num / (T::lit(2.0) * self.t * other.t)).acosh()
    }
}
