use std::ops::Mul;

use num_complex::Complex;

use super::{GeometryError, H3Point, Point};
use crate::scalar::{complex_sqrt, Real};

/// An element of PSL(2, C): a 2x2 complex matrix normalized to determinant 1
/// and identified with its negative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap<T> {
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
}

/// Trace classification of a nontrivial element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Classification<T> {
    Identity,
    /// Rotation by `angle` in `(0, pi]` about its axis (sign not recorded).
    Elliptic { angle: T },
    Parabolic,
    Loxodromic,
}

/// Fixed points on the sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FixedPoints<T> {
    One(Point<T>),
    Two(Point<T>, Point<T>),
}

impl<T: Real> FixedPoints<T> {
    pub fn to_vec(&self) -> Vec<Point<T>> {
        match *self {
            FixedPoints::One(p) => vec![p],
            FixedPoints::Two(p, q) => vec![p, q],
        }
    }
}

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

impl<T: Real> MoebiusMap<T> {
    /// Normalize `[[a, b], [c, d]]` to determinant 1.
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self, GeometryError> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > T::epsilon() * scale * scale) || !det.norm().is_finite() {
            return Err(GeometryError::Singular);
        }
        let k = complex_sqrt(det).inv();
        Ok(Self {
            a: a * k,
            b: b * k,
            c: c * k,
            d: d * k,
        })
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self { a: o, b: z, c: z, d: o }
    }

    /// `z -> lambda^2 z`, as `diag(lambda, 1/lambda)`.
    pub fn diagonal(lambda: Complex<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self {
            a: lambda,
            b: z,
            c: z,
            d: lambda.inv(),
        }
    }

    /// `z -> z + shift`.
    pub fn translation(shift: Complex<T>) -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self { a: o, b: shift, c: z, d: o }
    }

    /// `z -> z + t i`.
    pub fn vertical_translation(t: T) -> Self {
        Self::translation(c(T::zero(), t))
    }

    /// Rotation by `angle` about the axis from `0` to `infinity`.
    pub fn rotation(angle: T) -> Self {
        let half = angle / T::lit(2.0);
        Self::diagonal(c(half.cos(), half.sin()))
    }

    pub fn entries(&self) -> [Complex<T>; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `[re a, im a, re b, im b, re c, im c, re d, im d]`.
    pub fn to_array(&self) -> [T; 8] {
        [
            self.a.re, self.a.im, self.b.re, self.b.im, self.c.re, self.c.im, self.d.re, self.d.im,
        ]
    }

    /// Inverse of [`MoebiusMap::to_array`]; entries are taken as stored
    /// (no renormalization) when they already have determinant 1.
    pub fn from_array(x: [T; 8]) -> Result<Self, GeometryError> {
        let m = Self {
            a: c(x[0], x[1]),
            b: c(x[2], x[3]),
            c: c(x[4], x[5]),
            d: c(x[6], x[7]),
        };
        let tol = T::lit(1e3) * T::epsilon() * m.norm().powi(2).max(T::one());
        if (m.det() - Complex::new(T::one(), T::zero())).norm() <= tol {
            Ok(m)
        } else {
            Self::new(m.a, m.b, m.c, m.d)
        }
    }

    pub fn det(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex<T> {
        self.a + self.d
    }

    /// Largest entry modulus.
    pub fn norm(&self) -> T {
        self.a.norm().max(self.b.norm()).max(self.c.norm()).max(self.d.norm())
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `q * self * q^-1`.
    pub fn conjugate_by(&self, q: &Self) -> Self {
        *q * *self * q.inverse()
    }

    pub fn apply(&self, p: Point<T>) -> Point<T> {
        match p {
            Point::Infinity => {
                if self.c.norm() == T::zero() {
                    Point::Infinity
                } else {
                    Point::Finite(self.a / self.c)
                }
            }
            Point::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == T::zero() {
                    Point::Infinity
                } else {
                    Point::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Action on upper half-space.
    pub fn apply_h3(&self, p: &H3Point<T>) -> H3Point<T> {
        let czd = self.c * p.z + self.d;
        let t2 = p.t * p.t;
        let den = czd.norm_sqr() + self.c.norm_sqr() * t2;
        let z = ((self.a * p.z + self.b) * czd.conj() + self.a * self.c.conj() * t2) / den;
        H3Point { z, t: p.t / den }
    }

    /// `min(|M - N|, |M + N|)` in the max-entry norm.
    pub fn projective_distance(&self, other: &Self) -> T {
        let minus = (self.a - other.a)
            .norm()
            .max((self.b - other.b).norm())
            .max((self.c - other.c).norm())
            .max((self.d - other.d).norm());
        let plus = (self.a + other.a)
            .norm()
            .max((self.b + other.b).norm())
            .max((self.c + other.c).norm())
            .max((self.d + other.d).norm());
        minus.min(plus)
    }

    pub fn distance_to_identity(&self) -> T {
        self.projective_distance(&Self::identity())
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.projective_distance(other) <= tol
    }

    pub fn classify(&self, tol: T) -> Classification<T> {
        if self.distance_to_identity() <= tol {
            return Classification::Identity;
        }
        let two = T::lit(2.0);
        let tr = self.trace();
        if (tr - two).norm() <= tol || (tr + two).norm() <= tol {
            Classification::Parabolic
        } else if tr.im.abs() <= tol && tr.re.abs() < two {
            Classification::Elliptic {
                angle: two * (tr.re.abs() / two).acos(),
            }
        } else {
            Classification::Loxodromic
        }
    }

    /// Roots of `c z^2 + (d - a) z - b = 0`, with infinity when `c = 0`.
    pub fn fixed_points(&self) -> Result<FixedPoints<T>, GeometryError> {
        let tol = T::identity_tol();
        if self.distance_to_identity() <= tol {
            return Err(GeometryError::IdentityHasNoFixedPoints);
        }
        let two = T::lit(2.0);
        let disc = self.trace() * self.trace() - Complex::new(T::lit(4.0), T::zero());
        let parabolic = disc.norm() <= tol;
        if self.c.norm() <= T::lit(64.0) * T::epsilon() * self.norm() {
            let inf = Point::Infinity;
            if parabolic {
                return Ok(FixedPoints::One(inf));
            }
            return Ok(FixedPoints::Two(Point::Finite(self.b / (self.d - self.a)), inf));
        }
        let amd = self.a - self.d;
        if parabolic {
            return Ok(FixedPoints::One(Point::Finite(amd / (self.c * two))));
        }
        let s = complex_sqrt(disc);
        // pick the sign that avoids cancellation, then use the product of roots
        let big = if (amd + s).norm() >= (amd - s).norm() { amd + s } else { amd - s };
        let z1 = big / (self.c * two);
        let z2 = -(self.b * two) / big;
        Ok(FixedPoints::Two(Point::Finite(z1), Point::Finite(z2)))
    }

    /// Derivative at a fixed point: `e^{i theta}` for an elliptic rotating
    /// by `theta` about that point, `lambda^2` for `diag(lambda, 1/lambda)` at 0.
    pub fn multiplier_at(&self, fixed: Point<T>) -> Complex<T> {
        match fixed {
            Point::Finite(z) => {
                let den = self.c * z + self.d;
                (den * den).inv()
            }
            Point::Infinity => self.d / self.a,
        }
    }
}

impl<T: Real> Mul for MoebiusMap<T> {
    type Output = MoebiusMap<T>;

    fn mul(self, r: MoebiusMap<T>) -> MoebiusMap<T> {
        MoebiusMap {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }
}

impl<'a, T: Real> Mul<&'a MoebiusMap<T>> for &'a MoebiusMap<T> {
    type Output = MoebiusMap<T>;

    fn mul(self, r: &'a MoebiusMap<T>) -> MoebiusMap<T> {
        *self * *r
    }
}

/// `z -> z + t i`.
pub fn vertical_translation<T: Real>(t: T) -> MoebiusMap<T> {
    MoebiusMap::vertical_translation(t)
}

/// A map `Q` with `Q M Q^-1` diagonal, `Q(front) = 0` and the other fixed
/// point sent to infinity. The remaining scaling is pinned by sending
/// infinity to 1, or, when a fixed point is infinity, the finite fixed
/// point plus one to 1.
pub fn axis_standardizer<T: Real>(m: &MoebiusMap<T>, front: Point<T>) -> Result<MoebiusMap<T>, GeometryError> {
    let (p, q) = match m.fixed_points()? {
        FixedPoints::Two(p, q) => (p, q),
        FixedPoints::One(_) => return Err(GeometryError::NeedsTwoFixedPoints),
    };
    let (f, g) = if front.chordal_distance(&p) <= front.chordal_distance(&q) {
        (p, q)
    } else {
        (q, p)
    };
    let one = c(T::one(), T::zero());
    let zero = c(T::zero(), T::zero());
    match (f, g) {
        // z -> 1 / (z - g)
        (Point::Infinity, Point::Finite(g)) => MoebiusMap::new(zero, one, one, -g),
        // z -> z - f
        (Point::Finite(f), Point::Infinity) => MoebiusMap::new(one, -f, zero, one),
        // z -> (z - f) / (z - g)
        (Point::Finite(f), Point::Finite(g)) => MoebiusMap::new(one, -f, one, -g),
        (Point::Infinity, Point::Infinity) => Err(GeometryError::NeedsTwoFixedPoints),
    }
}
