use num_complex::Complex;

use super::{GeometryError, MoebiusMap, Point};
use crate::scalar::Real;

/// A circle or line of the sphere, `{z : A|z|^2 + 2 Re(conj(B) z) + D = 0}`,
/// stored as the Hermitian form `[[A, B], [conj(B), D]]` normalized so that
/// `|B|^2 - A D = 1`.
///
/// The form carries an orientation: `F` and `-F` describe the same point set
/// but different "negative" sides. [`OrientedDisk`] builds on that.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedCircle<T> {
    a: T,
    b: Complex<T>,
    d: T,
}

impl<T: Real> GeneralizedCircle<T> {
    pub fn new(a: T, b: Complex<T>, d: T) -> Result<Self, GeometryError> {
        let disc = b.norm_sqr() - a * d;
        if !(disc > T::zero()) || !disc.is_finite() {
            return Err(GeometryError::DegenerateCircle);
        }
        let s = disc.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            d: d / s,
        })
    }

    /// Circle `|z - center| = radius`, negative inside.
    pub fn from_center_radius(center: Complex<T>, radius: T) -> Result<Self, GeometryError> {
        if !(radius > T::zero()) {
            return Err(GeometryError::DegenerateCircle);
        }
        // already normalized: |B|^2 - A D = 1 exactly in exact arithmetic
        Ok(Self {
            a: radius.recip(),
            b: -center / radius,
            d: (center.norm_sqr() - radius * radius) / radius,
        })
    }

    /// Line through `point` with direction `direction`; negative on the side
    /// opposite to `i * direction`.
    pub fn from_line(point: Complex<T>, direction: Complex<T>) -> Result<Self, GeometryError> {
        let normal = direction * Complex::new(T::zero(), T::one());
        let two = T::lit(2.0);
        Self::new(T::zero(), normal, -two * (normal.conj() * point).re)
    }

    pub fn coefficients(&self) -> (T, Complex<T>, T) {
        (self.a, self.b, self.d)
    }

    /// `[A, re B, im B, D]`.
    pub fn to_array(&self) -> [T; 4] {
        [self.a, self.b.re, self.b.im, self.d]
    }

    /// Inverse of [`GeneralizedCircle::to_array`]; already-normalized input
    /// (up to rounding) is kept bit-for-bit.
    pub fn from_array(x: [T; 4]) -> Result<Self, GeometryError> {
        let circle = Self {
            a: x[0],
            b: Complex::new(x[1], x[2]),
            d: x[3],
        };
        let disc = circle.b.norm_sqr() - circle.a * circle.d;
        let scale = circle.b.norm_sqr().max((circle.a * circle.d).abs()).max(T::one());
        if (disc - T::one()).abs() <= T::lit(1e-6) * scale {
            Ok(circle)
        } else {
            Self::new(circle.a, circle.b, circle.d)
        }
    }

    /// Value of the form at a finite point.
    pub fn value(&self, z: Complex<T>) -> T {
        self.a * z.norm_sqr() + T::lit(2.0) * (self.b.conj() * z).re + self.d
    }

    /// Sign-relevant value at any point; at infinity this is `A`.
    pub fn value_at(&self, p: Point<T>) -> T {
        match p {
            Point::Finite(z) => self.value(z),
            Point::Infinity => self.a,
        }
    }

    pub fn is_line(&self) -> bool {
        self.a.abs() < T::line_tol()
    }

    /// Center and radius, unless the circle is (numerically) a line.
    pub fn center_radius(&self) -> Option<(Complex<T>, T)> {
        if self.is_line() {
            None
        } else {
            Some((-self.b / self.a, self.a.abs().recip()))
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
            d: -self.d,
        }
    }

    /// Euclidean distance from a finite point to the circle or line.
    pub fn distance_to(&self, z: Complex<T>) -> T {
        match self.center_radius() {
            Some((center, radius)) => ((z - center).norm() - radius).abs(),
            None => {
                let two = T::lit(2.0);
                ((self.b.conj() * z).re * two + self.d).abs() / (two * self.b.norm())
            }
        }
    }

    /// Image under `m`: the form is transported by `m^-1` (`H' = N* H N`,
    /// `N = m^-1`), which keeps the sign of every point's value.
    pub fn image(&self, m: &MoebiusMap<T>) -> Self {
        let [n11, n12, n21, n22] = m.inverse().entries();
        let a = Complex::new(self.a, T::zero());
        let d = Complex::new(self.d, T::zero());
        let b = self.b;
        // H N
        let hn11 = a * n11 + b * n21;
        let hn12 = a * n12 + b * n22;
        let hn21 = b.conj() * n11 + d * n21;
        let hn22 = b.conj() * n12 + d * n22;
        // N* (H N)
        let a2 = n11.conj() * hn11 + n21.conj() * hn21;
        let b2 = n11.conj() * hn12 + n21.conj() * hn22;
        let d2 = n12.conj() * hn12 + n22.conj() * hn22;
        // |B|^2 - A D is invariant under determinant-1 maps, so the result is
        // normalized without recomputing it (which would cancel badly).
        Self {
            a: a2.re,
            b: b2,
            d: d2.re,
        }
    }

    /// Same point set (either orientation), within `tol` on the normalized form.
    pub fn same_set(&self, other: &Self, tol: T) -> bool {
        let diff = |o: &Self| {
            (self.a - o.a)
                .abs()
                .max((self.b - o.b).norm())
                .max((self.d - o.d).abs())
        };
        diff(other).min(diff(&other.negated())) <= tol
    }
}

/// Image of a circle under a Moebius map.
pub fn circle_image<T: Real>(m: &MoebiusMap<T>, circle: &GeneralizedCircle<T>) -> GeneralizedCircle<T> {
    circle.image(m)
}

/// The plane perpendicular to the vertical axis over 0, at hyperbolic
/// distance `distance` below the point `(0, height)`: its boundary is the
/// circle `|z| = height * e^-distance`.
pub fn perpendicular_circle_at<T: Real>(height: T, distance: T) -> Result<GeneralizedCircle<T>, GeometryError> {
    if !(distance >= T::zero()) {
        return Err(GeometryError::NegativeDistance);
    }
    if !(height > T::zero()) {
        return Err(GeometryError::NonPositiveHeight);
    }
    GeneralizedCircle::from_center_radius(Complex::new(T::zero(), T::zero()), height * (-distance).exp())
}

/// Which side of the form a disk occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `{F <= 0}`; serialized as `-1`.
    Negative,
    /// `{F >= 0}`; serialized as `+1`.
    Positive,
}

impl Side {
    pub fn sign(self) -> i8 {
        match self {
            Side::Negative => -1,
            Side::Positive => 1,
        }
    }

    pub fn from_sign(sign: i64) -> Result<Self, GeometryError> {
        match sign {
            -1 => Ok(Side::Negative),
            1 => Ok(Side::Positive),
            other => Err(GeometryError::InvalidSide(other)),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Side::Negative => Side::Positive,
            Side::Positive => Side::Negative,
        }
    }
}

/// A closed round disk of the sphere: one side of a generalized circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedDisk<T> {
    pub circle: GeneralizedCircle<T>,
    pub side: Side,
}

/// Euclidean description of a disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiskShape<T> {
    /// `|z - center| <= radius`.
    Bounded { center: Complex<T>, radius: T },
    /// `|z - center| >= radius`, together with infinity.
    Exterior { center: Complex<T>, radius: T },
    /// `Re(conj(normal) z) <= offset` with `|normal| = 1`.
    HalfPlane { normal: Complex<T>, offset: T },
}

impl<T: Real> OrientedDisk<T> {
    pub fn new(circle: GeneralizedCircle<T>, side: Side) -> Self {
        Self { circle, side }
    }

    /// The disk `{F <= 0}`; for a circle built by
    /// [`GeneralizedCircle::from_center_radius`] this is the bounded disk.
    pub fn inside(circle: GeneralizedCircle<T>) -> Self {
        Self::new(circle, Side::Negative)
    }

    pub fn complement(&self) -> Self {
        Self::new(self.circle, self.side.flipped())
    }

    /// Form that is `<= 0` exactly on the disk.
    fn effective(&self) -> GeneralizedCircle<T> {
        match self.side {
            Side::Negative => self.circle,
            Side::Positive => self.circle.negated(),
        }
    }

    /// Value of the effective form: negative inside, positive outside.
    pub fn level(&self, p: Point<T>) -> T {
        self.effective().value_at(p)
    }

    pub fn contains(&self, p: Point<T>) -> bool {
        self.level(p) <= T::zero()
    }

    pub fn image(&self, m: &MoebiusMap<T>) -> Self {
        Self::new(self.circle.image(m), self.side)
    }

    pub fn shape(&self) -> DiskShape<T> {
        let eff = self.effective();
        let (a, b, d) = eff.coefficients();
        if eff.is_line() {
            let two = T::lit(2.0);
            let n = b.norm();
            return DiskShape::HalfPlane {
                normal: b / n,
                offset: -d / (two * n),
            };
        }
        let center = -b / a;
        let radius = a.abs().recip();
        if a > T::zero() {
            DiskShape::Bounded { center, radius }
        } else {
            DiskShape::Exterior { center, radius }
        }
    }

    /// Disjointness with a Euclidean gap margin: positive gap when disjoint,
    /// negative (overlap depth, or `-inf` when both disks contain infinity)
    /// otherwise. Symmetric in its arguments.
    pub fn separation(&self, other: &Self) -> T {
        use DiskShape::*;
        match (self.shape(), other.shape()) {
            (Bounded { center: c1, radius: r1 }, Bounded { center: c2, radius: r2 }) => {
                (c1 - c2).norm() - r1 - r2
            }
            (Bounded { center: c1, radius: r1 }, Exterior { center: c2, radius: r2 })
            | (Exterior { center: c2, radius: r2 }, Bounded { center: c1, radius: r1 }) => {
                r2 - (c1 - c2).norm() - r1
            }
            (Bounded { center, radius }, HalfPlane { normal, offset })
            | (HalfPlane { normal, offset }, Bounded { center, radius }) => {
                (normal.conj() * center).re - offset - radius
            }
            _ => T::neg_infinity(),
        }
    }

    /// Margin by which `self` sits inside `outer` (positive when strictly inside).
    pub fn inside_margin(&self, outer: &Self) -> T {
        self.separation(&outer.complement())
    }
}

/// `(disjoint, margin)` for two closed disks; see [`OrientedDisk::separation`].
pub fn disks_disjoint<T: Real>(d1: &OrientedDisk<T>, d2: &OrientedDisk<T>) -> (bool, T) {
    let margin = d1.separation(d2);
    (margin > T::zero(), margin)
}
