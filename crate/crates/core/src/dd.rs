//! Double-double scalar.
//!
//! A thin wrapper over [`twofloat::TwoFloat`]. Addition, multiplication and
//! square roots are delegated; division, reciprocals, `from_f64`, `epsilon`
//! and the circular functions are replaced, since the upstream versions are only about
//! f64 accurate (or, for `from_f64`, truncate).

use std::cmp::Ordering;
use std::fmt;
use std::num::FpCategory;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};
use twofloat::TwoFloat;

#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Dd(pub TwoFloat);

impl Dd {
    pub fn new(hi: f64, lo: f64) -> Self {
        Dd(TwoFloat::new_add(hi, lo))
    }

    pub fn of(x: f64) -> Self {
        Dd(TwoFloat::from_f64(x))
    }

    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }

    fn div_dd(self, rhs: Self) -> Self {
        let y = rhs.0;
        if y.hi() == 0.0 || !y.hi().is_finite() || !self.0.hi().is_finite() {
            return Dd(TwoFloat::from_f64(self.0.hi() / y.hi()));
        }
        // long division: three f64 quotient digits
        let q1 = self.0.hi() / y.hi();
        let r = self.0 - y * q1;
        let q2 = r.hi() / y.hi();
        let r = r - y * q2;
        let q3 = r.hi() / y.hi();
        Dd(TwoFloat::new_add(q1, q2) + q3)
    }

    /// sin and cos of |r| <= pi/4 by Taylor series.
    fn sin_cos_reduced(r: Self) -> (Self, Self) {
        let r2 = r * r;
        let eps = 1e-34;
        let mut term = r;
        let mut sin = r;
        let mut k = 1.0;
        while term.0.hi().abs() > eps {
            term = -(term * r2) / Dd::of((k + 1.0) * (k + 2.0));
            sin += term;
            k += 2.0;
        }
        let mut term = Dd::one();
        let mut cos = Dd::one();
        let mut k = 0.0;
        while term.0.hi().abs() > eps {
            term = -(term * r2) / Dd::of((k + 1.0) * (k + 2.0));
            cos += term;
            k += 2.0;
        }
        (sin, cos)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::of(x)
    }
}

impl From<Dd> for f64 {
    fn from(x: Dd) -> f64 {
        x.0.hi() + x.0.lo()
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e}, {:e})", self.0.hi(), self.0.lo())
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0.hi(), f)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        Dd(self.0 + rhs.0)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        Dd(self.0 - rhs.0)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        Dd(self.0 * rhs.0)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        self.div_dd(rhs)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, rhs: Dd) -> Dd {
        self - (self / rhs).trunc() * rhs
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, rhs: f64) -> Dd {
        Dd(self.0 * rhs)
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, rhs: f64) -> Dd {
        Dd(self.0 + rhs)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for Dd {
            fn $m(&mut self, rhs: Dd) {
                *self = *self $op rhs;
            }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /, RemAssign rem_assign %);

impl PartialEq<f64> for Dd {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for Dd {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl Zero for Dd {
    fn zero() -> Self {
        Dd(TwoFloat::from_f64(0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd(TwoFloat::from_f64(1.0))
    }
}

impl Num for Dd {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Dd::of)
    }
}

impl ToPrimitive for Dd {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.0.hi() + self.0.lo())
    }
}

impl FromPrimitive for Dd {
    fn from_i64(n: i64) -> Option<Self> {
        TwoFloat::from_i64(n).map(Dd)
    }
    fn from_u64(n: u64) -> Option<Self> {
        TwoFloat::from_u64(n).map(Dd)
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Dd::of(x))
    }
    fn from_f32(x: f32) -> Option<Self> {
        Some(Dd::of(x as f64))
    }
}

impl NumCast for Dd {
    fn from<T: ToPrimitive>(n: T) -> Option<Self> {
        n.to_f64().map(Dd::of)
    }
}

macro_rules! consts {
    ($($name:ident),*) => {$(
        fn $name() -> Self {
            Dd(TwoFloat::$name())
        }
    )*};
}

impl FloatConst for Dd {
    consts!(
        E, FRAC_1_PI, FRAC_1_SQRT_2, FRAC_2_PI, FRAC_2_SQRT_PI, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4,
        FRAC_PI_6, FRAC_PI_8, LN_10, LN_2, LOG10_E, LOG2_E, PI, SQRT_2
    );
}

macro_rules! unary {
    ($($name:ident),*) => {$(
        fn $name(self) -> Self {
            Dd(Float::$name(self.0))
        }
    )*};
}

macro_rules! predicate {
    ($($name:ident),*) => {$(
        fn $name(self) -> bool {
            Float::$name(self.0)
        }
    )*};
}

impl Float for Dd {
    consts!(nan, infinity, neg_infinity, neg_zero, min_value, min_positive_value, max_value);

    // upstream reports f64::MIN_POSITIVE
    fn epsilon() -> Self {
        Dd::of(2f64.powi(-104))
    }

    unary!(
        floor, ceil, round, trunc, fract, abs, signum, sqrt, exp, exp2, ln, log2, log10, cbrt, tan, asin,
        acos, atan, exp_m1, ln_1p, sinh, cosh, tanh, asinh, acosh, atanh, to_degrees, to_radians
    );
    predicate!(is_nan, is_infinite, is_finite, is_normal, is_sign_positive, is_sign_negative);

    fn classify(self) -> FpCategory {
        self.0.hi().classify()
    }

    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }

    fn recip(self) -> Self {
        Dd::one() / self
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    fn powf(self, n: Self) -> Self {
        (self.ln() * n).exp()
    }

    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }

    fn max(self, other: Self) -> Self {
        if self.is_nan() || other > self { other } else { self }
    }

    fn min(self, other: Self) -> Self {
        if self.is_nan() || other < self { other } else { self }
    }

    fn abs_sub(self, other: Self) -> Self {
        if self > other { self - other } else { Dd::zero() }
    }

    fn hypot(self, other: Self) -> Self {
        let (a, b) = (self.abs(), other.abs());
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let t = small / big;
        big * (Dd::one() + t * t).sqrt()
    }

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn sin_cos(self) -> (Self, Self) {
        if !self.is_finite() {
            return (Dd::nan(), Dd::nan());
        }
        let half_pi = Dd::FRAC_PI_2();
        let k = (self / half_pi).round();
        let r = self - k * half_pi;
        let (s, c) = Self::sin_cos_reduced(r);
        match (k.0.hi() as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn atan2(self, other: Self) -> Self {
        Dd(self.0.atan2(other.0))
    }

    fn integer_decode(self) -> (u64, i16, i8) {
        self.0.hi().integer_decode()
    }
}
