//! Fuchsian triangle groups as products of reflections: the root `(4,4,inf)`
//! group and the `(Q,Q,P)` vertex groups placed on a prescribed circle.

use num_complex::Complex;

use crate::moebius::{axis_standardizer, Classification, GeneralizedCircle, GeometryError, MoebiusMap, OrientedDisk, Point};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TriangleError {
    #[error("signature ({q},{q},{p}) is not hyperbolic")]
    NonHyperbolic { q: u32, p: u32 },
    #[error("edge generator is not an elliptic of order {order}")]
    NotEllipticOfOrder { order: u32 },
    #[error("axis of the edge generator is not perpendicular to the circle")]
    AxisNotPerpendicular,
    #[error("no fixed point of the generator lies inside the disk")]
    NoFixedPointInDisk,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// The root `(4,4,inf)` group in the unit disk model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTriangle<T> {
    pub a: MoebiusMap<T>,
    pub b: MoebiusMap<T>,
    pub invariant_circle: GeneralizedCircle<T>,
    pub said_disk: OrientedDisk<T>,
}

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Entrywise complex conjugate: `sigma_X o sigma_Y = S_X * conj(S_Y)` for
/// reflections `sigma(z) = S(conj z)`.
fn conj<T: Real>(m: &MoebiusMap<T>) -> MoebiusMap<T> {
    let [a, b, cc, d] = m.entries();
    MoebiusMap::new(a.conj(), b.conj(), cc.conj(), d.conj()).expect("conjugate of an invertible matrix")
}

/// Reflection in the vertical line `Re z = x`.
fn line_reflection<T: Real>(x: T) -> MoebiusMap<T> {
    let i = c(T::zero(), T::one());
    MoebiusMap::new(c(-T::one(), T::zero()) / i, c(x + x, T::zero()) / i, c(T::zero(), T::zero()), c(T::one(), T::zero()) / i)
        .expect("reflection matrix")
}

/// Reflection in the circle `|z - center| = radius`.
fn circle_reflection<T: Real>(center: Complex<T>, radius: T) -> MoebiusMap<T> {
    let one = c(T::one(), T::zero());
    let r2 = c(radius * radius - center.norm_sqr(), T::zero());
    MoebiusMap::new(center, r2, one, -center.conj()).expect("reflection matrix")
}

/// Cayley map from the upper half plane to the unit disk.
fn cayley<T: Real>() -> MoebiusMap<T> {
    let (one, i) = (c(T::one(), T::zero()), c(T::zero(), T::one()));
    MoebiusMap::new(one, -i, one, i).expect("Cayley matrix")
}

/// Generators `a`, `b` of order 4 with `b a` parabolic, preserving the unit
/// circle; the said disk is the open unit disk.
pub fn build_44inf<T: Real>() -> RootTriangle<T> {
    // Triangle with vertices at infinity and at the points of the unit circle
    // over Re z = -+cos(pi/4) in the upper half plane.
    let x0 = T::FRAC_PI_4().cos();
    let s0 = line_reflection(-x0);
    let s1 = circle_reflection(c(T::zero(), T::zero()), T::one());
    let s2 = line_reflection(x0);
    let a = s1 * conj(&s0);
    let b = s2 * conj(&s1);
    let k = cayley();
    let unit = GeneralizedCircle::from_center_radius(c(T::zero(), T::zero()), T::one()).expect("unit circle");
    RootTriangle {
        a: a.conjugate_by(&k),
        b: b.conjugate_by(&k),
        invariant_circle: unit,
        said_disk: OrientedDisk::inside(unit),
    }
}

/// Generators `(g1, g2)` of orders `q` with `g2 g1 = g0`, preserving
/// `circle`, where `g0` is an elliptic of order `p` whose fixed points are
/// inverse points of `circle`.
pub fn build_qqp<T: Real>(q: u32, p: u32, circle: &GeneralizedCircle<T>, g0: &MoebiusMap<T>) -> Result<(MoebiusMap<T>, MoebiusMap<T>), TriangleError> {
    if q == 0 || p == 0 || 2 * p + q >= p * q {
        return Err(TriangleError::NonHyperbolic { q, p });
    }
    let (qf, pf) = (T::lit(f64::from(q)), T::lit(f64::from(p)));
    let pi = T::PI();
    let tol = T::identity_tol().sqrt();
    match g0.classify(T::identity_tol()) {
        Classification::Elliptic { angle } if (angle - (pi + pi) / pf).abs() <= tol => {}
        _ => return Err(TriangleError::NotEllipticOfOrder { order: p }),
    }

    // Standard position: fixed point inside the circle at 0, the other at
    // infinity, circle scaled to the unit circle.
    let fixed = g0.fixed_points()?.to_vec();
    let inner = fixed
        .iter()
        .copied()
        .find(|&f| circle.value_at(f) < T::zero())
        .ok_or(TriangleError::AxisNotPerpendicular)?;
    let s = axis_standardizer(g0, inner)?;
    let (center, radius) = circle.image(&s).center_radius().ok_or(TriangleError::AxisNotPerpendicular)?;
    if center.norm() > tol * radius {
        return Err(TriangleError::AxisNotPerpendicular);
    }
    let s = MoebiusMap::diagonal(c(radius.sqrt().recip(), T::zero())) * s;

    let multiplier = g0.conjugate_by(&s).multiplier_at(Point::new(T::zero(), T::zero()));
    let sign = if multiplier.im >= T::zero() { T::one() } else { -T::one() };

    // Hyperbolic side from the P-vertex to a Q-vertex.
    let (sp, cp) = (pi / pf).sin_cos();
    let (sq, cq) = (pi / qf).sin_cos();
    // tanh of half the side, from its cosh
    let cosh_side = (cq + cp * cq) / (sp * sq);
    let rho = ((cosh_side - T::one()) / (cosh_side + T::one())).sqrt();

    // Sides: the real axis, the line at angle phi through 0, and the geodesic
    // through rho and rho e^{i phi}.
    let phi = sign * pi / pf;
    let half = phi / T::lit(2.0);
    let dist = (rho * rho + T::one()) / (T::lit(2.0) * rho * half.cos());
    let geodesic_center = Complex::from_polar(dist, half);
    let geodesic_radius = (dist * dist - T::one()).sqrt();
    let r1 = circle_reflection(geodesic_center, geodesic_radius);
    let r2 = MoebiusMap::diagonal(Complex::from_polar(T::one(), phi));

    let s_inv = s.inverse();
    let g1 = r1.conjugate_by(&s_inv);
    let g2 = (r2 * conj(&r1)).conjugate_by(&s_inv);
    Ok((g1, g2))
}

/// The fixed point of an elliptic `g` that lies inside `disk`.
pub fn alpha_point<T: Real>(g: &MoebiusMap<T>, disk: &OrientedDisk<T>) -> Result<Point<T>, TriangleError> {
    g.fixed_points()?
        .to_vec()
        .into_iter()
        .find(|&f| disk.contains(f))
        .ok_or(TriangleError::NoFixedPointInDisk)
}

/// The alpha points of both generators of a vertex group.
pub fn generator_alpha_points<T: Real>(g1: &MoebiusMap<T>, g2: &MoebiusMap<T>, said_disk: &OrientedDisk<T>) -> Result<(Point<T>, Point<T>), TriangleError> {
    Ok((alpha_point(g1, said_disk)?, alpha_point(g2, said_disk)?))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;
    use rand::Rng;

    use super::*;
    use crate::moebius::{vertical_translation, Side};
    use crate::rng;

    type M = MoebiusMap<f64>;

    fn unit() -> GeneralizedCircle<f64> {
        GeneralizedCircle::from_center_radius(Complex64::new(0.0, 0.0), 1.0).unwrap()
    }

    fn elliptic_angle(m: &M) -> f64 {
        match m.classify(1e-9) {
            Classification::Elliptic { angle } => angle,
            other => panic!("expected elliptic, got {other:?}"),
        }
    }

    fn preserves(m: &M, circle: &GeneralizedCircle<f64>) -> bool {
        circle.image(m).same_set(circle, 1e-9)
    }

    fn random_map(r: &mut impl Rng) -> M {
        let mut e = [Complex64::default(); 4];
        for x in &mut e {
            *x = Complex64::new(r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5));
        }
        e[0] += 2.0;
        e[3] += 2.0;
        M::new(e[0], e[1], e[2], e[3]).unwrap()
    }

    #[test]
    fn root_group_contract() {
        let root = build_44inf::<f64>();
        assert!(root.a.pow(4).distance_to_identity() < 1e-10);
        assert!(root.b.pow(4).distance_to_identity() < 1e-10);
        assert!((root.a.trace().norm() - 2f64.sqrt()).abs() < 1e-12);
        assert!((root.b.trace().norm() - 2f64.sqrt()).abs() < 1e-12);
        let ba = root.b * root.a;
        assert_eq!(ba.classify(1e-9), Classification::Parabolic);
        assert!((ba.trace().norm() - 2.0).abs() < 1e-12);
        assert!(preserves(&root.a, &root.invariant_circle));
        assert!(preserves(&root.b, &root.invariant_circle));
        assert_eq!(root.said_disk.side, Side::Negative);
        assert!(root.said_disk.contains(Point::new(0.0, 0.0)));
        let cusp = ba.fixed_points().unwrap().to_vec();
        assert!(cusp[0].chordal_distance(&Point::new(1.0, 0.0)) < 1e-8);
    }

    #[test]
    fn qqp_trace_example() {
        let g0 = M::rotation(PI / 2.0);
        let (g1, g2) = build_qqp(5, 4, &unit(), &g0).unwrap();
        let expected = 2.0 * (PI / 5.0).cos();
        assert!((g1.trace().norm() - expected).abs() < 1e-12);
        assert!((g2.trace().norm() - expected).abs() < 1e-12);
        assert!((g2 * g1).projective_distance(&g0) < 1e-10);
        // z -> iz itself
        assert!(g0.apply(Point::new(1.0, 0.0)).chordal_distance(&Point::new(0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn signature_checks() {
        let g0 = M::rotation(PI / 2.0);
        assert!(build_qqp(4, 4, &unit(), &g0).is_ok());
        let g3 = M::rotation(2.0 * PI / 3.0);
        assert_eq!(build_qqp(3, 3, &unit(), &g3), Err(TriangleError::NonHyperbolic { q: 3, p: 3 }));
        assert_eq!(build_qqp(5, 5, &unit(), &g0), Err(TriangleError::NotEllipticOfOrder { order: 5 }));
        assert_eq!(
            build_qqp(5, 4, &unit(), &vertical_translation(1.0)),
            Err(TriangleError::NotEllipticOfOrder { order: 4 })
        );
        let off_axis = GeneralizedCircle::from_center_radius(Complex64::new(0.5, 0.0), 1.0).unwrap();
        assert_eq!(build_qqp(5, 4, &off_axis, &g0), Err(TriangleError::AxisNotPerpendicular));
    }

    #[test]
    fn relators_angles_and_invariance() {
        for p in 4..=8u32 {
            let q = p + 1;
            for sign in [1.0, -1.0] {
                let g0 = M::rotation(sign * 2.0 * PI / f64::from(p));
                let circle = GeneralizedCircle::from_center_radius(Complex64::new(0.0, 0.0), 0.3).unwrap();
                let (g1, g2) = build_qqp(q, p, &circle, &g0).unwrap();
                for g in [g1, g2] {
                    assert!(g.pow(i64::from(q)).distance_to_identity() <= 1e-8);
                    assert!((elliptic_angle(&g) - 2.0 * PI / f64::from(q)).abs() < 1e-9);
                    assert!(preserves(&g, &circle));
                }
                assert!((g2 * g1).pow(i64::from(p)).distance_to_identity() <= 1e-8);
                assert!((g2 * g1).projective_distance(&g0) < 1e-10);
            }
        }
    }

    #[test]
    fn equivariant_under_similarities() {
        let mut r = rng::stream(11, "triangle-similarity");
        let g0 = M::rotation(2.0 * PI / 5.0);
        let circle = GeneralizedCircle::from_center_radius(Complex64::new(0.0, 0.0), 0.8).unwrap();
        let (g1, g2) = build_qqp(6, 5, &circle, &g0).unwrap();
        for _ in 0..200 {
            let k = r.gen_range(0.2..3.0f64).sqrt();
            let shift = Complex64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let m = M::translation(shift) * M::diagonal(Complex64::new(k, 0.0));
            let (h1, h2) = build_qqp(6, 5, &circle.image(&m), &g0.conjugate_by(&m)).unwrap();
            assert!(h1.projective_distance(&g1.conjugate_by(&m)) < 1e-8);
            assert!(h2.projective_distance(&g2.conjugate_by(&m)) < 1e-8);
        }
    }

    #[test]
    fn equivariant_up_to_rotation_about_the_axis() {
        let mut r = rng::stream(12, "triangle-equivariance");
        let g0 = M::rotation(2.0 * PI / 5.0);
        let circle = GeneralizedCircle::from_center_radius(Complex64::new(0.0, 0.0), 0.8).unwrap();
        let (g1, g2) = build_qqp(6, 5, &circle, &g0).unwrap();
        let disk = OrientedDisk::inside(circle);
        let a = alpha_point(&g1, &disk).unwrap().finite().unwrap();
        for _ in 0..200 {
            let m = random_map(&mut r);
            let (h1, h2) = build_qqp(6, 5, &circle.image(&m), &g0.conjugate_by(&m)).unwrap();
            let m_inv = m.inverse();
            let (back1, back2) = (h1.conjugate_by(&m_inv), h2.conjugate_by(&m_inv));
            let b = alpha_point(&back1, &disk).unwrap().finite().unwrap();
            let turn = M::diagonal((b / a).sqrt());
            assert!(back1.projective_distance(&g1.conjugate_by(&turn)) < 1e-8);
            assert!(back2.projective_distance(&g2.conjugate_by(&turn)) < 1e-8);
        }
    }

    #[test]
    fn alpha_points() {
        let disk = OrientedDisk::inside(unit());
        let rot = M::rotation(PI / 3.0);
        let (a1, _) = generator_alpha_points(&rot, &rot, &disk).unwrap();
        assert!(a1.chordal_distance(&Point::new(0.0, 0.0)) < 1e-15);

        let m = M::new(Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.1), Complex64::new(0.2, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let moved = alpha_point(&rot.conjugate_by(&m), &disk.image(&m)).unwrap();
        assert!(moved.chordal_distance(&m.apply(Point::new(0.0, 0.0))) < 1e-12);

        let (g1, g2) = build_qqp(5, 4, &unit(), &M::rotation(PI / 2.0)).unwrap();
        let (x, y) = generator_alpha_points(&g1, &g2, &disk).unwrap();
        assert!(x.chordal_distance(&y) > 1e-3);

        let outside = OrientedDisk::inside(GeneralizedCircle::from_center_radius(Complex64::new(5.0, 0.0), 1.0).unwrap());
        assert_eq!(alpha_point(&rot, &outside), Err(TriangleError::NoFixedPointInDisk));
    }

    #[test]
    fn works_in_f32() {
        let root = build_44inf::<f32>();
        assert!(root.a.pow(4).distance_to_identity() < 1e-4);
        let circle = GeneralizedCircle::<f32>::from_center_radius(num_complex::Complex32::new(0.0, 0.0), 1.0).unwrap();
        let (g1, g2) = build_qqp(5, 4, &circle, &MoebiusMap::rotation(std::f32::consts::FRAC_PI_2)).unwrap();
        assert!((g2 * g1).projective_distance(&MoebiusMap::rotation(std::f32::consts::FRAC_PI_2)) < 1e-4);
    }
}
