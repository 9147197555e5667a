//! PSL(2,C) matrices, the Riemann-sphere and upper-half-space actions,
//! cross-ratios, isometry classification, translation lengths, and the
//! hyperbolic trigonometry behind the bending estimates.

use crate::Error;
use num_complex::Complex64 as C64;

/// Point of the Riemann sphere in homogeneous coordinates `[num : den]`,
/// normalized so `den = 1` for finite points and `(1, 0)` for infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub num: C64,
    pub den: C64,
}

impl SpherePoint {
    pub fn finite(z: C64) -> Self {
        SpherePoint { num: z, den: C64::new(1.0, 0.0) }
    }

    pub fn real(x: f64) -> Self {
        Self::finite(C64::new(x, 0.0))
    }

    pub fn infinity() -> Self {
        SpherePoint { num: C64::new(1.0, 0.0), den: C64::new(0.0, 0.0) }
    }

    /// Normalizes homogeneous coordinates; near-zero denominators snap to
    /// the distinguished point at infinity.
    pub fn projective(num: C64, den: C64) -> Self {
        let scale = num.norm().max(den.norm());
        if scale == 0.0 || !scale.is_finite() {
            // Callers validate inputs; keep a deterministic fallback.
            return SpherePoint::infinity();
        }
        let (num, den) = (num / scale, den / scale);
        if den.norm() <= 1e-14 {
            SpherePoint::infinity()
        } else {
            SpherePoint { num: num / den, den: C64::new(1.0, 0.0) }
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.den.norm() == 0.0
    }

    pub fn to_complex(&self) -> Option<C64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.num / self.den)
        }
    }

    /// Chordal distance on the sphere, in [0, 2]; handles infinity.
    pub fn chordal(&self, other: &SpherePoint) -> f64 {
        let cross = self.num * other.den - other.num * self.den;
        let n1 = (self.num.norm_sqr() + self.den.norm_sqr()).sqrt();
        let n2 = (other.num.norm_sqr() + other.den.norm_sqr()).sqrt();
        2.0 * cross.norm() / (n1 * n2)
    }
}

/// Homogeneous determinant `det(p, q)`; zero iff the points coincide.
fn det2(p: &SpherePoint, q: &SpherePoint) -> C64 {
    p.num * q.den - q.num * p.den
}

/// Unit-determinant 2x2 complex matrix, understood projectively (up to
/// global sign) as an element of PSL(2,C).
#[derive(Debug, Clone, Copy)]
pub struct Moebius {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

pub const DET_TOL: f64 = 1e-10;

impl Moebius {
    /// Builds a map from raw entries, normalizing the determinant to 1.
    /// Singularity is judged relative to the entry scale, so maps built
    /// from very small homogeneous data remain usable.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self, Error> {
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::SingularMatrix(0.0));
        }
        let (a, b, c, d) = (a / scale, b / scale, c / scale, d / scale);
        let det = a * d - b * c;
        if det.norm() < 1e-24 {
            return Err(Error::SingularMatrix(det.norm()));
        }
        let s = det.sqrt();
        Ok(Moebius { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn identity() -> Self {
        Moebius {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.0, 0.0),
            c: C64::new(0.0, 0.0),
            d: C64::new(1.0, 0.0),
        }
    }

    pub fn from_diagonal(lambda: C64) -> Self {
        Moebius {
            a: lambda,
            b: C64::new(0.0, 0.0),
            c: C64::new(0.0, 0.0),
            d: lambda.inv(),
        }
    }

    pub fn parabolic_translation(tau: C64) -> Self {
        Moebius {
            a: C64::new(1.0, 0.0),
            b: tau,
            c: C64::new(0.0, 0.0),
            d: C64::new(1.0, 0.0),
        }
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        // det is 1, so the adjugate is the inverse.
        Moebius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn compose(&self, rhs: &Moebius) -> Self {
        let m = Moebius {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        };
        m.renormalize()
    }

    /// Rescales so the determinant is exactly 1 again after drift.
    pub fn renormalize(&self) -> Self {
        let s = self.det().sqrt();
        Moebius { a: self.a / s, b: self.b / s, c: self.c / s, d: self.d / s }
    }

    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        SpherePoint::projective(
            self.a * p.num + self.b * p.den,
            self.c * p.num + self.d * p.den,
        )
    }

    /// Action on an interior point of the upper half-plane.
    pub fn apply_h2(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn trace_sq(&self) -> C64 {
        let t = self.a + self.d;
        t * t
    }

    /// Projective distance to the identity: entrywise max over the best
    /// global sign.
    pub fn dist_to_identity(&self) -> f64 {
        let id = Moebius::identity();
        self.proj_dist(&id)
    }

    pub fn proj_dist(&self, other: &Moebius) -> f64 {
        let d1 = [
            (self.a - other.a).norm(),
            (self.b - other.b).norm(),
            (self.c - other.c).norm(),
            (self.d - other.d).norm(),
        ]
        .into_iter()
        .fold(0.0f64, f64::max);
        let d2 = [
            (self.a + other.a).norm(),
            (self.b + other.b).norm(),
            (self.c + other.c).norm(),
            (self.d + other.d).norm(),
        ]
        .into_iter()
        .fold(0.0f64, f64::max);
        d1.min(d2)
    }

    /// Eigenvalue of largest modulus.
    pub fn dominant_eigenvalue(&self) -> C64 {
        let t = self.a + self.d;
        let disc = (t * t - C64::new(4.0, 0.0)).sqrt();
        let l1 = (t + disc) / 2.0;
        let l2 = (t - disc) / 2.0;
        if l1.norm() >= l2.norm() {
            l1
        } else {
            l2
        }
    }

    /// Translation length in H^3: `2 |ln |lambda||` for the dominant
    /// eigenvalue. Zero for identity, parabolic and elliptic classes; a
    /// tight snap keeps conjugation noise on parabolics from leaking
    /// through the square root.
    pub fn translation_length(&self) -> f64 {
        if (self.trace_sq() - C64::new(4.0, 0.0)).norm() <= 1e-11 {
            return 0.0;
        }
        2.0 * self.dominant_eigenvalue().norm().ln().abs()
    }

    /// Isometry classification with tolerance `tol` on the boundary cases
    /// (default 1e-9). Uses tr^2 only; the trace sign is not
    /// defined in PSL(2,C).
    pub fn classify(&self, tol: f64) -> IsometryClass {
        if self.dist_to_identity() <= tol {
            return IsometryClass::Identity;
        }
        let t2 = self.trace_sq();
        if (t2 - C64::new(4.0, 0.0)).norm() <= tol {
            return IsometryClass::Parabolic;
        }
        if t2.im.abs() <= tol && t2.re >= -tol && t2.re < 4.0 {
            return IsometryClass::Elliptic;
        }
        IsometryClass::Loxodromic
    }

    /// Fixed points on the sphere; the attracting one first for
    /// loxodromics, a single point for parabolics.
    pub fn fixed_points(&self) -> (SpherePoint, Option<SpherePoint>) {
        let zero = 1e-13;
        if self.c.norm() < zero {
            // Upper triangular: infinity is fixed.
            if (self.a - self.d).norm() < zero {
                return (SpherePoint::infinity(), None);
            }
            let other = SpherePoint::finite(self.b / (self.d - self.a));
            // z -> (a/d) z + ...: infinity attracts iff |a| > |d|.
            if self.a.norm() >= self.d.norm() {
                return (SpherePoint::infinity(), Some(other));
            }
            return (other, Some(SpherePoint::infinity()));
        }
        let t = self.a + self.d;
        let disc = (t * t - C64::new(4.0, 0.0)).sqrt();
        if disc.norm() < zero {
            return (
                SpherePoint::finite((self.a - self.d) / (2.0 * self.c)),
                None,
            );
        }
        // Fixed point of eigenvalue lambda is the eigenvector
        // (lambda - d, c).
        let l1 = (t + disc) / 2.0;
        let l2 = (t - disc) / 2.0;
        let p1 = SpherePoint::projective(l1 - self.d, self.c);
        let p2 = SpherePoint::projective(l2 - self.d, self.c);
        if l1.norm() >= l2.norm() {
            (p1, Some(p2))
        } else {
            (p2, Some(p1))
        }
    }

    /// The unique map sending `(p1, p2, p3)` to `(∞, 0, 1)`.
    pub fn to_standard_triple(
        p1: &SpherePoint,
        p2: &SpherePoint,
        p3: &SpherePoint,
    ) -> Result<Self, Error> {
        let alpha = det2(p3, p1);
        let beta = det2(p3, p2);
        // Rows are alpha*det(z, p2) and beta*det(z, p1).
        Moebius::new(
            alpha * p2.den,
            -alpha * p2.num,
            beta * p1.den,
            -beta * p1.num,
        )
    }

    /// The unique map carrying one ordered triple of distinct points to
    /// another.
    pub fn map_triples(
        from: (&SpherePoint, &SpherePoint, &SpherePoint),
        to: (&SpherePoint, &SpherePoint, &SpherePoint),
    ) -> Result<Self, Error> {
        let m1 = Moebius::to_standard_triple(from.0, from.1, from.2)?;
        let m2 = Moebius::to_standard_triple(to.0, to.1, to.2)?;
        Ok(m2.inverse().compose(&m1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

/// Cross-ratio with the convention calibrated so that the symmetric ideal
/// square gives `cr(∞, −1, 0, 1) = 1`:
///
///   cr(a, b, c, d) = (a−b)(c−d) / ((b−c)(a−d))
///
/// evaluated with homogeneous determinants, so infinity needs no special
/// case. For an edge with directed endpoints a → c, apex d on the left
/// triangle and apex b on the right, this is the edge's Fock-Goncharov
/// coordinate; all-real-positive values develop inside the real line.
pub fn cross_ratio(
    p1: &SpherePoint,
    p2: &SpherePoint,
    p3: &SpherePoint,
    p4: &SpherePoint,
) -> Result<C64, Error> {
    let pts = [p1, p2, p3, p4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pts[i].chordal(pts[j]) < 1e-12 {
                return Err(Error::DegenerateQuadruple);
            }
        }
    }
    let num = det2(p1, p2) * det2(p3, p4);
    let den = det2(p2, p3) * det2(p1, p4);
    Ok(num / den)
}

/// Angle beta at the bending vertex: a geodesic segment meeting the
/// pleating line at angle `alpha` and bent by dihedral angle `theta`
/// subtends `cos β = −cos²α − sin²α·cos θ` between its two arms.
pub fn bend_angle_beta(alpha: f64, theta: f64) -> f64 {
    let c = -alpha.cos().powi(2) - alpha.sin().powi(2) * theta.cos();
    c.clamp(-1.0, 1.0).acos()
}

/// Hyperbolic law of cosines: distance between the endpoints of two arms
/// of lengths `dx`, `dy` meeting at angle `beta`.
pub fn bent_endpoint_distance(dx: f64, dy: f64, beta: f64) -> f64 {
    let ch = dx.cosh() * dy.cosh() - dx.sinh() * dy.sinh() * beta.cos();
    ch.max(1.0).acosh()
}

/// Point of the upper half-space model of H^3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3Point {
    pub z: C64,
    pub t: f64,
}

impl H3Point {
    pub fn new(z: C64, t: f64) -> Result<Self, Error> {
        if t <= 0.0 {
            return Err(Error::NonpositiveHeight(t));
        }
        Ok(H3Point { z, t })
    }

    /// Poincare extension of the Moebius action to the upper half-space.
    pub fn apply(&self, m: &Moebius) -> H3Point {
        let w = m.c * self.z + m.d;
        let den = w.norm_sqr() + m.c.norm_sqr() * self.t * self.t;
        let z = ((m.a * self.z + m.b) * w.conj() + m.a * m.c.conj() * self.t * self.t) / den;
        let t = self.t / den;
        H3Point { z, t }
    }
}

/// Hyperbolic distance in the upper half-space model.
pub fn h3_distance(x: &H3Point, y: &H3Point) -> f64 {
    let dz = (x.z - y.z).norm_sqr();
    let dt = (x.t - y.t) * (x.t - y.t);
    let ch = 1.0 + (dz + dt) / (2.0 * x.t * y.t);
    ch.max(1.0).acosh()
}

/// Geodesic of H^2 or H^3 recorded by its two ideal endpoints.
#[derive(Debug, Clone, Copy)]
pub struct Geodesic {
    pub a: SpherePoint,
    pub b: SpherePoint,
}

impl Geodesic {
    pub fn new(a: SpherePoint, b: SpherePoint) -> Self {
        Geodesic { a, b }
    }

    /// Same unoriented geodesic, up to chordal tolerance.
    pub fn same_unoriented(&self, other: &Geodesic, tol: f64) -> bool {
        (self.a.chordal(&other.a) < tol && self.b.chordal(&other.b) < tol)
            || (self.a.chordal(&other.b) < tol && self.b.chordal(&other.a) < tol)
    }

    /// Orientation-preserving map sending the endpoints to (0, ∞).
    pub fn to_zero_infinity(&self) -> Result<Moebius, Error> {
        self.standardize()
    }

    fn standardize(&self) -> Result<Moebius, Error> {
        // Sends a -> 0, b -> infinity, preserving the upper half-plane
        // when the endpoints are real (the raw row determinant can come
        // out negative, which would flip the orientation).
        let (mut r1, mut r2) = (
            (self.a.den, -self.a.num),
            (self.b.den, -self.b.num),
        );
        let det = r1.0 * r2.1 - r1.1 * r2.0;
        if det.im.abs() <= 1e-12 * det.norm() && det.re < 0.0 {
            r1 = (-r1.0, -r1.1);
        }
        let _ = &mut r2;
        Moebius::new(r1.0, r1.1, r2.0, r2.1)
    }

    /// Signed side of an interior upper-half-plane point relative to the
    /// oriented geodesic a -> b (positive on one side, negative on the
    /// other).
    pub fn side_of(&self, z: C64) -> Result<f64, Error> {
        let m = self.standardize()?;
        Ok(m.apply_h2(z).re)
    }

    /// True if the endpoint pairs interleave on the circle, i.e. the two
    /// geodesics cross in the interior.
    pub fn crosses(&self, other: &Geodesic) -> Result<bool, Error> {
        let m = self.standardize()?;
        let p = m.apply(&other.a);
        let q = m.apply(&other.b);
        // After sending self to (0, infinity), the other crosses iff its
        // endpoints are separated by that axis through 0: for real
        // structures this is a sign test on the real parts.
        let (p, q) = match (p.to_complex(), q.to_complex()) {
            (Some(p), Some(q)) => (p, q),
            _ => return Ok(false), // shares the endpoint at infinity
        };
        if p.norm() < 1e-13 || q.norm() < 1e-13 {
            return Ok(false); // shares an endpoint
        }
        // Interleaving on the real axis for geodesics over the reals.
        Ok(p.re * q.re < 0.0)
    }

    /// Distance between disjoint geodesics with real endpoints; zero when
    /// they cross or share an endpoint. cosh d = |p+q| / |p-q| after this
    /// geodesic is sent to (0, infinity).
    pub fn distance_to(&self, other: &Geodesic) -> Result<f64, Error> {
        let m = self.standardize()?;
        let p = m.apply(&other.a);
        let q = m.apply(&other.b);
        let (p, q) = match (p.to_complex(), q.to_complex()) {
            (Some(p), Some(q)) => (p.re, q.re),
            _ => return Ok(0.0),
        };
        if p * q <= 0.0 {
            return Ok(0.0);
        }
        let r = (p + q).abs() / (p - q).abs();
        Ok(r.max(1.0).acosh())
    }

    /// Intersection angle in (0, pi/2] for crossing geodesics with real
    /// endpoints: cos θ = |p+q| / |p−q| when the feet separate.
    pub fn angle_with(&self, other: &Geodesic) -> Result<f64, Error> {
        let m = self.standardize()?;
        let p = m.apply(&other.a);
        let q = m.apply(&other.b);
        let (p, q) = match (p.to_complex(), q.to_complex()) {
            (Some(p), Some(q)) => (p.re, q.re),
            _ => return Ok(0.0),
        };
        let r = (p + q).abs() / (p - q).abs();
        Ok(r.clamp(0.0, 1.0).acos())
    }

    /// Common perpendicular of two disjoint real-endpoint geodesics.
    pub fn common_perpendicular(&self, other: &Geodesic) -> Result<Geodesic, Error> {
        let m = self.standardize()?;
        let inv = m.inverse();
        let p = m
            .apply(&other.a)
            .to_complex()
            .ok_or(Error::DegenerateQuadruple)?
            .re;
        let q = m
            .apply(&other.b)
            .to_complex()
            .ok_or(Error::DegenerateQuadruple)?
            .re;
        if p * q <= 0.0 {
            return Err(Error::DegenerateQuadruple);
        }
        let r = (p * q).sqrt();
        Ok(Geodesic::new(
            inv.apply(&SpherePoint::real(-r)),
            inv.apply(&SpherePoint::real(r)),
        ))
    }

    /// Point where this geodesic meets `other`, as an interior point of
    /// the upper half-plane. Both must have real endpoints and cross.
    pub fn crossing_point(&self, other: &Geodesic) -> Result<C64, Error> {
        let m = self.standardize()?;
        let p = m
            .apply(&other.a)
            .to_complex()
            .ok_or(Error::DegenerateQuadruple)?
            .re;
        let q = m
            .apply(&other.b)
            .to_complex()
            .ok_or(Error::DegenerateQuadruple)?
            .re;
        if p * q >= 0.0 {
            return Err(Error::DegenerateQuadruple);
        }
        // On the axis (0, infinity) the crossing sits at height sqrt(|pq|).
        let h = (-p * q).sqrt();
        Ok(m.inverse().apply_h2(C64::new(0.0, h)))
    }

    /// Hyperbolic translation along the oriented geodesic a -> b by signed
    /// distance `d`.
    pub fn translation_along(&self, d: f64) -> Result<Moebius, Error> {
        let m = self.standardize()?;
        // diag(e^{-d/2}, e^{d/2}) attracts to 0; we want motion toward b
        // (the endpoint at infinity) for positive d.
        let t = Moebius::from_diagonal(C64::new((d / 2.0).exp(), 0.0));
        Ok(m.inverse().compose(&t).compose(&m))
    }

    /// Distance from this geodesic to the horoball at the parabolic fixed
    /// point `p` whose Euclidean height is `h` once `p` is sent to
    /// infinity by `norm`.
    pub fn distance_to_horoball(&self, norm: &Moebius, h: f64) -> Result<f64, Error> {
        let a = norm.apply(&self.a).to_complex();
        let b = norm.apply(&self.b).to_complex();
        let (a, b) = match (a, b) {
            (Some(a), Some(b)) => (a.re, b.re),
            _ => return Ok(0.0), // geodesic runs into the cusp
        };
        let apex = (a - b).abs() / 2.0;
        Ok((h / apex).max(1.0).ln())
    }
}

/// Interior point of an ideal triangle: the common point of its three
/// altitudes, pulled back from the symmetric position.
pub fn ideal_triangle_incenter(
    a: &SpherePoint,
    b: &SpherePoint,
    c: &SpherePoint,
) -> Result<C64, Error> {
    // (0, 1, infinity) has incenter e^{i pi/3}.
    let m = Moebius::map_triples(
        (a, b, c),
        (
            &SpherePoint::real(0.0),
            &SpherePoint::real(1.0),
            &SpherePoint::infinity(),
        ),
    )?;
    let z = m.inverse().apply_h2(C64::new(0.5, 3f64.sqrt() / 2.0));
    // Orientation-reversing normalizations land in the lower half-plane;
    // the honest interior point is the conjugate.
    Ok(C64::new(z.re, z.im.abs()))
}
