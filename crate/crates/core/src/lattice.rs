//! Exact two-dimensional lattice geometry.
//!
//! Points of the lattice `N` and of its dual `M` share the [`LatticePoint`]
//! type; the pairing is [`LatticePoint::dot`]. Polygons are stored with their
//! vertices in counterclockwise order, starting at the lexicographically
//! smallest vertex, so two polygons with the same vertex set compare equal.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    /// The natural pairing between `N` and `M`.
    pub fn dot(self, other: LatticePoint) -> i64 {
        self.x * other.x + self.y * other.y
    }

    /// `det(self, other)`; positive when `other` is counterclockwise of `self`.
    pub fn det(self, other: LatticePoint) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn content(self) -> i64 {
        self.x.gcd(&self.y)
    }

    pub fn is_primitive(self) -> bool {
        self.content() == 1
    }

    /// Divides out the gcd of the coordinates. The zero vector is returned unchanged.
    pub fn primitive(self) -> LatticePoint {
        let g = self.content();
        if g == 0 {
            self
        } else {
            LatticePoint::new(self.x / g, self.y / g)
        }
    }

    /// Rotation by a quarter turn counterclockwise.
    pub fn rot90(self) -> LatticePoint {
        LatticePoint::new(-self.y, self.x)
    }

    pub fn max_abs(self) -> i64 {
        self.x.abs().max(self.y.abs())
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.x, -self.y)
    }
}

impl Mul<LatticePoint> for i64 {
    type Output = LatticePoint;
    fn mul(self, p: LatticePoint) -> LatticePoint {
        LatticePoint::new(self * p.x, self * p.y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint::new(x, y)
    }
}

/// Solves `a*x + b*y = gcd(a, b)`, returning `(gcd, x, y)` with `gcd >= 0`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// A lattice automorphism, acting on column vectors as `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMap {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl UnimodularMap {
    pub const IDENTITY: UnimodularMap = UnimodularMap { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let m = UnimodularMap { a, b, c, d };
        if m.det().abs() != 1 {
            return Err(Error::InvalidBounds(format!(
                "matrix [[{a},{b}],[{c},{d}]] is not unimodular"
            )));
        }
        Ok(m)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.a * p.x + self.b * p.y, self.c * p.x + self.d * p.y)
    }

    pub fn apply_rational(&self, p: &RationalPoint) -> RationalPoint {
        RationalPoint {
            x: rat(self.a) * &p.x + rat(self.b) * &p.y,
            y: rat(self.c) * &p.x + rat(self.d) * &p.y,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &UnimodularMap) -> UnimodularMap {
        UnimodularMap {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> UnimodularMap {
        let det = self.det();
        UnimodularMap {
            a: self.d * det,
            b: -self.b * det,
            c: -self.c * det,
            d: self.a * det,
        }
    }

    pub fn transpose(&self) -> UnimodularMap {
        UnimodularMap { a: self.a, b: self.c, c: self.b, d: self.d }
    }

    /// The induced action on the dual lattice, `(Uᵀ)⁻¹`, which preserves the pairing.
    pub fn dual(&self) -> UnimodularMap {
        self.transpose().inverse()
    }

    pub fn apply_polygon(&self, p: &Polygon) -> Polygon {
        let pts: Vec<_> = p.vertices().iter().map(|v| self.apply(*v)).collect();
        Polygon::new(&pts).expect("unimodular image of a Fano polygon is Fano")
    }

    /// A map in `SL₂(ℤ)` sending the primitive vector `v` to `(1, 0)`.
    pub fn sending_to_e1(v: LatticePoint) -> UnimodularMap {
        let (g, s, t) = extended_gcd(v.x, v.y);
        debug_assert_eq!(g, 1, "vector {v} is not primitive");
        UnimodularMap { a: s, b: t, c: -v.y, d: v.x }
    }
}

fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i128 {
    let (ax, ay) = ((a.x - o.x) as i128, (a.y - o.y) as i128);
    let (bx, by) = ((b.x - o.x) as i128, (b.y - o.y) as i128);
    ax * by - ay * bx
}

/// Counterclockwise vertices of the convex hull, starting at the
/// lexicographically smallest point. Collinear boundary points are dropped.
pub fn hull_vertices(points: &[LatticePoint]) -> Result<Vec<LatticePoint>> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    let mut lower: Vec<LatticePoint> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    Ok(lower)
}

/// A Fano polygon: a convex lattice polygon with the origin in its strict
/// interior and primitive vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polygon {
    vertices: Vec<LatticePoint>,
}

/// Builds the convex hull of `points` and checks that it is a Fano polygon.
pub fn convex_hull(points: &[LatticePoint]) -> Result<Polygon> {
    Polygon::new(points)
}

impl Polygon {
    pub fn new(points: &[LatticePoint]) -> Result<Self> {
        let vertices = hull_vertices(points)?;
        let k = vertices.len();
        for i in 0..k {
            let (a, b) = (vertices[i], vertices[(i + 1) % k]);
            if a.det(b) <= 0 {
                return Err(Error::NotFano(format!(
                    "origin is not strictly inside (edge {a}-{b})"
                )));
            }
        }
        if let Some(v) = vertices.iter().find(|v| !v.is_primitive()) {
            return Err(Error::NotFano(format!("vertex {v} is not primitive")));
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> LatticePoint {
        self.vertices[i % self.vertices.len()]
    }

    pub fn edges(&self) -> Vec<Edge> {
        edges(self)
    }

    pub fn max_abs_coordinate(&self) -> i64 {
        self.vertices.iter().map(|v| v.max_abs()).max().unwrap_or(0)
    }

    /// Number of lattice points in the closed polygon, via Pick's theorem.
    pub fn lattice_point_count(&self) -> u64 {
        let k = self.vertices.len();
        let mut twice_area: i128 = 0;
        let mut boundary: i128 = 0;
        for i in 0..k {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
            twice_area += a.det(b) as i128;
            boundary += (b - a).content() as i128;
        }
        ((twice_area + boundary) / 2 + 1) as u64
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.edges()
            .iter()
            .all(|e| e.inner_normal.dot(p) >= -e.height)
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A side of a polygon, oriented counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub start: LatticePoint,
    pub end: LatticePoint,
    /// Lattice length of the side.
    pub width: i64,
    /// Lattice distance of the supporting line from the origin.
    pub height: i64,
    /// Primitive functional in `M` taking the value `-height` on the side.
    pub inner_normal: LatticePoint,
}

impl Edge {
    pub fn direction(&self) -> LatticePoint {
        (self.end - self.start).primitive()
    }

    /// The lattice points of the edge from start to end.
    pub fn points(&self) -> Vec<LatticePoint> {
        let d = self.direction();
        (0..=self.width).map(|k| self.start + k * d).collect()
    }
}

pub fn edges(p: &Polygon) -> Vec<Edge> {
    let k = p.vertices.len();
    (0..k)
        .map(|i| {
            let (start, end) = (p.vertices[i], p.vertices[(i + 1) % k]);
            let diff = end - start;
            let width = diff.content();
            let dir = diff.primitive();
            let inner_normal = dir.rot90();
            let height = -inner_normal.dot(start);
            Edge { start, end, width, height, inner_normal }
        })
        .collect()
}

/// All lattice points of the closed polygon, sorted lexicographically.
pub fn lattice_points(p: &Polygon) -> Vec<LatticePoint> {
    let es = edges(p);
    let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for v in &p.vertices {
        x0 = x0.min(v.x);
        x1 = x1.max(v.x);
        y0 = y0.min(v.y);
        y1 = y1.max(v.y);
    }
    let mut out = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            let q = LatticePoint::new(x, y);
            if es.iter().all(|e| e.inner_normal.dot(q) >= -e.height) {
                out.push(q);
            }
        }
    }
    out
}

/// Result of [`normal_form`]: the canonical polygon and every map carrying
/// the input onto it.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub polygon: Polygon,
    pub maps: Vec<UnimodularMap>,
}

/// Canonical representative of the unimodular equivalence class of `p`.
pub fn normal_form(p: &Polygon) -> Polygon {
    normal_form_with_maps(p).polygon
}

/// Every cyclic relabelling of the vertices, in both directions, is brought
/// to Hermite form: the first vertex goes to `(1,0)` and the second to `(b,c)`
/// with `0 <= b < c`. The stabiliser of `(1,0)` in `GL₂(ℤ)` makes this image
/// unique, and the lexicographically smallest image sequence wins.
pub fn normal_form_with_maps(p: &Polygon) -> NormalForm {
    let k = p.vertices.len();
    let mut best: Option<Vec<LatticePoint>> = None;
    let mut maps = Vec::new();
    for start in 0..k {
        for dir in [1isize, -1] {
            let at = |j: usize| -> LatticePoint {
                let idx = (start as isize + dir * j as isize).rem_euclid(k as isize) as usize;
                p.vertices[idx]
            };
            let mut u = UnimodularMap::sending_to_e1(at(0));
            let second = u.apply(at(1));
            if second.y < 0 {
                u = UnimodularMap { a: 1, b: 0, c: 0, d: -1 }.compose(&u);
            }
            let second = u.apply(at(1));
            let shift = second.x.div_euclid(second.y);
            u = UnimodularMap { a: 1, b: -shift, c: 0, d: 1 }.compose(&u);
            let image: Vec<_> = (0..k).map(|j| u.apply(at(j))).collect();
            match &best {
                Some(b) if image > *b => {}
                Some(b) if image == *b => maps.push(u),
                _ => {
                    best = Some(image);
                    maps.clear();
                    maps.push(u);
                }
            }
        }
    }
    let polygon = Polygon::new(&best.expect("polygon has vertices")).expect("image is Fano");
    NormalForm { polygon, maps }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        RationalPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RationalPoint { x: rat(x), y: rat(y) }
    }

    pub fn pair(&self, v: LatticePoint) -> Rational {
        &self.x * rat(v.x) + &self.y * rat(v.y)
    }
}

impl From<LatticePoint> for RationalPoint {
    fn from(p: LatticePoint) -> Self {
        RationalPoint::from_ints(p.x, p.y)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

fn rcross(o: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> Rational {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

/// Counterclockwise hull of rational points, starting at the lexicographically
/// smallest. Collinear points are dropped.
pub fn rational_hull(points: &[RationalPoint]) -> Result<Vec<RationalPoint>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    let zero = Rational::zero();
    let mut lower: Vec<RationalPoint> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && rcross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= zero {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<RationalPoint> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && rcross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= zero {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    Ok(lower)
}

/// A convex polygon with rational vertices, stored like [`Polygon`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolygon {
    vertices: Vec<RationalPoint>,
}

impl RationalPolygon {
    pub fn new(points: &[RationalPoint]) -> Result<Self> {
        Ok(RationalPolygon { vertices: rational_hull(points)? })
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn area(&self) -> Rational {
        let k = self.vertices.len();
        let mut twice = Rational::zero();
        for i in 0..k {
            let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % k]);
            twice += &a.x * &b.y - &a.y * &b.x;
        }
        twice / rat(2)
    }

    pub fn map(&self, u: &UnimodularMap) -> RationalPolygon {
        let pts: Vec<_> = self.vertices.iter().map(|v| u.apply_rational(v)).collect();
        RationalPolygon::new(&pts).expect("image of a polygon under a lattice map")
    }
}

impl fmt::Display for RationalPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// The dual polygon `{u : <ρ,u> >= -1}`; its vertex for the edge `[ρ_i, ρ_{i+1}]`
/// is the solution of `<ρ_i,u> = <ρ_{i+1},u> = -1`.
pub fn dual(p: &Polygon) -> RationalPolygon {
    let pts: Vec<_> = dual_vertices(p);
    RationalPolygon::new(&pts).expect("dual of a Fano polygon is a polygon")
}

/// Dual vertices indexed by edge, in the polygon's own edge order.
pub fn dual_vertices(p: &Polygon) -> Vec<RationalPoint> {
    edges(p)
        .iter()
        .map(|e| {
            let h = rat(e.height);
            RationalPoint::new(rat(e.inner_normal.x) / &h, rat(e.inner_normal.y) / &h)
        })
        .collect()
}

/// `K²` of the toric surface: twice the area of the dual polygon.
pub fn degree(p: &Polygon) -> Rational {
    let verts = dual_vertices(p);
    let k = verts.len();
    let mut twice = Rational::zero();
    for i in 0..k {
        let (a, b) = (&verts[i], &verts[(i + 1) % k]);
        twice += &a.x * &b.y - &a.y * &b.x;
    }
    twice
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn abs_rational(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<LatticePoint> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn poly(v: &[(i64, i64)]) -> Polygon {
        Polygon::new(&pts(v)).unwrap()
    }

    fn rpoly(v: &[(Rational, Rational)]) -> RationalPolygon {
        let p: Vec<_> = v.iter().map(|(x, y)| RationalPoint::new(x.clone(), y.clone())).collect();
        RationalPolygon::new(&p).unwrap()
    }

    #[test]
    fn hull_drops_interior_point() {
        let p = convex_hull(&pts(&[(1, 0), (0, 1), (-1, -1), (0, 0)])).unwrap();
        assert_eq!(p.vertices(), &pts(&[(-1, -1), (1, 0), (0, 1)])[..]);
    }

    #[test]
    fn hull_of_p12_support() {
        let p = convex_hull(&pts(&[(-3, 1), (3, 1), (0, -1), (-1, 0), (1, 0)])).unwrap();
        assert_eq!(p.vertices(), &pts(&[(-3, 1), (0, -1), (3, 1)])[..]);
    }

    #[test]
    fn collinear_input_is_degenerate() {
        assert_eq!(convex_hull(&pts(&[(1, 0), (2, 0), (3, 0)])), Err(Error::DegenerateHull));
    }

    #[test]
    fn non_fano_inputs() {
        assert!(matches!(convex_hull(&pts(&[(1, 0), (0, 1), (1, 1)])), Err(Error::NotFano(_))));
        // origin on the boundary
        assert!(matches!(convex_hull(&pts(&[(1, 0), (-1, 0), (0, 1)])), Err(Error::NotFano(_))));
        // non-primitive vertex
        assert!(matches!(convex_hull(&pts(&[(2, 0), (0, 1), (-1, -1)])), Err(Error::NotFano(_))));
    }

    #[test]
    fn normal_form_examples() {
        let tri = poly(&[(1, 0), (0, 1), (-1, -1)]);
        let swapped = poly(&[(0, 1), (1, 0), (-1, -1)]);
        assert_eq!(normal_form(&tri), normal_form(&swapped));
        let u = UnimodularMap::new(1, 1, 0, -1).unwrap();
        let image = u.apply_polygon(&tri);
        assert_eq!(image, poly(&[(1, 0), (1, -1), (-2, 1)]));
        assert_eq!(normal_form(&tri), normal_form(&image));
        let square = poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)]);
        assert_ne!(normal_form(&tri), normal_form(&square));
    }

    #[test]
    fn normal_form_maps_realise_the_form() {
        let p = poly(&[(-3, 1), (3, 1), (0, -1)]);
        let nf = normal_form_with_maps(&p);
        // the triangle has a reflection symmetry
        assert_eq!(nf.maps.len(), 2);
        for m in &nf.maps {
            assert_eq!(m.apply_polygon(&p), nf.polygon);
        }
    }

    #[test]
    fn dual_examples() {
        let d = dual(&poly(&[(1, 0), (0, 1), (-1, -1)]));
        assert_eq!(d, rpoly(&[(rat(2), rat(-1)), (rat(-1), rat(2)), (rat(-1), rat(-1))]));
        let d = dual(&poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)]));
        assert_eq!(
            d,
            rpoly(&[(rat(1), rat(0)), (rat(0), rat(1)), (rat(-1), rat(0)), (rat(0), rat(-1))])
        );
        let d = dual(&poly(&[(-3, 1), (3, 1), (0, -1)]));
        assert_eq!(d, rpoly(&[(rat(0), rat(-1)), (ratio(-2, 3), rat(1)), (ratio(2, 3), rat(1))]));
    }

    #[test]
    fn edge_measurements() {
        for e in edges(&poly(&[(1, 0), (0, 1), (-1, -1)])) {
            assert_eq!((e.width, e.height), (1, 1));
        }
        let mut wh: Vec<_> =
            edges(&poly(&[(-3, 1), (3, 1), (0, -1)])).iter().map(|e| (e.width, e.height)).collect();
        wh.sort();
        assert_eq!(wh, vec![(1, 3), (1, 3), (6, 1)]);
        let es = edges(&poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)]));
        assert_eq!(es.len(), 4);
        for e in es {
            assert_eq!((e.width, e.height), (2, 1));
            assert_eq!(e.inner_normal.dot(e.start), -1);
            assert_eq!(e.inner_normal.dot(e.end), -1);
        }
    }

    #[test]
    fn lattice_point_examples() {
        let tri = poly(&[(1, 0), (0, 1), (-1, -1)]);
        assert_eq!(lattice_points(&tri).len(), 4);
        let square = poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)]);
        assert_eq!(lattice_points(&square).len(), 9);
        let p12 = poly(&[(-3, 1), (3, 1), (0, -1)]);
        let lp = lattice_points(&p12);
        assert_eq!(lp.len(), 11);
        assert_eq!(p12.lattice_point_count(), 11);
        for q in [(-1, 0), (0, 0), (1, 0), (0, -1)] {
            assert!(lp.contains(&q.into()));
        }
        assert_eq!(lp.iter().filter(|q| q.y == 1).count(), 7);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&poly(&[(1, 0), (0, 1), (-1, -1)])), rat(9));
        assert_eq!(degree(&poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)])), rat(4));
        assert_eq!(degree(&poly(&[(-3, 1), (3, 1), (0, -1)])), ratio(8, 3));
        assert_eq!(dual(&poly(&[(-3, 1), (3, 1), (0, -1)])).area(), ratio(4, 3));
    }

    #[test]
    fn extended_gcd_identity() {
        for a in -20..20 {
            for b in -20..20 {
                let (g, s, t) = extended_gcd(a, b);
                assert_eq!(g, a.gcd(&b));
                assert_eq!(a * s + b * t, g);
            }
        }
    }

    #[test]
    fn unimodular_inverse_and_dual() {
        let u = UnimodularMap::new(2, 1, 1, 1).unwrap();
        assert_eq!(u.compose(&u.inverse()), UnimodularMap::IDENTITY);
        let p = LatticePoint::new(3, -2);
        let m = LatticePoint::new(-1, 5);
        assert_eq!(u.apply(p).dot(u.dual().apply(m)), p.dot(m));
        assert!(UnimodularMap::new(2, 0, 0, 1).is_err());
    }
}
