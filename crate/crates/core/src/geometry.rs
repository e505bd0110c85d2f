//! Level-set interfaces and their intersection with Cartesian elements.

use std::ops::{Add, Mul, Sub};

use crate::error::{IfeError, Result};

/// Relative distance (in units of `h`) under which an edge crossing is snapped
/// onto the nearest element vertex.
pub const DEFAULT_SNAP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counter-clockwise rotation by 90 degrees.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// Side of the interface. `Minus` is the region where the level set is negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Minus,
    Plus,
}

impl Region {
    pub fn opposite(self) -> Region {
        match self {
            Region::Minus => Region::Plus,
            Region::Plus => Region::Minus,
        }
    }
}

/// An interface given as the zero set of a scalar function.
pub trait LevelSet: Sync {
    fn value(&self, p: Point) -> f64;

    fn gradient(&self, _p: Point) -> Option<Point> {
        None
    }

    /// Parameters `t` in the closed interval `[0, 1]` at which the level set
    /// changes sign along `a + t (b - a)`, sorted ascending.
    ///
    /// The default samples the segment and bisects every bracketed sign change,
    /// so two crossings closer than the sampling step go undetected.
    fn segment_roots(&self, a: Point, b: Point) -> Vec<f64> {
        const SAMPLES: usize = 16;
        let sign = |t: f64| self.value(a.lerp(b, t)) < 0.0;
        let mut roots = Vec::new();
        let mut t_prev = 0.0;
        let mut s_prev = sign(0.0);
        for i in 1..=SAMPLES {
            let t = i as f64 / SAMPLES as f64;
            let s = sign(t);
            if s != s_prev {
                let (mut lo, mut hi) = (t_prev, t);
                while hi - lo > 1e-14 {
                    let mid = 0.5 * (lo + hi);
                    if sign(mid) == s_prev {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            t_prev = t;
            s_prev = s;
        }
        roots
    }
}

/// Circle `(x - cx)^2 + (y - cy)^2 - r^2`; negative inside.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Self {
        Circle { center, radius }
    }

    pub fn centered(radius: f64) -> Self {
        Circle::new(Point::default(), radius)
    }
}

impl LevelSet for Circle {
    fn value(&self, p: Point) -> f64 {
        let q = p - self.center;
        q.dot(q) - self.radius * self.radius
    }

    fn gradient(&self, p: Point) -> Option<Point> {
        Some((p - self.center) * 2.0)
    }

    fn segment_roots(&self, a: Point, b: Point) -> Vec<f64> {
        // |a - c + t d|^2 = r^2
        let d = b - a;
        let w = a - self.center;
        let qa = d.dot(d);
        let qb = 2.0 * d.dot(w);
        let qc = w.dot(w) - self.radius * self.radius;
        let disc = qb * qb - 4.0 * qa * qc;
        if qa == 0.0 || disc <= 0.0 {
            return Vec::new();
        }
        let sq = disc.sqrt();
        let q = -0.5 * (qb + qb.signum() * sq);
        let (t1, t2) = if q == 0.0 {
            let t = (-qb / (2.0 * qa)).abs();
            (-t, t)
        } else {
            let r1 = q / qa;
            let r2 = qc / q;
            (r1.min(r2), r1.max(r2))
        };
        [t1, t2]
            .into_iter()
            .filter(|t| (0.0..=1.0).contains(t))
            .collect()
    }
}

/// Straight interface `normal . (p - origin) = 0`; negative behind the normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    pub origin: Point,
    pub normal: Point,
}

impl HalfPlane {
    pub fn new(origin: Point, normal: Point) -> Self {
        HalfPlane { origin, normal }
    }

    /// Line through `p` and `q`; `minus_side` lies in the negative half.
    pub fn through(p: Point, q: Point, minus_side: Point) -> Self {
        let mut normal = (q - p).perp();
        if normal.dot(minus_side - p) > 0.0 {
            normal = normal * -1.0;
        }
        HalfPlane::new(p, normal)
    }
}

impl LevelSet for HalfPlane {
    fn value(&self, p: Point) -> f64 {
        self.normal.dot(p - self.origin)
    }

    fn gradient(&self, _p: Point) -> Option<Point> {
        Some(self.normal)
    }

    fn segment_roots(&self, a: Point, b: Point) -> Vec<f64> {
        let va = self.value(a);
        let vb = self.value(b);
        if (va < 0.0) == (vb < 0.0) || va == vb {
            return Vec::new();
        }
        vec![va / (va - vb)]
    }
}

/// Any closure works as a level set.
impl<F> LevelSet for F
where
    F: Fn(Point) -> f64 + Sync,
{
    fn value(&self, p: Point) -> f64 {
        self(p)
    }
}

/// Region membership with the tie-break `|value| <= tol => Plus`.
pub fn side_of<L: LevelSet + ?Sized>(ls: &L, p: Point, tol: f64) -> Region {
    if ls.value(p) < -tol {
        Region::Minus
    } else {
        Region::Plus
    }
}

/// Crossing of the interface strictly inside the segment `ab`, if any.
pub fn edge_intersection<L: LevelSet + ?Sized>(ls: &L, a: Point, b: Point) -> Result<Option<Point>> {
    let roots: Vec<f64> = ls
        .segment_roots(a, b)
        .into_iter()
        .filter(|&t| t > 0.0 && t < 1.0)
        .collect();
    match roots.as_slice() {
        [] => Ok(None),
        [t] => Ok(Some(a.lerp(b, *t))),
        _ => Err(IfeError::HypothesisViolation {
            element: None,
            reason: format!(
                "multiple roots on edge ({}, {})-({}, {})",
                a.x, a.y, b.x, b.y
            ),
        }),
    }
}

/// Axis-aligned square element `[x0, x0 + h] x [y0, y0 + h]`.
///
/// Vertices are numbered `A1 = (x0, y0)`, `A2 = (x0 + h, y0)`,
/// `A3 = (x0, y0 + h)`, `A4 = (x0 + h, y0 + h)`, and the local edges are
/// `g1 = A1A2` (bottom), `g2 = A2A4` (right), `g3 = A4A3` (top),
/// `g4 = A3A1` (left), i.e. counter-clockwise. Edges are indexed `0..4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub origin: Point,
    pub h: f64,
}

impl Rect {
    pub fn new(origin: Point, h: f64) -> Self {
        Rect { origin, h }
    }

    pub fn unit() -> Self {
        Rect::new(Point::new(0.0, 0.0), 1.0)
    }

    pub fn area(&self) -> f64 {
        self.h * self.h
    }

    pub fn center(&self) -> Point {
        self.origin + Point::new(0.5 * self.h, 0.5 * self.h)
    }

    /// Vertex `A{k+1}`.
    pub fn vertex(&self, k: usize) -> Point {
        let (i, j) = [(0, 0), (1, 0), (0, 1), (1, 1)][k];
        self.origin + Point::new(i as f64 * self.h, j as f64 * self.h)
    }

    /// Counter-clockwise start and end vertex indices of local edge `k`.
    pub fn edge_vertices_ccw(k: usize) -> (usize, usize) {
        [(0, 1), (1, 3), (3, 2), (2, 0)][k]
    }

    /// Endpoints of edge `k` ordered by increasing coordinate (left to right
    /// or bottom to top). Neighbouring elements see a shared edge identically.
    pub fn edge_canonical(&self, k: usize) -> (Point, Point) {
        let (a, b) = [(0, 1), (1, 3), (2, 3), (0, 2)][k];
        (self.vertex(a), self.vertex(b))
    }

    pub fn edge_ccw(&self, k: usize) -> (Point, Point) {
        let (a, b) = Self::edge_vertices_ccw(k);
        (self.vertex(a), self.vertex(b))
    }

    pub fn edge_midpoint(&self, k: usize) -> Point {
        let (a, b) = self.edge_canonical(k);
        a.lerp(b, 0.5)
    }

    /// Counter-clockwise polygon of the whole square.
    pub fn polygon(&self) -> Vec<Point> {
        [0, 1, 3, 2].iter().map(|&k| self.vertex(k)).collect()
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let q = p - self.origin;
        q.x >= -tol && q.y >= -tol && q.x <= self.h + tol && q.y <= self.h + tol
    }

    /// Element-local coordinates scaled to `[0, 1]^2`.
    pub fn to_local(&self, p: Point) -> Point {
        (p - self.origin) * (1.0 / self.h)
    }

    pub fn to_physical(&self, q: Point) -> Point {
        self.origin + q * self.h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutKind {
    /// Cut points on adjacent edges.
    TypeI,
    /// Cut points on opposite edges.
    TypeII,
}

/// An element split into two convex polygons by the segment `DE`.
#[derive(Clone, Debug, PartialEq)]
pub struct CutElement {
    pub rect: Rect,
    pub kind: CutKind,
    pub d_point: Point,
    pub e_point: Point,
    /// Local edge indices (`0..4`) holding `D` and `E`; the first is smaller.
    pub cut_edges: [usize; 2],
    /// Canonical edge parameters of `D` and `E` in `(0, 1)`, measured from the
    /// left or bottom endpoint of their edge.
    pub d: f64,
    pub e: f64,
    pub poly_minus: Vec<Point>,
    pub poly_plus: Vec<Point>,
    /// Unit normal of `DE` pointing from `poly_minus` into `poly_plus`.
    pub normal: Point,
}

impl CutElement {
    /// Splits `rect` along the segment joining the points at canonical
    /// parameters `t1` on edge `k1` and `t2` on edge `k2`. The polygon with
    /// the vertex of largest `|weight|` takes the region `region_of` reports there;
    /// the other polygon takes the opposite region.
    pub fn from_edge_params(
        rect: Rect,
        (k1, t1): (usize, f64),
        (k2, t2): (usize, f64),
        region_of: impl Fn(Point) -> (Region, f64),
    ) -> Result<Self> {
        if k1 == k2 || k1 > 3 || k2 > 3 {
            return Err(IfeError::HypothesisViolation {
                element: None,
                reason: format!("cut points must lie on distinct edges, got {k1} and {k2}"),
            });
        }
        let ((k1, t1), (k2, t2)) = if k1 < k2 {
            ((k1, t1), (k2, t2))
        } else {
            ((k2, t2), (k1, t1))
        };
        let point_on = |k: usize, t: f64| {
            let (a, b) = rect.edge_canonical(k);
            a.lerp(b, t)
        };
        let d_point = point_on(k1, t1);
        let e_point = point_on(k2, t2);

        // Walk the boundary counter-clockwise inserting D and E.
        let mut ring = Vec::with_capacity(6);
        let (mut i_d, mut i_e) = (0, 0);
        for k in 0..4 {
            ring.push(rect.vertex(Rect::edge_vertices_ccw(k).0));
            if k == k1 {
                i_d = ring.len();
                ring.push(d_point);
            } else if k == k2 {
                i_e = ring.len();
                ring.push(e_point);
            }
        }
        let poly_a: Vec<Point> = ring[i_d..=i_e].to_vec();
        let poly_b: Vec<Point> = ring[i_e..].iter().chain(&ring[..=i_d]).copied().collect();

        // Decide the region of poly_a from its most decisive square vertex.
        let (region_a, _) = poly_a[1..poly_a.len() - 1]
            .iter()
            .map(|&v| region_of(v))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("each polygon holds at least one square vertex");
        let (poly_minus, poly_plus) = match region_a {
            Region::Minus => (poly_a, poly_b),
            Region::Plus => (poly_b, poly_a),
        };

        let de = e_point - d_point;
        let mut normal = de.perp() * (1.0 / de.norm());
        if normal.dot(polygon_centroid(&poly_minus) - d_point) > 0.0 {
            normal = normal * -1.0;
        }

        let kind = if k2 - k1 == 2 {
            CutKind::TypeII
        } else {
            CutKind::TypeI
        };
        Ok(CutElement {
            rect,
            kind,
            d_point,
            e_point,
            cut_edges: [k1, k2],
            d: t1,
            e: t2,
            poly_minus,
            poly_plus,
            normal,
        })
    }

    /// Region of `p` relative to the line `DE`; points on the line are `Minus`.
    pub fn region_at(&self, p: Point) -> Region {
        if (p - self.d_point).dot(self.normal) > 0.0 {
            Region::Plus
        } else {
            Region::Minus
        }
    }

    pub fn polygon(&self, region: Region) -> &[Point] {
        match region {
            Region::Minus => &self.poly_minus,
            Region::Plus => &self.poly_plus,
        }
    }

    /// Cut point lying on local edge `k`, if any.
    pub fn cut_point_on(&self, k: usize) -> Option<Point> {
        if self.cut_edges[0] == k {
            Some(self.d_point)
        } else if self.cut_edges[1] == k {
            Some(self.e_point)
        } else {
            None
        }
    }

    pub fn split_line(&self) -> SplitLine {
        SplitLine {
            origin: self.d_point,
            normal: self.normal,
        }
    }
}

/// Oriented line separating the two pieces of a cut element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitLine {
    pub origin: Point,
    /// Points into the `Plus` piece.
    pub normal: Point,
}

impl SplitLine {
    pub fn region_at(&self, p: Point) -> Region {
        if (p - self.origin).dot(self.normal) > 0.0 {
            Region::Plus
        } else {
            Region::Minus
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ElementCut {
    Uncut(Region),
    Cut(Box<CutElement>),
}

impl ElementCut {
    pub fn as_cut(&self) -> Option<&CutElement> {
        match self {
            ElementCut::Cut(c) => Some(c),
            ElementCut::Uncut(_) => None,
        }
    }

    pub fn is_cut(&self) -> bool {
        matches!(self, ElementCut::Cut(_))
    }
}

/// Classifies `rect` against the interface.
///
/// Crossings within `snap_tol * h` of a vertex are snapped onto it and
/// ignored. With fewer than two remaining crossings the element is uncut and
/// takes the region of its centroid.
pub fn classify_element<L: LevelSet + ?Sized>(
    ls: &L,
    rect: Rect,
    snap_tol: f64,
) -> Result<ElementCut> {
    let mut crossings = Vec::with_capacity(2);
    for k in 0..4 {
        let (a, b) = rect.edge_canonical(k);
        let roots: Vec<f64> = ls
            .segment_roots(a, b)
            .into_iter()
            .filter(|&t| t > snap_tol && t < 1.0 - snap_tol)
            .collect();
        match roots.as_slice() {
            [] => {}
            [t] => crossings.push((k, *t)),
            _ => {
                return Err(IfeError::HypothesisViolation {
                    element: None,
                    reason: format!("edge {} is crossed {} times", k + 1, roots.len()),
                })
            }
        }
    }
    match crossings.as_slice() {
        [] | [_] => Ok(ElementCut::Uncut(side_of(ls, rect.center(), 0.0))),
        [c1, c2] => {
            let cut = CutElement::from_edge_params(rect, *c1, *c2, |p| {
                let v = ls.value(p);
                (side_of(ls, p, 0.0), v)
            })?;
            Ok(ElementCut::Cut(Box::new(cut)))
        }
        more => Err(IfeError::HypothesisViolation {
            element: None,
            reason: format!("{} edges are crossed", more.len()),
        }),
    }
}

/// Signed (shoelace) area; positive for counter-clockwise polygons.
pub fn polygon_area(poly: &[Point]) -> f64 {
    // Relative to the first vertex so small polygons far from the origin keep
    // their digits.
    let o = poly[0];
    let n = poly.len();
    0.5 * (1..n)
        .map(|i| {
            let (p, q) = (poly[i] - o, poly[(i + 1) % n] - o);
            p.x * q.y - q.x * p.y
        })
        .sum::<f64>()
}

pub fn polygon_centroid(poly: &[Point]) -> Point {
    let o = poly[0];
    let n = poly.len();
    let mut a = 0.0;
    let mut c = Point::default();
    for i in 0..n {
        let (p, q) = (poly[i] - o, poly[(i + 1) % n] - o);
        let w = p.x * q.y - q.x * p.y;
        a += w;
        c = c + (p + q) * w;
    }
    if a.abs() < f64::MIN_POSITIVE {
        let s = poly.iter().fold(Point::default(), |s, &p| s + (p - o));
        return o + s * (1.0 / n as f64);
    }
    o + c * (1.0 / (3.0 * a))
}
