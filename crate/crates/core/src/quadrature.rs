//! Gauss rules on segments, squares, triangles and convex polygons.

use crate::geometry::{polygon_area, polygon_centroid, Point, Rect};

/// Quadrature points and weights in physical coordinates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuadRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn integrate(&self, mut f: impl FnMut(Point) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }

    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }

    fn extend(&mut self, other: QuadRule) {
        self.points.extend(other.points);
        self.weights.extend(other.weights);
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule on `[0, 1]`.
fn gauss_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (
        x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|w| 0.5 * w).collect(),
    )
}

/// `n x n` tensor Gauss rule on a square element.
pub fn gauss_rect(rect: &Rect, n: usize) -> QuadRule {
    let (t, w) = gauss_unit(n);
    let area = rect.area();
    let mut rule = QuadRule::default();
    for j in 0..n {
        for i in 0..n {
            rule.points
                .push(rect.to_physical(Point::new(t[i], t[j])));
            rule.weights.push(area * w[i] * w[j]);
        }
    }
    rule
}

/// The 3 x 3 tensor Gauss rule used for error norms.
pub fn gauss_rect_9(rect: &Rect) -> QuadRule {
    gauss_rect(rect, 3)
}

/// `n`-point Gauss rule on the segment `ab` (weights sum to its length).
pub fn gauss_segment(a: Point, b: Point, n: usize) -> QuadRule {
    let (t, w) = gauss_unit(n);
    let len = (b - a).norm();
    QuadRule {
        points: t.iter().map(|&t| a.lerp(b, t)).collect(),
        weights: w.iter().map(|w| w * len).collect(),
    }
}

/// Collapsed (Duffy) tensor Gauss rule on a triangle, exact for polynomials of
/// total degree `degree`.
pub fn triangle_rule(a: Point, b: Point, c: Point, degree: usize) -> QuadRule {
    let area = 0.5 * ((b - a).x * (c - a).y - (b - a).y * (c - a).x).abs();
    // (1 - u) a + u ((1 - v) b + v c), jacobian 2 |T| u: degree + 1 in u.
    let n = degree / 2 + 1;
    let (t, w) = gauss_unit(n);
    let mut rule = QuadRule::default();
    for i in 0..n {
        let u = t[i];
        for j in 0..n {
            let v = t[j];
            let p = a * (1.0 - u) + (b * (1.0 - v) + c * v) * u;
            rule.points.push(p);
            rule.weights.push(2.0 * area * u * w[i] * w[j]);
        }
    }
    rule
}

/// Rule for a convex polygon: fan triangulation from its centroid with a
/// triangle rule exact to `degree` on every fan triangle.
///
/// Fan triangles with area below `1e-14 * area(poly)` are dropped.
pub fn polygon_quad(poly: &[Point], degree: usize) -> QuadRule {
    let total = polygon_area(poly).abs();
    let centroid = polygon_centroid(poly);
    let mut rule = QuadRule::default();
    let n = poly.len();
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let tri_area = 0.5 * ((p - centroid).x * (q - centroid).y - (p - centroid).y * (q - centroid).x).abs();
        if tri_area < 1e-14 * total {
            continue;
        }
        rule.extend(triangle_rule(centroid, p, q, degree));
    }
    rule
}

/// The 7 x 7 uniform lattice (corners included) used for the discrete
/// maximum norm.
pub fn sample_grid_49(rect: &Rect) -> Vec<Point> {
    let mut pts = Vec::with_capacity(49);
    for j in 0..7 {
        for i in 0..7 {
            pts.push(rect.to_physical(Point::new(i as f64 / 6.0, j as f64 / 6.0)));
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rules_match_known_values() {
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert!((x[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15);
        for n in 1..=20 {
            let (_, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14, "n = {n}");
        }
        // degree 2n - 1 exactness on x^{2n-2}
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn rect_rule_examples() {
        let unit = Rect::unit();
        let rule = gauss_rect_9(&unit);
        assert_eq!(rule.len(), 9);
        assert!((rule.integrate(|_| 1.0) - 1.0).abs() < 1e-15);
        let v = rule.integrate(|p| p.x.powi(4) * p.y.powi(4));
        assert!((v - 1.0 / 25.0).abs() < 1e-15);
        // (x^2 - y^2)^2 over [-1, 1]^2 = 32/45 (symbolic)
        let big = Rect::new(Point::new(-1.0, -1.0), 2.0);
        let v = gauss_rect_9(&big).integrate(|p| (p.x * p.x - p.y * p.y).powi(2));
        assert!((v - 32.0 / 45.0).abs() < 1e-14);
    }

    #[test]
    fn segment_rule_examples() {
        let (a, b) = (Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        assert!((gauss_segment(a, b, 2).integrate(|p| p.x) - 0.5).abs() < 1e-15);
        assert!((gauss_segment(a, b, 3).integrate(|p| p.x.powi(5)) - 1.0 / 6.0).abs() < 1e-15);

        // r^5 on the bottom boundary edge of (-1,1)^2 against a composite rule
        let r5 = |p: Point| p.norm().powi(5);
        let (a, b) = (Point::new(-1.0, -1.0), Point::new(1.0, -1.0));
        let composite = |m: usize| -> f64 {
            (0..m)
                .map(|i| {
                    let s = a.lerp(b, i as f64 / m as f64);
                    let t = a.lerp(b, (i + 1) as f64 / m as f64);
                    gauss_segment(s, t, 5).integrate(r5)
                })
                .sum()
        };
        let (composite, finer) = (composite(200), composite(400));
        assert!((composite - finer).abs() < 1e-12 * finer);
        let five = gauss_segment(a, b, 5).integrate(r5);
        // r^5 = (x^2 + 1)^{5/2} here is not a polynomial; five points leave a
        // relative error of about 3e-6
        assert!((five - composite).abs() < 1e-5 * composite);
    }

    #[test]
    fn polygon_rule_examples() {
        let square = Rect::unit().polygon();
        assert!((polygon_quad(&square, 4).integrate(|_| 1.0) - 1.0).abs() < 1e-15);
        let tri = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        assert!((polygon_quad(&tri, 1).integrate(|p| p.x) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn grid_49() {
        let g = sample_grid_49(&Rect::unit());
        assert_eq!(g.len(), 49);
        for p in [Point::new(0.0, 0.0), Point::new(0.5, 0.5), Point::new(1.0, 1.0)] {
            assert!(g.iter().any(|q| (*q - p).norm() < 1e-15));
        }
        assert!(((g[1] - g[0]).norm() - 1.0 / 6.0).abs() < 1e-15);
        assert!(((g[7] - g[0]).norm() - 1.0 / 6.0).abs() < 1e-15);
    }
}
