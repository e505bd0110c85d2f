#![allow(dead_code)]

use ife_core::geometry::{CutElement, HalfPlane, LevelSet};
use ife_core::{Coefficient, DofKind, Point, Rect, Region};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Point at canonical parameter `t` on edge `k` of `rect`.
pub fn edge_point(rect: &Rect, k: usize, t: f64) -> Point {
    let (a, b) = rect.edge_canonical(k);
    a.lerp(b, t)
}

/// Cut of `rect` by the straight line through the given edge points, with
/// square vertex `minus_vertex` on the minus side.
pub fn straight_cut(rect: Rect, c1: (usize, f64), c2: (usize, f64), minus_vertex: usize) -> CutElement {
    let d = edge_point(&rect, c1.0, c1.1);
    let e = edge_point(&rect, c2.0, c2.1);
    let ls = HalfPlane::through(d, e, rect.vertex(minus_vertex));
    CutElement::from_edge_params(rect, c1, c2, |p| {
        let v = ls.value(p);
        (if v < 0.0 { Region::Minus } else { Region::Plus }, v)
    })
    .expect("valid cut")
}

/// A random element, cut, coefficient pair and DOF kind.
pub struct Sample {
    pub cut: CutElement,
    pub beta: Coefficient,
    pub kind: DofKind,
}

pub fn random_sample(rng: &mut impl Rng) -> Sample {
    let h = 10f64.powf(rng.gen_range(-3.0..0.0));
    let origin = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let rect = Rect::new(origin, h);
    let (k1, k2) = if rng.gen_bool(0.5) {
        // Type I: adjacent edges.
        [(0, 1), (1, 2), (2, 3), (0, 3)][rng.gen_range(0..4)]
    } else {
        [(0, 2), (1, 3)][rng.gen_range(0..2)]
    };
    let d = rng.gen_range(0.01..0.99);
    let e = rng.gen_range(0.01..0.99);
    let cut = straight_cut(rect, (k1, d), (k2, e), rng.gen_range(0..4));
    let log_beta = |rng: &mut dyn rand::RngCore| 10f64.powf(rng.gen_range(-3.0..4.0));
    let beta = Coefficient::new(log_beta(rng), log_beta(rng)).unwrap();
    let kind = if rng.gen_bool(0.5) { DofKind::Integral } else { DofKind::Midpoint };
    Sample { cut, beta, kind }
}

/// Random point strictly inside the polygon of `region` (not uniformly
/// distributed).
pub fn point_in(rng: &mut impl Rng, cut: &CutElement, region: Region) -> Point {
    let poly = cut.polygon(region);
    let k = rng.gen_range(1..poly.len() - 1);
    let (mut u, mut v) = (rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99));
    if u + v > 0.98 {
        (u, v) = (0.99 - u, 0.99 - v);
    }
    poly[0] + (poly[k] - poly[0]) * u + (poly[k + 1] - poly[0]) * v
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `int_0^1 (x0 (1-t) + x1 t)^p (y0 (1-t) + y1 t)^q dt` from Beta integrals.
fn segment_moment(a: Point, b: Point, p: u32, q: u32) -> f64 {
    let m = p + q;
    let mut total = 0.0;
    for k in 0..=p {
        for l in 0..=q {
            let coeff = binomial(p, k) * b.x.powi(k as i32) * a.x.powi((p - k) as i32)
                * binomial(q, l) * b.y.powi(l as i32) * a.y.powi((q - l) as i32);
            let s = k + l;
            total += coeff * factorial(s) * factorial(m - s) / factorial(m + 1);
        }
    }
    total
}

/// `int_P x^i y^j dA` by Green's theorem: the boundary integral of
/// `x^(i+1) y^j / (i+1) dy`.
pub fn green_moment(poly: &[Point], i: u32, j: u32) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|k| {
            let (a, b) = (poly[k], poly[(k + 1) % n]);
            (b.y - a.y) * segment_moment(a, b, i + 1, j) / (i + 1) as f64
        })
        .sum()
}

/// Fourth-order central difference Laplacian with step `h`.
pub fn laplacian(u: impl Fn(Point) -> f64, p: Point, h: f64) -> f64 {
    let c = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
    let mut s = 0.0;
    for (k, w) in c.iter().enumerate() {
        let t = (k as f64 - 2.0) * h;
        s += w * (u(p + Point::new(t, 0.0)) + u(p + Point::new(0.0, t)));
    }
    s / (h * h)
}
