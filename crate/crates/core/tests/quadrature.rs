mod common;

use common::{green_moment, random_sample, rng};
use ife_core::geometry::polygon_area;
use ife_core::quadrature::{gauss_rect, gauss_rect_9, gauss_segment, polygon_quad, triangle_rule, QuadRule};
use ife_core::{Point, Rect, Region};
use rand::Rng;

fn check_rule(rule: &QuadRule, measure: f64, contains: impl Fn(Point) -> bool) {
    assert!(rule.iter().all(|(_, w)| w > 0.0));
    assert!((rule.measure() - measure).abs() <= 1e-13 * measure, "{} vs {measure}", rule.measure());
    assert!(rule.iter().all(|(p, _)| contains(p)));
}

#[test]
fn polygon_rules_integrate_polynomials_exactly() {
    let mut rng = rng(31);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let s = random_sample(&mut rng);
        // Moments taken about the element corner; exactness is translation invariant.
        let o = s.cut.rect.origin;
        let scale = s.cut.rect.h;
        for region in [Region::Minus, Region::Plus] {
            let poly: Vec<Point> = s.cut.polygon(region).iter().map(|&p| p - o).collect();
            let poly = poly.as_slice();
            let area = polygon_area(poly);
            for degree in [2, 4, 8] {
                let rule = polygon_quad(poly, degree);
                for i in 0..=degree as u32 {
                    for j in 0..=(degree as u32 - i) {
                        let exact = green_moment(poly, i, j);
                        let q = rule.integrate(|p| p.x.powi(i as i32) * p.y.powi(j as i32));
                        let size = area * scale.powi((i + j) as i32);
                        worst = worst.max((q - exact).abs() / size);
                    }
                }
            }
        }
    }
    assert!(worst <= 1e-12, "worst relative defect {worst:e}");
}

#[test]
fn gradient_products_on_cut_polygons() {
    // grad(x^2 - y^2) . grad(x^2 - y^2) = 4 (x^2 + y^2) over a Type II trapezoid.
    let poly = [Point::new(0.0, 0.0), Point::new(0.3, 0.0), Point::new(0.7, 1.0), Point::new(0.0, 1.0)];
    let exact = 4.0 * (green_moment(&poly, 2, 0) + green_moment(&poly, 0, 2));
    let q = polygon_quad(&poly, 4).integrate(|p| 4.0 * (p.x * p.x + p.y * p.y));
    assert!((q - exact).abs() <= 1e-12 * exact);
}

#[test]
fn weights_are_positive_and_sum_to_measure() {
    for n in 1..=8 {
        let rect = Rect::new(Point::new(-0.35, 0.6), 0.05);
        check_rule(&gauss_rect(&rect, n), rect.area(), |p| rect.contains(p, 1e-15));
        let (a, b) = (Point::new(0.1, 0.2), Point::new(0.4, -0.2));
        let seg = gauss_segment(a, b, n);
        assert!((seg.measure() - 0.5).abs() <= 1e-13 * 0.5);
    }
    let rect = Rect::unit();
    check_rule(&gauss_rect_9(&rect), 1.0, |p| rect.contains(p, 0.0));
    let tri = [Point::new(0.2, 0.1), Point::new(0.9, 0.3), Point::new(0.4, 0.8)];
    for degree in 1..=10 {
        let rule = triangle_rule(tri[0], tri[1], tri[2], degree);
        check_rule(&rule, polygon_area(&tri), |p| rect.contains(p, 0.0));
    }
    let mut rng = rng(32);
    for _ in 0..200 {
        let s = random_sample(&mut rng);
        for region in [Region::Minus, Region::Plus] {
            let poly = s.cut.polygon(region);
            let rule = polygon_quad(poly, 4);
            check_rule(&rule, polygon_area(poly), |p| s.cut.rect.contains(p, 1e-12 * s.cut.rect.h));
        }
    }
}

#[test]
fn trapezoid_integral_matches_monte_carlo() {
    // Left part of [0,1]^2 cut by x = 0.3 + 0.4 y.
    let poly = [Point::new(0.0, 0.0), Point::new(0.3, 0.0), Point::new(0.7, 1.0), Point::new(0.0, 1.0)];
    let f = |p: Point| p.x * p.x - p.y * p.y;
    let q = polygon_quad(&poly, 4).integrate(f);

    let mut rng = rng(33);
    let samples = 1_000_000;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let p = Point::new(rng.gen::<f64>(), rng.gen::<f64>());
        let v = if p.x < 0.3 + 0.4 * p.y { f(p) } else { 0.0 };
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / samples as f64;
    let sigma = ((sum_sq / samples as f64 - mean * mean) / samples as f64).sqrt();
    assert!((q - mean).abs() <= 3.0 * sigma, "{q} vs {mean} +- {sigma}");
}
