//! The circular-interface benchmark solution and discrete error norms.

use crate::element::Coefficient;
use crate::geometry::{Circle, ElementCut, Point, Region};
use crate::quadrature::{gauss_rect_9, polygon_quad, sample_grid_49};
use crate::space::IfeSpace;

/// Radius of the benchmark interface circle.
// 6.28 is the benchmark's literal divisor, not 2 pi.
#[allow(clippy::approx_constant)]
pub const BENCHMARK_R0: f64 = std::f64::consts::PI / 6.28;
/// Exponent of the benchmark solution.
pub const BENCHMARK_A: f64 = 5.0;

/// Polygon rule degree for error norms on cut elements.
const NORM_POLY_DEGREE: usize = 4;

/// Radially symmetric solution `u = r^a / beta^-` inside the circle of radius
/// `r0` and `r^a / beta^+ + (1/beta^- - 1/beta^+) r0^a` outside. It is
/// continuous with continuous flux across the circle and solves
/// `-div(beta grad u) = -a^2 r^(a-2)` on both sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactSolution {
    pub r0: f64,
    pub a: f64,
    pub beta: Coefficient,
}

impl ExactSolution {
    pub fn new(r0: f64, a: f64, beta: Coefficient) -> Self {
        ExactSolution { r0, a, beta }
    }

    pub fn benchmark(beta: Coefficient) -> Self {
        Self::new(BENCHMARK_R0, BENCHMARK_A, beta)
    }

    pub fn interface(&self) -> Circle {
        Circle::centered(self.r0)
    }

    /// Region by the true circle; `r = r0` counts as `Plus`.
    pub fn region(&self, p: Point) -> Region {
        if p.dot(p) < self.r0 * self.r0 {
            Region::Minus
        } else {
            Region::Plus
        }
    }

    pub fn value_on(&self, region: Region, p: Point) -> f64 {
        let ra = p.norm().powf(self.a);
        match region {
            Region::Minus => ra / self.beta.beta_minus,
            Region::Plus => {
                ra / self.beta.beta_plus
                    + (1.0 / self.beta.beta_minus - 1.0 / self.beta.beta_plus) * self.r0.powf(self.a)
            }
        }
    }

    pub fn grad_on(&self, region: Region, p: Point) -> Point {
        let r = p.norm();
        if r == 0.0 {
            return Point::default();
        }
        p * (self.a * r.powf(self.a - 2.0) / self.beta.get(region))
    }

    pub fn value(&self, p: Point) -> f64 {
        self.value_on(self.region(p), p)
    }

    pub fn grad(&self, p: Point) -> Point {
        self.grad_on(self.region(p), p)
    }

    pub fn source(&self, p: Point) -> f64 {
        let r = p.norm();
        if r == 0.0 {
            return 0.0;
        }
        -self.a * self.a * r.powf(self.a - 2.0)
    }

    /// `(u, grad u, f)` at `p`.
    pub fn eval(&self, p: Point) -> (f64, Point, f64) {
        (self.value(p), self.grad(p), self.source(p))
    }
}

/// Errors of one mesh level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelErrors {
    pub n: usize,
    pub linf: f64,
    pub l2: f64,
    pub h1: f64,
}

/// Errors across mesh levels with `N` doubling between rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErrorReport {
    pub levels: Vec<LevelErrors>,
}

impl ErrorReport {
    pub fn linf_rates(&self) -> Vec<Option<f64>> {
        rates(&self.levels.iter().map(|l| l.linf).collect::<Vec<_>>())
    }

    pub fn l2_rates(&self) -> Vec<Option<f64>> {
        rates(&self.levels.iter().map(|l| l.l2).collect::<Vec<_>>())
    }

    pub fn h1_rates(&self) -> Vec<Option<f64>> {
        rates(&self.levels.iter().map(|l| l.h1).collect::<Vec<_>>())
    }

    pub fn level(&self, n: usize) -> Option<&LevelErrors> {
        self.levels.iter().find(|l| l.n == n)
    }
}

/// `log2(e_k / e_{k+1})` for consecutive levels; `None` where an error is zero.
pub fn rates(errors: &[f64]) -> Vec<Option<f64>> {
    errors
        .windows(2)
        .map(|w| {
            if w[0] > 0.0 && w[1] > 0.0 {
                Some((w[0] / w[1]).log2())
            } else {
                None
            }
        })
        .collect()
}

/// Maximum of `|v_h - u|` over the 7 x 7 lattice of every element.
pub fn linf_error(space: &IfeSpace, dofs: &[f64], exact: &ExactSolution) -> f64 {
    (0..space.mesh.n_elements())
        .map(|e| {
            let field = space.local_field(e, dofs);
            sample_grid_49(&space.mesh.element_rect(e))
                .into_iter()
                .map(|p| (field.eval(p) - exact.value(p)).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// `L2` error and broken `H1` seminorm error.
///
/// Uncut elements use the 3 x 3 Gauss rule; cut elements integrate each side of
/// `DE` with its own polynomial piece, while the exact solution branch follows
/// the true circle at every quadrature point.
pub fn l2_h1_error(space: &IfeSpace, dofs: &[f64], exact: &ExactSolution) -> (f64, f64) {
    let mut l2 = 0.0;
    let mut h1 = 0.0;
    for e in 0..space.mesh.n_elements() {
        let field = space.local_field(e, dofs);
        match space.cut(e) {
            ElementCut::Uncut(_) => {
                let piece = field.minus;
                for (p, w) in gauss_rect_9(&space.mesh.element_rect(e)).iter() {
                    let du = piece.eval(p) - exact.value(p);
                    let dg = piece.grad(p) - exact.grad(p);
                    l2 += w * du * du;
                    h1 += w * dg.dot(dg);
                }
            }
            ElementCut::Cut(cut) => {
                for region in [Region::Minus, Region::Plus] {
                    let piece = field.piece(region);
                    for (p, w) in polygon_quad(cut.polygon(region), NORM_POLY_DEGREE).iter() {
                        let du = piece.eval(p) - exact.value(p);
                        let dg = piece.grad(p) - exact.grad(p);
                        l2 += w * du * du;
                        h1 += w * dg.dot(dg);
                    }
                }
            }
        }
    }
    (l2.sqrt(), h1.sqrt())
}

pub fn level_errors(space: &IfeSpace, dofs: &[f64], exact: &ExactSolution) -> LevelErrors {
    let (l2, h1) = l2_h1_error(space, dofs, exact);
    LevelErrors {
        n: space.mesh.n,
        linf: linf_error(space, dofs, exact),
        l2,
        h1,
    }
}
