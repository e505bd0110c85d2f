//! Rotated-Q1 shape functions and their immersed (piecewise) counterparts.
//!
//! Local systems are assembled on the reference square `[0, 1]^2` so their
//! conditioning does not depend on `h`; the resulting coefficients are mapped
//! back to physical coordinates.

use crate::error::{IfeError, Result};
use crate::geometry::{CutElement, Point, Rect, Region, SplitLine};
use crate::lu::Lu;

/// `c1 + c2 x + c3 y + c4 (x^2 - y^2)` in physical coordinates measured from
/// `anchor`, i.e. with `(x, y) = p - anchor`.
///
/// Element functions anchor at their element's corner; coefficients taken
/// about the global origin would lose about `2 log10(|x0| / h)` digits.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RQ1Poly {
    pub c: [f64; 4],
    pub anchor: Point,
}

impl RQ1Poly {
    /// Polynomial anchored at the origin.
    pub const fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        RQ1Poly {
            c: [c1, c2, c3, c4],
            anchor: Point::new(0.0, 0.0),
        }
    }

    pub const fn anchored(c: [f64; 4], anchor: Point) -> Self {
        RQ1Poly { c, anchor }
    }

    pub fn eval(&self, p: Point) -> f64 {
        let [c1, c2, c3, c4] = self.c;
        let q = p - self.anchor;
        c1 + c2 * q.x + c3 * q.y + c4 * (q.x * q.x - q.y * q.y)
    }

    pub fn grad(&self, p: Point) -> Point {
        let [_, c2, c3, c4] = self.c;
        let q = p - self.anchor;
        Point::new(c2 + 2.0 * c4 * q.x, c3 - 2.0 * c4 * q.y)
    }

    /// Largest second derivative magnitude, `|d^2/dx^2| = |d^2/dy^2| = 2 |c4|`.
    pub fn second_derivative(&self) -> f64 {
        2.0 * self.c[3].abs()
    }

    /// The same polynomial expanded about `anchor`.
    pub fn rebased(&self, anchor: Point) -> Self {
        let [_, c2, c3, c4] = self.c;
        let d = anchor - self.anchor;
        RQ1Poly {
            c: [self.eval(anchor), c2 + 2.0 * c4 * d.x, c3 - 2.0 * c4 * d.y, c4],
            anchor,
        }
    }

    /// Coefficients about the global origin.
    pub fn global_coefficients(&self) -> [f64; 4] {
        self.rebased(Point::new(0.0, 0.0)).c
    }

    /// Converts coefficients of `a1 + a2 s + a3 t + a4 (s^2 - t^2)` in the
    /// element-local coordinates `(s, t)` of `rect`.
    pub fn from_local(a: [f64; 4], rect: &Rect) -> Self {
        let h = rect.h;
        RQ1Poly::anchored([a[0], a[1] / h, a[2] / h, a[3] / (h * h)], rect.origin)
    }

    pub fn scale(&self, s: f64) -> Self {
        RQ1Poly {
            c: self.c.map(|v| v * s),
            anchor: self.anchor,
        }
    }

    pub fn add(&self, other: &RQ1Poly) -> Self {
        let other = if other.anchor == self.anchor {
            *other
        } else {
            other.rebased(self.anchor)
        };
        let mut c = self.c;
        c.iter_mut().zip(other.c).for_each(|(a, b)| *a += b);
        RQ1Poly { c, anchor: self.anchor }
    }
}

/// A rotated-Q1 function on one element: a single polynomial on uncut
/// elements, or one polynomial per side of `DE` on cut elements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiecewiseRQ1 {
    pub minus: RQ1Poly,
    pub plus: RQ1Poly,
    pub split: Option<SplitLine>,
}

impl PiecewiseRQ1 {
    pub fn uniform(p: RQ1Poly) -> Self {
        PiecewiseRQ1 {
            minus: p,
            plus: p,
            split: None,
        }
    }

    pub fn region_at(&self, p: Point) -> Region {
        match &self.split {
            Some(line) => line.region_at(p),
            None => Region::Minus,
        }
    }

    pub fn piece(&self, region: Region) -> &RQ1Poly {
        match region {
            Region::Minus => &self.minus,
            Region::Plus => &self.plus,
        }
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.piece(self.region_at(p)).eval(p)
    }

    pub fn grad(&self, p: Point) -> Point {
        self.piece(self.region_at(p)).grad(p)
    }

    /// `sum_j w_j f_j`; all inputs must share the same split.
    pub fn combine<'a>(terms: impl IntoIterator<Item = (f64, &'a PiecewiseRQ1)>) -> Self {
        let mut out: Option<PiecewiseRQ1> = None;
        for (w, f) in terms {
            let scaled = PiecewiseRQ1 {
                minus: f.minus.scale(w),
                plus: f.plus.scale(w),
                split: f.split,
            };
            out = Some(match out {
                None => scaled,
                Some(acc) => PiecewiseRQ1 {
                    minus: acc.minus.add(&scaled.minus),
                    plus: acc.plus.add(&scaled.plus),
                    split: acc.split,
                },
            });
        }
        out.unwrap_or_else(|| PiecewiseRQ1::uniform(RQ1Poly::default()))
    }
}

/// Which edge functional defines the degrees of freedom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DofKind {
    /// Value at the edge midpoint.
    Midpoint,
    /// Mean value over the edge.
    Integral,
}

impl std::fmt::Display for DofKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DofKind::Midpoint => "midpoint",
            DofKind::Integral => "integral",
        })
    }
}

impl std::str::FromStr for DofKind {
    type Err = IfeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "midpoint" | "p" => Ok(DofKind::Midpoint),
            "integral" | "i" => Ok(DofKind::Integral),
            other => Err(IfeError::Config(format!("unknown DOF kind '{other}'"))),
        }
    }
}

/// Piecewise constant diffusion coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficient {
    pub beta_minus: f64,
    pub beta_plus: f64,
}

impl Coefficient {
    pub fn new(beta_minus: f64, beta_plus: f64) -> Result<Self> {
        if !(beta_minus > 0.0 && beta_plus > 0.0) || !beta_minus.is_finite() || !beta_plus.is_finite() {
            return Err(IfeError::Config(format!(
                "coefficients must be positive and finite, got ({beta_minus}, {beta_plus})"
            )));
        }
        Ok(Coefficient {
            beta_minus,
            beta_plus,
        })
    }

    pub fn get(&self, region: Region) -> f64 {
        match region {
            Region::Minus => self.beta_minus,
            Region::Plus => self.beta_plus,
        }
    }
}

fn monomials(q: Point) -> [f64; 4] {
    [1.0, q.x, q.y, q.x * q.x - q.y * q.y]
}

fn monomial_grads(q: Point) -> [Point; 4] {
    [
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(0.0, 1.0),
        Point::new(2.0 * q.x, -2.0 * q.y),
    ]
}

/// Exact integrals of the monomials over the segment `ab` (Simpson's rule is
/// exact for quadratics).
fn monomial_segment_integrals(a: Point, b: Point) -> [f64; 4] {
    let len = (b - a).norm();
    let (ma, mm, mb) = (monomials(a), monomials(a.lerp(b, 0.5)), monomials(b));
    std::array::from_fn(|i| len / 6.0 * (ma[i] + 4.0 * mm[i] + mb[i]))
}

/// DOF functional of the monomials on the reference square edge `k`.
fn reference_functional(k: usize, kind: DofKind) -> [f64; 4] {
    let unit = Rect::unit();
    match kind {
        DofKind::Midpoint => monomials(unit.edge_midpoint(k)),
        DofKind::Integral => {
            let (a, b) = unit.edge_canonical(k);
            monomial_segment_integrals(a, b)
        }
    }
}

/// Standard rotated-Q1 basis on `rect`: `psi_j` has DOF `k` equal to `delta_jk`
/// on the edges ordered bottom, right, top, left.
pub fn standard_basis(rect: &Rect, kind: DofKind) -> [RQ1Poly; 4] {
    reference_standard_basis(kind).map(|a| RQ1Poly::from_local(a, rect))
}

/// Reference-square coefficients of the standard basis.
pub fn reference_standard_basis(kind: DofKind) -> [[f64; 4]; 4] {
    let m: [[f64; 4]; 4] = std::array::from_fn(|k| reference_functional(k, kind));
    let lu = Lu::factor(m).expect("rotated-Q1 DOFs are unisolvent on a square");
    std::array::from_fn(|j| {
        let mut rhs = [0.0; 4];
        rhs[j] = 1.0;
        lu.solve(&rhs)
    })
}

/// The IFE basis on a cut element.
///
/// Each `phi_j` solves the 8 x 8 system made of the four DOF conditions
/// `N_k(phi_j) = delta_jk`, continuity at `D` and `E`, a shared `x^2 - y^2`
/// coefficient, and a vanishing mean flux jump `int_DE [nu . beta grad phi] ds`.
pub fn ife_basis(cut: &CutElement, beta: Coefficient, kind: DofKind) -> Result<[PiecewiseRQ1; 4]> {
    let rect = cut.rect;
    let local = |p: Point| rect.to_local(p);
    let d = local(cut.d_point);
    let e = local(cut.e_point);
    let region_at = |q: Point| cut.region_at(rect.to_physical(q));
    let offset = |r: Region| match r {
        Region::Minus => 0,
        Region::Plus => 4,
    };

    // Unknowns: (a^-_1..a^-_4, a^+_1..a^+_4) in reference coordinates.
    let mut m = [[0.0; 8]; 8];
    let unit = Rect::unit();
    for k in 0..4 {
        let row = &mut m[k];
        match kind {
            DofKind::Integral => {
                let (a, b) = unit.edge_canonical(k);
                let pieces: Vec<(Point, Point)> = match cut.cut_point_on(k) {
                    Some(c) => {
                        let c = local(c);
                        vec![(a, c), (c, b)]
                    }
                    None => vec![(a, b)],
                };
                for (p, q) in pieces {
                    let o = offset(region_at(p.lerp(q, 0.5)));
                    for (i, v) in monomial_segment_integrals(p, q).into_iter().enumerate() {
                        row[o + i] += v;
                    }
                }
            }
            DofKind::Midpoint => {
                let mid = unit.edge_midpoint(k);
                let o = offset(region_at(mid));
                row[o..o + 4].copy_from_slice(&monomials(mid));
            }
        }
    }
    for (row, p) in [(4, d), (5, e)] {
        let mono = monomials(p);
        for i in 0..4 {
            m[row][i] = -mono[i];
            m[row][4 + i] = mono[i];
        }
    }
    m[6][3] = -1.0;
    m[6][7] = 1.0;
    // The gradient jump is linear along DE: midpoint value times length.
    let nu = cut.normal;
    let len = (e - d).norm();
    let grads = monomial_grads(d.lerp(e, 0.5));
    let scale = 1.0 / beta.beta_minus.max(beta.beta_plus);
    for i in 0..4 {
        let g = nu.dot(grads[i]) * len * scale;
        m[7][i] = -beta.beta_minus * g;
        m[7][4 + i] = beta.beta_plus * g;
    }

    let lu = Lu::<8>::factor(m).map_err(|pivot_ratio| IfeError::SingularLocalSystem { pivot_ratio })?;
    let split = Some(cut.split_line());
    Ok(std::array::from_fn(|j| {
        let mut rhs = [0.0; 8];
        rhs[j] = 1.0;
        let sol = lu.solve(&rhs);
        let shared = 0.5 * (sol[3] + sol[7]);
        let minus = [sol[0], sol[1], sol[2], shared];
        let plus = [sol[4], sol[5], sol[6], shared];
        PiecewiseRQ1 {
            minus: RQ1Poly::from_local(minus, &rect),
            plus: RQ1Poly::from_local(plus, &rect),
            split,
        }
    }))
}

/// Exact mean of `f` over the segment `ab`, split at `cut_point` if given.
pub fn edge_mean(f: &PiecewiseRQ1, a: Point, b: Point, cut_point: Option<Point>) -> f64 {
    let simpson = |p: Point, q: Point| {
        let mid = p.lerp(q, 0.5);
        let piece = f.piece(f.region_at(mid));
        (q - p).norm() / 6.0 * (piece.eval(p) + 4.0 * piece.eval(mid) + piece.eval(q))
    };
    let total = match cut_point {
        Some(c) => simpson(a, c) + simpson(c, b),
        None => simpson(a, b),
    };
    total / (b - a).norm()
}

/// Jump `[nu . beta grad f]` integrated over `DE`.
pub fn flux_jump(f: &PiecewiseRQ1, cut: &CutElement, beta: Coefficient) -> f64 {
    let mid = cut.d_point.lerp(cut.e_point, 0.5);
    let len = (cut.e_point - cut.d_point).norm();
    let jump = beta.beta_plus * cut.normal.dot(f.plus.grad(mid))
        - beta.beta_minus * cut.normal.dot(f.minus.grad(mid));
    jump * len
}

/// DOF functional `k` of a local function on `rect`.
pub fn dof_value(f: &PiecewiseRQ1, rect: &Rect, k: usize, kind: DofKind, cut_point: Option<Point>) -> f64 {
    match kind {
        DofKind::Midpoint => f.eval(rect.edge_midpoint(k)),
        DofKind::Integral => {
            let (a, b) = rect.edge_canonical(k);
            edge_mean(f, a, b, cut_point)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{classify_element, HalfPlane, DEFAULT_SNAP_TOL};

    fn type_ii(d: f64, e: f64) -> CutElement {
        let ls = HalfPlane::through(Point::new(d, 0.0), Point::new(e, 1.0), Point::new(0.0, 0.0));
        classify_element(&ls, Rect::unit(), DEFAULT_SNAP_TOL)
            .unwrap()
            .as_cut()
            .unwrap()
            .clone()
    }

    #[test]
    fn rebasing_keeps_the_function() {
        let p = RQ1Poly::anchored([0.5, -2.0, 3.0, 40.0], Point::new(0.75, -0.5));
        let q = p.rebased(Point::new(-0.25, 0.125));
        let g = RQ1Poly::new(0.0, 0.0, 0.0, 0.0).add(&p);
        for x in [Point::new(0.8, -0.45), Point::new(-1.0, 1.0), Point::new(0.0, 0.0)] {
            assert!((p.eval(x) - q.eval(x)).abs() < 1e-12);
            assert!((p.eval(x) - g.eval(x)).abs() < 1e-12);
            assert!((p.grad(x) - q.grad(x)).norm() < 1e-12);
        }
        // 0.5 - 2 (x - 0.75) + 3 (y + 0.5) + 40 ((x - 0.75)^2 - (y + 0.5)^2)
        let c = p.global_coefficients();
        let want = [0.5 + 1.5 + 1.5 + 12.5, -2.0 - 60.0, 3.0 - 40.0, 40.0];
        for (a, b) in c.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn eval_and_grad_examples() {
        let one = PiecewiseRQ1::uniform(RQ1Poly::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(one.eval(Point::new(0.3, -2.0)), 1.0);
        assert_eq!(one.grad(Point::new(0.3, -2.0)), Point::new(0.0, 0.0));
        let q = RQ1Poly::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(q.eval(Point::new(2.0, 1.0)), 3.0);
        assert_eq!(q.grad(Point::new(2.0, 1.0)), Point::new(4.0, -2.0));
    }

    #[test]
    fn standard_midpoint_basis_is_nodal() {
        let unit = Rect::unit();
        let basis = standard_basis(&unit, DofKind::Midpoint);
        for (j, psi) in basis.iter().enumerate() {
            for k in 0..4 {
                let v = psi.eval(unit.edge_midpoint(k));
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-14);
            }
        }
        // direct 4x4 solve on the midpoint moments: psi_1 = 3/4 + x - 2y - (x^2 - y^2)
        let expected = [0.75, 1.0, -2.0, -1.0];
        for (c, e) in basis[0].c.iter().zip(expected) {
            assert!((c - e).abs() < 1e-14);
        }
    }

    #[test]
    fn standard_integral_basis_has_unit_means() {
        let rect = Rect::new(Point::new(-0.4, 0.2), 0.2);
        let basis = standard_basis(&rect, DofKind::Integral);
        for (j, psi) in basis.iter().enumerate() {
            for k in 0..4 {
                let f = PiecewiseRQ1::uniform(*psi);
                let v = dof_value(&f, &rect, k, DofKind::Integral, None);
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-12, "j={j} k={k} v={v}");
            }
        }
    }

    #[test]
    fn edge_mean_examples() {
        let one = PiecewiseRQ1::uniform(RQ1Poly::new(1.0, 0.0, 0.0, 0.0));
        let (a, b) = (Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        assert!((edge_mean(&one, a, b, None) - 1.0).abs() < 1e-15);
        let x = PiecewiseRQ1::uniform(RQ1Poly::new(0.0, 1.0, 0.0, 0.0));
        assert!((edge_mean(&x, a, b, None) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn equal_coefficients_reproduce_standard_basis() {
        let cut = type_ii(0.3, 0.7);
        for kind in [DofKind::Midpoint, DofKind::Integral] {
            let std = standard_basis(&cut.rect, kind);
            let ife = ife_basis(&cut, Coefficient::new(2.5, 2.5).unwrap(), kind).unwrap();
            for j in 0..4 {
                for i in 0..4 {
                    assert!((ife[j].minus.c[i] - std[j].c[i]).abs() < 1e-10);
                    assert!((ife[j].plus.c[i] - std[j].c[i]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn flux_and_continuity_imposed() {
        let cut = type_ii(0.3, 0.7);
        let beta = Coefficient::new(1.0, 10.0).unwrap();
        let basis = ife_basis(&cut, beta, DofKind::Integral).unwrap();
        for phi in &basis {
            assert!(flux_jump(phi, &cut, beta).abs() < 1e-10);
            for t in [0.0, 0.25, 0.5, 1.0] {
                let p = cut.d_point.lerp(cut.e_point, t);
                assert!((phi.minus.eval(p) - phi.plus.eval(p)).abs() < 1e-12);
            }
            assert_eq!(phi.minus.c[3], phi.plus.c[3]);
        }
    }
}
