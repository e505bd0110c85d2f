//! Interpolation of continuous functions into the global IFE spaces.

use crate::element::DofKind;
use crate::geometry::Point;
use crate::quadrature::gauss_segment;
use crate::space::IfeSpace;

/// Gauss points per edge piece for edge means.
const EDGE_GAUSS_POINTS: usize = 5;

/// Global coefficient vector, one entry per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct DofVector {
    pub values: Vec<f64>,
    pub kind: DofKind,
}

impl DofVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Mean of `u` over the segment `ab`, split at `cut` so each Gauss rule sees
/// one smooth branch.
pub fn edge_mean_of(u: &dyn Fn(Point) -> f64, a: Point, b: Point, cut: Option<Point>) -> f64 {
    let integral = match cut {
        Some(c) => {
            gauss_segment(a, c, EDGE_GAUSS_POINTS).integrate(u)
                + gauss_segment(c, b, EDGE_GAUSS_POINTS).integrate(u)
        }
        None => gauss_segment(a, b, EDGE_GAUSS_POINTS).integrate(u),
    };
    integral / (b - a).norm()
}

/// DOF values of `u`: midpoint values or edge means, depending on the space.
///
/// `u` must be continuous; it is evaluated on interface edges piecewise,
/// split at the crossing of the interface.
pub fn interpolate(space: &IfeSpace, u: &dyn Fn(Point) -> f64) -> DofVector {
    let mesh = &space.mesh;
    let values = (0..mesh.n_edges())
        .map(|edge| match space.kind {
            DofKind::Midpoint => u(mesh.edge_midpoint(edge)),
            DofKind::Integral => {
                let (a, b) = mesh.edge_endpoints(edge);
                let cut = space.tagging.edge_cut_points.get(&edge).copied();
                edge_mean_of(u, a, b, cut)
            }
        })
        .collect();
    DofVector {
        values,
        kind: space.kind,
    }
}

/// Largest difference between `v` and the DOFs of its own reconstruction,
/// taken from every element incident to each edge.
pub fn reinterpolation_defect(space: &IfeSpace, v: &DofVector) -> f64 {
    let mut worst = 0.0f64;
    for e in 0..space.mesh.n_elements() {
        let field = space.local_field(e, &v.values);
        for (k, &edge) in space.mesh.element_edges(e).iter().enumerate() {
            let dof = space.local_dof(e, k, &field);
            worst = worst.max((dof - v.values[edge]).abs());
        }
    }
    worst
}

/// Whether re-interpolating the reconstruction of `v` returns `v` to `1e-12`
/// (relative to the largest entry, floored at one).
pub fn idempotence_check(space: &IfeSpace, v: &DofVector) -> bool {
    let scale = v.values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    reinterpolation_defect(space, v) <= 1e-12 * scale
}
