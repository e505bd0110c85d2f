//! Uniform Cartesian meshes and edge-based degrees of freedom.
//!
//! Elements are indexed row-major (`e = j * n + i`, `i` along x). Edges are
//! numbered horizontal first: the horizontal edge at row `j`, column `i` is
//! `j * n + i` (`j` in `0..=n`), then the vertical edge at column `i`, row `j`
//! is `n * (n + 1) + j * (n + 1) + i` (`i` in `0..=n`). Each edge carries
//! exactly one global DOF, so edge and DOF indices coincide.

use std::collections::BTreeMap;

use crate::error::{IfeError, Result};
use crate::geometry::{classify_element, ElementCut, LevelSet, Point, Rect, DEFAULT_SNAP_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct CartesianMesh {
    pub origin: Point,
    pub side: f64,
    pub n: usize,
    pub h: f64,
}

impl CartesianMesh {
    /// `n x n` squares covering `[lower, upper]`, which must be a square.
    pub fn new(lower: Point, upper: Point, n: usize) -> Result<Self> {
        let (w, ht) = (upper.x - lower.x, upper.y - lower.y);
        if n < 2 {
            return Err(IfeError::Config(format!("mesh needs N >= 2, got {n}")));
        }
        if !(w > 0.0) || (w - ht).abs() > 1e-12 * w {
            return Err(IfeError::Config(format!(
                "domain must be a nondegenerate square, got {w} x {ht}"
            )));
        }
        Ok(CartesianMesh {
            origin: lower,
            side: w,
            n,
            h: w / n as f64,
        })
    }

    /// The benchmark domain `(-1, 1)^2`.
    pub fn benchmark(n: usize) -> Result<Self> {
        Self::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0), n)
    }

    pub fn n_elements(&self) -> usize {
        self.n * self.n
    }

    pub fn n_edges(&self) -> usize {
        2 * self.n * (self.n + 1)
    }

    fn n_horizontal(&self) -> usize {
        self.n * (self.n + 1)
    }

    pub fn element_ij(&self, e: usize) -> (usize, usize) {
        (e % self.n, e / self.n)
    }

    fn node(&self, i: usize, j: usize) -> Point {
        self.origin + Point::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn element_rect(&self, e: usize) -> Rect {
        let (i, j) = self.element_ij(e);
        Rect::new(self.node(i, j), self.h)
    }

    fn horizontal(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    fn vertical(&self, i: usize, j: usize) -> usize {
        self.n_horizontal() + j * (self.n + 1) + i
    }

    /// Global edges of element `e` in local order bottom, right, top, left.
    pub fn element_edges(&self, e: usize) -> [usize; 4] {
        let (i, j) = self.element_ij(e);
        [
            self.horizontal(i, j),
            self.vertical(i + 1, j),
            self.horizontal(i, j + 1),
            self.vertical(i, j),
        ]
    }

    pub fn is_horizontal(&self, edge: usize) -> bool {
        edge < self.n_horizontal()
    }

    /// Endpoints, left to right or bottom to top.
    pub fn edge_endpoints(&self, edge: usize) -> (Point, Point) {
        if self.is_horizontal(edge) {
            let (i, j) = (edge % self.n, edge / self.n);
            (self.node(i, j), self.node(i + 1, j))
        } else {
            let k = edge - self.n_horizontal();
            let (i, j) = (k % (self.n + 1), k / (self.n + 1));
            (self.node(i, j), self.node(i, j + 1))
        }
    }

    pub fn edge_midpoint(&self, edge: usize) -> Point {
        let (a, b) = self.edge_endpoints(edge);
        a.lerp(b, 0.5)
    }

    /// Elements sharing `edge` with their local edge index; boundary edges
    /// have one entry.
    pub fn edge_elements(&self, edge: usize) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::with_capacity(2);
        if self.is_horizontal(edge) {
            let (i, j) = (edge % n, edge / n);
            if j > 0 {
                out.push(((j - 1) * n + i, 2));
            }
            if j < n {
                out.push((j * n + i, 0));
            }
        } else {
            let k = edge - self.n_horizontal();
            let (i, j) = (k % (n + 1), k / (n + 1));
            if i > 0 {
                out.push((j * n + i - 1, 1));
            }
            if i < n {
                out.push((j * n + i, 3));
            }
        }
        out
    }

    pub fn is_boundary_edge(&self, edge: usize) -> bool {
        if self.is_horizontal(edge) {
            let j = edge / self.n;
            j == 0 || j == self.n
        } else {
            let i = (edge - self.n_horizontal()) % (self.n + 1);
            i == 0 || i == self.n
        }
    }
}

/// Classification of every element against the interface.
#[derive(Clone, Debug)]
pub struct InterfaceTagging {
    pub cuts: Vec<ElementCut>,
    /// Cut point of every edge that contains `D` or `E` of some element.
    pub edge_cut_points: BTreeMap<usize, Point>,
}

impl InterfaceTagging {
    pub fn cut_elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.cuts
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_cut())
            .map(|(e, _)| e)
    }

    pub fn n_cut(&self) -> usize {
        self.cut_elements().count()
    }
}

/// Classifies all elements of `mesh`.
pub fn tag_interface<L: LevelSet + ?Sized>(mesh: &CartesianMesh, ls: &L) -> Result<InterfaceTagging> {
    let mut cuts = Vec::with_capacity(mesh.n_elements());
    let mut edge_cut_points = BTreeMap::new();
    for e in 0..mesh.n_elements() {
        let cut = classify_element(ls, mesh.element_rect(e), DEFAULT_SNAP_TOL).map_err(|err| match err {
            IfeError::HypothesisViolation { reason, .. } => IfeError::HypothesisViolation {
                element: Some(e),
                reason,
            },
            other => other,
        })?;
        if let ElementCut::Cut(c) = &cut {
            let edges = mesh.element_edges(e);
            edge_cut_points.insert(edges[c.cut_edges[0]], c.d_point);
            edge_cut_points.insert(edges[c.cut_edges[1]], c.e_point);
        }
        cuts.push(cut);
    }
    Ok(InterfaceTagging {
        cuts,
        edge_cut_points,
    })
}

/// One DOF per edge, with boundary and interface flags.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    pub n_dofs: usize,
    pub boundary: Vec<bool>,
    pub interface: Vec<bool>,
}

impl DofMap {
    pub fn new(mesh: &CartesianMesh, tagging: &InterfaceTagging) -> Self {
        let n_dofs = mesh.n_edges();
        let boundary = (0..n_dofs).map(|e| mesh.is_boundary_edge(e)).collect();
        let mut interface = vec![false; n_dofs];
        for &e in tagging.edge_cut_points.keys() {
            interface[e] = true;
        }
        DofMap {
            n_dofs,
            boundary,
            interface,
        }
    }

    pub fn dof_of_edge(&self, edge: usize) -> usize {
        edge
    }

    pub fn boundary_dofs(&self) -> impl Iterator<Item = usize> + '_ {
        self.boundary.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn interface_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.interface.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }
}
