//! The global IFE space: mesh, interface classification and local bases.

use std::collections::HashMap;

use crate::element::{dof_value, ife_basis, reference_standard_basis, Coefficient, DofKind, PiecewiseRQ1, RQ1Poly};
use crate::error::Result;
use crate::geometry::{ElementCut, LevelSet};
use crate::mesh::{tag_interface, CartesianMesh, DofMap, InterfaceTagging};

#[derive(Clone, Debug)]
pub struct IfeSpace {
    pub mesh: CartesianMesh,
    pub tagging: InterfaceTagging,
    pub dofmap: DofMap,
    pub kind: DofKind,
    pub beta: Coefficient,
    reference: [[f64; 4]; 4],
    cut_bases: HashMap<usize, [PiecewiseRQ1; 4]>,
}

impl IfeSpace {
    pub fn new<L: LevelSet + ?Sized>(mesh: CartesianMesh, ls: &L, beta: Coefficient, kind: DofKind) -> Result<Self> {
        let tagging = tag_interface(&mesh, ls)?;
        Self::from_tagging(mesh, tagging, beta, kind)
    }

    pub fn from_tagging(mesh: CartesianMesh, tagging: InterfaceTagging, beta: Coefficient, kind: DofKind) -> Result<Self> {
        let dofmap = DofMap::new(&mesh, &tagging);
        let mut cut_bases = HashMap::new();
        for (e, cut) in tagging.cuts.iter().enumerate() {
            if let ElementCut::Cut(c) = cut {
                let basis = ife_basis(c, beta, kind)?;
                cut_bases.insert(e, basis);
            }
        }
        Ok(IfeSpace {
            mesh,
            tagging,
            dofmap,
            kind,
            beta,
            reference: reference_standard_basis(kind),
            cut_bases,
        })
    }

    pub fn n_dofs(&self) -> usize {
        self.dofmap.n_dofs
    }

    pub fn cut(&self, e: usize) -> &ElementCut {
        &self.tagging.cuts[e]
    }

    /// Local basis of element `e`, ordered like its edges.
    pub fn local_basis(&self, e: usize) -> [PiecewiseRQ1; 4] {
        if let Some(b) = self.cut_bases.get(&e) {
            return *b;
        }
        let rect = self.mesh.element_rect(e);
        self.reference
            .map(|a| PiecewiseRQ1::uniform(RQ1Poly::from_local(a, &rect)))
    }

    /// Restriction of the finite element function with coefficients `dofs`
    /// to element `e`.
    pub fn local_field(&self, e: usize, dofs: &[f64]) -> PiecewiseRQ1 {
        let basis = self.local_basis(e);
        let edges = self.mesh.element_edges(e);
        PiecewiseRQ1::combine(edges.iter().zip(&basis).map(|(&g, phi)| (dofs[g], phi)))
    }

    /// DOF functional of edge `k` of element `e` applied to a local function.
    pub fn local_dof(&self, e: usize, k: usize, f: &PiecewiseRQ1) -> f64 {
        let rect = self.mesh.element_rect(e);
        let cut_point = self.cut(e).as_cut().and_then(|c| c.cut_point_on(k));
        dof_value(f, &rect, k, self.kind, cut_point)
    }
}
