//! Galerkin assembly, Dirichlet elimination and the conjugate gradient solve.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use sprs::{CsMat, TriMat};

use crate::element::{ife_basis, standard_basis, Coefficient, DofKind, PiecewiseRQ1};
use crate::error::{IfeError, Result};
use crate::geometry::{ElementCut, LevelSet, Point, Rect, Region};
use crate::interpolation::edge_mean_of;
use crate::norms::ExactSolution;
use crate::quadrature::{gauss_rect, polygon_quad};
use crate::space::IfeSpace;

/// Polygon rule degree for stiffness integrals (the integrand has degree 2).
pub const STIFFNESS_DEGREE: usize = 4;
/// Polygon rule degree for load integrals.
pub const LOAD_DEGREE: usize = 8;
/// Gauss points per direction for loads on uncut elements.
const LOAD_GAUSS_POINTS: usize = 5;

pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// An interface problem `-div(beta grad u) = f`, `u = g` on the boundary.
#[derive(Clone)]
pub struct ProblemSpec {
    pub beta: Coefficient,
    pub kind: DofKind,
    pub level_set: Arc<dyn LevelSet + Send>,
    pub source: ScalarFn,
    pub boundary: ScalarFn,
}

impl ProblemSpec {
    /// The circular-interface benchmark with data taken from `exact`.
    pub fn benchmark(exact: ExactSolution, kind: DofKind) -> Self {
        ProblemSpec {
            beta: exact.beta,
            kind,
            level_set: Arc::new(exact.interface()),
            source: Arc::new(move |p| exact.source(p)),
            boundary: Arc::new(move |p| exact.value(p)),
        }
    }
}

impl std::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("beta", &self.beta)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

/// Global matrix and load vector, plus prescribed values for constrained DOFs.
#[derive(Clone, Debug)]
pub struct SparseSystem {
    pub matrix: CsMat<f64>,
    pub rhs: Vec<f64>,
    pub prescribed: Vec<Option<f64>>,
}

impl SparseSystem {
    pub fn n_dofs(&self) -> usize {
        self.rhs.len()
    }

    pub fn free_dofs(&self) -> Vec<usize> {
        (0..self.n_dofs()).filter(|&i| self.prescribed[i].is_none()).collect()
    }

    /// `A x - b`, zeroed on constrained rows.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = spmv(&self.matrix, x);
        for (i, ri) in r.iter_mut().enumerate() {
            *ri = if self.prescribed[i].is_some() {
                0.0
            } else {
                *ri - self.rhs[i]
            };
        }
        r
    }

    /// Writes `row col value` triplets, one per line, 17 significant digits.
    pub fn dump_matrix(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| IfeError::io(path, e))?;
        let mut out = BufWriter::new(file);
        for (row, vec) in self.matrix.outer_iterator().enumerate() {
            for (col, val) in vec.iter() {
                writeln!(out, "{row} {col} {val:.16e}").map_err(|e| IfeError::io(path, e))?;
            }
        }
        out.flush().map_err(|e| IfeError::io(path, e))
    }
}

fn spmv(a: &CsMat<f64>, x: &[f64]) -> Vec<f64> {
    a.outer_iterator()
        .map(|row| row.iter().map(|(j, v)| v * x[j]).sum())
        .collect()
}

/// `int_T beta grad phi_i . grad phi_j` with the given local basis.
pub fn stiffness_with_basis(rect: &Rect, cut: &ElementCut, basis: &[PiecewiseRQ1; 4], beta: Coefficient) -> [[f64; 4]; 4] {
    let mut k = [[0.0; 4]; 4];
    let mut accumulate = |region: Region, p: Point, w: f64| {
        let g: [Point; 4] = std::array::from_fn(|i| basis[i].piece(region).grad(p));
        let wb = w * beta.get(region);
        for i in 0..4 {
            for j in i..4 {
                k[i][j] += wb * g[i].dot(g[j]);
            }
        }
    };
    match cut {
        ElementCut::Uncut(region) => {
            for (p, w) in gauss_rect(rect, 3).iter() {
                accumulate(*region, p, w);
            }
        }
        ElementCut::Cut(c) => {
            for region in [Region::Minus, Region::Plus] {
                for (p, w) in polygon_quad(c.polygon(region), STIFFNESS_DEGREE).iter() {
                    accumulate(region, p, w);
                }
            }
        }
    }
    for i in 0..4 {
        for j in 0..i {
            k[i][j] = k[j][i];
        }
    }
    k
}

/// Local basis of a classified element.
pub fn local_basis(rect: &Rect, cut: &ElementCut, beta: Coefficient, kind: DofKind) -> Result<[PiecewiseRQ1; 4]> {
    match cut {
        ElementCut::Uncut(_) => Ok(standard_basis(rect, kind).map(PiecewiseRQ1::uniform)),
        ElementCut::Cut(c) => ife_basis(c, beta, kind),
    }
}

/// Local stiffness matrix of one element.
pub fn local_stiffness(rect: &Rect, cut: &ElementCut, beta: Coefficient, kind: DofKind) -> Result<[[f64; 4]; 4]> {
    let basis = local_basis(rect, cut, beta, kind)?;
    Ok(stiffness_with_basis(rect, cut, &basis, beta))
}

/// Local load vector `int_T f phi_j`.
pub fn local_load(rect: &Rect, cut: &ElementCut, basis: &[PiecewiseRQ1; 4], f: &dyn Fn(Point) -> f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    match cut {
        ElementCut::Uncut(_) => {
            for (p, w) in gauss_rect(rect, LOAD_GAUSS_POINTS).iter() {
                let fw = w * f(p);
                for j in 0..4 {
                    out[j] += fw * basis[j].minus.eval(p);
                }
            }
        }
        ElementCut::Cut(c) => {
            for region in [Region::Minus, Region::Plus] {
                for (p, w) in polygon_quad(c.polygon(region), LOAD_DEGREE).iter() {
                    let fw = w * f(p);
                    for j in 0..4 {
                        out[j] += fw * basis[j].piece(region).eval(p);
                    }
                }
            }
        }
    }
    out
}

/// Assembles `a_h` and `L` over all elements of `space`.
pub fn assemble(space: &IfeSpace, source: &dyn Fn(Point) -> f64) -> SparseSystem {
    let mesh = &space.mesh;
    let n = space.n_dofs();
    let mut tri = TriMat::with_capacity((n, n), 16 * mesh.n_elements());
    let mut rhs = vec![0.0; n];

    // Uncut stiffness is translation and scale invariant in 2D.
    let unit = Rect::unit();
    let unit_basis = standard_basis(&unit, space.kind).map(PiecewiseRQ1::uniform);
    let reference = |region: Region| {
        stiffness_with_basis(&unit, &ElementCut::Uncut(region), &unit_basis, space.beta)
    };
    let k_minus = reference(Region::Minus);
    let k_plus = reference(Region::Plus);

    for e in 0..mesh.n_elements() {
        let rect = mesh.element_rect(e);
        let cut = space.cut(e);
        let basis = space.local_basis(e);
        let k = match cut {
            ElementCut::Uncut(Region::Minus) => k_minus,
            ElementCut::Uncut(Region::Plus) => k_plus,
            ElementCut::Cut(_) => stiffness_with_basis(&rect, cut, &basis, space.beta),
        };
        let load = local_load(&rect, cut, &basis, source);
        let dofs = mesh.element_edges(e);
        for i in 0..4 {
            rhs[dofs[i]] += load[i];
            for j in 0..4 {
                tri.add_triplet(dofs[i], dofs[j], k[i][j]);
            }
        }
    }
    SparseSystem {
        matrix: tri.to_csr(),
        rhs,
        prescribed: vec![None; n],
    }
}

/// Prescribes boundary DOFs from `g`: the edge mean for integral DOFs, the
/// midpoint value for midpoint DOFs.
pub fn apply_dirichlet(mut sys: SparseSystem, space: &IfeSpace, g: &dyn Fn(Point) -> f64) -> SparseSystem {
    let mesh = &space.mesh;
    for edge in space.dofmap.boundary_dofs() {
        let value = match space.kind {
            DofKind::Midpoint => g(mesh.edge_midpoint(edge)),
            DofKind::Integral => {
                let (a, b) = mesh.edge_endpoints(edge);
                edge_mean_of(g, a, b, None)
            }
        };
        sys.prescribed[edge] = Some(value);
    }
    sys
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    /// Full DOF vector, constrained entries included.
    pub values: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Solves the constrained system by Jacobi-preconditioned conjugate gradients
/// on the free block, stopping at `||r|| <= rel_tol ||b_free||`.
pub fn solve(sys: &SparseSystem, rel_tol: f64) -> Result<SolveOutcome> {
    let n = sys.n_dofs();
    let mut index = vec![usize::MAX; n];
    let free = sys.free_dofs();
    for (k, &i) in free.iter().enumerate() {
        index[i] = k;
    }
    let mut x_full: Vec<f64> = sys.prescribed.iter().map(|p| p.unwrap_or(0.0)).collect();

    // Free block and right-hand side with known columns moved over.
    let nf = free.len();
    let mut tri = TriMat::with_capacity((nf, nf), 7 * nf);
    let mut b = vec![0.0; nf];
    for (row, vec) in sys.matrix.outer_iterator().enumerate() {
        let r = index[row];
        if r == usize::MAX {
            continue;
        }
        b[r] += sys.rhs[row];
        for (col, &val) in vec.iter() {
            match sys.prescribed[col] {
                Some(g) => b[r] -= val * g,
                None => tri.add_triplet(r, index[col], val),
            }
        }
    }
    let a: CsMat<f64> = tri.to_csr();
    let (x, iterations, relative_residual) = pcg(&a, &b, rel_tol)?;
    for (k, &i) in free.iter().enumerate() {
        x_full[i] = x[k];
    }
    Ok(SolveOutcome {
        values: x_full,
        iterations,
        relative_residual,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn pcg(a: &CsMat<f64>, b: &[f64], rel_tol: f64) -> Result<(Vec<f64>, usize, f64)> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let b_norm = dot(b, b).sqrt();
    if n == 0 || b_norm == 0.0 {
        return Ok((x, 0, 0.0));
    }
    let inv_diag: Vec<f64> = a
        .outer_iterator()
        .enumerate()
        .map(|(i, row)| 1.0 / row.get(i).copied().unwrap_or(1.0))
        .collect();
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let max_iter = 50 * n;
    for it in 1..=max_iter {
        let ap = spmv(a, &p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(IfeError::NoConvergence {
                iterations: it,
                residual: dot(&r, &r).sqrt() / b_norm,
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let res = dot(&r, &r).sqrt() / b_norm;
        if res <= rel_tol {
            // Confirm against the true residual; recursion drift can hide error.
            let ax = spmv(a, &x);
            let true_res = ax
                .iter()
                .zip(b)
                .map(|(u, v)| (v - u) * (v - u))
                .sum::<f64>()
                .sqrt()
                / b_norm;
            if true_res <= rel_tol {
                return Ok((x, it, true_res));
            }
            r = b.iter().zip(&ax).map(|(v, u)| v - u).collect();
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(IfeError::NoConvergence {
        iterations: max_iter,
        residual: dot(&r, &r).sqrt() / b_norm,
    })
}
