//! Finite-element discretisation of the fiber operator.
//!
//! The weak form on `(0, R)` with weight `r dr` is
//!
//! ```text
//! a(u, v) = ∫ u'v' r + ∫ (m/r - br/2)² u v r - γ R u(R) v(R),   m(u, v) = ∫ u v r
//! ```
//!
//! discretised with Lagrange elements of order 1 or 2. Eigenvalues are
//! isolated by Sturm counts of `K - σM` and polished by shift-invert
//! inverse iteration.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{BandLdlt, SymBand};
use crate::math::sqrt;
use crate::quadrature::GaussLegendre;
use crate::trialstate::{BoundaryCondition, FiberSpec};

/// How mesh nodes are distributed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    Uniform,
    /// Half the elements uniformly on `[0, R(1-w)]`, half on `[R(1-w), R]`.
    BoundaryLayer {
        width: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    grading: Grading,
}

pub const MIN_ELEMENTS: usize = 16;

impl Mesh {
    pub fn uniform(elements: usize) -> Result<Self> {
        Self::boundary_layer(elements, 1.0).map(|mut m| {
            m.grading = Grading::Uniform;
            m
        })
    }

    /// Graded mesh resolving a layer of relative width `w` at the outer edge.
    pub fn boundary_layer(elements: usize, w: f64) -> Result<Self> {
        if elements < MIN_ELEMENTS {
            return Err(Error::InvalidArgument("mesh needs at least 16 elements"));
        }
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::InvalidArgument("layer width must lie in (0, 1]"));
        }
        let mut nodes = Vec::with_capacity(elements + 1);
        if w >= 1.0 {
            nodes.extend((0..=elements).map(|i| i as f64 / elements as f64));
        } else {
            let inner = elements / 2;
            let outer = elements - inner;
            let edge = 1.0 - w;
            nodes.extend((0..inner).map(|i| edge * i as f64 / inner as f64));
            nodes.extend((0..=outer).map(|i| edge + w * i as f64 / outer as f64));
        }
        *nodes.last_mut().unwrap() = 1.0;
        Ok(Self {
            nodes,
            grading: Grading::BoundaryLayer { width: w },
        })
    }

    /// Arbitrary node list; must start at 0 and be strictly increasing.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < MIN_ELEMENTS + 1 {
            return Err(Error::InvalidArgument("mesh needs at least 16 elements"));
        }
        if nodes[0] != 0.0 || !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "mesh nodes must start at 0 and increase",
            ));
        }
        Ok(Self {
            nodes,
            grading: Grading::Uniform,
        })
    }

    /// The same mesh stretched to `[0, radius]`.
    pub fn scaled(&self, radius: f64) -> Self {
        Self {
            nodes: self.nodes.iter().map(|x| x * radius).collect(),
            grading: self.grading,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn radius(&self) -> f64 {
        *self.nodes.last().unwrap()
    }
}

/// Mesh and element choice used for a given field strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshPolicy {
    pub elements: usize,
    pub order: u8,
}

impl Default for MeshPolicy {
    fn default() -> Self {
        Self {
            elements: 320,
            order: 2,
        }
    }
}

impl MeshPolicy {
    /// Layer width `min(1/2, 8/√b)`.
    pub fn layer_width(b: f64) -> f64 {
        if b > 0.0 {
            (8.0 / sqrt(b)).min(0.5)
        } else {
            0.5
        }
    }

    pub fn mesh(&self, b: f64) -> Result<Mesh> {
        Mesh::boundary_layer(self.elements, Self::layer_width(b))
    }
}

/// Assembled stiffness/mass pair on the free degrees of freedom.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub stiffness: SymBand,
    pub mass: SymBand,
    /// Global node index of each free dof.
    pub dofs: Vec<usize>,
    /// Total number of nodal values, including constrained ones.
    pub nodal_len: usize,
    pub bc: BoundaryCondition,
    pub order: u8,
}

impl DiscreteOperator {
    pub fn dim(&self) -> usize {
        self.dofs.len()
    }

    /// Expands a free-dof vector to all nodal values (constrained ones zero).
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.nodal_len];
        for (k, &g) in self.dofs.iter().enumerate() {
            out[g] = x[k];
        }
        out
    }
}

fn shape(order: u8, xi: f64) -> ([f64; 3], [f64; 3]) {
    match order {
        1 => ([0.5 * (1.0 - xi), 0.5 * (1.0 + xi), 0.0], [-0.5, 0.5, 0.0]),
        _ => (
            [0.5 * xi * (xi - 1.0), 1.0 - xi * xi, 0.5 * xi * (xi + 1.0)],
            [xi - 0.5, -2.0 * xi, xi + 0.5],
        ),
    }
}

/// Assembles the fiber `spec` on `mesh`. Negative `m` is reduced to `|m|`
/// and the shift `2|m|b` is added as a multiple of the mass matrix.
pub fn assemble(spec: &FiberSpec, mesh: &Mesh, order: u8) -> Result<DiscreteOperator> {
    let mut op = assemble_raw(spec.reduced_m() as i32, spec.b, spec.bc, mesh, order)?;
    let shift = spec.shift();
    if shift != 0.0 {
        op.stiffness = op.stiffness.axpy(shift, &op.mass);
    }
    Ok(op)
}

/// Assembles `(m/r - br/2)²` literally for signed `m`, without reduction.
pub fn assemble_raw(
    m: i32,
    b: f64,
    bc: BoundaryCondition,
    mesh: &Mesh,
    order: u8,
) -> Result<DiscreteOperator> {
    if order != 1 && order != 2 {
        return Err(Error::InvalidArgument("element order must be 1 or 2"));
    }
    let p = order as usize;
    let ne = mesh.elements();
    let nodal_len = p * ne + 1;
    let pin_origin = m != 0;
    let pin_edge = bc == BoundaryCondition::Dirichlet;
    let mut index = vec![usize::MAX; nodal_len];
    let mut dofs = Vec::with_capacity(nodal_len);
    for (g, slot) in index.iter_mut().enumerate() {
        if (pin_origin && g == 0) || (pin_edge && g == nodal_len - 1) {
            continue;
        }
        *slot = dofs.len();
        dofs.push(g);
    }
    let n = dofs.len();
    let mut k = SymBand::zeros(n, p);
    let mut mm = SymBand::zeros(n, p);
    let gl = GaussLegendre::new(2 * p + 4);
    let mf = m as f64;
    let x = mesh.nodes();
    for e in 0..ne {
        let (lo, hi) = (x[e], x[e + 1]);
        let half = 0.5 * (hi - lo);
        let mut ke = [[0.0; 3]; 3];
        let mut me = [[0.0; 3]; 3];
        for (&xi, &w) in gl.nodes.iter().zip(&gl.weights) {
            let r = lo + half * (xi + 1.0);
            let (phi, dphi) = shape(order, xi);
            let pot = mf / r - 0.5 * b * r;
            let v = pot * pot;
            let jw = w * half * r;
            for a in 0..=p {
                for c in 0..=p {
                    ke[a][c] += jw * (dphi[a] * dphi[c] / (half * half) + v * phi[a] * phi[c]);
                    me[a][c] += jw * phi[a] * phi[c];
                }
            }
        }
        if ke.iter().chain(me.iter()).flatten().any(|v| !v.is_finite()) {
            return Err(Error::QuadratureBreakdown { element: e });
        }
        for a in 0..=p {
            let ia = index[p * e + a];
            if ia == usize::MAX {
                continue;
            }
            for c in 0..=a {
                let ic = index[p * e + c];
                if ic == usize::MAX {
                    continue;
                }
                if a == c {
                    k.add(ia, ia, ke[a][a]);
                    mm.add(ia, ia, me[a][a]);
                } else {
                    k.add(ia, ic, ke[a][c]);
                    mm.add(ia, ic, me[a][c]);
                }
            }
        }
    }
    if let BoundaryCondition::Robin { gamma } = bc {
        let last = n - 1;
        k.add(last, last, -gamma * mesh.radius());
    }
    Ok(DiscreteOperator {
        stiffness: k,
        mass: mm,
        dofs,
        nodal_len,
        bc,
        order,
    })
}

/// Lowest eigenpairs of a discrete operator.
#[derive(Debug, Clone, PartialEq)]
pub struct EigResult {
    pub eigenvalues: Vec<f64>,
    /// Nodal coefficients, `M`-normalised, constrained values included.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖(K - λM)x‖ / ‖Mx‖`.
    pub residuals: Vec<f64>,
}

pub const RESIDUAL_TOL: f64 = 1e-9;
const MAX_INVERSE_ITERATIONS: usize = 60;
/// Sturm isolation stops here; a shift closer to the eigenvalue only makes
/// the shifted solve worse conditioned without speeding convergence much.
const ISOLATION_REL: f64 = 1e-6;

fn count_below(op: &DiscreteOperator, sigma: f64) -> usize {
    op.stiffness.ldlt_shifted(&op.mass, sigma).negative_count()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

/// Interval `(lo, hi)` with exactly `index` eigenvalues below `lo` and
/// `index + 1` below `hi`, narrowed to relative width `1e-6`.
fn isolate(op: &DiscreteOperator, index: usize) -> Result<(f64, f64)> {
    let gersh = op.stiffness.max_abs() / op.mass.max_abs().max(f64::MIN_POSITIVE);
    let mut lo = -1.0;
    let mut step = 1.0;
    while count_below(op, lo) > index {
        lo -= step;
        step *= 2.0;
        if step > 1e3 * gersh + 1e6 {
            return Err(Error::ConvergenceFailure {
                index,
                residual: f64::INFINITY,
            });
        }
    }
    let mut hi = lo.abs().max(1.0);
    while count_below(op, hi) <= index {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 * gersh + 1e12 {
            return Err(Error::ConvergenceFailure {
                index,
                residual: f64::INFINITY,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(op, mid) <= index {
            lo = mid;
        } else {
            hi = mid;
        }
        let width = hi - lo;
        let scale = 1.0 + lo.abs().max(hi.abs());
        if count_below(op, hi) == index + 1 && width < ISOLATION_REL * scale {
            return Ok((lo, hi));
        }
        if width < 1e-14 * scale {
            // More than one eigenvalue in an interval at rounding level.
            return Err(Error::ConvergenceFailure {
                index,
                residual: f64::INFINITY,
            });
        }
    }
    Err(Error::ConvergenceFailure {
        index,
        residual: f64::INFINITY,
    })
}

/// The `k` smallest eigenpairs of `(K, M)`, ascending.
pub fn solve_lowest(op: &DiscreteOperator, k: usize) -> Result<EigResult> {
    let n = op.dim();
    if k == 0 || 4 * k > n {
        return Err(Error::InvalidArgument("need 1 <= k <= dof/4"));
    }
    let mut values = Vec::with_capacity(k);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut mvectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for index in 0..k {
        let (lo, hi) = isolate(op, index)?;
        let sigma = 0.5 * (lo + hi);
        let fac = BandLdlt::factor(&op.stiffness.axpy(-sigma, &op.mass));
        let mut x = vec![1.0; n];
        let mut best = (f64::INFINITY, 0.0, Vec::new());
        let mut polish = 2;
        for _ in 0..MAX_INVERSE_ITERATIONS {
            deflate(&mut x, &vectors, &mvectors);
            let mx = op.mass.matvec(&x);
            let mut y = fac.solve(&mx);
            deflate(&mut y, &vectors, &mvectors);
            let my = op.mass.matvec(&y);
            let nrm = sqrt(dot(&y, &my));
            if !(nrm > 0.0) || !nrm.is_finite() {
                break;
            }
            for v in y.iter_mut() {
                *v /= nrm;
            }
            let ky = op.stiffness.matvec(&y);
            let my = op.mass.matvec(&y);
            let lambda = dot(&y, &ky);
            let res: Vec<f64> = ky.iter().zip(&my).map(|(a, c)| a - lambda * c).collect();
            let r = norm(&res) / norm(&my);
            if r < best.0 {
                best = (r, lambda, y.clone());
            }
            x = y;
            if best.0 <= RESIDUAL_TOL {
                if polish == 0 {
                    break;
                }
                polish -= 1;
            }
        }
        let (r, lambda, y) = best;
        if !(r <= RESIDUAL_TOL) {
            return Err(Error::ConvergenceFailure { index, residual: r });
        }
        mvectors.push(op.mass.matvec(&y));
        vectors.push(y);
        values.push(lambda);
        residuals.push(r);
    }
    Ok(EigResult {
        eigenvalues: values,
        eigenvectors: vectors.iter().map(|v| op.expand(v)).collect(),
        residuals,
    })
}

fn deflate(x: &mut [f64], vectors: &[Vec<f64>], mvectors: &[Vec<f64>]) {
    for (v, mv) in vectors.iter().zip(mvectors) {
        let c = dot(x, mv);
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi -= c * vi;
        }
    }
}

/// Lowest `k` eigenvalues of the fiber under `policy`.
pub fn eigenvalues(spec: &FiberSpec, k: usize, policy: MeshPolicy) -> Result<Vec<f64>> {
    let mesh = policy.mesh(spec.b)?;
    let op = assemble(spec, &mesh, policy.order)?;
    Ok(solve_lowest(&op, k)?.eigenvalues)
}

/// One point of an eigenvalue branch; failures are kept with their reason.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoint {
    pub m: i32,
    pub n: u32,
    pub b: f64,
    pub lambda: Result<f64>,
}

/// Branches `n = 1..=n_max` of fiber `m` over an ascending `b` grid.
pub fn branch(
    m: i32,
    b_grid: &[f64],
    bc: BoundaryCondition,
    n_max: u32,
    policy: MeshPolicy,
) -> Result<Vec<BranchPoint>> {
    if !b_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("b grid must be ascending"));
    }
    let mut rows = Vec::new();
    for &b in b_grid {
        let solved = FiberSpec::new(m, b, bc).and_then(|s| eigenvalues(&s, n_max as usize, policy));
        for n in 1..=n_max {
            let lambda = match &solved {
                Ok(v) => Ok(v[n as usize - 1]),
                Err(e) => Err(e.clone()),
            };
            rows.push(BranchPoint { m, n, b, lambda });
        }
    }
    Ok(rows)
}
