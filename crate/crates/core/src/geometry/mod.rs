//! Explicit linear subspaces of quadrics and cubics, and intersections of
//! plane curves, with every univariate solve logged by degree.

mod cubic;
mod curves;
mod quadric;

#[cfg(test)]
mod tests;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipoly::{LinearMap, MultiPoly};
use crate::numeric::{normalize, orthonormalize, Context, Matrix, Scalar};
use crate::obliteration::{Equation, ProjLine, ProjPoint, SLACK};

pub use cubic::{line_on_cubic, plane_on_cubic_segre, plane_on_cubic_strict};
pub use curves::intersect_plane_curves;
pub use quadric::{isotropic_subspace, line_on_quadric_surface, line_on_two_quadrics_p4};

/// A projective subspace `P^dim ⊂ P^ambient` given by a spanning basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearSubspace {
    ambient: usize,
    dim: usize,
    basis: Vec<Vec<Scalar>>,
}

impl LinearSubspace {
    /// Rejects bases that are not of full rank.
    pub fn new(basis: Vec<Vec<Scalar>>) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Err(Error::DomainError("empty basis".into()));
        };
        let m = first.len();
        if m == 0 || basis.iter().any(|b| b.len() != m) {
            return Err(Error::DomainError("basis vectors of unequal length".into()));
        }
        let bits = first.iter().map(Scalar::bits).max().unwrap_or(64);
        let tol = (bits as f64 * -0.25).exp2();
        if orthonormalize(&basis, tol).len() != basis.len() {
            return Err(Error::DomainError("basis is rank deficient".into()));
        }
        Ok(LinearSubspace {
            ambient: m - 1,
            dim: basis.len() - 1,
            basis,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn as_map(&self) -> LinearMap {
        LinearMap::from_columns(&self.basis)
    }

    /// `f` pulled back to the subspace's coordinates.
    pub fn restrict(&self, f: &MultiPoly) -> MultiPoly {
        f.substitute_linear(&self.as_map())
    }

    /// Whether `f` vanishes on the subspace: the pullback along an
    /// orthonormalized basis has all coefficients below `tol · scale(f)`.
    pub fn lies_on(&self, f: &MultiPoly, tol: f64) -> bool {
        let q = orthonormalize(&self.basis, 0.0);
        let scale = Equation::explicit(f.clone()).scale();
        let r = f.substitute_linear(&LinearMap::from_columns(&q));
        r.max_abs_coeff() <= tol * scale.max(f64::MIN_POSITIVE)
    }

    /// Whether `x` lies in the span, up to relative `tol`.
    pub fn contains(&self, x: &[Scalar], tol: f64) -> bool {
        let mut vs = orthonormalize(&self.basis, 0.0);
        vs.push(x.to_vec());
        orthonormalize(&vs, tol).len() == self.basis.len()
    }
}

impl From<&ProjLine> for LinearSubspace {
    fn from(l: &ProjLine) -> Self {
        let (p, q) = l.points();
        LinearSubspace {
            ambient: l.ambient(),
            dim: 1,
            basis: vec![p.coords().to_vec(), q.coords().to_vec()],
        }
    }
}

/// Two quadrics on the same space, as symmetric Gram matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricPencil {
    g1: Matrix,
    g2: Matrix,
}

impl QuadricPencil {
    pub fn new(g1: Matrix, g2: Matrix) -> Result<Self> {
        if g1.rows() != g1.cols() || g2.rows() != g2.cols() || g1.rows() != g2.rows() {
            return Err(Error::DomainError("pencil matrices must be square of equal size".into()));
        }
        for g in [&g1, &g2] {
            let s = g.norm_max().max(f64::MIN_POSITIVE);
            for i in 0..g.rows() {
                for j in 0..i {
                    if (&g[(i, j)] - &g[(j, i)]).mag() > 1e-12 * s {
                        return Err(Error::DomainError("Gram matrix is not symmetric".into()));
                    }
                }
            }
        }
        Ok(QuadricPencil { g1, g2 })
    }

    pub fn from_quadrics(q1: &MultiPoly, q2: &MultiPoly) -> Result<Self> {
        if q1.degree() != 2 || q2.degree() != 2 || q1.nvars() != q2.nvars() {
            return Err(Error::DomainError("pencil needs two quadrics in the same variables".into()));
        }
        Self::new(q1.polarize_quadratic(), q2.polarize_quadratic())
    }

    pub fn g1(&self) -> &Matrix {
        &self.g1
    }

    pub fn g2(&self) -> &Matrix {
        &self.g2
    }

    pub fn ambient(&self) -> usize {
        self.g1.rows() - 1
    }

    /// `G1 + t·G2`
    pub fn member(&self, t: &Scalar) -> Matrix {
        self.g1.add(&self.g2.scale(t))
    }
}

/// `Σ a_i b_i` without conjugation.
pub(crate) fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let bits = a.first().map_or(64, Scalar::bits);
    let mut acc = Scalar::zero(bits);
    for (x, y) in a.iter().zip(b) {
        acc += &(x * y);
    }
    acc
}

/// `xᵀ G y`
pub(crate) fn bilinear(g: &Matrix, x: &[Scalar], y: &[Scalar]) -> Scalar {
    dot(x, &g.mul_vec(y))
}

/// The Gram matrix of `G` restricted to `span(basis)`.
pub(crate) fn gram_on(g: &Matrix, basis: &[Vec<Scalar>]) -> Matrix {
    let k = basis.len();
    let mut out = Matrix::zeros(k, k, g.bits());
    let gb: Vec<Vec<Scalar>> = basis.iter().map(|b| g.mul_vec(b)).collect();
    for i in 0..k {
        for j in i..k {
            let v = dot(&basis[i], &gb[j]);
            out[(i, j)] = v.clone();
            out[(j, i)] = v;
        }
    }
    out
}

pub(crate) fn combine(basis: &[Vec<Scalar>], c: &[Scalar]) -> Vec<Scalar> {
    let n = basis[0].len();
    let bits = basis[0][0].bits();
    let mut out = vec![Scalar::zero(bits); n];
    for (b, ci) in basis.iter().zip(c) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += &(x * ci);
        }
    }
    out
}

pub(crate) fn unit_vector(n: usize, i: usize, bits: usize) -> Vec<Scalar> {
    let mut e = vec![Scalar::zero(bits); n];
    e[i] = Scalar::one(bits);
    e
}

pub(crate) fn random_columns(rows: usize, cols: usize, ctx: &mut Context) -> Vec<Vec<Scalar>> {
    (0..cols).map(|_| normalize(&ctx.random_vector(rows))).collect()
}

/// Whether every equation vanishes at `d + 1` points of `span{p, q}`.
pub(crate) fn line_ok(polys: &[&MultiPoly], p: &[Scalar], q: &[Scalar], ctx: &Context) -> bool {
    let eqs: Vec<Equation> = polys.iter().map(|f| Equation::explicit((*f).clone())).collect();
    crate::obliteration::line_certified(&eqs, p, q, SLACK * ctx.tol())
}

pub(crate) fn make_line(p: Vec<Scalar>, q: Vec<Scalar>) -> Result<ProjLine> {
    ProjLine::new(ProjPoint::new(normalize(&p))?, ProjPoint::new(normalize(&q))?)
}

pub(crate) fn genericity(what: &str) -> Error {
    Error::GenericityFailure(what.to_string())
}

pub(crate) fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::GenericityFailure(_) | Error::SingularInterpolation | Error::RankCollapse(_) | Error::DomainError(_)
    )
}
