use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multipoly::{LinearMap, MultiPoly};
use crate::numeric::{kernel_basis, normalize, orthonormalize, Context, Matrix, Scalar};
use crate::obliteration::{Equation, SLACK};
use crate::transform::{relative_residuals, transform, CoefficientFunctional, MonicPoly, QuotientRing, Transformation};

/// The forms `A_i(b)` of one input polynomial, sharing a quotient ring.
pub(crate) struct Coefficients {
    ring: Arc<QuotientRing>,
}

impl Coefficients {
    pub fn new(p: &MonicPoly) -> Self {
        Coefficients {
            ring: Arc::new(QuotientRing::new(p)),
        }
    }

    pub fn functional(&self, i: usize) -> CoefficientFunctional {
        CoefficientFunctional::new(self.ring.clone(), i)
    }

    pub fn equation(&self, i: usize) -> Equation {
        Equation::oracle(Arc::new(self.functional(i)))
    }

    /// Orthonormal basis of `{A_1 = 0}`.
    pub fn a1_kernel(&self) -> Vec<Vec<Scalar>> {
        let row = normalize(&self.functional(1).expand().linear_coefficients());
        kernel_basis(&Matrix::from_rows(vec![row]), 1e-6)
    }

    /// `A_i` on `span(cols)`, interpolated; returned as the zero form when
    /// it is negligible against the size of `A_i` on the unit sphere.
    pub fn restricted(&self, i: usize, cols: &[Vec<Scalar>], ctx: &mut Context) -> Result<MultiPoly> {
        let f = if i <= 2 {
            self.functional(i).expand().substitute_linear(&LinearMap::from_columns(cols))
        } else {
            self.functional(i).restrict(&LinearMap::from_columns(cols), ctx)?
        };
        let reference = self.equation(i).scale();
        if f.max_abs_coeff() <= SLACK * ctx.tol() * reference {
            return Ok(MultiPoly::zero(cols.len(), i));
        }
        Ok(f)
    }
}

/// Orthonormal columns spanning `outer · inner`.
pub(crate) fn compose(outer: &[Vec<Scalar>], inner: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let m = LinearMap::from_columns(outer);
    let cols: Vec<Vec<Scalar>> = inner.iter().map(|v| m.apply(v)).collect();
    orthonormalize(&cols, 0.0)
}

pub(crate) struct Accepted {
    pub b: Vec<Scalar>,
    pub transformation: Transformation,
    pub transformed: MonicPoly,
    pub residuals: Vec<f64>,
}

/// The first candidate whose `A_1..A_k` pass the tolerance and `extra`.
pub(crate) fn accept(
    p: &MonicPoly,
    k: usize,
    candidates: impl IntoIterator<Item = Vec<Scalar>>,
    tol: f64,
    extra: impl Fn(&MonicPoly) -> bool,
) -> Result<Accepted> {
    let mut best = f64::INFINITY;
    for b in candidates {
        let b = normalize(&b);
        let t = Transformation::new(b.clone())?;
        let q = transform(p, &t);
        let residuals = relative_residuals(&q, k);
        let worst = residuals.iter().cloned().fold(0.0, f64::max);
        best = best.min(worst);
        if worst <= tol && extra(&q) {
            return Ok(Accepted {
                b,
                transformation: t,
                transformed: q,
                residuals,
            });
        }
    }
    Err(Error::GenericityFailure(format!("no candidate met the tolerance (best residual {best:.3e})")))
}

pub(crate) fn retry<T>(ctx: &mut Context, mut f: impl FnMut(&mut Context) -> Result<T>) -> Result<T> {
    let mut last = Error::GenericityFailure("pipeline failed".into());
    for _ in 0..ctx.cfg.max_retries {
        match f(ctx) {
            Ok(x) => return Ok(x),
            Err(e @ (Error::GenericityFailure(_) | Error::RankCollapse(_) | Error::SingularInterpolation)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}
