use serde::{Deserialize, Serialize};

use super::chain::{accept, compose, retry, Coefficients};
use super::remove::along_line;
use super::{certificate, BringForm, Certificate, ChainStep, Variant};
use crate::error::{Error, Result};
use crate::geometry::line_on_quadric_surface;
use crate::numeric::{Context, PrecisionConfig, Scalar, SolveLog};
use crate::transform::{recover_roots, MonicPoly};

/// Removes `A_1..A_3` from a quintic: the hyperplane `A_1 = 0`, a line on
/// the quadric surface `A_2` there, then one cubic along the line. The
/// result `y⁵ + A₄y + A₅` is normalized to Bring form.
///
/// The certificate's log covers the removal; the fifth root taken for the
/// normalization is logged in `ctx` afterwards.
pub fn bring_reduce(p: &MonicPoly, cfg: &PrecisionConfig) -> Result<(Certificate, BringForm)> {
    let mut ctx = Context::new(cfg.clone());
    bring_in(p, &mut ctx)
}

fn bring_in(p: &MonicPoly, ctx: &mut Context) -> Result<(Certificate, BringForm)> {
    if p.n() != 5 {
        return Err(Error::DomainError(format!("Bring reduction needs a quintic, got degree {}", p.n())));
    }
    let p = p.with_bits(ctx.bits());
    let coeffs = Coefficients::new(&p);
    let (chain, acc) = retry(ctx, |ctx| {
        ctx.log.set_stage("geometry");
        let k1 = coeffs.a1_kernel();
        let a2 = coeffs.restricted(2, &k1, ctx)?;
        let line = line_on_quadric_surface(&a2, ctx)?;
        let (u, v) = line.points();
        let k2 = compose(&k1, &[u.coords().to_vec(), v.coords().to_vec()]);
        let candidates = along_line(&coeffs.equation(3), &k2, ctx)?;
        let tol = ctx.tol();
        let acc = accept(&p, 3, candidates, tol, |q| {
            let tail = q.coeff(4).mag().powf(0.25).max(1.0);
            q.coeff(5).mag() > tol.sqrt() * tail.powi(5)
        })?;
        let chain = vec![
            ChainStep::subspace("hyperplane A_1 = 0", vec![1], k1)?,
            ChainStep::subspace("line on the quadric A_2", vec![1, 2], k2)?,
            ChainStep::point("zero of A_3 on the line", vec![1, 2, 3], acc.b.clone())?,
        ];
        Ok((chain, acc))
    })?;
    ctx.log.set_stage("");
    let cert = certificate(
        &p,
        3,
        Variant::Generic,
        ctx,
        chain,
        acc.transformation,
        acc.transformed,
        acc.residuals,
    );
    ctx.log.set_stage("normalization");
    let q = &cert.transformed;
    let bf = BringForm::from_reduced(q.coeff(4), q.coeff(5), ctx)?;
    ctx.log.set_stage("");
    Ok((cert, bf))
}

/// Roots of a quintic through its Bring form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuinticSolution {
    pub roots: Vec<Scalar>,
    pub certificate: Certificate,
    pub bring: BringForm,
    /// Solves used only to finish the job numerically: the Bring quintic
    /// itself and the gcd recoveries.
    pub verification_log: SolveLog,
}

/// Solves `p` by reducing to `z⁵ + Az + 1`, solving that numerically, and
/// mapping each root back through `gcd(p, T − s·z)`.
pub fn quintic_solve_demo(p: &MonicPoly, cfg: &PrecisionConfig) -> Result<QuinticSolution> {
    let mut ctx = Context::new(cfg.clone());
    let (cert, bring) = bring_in(p, &mut ctx)?;
    let p = &cert.input;
    let mut vctx = Context::new(cfg.clone());
    let zs = vctx.solve(&bring.quintic().to_unipoly(), "bring-quintic")?;
    let mut roots = Vec::with_capacity(5);
    for z in &zs {
        let y = &bring.scale * &z.value;
        roots.extend(recover_roots(p, &cert.transformation, &y, &mut vctx)?);
    }
    if roots.len() != 5 {
        return Err(Error::IllConditioned(format!("recovered {} roots of a quintic", roots.len())));
    }
    Ok(QuinticSolution {
        roots,
        certificate: cert,
        bring,
        verification_log: vctx.log,
    })
}
