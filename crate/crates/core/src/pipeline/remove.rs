use super::chain::{accept, compose, retry, Coefficients};
use super::{certificate, Certificate, ChainStep, Variant};
use crate::error::{Error, Result};
use crate::geometry::{
    intersect_plane_curves, isotropic_subspace, line_on_cubic, plane_on_cubic_segre, plane_on_cubic_strict,
};
use crate::multipoly::MultiPoly;
use crate::numeric::{normalize, orthonormalize, Context, PrecisionConfig, Scalar};
use crate::obliteration::{find_point, meet_line, point_bound, DegreeProfile, Equation, PolySystem};
use crate::transform::MonicPoly;

fn check_k(p: &MonicPoly, k: usize) -> Result<()> {
    if k == 0 || k > 5 || k > p.n() {
        return Err(Error::DomainError(format!("cannot remove {k} terms from a degree-{} polynomial", p.n())));
    }
    Ok(())
}

/// Removes `A_1..A_k` with the obliteration solver applied directly to the
/// coefficient forms, solving nothing above degree `k`.
///
/// [`Error::AmbientTooSmall`] reports degrees of `p`: the smallest that
/// works and the one given.
pub fn remove_terms_generic(p: &MonicPoly, k: usize, cfg: &PrecisionConfig) -> Result<Certificate> {
    check_k(p, k)?;
    let n = p.n();
    let required = point_bound(&DegreeProfile::staircase(k)) + 1;
    if n < required {
        return Err(Error::AmbientTooSmall { required, actual: n });
    }
    let mut ctx = Context::new(cfg.clone());
    let p = p.with_bits(cfg.bits);
    let coeffs = Coefficients::new(&p);
    ctx.log.set_stage("obliteration");
    let acc = retry(&mut ctx, |ctx| {
        let system = PolySystem::new(n - 1, (1..=k).map(|i| coeffs.equation(i)).collect())?;
        let x = find_point(&system, ctx)?;
        accept(&p, k, [x.into_coords()], ctx.tol(), |_| true)
    })?;
    let chain = vec![ChainStep::point("common zero of A_1..A_k", (1..=k).collect(), acc.b)?];
    Ok(certificate(
        &p,
        k,
        Variant::Generic,
        &ctx,
        chain,
        acc.transformation,
        acc.transformed,
        acc.residuals,
    ))
}

/// Removes `A_1..A_4` for `n ≥ 13` through a chain: the hyperplane
/// `A_1 = 0`, an isotropic `P^5` of `A_2`, a line on the cubic `A_3`
/// there, and one quartic along the line.
pub fn remove4_chain(p: &MonicPoly, cfg: &PrecisionConfig) -> Result<Certificate> {
    let n = p.n();
    if n < 13 {
        return Err(Error::AmbientTooSmall { required: 13, actual: n });
    }
    let mut ctx = Context::new(cfg.clone());
    let p = p.with_bits(cfg.bits);
    let coeffs = Coefficients::new(&p);
    let (chain, acc) = retry(&mut ctx, |ctx| {
        ctx.log.set_stage("geometry");
        let k1 = coeffs.a1_kernel();
        let a2 = coeffs.restricted(2, &k1, ctx)?;
        let iso = isotropic_subspace(&a2.polarize_quadratic(), 5, ctx)?;
        let k2 = compose(&k1, iso.basis());
        let a3 = coeffs.restricted(3, &k2, ctx)?;
        let line: Vec<Vec<Scalar>> = if a3.is_zero() {
            vec![normalize(&ctx.random_vector(6)), normalize(&ctx.random_vector(6))]
        } else {
            let l = line_on_cubic(&a3, ctx)?;
            let (a, b) = l.points();
            vec![a.coords().to_vec(), b.coords().to_vec()]
        };
        let k3 = compose(&k2, &line);
        let candidates = along_line(&coeffs.equation(4), &k3, ctx)?;
        let acc = accept(&p, 4, candidates, ctx.tol(), |_| true)?;
        let chain = vec![
            ChainStep::subspace("hyperplane A_1 = 0", vec![1], k1)?,
            ChainStep::subspace("isotropic P^5 of A_2", vec![1, 2], k2)?,
            ChainStep::subspace("line on the cubic A_3", vec![1, 2, 3], k3)?,
            ChainStep::point("zero of A_4 on the line", vec![1, 2, 3, 4], acc.b.clone())?,
        ];
        Ok((chain, acc))
    })?;
    ctx.log.set_stage("");
    Ok(certificate(
        &p,
        4,
        Variant::Generic,
        &ctx,
        chain,
        acc.transformation,
        acc.transformed,
        acc.residuals,
    ))
}

/// Points `a + t·b` of the line `span(cols)` where `g` vanishes, one per
/// root of the restriction (and `b` itself when the degree drops).
pub(crate) fn along_line(g: &Equation, cols: &[Vec<Scalar>], ctx: &mut Context) -> Result<Vec<Vec<Scalar>>> {
    let (a, b) = (&cols[0], &cols[1]);
    let h = g.on_line(a, b);
    if h.norm_inf() <= crate::obliteration::SLACK * ctx.tol() * g.scale() {
        return Ok(vec![a.clone(), b.clone()]);
    }
    let h = h.trim_rel(ctx.tol());
    let mut out = Vec::new();
    if h.degree() > 0 {
        let mut roots = ctx.solve(&h, &format!("line-section/deg{}", g.degree()))?;
        roots.sort_by_key(|r| r.multiplicity);
        for r in roots {
            out.push(a.iter().zip(b).map(|(x, y)| x + &(&r.value * y)).collect());
        }
    }
    if h.degree() < g.degree() {
        out.push(b.clone());
    }
    Ok(out)
}

/// Removes `A_1..A_5` through `{A_1 = 0} ⊃ P^r ⊃ P^2 ⊃ V(A_4) ∩ V(A_5)`,
/// solving nothing above degree 20.
///
/// The isotropic subspace is a `P^9` and the plane comes from
/// [`plane_on_cubic_segre`] for [`Variant::Segre`] (`n ≥ 21`); a `P^11`
/// and [`plane_on_cubic_strict`] for [`Variant::Strict`] (`n ≥ 25`).
pub fn remove5(p: &MonicPoly, variant: Variant, cfg: &PrecisionConfig) -> Result<Certificate> {
    let (need, r) = match variant {
        Variant::Segre => (21, 9),
        Variant::Strict => (25, 11),
        Variant::Generic => return remove_terms_generic(p, 5, cfg),
    };
    let n = p.n();
    if n < need {
        return Err(Error::AmbientTooSmall { required: need, actual: n });
    }
    let mut ctx = Context::new(cfg.clone());
    let p = p.with_bits(cfg.bits);
    let coeffs = Coefficients::new(&p);
    let (chain, acc) = retry(&mut ctx, |ctx| {
        ctx.log.set_stage("geometry");
        let k1 = coeffs.a1_kernel();
        let a2 = coeffs.restricted(2, &k1, ctx)?;
        let iso = isotropic_subspace(&a2.polarize_quadratic(), r, ctx)?;
        let k2 = compose(&k1, iso.basis());
        let a3 = coeffs.restricted(3, &k2, ctx)?;
        let plane: Vec<Vec<Scalar>> = if a3.is_zero() {
            (0..3).map(|i| crate::geometry::unit_vector(r + 1, i, ctx.bits())).collect()
        } else {
            let s = match variant {
                Variant::Segre => plane_on_cubic_segre(&a3, ctx)?,
                _ => plane_on_cubic_strict(&a3, ctx)?,
            };
            orthonormalize(s.basis(), 0.0)
        };
        let k3 = compose(&k2, &plane);
        ctx.log.set_stage("intersection");
        let c4 = coeffs.restricted(4, &k3, ctx)?;
        let c5 = coeffs.restricted(5, &k3, ctx)?;
        let pts = points_on_curves(&c4, &c5, ctx)?;
        let m = crate::multipoly::LinearMap::from_columns(&k3);
        let acc = accept(&p, 5, pts.iter().map(|x| m.apply(x)), ctx.tol(), |_| true)?;
        let chain = vec![
            ChainStep::subspace("hyperplane A_1 = 0", vec![1], k1)?,
            ChainStep::subspace(&format!("isotropic P^{r} of A_2"), vec![1, 2], k2)?,
            ChainStep::subspace("2-plane on the cubic A_3", vec![1, 2, 3], k3)?,
            ChainStep::point("intersection of the curves A_4, A_5", vec![1, 2, 3, 4, 5], acc.b.clone())?,
        ];
        Ok((chain, acc))
    })?;
    ctx.log.set_stage("");
    Ok(certificate(
        &p,
        5,
        variant,
        &ctx,
        chain,
        acc.transformation,
        acc.transformed,
        acc.residuals,
    ))
}

/// Common points of two plane curves, either of which may have collapsed
/// to the zero form.
fn points_on_curves(c4: &MultiPoly, c5: &MultiPoly, ctx: &mut Context) -> Result<Vec<Vec<Scalar>>> {
    let line = |ctx: &mut Context| (normalize(&ctx.random_vector(3)), normalize(&ctx.random_vector(3)));
    match (c4.is_zero(), c5.is_zero()) {
        (false, false) => Ok(intersect_plane_curves(c4, c5, ctx)?
            .into_iter()
            .map(|p| p.into_coords())
            .collect()),
        (true, true) => Ok(vec![normalize(&ctx.random_vector(3))]),
        (z4, _) => {
            let f = Equation::explicit(if z4 { c5.clone() } else { c4.clone() });
            let (a, b) = line(ctx);
            Ok(vec![meet_line(&f, &a, &b, ctx)?])
        }
    }
}
