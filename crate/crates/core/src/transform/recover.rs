use super::poly::{MonicPoly, Transformation};
use crate::error::{Error, Result};
use crate::numeric::{flatten, gcd_univariate, Context, Scalar, UniPoly};

/// Roots of `p` mapped to `y*` by `T`: the roots of `gcd(p, T − y*)`.
///
/// The gcd is solved (and logged) in `ctx`; its degree is generically one.
pub fn recover_roots(p: &MonicPoly, t: &Transformation, y: &Scalar, ctx: &mut Context) -> Result<Vec<Scalar>> {
    let tol = ctx.tol();
    let pu = p.to_unipoly();
    let tu = t.to_unipoly().sub(&UniPoly::constant(y.clone()));
    if tu.trim_rel(tol).is_zero() || tu.trim_rel(tol).degree() == 0 && tu.norm_inf() <= tol * y.mag().max(1.0) {
        return Err(Error::DomainError("T − y* vanishes identically".into()));
    }
    let g = gcd_univariate(&pu, &tu, &ctx.cfg)?;
    if g.degree() == 0 {
        return Err(Error::EmptyGcd);
    }
    let roots = flatten(&ctx.solve(&g, "gcd-recovery")?);
    let tu_full = t.to_unipoly();
    let pn = pu.norm_inf();
    let tn = tu_full.norm_inf();
    let n = p.n() as i32;
    for x in &roots {
        let w = x.mag().max(1.0);
        let rp = pu.eval(x).mag();
        let rt = (&tu_full.eval(x) - y).mag();
        if rp > tol * pn * w.powi(n) || rt > tol * (tn * w.powi(n - 1) + y.mag()) {
            return Err(Error::IllConditioned("recovered root fails its residual check".into()));
        }
    }
    Ok(roots)
}
