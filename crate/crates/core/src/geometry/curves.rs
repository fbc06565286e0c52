use super::random_columns;
use crate::error::{Error, Result};
use crate::multipoly::{resultant_bivariate, BiPoly, LinearMap, MultiPoly};
use crate::numeric::{gcd_univariate, Context, Scalar};
use crate::obliteration::{Equation, ProjPoint, SLACK};

/// Common points of two plane curves.
///
/// Eliminates `x` from the affine chart `z = 1` by a resultant, then for
/// each root `y₀` solves the gcd of the slices `f(x, y₀)` and `g(x, y₀)`.
/// Coordinates are first used as given, then randomized on failure.
/// Points are sorted by combined residual.
pub fn intersect_plane_curves(c4: &MultiPoly, c5: &MultiPoly, ctx: &mut Context) -> Result<Vec<ProjPoint>> {
    if c4.nvars() != 3 || c5.nvars() != 3 {
        return Err(Error::DomainError("plane curves need three variables".into()));
    }
    if c4.degree() == 0 || c5.degree() == 0 {
        return Err(Error::DomainError("plane curves must have positive degree".into()));
    }
    let (e4, e5) = (Equation::explicit(c4.clone()), Equation::explicit(c5.clone()));
    let lim = SLACK * ctx.tol();
    let bits = ctx.bits();
    let mut common = 0;
    for attempt in 0..ctx.cfg.max_retries {
        let map = if attempt == 0 {
            LinearMap::identity(3, bits)
        } else {
            LinearMap::from_columns(&random_columns(3, 3, ctx))
        };
        let (f, g) = (c4.substitute_linear(&map), c5.substitute_linear(&map));
        let (bf, bg) = (BiPoly::from_ternary(&f, 0, 1), BiPoly::from_ternary(&g, 0, 1));
        let res = match resultant_bivariate(&bf, &bg, ctx.tol()) {
            Ok(r) => r.trim_rel(ctx.tol()),
            Err(Error::IdenticallyZero) => {
                common += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if res.is_zero() || res.degree() == 0 {
            continue;
        }
        let (sf, sg) = (f.max_abs_coeff(), g.max_abs_coeff());
        let mut found: Vec<(f64, ProjPoint)> = Vec::new();
        for y in ctx.solve(&res, "resultant")? {
            let (hf, hg) = (bf.eval_y(&y.value), bg.eval_y(&y.value));
            let h = match (hf.norm_inf() <= lim * sf, hg.norm_inf() <= lim * sg) {
                (true, true) => continue,
                (true, false) => hg,
                (false, true) => hf,
                (false, false) => match gcd_univariate(&hf, &hg, &ctx.cfg) {
                    Ok(h) => h,
                    Err(e) if e.wants_more_precision() => continue,
                    Err(e) => return Err(e),
                },
            };
            if h.degree() == 0 {
                continue;
            }
            for x in ctx.solve(&h, "slice-gcd")? {
                let pt = map.apply(&[x.value.clone(), y.value.clone(), Scalar::one(bits)]);
                let (r4, r5) = (e4.residual(&pt), e5.residual(&pt));
                if r4 <= lim && r5 <= lim {
                    found.push((r4 + r5, ProjPoint::new(pt)?.normalized()));
                }
            }
        }
        if found.is_empty() {
            continue;
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0));
        let sep = ctx.tol().sqrt().sqrt();
        let mut out: Vec<ProjPoint> = Vec::new();
        for (_, p) in found {
            if out.iter().all(|o| o.distance(&p) > sep) {
                out.push(p);
            }
        }
        return Ok(out);
    }
    if common == ctx.cfg.max_retries {
        Err(Error::CommonComponent)
    } else {
        Err(Error::GenericityFailure("no common point located".into()))
    }
}
