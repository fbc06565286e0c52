use super::quadric::{isotropic_subspace, line_on_two_quadrics_p4};
use super::{combine, genericity, gram_on, line_ok, make_line, random_columns, retryable, unit_vector, LinearSubspace, QuadricPencil};
use crate::error::{Error, Result};
use crate::multipoly::{LinearMap, MultiPoly};
use crate::numeric::{kernel_basis, normalize, Context, Matrix, Scalar};
use crate::obliteration::{find_point, meet_line, Equation, PolySystem, ProjLine, SLACK};

fn check_cubic(f: &MultiPoly, min_ambient: usize) -> Result<()> {
    if f.degree() != 3 {
        return Err(Error::DomainError(format!("expected a cubic, got degree {}", f.degree())));
    }
    let amb = f.nvars().saturating_sub(1);
    if amb < min_ambient {
        return Err(Error::AmbientTooSmall {
            required: min_ambient,
            actual: amb,
        });
    }
    Ok(())
}

fn with_retries<T>(ctx: &mut Context, mut f: impl FnMut(&mut Context) -> Result<T>) -> Result<T> {
    let mut last = genericity("construction failed");
    for _ in 0..ctx.cfg.max_retries {
        match f(ctx) {
            Ok(x) => return Ok(x),
            Err(e) if retryable(&e) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// A line on the cubic hypersurface `V(f) ⊂ P^N`, `N ≥ 5`, solving
/// equations of degree at most 3.
pub fn line_on_cubic(f: &MultiPoly, ctx: &mut Context) -> Result<ProjLine> {
    check_cubic(f, 5)?;
    with_retries(ctx, |ctx| {
        let n = f.nvars();
        let (cut, g) = if n > 6 {
            let m = LinearMap::from_columns(&random_columns(n, 6, ctx));
            let g = f.substitute_linear(&m);
            (Some(m), g)
        } else {
            (None, f.clone())
        };
        let (p, q) = line_on_cubic_p5(&g, ctx)?;
        let (p, q) = match &cut {
            Some(m) => (m.apply(&p), m.apply(&q)),
            None => (p, q),
        };
        if !line_ok(&[f], &p, &q, ctx) {
            return Err(genericity("line leaves the cubic"));
        }
        make_line(p, q)
    })
}

fn line_on_cubic_p5(g: &MultiPoly, ctx: &mut Context) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let bits = ctx.bits();
    let lim = SLACK * ctx.tol();
    let ge = Equation::explicit(g.clone());
    if ge.scale() == 0.0 {
        return Ok((normalize(&ctx.random_vector(6)), normalize(&ctx.random_vector(6))));
    }
    let (a, b) = (ctx.random_vector(6), ctx.random_vector(6));
    let q = meet_line(&ge, &a, &b, ctx)?;
    let c = (0..6)
        .max_by(|&i, &j| q[i].mag().total_cmp(&q[j].mag()))
        .expect("six coordinates");
    let cols: Vec<Vec<Scalar>> = (0..6).filter(|&i| i != c).map(|i| unit_vector(6, i, bits)).collect();
    let h = LinearMap::from_columns(&cols);
    let part = |j: usize| ge.derived(&q, j).restrict(&h);
    let (cub, quad, lin) = (part(0), part(1), part(2));
    let basis: Vec<Vec<Scalar>> = if lin.scale() <= lim * ge.scale() {
        (0..5).map(|i| unit_vector(5, i, bits)).collect()
    } else {
        let row = normalize(&lin.as_poly().expect("explicit").linear_coefficients());
        kernel_basis(&Matrix::from_rows(vec![row]), 1e-6)
    };
    let (u, w) = if quad.scale() <= lim * ge.scale() {
        let k = basis.len();
        (combine(&basis, &ctx.random_vector(k)), combine(&basis, &ctx.random_vector(k)))
    } else {
        let gq = quad.as_poly().expect("explicit").polarize_quadratic();
        let iso = isotropic_subspace(&gram_on(&gq, &basis), 1, ctx)?;
        (combine(&basis, &iso.basis()[0]), combine(&basis, &iso.basis()[1]))
    };
    let p = meet_line(&cub, &u, &w, ctx)?;
    Ok((normalize(&h.apply(&p)), q))
}

/// The six coefficient forms of `f(x + u·q + v·r)` that do not vanish
/// identically when `span{q, r}` lies on `V(f)`, pulled back along `C`:
/// the cubic, two quadrics, then three linear forms.
fn coefficient_system(f: &MultiPoly, q: &[Scalar], r: &[Scalar], c: &LinearMap) -> Vec<MultiPoly> {
    let bits = f.bits().max(64);
    let half = Scalar::one(bits).div_int(2);
    let dq = f.directional_derivative(q);
    let dr = f.directional_derivative(r);
    let qr = dq.directional_derivative(r);
    let qq = dq.directional_derivative(q).scale(&half);
    let rr = dr.directional_derivative(r).scale(&half);
    [f.clone(), dq, dr, qr, qq, rr]
        .iter()
        .map(|g| g.substitute_linear(c))
        .collect()
}

fn plane_through(f: &MultiPoly, p: Vec<Scalar>, q: &[Scalar], r: &[Scalar], ctx: &Context) -> Result<LinearSubspace> {
    let s = LinearSubspace::new(vec![normalize(&p), q.to_vec(), r.to_vec()]).map_err(|_| genericity("plane collapsed"))?;
    if !s.lies_on(f, SLACK * ctx.tol()) {
        return Err(genericity("plane leaves the cubic"));
    }
    Ok(s)
}

fn line_points(l: &ProjLine) -> (Vec<Scalar>, Vec<Scalar>) {
    let (p, q) = l.points();
    (normalize(p.coords()), normalize(q.coords()))
}

/// A 2-plane on the cubic `V(f) ⊂ P^N`, `N ≥ 11`, solving equations of
/// degree at most 3.
pub fn plane_on_cubic_strict(f: &MultiPoly, ctx: &mut Context) -> Result<LinearSubspace> {
    check_cubic(f, 11)?;
    let fscale = f.max_abs_coeff();
    with_retries(ctx, |ctx| {
        let n = f.nvars();
        let (q, r) = line_points(&line_on_cubic(f, ctx)?);
        let c = LinearMap::from_columns(&random_columns(n, n - 2, ctx));
        let polys: Vec<MultiPoly> = coefficient_system(f, &q, &r, &c)
            .into_iter()
            .filter(|g| g.max_abs_coeff() > SLACK * ctx.tol() * fscale)
            .collect();
        let system = PolySystem::from_polys(n - 3, polys)?;
        let p = find_point(&system, ctx)?;
        plane_through(f, c.apply(p.coords()), &q, &r, ctx)
    })
}

/// A 2-plane on the cubic `V(f) ⊂ P^N`, `N ≥ 9`, solving equations of
/// degree at most 5.
pub fn plane_on_cubic_segre(f: &MultiPoly, ctx: &mut Context) -> Result<LinearSubspace> {
    check_cubic(f, 9)?;
    let fscale = f.max_abs_coeff();
    with_retries(ctx, |ctx| {
        let n = f.nvars();
        let lim = SLACK * ctx.tol() * fscale;
        let (q, r) = line_points(&line_on_cubic(f, ctx)?);
        let c = LinearMap::from_columns(&random_columns(n, n - 2, ctx));
        let sys = coefficient_system(f, &q, &r, &c);
        let rows: Vec<Vec<Scalar>> = sys[3..]
            .iter()
            .filter(|g| g.max_abs_coeff() > lim)
            .map(|g| normalize(&g.linear_coefficients()))
            .collect();
        let mut basis = if rows.is_empty() {
            (0..n - 2).map(|i| unit_vector(n - 2, i, ctx.bits())).collect()
        } else {
            kernel_basis(&Matrix::from_rows(rows), 1e-6)
        };
        if basis.len() < 5 {
            return Err(genericity("linear forms cut too deep"));
        }
        if basis.len() > 5 {
            let mix = random_columns(basis.len(), 5, ctx);
            basis = mix.iter().map(|m| normalize(&combine(&basis, m))).collect();
        }
        let m5 = LinearMap::from_columns(&basis);
        let cub = Equation::explicit(sys[0].substitute_linear(&m5));
        let quads: Vec<MultiPoly> = sys[1..3]
            .iter()
            .filter(|g| g.max_abs_coeff() > lim)
            .map(|g| g.substitute_linear(&m5))
            .collect();
        let (u, w) = line_on_quadrics_p4(&quads, ctx)?;
        let p5 = meet_line(&cub, &u, &w, ctx)?;
        plane_through(f, c.apply(&m5.apply(&p5)), &q, &r, ctx)
    })
}

fn line_on_quadrics_p4(quads: &[MultiPoly], ctx: &mut Context) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let l = match quads {
        [] => return Ok((normalize(&ctx.random_vector(5)), normalize(&ctx.random_vector(5)))),
        [g] => {
            let s = isotropic_subspace(&g.polarize_quadratic(), 1, ctx)?;
            return Ok((s.basis()[0].clone(), s.basis()[1].clone()));
        }
        [g1, g2] => line_on_two_quadrics_p4(&QuadricPencil::from_quadrics(g1, g2)?, ctx)?,
        _ => unreachable!("at most two quadrics"),
    };
    Ok(line_points(&l))
}
