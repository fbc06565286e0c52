use super::{
    bilinear, combine, genericity, gram_on, line_ok, make_line, retryable, unit_vector, LinearSubspace, QuadricPencil,
};
use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::numeric::{kernel_basis, normalize, Context, Matrix, Scalar, UniPoly};
use crate::obliteration::{ProjLine, SLACK};

/// An isotropic vector of `G` inside `span(basis)`, the basis orthonormal.
///
/// Radical vectors are taken directly; otherwise `G` is restricted to a
/// random line of the span and one quadratic is solved. The flag reports
/// whether the vector came from the radical.
fn isotropic_vector(
    g: &Matrix,
    basis: &[Vec<Scalar>],
    gnorm: f64,
    ctx: &mut Context,
    label: &str,
) -> Result<(Vec<Scalar>, bool)> {
    let k = basis.len();
    let bw = gram_on(g, basis);
    let lim = SLACK * ctx.tol() * gnorm;
    let wn = bw.norm_max();
    if wn <= lim {
        let c = ctx.random_vector(k);
        return Ok((normalize(&combine(basis, &c)), true));
    }
    let rad = kernel_basis(&bw, lim / wn);
    if !rad.is_empty() {
        let c = combine(&rad, &ctx.random_vector(rad.len()));
        return Ok((normalize(&combine(basis, &c)), true));
    }
    if k < 2 {
        return Err(Error::RankCollapse("no isotropic vector in a nondegenerate line".into()));
    }
    for _ in 0..ctx.cfg.max_retries {
        let a = ctx.random_vector(k);
        let b = ctx.random_vector(k);
        let qb = bilinear(&bw, &b, &b);
        if qb.mag() <= lim {
            continue;
        }
        let poly = UniPoly::new(vec![bilinear(&bw, &a, &a), bilinear(&bw, &a, &b).mul_int(2), qb]);
        let roots = ctx.solve(&poly, label)?;
        let t = &roots[0].value;
        let c: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x + &(t * y)).collect();
        return Ok((normalize(&combine(basis, &c)), false));
    }
    Err(Error::RankCollapse("random lines keep missing the quadric".into()))
}

/// `w ∈ span(basis)` with `B(v, w) = 1/2` and `B(w, w) = 0`, for isotropic
/// `v`; no solve needed.
fn partner(g: &Matrix, v: &[Scalar], basis: &[Vec<Scalar>], gnorm: f64, ctx: &mut Context) -> Result<Vec<Scalar>> {
    let lim = SLACK * ctx.tol() * gnorm;
    for _ in 0..ctx.cfg.max_retries {
        let y = normalize(&combine(basis, &ctx.random_vector(basis.len())));
        let s = bilinear(g, v, &y);
        if s.mag() <= lim.sqrt() {
            continue;
        }
        let c = &bilinear(g, &y, &y) / &s.mul_int(2);
        let inv = s.mul_int(2).recip();
        return Ok(y.iter().zip(v).map(|(yi, vi)| &(yi - &(&c * vi)) * &inv).collect());
    }
    Err(Error::RankCollapse("isotropic vector lies in the radical".into()))
}

/// Orthonormal basis of the part of `span(basis)` that is `G`-orthogonal to
/// every vector in `against`.
fn g_orthogonal(g: &Matrix, basis: &[Vec<Scalar>], against: &[&[Scalar]]) -> Vec<Vec<Scalar>> {
    let rows: Vec<Vec<Scalar>> = against
        .iter()
        .map(|a| {
            let ga = g.mul_vec(a);
            normalize(&basis.iter().map(|b| super::dot(b, &ga)).collect::<Vec<_>>())
        })
        .collect();
    let k = kernel_basis(&Matrix::from_rows(rows), 1e-6);
    k.iter().map(|c| normalize(&combine(basis, c))).collect()
}

/// Orthonormal basis of the Hermitian complement of `v` in `span(basis)`.
fn hermitian_complement(basis: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Vec<Scalar>> {
    let row: Vec<Scalar> = basis.iter().map(|b| crate::numeric::hdot(v, b)).collect();
    let k = kernel_basis(&Matrix::from_rows(vec![row]), 1e-6);
    k.iter().map(|c| normalize(&combine(basis, c))).collect()
}

/// A projective `r`-plane on which the quadratic form `G` vanishes.
///
/// Needs `m ≥ 2(r + 1)` variables.
pub fn isotropic_subspace(g: &Matrix, r: usize, ctx: &mut Context) -> Result<LinearSubspace> {
    let m = g.rows();
    if g.cols() != m {
        return Err(Error::DomainError("Gram matrix must be square".into()));
    }
    if m < 2 * (r + 1) {
        return Err(Error::AmbientTooSmall {
            required: 2 * r + 1,
            actual: m.saturating_sub(1),
        });
    }
    let bits = ctx.bits();
    let gnorm = g.norm_max();
    if gnorm == 0.0 {
        return LinearSubspace::new((0..=r).map(|i| unit_vector(m, i, bits)).collect());
    }
    let lim = SLACK * ctx.tol() * gnorm;
    let mut last = Error::RankCollapse("no isotropic subspace found".into());
    for _ in 0..ctx.cfg.max_retries {
        let attempt = (|| -> Result<Vec<Vec<Scalar>>> {
            let mut w: Vec<Vec<Scalar>> = (0..m).map(|i| unit_vector(m, i, bits)).collect();
            let mut found = Vec::with_capacity(r + 1);
            for step in 0..=r {
                let (v, radical) = isotropic_vector(g, &w, gnorm, ctx, "isotropic")?;
                if step < r {
                    w = if radical {
                        hermitian_complement(&w, &v)
                    } else {
                        let u = partner(g, &v, &w, gnorm, ctx)?;
                        g_orthogonal(g, &w, &[&v, &u])
                    };
                }
                found.push(v);
            }
            Ok(found)
        })();
        match attempt {
            Ok(basis) => {
                if gram_on(g, &basis).norm_max() <= lim {
                    return LinearSubspace::new(basis);
                }
                last = Error::RankCollapse("isotropic basis lost accuracy".into());
            }
            Err(e) if retryable(&e) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// A line on a quadric surface in `P^3`, solving only quadratics.
pub fn line_on_quadric_surface(q: &MultiPoly, ctx: &mut Context) -> Result<ProjLine> {
    if q.nvars() != 4 || q.degree() != 2 {
        return Err(Error::DomainError("expected a quadric in four variables".into()));
    }
    let g = q.polarize_quadratic();
    if g.norm_max() == 0.0 || kernel_basis(&g, SLACK * ctx.tol()).len() > 1 {
        return Err(Error::RankCollapse("quadric surface has rank below 3".into()));
    }
    let s = isotropic_subspace(&g, 1, ctx)?;
    let b = s.basis();
    make_line(b[0].clone(), b[1].clone())
}

/// A line on `V(Q1) ∩ V(Q2) ⊂ P^4`, solving equations of degree at most 5.
///
/// A singular member `K` of the pencil is a cone over a smooth quadric
/// surface; its planes through the vertex come in a one-parameter family,
/// and `Q2` cuts each in a conic. Where that conic degenerates it splits
/// into two lines, both on `K ∩ Q2 = Q1 ∩ Q2`.
pub fn line_on_two_quadrics_p4(pencil: &QuadricPencil, ctx: &mut Context) -> Result<ProjLine> {
    let amb = pencil.ambient();
    if amb < 4 {
        return Err(Error::AmbientTooSmall { required: 4, actual: amb });
    }
    if amb > 4 {
        return Err(Error::DomainError("cut the pencil down to P^4 first".into()));
    }
    let q1 = MultiPoly::from_gram(pencil.g1());
    let q2 = MultiPoly::from_gram(pencil.g2());
    let (n1, n2) = (pencil.g1().norm_max(), pencil.g2().norm_max());
    let bits = ctx.bits();
    if n1 == 0.0 || n2 == 0.0 {
        let g = if n1 == 0.0 { pencil.g2() } else { pencil.g1() };
        let s = isotropic_subspace(g, 1, ctx)?;
        return make_line(s.basis()[0].clone(), s.basis()[1].clone());
    }
    let g1 = pencil.g1().scale(&Scalar::from_f64(1.0 / n1, bits));
    let g2 = pencil.g2().scale(&Scalar::from_f64(1.0 / n2, bits));
    let mut last = genericity("degenerate pencil");
    for _ in 0..ctx.cfg.max_retries {
        let members = match singular_members(&g1, &g2, ctx) {
            Ok(m) => m,
            Err(e) if retryable(&e) => {
                last = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        for k in members {
            match line_in_cone(&k, &g2, ctx) {
                Ok((p, q)) => {
                    if line_ok(&[&q1, &q2], &p, &q, ctx) {
                        return make_line(p, q);
                    }
                    last = genericity("pencil line misses the quadrics");
                }
                Err(e) if retryable(&e) => last = e,
                Err(e) => return Err(e),
            }
        }
    }
    Err(last)
}

/// Coefficients of the polynomial of degree `< n` sampled at the `n`-th
/// roots of unity.
fn from_unity_samples(samples: &[Scalar], bits: usize) -> UniPoly {
    let n = samples.len();
    let w: Vec<Scalar> = (0..n).map(|k| Scalar::root_of_unity(k, n, bits)).collect();
    let coeffs = (0..n)
        .map(|j| {
            let mut acc = Scalar::zero(bits);
            for (t, s) in samples.iter().enumerate() {
                acc += &(s * &w[(n - (t * j) % n) % n]);
            }
            acc.div_int(n as i64)
        })
        .collect();
    UniPoly::new(coeffs)
}

/// Singular members of `G1 + t·G2`, simplest roots first. One solve of
/// degree at most 5.
fn singular_members(g1: &Matrix, g2: &Matrix, ctx: &mut Context) -> Result<Vec<Matrix>> {
    let bits = ctx.bits();
    let n = g1.rows();
    let samples: Vec<Scalar> = (0..=n)
        .map(|k| g1.add(&g2.scale(&Scalar::root_of_unity(k, n + 1, bits))).det())
        .collect();
    let disc = from_unity_samples(&samples, bits);
    if disc.norm_inf() <= SLACK * ctx.tol() {
        let t = ctx.random_scalar();
        return Ok(vec![g1.add(&g2.scale(&t))]);
    }
    let disc = disc.trim_rel(ctx.tol());
    let mut out = Vec::new();
    if disc.degree() > 0 {
        let mut roots = ctx.solve(&disc, "pencil-discriminant")?;
        roots.sort_by_key(|r| r.multiplicity);
        out.extend(roots.iter().map(|r| g1.add(&g2.scale(&r.value))));
    }
    if disc.degree() < n {
        out.push(g2.clone());
    }
    Ok(out)
}

/// A line on `V(K) ∩ V(G2)` for a corank-one member `K`.
fn line_in_cone(k: &Matrix, g2: &Matrix, ctx: &mut Context) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let bits = ctx.bits();
    let lim = SLACK * ctx.tol();
    let kn = k.norm_max();
    if kn <= lim {
        return Err(Error::RankCollapse("pencil member vanishes".into()));
    }
    let ker = kernel_basis(k, lim);
    if ker.len() != 1 {
        return Err(Error::RankCollapse(format!("pencil member has corank {}", ker.len())));
    }
    let v = ker[0].clone();
    let n = k.rows();
    let full: Vec<Vec<Scalar>> = (0..n).map(|i| unit_vector(n, i, bits)).collect();
    let w = hermitian_complement(&full, &v);
    let s = gram_on(k, &w);
    let sn = s.norm_max();
    let e4: Vec<Vec<Scalar>> = (0..4).map(|i| unit_vector(4, i, bits)).collect();
    let (a1, rad) = isotropic_vector(&s, &e4, sn, ctx, "cone-ruling")?;
    if rad {
        return Err(Error::RankCollapse("cone over a singular quadric".into()));
    }
    let b1 = partner(&s, &a1, &e4, sn, ctx)?;
    let rest = g_orthogonal(&s, &e4, &[&a1, &b1]);
    let (a2, rad) = isotropic_vector(&s, &rest, sn, ctx, "cone-ruling")?;
    if rad {
        return Err(Error::RankCollapse("cone over a singular quadric".into()));
    }
    let b2 = partner(&s, &a2, &rest, sn, ctx)?;
    let [a1, b1, a2, b2] = [a1, b1, a2, b2].map(|c| combine(&w, &c));
    // ruling planes span{v, t·a1 + a2, b1 − t·b2}
    let plane = |t: &Scalar| -> Vec<Vec<Scalar>> {
        let u: Vec<Scalar> = a1.iter().zip(&a2).map(|(x, y)| &(t * x) + y).collect();
        let z: Vec<Scalar> = b1.iter().zip(&b2).map(|(x, y)| x - &(t * y)).collect();
        vec![v.clone(), u, z]
    };
    let samples: Vec<Scalar> = (0..5)
        .map(|j| gram_on(g2, &plane(&Scalar::root_of_unity(j, 5, bits))).det())
        .collect();
    let dpoly = from_unity_samples(&samples, bits);
    let mut planes = Vec::new();
    if dpoly.norm_inf() <= lim {
        planes.push(plane(&ctx.random_scalar()));
    } else {
        let dpoly = dpoly.trim_rel(ctx.tol());
        if dpoly.degree() > 0 {
            let mut roots = ctx.solve(&dpoly, "ruling-conic")?;
            roots.sort_by_key(|r| r.multiplicity);
            planes.extend(roots.iter().map(|r| plane(&r.value)));
        }
        if dpoly.degree() < 4 {
            let minus_b2: Vec<Scalar> = b2.iter().map(|x| -x).collect();
            planes.push(vec![v.clone(), a1.clone(), minus_b2]);
        }
    }
    let mut last = genericity("no ruling plane meets Q2 in a line pair");
    for p in planes {
        let p: Vec<Vec<Scalar>> = p.iter().map(|x| normalize(x)).collect();
        match split_conic(&gram_on(g2, &p), ctx) {
            Ok((x, y)) => return Ok((combine(&p, &x), combine(&p, &y))),
            Err(e) if retryable(&e) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// One line of a singular plane conic, in the plane's coordinates.
fn split_conic(c: &Matrix, ctx: &mut Context) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let bits = ctx.bits();
    let lim = SLACK * ctx.tol();
    let cn = c.norm_max();
    let e: Vec<Vec<Scalar>> = (0..3).map(|i| unit_vector(3, i, bits)).collect();
    if cn <= lim {
        return Ok((e[0].clone(), e[1].clone()));
    }
    let ker = kernel_basis(c, lim / cn);
    match ker.len() {
        0 => Err(genericity("conic is smooth")),
        1 => {
            let s = ker[0].clone();
            let y = hermitian_complement(&e, &s);
            let c2 = bilinear(c, &y[1], &y[1]);
            if c2.mag() <= lim * cn {
                return Ok((s, y[1].clone()));
            }
            let poly = UniPoly::new(vec![bilinear(c, &y[0], &y[0]), bilinear(c, &y[0], &y[1]).mul_int(2), c2]);
            let roots = ctx.solve(&poly, "conic-split")?;
            let u = &roots[0].value;
            let z: Vec<Scalar> = y[0].iter().zip(&y[1]).map(|(a, b)| a + &(u * b)).collect();
            Ok((s, z))
        }
        _ => Ok((ker[0].clone(), ker[1].clone())),
    }
}
