use serde::{Deserialize, Serialize};

use super::bounds::{line_bound, point_bound, DegreeProfile};
use super::form::Equation;
use crate::error::{Error, Result};
use crate::multipoly::{LinearMap, MultiPoly};
use crate::numeric::{hdot, kernel_basis, normalize, vec_norm, Context, Matrix, Scalar};

/// Residuals are accepted up to this multiple of the working tolerance.
pub(crate) const SLACK: f64 = 1e3;

/// A point of `P^N`, stored as a nonzero coordinate vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.iter().all(Scalar::is_zero) {
            return Err(Error::DomainError("the zero vector is not a projective point".into()));
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_f64(coords: &[f64], bits: usize) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Scalar::from_f64(c, bits)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn ambient(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn normalized(&self) -> Self {
        ProjPoint {
            coords: normalize(&self.coords),
        }
    }

    /// Sine of the angle between the two lines through the origin.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        let a = normalize(&self.coords);
        let b = normalize(&other.coords);
        let c = hdot(&a, &b).mag().min(1.0);
        (1.0 - c * c).max(0.0).sqrt()
    }
}

/// A line of `P^N` spanned by two independent points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjLine {
    p: ProjPoint,
    q: ProjPoint,
}

impl ProjLine {
    pub fn new(p: ProjPoint, q: ProjPoint) -> Result<Self> {
        if p.ambient() != q.ambient() {
            return Err(Error::DomainError("spanning points live in different spaces".into()));
        }
        let bits = p.coords[0].bits();
        if p.distance(&q) <= (bits as f64 * -0.25).exp2() {
            return Err(Error::DomainError("spanning points are not independent".into()));
        }
        Ok(ProjLine { p, q })
    }

    pub fn points(&self) -> (&ProjPoint, &ProjPoint) {
        (&self.p, &self.q)
    }

    pub fn ambient(&self) -> usize {
        self.p.ambient()
    }

    /// `s·p + t·q`
    pub fn point(&self, s: &Scalar, t: &Scalar) -> Vec<Scalar> {
        self.p.coords.iter().zip(&self.q.coords).map(|(a, b)| &(a * s) + &(b * t)).collect()
    }

    /// Parametrization `P^1 → P^N` with columns `p`, `q`.
    pub fn as_map(&self) -> LinearMap {
        LinearMap::from_columns(&[self.p.coords.clone(), self.q.coords.clone()])
    }
}

/// Homogeneous equations on `P^N` (in `N + 1` variables).
#[derive(Clone, Debug)]
pub struct PolySystem {
    ambient: usize,
    eqs: Vec<Equation>,
}

impl PolySystem {
    pub fn new(ambient: usize, eqs: Vec<Equation>) -> Result<Self> {
        if let Some(e) = eqs.iter().find(|e| e.nvars() != ambient + 1) {
            return Err(Error::DomainError(format!(
                "equation in {} variables on P^{ambient}",
                e.nvars()
            )));
        }
        if eqs.iter().any(|e| e.degree() == 0) {
            return Err(Error::DomainError("constant equations are not allowed".into()));
        }
        Ok(PolySystem { ambient, eqs })
    }

    pub fn from_polys(ambient: usize, polys: Vec<MultiPoly>) -> Result<Self> {
        Self::new(ambient, polys.into_iter().map(Equation::explicit).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn equations(&self) -> &[Equation] {
        &self.eqs
    }

    pub fn profile(&self) -> DegreeProfile {
        profile_of(&self.eqs)
    }

    pub fn max_degree(&self) -> usize {
        self.eqs.iter().map(Equation::degree).max().unwrap_or(0)
    }

    pub fn residuals(&self, x: &[Scalar]) -> Vec<f64> {
        self.eqs.iter().map(|e| e.residual(x)).collect()
    }
}

fn profile_of(eqs: &[Equation]) -> DegreeProfile {
    let degrees: Vec<usize> = eqs.iter().map(Equation::degree).collect();
    DegreeProfile::from_degrees(&degrees)
}

/// For each `g` of degree `d`, the coefficients of `λ^0, …, λ^{d−1}` in
/// `g(P + λQ)`; the omitted top coefficient is `g(Q)`.
pub fn derived_system(system: &PolySystem, q: &ProjPoint, ctx: &Context) -> Result<PolySystem> {
    let qn = normalize(q.coords());
    let lim = SLACK * ctx.tol();
    if system.eqs.iter().any(|g| g.residual(&qn) > lim) {
        return Err(Error::QNotOnSystem);
    }
    let mut out = Vec::new();
    for g in &system.eqs {
        for j in 0..g.degree() {
            out.push(g.derived(&qn, j));
        }
    }
    PolySystem::new(system.ambient, out)
}

/// A point on every equation, solving nothing above the system's degree.
pub fn find_point(system: &PolySystem, ctx: &mut Context) -> Result<ProjPoint> {
    let profile = system.profile();
    let required = point_bound(&profile);
    if system.ambient < required {
        return Err(Error::AmbientTooSmall {
            required,
            actual: system.ambient,
        });
    }
    let eqs = settle_all(system.eqs.clone(), ctx)?;
    let x = point_rec(&eqs, system.ambient + 1, ctx)?;
    ProjPoint::new(x)
}

/// A line inside every equation, solving nothing above the system's degree.
pub fn find_line(system: &PolySystem, ctx: &mut Context) -> Result<ProjLine> {
    let profile = system.profile();
    let required = line_bound(&profile);
    if system.ambient < required {
        return Err(Error::AmbientTooSmall {
            required,
            actual: system.ambient,
        });
    }
    let eqs = settle_all(system.eqs.clone(), ctx)?;
    let (p, q) = line_rec(&eqs, system.ambient + 1, ctx)?;
    ProjLine::new(ProjPoint::new(p)?, ProjPoint::new(q)?)
}

/// Whether every equation vanishes at `d + 1` distinct points of the line.
pub fn line_certified(eqs: &[Equation], p: &[Scalar], q: &[Scalar], tol: f64) -> bool {
    let bits = p.iter().map(Scalar::bits).max().unwrap_or(64);
    eqs.iter().all(|g| {
        let d = g.degree();
        (0..=d).all(|t| {
            let w = Scalar::root_of_unity(t, d + 1, bits);
            let x: Vec<Scalar> = p.iter().zip(q).map(|(a, b)| a + &(&w * b)).collect();
            g.residual(&x) <= tol
        })
    })
}

fn settle_all(eqs: Vec<Equation>, ctx: &mut Context) -> Result<Vec<Equation>> {
    eqs.into_iter().map(|e| e.settle(ctx)).collect()
}

fn retryable(e: &Error) -> bool {
    matches!(e, Error::GenericityFailure(_) | Error::SingularInterpolation)
}

fn genericity(what: &str) -> Error {
    Error::GenericityFailure(what.to_string())
}

/// Separates the linear equations and returns an orthonormal basis of their
/// common kernel (all of `C^n` if there are none) plus the rest.
fn split_linear(eqs: &[Equation], n: usize, ctx: &Context) -> (Option<Vec<Vec<Scalar>>>, Vec<Equation>) {
    let mut rows = Vec::new();
    let mut rest = Vec::new();
    for e in eqs {
        match (e.degree(), e.as_poly()) {
            (1, Some(p)) => {
                let c = p.linear_coefficients();
                if vec_norm(&c) > 0.0 {
                    rows.push(normalize(&c));
                }
            }
            _ => rest.push(e.clone()),
        }
    }
    if rows.is_empty() {
        return (None, rest);
    }
    let m = Matrix::from_rows(rows);
    debug_assert_eq!(m.cols(), n);
    (Some(kernel_basis(&m, SLACK * ctx.tol())), rest)
}

fn restrict_all(eqs: &[Equation], map: &LinearMap, ctx: &mut Context) -> Result<Vec<Equation>> {
    let mut out = Vec::with_capacity(eqs.len());
    for e in eqs {
        let r = e.restrict(map).settle(ctx)?;
        if r.scale() > SLACK * ctx.tol() * e.scale() {
            out.push(r);
        }
    }
    Ok(out)
}

fn random_map(rows: usize, cols: usize, ctx: &mut Context) -> LinearMap {
    let columns: Vec<Vec<Scalar>> = (0..cols).map(|_| normalize(&ctx.random_vector(rows))).collect();
    LinearMap::from_columns(&columns)
}

fn random_point(n: usize, ctx: &mut Context) -> Vec<Scalar> {
    normalize(&ctx.random_vector(n))
}

fn kernel_combination(k: &[Vec<Scalar>], ctx: &mut Context) -> Vec<Scalar> {
    let c = ctx.random_vector(k.len());
    let map = LinearMap::from_columns(k);
    normalize(&map.apply(&c))
}

fn all_vanish(eqs: &[Equation], x: &[Scalar], tol: f64) -> bool {
    eqs.iter().all(|e| e.residual(x) <= tol)
}

/// Recursive point search on `n` variables; `eqs` are already settled.
pub(crate) fn point_rec(eqs: &[Equation], n: usize, ctx: &mut Context) -> Result<Vec<Scalar>> {
    let (kernel, rest) = split_linear(eqs, n, ctx);
    if let Some(k) = kernel {
        if k.is_empty() {
            return Err(genericity("linear equations admit only the zero solution"));
        }
        if rest.is_empty() {
            return Ok(kernel_combination(&k, ctx));
        }
        let map = LinearMap::from_columns(&k);
        let sub = restrict_all(&rest, &map, ctx)?;
        let y = point_rec(&sub, k.len(), ctx)?;
        return Ok(normalize(&map.apply(&y)));
    }
    if rest.is_empty() {
        return Ok(random_point(n, ctx));
    }
    let required = point_bound(&profile_of(&rest));
    if n - 1 < required {
        return Err(Error::AmbientTooSmall {
            required,
            actual: n - 1,
        });
    }
    let lim = SLACK * ctx.tol();
    let mut last = genericity("no point found");
    for _ in 0..ctx.cfg.max_retries {
        let attempt = (|| -> Result<Vec<Scalar>> {
            if n - 1 > required {
                let map = random_map(n, required + 1, ctx);
                let sub = restrict_all(&rest, &map, ctx)?;
                let y = point_rec(&sub, required + 1, ctx)?;
                return Ok(normalize(&map.apply(&y)));
            }
            let top = rest.iter().map(Equation::degree).max().expect("nonempty");
            let fi = rest.iter().position(|e| e.degree() == top).expect("present");
            let others: Vec<Equation> = rest
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != fi)
                .map(|(_, e)| e.clone())
                .collect();
            let (a, b) = line_rec(&others, n, ctx)?;
            let x = meet_line(&rest[fi], &a, &b, ctx)?;
            if !all_vanish(&rest, &x, lim) {
                return Err(genericity("intersection point misses the system"));
            }
            Ok(x)
        })();
        match attempt {
            Ok(x) => return Ok(x),
            Err(e) if retryable(&e) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// One point of `V(f)` on the line `a + t·b`, by one logged solve of
/// degree at most `deg f`.
pub(crate) fn meet_line(f: &Equation, a: &[Scalar], b: &[Scalar], ctx: &mut Context) -> Result<Vec<Scalar>> {
    let h = f.on_line(a, b);
    let d = f.degree();
    if h.norm_inf() <= SLACK * ctx.tol() * f.scale() {
        // the whole line lies on V(f)
        return Ok(a.to_vec());
    }
    let h = h.trim_rel(ctx.tol());
    if h.degree() == 0 {
        return Ok(b.to_vec());
    }
    let roots = ctx.solve(&h, &format!("line-section/deg{d}"))?;
    let best = roots
        .iter()
        .min_by_key(|r| r.multiplicity)
        .ok_or_else(|| genericity("section polynomial has no roots"))?;
    let x: Vec<Scalar> = a.iter().zip(b).map(|(u, v)| u + &(&best.value * v)).collect();
    Ok(normalize(&x))
}

/// Recursive line search on `n` variables; `eqs` are already settled.
pub(crate) fn line_rec(eqs: &[Equation], n: usize, ctx: &mut Context) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let (kernel, rest) = split_linear(eqs, n, ctx);
    if let Some(k) = kernel {
        if k.len() < 2 {
            return Err(genericity("linear equations leave no line"));
        }
        if rest.is_empty() {
            let p = kernel_combination(&k, ctx);
            let q = kernel_combination(&k, ctx);
            return Ok((p, q));
        }
        let map = LinearMap::from_columns(&k);
        let sub = restrict_all(&rest, &map, ctx)?;
        let (p, q) = line_rec(&sub, k.len(), ctx)?;
        return Ok((normalize(&map.apply(&p)), normalize(&map.apply(&q))));
    }
    if rest.is_empty() {
        if n < 2 {
            return Err(genericity("P^0 holds no line"));
        }
        return Ok((random_point(n, ctx), random_point(n, ctx)));
    }
    let required = line_bound(&profile_of(&rest));
    if n - 1 < required {
        return Err(Error::AmbientTooSmall {
            required,
            actual: n - 1,
        });
    }
    let lim = SLACK * ctx.tol();
    let mut last = genericity("no line found");
    for _ in 0..ctx.cfg.max_retries {
        let attempt = (|| -> Result<(Vec<Scalar>, Vec<Scalar>)> {
            if n - 1 > required {
                let map = random_map(n, required + 1, ctx);
                let sub = restrict_all(&rest, &map, ctx)?;
                let (p, q) = line_rec(&sub, required + 1, ctx)?;
                return Ok((normalize(&map.apply(&p)), normalize(&map.apply(&q))));
            }
            let q = point_rec(&rest, n, ctx)?;
            // complement: the coordinate hyperplane missing Q most clearly
            let c = (0..n)
                .max_by(|&i, &j| q[i].mag().total_cmp(&q[j].mag()))
                .expect("n ≥ 1");
            let bits = ctx.bits();
            let cols: Vec<Vec<Scalar>> = (0..n)
                .filter(|&i| i != c)
                .map(|i| {
                    let mut e = vec![Scalar::zero(bits); n];
                    e[i] = Scalar::one(bits);
                    e
                })
                .collect();
            let h = LinearMap::from_columns(&cols);
            let mut derived = Vec::new();
            for g in &rest {
                for j in 0..g.degree() {
                    let e = g.derived(&q, j).restrict(&h).settle(ctx)?;
                    if e.scale() > lim * g.scale() {
                        derived.push(e);
                    }
                }
            }
            let p = point_rec(&derived, n - 1, ctx)?;
            let p = normalize(&h.apply(&p));
            if !line_certified(&rest, &p, &q, lim) {
                return Err(genericity("line leaves the system"));
            }
            Ok((p, q))
        })();
        match attempt {
            Ok(l) => return Ok(l),
            Err(e) if retryable(&e) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}
