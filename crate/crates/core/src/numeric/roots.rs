//! Simultaneous root finding at full working precision.

use astro_float::BigFloat;
use serde::{Deserialize, Serialize};

use super::config::PrecisionConfig;
use super::log::SolveLog;
use super::matrix::{hessenberg_eigenvalues, Matrix};
use super::scalar::{real_log2_abs, Scalar, RM};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// A root together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Scalar,
    pub multiplicity: usize,
}

/// Solves `f = 0`, recording the solve (label, degree) in `log`.
///
/// Multiplicities come from clustering approximations closer than
/// `tol^(1/m)` relative to their size. On failure the precision is doubled
/// internally, up to `cfg.max_retries` attempts.
pub fn roots_univariate(
    f: &UniPoly,
    cfg: &PrecisionConfig,
    log: &mut SolveLog,
    label: &str,
) -> Result<Vec<Root>> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::DomainError("root finding needs degree at least 1".into()));
    }
    log.record(label, f.degree());
    let mut bits = cfg.bits;
    let mut last = Error::NonConvergence {
        degree: f.degree(),
        bits,
    };
    for _ in 0..cfg.max_retries {
        match find_roots(f, bits, cfg.tol_rel) {
            Ok(rs) => {
                return Ok(rs
                    .into_iter()
                    .map(|r| Root {
                        value: r.value.with_bits(cfg.bits),
                        multiplicity: r.multiplicity,
                    })
                    .collect())
            }
            Err(e) if e.wants_more_precision() => {
                last = e;
                bits *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Expands multiplicities into a flat list of values.
pub fn flatten(roots: &[Root]) -> Vec<Scalar> {
    roots
        .iter()
        .flat_map(|r| std::iter::repeat(r.value.clone()).take(r.multiplicity))
        .collect()
}

fn find_roots(f: &UniPoly, bits: usize, tol: f64) -> Result<Vec<Root>> {
    let f = f.with_bits(bits);
    let zeros = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    let g = UniPoly::new(f.coeffs()[zeros..].to_vec()).monic();
    let d = g.degree();
    let mut out = Vec::new();
    if zeros > 0 {
        out.push(Root {
            value: Scalar::zero(bits),
            multiplicity: zeros,
        });
    }
    if d == 0 {
        return Ok(out);
    }
    let approx = if d == 1 {
        vec![-&g.coeffs()[0]]
    } else {
        match aberth(&g, initial_guesses(&g), bits) {
            Some(z) => z,
            None => {
                let start = companion_eigenvalues(&g)?;
                aberth(&g, start, bits).ok_or(Error::NonConvergence { degree: d, bits })?
            }
        }
    };
    for mut r in cluster(approx, tol, bits) {
        if r.multiplicity > 1 {
            r.value = polish_multiple(&g, &r.value, r.multiplicity, tol);
        }
        out.push(r);
    }
    let fnorm = f.norm_inf();
    let deg = f.degree() as i32;
    for r in &out {
        let bound = tol * fnorm * r.value.mag().max(1.0).powi(deg);
        let res = f.eval(&r.value).mag();
        if !(res <= bound) {
            return Err(Error::NonConvergence { degree: f.degree(), bits });
        }
    }
    Ok(out)
}

/// Starting points on circles read off the Newton polygon of `g`.
fn initial_guesses(g: &UniPoly) -> Vec<Scalar> {
    let bits = g.bits();
    let d = g.degree();
    let pts: Vec<(usize, f64)> = g
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.log2_mag()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (k1, l1) = hull[hull.len() - 2];
            let (k2, l2) = hull[hull.len() - 1];
            let cross = (k2 as f64 - k1 as f64) * (p.1 - l1) - (l2 - l1) * (p.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut z = Vec::with_capacity(d);
    for (e, w) in hull.windows(2).enumerate() {
        let (k1, l1) = w[0];
        let (k2, l2) = w[1];
        let m = k2 - k1;
        let lr = ((l1 - l2) / m as f64).clamp(-900.0, 900.0);
        let r = lr.exp2();
        for j in 0..m {
            let theta = std::f64::consts::TAU * (j as f64 / m as f64 + e as f64 / d as f64) + 0.4;
            z.push(Scalar::new(r * theta.cos(), r * theta.sin(), bits));
        }
    }
    z
}

/// Aberth–Ehrlich iteration; `None` if some approximation fails to reach
/// rounding-level residual.
fn aberth(g: &UniPoly, mut z: Vec<Scalar>, bits: usize) -> Option<Vec<Scalar>> {
    let d = g.degree();
    let abs_coeffs: Vec<BigFloat> = g.coeffs().iter().map(|c| low(c.abs())).collect();
    let slack = (4.0 * d as f64).log2() + 2.0;
    let mut done = vec![false; d];
    let max_iter = 100 + 2 * bits;
    for it in 0..max_iter {
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (v, dv) = g.eval_with_derivative(&z[i]);
            if v.is_zero() || v.log2_mag() <= abs_horner_log2(&abs_coeffs, &z[i]) + slack - bits as f64 {
                done[i] = true;
                continue;
            }
            if dv.is_zero() {
                z[i] = &z[i] + &Scalar::new(1e-8 * (it as f64 + 1.0), 1e-8, bits);
                continue;
            }
            let newton = &v / &dv;
            let mut s = Scalar::zero(bits);
            for j in 0..d {
                if j != i {
                    let diff = &z[i] - &z[j];
                    if !diff.is_zero() {
                        s += &diff.recip();
                    }
                }
            }
            let denom = &Scalar::one(bits) - &(&newton * &s);
            let w = if denom.is_zero() { newton } else { &newton / &denom };
            z[i] = &z[i] - &w;
            if !z[i].is_finite() {
                return None;
            }
        }
        if done.iter().all(|&x| x) {
            return Some(z);
        }
    }
    None
}

fn low(mut x: BigFloat) -> BigFloat {
    let _ = x.set_precision(64, RM);
    x
}

/// `log2 Σ |c_k| |z|^k`
fn abs_horner_log2(abs_coeffs: &[BigFloat], z: &Scalar) -> f64 {
    let r = low(z.abs());
    let mut acc = BigFloat::from_word(0, 64);
    for c in abs_coeffs.iter().rev() {
        acc = acc.mul(&r, 64, RM).add(c, 64, RM);
    }
    real_log2_abs(&acc)
}

fn companion_eigenvalues(g: &UniPoly) -> Result<Vec<Scalar>> {
    let d = g.degree();
    let bits = g.bits();
    let mut c = Matrix::zeros(d, d, bits);
    for i in 1..d {
        c[(i, i - 1)] = Scalar::one(bits);
    }
    for i in 0..d {
        c[(i, d - 1)] = -&g.coeffs()[i];
    }
    hessenberg_eigenvalues(&c)
}

/// Newton on `g^(m−1)`, which has a simple root at an `m`-fold root of `g`.
fn polish_multiple(g: &UniPoly, z0: &Scalar, m: usize, tol: f64) -> Scalar {
    let mut h = g.clone();
    for _ in 1..m {
        h = h.derivative();
    }
    let radius = tol.powf(1.0 / m as f64) * z0.mag().max(1.0);
    let mut z = z0.clone();
    for _ in 0..12 {
        let (v, dv) = h.eval_with_derivative(&z);
        if dv.is_zero() {
            break;
        }
        let step = &v / &dv;
        z = &z - &step;
        if (&z - z0).mag() > radius {
            return z0.clone();
        }
        if step.mag() <= (-(z.bits() as f64)).exp2() * z.mag().max(1e-300) {
            break;
        }
    }
    z
}

/// Agglomerative clustering: two groups merge when their means are closer
/// than `tol^(1/m)` times their size, `m` the merged multiplicity.
fn cluster(z: Vec<Scalar>, tol: f64, bits: usize) -> Vec<Root> {
    let rmax = z.iter().map(Scalar::mag).fold(0.0, f64::max);
    let floor = rmax * (-(bits as f64) / 2.0).exp2();
    let mut groups: Vec<(Vec<Scalar>, Scalar)> = z.into_iter().map(|v| (vec![v.clone()], v)).collect();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let m = groups[a].0.len() + groups[b].0.len();
                let scale = groups[a].1.mag().max(groups[b].1.mag()).max(floor);
                let thr = tol.powf(1.0 / m as f64) * scale;
                let dist = (&groups[a].1 - &groups[b].1).mag();
                let ratio = if thr > 0.0 { dist / thr } else { f64::INFINITY };
                if ratio < 1.0 && best.map_or(true, |(_, _, r)| ratio < r) {
                    best = Some((a, b, ratio));
                }
            }
        }
        let Some((a, b, _)) = best else { break };
        let (members, _) = groups.remove(b);
        groups[a].0.extend(members);
        let mut sum = Scalar::zero(bits);
        for v in &groups[a].0 {
            sum += v;
        }
        groups[a].1 = sum.div_int(groups[a].0.len() as i64);
    }
    groups
        .into_iter()
        .map(|(m, v)| Root {
            value: v,
            multiplicity: m.len(),
        })
        .collect()
}
