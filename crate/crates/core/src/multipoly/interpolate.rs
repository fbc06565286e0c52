use std::collections::HashMap;

use super::poly::MultiPoly;
use crate::error::{Error, Result};
use crate::numeric::{Context, Scalar, UniPoly};

/// Recovers a homogeneous form of degree `d` in `r` variables from a black
/// box.
///
/// Samples lie on the chart `s_0 = 1` at a lower-set grid whose nodes in
/// each coordinate are the `(d+1)`-th roots of unity rotated by a random
/// unit; coefficients come from dimension-by-dimension divided differences.
/// The result is checked at five further random points of modulus one.
pub fn interpolate_homogeneous<F>(eval: F, d: usize, r: usize, ctx: &mut Context) -> Result<MultiPoly>
where
    F: Fn(&[Scalar]) -> Scalar,
{
    assert!(r >= 1, "need at least one variable");
    let bits = ctx.bits();
    if r == 1 || d == 0 {
        let x = vec![Scalar::one(bits); r];
        let c = eval(&x);
        let key = vec![0u32; r];
        let mut e = key;
        e[0] = d as u32;
        let p = MultiPoly::from_terms(r, d, [(e, c)]);
        return Ok(p);
    }
    let unity: Vec<Scalar> = (0..=d).map(|k| Scalar::root_of_unity(k, d + 1, bits)).collect();
    for _ in 0..ctx.cfg.max_retries {
        let nodes: Vec<Vec<Scalar>> = (1..r)
            .map(|_| {
                let u = ctx.random_unit();
                unity.iter().map(|w| w * &u).collect()
            })
            .collect();
        let poly = match lattice_interpolate(&eval, d, r, &nodes, bits) {
            Some(p) => p,
            None => continue,
        };
        let scale = poly.norm1();
        let mut ok = true;
        for _ in 0..5 {
            let x: Vec<Scalar> = (0..r).map(|_| ctx.random_unit()).collect();
            let want = eval(&x);
            let got = poly.evaluate(&x);
            if (&want - &got).mag() > ctx.tol() * scale.max(want.mag()) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(poly.chop(ctx.tol()));
        }
    }
    Err(Error::SingularInterpolation)
}

fn lattice_interpolate<F>(eval: &F, d: usize, r: usize, nodes: &[Vec<Scalar>], bits: usize) -> Option<MultiPoly>
where
    F: Fn(&[Scalar]) -> Scalar,
{
    let m = r - 1;
    let mut lattice: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for a in &lattice {
            let used: usize = a.iter().map(|&x| x as usize).sum();
            for k in 0..=(d - used) {
                let mut b = a.clone();
                b.push(k as u8);
                next.push(b);
            }
        }
        lattice = next;
    }
    let index: HashMap<Vec<u8>, usize> = lattice.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let one = Scalar::one(bits);
    let mut vals: Vec<Scalar> = lattice
        .iter()
        .map(|a| {
            let mut x = Vec::with_capacity(r);
            x.push(one.clone());
            for (j, &k) in a.iter().enumerate() {
                x.push(nodes[j][k as usize].clone());
            }
            eval(&x)
        })
        .collect();
    let fibers = |j: usize| -> Vec<Vec<usize>> {
        lattice
            .iter()
            .filter(|a| a[j] == 0)
            .map(|a| {
                let used: usize = a.iter().map(|&x| x as usize).sum();
                (0..=(d - used))
                    .map(|k| {
                        let mut b = a.clone();
                        b[j] = k as u8;
                        index[&b]
                    })
                    .collect()
            })
            .collect()
    };
    for j in 0..m {
        let t = &nodes[j];
        for fiber in fibers(j) {
            let len = fiber.len();
            for lvl in 1..len {
                for i in (lvl..len).rev() {
                    let den = &t[i] - &t[i - lvl];
                    if den.is_zero() {
                        return None;
                    }
                    vals[fiber[i]] = &(&vals[fiber[i]] - &vals[fiber[i - 1]]) / &den;
                }
            }
        }
    }
    for j in 0..m {
        let t = &nodes[j];
        for fiber in fibers(j) {
            let len = fiber.len();
            let mut q = UniPoly::constant(vals[fiber[len - 1]].clone());
            for k in (0..len - 1).rev() {
                q = q.mul(&UniPoly::linear_root(&t[k])).add(&UniPoly::constant(vals[fiber[k]].clone()));
            }
            for (k, &idx) in fiber.iter().enumerate() {
                vals[idx] = q.coeff(k).cloned().unwrap_or_else(|| Scalar::zero(bits));
            }
        }
    }
    Some(MultiPoly::from_terms(
        r,
        d,
        lattice.iter().zip(vals).map(|(a, c)| {
            let used: u32 = a.iter().map(|&x| x as u32).sum();
            let mut e = Vec::with_capacity(r);
            e.push(d as u32 - used);
            e.extend(a.iter().map(|&x| x as u32));
            (e, c)
        }),
    ))
}
