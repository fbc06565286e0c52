use std::sync::Arc;

use super::engine::QuotientRing;
use super::poly::MonicPoly;
use crate::error::Result;
use crate::multipoly::{interpolate_homogeneous, LinearMap, MultiPoly};
use crate::numeric::{Context, Scalar};

/// `b ↦ A_i(b)` for a fixed `p`: a homogeneous form of degree `i` in the
/// `n` coefficients of `T`.
#[derive(Clone, Debug)]
pub struct CoefficientFunctional {
    ring: Arc<QuotientRing>,
    i: usize,
}

/// Functional for `A_i`, `1 ≤ i ≤ n`.
pub fn coefficient_functional(p: &MonicPoly, i: usize) -> CoefficientFunctional {
    CoefficientFunctional::new(Arc::new(QuotientRing::new(p)), i)
}

impl CoefficientFunctional {
    pub fn new(ring: Arc<QuotientRing>, i: usize) -> Self {
        assert!(i >= 1 && i <= ring.n(), "index out of range");
        CoefficientFunctional { ring, i }
    }

    pub fn index(&self) -> usize {
        self.i
    }

    pub fn degree(&self) -> usize {
        self.i
    }

    pub fn nvars(&self) -> usize {
        self.ring.n()
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn evaluate(&self, b: &[Scalar]) -> Scalar {
        self.ring.leading(b, self.i).pop().expect("i ≥ 1")
    }

    /// `A_i ∘ L` materialized by interpolation.
    pub fn restrict(&self, l: &LinearMap, ctx: &mut Context) -> Result<MultiPoly> {
        interpolate_homogeneous(|s: &[Scalar]| self.evaluate(&l.apply(s)), self.i, l.nvars_in(), ctx)
    }

    /// Full symbolic expansion in `b_0..b_{n−1}`.
    ///
    /// `tr(T^m)` has coefficient `m!/α! · P_{Σ jα_j}` on `b^α`; Newton's
    /// identities then give `e_i` and `A_i = (−1)^i e_i`.
    pub fn expand(&self) -> MultiPoly {
        let n = self.ring.n();
        let bits = self.ring.bits();
        let mut ring = (*self.ring).clone();
        ring.extend_power_sums(self.i * (n - 1));
        let mut s: Vec<MultiPoly> = Vec::with_capacity(self.i);
        for m in 1..=self.i {
            s.push(trace_power_form(&ring, m));
        }
        let mut e: Vec<MultiPoly> = vec![MultiPoly::constant(n, Scalar::one(bits))];
        for k in 1..=self.i {
            let mut acc = MultiPoly::zero(n, k);
            for j in 1..=k {
                let t = e[k - j].mul(&s[j - 1]);
                acc = if j % 2 == 1 { acc.add(&t) } else { acc.sub(&t) };
            }
            e.push(acc.scale(&Scalar::one(bits).div_int(k as i64)));
        }
        let ei = e.pop().expect("nonempty");
        if self.i % 2 == 1 {
            ei.scale(&Scalar::from_f64(-1.0, bits))
        } else {
            ei
        }
    }
}

fn trace_power_form(ring: &QuotientRing, m: usize) -> MultiPoly {
    let n = ring.n();
    let mut fact = vec![1u64; m + 1];
    for k in 1..=m {
        fact[k] = fact[k - 1] * k as u64;
    }
    let mut out = MultiPoly::zero(n, m);
    let mut key: Vec<u16> = vec![0; m];
    loop {
        let weight: usize = key.iter().map(|&v| v as usize).sum();
        let mut denom = 1u64;
        let mut run = 1usize;
        for w in 1..=m {
            if w < m && key[w] == key[w - 1] {
                run += 1;
            } else {
                denom *= fact[run];
                run = 1;
            }
        }
        let c = ring.power_sum(weight).mul_int((fact[m] / denom) as i64);
        out.add_term(key.clone(), &c);
        // next nondecreasing sequence
        let mut pos = m;
        while pos > 0 && key[pos - 1] as usize == n - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        let v = key[pos - 1] + 1;
        for x in &mut key[pos - 1..] {
            *x = v;
        }
    }
    out
}
