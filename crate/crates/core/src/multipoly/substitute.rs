use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::poly::MultiPoly;
use crate::numeric::{Matrix, Scalar};

/// Linear parametrization `s ↦ M s` of a subspace; `M` is
/// `nvars_out × nvars_in`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    pub matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Self {
        LinearMap { matrix }
    }

    pub fn identity(n: usize, bits: usize) -> Self {
        LinearMap::new(Matrix::identity(n, bits))
    }

    /// Map whose columns are the given ambient vectors.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Self {
        LinearMap::new(Matrix::from_columns(cols))
    }

    pub fn nvars_out(&self) -> usize {
        self.matrix.rows()
    }

    pub fn nvars_in(&self) -> usize {
        self.matrix.cols()
    }

    pub fn apply(&self, s: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(s)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &LinearMap) -> LinearMap {
        LinearMap::new(self.matrix.mul(&inner.matrix))
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.matrix.column(j)
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        self.matrix.columns()
    }
}

/// Dense indexing of monomials of each degree up to `maxdeg` in `nvars`
/// variables, with a table for multiplication by a single variable.
pub(crate) struct MonomialTable {
    nvars: usize,
    pub monos: Vec<Vec<Vec<u16>>>,
    mul: Vec<Vec<u32>>,
}

impl MonomialTable {
    pub fn new(nvars: usize, maxdeg: usize) -> Self {
        let mut monos: Vec<Vec<Vec<u16>>> = vec![vec![Vec::new()]];
        for e in 1..=maxdeg {
            let mut next = Vec::new();
            for m in &monos[e - 1] {
                let lo = m.last().copied().unwrap_or(0);
                for v in lo..nvars as u16 {
                    let mut k = m.clone();
                    k.push(v);
                    next.push(k);
                }
            }
            monos.push(next);
        }
        let mut mul = Vec::with_capacity(maxdeg);
        for e in 0..maxdeg {
            let index: HashMap<&[u16], u32> = monos[e + 1]
                .iter()
                .enumerate()
                .map(|(i, k)| (k.as_slice(), i as u32))
                .collect();
            let mut tab = Vec::with_capacity(monos[e].len() * nvars);
            let mut buf = Vec::with_capacity(e + 1);
            for m in &monos[e] {
                for v in 0..nvars as u16 {
                    buf.clear();
                    buf.extend_from_slice(m);
                    let pos = buf.partition_point(|&x| x <= v);
                    buf.insert(pos, v);
                    tab.push(index[buf.as_slice()]);
                }
            }
            mul.push(tab);
        }
        MonomialTable { nvars, monos, mul }
    }

    pub fn count(&self, e: usize) -> usize {
        self.monos[e].len()
    }

    /// `dense_e · (Σ lin_v s_v)` as a dense form of degree `e + 1`.
    pub fn mul_linear(&self, e: usize, dense: &[Scalar], lin: &[Scalar], out: &mut [Scalar]) {
        let tab = &self.mul[e];
        for (i, c) in dense.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &tab[i * self.nvars..(i + 1) * self.nvars];
            for (v, l) in lin.iter().enumerate() {
                if !l.is_zero() {
                    out[row[v] as usize] += &(c * l);
                }
            }
        }
    }

    pub fn to_poly(&self, e: usize, dense: Vec<Scalar>) -> MultiPoly {
        MultiPoly::from_keys(
            self.nvars,
            e,
            self.monos[e].iter().cloned().zip(dense).filter(|(_, c)| !c.is_zero()),
        )
    }
}

impl MultiPoly {
    /// `g(s) = f(L s)`.
    pub fn substitute_linear(&self, l: &LinearMap) -> MultiPoly {
        assert_eq!(l.nvars_out(), self.nvars(), "map codomain must match nvars");
        let r = l.nvars_in();
        let d = self.degree();
        let bits = self.bits().max(l.matrix.bits());
        if d == 0 {
            return MultiPoly::from_keys(r, 0, self.keys().map(|(k, c)| (k.clone(), c.clone())));
        }
        let table = MonomialTable::new(r, d);
        let rows: Vec<&[Scalar]> = (0..l.nvars_out()).map(|i| l.matrix.row(i)).collect();
        let terms: Vec<(&Vec<u16>, &Scalar)> = self.keys().collect();
        let dense = subst_rec(&terms, 0, d, &rows, &table, bits);
        table.to_poly(d, dense)
    }
}

/// Horner-style recursion on the sorted term list: terms sharing the
/// variable at position `depth` are substituted together, then multiplied by
/// that variable's image.
fn subst_rec(
    terms: &[(&Vec<u16>, &Scalar)],
    depth: usize,
    d: usize,
    rows: &[&[Scalar]],
    table: &MonomialTable,
    bits: usize,
) -> Vec<Scalar> {
    let e = d - depth;
    let mut out = vec![Scalar::zero(bits); table.count(e)];
    if e == 1 {
        for (k, c) in terms {
            for (v, l) in rows[k[depth] as usize].iter().enumerate() {
                if !l.is_zero() {
                    out[v] += &(*c * l);
                }
            }
        }
        return out;
    }
    let mut i = 0;
    while i < terms.len() {
        let a = terms[i].0[depth];
        let mut j = i;
        while j < terms.len() && terms[j].0[depth] == a {
            j += 1;
        }
        let inner = subst_rec(&terms[i..j], depth + 1, d, rows, table, bits);
        table.mul_linear(e - 1, &inner, rows[a as usize], &mut out);
        i = j;
    }
    out
}
