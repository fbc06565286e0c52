use std::collections::BTreeMap;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::numeric::{Matrix, Scalar};

/// Sparse homogeneous polynomial.
///
/// A monomial is stored as the nondecreasing list of its variable indices
/// (so `x0²·x3` is `[0, 0, 3]`); every key has length `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<u16>, Scalar>,
}

pub(crate) fn key_from_exps(exps: &[u32]) -> Vec<u16> {
    let mut key = Vec::new();
    for (v, &e) in exps.iter().enumerate() {
        key.extend(std::iter::repeat(v as u16).take(e as usize));
    }
    key
}

pub(crate) fn exps_from_key(key: &[u16], nvars: usize) -> Vec<u32> {
    let mut e = vec![0u32; nvars];
    for &v in key {
        e[v as usize] += 1;
    }
    e
}

impl MultiPoly {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        MultiPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds from `(exponent vector, coefficient)` pairs; repeated
    /// exponents accumulate.
    ///
    /// # Panics
    /// If an exponent vector has the wrong length or total degree.
    pub fn from_terms<I>(nvars: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut p = Self::zero(nvars, degree);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            assert_eq!(e.iter().sum::<u32>() as usize, degree, "inhomogeneous term");
            p.add_term(key_from_exps(&e), &c);
        }
        p
    }

    /// Builds from monomial keys (sorted variable lists).
    pub(crate) fn from_keys<I>(nvars: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u16>, Scalar)>,
    {
        let mut p = Self::zero(nvars, degree);
        for (k, c) in terms {
            debug_assert_eq!(k.len(), degree);
            p.add_term(k, &c);
        }
        p
    }

    /// The linear form `Σ c_v x_v`.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        Self::from_keys(
            coeffs.len(),
            1,
            coeffs.iter().enumerate().map(|(v, c)| (vec![v as u16], c.clone())),
        )
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::from_keys(nvars, 0, [(Vec::new(), c)])
    }

    pub(crate) fn add_term(&mut self, key: Vec<u16>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn bits(&self) -> usize {
        self.terms.values().map(Scalar::bits).max().unwrap_or(64)
    }

    pub(crate) fn keys(&self) -> impl Iterator<Item = (&Vec<u16>, &Scalar)> {
        self.terms.iter()
    }

    /// `(exponent vector, coefficient)` pairs in a fixed order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &Scalar)> + '_ {
        self.terms.iter().map(|(k, c)| (exps_from_key(k, self.nvars), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Option<&Scalar> {
        self.terms.get(&key_from_exps(exps))
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(Scalar::mag).fold(0.0, f64::max)
    }

    /// Sum of coefficient moduli; bounds `|f|` on the unit polydisc.
    pub fn norm1(&self) -> f64 {
        self.terms.values().map(Scalar::mag).sum()
    }

    /// Drops coefficients at most `tol` times the largest one.
    pub fn chop(&self, tol: f64) -> Self {
        let thr = tol * self.max_abs_coeff();
        MultiPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.mag() > thr)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Whether every coefficient is at most `tol · scale`.
    pub fn is_negligible(&self, tol: f64, scale: f64) -> bool {
        self.max_abs_coeff() <= tol * scale
    }

    pub fn evaluate(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.nvars, "point dimension");
        let bits = x.iter().map(Scalar::bits).max().unwrap_or(64).max(self.bits());
        let mut acc = Scalar::zero(bits);
        for (k, c) in &self.terms {
            let mut t = c.clone();
            for &v in k {
                t *= &x[v as usize];
            }
            acc += &t;
        }
        acc
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_keys(self.nvars, self.degree, self.terms.iter().map(|(k, c)| (k.clone(), c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_f64(-1.0, other.bits())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (ka, a) in &self.terms {
            for (kb, b) in &other.terms {
                let mut k = Vec::with_capacity(ka.len() + kb.len());
                let (mut i, mut j) = (0, 0);
                while i < ka.len() || j < kb.len() {
                    if j == kb.len() || (i < ka.len() && ka[i] <= kb[j]) {
                        k.push(ka[i]);
                        i += 1;
                    } else {
                        k.push(kb[j]);
                        j += 1;
                    }
                }
                out.add_term(k, &(a * b));
            }
        }
        out
    }

    /// `∂f/∂x_v`
    pub fn partial(&self, v: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(1));
        let v = v as u16;
        for (k, c) in &self.terms {
            let cnt = k.iter().filter(|&&x| x == v).count();
            if cnt == 0 {
                continue;
            }
            let pos = k.iter().position(|&x| x == v).expect("present");
            let mut nk = k.clone();
            nk.remove(pos);
            out.add_term(nk, &c.mul_int(cnt as i64));
        }
        out
    }

    /// Directional derivative `Σ q_v ∂f/∂x_v`.
    pub fn directional_derivative(&self, q: &[Scalar]) -> Self {
        assert_eq!(q.len(), self.nvars);
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (k, c) in &self.terms {
            let mut i = 0;
            while i < k.len() {
                let v = k[i];
                let mut j = i;
                while j < k.len() && k[j] == v {
                    j += 1;
                }
                if !q[v as usize].is_zero() {
                    let mut nk = k.clone();
                    nk.remove(i);
                    out.add_term(nk, &(&c.mul_int((j - i) as i64) * &q[v as usize]));
                }
                i = j;
            }
        }
        out
    }

    /// Coefficients of a linear form.
    pub fn linear_coefficients(&self) -> Vec<Scalar> {
        assert_eq!(self.degree, 1, "not a linear form");
        let bits = self.bits();
        let mut c = vec![Scalar::zero(bits); self.nvars];
        for (k, v) in &self.terms {
            c[k[0] as usize] = v.clone();
        }
        c
    }

    /// Symmetric Gram matrix `G` with `vᵀGv = f(v)`.
    pub fn polarize_quadratic(&self) -> Matrix {
        assert_eq!(self.degree, 2, "not a quadric");
        let bits = self.bits();
        let mut g = Matrix::zeros(self.nvars, self.nvars, bits);
        for (k, c) in &self.terms {
            let (a, b) = (k[0] as usize, k[1] as usize);
            if a == b {
                g[(a, a)] = c.clone();
            } else {
                let h = c.div_int(2);
                g[(a, b)] = h.clone();
                g[(b, a)] = h;
            }
        }
        g
    }

    /// The quadric `vᵀGv`.
    pub fn from_gram(g: &Matrix) -> Self {
        let n = g.rows();
        let mut out = Self::zero(n, 2);
        for a in 0..n {
            out.add_term(vec![a as u16, a as u16], &g[(a, a)]);
            for b in a + 1..n {
                out.add_term(vec![a as u16, b as u16], &(&g[(a, b)] + &g[(b, a)]));
            }
        }
        out
    }

    /// Sets every variable outside `keep` to zero and renumbers the rest in
    /// the order given.
    pub fn restrict_coordinates(&self, keep: &[usize]) -> Self {
        let mut pos = vec![None; self.nvars];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = Some(i as u16);
        }
        let mut out = Self::zero(keep.len(), self.degree);
        'terms: for (k, c) in &self.terms {
            let mut nk = Vec::with_capacity(k.len());
            for &v in k {
                match pos[v as usize] {
                    Some(p) => nk.push(p),
                    None => continue 'terms,
                }
            }
            nk.sort_unstable();
            out.add_term(nk, c);
        }
        out
    }

    /// Splits off the last `k` variables: returns, for each exponent pattern
    /// `e` of those variables, the coefficient form in the first
    /// `nvars − k` variables (of degree `degree − |e|`).
    pub fn coefficient_forms(&self, k: usize) -> BTreeMap<Vec<u32>, MultiPoly> {
        let base = self.nvars - k;
        let mut out: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
        for (key, c) in &self.terms {
            let split = key.iter().position(|&v| v as usize >= base).unwrap_or(key.len());
            let mut e = vec![0u32; k];
            for &v in &key[split..] {
                e[v as usize - base] += 1;
            }
            let d = split;
            out.entry(e)
                .or_insert_with(|| MultiPoly::zero(base, d))
                .add_term(key[..split].to_vec(), c);
        }
        out
    }

    pub fn with_bits(&self, bits: usize) -> Self {
        Self::from_keys(
            self.nvars,
            self.degree,
            self.terms.iter().map(|(k, c)| (k.clone(), c.with_bits(bits))),
        )
    }

    /// Dense form with every coefficient's real and imaginary parts uniform
    /// in `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(nvars: usize, degree: usize, bits: usize, rng: &mut R) -> Self {
        let table = crate::multipoly::substitute::MonomialTable::new(nvars, degree);
        Self::from_keys(
            nvars,
            degree,
            table.monos[degree]
                .iter()
                .map(|k| (k.clone(), Scalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), bits))),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exps: Vec<u32>,
    c: Scalar,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    nvars: usize,
    degree: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms()
                .map(|(exps, c)| TermRepr { exps, c: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        for t in &r.terms {
            if t.exps.len() != r.nvars || t.exps.iter().sum::<u32>() as usize != r.degree {
                return Err(de::Error::custom("term does not match nvars/degree"));
            }
        }
        Ok(MultiPoly::from_terms(
            r.nvars,
            r.degree,
            r.terms.into_iter().map(|t| (t.exps, t.c)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const B: usize = 128;

    fn s(v: f64) -> Scalar {
        Scalar::from_f64(v, B)
    }

    pub(crate) fn random_form(nvars: usize, d: usize, rng: &mut ChaCha8Rng) -> MultiPoly {
        MultiPoly::random(nvars, d, B, rng)
    }

    #[test]
    fn evaluate_examples() {
        let f = MultiPoly::from_terms(2, 2, [(vec![2, 0], s(1.0)), (vec![0, 2], s(1.0))]);
        assert!(f.evaluate(&[s(1.0), Scalar::i(B)]).is_zero());
        assert!(f.evaluate(&[s(0.0), s(0.0)]).is_zero());
        let g = MultiPoly::from_terms(3, 3, [(vec![1, 1, 1], s(1.0))]);
        assert_eq!(g.evaluate(&[s(2.0), s(3.0), s(5.0)]).to_c64(), (30.0, 0.0));
    }

    #[test]
    fn homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_form(4, 3, &mut rng);
        let v: Vec<Scalar> = (0..4).map(|_| Scalar::new(rng.gen(), rng.gen(), B)).collect();
        let t = Scalar::new(0.7, -1.3, B);
        let tv: Vec<Scalar> = v.iter().map(|x| x * &t).collect();
        let lhs = f.evaluate(&tv);
        let rhs = &t.powi(3) * &f.evaluate(&v);
        assert!((&lhs - &rhs).mag() < 1e-30);
    }

    #[test]
    fn polarization_examples() {
        let f = MultiPoly::from_terms(2, 2, [(vec![1, 1], s(1.0))]);
        let g = f.polarize_quadratic();
        assert_eq!(g[(0, 1)].to_c64(), (0.5, 0.0));
        assert_eq!(g[(1, 0)].to_c64(), (0.5, 0.0));
        assert!(g[(0, 0)].is_zero() && g[(1, 1)].is_zero());
        let h = MultiPoly::from_terms(3, 2, [(vec![2, 0, 0], s(1.0))]).polarize_quadratic();
        assert_eq!(h[(0, 0)].to_c64(), (1.0, 0.0));
        assert_eq!(h.norm_max(), 1.0);
    }

    #[test]
    fn gram_matches_evaluation_and_polarization_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_form(6, 2, &mut rng);
        let g = f.polarize_quadratic();
        for _ in 0..20 {
            let v: Vec<Scalar> = (0..6).map(|_| Scalar::new(rng.gen(), rng.gen(), B)).collect();
            let gv = g.mul_vec(&v);
            let q = v.iter().zip(&gv).fold(s(0.0), |a, (x, y)| &a + &(x * y));
            assert!((&q - &f.evaluate(&v)).mag() < 1e-30);
        }
        let e = |i: usize| -> Vec<Scalar> { (0..6).map(|j| s(if i == j { 1.0 } else { 0.0 })).collect() };
        let ejk: Vec<Scalar> = e(1).iter().zip(&e(4)).map(|(a, b)| a + b).collect();
        let pol = (&(&f.evaluate(&ejk) - &f.evaluate(&e(1))) - &f.evaluate(&e(4))).div_int(2);
        assert!((&pol - &g[(1, 4)]).mag() < 1e-30);
        assert!(MultiPoly::from_gram(&g).sub(&f).max_abs_coeff() < 1e-30);
    }

    #[test]
    fn directional_derivative_is_taylor_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_form(3, 3, &mut rng);
        let p: Vec<Scalar> = (0..3).map(|_| Scalar::new(rng.gen(), rng.gen(), B)).collect();
        let q: Vec<Scalar> = (0..3).map(|_| Scalar::new(rng.gen(), rng.gen(), B)).collect();
        // d/dλ f(p + λq) at λ = 0 by a central difference at high precision
        let h = Scalar::from_f64(1e-12, B);
        let at = |t: &Scalar| -> Scalar {
            let x: Vec<Scalar> = p.iter().zip(&q).map(|(a, b)| a + &(b * t)).collect();
            f.evaluate(&x)
        };
        let fd = &(&at(&h) - &at(&(-&h))) / &h.mul_int(2);
        let dd = f.directional_derivative(&q).evaluate(&p);
        assert!((&fd - &dd).mag() < 1e-18);
        assert!(f.partial(0).sub(&f.directional_derivative(&[s(1.0), s(0.0), s(0.0)])).is_zero());
    }

    #[test]
    fn coefficient_forms_split() {
        // (x0 + x2)² = x0² + 2 x0 x2 + x2²
        let f = MultiPoly::from_terms(3, 2, [(vec![2, 0, 0], s(1.0)), (vec![1, 0, 1], s(2.0)), (vec![0, 0, 2], s(1.0))]);
        let parts = f.coefficient_forms(1);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[&vec![1]].degree(), 1);
        assert_eq!(parts[&vec![1]].coefficient(&[1, 0]).unwrap().to_c64(), (2.0, 0.0));
        assert_eq!(parts[&vec![2]].degree(), 0);
    }

    #[test]
    fn serde_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_form(3, 2, &mut rng);
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.starts_with("{\"nvars\":3,\"degree\":2,\"terms\":[{\"exps\":"));
        let g: MultiPoly = serde_json::from_str(&json).unwrap();
        assert!(g.with_bits(B).sub(&f).max_abs_coeff() < 1e-30);
        assert!(serde_json::from_str::<MultiPoly>("{\"nvars\":2,\"degree\":2,\"terms\":[{\"exps\":[1,0],\"c\":[\"1\",\"0\"]}]}").is_err());
    }
}
