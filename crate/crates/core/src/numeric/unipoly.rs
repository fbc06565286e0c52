use serde::{Deserialize, Serialize};

use super::scalar::Scalar;

/// Dense univariate polynomial, coefficients lowest degree first.
///
/// Exact zero leading coefficients are stripped on construction, so the
/// zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Scalar) -> Self {
        Self::new(vec![-r, Scalar::one(r.bits())])
    }

    pub fn from_f64(coeffs: &[f64], bits: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| Scalar::from_f64(c, bits)).collect())
    }

    /// `∏ (x - r_i)`
    pub fn from_roots(roots: &[Scalar], bits: usize) -> Self {
        let mut c = vec![Scalar::one(bits)];
        for r in roots {
            let mut next = vec![Scalar::zero(bits); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= &(ck * r);
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Option<&Scalar> {
        self.coeffs.get(k)
    }

    pub fn bits(&self) -> usize {
        self.coeffs.iter().map(Scalar::bits).max().unwrap_or(64)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(x.bits().max(self.bits()));
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `(f(x), f'(x))` in one Horner pass.
    pub fn eval_with_derivative(&self, x: &Scalar) -> (Scalar, Scalar) {
        let bits = x.bits().max(self.bits());
        let mut f = Scalar::zero(bits);
        let mut df = Scalar::zero(bits);
        for c in self.coeffs.iter().rev() {
            df = &(&df * x) + &f;
            f = &(&f * x) + c;
        }
        (f, df)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul_int(k as i64))
                .collect(),
        )
    }

    /// Largest coefficient modulus.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(Scalar::mag).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = lc.recip();
                let mut c: Vec<Scalar> = self.coeffs.iter().map(|c| c * &inv).collect();
                *c.last_mut().expect("nonempty") = Scalar::one(lc.bits());
                UniPoly { coeffs: c }
            }
            None => self.clone(),
        }
    }

    /// Drops leading coefficients with modulus at most `tol · ‖f‖∞`.
    pub fn trim_rel(&self, tol: f64) -> Self {
        let scale = self.norm_inf();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.mag() <= tol * scale) {
            c.pop();
        }
        Self::new(c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let bits = self.bits().max(other.bits());
        let z = Scalar::zero(bits);
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).unwrap_or(&z);
                    let b = other.coeffs.get(k).unwrap_or(&z);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let neg = Self::new(other.coeffs.iter().map(|c| -c).collect());
        self.add(&neg)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let bits = self.bits().max(other.bits());
        let mut out = vec![Scalar::zero(bits); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out)
    }

    /// Euclidean division by a polynomial with nonzero leading coefficient.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dlen = divisor.coeffs.len();
        assert!(dlen > 0, "division by the zero polynomial");
        if self.coeffs.len() < dlen {
            return (Self::zero(), self.clone());
        }
        let bits = self.bits().max(divisor.bits());
        let lc_inv = divisor.coeffs[dlen - 1].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(bits); rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dlen - 1] * &lc_inv;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = &q * d;
                rem[k + j] -= &t;
            }
            rem[k + dlen - 1] = Scalar::zero(bits);
            quot[k] = q;
        }
        rem.truncate(dlen - 1);
        (Self::new(quot), Self::new(rem))
    }

    pub fn with_bits(&self, bits: usize) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.with_bits(bits)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: usize = 128;

    #[test]
    fn horner_and_derivative() {
        let f = UniPoly::from_f64(&[1.0, -3.0, 0.0, 2.0], B);
        let x = Scalar::from_f64(2.0, B);
        assert_eq!(f.eval(&x).to_c64(), (11.0, 0.0));
        let (v, d) = f.eval_with_derivative(&x);
        assert_eq!(v.to_c64(), (11.0, 0.0));
        assert_eq!(d.to_c64(), (21.0, 0.0));
        assert_eq!(f.derivative().eval(&x).to_c64(), (21.0, 0.0));
    }

    #[test]
    fn division_identity() {
        let f = UniPoly::from_f64(&[5.0, 1.0, -2.0, 3.0, 1.0], B);
        let g = UniPoly::from_f64(&[1.0, 0.0, 2.0], B);
        let (q, r) = f.div_rem(&g);
        let back = q.mul(&g).add(&r);
        assert!(back.sub(&f).norm_inf() < 1e-30);
        assert!(r.degree() < g.degree());
    }

    #[test]
    fn from_roots_expands() {
        let roots = [Scalar::from_f64(1.0, B), Scalar::from_f64(2.0, B)];
        let p = UniPoly::from_roots(&roots, B);
        let c: Vec<f64> = p.coeffs().iter().map(|c| c.to_c64().0).collect();
        assert_eq!(c, vec![2.0, -3.0, 1.0]);
    }

    #[test]
    fn zero_polynomial_is_empty() {
        let z = UniPoly::from_f64(&[0.0, 0.0], B);
        assert!(z.is_zero());
        assert_eq!(z.degree(), 0);
    }
}
