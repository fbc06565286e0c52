use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{normalize, Scalar, UniPoly};

/// `xⁿ + a_1 xⁿ⁻¹ + … + a_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPoly {
    a: Vec<Scalar>,
}

impl MonicPoly {
    /// From `a_1..a_n`.
    pub fn new(a: Vec<Scalar>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::DomainError("monic polynomial needs degree at least 1".into()));
        }
        Ok(MonicPoly { a })
    }

    pub fn from_f64(a: &[f64], bits: usize) -> Result<Self> {
        Self::new(a.iter().map(|&v| Scalar::from_f64(v, bits)).collect())
    }

    pub fn from_i64(a: &[i64], bits: usize) -> Result<Self> {
        Self::new(a.iter().map(|&v| Scalar::from_i64(v, bits)).collect())
    }

    /// `∏ (x − r_i)`.
    pub fn from_roots(roots: &[Scalar], bits: usize) -> Result<Self> {
        Self::from_unipoly(&UniPoly::from_roots(roots, bits))
    }

    /// Divides by the leading coefficient.
    pub fn from_unipoly(f: &UniPoly) -> Result<Self> {
        if f.is_zero() || f.degree() == 0 {
            return Err(Error::DomainError("monic polynomial needs degree at least 1".into()));
        }
        let m = f.monic();
        let c = m.coeffs();
        let n = c.len() - 1;
        Self::new((1..=n).map(|i| c[n - i].clone()).collect())
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `a_1..a_n`.
    pub fn a(&self) -> &[Scalar] {
        &self.a
    }

    /// `a_i`, 1-based.
    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.a[i - 1]
    }

    pub fn bits(&self) -> usize {
        self.a.iter().map(Scalar::bits).max().unwrap_or(64)
    }

    pub fn to_unipoly(&self) -> UniPoly {
        let n = self.n();
        let mut c: Vec<Scalar> = (0..n).map(|j| self.a[n - 1 - j].clone()).collect();
        c.push(Scalar::one(self.bits()));
        UniPoly::new(c)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.to_unipoly().eval(x)
    }

    pub fn with_bits(&self, bits: usize) -> Self {
        MonicPoly {
            a: self.a.iter().map(|c| c.with_bits(bits)).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MonicRepr {
    n: usize,
    a: Vec<Scalar>,
}

impl Serialize for MonicPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonicRepr {
            n: self.n(),
            a: self.a.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonicPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MonicRepr::deserialize(d)?;
        if r.n != r.a.len() {
            return Err(de::Error::custom(format!("n = {} but {} coefficients", r.n, r.a.len())));
        }
        MonicPoly::new(r.a).map_err(de::Error::custom)
    }
}

/// `T(x) = b_{n−1} xⁿ⁻¹ + … + b_0`, stored as `b_0..b_{n−1}`.
///
/// Its length is the degree `n` of the polynomial it acts on, so `deg T ≤
/// n − 1` holds by construction and `T` is never a multiple of `p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transformation {
    b: Vec<Scalar>,
}

impl Transformation {
    pub fn new(b: Vec<Scalar>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::DomainError("empty transformation".into()));
        }
        if b.iter().all(Scalar::is_zero) {
            return Err(Error::DomainError("transformation is the zero vector".into()));
        }
        Ok(Transformation { b })
    }

    pub fn from_f64(b: &[f64], bits: usize) -> Result<Self> {
        Self::new(b.iter().map(|&v| Scalar::from_f64(v, bits)).collect())
    }

    /// `T(x) = x` for degree-`n` inputs.
    pub fn identity(n: usize, bits: usize) -> Self {
        let mut b = vec![Scalar::zero(bits); n];
        if n > 1 {
            b[1] = Scalar::one(bits);
        } else {
            b[0] = Scalar::one(bits);
        }
        Transformation { b }
    }

    pub fn b(&self) -> &[Scalar] {
        &self.b
    }

    /// Degree `n` of the polynomials this acts on.
    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// Degree of `T` itself.
    pub fn degree(&self) -> usize {
        self.b.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn to_unipoly(&self) -> UniPoly {
        UniPoly::new(self.b.clone())
    }

    /// Same projective point with unit Euclidean norm.
    pub fn normalized(&self) -> Self {
        Transformation { b: normalize(&self.b) }
    }

    pub fn with_bits(&self, bits: usize) -> Self {
        Transformation {
            b: self.b.iter().map(|c| c.with_bits(bits)).collect(),
        }
    }
}

impl<'de> Deserialize<'de> for Transformation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            b: Vec<Scalar>,
        }
        let r = Repr::deserialize(d)?;
        Transformation::new(r.b).map_err(de::Error::custom)
    }
}
