//! Arbitrary-precision complex scalars.
//!
//! Every scalar carries its own working precision; binary operations round
//! to the larger of the two operand precisions.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Arbitrary-precision real number.
pub type Real = BigFloat;

/// Lossy conversion used for tolerance bookkeeping and display.
pub fn real_to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let (words, _, sign, exp, _) = x.as_raw_parts().expect("finite value");
    let top = words[words.len() - 1] as f64;
    let next = if words.len() > 1 {
        words[words.len() - 2] as f64
    } else {
        0.0
    };
    let two64 = 18446744073709551616.0_f64;
    let mant = (top + next / two64) / two64;
    let v = mant * 2f64.powi(exp - 1) * 2.0;
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `log2 |x|` without overflow; `-inf` for zero.
pub fn real_log2_abs(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    match x.as_raw_parts() {
        Some((words, _, _, exp, _)) => {
            let top = words[words.len() - 1] as f64 / 18446744073709551616.0_f64;
            exp as f64 + top.log2()
        }
        None => f64::INFINITY,
    }
}

/// Arbitrary-precision complex number.
#[derive(Clone)]
pub struct Scalar {
    re: BigFloat,
    im: BigFloat,
    bits: usize,
}

impl Scalar {
    pub fn zero(bits: usize) -> Self {
        Scalar {
            re: BigFloat::from_word(0, bits),
            im: BigFloat::from_word(0, bits),
            bits,
        }
    }

    pub fn one(bits: usize) -> Self {
        Self::from_f64(1.0, bits)
    }

    pub fn i(bits: usize) -> Self {
        Self::new(0.0, 1.0, bits)
    }

    pub fn from_f64(re: f64, bits: usize) -> Self {
        Self::new(re, 0.0, bits)
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        Scalar {
            re: BigFloat::from_i64(v, bits),
            im: BigFloat::from_word(0, bits),
            bits,
        }
    }

    pub fn new(re: f64, im: f64, bits: usize) -> Self {
        Scalar {
            re: BigFloat::from_f64(re, bits),
            im: BigFloat::from_f64(im, bits),
            bits,
        }
    }

    pub fn from_parts(re: BigFloat, im: BigFloat, bits: usize) -> Self {
        Scalar { re, im, bits }
    }

    pub fn from_real(re: BigFloat, bits: usize) -> Self {
        Scalar {
            re,
            im: BigFloat::from_word(0, bits),
            bits,
        }
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Same value rounded to `bits` of mantissa.
    pub fn with_bits(&self, bits: usize) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        let _ = re.set_precision(bits, RM);
        let _ = im.set_precision(bits, RM);
        Scalar { re, im, bits }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }

    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: self.im.clone().neg(),
            bits: self.bits,
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.bits();
        let a = self.re.mul(&self.re, p, RM);
        let b = self.im.mul(&self.im, p, RM);
        a.add(&b, p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.bits(), RM)
    }

    /// Modulus as `f64`.
    pub fn mag(&self) -> f64 {
        let r = real_to_f64(&self.re);
        let i = real_to_f64(&self.im);
        if r.is_finite() && i.is_finite() && (r != 0.0 || i != 0.0) && r.abs().max(i.abs()) > 1e-290 {
            r.hypot(i)
        } else {
            real_to_f64(&self.abs())
        }
    }

    /// `log2 |z|`, robust against over/underflow of `f64`.
    pub fn log2_mag(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let a = real_log2_abs(&self.re);
        let b = real_log2_abs(&self.im);
        let m = a.max(b);
        let d = (a.min(b) - m).exp2();
        m + 0.5 * (1.0 + d * d).log2()
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (real_to_f64(&self.re), real_to_f64(&self.im))
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        self * &Scalar::from_f64(s, self.bits())
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let p = self.bits();
        let f = BigFloat::from_i64(k, p);
        Scalar {
            re: self.re.mul(&f, p, RM),
            im: self.im.mul(&f, p, RM),
            bits: p,
        }
    }

    pub fn div_int(&self, k: i64) -> Self {
        let p = self.bits();
        let f = BigFloat::from_i64(k, p);
        Scalar {
            re: self.re.div(&f, p, RM),
            im: self.im.div(&f, p, RM),
            bits: p,
        }
    }

    pub fn mul_real(&self, r: &BigFloat) -> Self {
        let p = self.bits();
        Scalar {
            re: self.re.mul(r, p, RM),
            im: self.im.mul(r, p, RM),
            bits: p,
        }
    }

    pub fn recip(&self) -> Self {
        Scalar::one(self.bits()) / self
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.bits());
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.bits();
        if self.is_zero() {
            return Scalar::zero(p);
        }
        let r = self.abs();
        let half = BigFloat::from_f64(0.5, p);
        let t = r.add(&self.re.abs(), p, RM).mul(&half, p, RM).sqrt(p, RM);
        let two_t = t.add(&t, p, RM);
        if !self.re.is_negative() {
            Scalar {
                re: t,
                im: self.im.div(&two_t, p, RM),
                bits: p,
            }
        } else {
            let im = if self.im.is_negative() { t.neg() } else { t };
            Scalar {
                re: self.im.abs().div(&two_t, p, RM),
                im,
                bits: p,
            }
        }
    }

    /// `e^{iθ}` for an `f64` angle, at the requested precision.
    pub fn cis(theta: f64, bits: usize) -> Self {
        let mut cc = consts();
        let t = BigFloat::from_f64(theta, bits);
        Scalar {
            re: t.cos(bits, RM, &mut cc),
            im: t.sin(bits, RM, &mut cc),
            bits,
        }
    }

    /// `e^{2πi k/n}` computed at full precision.
    pub fn root_of_unity(k: usize, n: usize, bits: usize) -> Self {
        let mut cc = consts();
        let p = bits + 16;
        let pi = cc.pi(p, RM);
        let t = pi
            .mul(&BigFloat::from_u64(2 * k as u64, p), p, RM)
            .div(&BigFloat::from_u64(n as u64, p), p, RM);
        Scalar {
            re: t.cos(p, RM, &mut cc),
            im: t.sin(p, RM, &mut cc),
            bits: p,
        }
        .with_bits(bits)
    }

    pub fn to_decimal(&self) -> (String, String) {
        let mut cc = consts();
        (fmt_real(&self.re, &mut cc), fmt_real(&self.im, &mut cc))
    }

    pub fn parse_decimal(re: &str, im: &str, bits: usize) -> Result<Self> {
        let mut cc = consts();
        let r = parse_real(re, bits, &mut cc)?;
        let i = parse_real(im, bits, &mut cc)?;
        Ok(Scalar { re: r, im: i, bits })
    }
}

fn consts() -> Consts {
    Consts::new().expect("astro-float constant cache")
}

fn fmt_real(x: &BigFloat, cc: &mut Consts) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.format(Radix::Dec, RM, cc)
        .unwrap_or_else(|_| format!("{:e}", real_to_f64(x)))
}

fn parse_real(s: &str, bits: usize, cc: &mut Consts) -> Result<BigFloat> {
    let t = s.trim();
    if t == "0" || t == "-0" || t == "0.0" {
        return Ok(BigFloat::from_word(0, bits));
    }
    let v = BigFloat::parse(t, Radix::Dec, bits, RM, cc);
    if v.is_nan() {
        return Err(Error::Parse(format!("not a decimal number: {s:?}")));
    }
    Ok(v)
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, i) = self.to_c64();
        write!(f, "({r:e}{:+e}i)", i)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl<'a, 'b> Add<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'b Scalar) -> Scalar {
        let p = self.bits().max(rhs.bits());
        Scalar {
            re: self.re.add(&rhs.re, p, RM),
            im: self.im.add(&rhs.im, p, RM),
            bits: p,
        }
    }
}

impl<'a, 'b> Sub<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'b Scalar) -> Scalar {
        let p = self.bits().max(rhs.bits());
        Scalar {
            re: self.re.sub(&rhs.re, p, RM),
            im: self.im.sub(&rhs.im, p, RM),
            bits: p,
        }
    }
}

impl<'a, 'b> Mul<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'b Scalar) -> Scalar {
        let p = self.bits().max(rhs.bits());
        if rhs.im.is_zero() {
            return Scalar {
                re: self.re.mul(&rhs.re, p, RM),
                im: self.im.mul(&rhs.re, p, RM),
                bits: p,
            };
        }
        let ac = self.re.mul(&rhs.re, p, RM);
        let bd = self.im.mul(&rhs.im, p, RM);
        let ad = self.re.mul(&rhs.im, p, RM);
        let bc = self.im.mul(&rhs.re, p, RM);
        Scalar {
            re: ac.sub(&bd, p, RM),
            im: ad.add(&bc, p, RM),
            bits: p,
        }
    }
}

impl<'a, 'b> Div<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'b Scalar) -> Scalar {
        let p = self.bits().max(rhs.bits());
        if rhs.im.is_zero() {
            return Scalar {
                re: self.re.div(&rhs.re, p, RM),
                im: self.im.div(&rhs.re, p, RM),
                bits: p,
            };
        }
        let den = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Scalar {
            re: num.re.div(&den, p, RM),
            im: num.im.div(&den, p, RM),
            bits: p,
        }
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: self.re.clone().neg(),
            im: self.im.clone().neg(),
            bits: self.bits,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'b Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<'b> AddAssign<&'b Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &'b Scalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = &*self + &rhs;
    }
}

impl<'b> SubAssign<&'b Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &'b Scalar) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = &*self - &rhs;
    }
}

impl<'b> MulAssign<&'b Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &'b Scalar) {
        *self = &*self * rhs;
    }
}

/// Serialized as a pair of decimal strings `["re", "im"]`.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (r, i) = self.to_decimal();
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&r)?;
        t.serialize_element(&i)?;
        t.end()
    }
}

/// Deserialization infers the precision from the number of mantissa
/// digits, rounded to whole 64-bit words (at least one), so a value
/// printed at `64·w` bits reads back at the same precision. Callers usually
/// re-round with [`Scalar::with_bits`].
impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (r, i): (String, String) = Deserialize::deserialize(deserializer)?;
        let bits = decimal_bits(&r).max(decimal_bits(&i));
        Scalar::parse_decimal(&r, &i, bits).map_err(de::Error::custom)
    }
}

fn decimal_bits(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or("");
    let digits = mantissa.bytes().filter(u8::is_ascii_digit).count();
    let bits = (digits as f64 / std::f64::consts::LOG10_2) as usize;
    ((bits + 32) / 64).max(1) * 64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_roundtrip() {
        for v in [1.0, -2.5, 3.0e-12, 7.25e40, 0.1] {
            let x = BigFloat::from_f64(v, 128);
            assert_eq!(real_to_f64(&x), v);
        }
        assert!((real_log2_abs(&BigFloat::from_f64(8.0, 128)) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn complex_arithmetic() {
        let a = Scalar::new(1.0, 2.0, 128);
        let b = Scalar::new(3.0, -1.0, 128);
        assert_eq!((&a * &b).to_c64(), (5.0, 5.0));
        let q = &(&a * &b) / &b;
        let (r, i) = q.to_c64();
        assert!((r - 1.0).abs() < 1e-30 && (i - 2.0).abs() < 1e-30);
        assert_eq!((&a - &b).to_c64(), (-2.0, 3.0));
    }

    #[test]
    fn principal_sqrt() {
        let m1 = Scalar::from_f64(-1.0, 128);
        let s = m1.sqrt();
        assert_eq!(s.to_c64(), (0.0, 1.0));
        let z = Scalar::new(-3.0, -4.0, 128).sqrt();
        let (r, i) = z.to_c64();
        assert!((r - 1.0).abs() < 1e-15 && (i + 2.0).abs() < 1e-15);
    }

    #[test]
    fn roots_of_unity() {
        let w = Scalar::root_of_unity(1, 4, 256);
        let (r, i) = w.to_c64();
        assert!(r.abs() < 1e-70 && (i - 1.0).abs() < 1e-70);
        let z = Scalar::root_of_unity(1, 7, 256).powi(7);
        assert!((&z - &Scalar::one(256)).mag() < 1e-70);
    }

    #[test]
    fn decimal_serialization_roundtrip() {
        let a = Scalar::new(1.0 / 3.0, -2.0e-20, 256);
        let third = &Scalar::one(256) / &Scalar::from_f64(3.0, 256);
        let (r, i) = third.to_decimal();
        let back = Scalar::parse_decimal(&r, &i, 256).unwrap();
        assert!((&back - &third).mag() < 1e-70);
        let json = serde_json::to_string(&a).unwrap();
        let b: Scalar = serde_json::from_str(&json).unwrap();
        assert!((&a - &b).mag() < 1e-30);
        assert_eq!(Scalar::zero(64).to_decimal(), ("0".to_string(), "0".to_string()));
    }

    #[test]
    fn decimal_text_is_stable() {
        for bits in [64, 128, 192, 256, 512, 1024] {
            let x = &Scalar::new(2.0, -7.0, bits) / &Scalar::from_f64(3.0, bits);
            let json = serde_json::to_string(&x).unwrap();
            let y: Scalar = serde_json::from_str(&json).unwrap();
            assert_eq!(y.bits(), bits);
            assert_eq!(y, x);
            assert_eq!(serde_json::to_string(&y).unwrap(), json);
        }
    }
}
