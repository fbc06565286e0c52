use super::config::PrecisionConfig;
use super::scalar::Scalar;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

fn normalized(f: &UniPoly) -> UniPoly {
    let n = f.norm_inf();
    f.scale(&Scalar::from_f64(1.0 / n, f.bits()))
}

/// Monic approximate gcd by Euclid's algorithm on max-norm normalized
/// remainders.
///
/// A remainder at most `tol` (relative) is taken as zero; one in
/// `(tol, √tol]` makes the degree decision ambiguous and is reported as
/// [`Error::IllConditioned`].
pub fn gcd_univariate(f: &UniPoly, g: &UniPoly, cfg: &PrecisionConfig) -> Result<UniPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::DomainError("gcd of a zero polynomial".into()));
    }
    let tol = cfg.tol_rel;
    let mut a = normalized(&f.with_bits(cfg.bits));
    let mut b = normalized(&g.with_bits(cfg.bits));
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        b = b.trim_rel(tol);
        if b.degree() == 0 {
            return Ok(UniPoly::constant(Scalar::one(cfg.bits)));
        }
        let (_, r) = a.div_rem(&b);
        let rn = r.norm_inf();
        if rn <= tol {
            return Ok(b.monic());
        }
        if rn <= tol.sqrt() {
            return Err(Error::IllConditioned(format!(
                "gcd remainder {rn:e} between tol and its square root"
            )));
        }
        a = b;
        b = normalized(&r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const B: usize = 192;

    fn p(c: &[f64]) -> UniPoly {
        UniPoly::from_f64(c, B)
    }

    fn assert_close(a: &UniPoly, b: &UniPoly) {
        assert_eq!(a.degree(), b.degree());
        assert!(a.sub(b).norm_inf() < 1e-40, "{a:?} vs {b:?}");
    }

    #[test]
    fn simple_cases() {
        let cfg = PrecisionConfig::with_bits(B);
        assert_close(&gcd_univariate(&p(&[-1.0, 0.0, 1.0]), &p(&[-1.0, 1.0]), &cfg).unwrap(), &p(&[-1.0, 1.0]));
        let f = p(&[2.0, -3.0, 0.5]);
        assert_close(&gcd_univariate(&f, &f, &cfg).unwrap(), &f.monic());
        // (x−1)²(x+2) = x³ − 3x + 2
        let g = gcd_univariate(&p(&[2.0, -3.0, 0.0, 1.0]), &p(&[-1.0, 0.0, 1.0]), &cfg).unwrap();
        assert_close(&g, &p(&[-1.0, 1.0]));
    }

    #[test]
    fn coprime_gives_one() {
        let cfg = PrecisionConfig::with_bits(B);
        let g = gcd_univariate(&p(&[1.0, 0.0, 1.0]), &p(&[-2.0, 1.0]), &cfg).unwrap();
        assert_eq!(g.degree(), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn common_factor_survives(
            f in proptest::collection::vec(-3i32..=3, 2..=5),
            g in proptest::collection::vec(-3i32..=3, 2..=5),
            h in proptest::collection::vec(-3i32..=3, 2..=5),
        ) {
            let cfg = PrecisionConfig::with_bits(B);
            let mk = |v: &Vec<i32>| UniPoly::new(v.iter().map(|&c| Scalar::from_i64(c as i64, B)).collect());
            let (f, g, h) = (mk(&f), mk(&g), mk(&h));
            prop_assume!(f.degree() >= 1 && g.degree() >= 1 && h.degree() >= 1);
            match gcd_univariate(&f.mul(&h), &g.mul(&h), &cfg) {
                Ok(d) => prop_assert!(d.degree() >= h.degree()),
                Err(Error::IllConditioned(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
