//! Newton's identities between power sums and elementary symmetric functions.

use super::scalar::Scalar;

/// `(p_1..p_k) -> (e_1..e_k)` using `i·e_i = Σ_{j=1..i} (−1)^{j−1} e_{i−j} p_j`.
pub fn newton_e_from_p(p: &[Scalar]) -> Vec<Scalar> {
    let bits = p.iter().map(Scalar::bits).max().unwrap_or(64);
    let mut e = vec![Scalar::one(bits)];
    for i in 1..=p.len() {
        let mut acc = Scalar::zero(bits);
        for j in 1..=i {
            let t = &e[i - j] * &p[j - 1];
            if j % 2 == 1 {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        e.push(acc.div_int(i as i64));
    }
    e.remove(0);
    e
}

/// `(e_1..e_k) -> (p_1..p_k)`.
pub fn p_from_e(e: &[Scalar]) -> Vec<Scalar> {
    let bits = e.iter().map(Scalar::bits).max().unwrap_or(64);
    let mut p: Vec<Scalar> = Vec::with_capacity(e.len());
    for i in 1..=e.len() {
        let mut acc = e[i - 1].mul_int(i as i64);
        if i % 2 == 0 {
            acc = -acc;
        }
        for j in 1..i {
            let t = &e[j - 1] * &p[i - j - 1];
            if j % 2 == 1 {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        p.push(acc.with_bits(bits));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::UniPoly;
    use proptest::prelude::*;

    const B: usize = 192;

    fn s(v: f64) -> Scalar {
        Scalar::from_f64(v, B)
    }

    #[test]
    fn hand_example() {
        let e = newton_e_from_p(&[s(3.0), s(5.0)]);
        assert_eq!(e[0].to_c64(), (3.0, 0.0));
        assert_eq!(e[1].to_c64(), (2.0, 0.0));
    }

    #[test]
    fn zero_power_sums() {
        let e = newton_e_from_p(&vec![s(0.0); 5]);
        assert!(e.iter().all(Scalar::is_zero));
    }

    #[test]
    fn matches_product_expansion() {
        let roots: Vec<Scalar> = [(0.3, 1.1), (-2.0, 0.5), (1.7, 0.0), (0.0, -0.9), (4.1, 2.2), (-1.3, -0.4)]
            .iter()
            .map(|&(r, i)| Scalar::new(r, i, B))
            .collect();
        let p: Vec<Scalar> = (1..=6)
            .map(|k| roots.iter().fold(s(0.0), |acc, r| &acc + &r.powi(k)))
            .collect();
        let e = newton_e_from_p(&p);
        // ∏(x − r_i) = Σ (−1)^i e_i x^{6−i}
        let poly = UniPoly::from_roots(&roots, B);
        for i in 1..=6 {
            let mut expect = poly.coeffs()[6 - i].clone();
            if i % 2 == 1 {
                expect = -expect;
            }
            assert!((&e[i - 1] - &expect).mag() < 1e-45);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn roundtrip(vals in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..=8)) {
            let e: Vec<Scalar> = vals.iter().map(|&(r, i)| Scalar::new(r, i, B)).collect();
            let back = newton_e_from_p(&p_from_e(&e));
            for (a, b) in e.iter().zip(&back) {
                prop_assert!((a - b).mag() <= 1e-40 * (1.0 + a.mag()));
            }
        }
    }
}
