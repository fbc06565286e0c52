use super::poly::{MonicPoly, Transformation};
use crate::numeric::{newton_e_from_p, Matrix, Scalar};

/// Arithmetic in `K[x]/(p)` together with the power sums of the roots of
/// `p`, so that traces need no root of `p`.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    p: MonicPoly,
    /// `p = xⁿ + Σ low[j] x^j`
    low: Vec<Scalar>,
    power_sums: Vec<Scalar>,
}

impl QuotientRing {
    pub fn new(p: &MonicPoly) -> Self {
        let n = p.n();
        let low: Vec<Scalar> = (0..n).map(|j| p.coeff(n - j).clone()).collect();
        let mut ring = QuotientRing {
            p: p.clone(),
            low,
            power_sums: Vec::new(),
        };
        ring.extend_power_sums(2 * n);
        ring
    }

    pub fn p(&self) -> &MonicPoly {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn bits(&self) -> usize {
        self.p.bits()
    }

    /// Makes `P_0..P_upto` available (Newton's recurrence).
    pub fn extend_power_sums(&mut self, upto: usize) {
        let n = self.n();
        let bits = self.bits();
        if self.power_sums.is_empty() {
            self.power_sums.push(Scalar::from_i64(n as i64, bits));
        }
        while self.power_sums.len() <= upto {
            let k = self.power_sums.len();
            let mut acc = if k <= n {
                self.p.coeff(k).mul_int(k as i64)
            } else {
                Scalar::zero(bits)
            };
            for i in 1..=n.min(k) {
                if i == k {
                    break;
                }
                acc += &(self.p.coeff(i) * &self.power_sums[k - i]);
            }
            self.power_sums.push(-acc);
        }
    }

    /// `P_k = Σ x_i^k`, available up to what was extended.
    pub fn power_sum(&self, k: usize) -> &Scalar {
        &self.power_sums[k]
    }

    pub fn power_sums(&self) -> &[Scalar] {
        &self.power_sums
    }

    /// Reduces a coefficient vector (lowest first) modulo `p`.
    pub fn reduce(&self, mut c: Vec<Scalar>) -> Vec<Scalar> {
        let n = self.n();
        let bits = self.bits();
        while c.len() > n {
            let top = c.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let base = c.len() - n;
            for (j, l) in self.low.iter().enumerate() {
                c[base + j] -= &(&top * l);
            }
        }
        c.resize(n, Scalar::zero(bits));
        c
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let bits = self.bits();
        let mut out = vec![Scalar::zero(bits); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += &(x * y);
            }
        }
        self.reduce(out)
    }

    /// Trace of multiplication by `a` on `K[x]/(p)`.
    pub fn trace(&self, a: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero(self.bits());
        for (j, c) in a.iter().enumerate() {
            acc += &(c * &self.power_sums[j]);
        }
        acc
    }

    /// `A_1..A_k` of the polynomial whose roots are `T(x_i)`, `T` given by
    /// its coefficient vector `b`.
    pub fn leading(&self, b: &[Scalar], k: usize) -> Vec<Scalar> {
        assert!(b.len() <= self.n(), "deg T must be below n");
        let t = self.reduce(b.to_vec());
        let mut cur = t.clone();
        let mut s = Vec::with_capacity(k);
        for m in 1..=k {
            if m > 1 {
                cur = self.mul(&cur, &t);
            }
            s.push(self.trace(&cur));
        }
        newton_e_from_p(&s)
            .into_iter()
            .enumerate()
            .map(|(i, e)| if i % 2 == 0 { -e } else { e })
            .collect()
    }
}

/// Companion matrix: ones on the subdiagonal, last column `−a_n, …, −a_1`.
pub fn companion_matrix(p: &MonicPoly) -> Matrix {
    let n = p.n();
    let bits = p.bits();
    let mut c = Matrix::zeros(n, n, bits);
    for i in 1..n {
        c[(i, i - 1)] = Scalar::one(bits);
    }
    for i in 0..n {
        c[(i, n - 1)] = -p.coeff(n - i);
    }
    c
}

/// Extra bits absorbing the cancellation in power sums and Newton's
/// identities: `n·log2 R_x + k·log2 R_T`, with `R_x` Fujiwara's root bound
/// for `p` and `R_T` the induced bound on `|T(x)|`.
fn guard_bits(p: &MonicPoly, b: &[Scalar], k: usize) -> usize {
    let n = p.n();
    let log_rx = 1.0
        + (1..=n)
            .map(|i| p.coeff(i).log2_mag() / i as f64)
            .fold(f64::NEG_INFINITY, f64::max);
    let log_rx = log_rx.max(0.0);
    let log_rt = b
        .iter()
        .enumerate()
        .map(|(j, c)| c.log2_mag() + j as f64 * log_rx)
        .fold(f64::NEG_INFINITY, f64::max)
        + (b.len() as f64).log2();
    (n as f64 * log_rx + k as f64 * log_rt.max(0.0)).ceil() as usize + 16
}

/// `A_1..A_k` of `transform(p, T)` without computing the rest, evaluated
/// with guard bits and rounded back to the precision of `p`.
pub fn leading_coefficients(p: &MonicPoly, b: &[Scalar], k: usize) -> Vec<Scalar> {
    let bits = p.bits();
    let wide = bits + guard_bits(p, b, k);
    let bw: Vec<Scalar> = b.iter().map(|c| c.with_bits(wide)).collect();
    QuotientRing::new(&p.with_bits(wide))
        .leading(&bw, k)
        .into_iter()
        .map(|c| c.with_bits(bits))
        .collect()
}

/// `q(y) = ∏ (y − T(x_i))`, computed from traces in `K[x]/(p)`.
pub fn transform(p: &MonicPoly, t: &Transformation) -> MonicPoly {
    MonicPoly::new(leading_coefficients(p, t.b(), p.n())).expect("n ≥ 1")
}

/// `T(C_p) = Σ b_j C_p^j` by Horner.
pub fn transform_matrix(p: &MonicPoly, b: &[Scalar]) -> Matrix {
    let c = companion_matrix(p);
    let n = p.n();
    let bits = p.bits();
    let mut m = Matrix::zeros(n, n, bits);
    for bj in b.iter().rev() {
        m = m.mul(&c);
        for i in 0..n {
            m[(i, i)] += bj;
        }
    }
    m
}

/// Independent route: characteristic polynomial of `T(C_p)`.
pub fn transform_via_companion(p: &MonicPoly, t: &Transformation) -> MonicPoly {
    let m = transform_matrix(p, t.b());
    MonicPoly::from_unipoly(&m.charpoly()).expect("n ≥ 1")
}

/// Independent route for `A_1..A_k`: traces of powers of `T(C_p)`.
pub fn leading_via_companion(p: &MonicPoly, b: &[Scalar], k: usize) -> Vec<Scalar> {
    let m = transform_matrix(p, b);
    let mut cur = m.clone();
    let mut s = Vec::with_capacity(k);
    for i in 1..=k {
        if i > 1 {
            cur = cur.mul(&m);
        }
        s.push(cur.trace());
    }
    newton_e_from_p(&s)
        .into_iter()
        .enumerate()
        .map(|(i, e)| if i % 2 == 0 { -e } else { e })
        .collect()
}

/// Relative sizes `|A_i| / max(1, R)^i`, `i ≤ k`, where `R = max_{j>k}
/// |A_j|^{1/j}` measures the untouched tail of `q`.
pub fn relative_residuals(q: &MonicPoly, k: usize) -> Vec<f64> {
    let n = q.n();
    let log_r = (k + 1..=n)
        .map(|j| q.coeff(j).log2_mag() / j as f64)
        .fold(0.0f64, f64::max);
    (1..=k.min(n))
        .map(|i| (q.coeff(i).log2_mag() - i as f64 * log_r).exp2())
        .collect()
}
