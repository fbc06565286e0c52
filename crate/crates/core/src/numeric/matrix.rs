use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::scalar::{Scalar, RM};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Dense row-major matrix of scalars.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, bits: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(bits); rows * cols],
        }
    }

    pub fn identity(n: usize, bits: usize) -> Self {
        let mut m = Self::zeros(n, n, bits);
        for i in 0..n {
            m[(i, i)] = Scalar::one(bits);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in cols {
                data.push(col[i].clone());
            }
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_f64(rows: &[&[f64]], bits: usize) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_f64(v, bits)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bits(&self) -> usize {
        self.data.iter().map(Scalar::bits).max().unwrap_or(64)
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.bits());
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let bits = self.bits().max(other.bits());
        let mut out = Self::zeros(self.rows, other.cols, bits);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += &t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        let bits = self.bits();
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(bits);
                for (k, x) in v.iter().enumerate() {
                    acc += &(&self[(i, k)] * x);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(Scalar::mag).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero(self.bits());
        for i in 0..self.rows.min(self.cols) {
            acc += &self[(i, i)];
        }
        acc
    }

    pub fn with_bits(&self, bits: usize) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.with_bits(bits)).collect(),
        }
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "det of a non-square matrix");
        let n = self.rows;
        let bits = self.bits();
        let mut a = self.clone();
        let mut det = Scalar::one(bits);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].mag().total_cmp(&a[(j, k)].mag()))
                .expect("nonempty");
            if a[(p, k)].is_zero() {
                return Scalar::zero(bits);
            }
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let piv = a[(k, k)].clone();
            let inv = piv.recip();
            for i in k + 1..n {
                let f = &a[(i, k)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let t = &f * &a[(k, j)];
                    a[(i, j)] -= &t;
                }
            }
            det *= &piv;
        }
        det
    }

    /// Solves `A x = b` for square `A`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let scale = self.norm_max();
        let tiny = scale * (-(self.bits() as f64) * 0.9).exp2();
        let mut a = self.clone();
        let mut x: Vec<Scalar> = b.to_vec();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].mag().total_cmp(&a[(j, k)].mag()))
                .expect("nonempty");
            if a[(p, k)].mag() <= tiny {
                return Err(Error::IllConditioned("singular linear system".into()));
            }
            if p != k {
                a.swap_rows(p, k);
                x.swap(p, k);
            }
            let inv = a[(k, k)].recip();
            for i in k + 1..n {
                let f = &a[(i, k)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let t = &f * &a[(k, j)];
                    a[(i, j)] -= &t;
                }
                let t = &f * &x[k];
                x[i] -= &t;
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k].clone();
            for j in k + 1..n {
                acc -= &(&a[(k, j)] * &x[j]);
            }
            x[k] = &acc / &a[(k, k)];
        }
        Ok(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Characteristic polynomial `det(xI − A)` by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> UniPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let bits = self.bits();
        let mut c = vec![Scalar::zero(bits); n + 1];
        c[n] = Scalar::one(bits);
        let mut m = Matrix::zeros(n, n, bits);
        for k in 1..=n {
            // M_k = A·M_{k−1} + c_{n−k+1}·I
            let mut next = self.mul(&m);
            for i in 0..n {
                next[(i, i)] += &c[n - k + 1];
            }
            m = next;
            let am = self.mul(&m);
            c[n - k] = -(am.trace().div_int(k as i64));
        }
        UniPoly::new(c)
    }
}

/// `Σ conj(a_i) b_i`
pub fn hdot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let bits = a.first().map_or(64, Scalar::bits);
    let mut acc = Scalar::zero(bits);
    for (x, y) in a.iter().zip(b) {
        acc += &(&x.conj() * y);
    }
    acc
}

/// Euclidean norm as `f64`.
pub fn vec_norm(v: &[Scalar]) -> f64 {
    let m = v.iter().map(Scalar::mag).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    v.iter().map(|x| (x.mag() / m).powi(2)).sum::<f64>().sqrt() * m
}

/// Scales to unit Euclidean norm, computed at full precision.
pub fn normalize(v: &[Scalar]) -> Vec<Scalar> {
    let bits = v.first().map_or(64, Scalar::bits);
    let mut acc = Scalar::zero(bits);
    for x in v {
        acc += &Scalar::from_real(x.norm_sqr(), bits);
    }
    let inv = acc.sqrt().recip();
    v.iter().map(|x| x * &inv).collect()
}

/// Orthonormal basis of the span of `vs` (modified Gram–Schmidt, twice),
/// dropping vectors that are dependent at level `tol`.
pub fn orthonormalize(vs: &[Vec<Scalar>], tol: f64) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for v in vs {
        let n0 = vec_norm(v);
        if n0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = hdot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= &(&c * qi);
                }
            }
        }
        if vec_norm(&w) <= tol * n0 {
            continue;
        }
        out.push(normalize(&w));
    }
    out
}

/// Orthonormal basis of the numerical null space of `m`.
///
/// Complete-pivot elimination stops once every remaining entry is at most
/// `tol · ‖M‖max`; free columns give the null vectors.
pub fn kernel_basis(m: &Matrix, tol: f64) -> Vec<Vec<Scalar>> {
    let (rows, cols) = (m.rows(), m.cols());
    let bits = m.bits();
    let scale = m.norm_max();
    if cols == 0 {
        return Vec::new();
    }
    if scale == 0.0 {
        return (0..cols)
            .map(|j| {
                let mut v = vec![Scalar::zero(bits); cols];
                v[j] = Scalar::one(bits);
                v
            })
            .collect();
    }
    let thresh = tol * scale;
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best = (rank, rank, -1.0);
        for i in rank..rows {
            for j in rank..cols {
                let v = a[(i, j)].mag();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= thresh {
            break;
        }
        let (pi, pj, _) = best;
        a.swap_rows(pi, rank);
        if pj != rank {
            for r in 0..rows {
                a.data.swap(r * cols + pj, r * cols + rank);
            }
            perm.swap(pj, rank);
        }
        let inv = a[(rank, rank)].recip();
        for j in rank..cols {
            a[(rank, j)] = &a[(rank, j)] * &inv;
        }
        for i in 0..rows {
            if i == rank {
                continue;
            }
            let f = a[(i, rank)].clone();
            if f.is_zero() {
                continue;
            }
            for j in rank..cols {
                let t = &f * &a[(rank, j)];
                a[(i, j)] -= &t;
            }
        }
        rank += 1;
    }
    let mut basis = Vec::new();
    for j in rank..cols {
        let mut v = vec![Scalar::zero(bits); cols];
        v[perm[j]] = Scalar::one(bits);
        for i in 0..rank {
            v[perm[i]] = -&a[(i, j)];
        }
        basis.push(v);
    }
    orthonormalize(&basis, 1e-3)
}

/// Eigenvalues of an upper Hessenberg matrix by shifted complex QR.
pub fn hessenberg_eigenvalues(h: &Matrix) -> Result<Vec<Scalar>> {
    let n = h.rows();
    let bits = h.bits();
    let eps = (-(bits as f64) + 4.0).exp2();
    let mut a = h.clone();
    let mut eig = Vec::with_capacity(n);
    let mut hi = n;
    let mut iters = 0usize;
    while hi > 0 {
        if hi == 1 {
            eig.push(a[(0, 0)].clone());
            break;
        }
        let mut lo = hi - 1;
        while lo > 0 {
            let s = a[(lo - 1, lo - 1)].mag() + a[(lo, lo)].mag();
            if a[(lo, lo - 1)].mag() <= eps * s.max(f64::MIN_POSITIVE) {
                a[(lo, lo - 1)] = Scalar::zero(bits);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eig.push(a[(hi - 1, hi - 1)].clone());
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        if iters > 60 * n {
            return Err(Error::NonConvergence { degree: n, bits });
        }
        let mu = if iters % 11 == 0 {
            // exceptional shift
            &a[(hi - 1, hi - 1)] + &Scalar::from_f64(a[(hi - 1, hi - 2)].mag() * 0.75, bits)
        } else {
            wilkinson_shift(
                &a[(hi - 2, hi - 2)],
                &a[(hi - 2, hi - 1)],
                &a[(hi - 1, hi - 2)],
                &a[(hi - 1, hi - 1)],
            )
        };
        for i in lo..hi {
            a[(i, i)] -= &mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi - 1 {
            let x = a[(k, k)].clone();
            let y = a[(k + 1, k)].clone();
            let r = Scalar::from_real(x.norm_sqr().add(&y.norm_sqr(), bits, RM).sqrt(bits, RM), bits);
            let (c, s) = if r.is_zero() {
                (Scalar::one(bits), Scalar::zero(bits))
            } else {
                (&x / &r, &y / &r)
            };
            let (cc, sc) = (c.conj(), s.conj());
            for j in k..hi {
                let u = a[(k, j)].clone();
                let v = a[(k + 1, j)].clone();
                a[(k, j)] = &(&cc * &u) + &(&sc * &v);
                a[(k + 1, j)] = &(&c * &v) - &(&s * &u);
            }
            rots.push((c, s));
        }
        for (idx, (c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            let top = (k + 2).min(hi - 1);
            for i in lo..=top {
                let u = a[(i, k)].clone();
                let v = a[(i, k + 1)].clone();
                a[(i, k)] = &(c * &u) + &(s * &v);
                a[(i, k + 1)] = &(&c.conj() * &v) - &(&s.conj() * &u);
            }
        }
        for i in lo..hi {
            a[(i, i)] += &mu;
        }
    }
    Ok(eig)
}

fn wilkinson_shift(a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> Scalar {
    let half_tr = (a + d).div_int(2);
    let det = &(a * d) - &(b * c);
    let disc = (&(&half_tr * &half_tr) - &det).sqrt();
    let l1 = &half_tr + &disc;
    let l2 = &half_tr - &disc;
    if (&l1 - d).mag() <= (&l2 - d).mag() {
        l1
    } else {
        l2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const B: usize = 192;

    fn random_matrix(r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::from_rows(
            (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| Scalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), B))
                        .collect()
                })
                .collect(),
        )
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        assert_eq!(kernel_basis(&Matrix::zeros(2, 2, B), 1e-30).len(), 2);
        assert!(kernel_basis(&Matrix::identity(3, B), 1e-30).is_empty());
    }

    #[test]
    fn kernel_of_gram_with_known_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(4, 5, &mut rng);
        let m = a.transpose().mul(&a);
        let k = kernel_basis(&m, 1e-30);
        assert_eq!(k.len(), 1);
        let r = m.mul_vec(&k[0]);
        assert!(vec_norm(&r) <= 1e-30 * m.norm_max());
        assert!((vec_norm(&k[0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn determinant_and_solve() {
        let m = Matrix::from_f64(&[&[2.0, 1.0], &[1.0, 3.0]], B);
        assert!((m.det().to_c64().0 - 5.0).abs() < 1e-40);
        let x = m.solve(&[Scalar::from_f64(3.0, B), Scalar::from_f64(5.0, B)]).unwrap();
        assert!((x[0].to_c64().0 - 0.8).abs() < 1e-40);
        assert!((x[1].to_c64().0 - 1.4).abs() < 1e-40);
    }

    #[test]
    fn charpoly_of_companion() {
        // x^2 - 3x + 2
        let c = Matrix::from_f64(&[&[0.0, -2.0], &[1.0, 3.0]], B);
        let p = c.charpoly();
        let v: Vec<f64> = p.coeffs().iter().map(|x| x.to_c64().0).collect();
        assert_eq!(v, vec![2.0, -3.0, 1.0]);
    }

    #[test]
    fn qr_eigenvalues_match_charpoly_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 6;
        let mut h = random_matrix(n, n, &mut rng);
        for i in 0..n {
            for j in 0..n {
                if i > j + 1 {
                    h[(i, j)] = Scalar::zero(B);
                }
            }
        }
        let cp = h.charpoly();
        let eig = hessenberg_eigenvalues(&h).unwrap();
        assert_eq!(eig.len(), n);
        for l in &eig {
            assert!(cp.eval(l).mag() < 1e-40, "residual {}", cp.eval(l).mag());
        }
    }
}
