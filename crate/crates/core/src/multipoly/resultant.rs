use super::poly::MultiPoly;
use crate::error::{Error, Result};
use crate::numeric::{vec_norm, Matrix, Scalar, UniPoly};

/// Polynomial in `x` with coefficients that are polynomials in `y`:
/// `f = Σ_i cx[i](y) x^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    cx: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(mut cx: Vec<UniPoly>) -> Self {
        while cx.last().is_some_and(UniPoly::is_zero) {
            cx.pop();
        }
        BiPoly { cx }
    }

    /// From a dense grid `c[i][j]` = coefficient of `x^i y^j`.
    pub fn from_grid(c: Vec<Vec<Scalar>>) -> Self {
        Self::new(c.into_iter().map(UniPoly::new).collect())
    }

    /// Dehomogenizes a ternary form by setting the variable other than `x`
    /// and `y` to one.
    pub fn from_ternary(f: &MultiPoly, x: usize, y: usize) -> Self {
        assert_eq!(f.nvars(), 3);
        let d = f.degree();
        let bits = f.bits();
        let mut grid = vec![vec![Scalar::zero(bits); d + 1]; d + 1];
        for (e, c) in f.terms() {
            grid[e[x] as usize][e[y] as usize] += c;
        }
        Self::from_grid(grid)
    }

    pub fn is_zero(&self) -> bool {
        self.cx.is_empty()
    }

    pub fn deg_x(&self) -> usize {
        self.cx.len().saturating_sub(1)
    }

    pub fn deg_y(&self) -> usize {
        self.cx.iter().map(|c| if c.is_zero() { 0 } else { c.degree() }).max().unwrap_or(0)
    }

    pub fn coeffs_x(&self) -> &[UniPoly] {
        &self.cx
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        self.eval_y(y).eval(x)
    }

    /// Univariate slice `f(·, y)`.
    pub fn eval_y(&self, y: &Scalar) -> UniPoly {
        UniPoly::new(self.cx.iter().map(|c| c.eval(y)).collect())
    }

    /// Partial derivatives `(∂f/∂x, ∂f/∂y)` at a point.
    pub fn gradient(&self, x: &Scalar, y: &Scalar) -> (Scalar, Scalar) {
        let slice = self.eval_y(y);
        let fx = slice.derivative().eval(x);
        let dy = UniPoly::new(self.cx.iter().map(|c| c.derivative().eval(y)).collect());
        (fx, dy.eval(x))
    }
}

fn sylvester(a: &[Scalar], b: &[Scalar], bits: usize) -> Matrix {
    // a, b lowest degree first
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut s = Matrix::zeros(size, size, bits);
    for r in 0..n {
        for (i, c) in a.iter().rev().enumerate() {
            s[(r, r + i)] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in b.iter().rev().enumerate() {
            s[(n + r, r + i)] = c.clone();
        }
    }
    s
}

/// `Res_x(f, g)` as a polynomial in `y`.
///
/// The Sylvester determinant is sampled at roots of unity and recovered by
/// an inverse DFT; the sample count is one more than the degree bound
/// `deg_x f · deg_y g + deg_y f · deg_x g`.
pub fn resultant_bivariate(f: &BiPoly, g: &BiPoly, tol: f64) -> Result<UniPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::DomainError("resultant of a zero polynomial".into()));
    }
    let (m, n) = (f.deg_x(), g.deg_x());
    let bits = f.cx.iter().chain(&g.cx).map(UniPoly::bits).max().unwrap_or(64);
    if m == 0 && n == 0 {
        return Ok(UniPoly::constant(Scalar::one(bits)));
    }
    let dbound = m * g.deg_y() + f.deg_y() * n;
    let npts = dbound + 1;
    let mut samples = Vec::with_capacity(npts);
    let mut hadamard: f64 = 0.0;
    for k in 0..npts {
        let y = Scalar::root_of_unity(k, npts, bits);
        let a: Vec<Scalar> = f.cx.iter().map(|c| c.eval(&y)).collect();
        let b: Vec<Scalar> = g.cx.iter().map(|c| c.eval(&y)).collect();
        let s = sylvester(&a, &b, bits);
        let h: f64 = (0..s.rows()).map(|r| vec_norm(s.row(r)).max(f64::MIN_POSITIVE).ln()).sum();
        hadamard = hadamard.max(h);
        samples.push(s.det());
    }
    let peak = samples.iter().map(Scalar::mag).fold(0.0, f64::max);
    if peak == 0.0 || peak.ln() <= tol.ln() + hadamard {
        return Err(Error::IdenticallyZero);
    }
    let mut coeffs = Vec::with_capacity(npts);
    for j in 0..npts {
        let mut acc = Scalar::zero(bits);
        for (k, s) in samples.iter().enumerate() {
            let w = Scalar::root_of_unity((npts - (j * k) % npts) % npts, npts, bits);
            acc += &(s * &w);
        }
        coeffs.push(acc.div_int(npts as i64));
    }
    // rounding noise from the determinants would split multiple roots
    let floor = (8.0 - bits as f64) * std::f64::consts::LN_2 + hadamard.max(peak.ln());
    for c in &mut coeffs {
        if !c.is_zero() && c.mag().ln() <= floor {
            *c = Scalar::zero(bits);
        }
    }
    Ok(UniPoly::new(coeffs).trim_rel(tol))
}
