use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bounds::binomial;
use crate::error::Result;
use crate::multipoly::{interpolate_homogeneous, LinearMap, MultiPoly};
use crate::numeric::{normalize, Context, Scalar, UniPoly};
use crate::transform::CoefficientFunctional;

/// A homogeneous form known only through evaluation.
pub trait Form: Send + Sync + fmt::Debug {
    fn nvars(&self) -> usize;
    fn degree(&self) -> usize;
    fn evaluate(&self, x: &[Scalar]) -> Scalar;
}

impl Form for MultiPoly {
    fn nvars(&self) -> usize {
        MultiPoly::nvars(self)
    }
    fn degree(&self) -> usize {
        MultiPoly::degree(self)
    }
    fn evaluate(&self, x: &[Scalar]) -> Scalar {
        MultiPoly::evaluate(self, x)
    }
}

impl Form for CoefficientFunctional {
    fn nvars(&self) -> usize {
        CoefficientFunctional::nvars(self)
    }
    fn degree(&self) -> usize {
        CoefficientFunctional::degree(self)
    }
    fn evaluate(&self, x: &[Scalar]) -> Scalar {
        CoefficientFunctional::evaluate(self, x)
    }
}

/// `g ∘ M`
#[derive(Debug)]
struct Restricted {
    inner: Arc<dyn Form>,
    map: LinearMap,
}

impl Form for Restricted {
    fn nvars(&self) -> usize {
        self.map.nvars_in()
    }
    fn degree(&self) -> usize {
        self.inner.degree()
    }
    fn evaluate(&self, x: &[Scalar]) -> Scalar {
        self.inner.evaluate(&self.map.apply(x))
    }
}

/// `P ↦ [λ^j] g(P + λQ)`, read off from `d+1` samples on the circle.
#[derive(Debug)]
struct Derived {
    inner: Arc<dyn Form>,
    q: Vec<Scalar>,
    j: usize,
    unity: Vec<Scalar>,
}

impl Form for Derived {
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }
    fn degree(&self) -> usize {
        self.inner.degree() - self.j
    }
    fn evaluate(&self, x: &[Scalar]) -> Scalar {
        let n = self.unity.len();
        let bits = x.iter().map(Scalar::bits).max().unwrap_or(64);
        let mut acc = Scalar::zero(bits);
        for t in 0..n {
            let w = &self.unity[t];
            let y: Vec<Scalar> = x.iter().zip(&self.q).map(|(a, b)| a + &(w * b)).collect();
            let back = &self.unity[(n - (t * self.j) % n) % n];
            acc += &(&self.inner.evaluate(&y) * back);
        }
        acc.div_int(n as i64)
    }
}

/// An equation of a polynomial system, either with explicit coefficients or
/// as an evaluation oracle.
///
/// `scale` is a typical modulus on the unit sphere; residuals are measured
/// against it.
#[derive(Clone, Debug)]
pub enum Equation {
    Explicit { poly: MultiPoly, scale: f64 },
    Oracle { form: Arc<dyn Form>, scale: f64 },
}

/// Oracles with at most this many monomials are expanded eagerly.
const EXPAND_BUDGET: u128 = 1500;

impl Equation {
    pub fn explicit(poly: MultiPoly) -> Self {
        let scale = sampled_scale(&poly);
        Equation::Explicit { poly, scale }
    }

    pub fn oracle(form: Arc<dyn Form>) -> Self {
        let scale = sampled_scale(form.as_ref());
        Equation::Oracle { form, scale }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Equation::Explicit { poly, .. } => poly.nvars(),
            Equation::Oracle { form, .. } => form.nvars(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Equation::Explicit { poly, .. } => poly.degree(),
            Equation::Oracle { form, .. } => form.degree(),
        }
    }

    pub fn scale(&self) -> f64 {
        match self {
            Equation::Explicit { scale, .. } | Equation::Oracle { scale, .. } => *scale,
        }
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        match self {
            Equation::Explicit { poly, .. } => Some(poly),
            Equation::Oracle { .. } => None,
        }
    }

    pub fn evaluate(&self, x: &[Scalar]) -> Scalar {
        match self {
            Equation::Explicit { poly, .. } => poly.evaluate(x),
            Equation::Oracle { form, .. } => form.evaluate(x),
        }
    }

    /// `|g(x)| / (scale · ‖x‖^d)`.
    pub fn residual(&self, x: &[Scalar]) -> f64 {
        let u = normalize(x);
        let s = self.scale();
        let v = self.evaluate(&u).mag();
        if s == 0.0 {
            v
        } else {
            v / s
        }
    }

    /// Pullback along `M`: the equation in the coordinates of `M`'s domain.
    pub fn restrict(&self, map: &LinearMap) -> Self {
        match self {
            Equation::Explicit { poly, .. } => Equation::explicit(poly.substitute_linear(map)),
            Equation::Oracle { form, .. } => Equation::oracle(Arc::new(Restricted {
                inner: form.clone(),
                map: map.clone(),
            })),
        }
    }

    /// The coefficient of `λ^j` in `g(P + λQ)`, as an equation in `P`.
    pub fn derived(&self, q: &[Scalar], j: usize) -> Self {
        assert!(j <= self.degree());
        match self {
            Equation::Explicit { poly, .. } => {
                let mut g = poly.clone();
                for _ in 0..j {
                    g = g.directional_derivative(q);
                }
                let mut fact = 1i64;
                for i in 2..=j as i64 {
                    fact *= i;
                }
                if fact > 1 {
                    g = g.scale(&Scalar::one(g.bits().max(64)).div_int(fact));
                }
                Equation::explicit(g)
            }
            Equation::Oracle { form, .. } => {
                if j == 0 {
                    return self.clone();
                }
                let d = form.degree();
                let bits = q.iter().map(Scalar::bits).max().unwrap_or(64);
                Equation::oracle(Arc::new(Derived {
                    inner: form.clone(),
                    q: q.to_vec(),
                    j,
                    unity: unity(d + 1, bits),
                }))
            }
        }
    }

    /// `t ↦ g(a + t·b)`, a polynomial of degree at most `d`.
    pub fn on_line(&self, a: &[Scalar], b: &[Scalar]) -> UniPoly {
        let d = self.degree();
        let bits = a.iter().chain(b).map(Scalar::bits).max().unwrap_or(64);
        let w = unity(d + 1, bits);
        let samples: Vec<Scalar> = w
            .iter()
            .map(|w| {
                let x: Vec<Scalar> = a.iter().zip(b).map(|(u, v)| u + &(w * v)).collect();
                self.evaluate(&x)
            })
            .collect();
        let coeffs = (0..=d)
            .map(|j| {
                let mut acc = Scalar::zero(bits);
                for (t, s) in samples.iter().enumerate() {
                    let e = (d + 1 - (t * j) % (d + 1)) % (d + 1);
                    acc += &(s * &w[e]);
                }
                acc.div_int(d as i64 + 1)
            })
            .collect();
        UniPoly::new(coeffs)
    }

    /// Whether eager expansion is cheap enough.
    pub fn worth_expanding(&self) -> bool {
        let d = self.degree();
        d <= 2 || binomial(self.nvars() + d - 1, d) <= EXPAND_BUDGET
    }

    /// Converts an oracle to explicit coefficients by interpolation.
    pub fn expand(&self, ctx: &mut Context) -> Result<Self> {
        match self {
            Equation::Explicit { .. } => Ok(self.clone()),
            Equation::Oracle { form, .. } => {
                let poly = interpolate_homogeneous(|x: &[Scalar]| form.evaluate(x), form.degree(), form.nvars(), ctx)?;
                Ok(Equation::explicit(poly))
            }
        }
    }

    /// Expands when [`Equation::worth_expanding`] says so.
    pub fn settle(self, ctx: &mut Context) -> Result<Self> {
        if matches!(self, Equation::Oracle { .. }) && self.worth_expanding() {
            self.expand(ctx)
        } else {
            Ok(self)
        }
    }
}

impl From<MultiPoly> for Equation {
    fn from(p: MultiPoly) -> Self {
        Equation::explicit(p)
    }
}

fn unity(n: usize, bits: usize) -> Vec<Scalar> {
    (0..n).map(|k| Scalar::root_of_unity(k, n, bits)).collect()
}

/// Largest `|g|` over a few fixed points of the unit sphere.
fn sampled_scale(g: &dyn Form) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1e);
    let n = g.nvars();
    let bits = 128;
    let mut best: f64 = 0.0;
    for _ in 0..3 {
        let x: Vec<Scalar> = (0..n)
            .map(|_| Scalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), bits))
            .collect();
        best = best.max(g.evaluate(&normalize(&x)).mag());
    }
    best
}
