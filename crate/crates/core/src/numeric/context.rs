use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::PrecisionConfig;
use super::log::SolveLog;
use super::roots::{roots_univariate, Root};
use super::scalar::Scalar;
use super::unipoly::UniPoly;
use crate::error::Result;

/// One solver instance: configuration, seeded randomness and the solve log.
///
/// Instances are not meant to be shared; concurrent work needs one each.
pub struct Context {
    pub cfg: PrecisionConfig,
    pub log: SolveLog,
    rng: ChaCha8Rng,
}

impl Context {
    pub fn new(cfg: PrecisionConfig) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Context {
            cfg,
            log: SolveLog::new(),
            rng,
        }
    }

    pub fn bits(&self) -> usize {
        self.cfg.bits
    }

    pub fn tol(&self) -> f64 {
        self.cfg.tol_rel
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.cfg.bits)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(self.cfg.bits)
    }

    /// Real and imaginary parts uniform in `[-1, 1)`.
    pub fn random_scalar(&mut self) -> Scalar {
        let (r, i) = (self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0));
        Scalar::new(r, i, self.cfg.bits)
    }

    /// A point of modulus exactly one, `(1 − t² + 2it)/(1 + t²)`.
    pub fn random_unit(&mut self) -> Scalar {
        let bits = self.cfg.bits;
        let t = Scalar::from_f64(self.rng.gen_range(-2.0..2.0), bits);
        let t2 = &t * &t;
        let one = Scalar::one(bits);
        let num = &(&one - &t2) + &(&Scalar::i(bits) * &t.mul_int(2));
        &num / &(&one + &t2)
    }

    pub fn random_vector(&mut self, n: usize) -> Vec<Scalar> {
        (0..n).map(|_| self.random_scalar()).collect()
    }

    pub fn random_index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Logged univariate solve.
    pub fn solve(&mut self, f: &UniPoly, label: &str) -> Result<Vec<Root>> {
        roots_univariate(f, &self.cfg, &mut self.log, label)
    }
}
