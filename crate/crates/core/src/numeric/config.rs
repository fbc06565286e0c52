use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Working precision, tolerance policy and randomness seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    pub bits: usize,
    pub tol_rel: f64,
    pub max_retries: usize,
    pub seed: u64,
}

impl PrecisionConfig {
    pub fn new(bits: usize, tol_rel: f64, max_retries: usize, seed: u64) -> Result<Self> {
        let cfg = PrecisionConfig {
            bits,
            tol_rel,
            max_retries,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `bits` of precision with the default tolerance `2^(-3·bits/8)`.
    pub fn with_bits(bits: usize) -> Self {
        PrecisionConfig {
            bits,
            tol_rel: default_tol(bits),
            max_retries: 4,
            seed: 0,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn tol(mut self, tol_rel: f64) -> Self {
        self.tol_rel = tol_rel;
        self
    }

    pub fn retries(mut self, max_retries: usize) -> Self {
        self.max_retries = max_retries;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits < 64 {
            return Err(Error::InvalidConfig(format!("bits = {} < 64", self.bits)));
        }
        if !(self.tol_rel > 0.0) {
            return Err(Error::InvalidConfig(format!("tol_rel = {} must be positive", self.tol_rel)));
        }
        if self.max_retries < 1 {
            return Err(Error::InvalidConfig("max_retries must be at least 1".into()));
        }
        Ok(())
    }

    /// Same configuration at twice the precision.
    pub fn escalated(&self) -> Self {
        PrecisionConfig {
            bits: self.bits * 2,
            ..self.clone()
        }
    }

    /// Unit roundoff `2^-bits`.
    pub fn eps(&self) -> f64 {
        (-(self.bits as f64)).exp2()
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self::with_bits(256)
    }
}

pub fn default_tol(bits: usize) -> f64 {
    (-(3.0 * bits as f64 / 8.0)).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PrecisionConfig::new(32, 1e-10, 1, 0).is_err());
        assert!(PrecisionConfig::new(128, 0.0, 1, 0).is_err());
        assert!(PrecisionConfig::new(128, 1e-10, 0, 0).is_err());
        assert!(PrecisionConfig::new(128, 1e-10, 1, 0).is_ok());
    }

    #[test]
    fn escalation_doubles_bits() {
        let c = PrecisionConfig::with_bits(256).seed(9);
        let e = c.escalated();
        assert_eq!(e.bits, 512);
        assert_eq!(e.seed, 9);
        assert_eq!(e.tol_rel, c.tol_rel);
    }
}
