//! End-to-end term removal with checkable certificates.
//!
//! Every entry point takes a [`PrecisionConfig`] and builds its own
//! [`Context`], so identical inputs, seeds and precisions give identical
//! certificates.

mod bring;
mod chain;
mod remove;
mod verify;


use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LinearSubspace;
use crate::numeric::{Context, PrecisionConfig, Scalar, SolveLog};
use crate::obliteration::ProjPoint;
use crate::transform::{MonicPoly, Transformation};

pub use bring::{bring_reduce, quintic_solve_demo, QuinticSolution};
pub use remove::{remove4_chain, remove5, remove_terms_generic};
pub use verify::{verify_certificate, CheckResult, VerificationReport};

/// Format tag embedded in every serialized certificate.
pub const CERT_FORMAT: &str = "tf-cert/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Generic,
    Strict,
    Segre,
}

impl Variant {
    /// Largest solve degree a certificate of this variant may log.
    pub fn degree_cap(self, k: usize) -> usize {
        match self {
            Variant::Generic => k,
            Variant::Strict | Variant::Segre => 20,
        }
    }

    /// Cap for the solves logged under the `geometry` stage.
    pub fn geometry_cap(self, k: usize) -> usize {
        match self {
            Variant::Generic => k,
            Variant::Strict => 3,
            Variant::Segre => 5,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Generic => "generic",
            Variant::Strict => "strict",
            Variant::Segre => "segre",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Variant::Generic),
            "strict" => Ok(Variant::Strict),
            "segre" => Ok(Variant::Segre),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

/// Where a chain step lives in the space of transformation coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Locus {
    Subspace { subspace: LinearSubspace },
    Point { point: ProjPoint },
}

/// One link of the chain: a locus on which `A_i` vanishes for every `i`
/// listed in `vanishing`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub label: String,
    pub vanishing: Vec<usize>,
    #[serde(flatten)]
    pub locus: Locus,
}

impl ChainStep {
    pub fn subspace(label: &str, vanishing: Vec<usize>, basis: Vec<Vec<Scalar>>) -> Result<Self> {
        Ok(ChainStep {
            label: label.to_string(),
            vanishing,
            locus: Locus::Subspace {
                subspace: LinearSubspace::new(basis)?,
            },
        })
    }

    pub fn point(label: &str, vanishing: Vec<usize>, x: Vec<Scalar>) -> Result<Self> {
        Ok(ChainStep {
            label: label.to_string(),
            vanishing,
            locus: Locus::Point {
                point: ProjPoint::new(x)?,
            },
        })
    }
}

/// Everything needed to check a term removal after the fact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub input: MonicPoly,
    pub k: usize,
    pub variant: Variant,
    pub precision: PrecisionConfig,
    pub chain: Vec<ChainStep>,
    pub transformation: Transformation,
    pub transformed: MonicPoly,
    pub solve_log: SolveLog,
    pub residuals: Vec<f64>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Certificate = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if c.format != CERT_FORMAT {
            return Err(Error::Parse(format!("unsupported certificate format {:?}", c.format)));
        }
        Ok(c)
    }
}

/// `z⁵ + A·z + 1`, reached from `y⁵ + A₄y + A₅` by `y = s·z` with
/// `s⁵ = A₅`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BringForm {
    pub a: Scalar,
    pub scale: Scalar,
}

impl BringForm {
    /// Normalizes `y⁵ + A₄y + A₅`, logging the fifth root of `A₅` as a
    /// degree-5 solve. The principal branch is taken.
    pub fn from_reduced(a4: &Scalar, a5: &Scalar, ctx: &mut Context) -> Result<Self> {
        if a5.is_zero() {
            return Err(Error::GenericityFailure("A5 vanishes, no Bring normalization".into()));
        }
        let bits = ctx.bits();
        let mut c = vec![Scalar::zero(bits); 6];
        c[0] = -a5;
        c[5] = Scalar::one(bits);
        let roots = ctx.solve(&crate::numeric::UniPoly::new(c), "fifth-root")?;
        let (re, im) = a5.to_c64();
        let target = im.atan2(re) / 5.0;
        let s = roots
            .into_iter()
            .map(|r| r.value)
            .min_by(|x, y| {
                let ang = |z: &Scalar| {
                    let (r, i) = z.to_c64();
                    let d = i.atan2(r) - target;
                    d.sin().abs() + (1.0 - d.cos())
                };
                ang(x).total_cmp(&ang(y))
            })
            .expect("five roots");
        let a = &(a4 * &s) / a5;
        Ok(BringForm { a, scale: s })
    }

    /// `z⁵ + A·z + 1`
    pub fn quintic(&self) -> MonicPoly {
        let bits = self.a.bits();
        let z = Scalar::zero(bits);
        MonicPoly::new(vec![z.clone(), z.clone(), z, self.a.clone(), Scalar::one(bits)]).expect("degree five")
    }

    /// `y⁵ + A·s⁴·y + s⁵`, the quintic before normalization.
    pub fn denormalized(&self) -> MonicPoly {
        let bits = self.a.bits();
        let z = Scalar::zero(bits);
        let a4 = &self.a * &self.scale.powi(4);
        MonicPoly::new(vec![z.clone(), z.clone(), z, a4, self.scale.powi(5)]).expect("degree five")
    }
}

/// Runs `f`, doubling the precision after failures that ask for it.
pub fn with_escalation<T>(cfg: &PrecisionConfig, mut f: impl FnMut(&PrecisionConfig) -> Result<T>) -> Result<T> {
    let mut cfg = cfg.clone();
    let mut last = None;
    for _ in 0..3 {
        match f(&cfg) {
            Err(e) if e.wants_more_precision() => {
                last = Some(e);
                cfg = cfg.escalated();
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

pub(crate) fn certificate(
    input: &MonicPoly,
    k: usize,
    variant: Variant,
    ctx: &Context,
    chain: Vec<ChainStep>,
    transformation: Transformation,
    transformed: MonicPoly,
    residuals: Vec<f64>,
) -> Certificate {
    let mut solve_log = ctx.log.clone();
    solve_log.set_stage("");
    Certificate {
        format: CERT_FORMAT.to_string(),
        input: input.clone(),
        k,
        variant,
        precision: ctx.cfg.clone(),
        chain,
        transformation,
        transformed,
        solve_log,
        residuals,
    }
}
