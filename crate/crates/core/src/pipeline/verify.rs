use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Certificate, Locus, CERT_FORMAT};
use crate::geometry::LinearSubspace;
use crate::numeric::{normalize, orthonormalize, PrecisionConfig, Scalar};
use crate::obliteration::{Equation, SLACK};
use crate::transform::{coefficient_functional, leading_coefficients, relative_residuals, transform, MonicPoly};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Rechecks a certificate from scratch: the residuals are recomputed from
/// the input and the transformation alone, chain containments by
/// substituting each subspace into the symbolically expanded `A_i`, and
/// the solve log against the variant's caps. Never fails; problems are
/// report entries.
pub fn verify_certificate(cert: &Certificate, cfg: &PrecisionConfig) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let tol = cfg.tol_rel;
    let bits = cfg.bits;
    rep.push(
        "format",
        cert.format == CERT_FORMAT,
        format!("{:?}", cert.format),
    );

    let p = cert.input.with_bits(bits);
    let t = cert.transformation.with_bits(bits);
    let n = p.n();
    let k = cert.k;
    rep.push(
        "non-illusory",
        t.n() == n && t.b().iter().any(|c| !c.is_zero()) && t.degree() < n,
        format!("deg T = {} for n = {n}", t.degree()),
    );
    if t.n() != n || k == 0 || k > n {
        rep.push("shape", false, format!("k = {k}, n = {n}, len b = {}", t.n()));
        return rep;
    }

    let q = transform(&p, &t);
    let res = relative_residuals(&q, k);
    let worst = res.iter().cloned().fold(0.0, f64::max);
    rep.push("residuals", worst <= tol, format!("max |A_i| = {worst:.3e} (tol {tol:.1e})"));

    let recorded = cert.residuals.len() == k && cert.residuals.iter().all(|&r| r <= tol);
    rep.push("recorded-residuals", recorded, format!("{:?}", cert.residuals));

    let drift = coefficient_drift(&q, &cert.transformed.with_bits(bits));
    rep.push(
        "transformed",
        drift <= SLACK * tol,
        format!("largest relative coefficient difference {drift:.3e}"),
    );

    check_chain(cert, &p, &t.b().to_vec(), tol, &mut rep);

    let log = &cert.solve_log;
    let cap = cert.variant.degree_cap(k);
    let max = log.recomputed_max();
    rep.push(
        "solve-degree",
        max <= cap && log.max_degree() == max,
        format!("max logged degree {max} (recorded {}), cap {cap}", log.max_degree()),
    );
    let gcap = cert.variant.geometry_cap(k);
    let gmax = log.max_degree_in("geometry");
    rep.push(
        "geometry-degree",
        gmax <= gcap,
        format!("max geometry-stage degree {gmax}, cap {gcap}"),
    );
    rep
}

fn coefficient_drift(a: &MonicPoly, b: &MonicPoly) -> f64 {
    if a.n() != b.n() {
        return f64::INFINITY;
    }
    (1..=a.n())
        .map(|i| (a.coeff(i) - b.coeff(i)).mag() / a.coeff(i).mag().max(1.0))
        .fold(0.0, f64::max)
}

fn check_chain(cert: &Certificate, p: &MonicPoly, b: &[Scalar], tol: f64, rep: &mut VerificationReport) {
    let lim = SLACK * tol;
    let mut prev: Option<LinearSubspace> = None;
    for (idx, step) in cert.chain.iter().enumerate() {
        let name = format!("chain[{idx}] {}", step.label);
        if step.vanishing.iter().any(|&i| i == 0 || i > p.n()) {
            rep.push(&name, false, format!("bad coefficient indices {:?}", step.vanishing));
            continue;
        }
        match &step.locus {
            Locus::Subspace { subspace } => {
                let bad: Vec<usize> = step
                    .vanishing
                    .iter()
                    .copied()
                    .filter(|&i| !subspace.lies_on(&coefficient_functional(p, i).expand(), lim))
                    .collect();
                let nested = prev.as_ref().map_or(true, |s| within(subspace.basis(), s, tol));
                rep.push(
                    &name,
                    bad.is_empty() && nested,
                    format!("P^{} where {:?} vanish; failing {bad:?}; nested {nested}", subspace.dim(), step.vanishing),
                );
                prev = Some(subspace.clone());
            }
            Locus::Point { point } => {
                let x = normalize(point.coords());
                let top = step.vanishing.iter().copied().max().unwrap_or(0);
                let vals = leading_coefficients(p, &x, top);
                let bad: Vec<usize> = step
                    .vanishing
                    .iter()
                    .copied()
                    .filter(|&i| {
                        let scale = Equation::oracle(Arc::new(coefficient_functional(p, i))).scale();
                        vals[i - 1].mag() > lim * scale
                    })
                    .collect();
                let nested = prev.as_ref().map_or(true, |s| within(&[x.clone()], s, tol));
                let same = point.distance(&crate::obliteration::ProjPoint::new(b.to_vec()).expect("nonzero")) <= tol.sqrt();
                rep.push(
                    &name,
                    bad.is_empty() && nested && same,
                    format!("failing {bad:?}; nested {nested}; equals T {same}"),
                );
            }
        }
    }
}

fn within(vs: &[Vec<Scalar>], s: &LinearSubspace, tol: f64) -> bool {
    let q = orthonormalize(s.basis(), 0.0);
    vs.iter().all(|v| {
        let mut all = q.clone();
        all.push(v.clone());
        orthonormalize(&all, tol.sqrt()).len() == q.len()
    })
}
