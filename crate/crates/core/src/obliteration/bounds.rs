use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of equations of each degree, highest degree first:
/// `counts[0] = n_k`, …, `counts[k−1] = n_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeProfile {
    counts: Vec<usize>,
}

impl DegreeProfile {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Parse("a degree profile needs k ≥ 1".into()));
        }
        Ok(DegreeProfile { counts })
    }

    /// Profile of a list of equation degrees (all ≥ 1).
    pub fn from_degrees(degrees: &[usize]) -> Self {
        let k = degrees.iter().copied().max().unwrap_or(1).max(1);
        let mut counts = vec![0; k];
        for &d in degrees {
            assert!(d >= 1, "equations of degree 0 have no place in a profile");
            counts[k - d] += 1;
        }
        DegreeProfile { counts }
    }

    /// One equation of each degree `1..=k`.
    pub fn staircase(k: usize) -> Self {
        DegreeProfile { counts: vec![1; k.max(1)] }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `k`, the largest degree the profile has a slot for.
    pub fn k(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, degree: usize) -> usize {
        if degree == 0 || degree > self.k() {
            0
        } else {
            self.counts[self.k() - degree]
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Largest degree with a nonzero count, 0 for an empty system.
    pub fn max_degree(&self) -> usize {
        self.counts
            .iter()
            .position(|&c| c > 0)
            .map_or(0, |i| self.k() - i)
    }

    /// Drops leading zero counts, keeping at least one slot.
    pub fn trimmed(&self) -> Self {
        let start = self.counts.iter().position(|&c| c > 0).unwrap_or(self.k() - 1);
        DegreeProfile {
            counts: self.counts[start..].to_vec(),
        }
    }

    /// The profile of the conditions on `P` for the line `P + λQ`, after
    /// one top-degree equation is held aside:
    /// `m_k = n_k − 1`, `m_i = n_k + … + n_i`.
    pub fn derived(&self) -> Self {
        let t = self.trimmed();
        let mut acc = 0;
        let mut m: Vec<usize> = t
            .counts
            .iter()
            .map(|&c| {
                acc += c;
                acc
            })
            .collect();
        m[0] = m[0].saturating_sub(1);
        DegreeProfile { counts: m }.trimmed()
    }

    /// Same profile with one equation of the highest degree removed.
    pub fn without_top(&self) -> Self {
        let mut t = self.trimmed();
        t.counts[0] = t.counts[0].saturating_sub(1);
        t.trimmed()
    }
}

impl fmt::Display for DegreeProfile {
    /// `"3:1,2:0,1:0"`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{}:{}", self.k() - i, c))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for DegreeProfile {
    type Err = Error;

    /// Comma-separated `degree:count` pairs in any order; unlisted degrees
    /// below the largest count as zero.
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (d, c) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected degree:count, got {part:?}")))?;
            let d: usize = d.trim().parse().map_err(|_| Error::Parse(format!("bad degree {d:?}")))?;
            let c: usize = c.trim().parse().map_err(|_| Error::Parse(format!("bad count {c:?}")))?;
            if d == 0 {
                return Err(Error::Parse("degree must be at least 1".into()));
            }
            pairs.push((d, c));
        }
        let k = pairs.iter().map(|&(d, _)| d).max().ok_or_else(|| Error::Parse("empty profile".into()))?;
        let mut counts = vec![0; k];
        for (d, c) in pairs {
            counts[k - d] += c;
        }
        Ok(DegreeProfile { counts })
    }
}

/// Smallest projective dimension `N` such that a line on any system with
/// this profile can be found in `P^N` without solving above its degree.
///
/// `[n_k, …, n_1] = 1 + [m_k, …, m_1]` until only linears remain, then
/// `[m] = m + 1`.
pub fn line_bound(profile: &DegreeProfile) -> usize {
    let t = profile.trimmed();
    if t.k() == 1 {
        return t.counts[0] + 1;
    }
    1 + line_bound(&t.derived())
}

/// Smallest `N` for a point: hold one top-degree equation aside and ask for
/// a line on the rest.
pub fn point_bound(profile: &DegreeProfile) -> usize {
    if profile.total() == 0 {
        return 0;
    }
    line_bound(&profile.without_top())
}

/// `⌈C(d+k, k)/(k+1)⌉ + k`: past this dimension every degree-`d`
/// hypersurface contains a `k`-plane. Quoted for `d > 3` only.
pub fn existence_bound_k_plane(d: usize, k: usize) -> Result<usize> {
    if d <= 3 {
        return Err(Error::DomainError(format!("the k-plane existence bound is stated for d > 3, got d = {d}")));
    }
    if k == 0 {
        return Err(Error::DomainError("k must be at least 1".into()));
    }
    let c = binomial(d + k, k);
    Ok(c.div_ceil(k as u128 + 1) as usize + k)
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
