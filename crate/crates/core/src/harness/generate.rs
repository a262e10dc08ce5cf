//! Seeded instance families.
//!
//! Every instance is drawn from `ChaCha8Rng::seed_from_u64(seed)`. Indices in
//! `[0, k)` use the multiply-shift map `(u64 * k) >> 64` and unit floats use
//! the top 53 bits of a `u64`, so ports that reproduce ChaCha8 reproduce the
//! instances bit for bit.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Alphabet, SymbolString, CANONICAL_SYMBOLS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    UniformRandom,
    SkewedRandom,
    UnaryAdversarial,
    CasePortfolio,
    NearIdentical,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::UniformRandom,
        Family::SkewedRandom,
        Family::UnaryAdversarial,
        Family::CasePortfolio,
        Family::NearIdentical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::UniformRandom => "uniform-random",
            Family::SkewedRandom => "skewed-random",
            Family::UnaryAdversarial => "unary-adversarial",
            Family::CasePortfolio => "case-portfolio",
            Family::NearIdentical => "near-identical",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Spec {
                field: "family",
                reason: format!("unknown family {s:?}"),
            })
    }
}

/// Symbol placement for the case-portfolio family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    #[default]
    Shuffled,
    Blocks,
}

impl FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shuffled" => Ok(Layout::Shuffled),
            "blocks" => Ok(Layout::Blocks),
            _ => Err(Error::Spec {
                field: "layout",
                reason: format!("unknown layout {s:?}"),
            }),
        }
    }
}

/// A fully determined instance: family, sizes, seed and family parameters.
///
/// * `skew`: symbol weights for skewed-random (default `1/(k+1)`).
/// * `edits`: substitutions for near-identical (default 1) and noise for
///   unary-adversarial (default `n/100`).
/// * `block`: block length for unary-adversarial (default `max(1, n/(4s))`).
/// * `alpha`, `layout`: `1(X) = 0(Y) = round(alpha·m)` for case-portfolio
///   (default 0.3, shuffled).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub s: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skew: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<Layout>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

fn spec_err(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Spec {
        field,
        reason: reason.into(),
    }
}

impl InstanceSpec {
    pub fn new(family: Family, n: usize, s: usize, seed: u64) -> Self {
        InstanceSpec {
            family,
            n,
            m: None,
            s,
            seed,
            skew: None,
            edits: None,
            block: None,
            layout: None,
            alpha: None,
        }
    }

    pub fn m(&self) -> usize {
        self.m.unwrap_or(self.n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(spec_err("n", "length must be at least 1"));
        }
        if self.m == Some(0) {
            return Err(spec_err("m", "length must be at least 1"));
        }
        if !(2..=CANONICAL_SYMBOLS.len()).contains(&self.s) {
            return Err(spec_err(
                "s",
                format!("alphabet size must be in 2..={}", CANONICAL_SYMBOLS.len()),
            ));
        }
        let m = self.m();
        match self.family {
            Family::UniformRandom => {}
            Family::SkewedRandom => {
                if let Some(w) = &self.skew {
                    if w.len() != self.s {
                        return Err(spec_err("skew", format!("needs {} weights", self.s)));
                    }
                    if w.iter().any(|x| !x.is_finite() || *x < 0.0) || w.iter().sum::<f64>() <= 0.0
                    {
                        return Err(spec_err(
                            "skew",
                            "weights must be finite, non-negative and not all zero",
                        ));
                    }
                }
            }
            Family::UnaryAdversarial => {
                if m != self.n {
                    return Err(spec_err("m", "unary-adversarial pairs have equal lengths"));
                }
                if self.block == Some(0) {
                    return Err(spec_err("block", "block length must be at least 1"));
                }
                if self.edits.is_some_and(|e| e > self.n) {
                    return Err(spec_err("edits", "more edits than symbols"));
                }
            }
            Family::CasePortfolio => {
                if self.s != 2 {
                    return Err(spec_err("s", "case-portfolio instances are binary"));
                }
                if m > self.n {
                    return Err(spec_err("m", "case-portfolio needs m <= n"));
                }
                let alpha = self.alpha.unwrap_or(0.3);
                if !(alpha.is_finite() && (0.0..=1.0).contains(&alpha)) {
                    return Err(spec_err("alpha", "must lie in [0, 1]"));
                }
            }
            Family::NearIdentical => {
                if m != self.n {
                    return Err(spec_err("m", "near-identical pairs have equal lengths"));
                }
                if self.edits.is_some_and(|e| e > self.n) {
                    return Err(spec_err("edits", "more edits than symbols"));
                }
            }
        }
        Ok(())
    }
}

/// Deterministic stream of indices and unit floats.
pub struct InstanceRng(ChaCha8Rng);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform index in `[0, k)`.
    pub fn index(&mut self, k: usize) -> usize {
        ((self.0.next_u64() as u128 * k as u128) >> 64) as usize
    }

    /// Uniform float in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn symbols(&mut self, len: usize, s: usize) -> Vec<u8> {
        (0..len).map(|_| self.index(s) as u8).collect()
    }

    fn weighted(&mut self, len: usize, weights: &[f64]) -> Vec<u8> {
        let total: f64 = weights.iter().sum();
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in weights {
            acc += w / total;
            cumulative.push(acc);
        }
        (0..len)
            .map(|_| {
                let u = self.unit();
                cumulative
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(weights.len() - 1) as u8
            })
            .collect()
    }

    fn shuffle<T>(&mut self, v: &mut [T]) {
        for i in (1..v.len()).rev() {
            let j = self.index(i + 1);
            v.swap(i, j);
        }
    }

    /// `k` distinct positions in `[0, n)`, in draw order.
    fn positions(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.index(n - i);
            idx.swap(i, j);
        }
        idx.truncate(k);
        idx
    }

    /// Replace each chosen symbol with a different one.
    fn substitute(&mut self, ids: &mut [u8], s: usize, k: usize) {
        for p in self.positions(ids.len(), k) {
            ids[p] = ((ids[p] as usize + 1 + self.index(s - 1)) % s) as u8;
        }
    }
}

fn periodic_blocks(len: usize, s: usize, block: usize, offset: usize) -> Vec<u8> {
    (0..len)
        .map(|i| (((i + offset) / block) % s) as u8)
        .collect()
}

fn with_count(len: usize, ones: usize, one: u8, layout: Layout, rng: &mut InstanceRng) -> Vec<u8> {
    let zero = 1 - one;
    match layout {
        Layout::Shuffled => {
            let mut v: Vec<u8> = (0..len)
                .map(|i| if i < ones { one } else { zero })
                .collect();
            rng.shuffle(&mut v);
            v
        }
        Layout::Blocks => {
            let before = (len - ones) / 2;
            (0..len)
                .map(|i| {
                    if i >= before && i < before + ones {
                        one
                    } else {
                        zero
                    }
                })
                .collect()
        }
    }
}

/// Generate the pair `(A, B)` for a spec.
pub fn generate(spec: &InstanceSpec) -> Result<(SymbolString, SymbolString)> {
    spec.validate()?;
    let (n, m, s) = (spec.n, spec.m(), spec.s);
    let mut rng = InstanceRng::new(spec.seed);
    let (a, b) = match spec.family {
        Family::UniformRandom => {
            let a = rng.symbols(n, s);
            (a, rng.symbols(m, s))
        }
        Family::SkewedRandom => {
            let w = spec
                .skew
                .clone()
                .unwrap_or_else(|| (0..s).map(|k| 1.0 / (k + 1) as f64).collect());
            let a = rng.weighted(n, &w);
            (a, rng.weighted(m, &w))
        }
        Family::UnaryAdversarial => {
            let block = spec.block.unwrap_or((n / (4 * s)).max(1));
            let shift = 1 + rng.index(s - 1);
            let a = periodic_blocks(n, s, block, 0);
            let mut b = periodic_blocks(n, s, block, shift * block);
            rng.substitute(&mut b, s, spec.edits.unwrap_or(n / 100));
            (a, b)
        }
        Family::CasePortfolio => {
            let alpha = spec.alpha.unwrap_or(0.3);
            let e = (alpha * m as f64).round() as usize;
            let layout = spec.layout.unwrap_or_default();
            let x = with_count(n, e.min(n), 1, layout, &mut rng);
            let y = with_count(m, e.min(m), 0, layout, &mut rng);
            (x, y)
        }
        Family::NearIdentical => {
            let a = rng.symbols(n, s);
            let mut b = a.clone();
            rng.substitute(&mut b, s, spec.edits.unwrap_or(1));
            (a, b)
        }
    };
    let alphabet = Arc::new(Alphabet::canonical(s)?);
    Ok((
        SymbolString::new(alphabet.clone(), a)?,
        SymbolString::new(alphabet, b)?,
    ))
}
