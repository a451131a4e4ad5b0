//! Positive chain sequences and their parameter sequences.
//!
//! A sequence {d_{n+1}}_{n≥1} of positive reals is a chain sequence when it
//! admits a parameter sequence {g_n}: d_{n+1} = (1 − g_n) g_{n+1} with
//! g_1 ∈ [0, 1) and g_n ∈ (0, 1) for n ≥ 2. The minimal parameters take
//! ℓ_1 = 0; the maximal parameters M_n are approached by backward recursion
//! g_k = 1 − d_{k+1}/g_{k+1} started from 1 at a large truncation depth.
//! Whether minimal = maximal (single-parameter case) is decided by Wall's
//! criterion: the series Σ_n Π_{j=1..n} ℓ_{j+1}/(1 − ℓ_{j+1}) diverges
//! exactly in the single-parameter case.
//!
//! Parameters live in (0, 1), so everything here is computed in `f64`
//! internally regardless of the working scalar, then converted back.

use crate::error::{Error, Result};
use crate::scalar::Real;


/// Stabilization tolerance for the backward recursion (depth vs depth+32).
const STABILIZATION_TOL: f64 = 1e-12;

/// Relative shrink of the Wall partial sums treated as convergence.
const CONVERGENCE_TOL: f64 = 1e-10;

/// Growth factor of the Wall partial sums treated as blatant divergence.
const EXPLOSION_FACTOR: f64 = 1e6;

/// Margin around tail exponent 1 inside which classification abstains.
const EXPONENT_MARGIN: f64 = 0.1;

/// Outcome of the Wall-series classification heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Wall series diverges: minimal and maximal parameters coincide.
    SingleParameter,
    /// Wall series converges: a whole interval of parameter sequences exists.
    MultipleParameter,
    /// The truncated data does not decide either way.
    Inconclusive,
}

impl Classification {
    #[must_use]
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::SingleParameter => "SingleParameter",
            Classification::MultipleParameter => "MultipleParameter",
            Classification::Inconclusive => "Inconclusive",
        }
    }
}

/// Classification plus the raw evidence it was based on.
#[derive(Debug, Clone)]
pub struct ClassifyReport<T> {
    pub classification: Classification,
    /// Wall-series partial sums at the recorded indices (index, S_index).
    pub partial_sums: Vec<(usize, T)>,
    /// Estimated power-law tail exponent of the series terms, when finite.
    pub tail_exponent: Option<T>,
}

/// Minimal parameters, optional maximal parameters and classification.
#[derive(Debug, Clone)]
pub struct ChainParams<T> {
    /// Minimal parameters ℓ_1..ℓ_n (ℓ_1 = 0).
    pub ell: Vec<T>,
    /// Maximal parameters M_1..M_n when requested and stabilized.
    pub maximal: Option<Vec<T>>,
    /// Wall-series classification when requested.
    pub classification: Option<Classification>,
}

/// A validated positive chain sequence d_2, d_3, … (slot 0 holds d_2).
#[derive(Debug, Clone)]
pub struct ChainSequence<T> {
    d: Vec<T>,
}

impl<T: Real> ChainSequence<T> {
    /// Validates that `d` (slot 0 = d_2) is a chain sequence truncation:
    /// every entry in (0, 1) and the minimal-parameter recursion stays
    /// inside (0, 1).
    pub fn new(d: Vec<T>) -> Result<Self> {
        let seq = Self { d };
        // Runs the full recursion; errors carry the offending subscript.
        minimal_params_f64(&seq.d_fn(), seq.len() + 1)?;
        Ok(seq)
    }

    /// Number of stored terms (d_2..d_{len+1}).
    #[must_use]
    pub fn len(&self) -> usize {
        self.d.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// d_j for subscript j ≥ 2.
    #[must_use]
    pub fn d(&self, j: usize) -> T {
        self.d[j - 2]
    }

    #[must_use]
    pub fn as_slice(&self) -> &[T] {
        &self.d
    }

    fn d_fn(&self) -> impl Fn(usize) -> f64 + '_ {
        move |j| self.d[j - 2].to_f64().expect("chain entry fits f64")
    }

    /// Minimal parameters ℓ_1..ℓ_n.
    pub fn minimal_params(&self, n: usize) -> Result<Vec<T>> {
        if n > self.len() + 1 {
            return Err(Error::DegreeOutOfRange {
                requested: n,
                available: self.len() + 1,
            });
        }
        Ok(minimal_params_f64(&self.d_fn(), n)?
            .into_iter()
            .map(T::of)
            .collect())
    }

    /// Maximal parameters M_1..M_n by backward recursion from the largest
    /// usable depth ≤ `depth`. Errors with [`Error::DepthInsufficient`] when
    /// the depth/depth+32 runs differ by more than 1e-12.
    pub fn maximal_params(&self, n: usize, depth: usize) -> Result<Vec<T>> {
        let usable = depth.min(self.len().saturating_sub(32));
        maximal_params_with(&self.d_fn(), n, usable).map(|v| v.into_iter().map(T::of).collect())
    }

    /// Wall-series classification over the first `n` terms.
    pub fn classify(&self, n: usize) -> Result<ClassifyReport<T>> {
        let n = n.min(self.len());
        classify_with(&self.d_fn(), n)
    }

    /// One-stop bundle of minimal parameters, classification, and (when it
    /// stabilizes) maximal parameters.
    pub fn params(&self, n: usize, depth: usize) -> Result<ChainParams<T>> {
        let ell = self.minimal_params(n)?;
        let classification = self.classify(self.len()).map(|r| r.classification).ok();
        let maximal = self.maximal_params(n, depth).ok();
        Ok(ChainParams {
            ell,
            maximal,
            classification,
        })
    }
}

fn minimal_params_f64(d: &impl Fn(usize) -> f64, n: usize) -> Result<Vec<f64>> {
    let mut ell = Vec::with_capacity(n);
    ell.push(0.0); // ℓ_1
    for k in 1..n {
        let dk1 = d(k + 1);
        let prev = ell[k - 1];
        let next = dk1 / (1.0 - prev);
        if !(next > 0.0 && next < 1.0) {
            return Err(Error::NotAChainSequence {
                index: k + 1,
                value: next,
            });
        }
        ell.push(next);
    }
    Ok(ell)
}

/// Minimal parameters from an on-demand coefficient source; `d(j)` must
/// return d_j for subscripts 2..=n.
pub fn minimal_params_fn<T: Real>(d: impl Fn(usize) -> T, n: usize) -> Result<Vec<T>> {
    let f = |j: usize| d(j).to_f64().expect("chain entry fits f64");
    Ok(minimal_params_f64(&f, n)?.into_iter().map(T::of).collect())
}

/// Maximal parameters from an on-demand source; `d(j)` must cover
/// subscripts 2..=depth+33.
pub fn maximal_params_fn<T: Real>(
    d: impl Fn(usize) -> T,
    n: usize,
    depth: usize,
) -> Result<Vec<T>> {
    let f = |j: usize| d(j).to_f64().expect("chain entry fits f64");
    maximal_params_with(&f, n, depth).map(|v| v.into_iter().map(T::of).collect())
}

fn backward_pass(d: &impl Fn(usize) -> f64, n: usize, start: usize) -> Result<Vec<f64>> {
    // g_{start+1} = 1; g_k = 1 − d_{k+1}/g_{k+1} down to g_1.
    let mut g = 1.0_f64;
    let mut out = vec![0.0; n];
    for k in (1..=start).rev() {
        g = 1.0 - d(k + 1) / g;
        if g <= 0.0 {
            return Err(Error::NotAChainSequence {
                index: k + 1,
                value: g,
            });
        }
        if k <= n {
            out[k - 1] = g;
        }
    }
    Ok(out)
}

fn maximal_params_with(d: &impl Fn(usize) -> f64, n: usize, depth: usize) -> Result<Vec<f64>> {
    if depth < n {
        return Err(Error::DepthInsufficient {
            depth,
            change: f64::NAN,
        });
    }
    let lo = backward_pass(d, n, depth)?;
    let hi = backward_pass(d, n, depth + 32)?;
    let change = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if change > STABILIZATION_TOL {
        return Err(Error::DepthInsufficient { depth, change });
    }
    Ok(hi)
}

fn classify_with<T: Real>(d: &impl Fn(usize) -> f64, n: usize) -> Result<ClassifyReport<T>> {
    let ell = minimal_params_f64(d, n + 1)?;
    // Wall-series terms t_k = Π_{j=1..k} ℓ_{j+1}/(1 − ℓ_{j+1}).
    let mut term = 1.0_f64;
    let mut sum = 0.0_f64;
    let mut sums = Vec::new(); // S_k at dyadic checkpoints
    let mut term_at = vec![f64::NAN; n + 1];
    let checkpoints = [n / 4, n / 2, n];
    for k in 1..=n {
        let r = ell[k] / (1.0 - ell[k]);
        term *= r;
        sum += term;
        term_at[k] = term;
        if checkpoints.contains(&k) {
            sums.push((k, sum));
        }
        if !sum.is_finite() {
            break;
        }
    }
    let s_half = sums
        .iter()
        .find(|(k, _)| *k == n / 2)
        .map(|(_, s)| *s)
        .unwrap_or(sum);
    let s_full = sum;

    let mut tail_exponent = None;
    let classification = if !s_full.is_finite() {
        Classification::SingleParameter
    } else if n < 8 {
        // Too few terms for any tail statement.
        Classification::Inconclusive
    } else if s_full > EXPLOSION_FACTOR * s_half {
        Classification::SingleParameter
    } else if (s_full - s_half).abs() < CONVERGENCE_TOL * s_full {
        Classification::MultipleParameter
    } else {
        // Power-law tail estimate: t_k ~ C k^{-p} gives p = log2(t_{n/2}/t_n).
        let t_half = term_at[n / 2];
        let t_full = term_at[n];
        if t_full == 0.0 {
            Classification::MultipleParameter
        } else {
            let p = (t_half / t_full).log2();
            tail_exponent = Some(p);
            if p > 1.0 + EXPONENT_MARGIN {
                Classification::MultipleParameter
            } else if p < 1.0 - EXPONENT_MARGIN {
                Classification::SingleParameter
            } else {
                Classification::Inconclusive
            }
        }
    };

    Ok(ClassifyReport {
        classification,
        partial_sums: sums.into_iter().map(|(k, s)| (k, T::of(s))).collect(),
        tail_exponent: tail_exponent.map(T::of),
    })
}

/// Propagates a parameter seed forward: g_{k+1} = d_{k+1}/(1 − g_k).
/// Any seed g_1 in (ℓ_1, M_1] must stay inside (0, 1).
pub fn forward_params<T: Real>(d: &ChainSequence<T>, g1: T, n: usize) -> Result<Vec<T>> {
    let mut g = vec![g1.to_f64().expect("seed fits f64")];
    for k in 1..n {
        let next = d.d(k + 1).to_f64().unwrap() / (1.0 - g[k - 1]);
        if !(next > 0.0 && next < 1.0) {
            return Err(Error::NotAChainSequence {
                index: k + 1,
                value: next,
            });
        }
        g.push(next);
    }
    Ok(g.into_iter().map(T::of).collect())
}
