//! Linear cross-entropy scoring, heavy-output claims and the
//! distinguisher-to-spoofer reduction.
//!
//! A binary witness `f` whose level set `L = f^{-1}(1)` carries more target
//! mass than uniform mass is enough to pass a heavy-output test: uniform
//! draws from `L` have mean target probability `nu(L)/|L|`, which is at least
//! `(1 + gap)/2^n`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::distcore::{renyi2_entropy, same_width, BitString, DensePmf};
use crate::error::{Error, Result};
use crate::mirror::ceil_guarded;
use crate::rng;
use crate::sampler::draw_uniform_on_l;
use crate::witness::Witness;

/// Float slack when comparing an exact level-set gap with the claimed eps.
const GAP_TOL: f64 = 1e-12;

/// `2^n * sum_x nu(x) mu(x) - 1`.
pub fn xeb_fidelity(mu: &DensePmf, nu: &DensePmf) -> Result<f64> {
    same_width(nu.width(), mu.width())?;
    let overlap: f64 = mu.probs().iter().zip(nu.probs()).map(|(a, b)| a * b).sum();
    Ok(nu.len() as f64 * overlap - 1.0)
}

/// Parameters of a heavy-output claim.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XhogParams {
    pub b: f64,
    /// Success-probability parameter of the sample-count bound.
    pub s: f64,
    pub k: usize,
}

impl XhogParams {
    pub fn new(b: f64, s: f64, k: usize) -> Result<Self> {
        if !(b > 1.0) {
            return Err(Error::param(format!("b = {b} must exceed 1")));
        }
        if k == 0 {
            return Err(Error::param("k must be positive"));
        }
        Ok(XhogParams { b, s, k })
    }

    /// Whether `k` meets [`xhog_sample_bound`].
    pub fn meets_sample_bound(&self) -> Result<bool> {
        Ok(self.k as u64 >= xhog_sample_bound(self.b, self.s)?)
    }
}

/// `ceil(1 / (((2s - 1) b - 1)(b - 1)))`.
pub fn xhog_sample_bound(b: f64, s: f64) -> Result<u64> {
    let denom = ((2.0 * s - 1.0) * b - 1.0) * (b - 1.0);
    if !(b > 1.0) || !(denom > 0.0) || !denom.is_finite() {
        return Err(Error::param(format!("sample bound undefined at b = {b}, s = {s}")));
    }
    Ok(ceil_guarded(1.0 / denom))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XhogScore {
    /// Mean of `nu(z)` over the distinct samples.
    pub mean_prob: f64,
    /// `mean_prob >= b / 2^n`.
    pub passes_b: bool,
    /// Plug-in estimate `2^n * mean_prob - 1`.
    pub xeb: f64,
    pub distinct: usize,
}

/// Scores the distinct members of `samples` against the exact `nu`.
pub fn score_samples(samples: &[BitString], nu: &DensePmf, b: f64) -> Result<XhogScore> {
    if samples.is_empty() {
        return Err(Error::param("cannot score an empty sample list"));
    }
    let mut seen = HashSet::new();
    let mut total = 0.0;
    for x in samples {
        same_width(nu.width(), x.width())?;
        if seen.insert(x.index()) {
            total += nu.prob(*x);
        }
    }
    let mean_prob = total / seen.len() as f64;
    let dim = nu.len() as f64;
    Ok(XhogScore {
        mean_prob,
        passes_b: mean_prob >= b / dim,
        xeb: dim * mean_prob - 1.0,
        distinct: seen.len(),
    })
}

/// Exact statistics of a binary witness's level set against `nu`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSetStats {
    /// `nu(L)`.
    pub mass: f64,
    /// `|L|`.
    pub size: usize,
    /// `E_nu(f) - E_uniform(f) = nu(L) - |L|/2^n`.
    pub gap: f64,
    /// `nu(L) / |L|`, the mean target probability of a uniform draw from `L`.
    pub mean_prob: f64,
    /// `2^n / |L|`, the expected evaluations of `f` per accepted draw.
    pub expected_trials: f64,
}

pub fn level_set_stats(f: &Witness, nu: &DensePmf) -> Result<LevelSetStats> {
    same_width(nu.width(), f.width())?;
    if !f.is_binary() {
        return Err(Error::param("level-set statistics need a binary witness"));
    }
    let mut mass = 0.0;
    let mut size = 0usize;
    for x in nu.outcomes() {
        if f.eval_unchecked(x) == 1.0 {
            mass += nu.prob(x);
            size += 1;
        }
    }
    let dim = nu.len() as f64;
    Ok(LevelSetStats {
        mass,
        size,
        gap: mass - size as f64 / dim,
        mean_prob: if size == 0 { 0.0 } else { mass / size as f64 },
        expected_trials: if size == 0 { f64::INFINITY } else { dim / size as f64 },
    })
}

/// Result of [`spoof_xhog`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpoofReport {
    pub n: usize,
    pub b: f64,
    pub k: usize,
    pub seed: u64,
    /// The `k` distinct strings, in the order they were first drawn.
    pub samples: Vec<BitString>,
    pub score: XhogScore,
    pub level_set: LevelSetStats,
    /// Accepted draws consumed, duplicates included.
    pub draws: usize,
    /// Evaluations of `f` over the consumed draws.
    pub trials: u64,
    pub mean_trials: f64,
    pub trials_stderr: f64,
}

/// Flat summary for reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpoofSummary {
    pub n: usize,
    pub b: f64,
    pub k: usize,
    pub mean_prob: f64,
    pub xeb: f64,
    pub passes_b: bool,
    pub trials: u64,
    pub seed: u64,
}

impl SpoofReport {
    pub fn summary(&self) -> SpoofSummary {
        SpoofSummary {
            n: self.n,
            b: self.b,
            k: self.k,
            mean_prob: self.score.mean_prob,
            xeb: self.score.xeb,
            passes_b: self.score.passes_b,
            trials: self.trials,
            seed: self.seed,
        }
    }
}

/// Collects `k` distinct uniform draws from `L = f^{-1}(1)` and scores them.
///
/// The exact gap of `f` against `nu` must be at least `eps`. Draw `i` of block
/// `j` uses stream `(seed, SPOOF, j, i)`; blocks are drawn in parallel and
/// merged in index order, so the result depends only on the seed.
pub fn spoof_xhog(
    f: &Witness,
    nu: &DensePmf,
    eps: f64,
    k: usize,
    b: f64,
    seed: u64,
    trial_cap: u64,
) -> Result<SpoofReport> {
    let stats = level_set_stats(f, nu)?;
    if k == 0 {
        return Err(Error::param("k must be positive"));
    }
    if stats.gap + GAP_TOL < eps {
        return Err(Error::param(format!(
            "exact gap {:.6} of the witness is below eps = {eps}",
            stats.gap
        )));
    }
    if stats.size < k {
        return Err(Error::Infeasible(format!(
            "{k} distinct samples requested but |L| = {}",
            stats.size
        )));
    }

    let mut seen = HashSet::new();
    let mut samples = Vec::with_capacity(k);
    let mut trials: Vec<u64> = Vec::new();
    let mut next = 0u64;
    'outer: loop {
        let block = (2 * (k - samples.len())).max(16);
        let batch = draw_uniform_on_l(f, block, seed, rng::domain::SPOOF, next, trial_cap)?;
        for (x, t) in batch.samples.into_iter().zip(batch.trials) {
            trials.push(t);
            if seen.insert(x.index()) {
                samples.push(x);
                if samples.len() == k {
                    break 'outer;
                }
            }
        }
        next += 1;
    }

    let draws = trials.len();
    let total: u64 = trials.iter().sum();
    let mean = total as f64 / draws as f64;
    let stderr = if draws < 2 {
        0.0
    } else {
        let var = trials.iter().map(|t| (*t as f64 - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        (var / draws as f64).sqrt()
    };
    Ok(SpoofReport {
        n: nu.width(),
        b,
        k,
        seed,
        score: score_samples(&samples, nu, b)?,
        samples,
        level_set: stats,
        draws,
        trials: total,
        mean_trials: mean,
        trials_stderr: stderr,
    })
}

/// Both sides of the small-set/large-mass inequalities for one `(nu, L)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeavyMassCheck {
    pub n: usize,
    pub mass: f64,
    pub size: usize,
    /// `c = 2^n * sum nu^2 = exp(n ln 2 - S_2(nu))`.
    pub collision_ratio: f64,
    /// `nu(L)^2 * 2^n / c`, which simplifies to `nu(L)^2 / sum nu^2`.
    pub collision_bound: f64,
    pub collision_bound_holds: bool,
    pub delta: f64,
    /// `S_2(nu) >= n ln 2 - ln 3 - ln(1/delta)`.
    pub flatness_precondition: bool,
    /// `nu(L)^2 * delta * 2^n / 3`.
    pub design_bound: f64,
    /// Vacuously true when the flatness precondition fails.
    pub design_bound_holds: bool,
}

/// Checks `|L| >= nu(L)^2 / sum nu^2` and its flat-distribution corollary
/// `|L| >= nu(L)^2 delta 2^n / 3`, taking `eps = nu(L)` as the mass level.
pub fn heavy_mass_size_bound(nu: &DensePmf, l: &Witness, delta: f64) -> Result<HeavyMassCheck> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::param(format!("delta = {delta} outside (0,1]")));
    }
    let stats = level_set_stats(l, nu)?;
    let n = nu.width();
    let dim = nu.len() as f64;
    let collision = nu.collision();
    let s2 = renyi2_entropy(nu);
    let tol = 1e-9 * stats.size.max(1) as f64;
    let collision_bound = stats.mass * stats.mass / collision;
    let flat = s2 >= n as f64 * std::f64::consts::LN_2 - 3f64.ln() + delta.ln();
    let design_bound = stats.mass * stats.mass * delta * dim / 3.0;
    Ok(HeavyMassCheck {
        n,
        mass: stats.mass,
        size: stats.size,
        collision_ratio: dim * collision,
        collision_bound,
        collision_bound_holds: stats.size as f64 + tol >= collision_bound,
        delta,
        flatness_precondition: flat,
        design_bound,
        design_bound_holds: !flat || stats.size as f64 + tol >= design_bound,
    })
}
