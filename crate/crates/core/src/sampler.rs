//! Rejection samplers with a uniform proposal.
//!
//! For a Gibbs guess the acceptance probability is `exp(-H_t(x))`, which is
//! `mu_t(x) / (M_t * 2^-n)` with `M_t = 2^n / Z_t`; neither `Z_t` nor `M_t` is
//! ever computed. For a binary witness the acceptance test is `f(x) = 1`,
//! giving the uniform law on `L = f^{-1}(1)`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distcore::BitString;
use crate::error::{Error, Result};
use crate::mirror::GibbsGuess;
use crate::rng;
use crate::witness::Witness;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub sample: BitString,
    pub trials_used: u64,
    /// `1 / trials_used`, the one-draw estimate of the acceptance rate.
    pub acceptance_estimate: f64,
}

impl SampleReport {
    fn new(sample: BitString, trials_used: u64) -> Self {
        SampleReport {
            sample,
            trials_used,
            acceptance_estimate: 1.0 / trials_used as f64,
        }
    }
}

/// `ceil(20 * e^(eps t / 4))`, saturating.
pub fn default_trial_cap(g: &GibbsGuess) -> u64 {
    let cap = (20.0 * g.hamiltonian_bound().exp()).ceil();
    if cap >= u64::MAX as f64 {
        u64::MAX
    } else {
        cap as u64
    }
}

fn uniform_string<R: Rng + ?Sized>(width: usize, rng: &mut R) -> BitString {
    BitString::from_index_unchecked(rng.random_range(0..1usize << width), width)
}

fn check_cap(trial_cap: u64) -> Result<()> {
    if trial_cap == 0 {
        return Err(Error::param("trial cap must be at least 1"));
    }
    Ok(())
}

/// One exact draw from `mu_t`.
pub fn rejection_sample<R: Rng + ?Sized>(g: &GibbsGuess, rng: &mut R, trial_cap: u64) -> Result<SampleReport> {
    check_cap(trial_cap)?;
    for trial in 1..=trial_cap {
        let x = uniform_string(g.width(), rng);
        let accept = (-g.hamiltonian_unchecked(x)).exp();
        if rng.random::<f64>() < accept {
            return Ok(SampleReport::new(x, trial));
        }
    }
    Err(Error::BudgetExceeded { cap: trial_cap })
}

/// One uniform draw from `L = {x : f(x) = 1}` for binary `f`.
pub fn sample_uniform_on_l<R: Rng + ?Sized>(f: &Witness, rng: &mut R, trial_cap: u64) -> Result<SampleReport> {
    check_cap(trial_cap)?;
    if !f.is_binary() {
        return Err(Error::param("uniform-on-L sampling needs a binary witness"));
    }
    for trial in 1..=trial_cap {
        let x = uniform_string(f.width(), rng);
        if f.eval_unchecked(x) == 1.0 {
            return Ok(SampleReport::new(x, trial));
        }
    }
    Err(Error::BudgetExceeded { cap: trial_cap })
}

/// A batch of independent draws and their trial counts.
#[derive(Clone, Debug, PartialEq)]
pub struct Batch {
    pub samples: Vec<BitString>,
    pub trials: Vec<u64>,
}

impl Batch {
    pub fn total_trials(&self) -> u64 {
        self.trials.iter().sum()
    }

    pub fn mean_trials(&self) -> f64 {
        self.total_trials() as f64 / self.trials.len().max(1) as f64
    }

    /// Standard error of the mean trial count.
    pub fn trials_stderr(&self) -> f64 {
        let k = self.trials.len() as f64;
        if k < 2.0 {
            return 0.0;
        }
        let m = self.mean_trials();
        let var = self.trials.iter().map(|t| (*t as f64 - m).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    }

    fn collect(reports: Result<Vec<SampleReport>>) -> Result<Self> {
        let (samples, trials) = reports?.into_iter().map(|r| (r.sample, r.trials_used)).unzip();
        Ok(Batch { samples, trials })
    }
}

/// `count` draws from `mu_t`; draw `i` uses stream `(seed, domain, round, i)`
/// so any single sample can be regenerated.
pub fn draw_gibbs(
    g: &GibbsGuess,
    count: usize,
    seed: u64,
    domain: u64,
    round: u64,
    trial_cap: u64,
) -> Result<Batch> {
    Batch::collect(
        (0..count)
            .into_par_iter()
            .map(|i| rejection_sample(g, &mut rng::stream(seed, domain, round, i as u64), trial_cap))
            .collect(),
    )
}

/// `count` uniform draws from `L`, same stream addressing as [`draw_gibbs`].
pub fn draw_uniform_on_l(
    f: &Witness,
    count: usize,
    seed: u64,
    domain: u64,
    round: u64,
    trial_cap: u64,
) -> Result<Batch> {
    Batch::collect(
        (0..count)
            .into_par_iter()
            .map(|i| sample_uniform_on_l(f, &mut rng::stream(seed, domain, round, i as u64), trial_cap))
            .collect(),
    )
}
