//! Relative-entropy budgets for noisy circuits.
//!
//! A doubly stochastic channel `Phi` contracts `D(rho || I/d)` by a factor
//! `1 - alpha`. With one noise layer before every unitary layer and one before
//! measurement, a depth-`D` circuit started in `|0...0>` ends with at most
//! `(1 - alpha)^(D+1) n ln 2` nats of divergence from uniform, which caps
//! both the mirror-descent game length and the rejection-sampling cost.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distcore::{relative_entropy, DensePmf};
use crate::error::{Error, Result};
use crate::mirror::ceil_guarded;
use crate::qsim::{haar_unitary, random_brickwork, Circuit, DensityMatrix, NoiseKind, NoiseSpec, C64};
use crate::rng;

/// Slack on the inequality checks in this module.
pub const BUDGET_TOL: f64 = 1e-9;

/// Below this size the SDPI right-hand side is treated as zero and the ratio
/// is not formed.
const RATIO_FLOOR: f64 = 1e-12;

/// `1 - (1 - p)^2 = 2p - p^2`.
pub fn depolarizing_alpha(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("noise rate {p} outside [0,1]")));
    }
    Ok(2.0 * p - p * p)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum SdpiSource {
    Depolarizing { p: f64 },
    /// Caller-asserted constant; nothing here checks it.
    UserSupplied,
}

/// A contraction coefficient and where it came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpiSpec {
    pub alpha: f64,
    pub source: SdpiSource,
}

impl SdpiSpec {
    pub fn depolarizing(p: f64) -> Result<Self> {
        Ok(SdpiSpec {
            alpha: depolarizing_alpha(p)?,
            source: SdpiSource::Depolarizing { p },
        })
    }

    pub fn user_supplied(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::param(format!("alpha = {alpha} outside (0,1]")));
        }
        Ok(SdpiSpec {
            alpha,
            source: SdpiSource::UserSupplied,
        })
    }

    pub fn from_noise(noise: &NoiseSpec) -> Result<Self> {
        match noise.kind {
            NoiseKind::LocalDepolarizing => Self::depolarizing(noise.p),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::param(format!("alpha = {alpha} outside [0,1]")));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::param(format!("eps = {eps} must be positive")));
    }
    Ok(())
}

/// `(1 - alpha)^(D+1) n ln 2` nats.
pub fn entropy_budget(n: usize, depth: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((1.0 - alpha).powi(depth as i32 + 1) * n as f64 * LN_2)
}

/// `ceil(16 budget / eps^2)`.
pub fn iteration_bound(eps: f64, budget: f64) -> Result<u64> {
    check_eps(eps)?;
    if !(budget >= 0.0) {
        return Err(Error::param(format!("budget {budget} must be non-negative")));
    }
    Ok(ceil_guarded(16.0 * budget / (eps * eps)))
}

/// `exp(4 budget / eps)`; `+inf` once it overflows.
pub fn sampling_cost_bound(eps: f64, budget: f64) -> Result<f64> {
    check_eps(eps)?;
    if !(budget >= 0.0) {
        return Err(Error::param(format!("budget {budget} must be non-negative")));
    }
    Ok((4.0 * budget / eps).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseBudgetReport {
    pub n: usize,
    pub depth: usize,
    pub alpha: f64,
    pub eps: f64,
    /// Nats.
    pub entropy_budget: f64,
    pub iteration_bound: u64,
    /// `None` when the bound overflows `f64`.
    pub sampling_cost_bound: Option<f64>,
    /// Inverse temperature `(eps/4) T` reached by the guess after `T` rounds,
    /// i.e. `4 budget / eps`.
    pub beta_implied: f64,
    /// `(1 - alpha)^(D+1) n / eps`, the closed form quoted for annealing;
    /// a factor `4 ln 2` below [`Self::beta_implied`].
    pub beta_quoted: f64,
}

impl NoiseBudgetReport {
    pub fn new(n: usize, depth: usize, alpha: f64, eps: f64) -> Result<Self> {
        let budget = entropy_budget(n, depth, alpha)?;
        let cost = sampling_cost_bound(eps, budget)?;
        Ok(NoiseBudgetReport {
            n,
            depth,
            alpha,
            eps,
            entropy_budget: budget,
            iteration_bound: iteration_bound(eps, budget)?,
            sampling_cost_bound: cost.is_finite().then_some(cost),
            beta_implied: 4.0 * budget / eps,
            beta_quoted: budget / LN_2 / eps,
        })
    }
}

/// Worst case of `D(Phi(rho)) / D(rho)` over sampled states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpiReport {
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub trials: usize,
    /// States where the right-hand side was large enough to form a ratio.
    pub ratios_formed: usize,
    pub max_ratio: f64,
    /// Largest `D(Phi(rho)) - (1 - alpha) D(rho)`.
    pub max_excess: f64,
    pub holds: bool,
}

/// Random state for trial `i`: even trials are Haar-pure, odd trials are
/// Ginibre-mixed of random rank.
fn random_state(n: usize, seed: u64, i: u64) -> Result<DensityMatrix> {
    use rand::Rng;
    use rand_distr::StandardNormal;
    let d = 1usize << n;
    let mut rng = rng::stream(seed, rng::domain::SDPI_STATES, 0, i);
    let rank = if i.is_multiple_of(2) { 1 } else { rng.random_range(1..=d) };
    // Columns of G are unnormalized; rho = G G^dagger / tr.
    let g: Vec<C64> = if rank == 1 {
        let u = haar_unitary(d, &mut rng);
        (0..d).map(|r| u[r * d]).collect()
    } else {
        (0..d * rank)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect()
    };
    let mut data = vec![C64::new(0.0, 0.0); d * d];
    for r in 0..d {
        for c in 0..d {
            data[r * d + c] = (0..rank).map(|k| g[r * rank + k] * g[c * rank + k].conj()).sum();
        }
    }
    let tr: f64 = (0..d).map(|r| data[r * d + r].re).sum();
    data.iter_mut().for_each(|z| *z /= tr);
    DensityMatrix::new(n, data)
}

/// Samples `trials` states and checks `D(Phi(rho)) <= (1 - alpha) D(rho)`.
pub fn verify_sdpi(noise: &NoiseSpec, n: usize, trials: usize, seed: u64) -> Result<SdpiReport> {
    if n == 0 || n > 4 {
        return Err(Error::Capacity {
            what: "SDPI check width",
            requested: n,
            limit: 4,
        });
    }
    let alpha = SdpiSpec::from_noise(noise)?.alpha;
    let sides: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let rho = random_state(n, seed, i)?;
            let before = rho.divergence_from_maximally_mixed()?;
            let mut out = rho;
            out.apply_noise(noise);
            Ok((out.divergence_from_maximally_mixed()?, before))
        })
        .collect::<Result<_>>()?;
    let mut max_ratio = 0.0f64;
    let mut max_excess = f64::NEG_INFINITY;
    let mut formed = 0;
    for (after, before) in sides {
        max_excess = max_excess.max(after - (1.0 - alpha) * before);
        if before > RATIO_FLOOR {
            formed += 1;
            max_ratio = max_ratio.max(after / before);
        }
    }
    Ok(SdpiReport {
        n,
        p: noise.p,
        alpha,
        trials,
        ratios_formed: formed,
        max_ratio,
        max_excess,
        holds: max_excess <= BUDGET_TOL,
    })
}

/// Exact divergences of one noisy circuit against its budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub n: usize,
    pub depth: usize,
    pub p: f64,
    pub alpha: f64,
    pub eps: f64,
    /// `D(nu || uniform)` of the measured distribution, nats.
    pub divergence: f64,
    /// `D(rho || I/2^n)` after each of the `D + 1` noise layers.
    pub state_divergences: Vec<f64>,
    pub budget: f64,
    pub holds: bool,
    /// `ceil(16 D(nu || uniform) / eps^2)`.
    pub exact_iteration_cap: u64,
    pub noisy_iteration_bound: u64,
    /// `ceil(16 n ln 2 / eps^2)`, the bound with no noise.
    pub noiseless_iteration_bound: u64,
}

/// Evolves `c` under `noise` exactly and compares the measured divergence
/// with `entropy_budget`.
pub fn noisy_chain_check(c: &Circuit, noise: &NoiseSpec, eps: f64) -> Result<ChainReport> {
    if c.width() > 8 {
        return Err(Error::Capacity {
            what: "noisy chain width",
            requested: c.width(),
            limit: 8,
        });
    }
    check_eps(eps)?;
    let n = c.width();
    let depth = c.depth();
    let alpha = SdpiSpec::from_noise(noise)?.alpha;
    let mut rho = DensityMatrix::zero_state(n)?;
    let mut state_divergences = Vec::with_capacity(depth + 1);
    for layer in c.layers() {
        rho.apply_noise(noise);
        state_divergences.push(rho.divergence_from_maximally_mixed()?);
        for gate in layer {
            rho.apply_gate(gate);
        }
    }
    rho.apply_noise(noise);
    state_divergences.push(rho.divergence_from_maximally_mixed()?);
    let nu = rho.diagonal()?;
    let divergence = relative_entropy(&nu, &DensePmf::uniform(n)?)?;
    let budget = entropy_budget(n, depth, alpha)?;
    Ok(ChainReport {
        n,
        depth,
        p: noise.p,
        alpha,
        eps,
        divergence,
        state_divergences,
        budget,
        holds: divergence <= budget + BUDGET_TOL,
        exact_iteration_cap: iteration_bound(eps, divergence)?,
        noisy_iteration_bound: iteration_bound(eps, budget)?,
        noiseless_iteration_bound: iteration_bound(eps, n as f64 * LN_2)?,
    })
}

/// One row of a noise grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub seed: u64,
    #[serde(flatten)]
    pub chain: ChainReport,
}

/// `noisy_chain_check` over brickwork circuits for every `(depth, p)` pair.
/// The depth-`D` circuit is the first `D` layers of one seeded brickwork, so
/// deeper points extend shallower ones.
pub fn noise_grid(n: usize, depths: &[usize], ps: &[f64], eps: f64, seed: u64) -> Result<Vec<GridPoint>> {
    let jobs: Vec<(usize, f64)> = depths.iter().flat_map(|d| ps.iter().map(move |p| (*d, *p))).collect();
    jobs.into_par_iter()
        .map(|(d, p)| {
            let c = random_brickwork(n, d, seed)?;
            Ok(GridPoint {
                seed,
                chain: noisy_chain_check(&c, &NoiseSpec::depolarizing(p)?, eps)?,
            })
        })
        .collect()
}

/// CSV with header `n,depth,p,alpha,budget_nats,divergence_nats,holds,iteration_bound,exact_iteration_cap,seed`.
pub fn grid_csv(points: &[GridPoint]) -> String {
    let mut out = String::from("n,depth,p,alpha,budget_nats,divergence_nats,holds,iteration_bound,exact_iteration_cap,seed\n");
    for g in points {
        let c = &g.chain;
        let _ = writeln!(
            out,
            "{},{},{},{:.12},{:.12},{:.12},{},{},{},{}",
            c.n, c.depth, c.p, c.alpha, c.budget, c.divergence, c.holds, c.noisy_iteration_bound, c.exact_iteration_cap, g.seed
        );
    }
    out
}
