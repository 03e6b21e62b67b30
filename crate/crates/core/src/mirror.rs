//! Mirror descent over bit-string distributions.
//!
//! Alice's guess after `t` accepted witnesses is the Gibbs measure
//! `mu_t(x) = exp(-H_t(x)) / Z_t` with `H_t = (eps/4) * sum_i f_i`. It is held
//! implicitly as `(eps, [f_1..f_t])`; `Z_t` only appears when a dense table is
//! requested.

use serde::{Deserialize, Serialize};

use crate::distcore::{check_width, relative_entropy, same_width, tv_distance, BitString, DensePmf, MAX_DENSE_WIDTH};
use crate::error::{Error, Result};
use crate::witness::Witness;

/// Slack allowed when checking the per-round divergence bound.
pub const PROGRESS_TOL: f64 = 1e-9;

/// `ceil(x)` that ignores float noise just above an integer.
pub(crate) fn ceil_guarded(x: f64) -> u64 {
    (x - 1e-9).ceil().max(0.0) as u64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGuess", into = "RawGuess")]
pub struct GibbsGuess {
    width: usize,
    eps: f64,
    witnesses: Vec<Witness>,
    /// `sum_i f_i(x)` per index, kept for dense materialization only.
    potential: Vec<f64>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawGuess {
    width: usize,
    eps: f64,
    witnesses: Vec<Witness>,
}

impl From<GibbsGuess> for RawGuess {
    fn from(g: GibbsGuess) -> Self {
        RawGuess {
            width: g.width,
            eps: g.eps,
            witnesses: g.witnesses,
        }
    }
}

impl TryFrom<RawGuess> for GibbsGuess {
    type Error = Error;

    fn try_from(raw: RawGuess) -> Result<Self> {
        let mut g = initial_guess(raw.width, raw.eps)?;
        for f in raw.witnesses {
            g.push(f)?;
        }
        Ok(g)
    }
}

/// `mu_0 = uniform`.
pub fn initial_guess(n: usize, eps: f64) -> Result<GibbsGuess> {
    check_width(n, MAX_DENSE_WIDTH, "gibbs guess")?;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param(format!("eps = {eps} outside (0,1]")));
    }
    Ok(GibbsGuess {
        width: n,
        eps,
        witnesses: Vec::new(),
        potential: vec![0.0; 1 << n],
    })
}

impl GibbsGuess {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Number of absorbed witnesses.
    pub fn t(&self) -> usize {
        self.witnesses.len()
    }

    pub fn witnesses(&self) -> &[Witness] {
        &self.witnesses
    }

    /// Learning rate `eps / 4`.
    pub fn rate(&self) -> f64 {
        self.eps / 4.0
    }

    /// Appends `f` in place.
    pub fn push(&mut self, f: Witness) -> Result<()> {
        same_width(self.width, f.width())?;
        for (acc, v) in self.potential.iter_mut().zip(f.values()) {
            *acc += v;
        }
        self.witnesses.push(f);
        Ok(())
    }

    /// `mu_{t+1}`, leaving `self` untouched.
    pub fn update(&self, f: Witness) -> Result<GibbsGuess> {
        let mut next = self.clone();
        next.push(f)?;
        Ok(next)
    }

    /// `H_t(x)`, evaluated from the witnesses themselves: `t` evaluations.
    pub fn hamiltonian(&self, x: BitString) -> Result<f64> {
        same_width(self.width, x.width())?;
        Ok(self.hamiltonian_unchecked(x))
    }

    pub(crate) fn hamiltonian_unchecked(&self, x: BitString) -> f64 {
        self.rate() * self.witnesses.iter().map(|f| f.eval_unchecked(x)).sum::<f64>()
    }

    /// Upper bound `t * eps / 4` on `H_t`.
    pub fn hamiltonian_bound(&self) -> f64 {
        self.rate() * self.t() as f64
    }

    /// Dense `mu_t` and its partition function `Z_t`.
    pub fn exact_pmf(&self) -> Result<(DensePmf, f64)> {
        let rate = self.rate();
        let weights: Vec<f64> = self.potential.iter().map(|s| (-rate * s).exp()).collect();
        let z: f64 = weights.iter().sum();
        Ok((DensePmf::from_weights(self.width, weights)?, z))
    }
}

/// `ceil(16 * d_ref / eps^2)` with `d_ref` in nats.
pub fn iteration_cap(d_ref: f64, eps: f64) -> Result<u64> {
    if !(d_ref >= 0.0) || d_ref.is_infinite() {
        return Err(Error::param(format!("reference divergence {d_ref} must be finite and >= 0")));
    }
    if !(eps > 0.0) {
        return Err(Error::param(format!("eps = {eps} must be positive")));
    }
    Ok(ceil_guarded(16.0 * d_ref / (eps * eps)))
}

/// One row of the progress ledger.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgressEntry {
    pub t: usize,
    /// Exact gap of the witness absorbed to reach round `t`.
    pub witness_gap: Option<f64>,
    /// `D(nu || mu_t)` in nats.
    pub divergence: f64,
    /// `D(nu || uniform) - t eps^2 / 16`.
    pub bound: f64,
    /// `sqrt(2 * max(bound, 0))`, the per-round TV guarantee as stated with
    /// the mirror-descent bound.
    pub tv_bound: f64,
    /// `sqrt(D(nu || mu_t) / 2)`, the sharp Pinsker form.
    pub pinsker_tv: f64,
    /// Exact `TV(nu, mu_t)`.
    pub tv: f64,
    /// Whether the bound was binding: every witness so far had exact gap `>= eps`.
    pub bound_applies: bool,
}

impl ProgressEntry {
    pub fn holds(&self) -> bool {
        !self.bound_applies || self.divergence <= self.bound + PROGRESS_TOL
    }
}

/// Round-by-round divergence record against a known target.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProgressLedger {
    pub d_ref: f64,
    pub entries: Vec<ProgressEntry>,
}

impl ProgressLedger {
    pub fn new(target: &DensePmf) -> Result<Self> {
        let u = DensePmf::uniform(target.width())?;
        Ok(ProgressLedger {
            d_ref: relative_entropy(target, &u)?,
            entries: Vec::new(),
        })
    }

    /// Records `g` against `target`. `witness_gap` is the exact
    /// `E_mu(f_t) - E_nu(f_t)` of the newest witness measured against
    /// `mu_{t-1}` (None at `t = 0`).
    pub fn check_progress(
        &mut self,
        g: &GibbsGuess,
        target: &DensePmf,
        witness_gap: Option<f64>,
    ) -> Result<ProgressEntry> {
        let (mu, _) = g.exact_pmf()?;
        let divergence = relative_entropy(target, &mu)?;
        let t = g.t();
        let eps = g.eps();
        let bound = self.d_ref - t as f64 * eps * eps / 16.0;
        let prior_ok = self.entries.last().is_none_or(|e| e.bound_applies);
        let this_ok = witness_gap.is_none_or(|gap| gap >= eps - PROGRESS_TOL);
        let entry = ProgressEntry {
            t,
            witness_gap,
            divergence,
            bound,
            tv_bound: (2.0 * bound.max(0.0)).sqrt(),
            pinsker_tv: (divergence / 2.0).sqrt(),
            tv: tv_distance(target, &mu)?,
            bound_applies: prior_ok && this_ok,
        };
        self.entries.push(entry);
        Ok(entry)
    }

    pub fn violations(&self) -> impl Iterator<Item = &ProgressEntry> {
        self.entries.iter().filter(|e| !e.holds())
    }

    /// Smallest per-round drop `D(nu||mu_{t-1}) - D(nu||mu_t)` over rounds
    /// where the bound applies.
    pub fn min_drop(&self) -> Option<f64> {
        self.entries
            .windows(2)
            .filter(|w| w[1].bound_applies)
            .map(|w| w[0].divergence - w[1].divergence)
            .reduce(f64::min)
    }
}
