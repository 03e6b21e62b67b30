//! Built-in Alice and Bob strategies.
//!
//! Bob's witnesses are oriented for the referee's test
//! `E_alice(f) - E_bob(f) >= eps`: they score high where Alice puts too much
//! mass.

use rayon::prelude::*;

use crate::distcore::{optimal_distinguisher, DensePmf};
use crate::error::{Error, Result};
use crate::mirror::{initial_guess, GibbsGuess};
use crate::rng;
use crate::sampler::{draw_gibbs, Batch};
use crate::stab::{z_string_witness, PauliZString};
use crate::witness::{heavy_set_witness, maxcut_witness, MaxCutGraph, Witness};

use super::{Disclosure, TrialCapRule};

pub trait AlicePlayer {
    fn name(&self) -> String;

    /// What Alice announces this round.
    fn disclosure(&self) -> Disclosure;

    /// Dense table of the current guess (desk-scale diagnostics and Bob's view).
    fn exact_pmf(&self) -> Result<DensePmf>;

    /// `count` samples from the current guess; sample `i` uses stream
    /// `(seed, ALICE_SAMPLES, round, i)`.
    fn draw(&self, count: usize, seed: u64, round: u64, cap: &TrialCapRule) -> Result<Batch>;

    /// Incorporates the witness accepted in `round`.
    fn absorb(&mut self, f: &Witness, round: u64) -> Result<()>;
}

pub trait BobPlayer {
    fn name(&self) -> String;

    /// A witness with `E_alice(f) - E_target(f) >= eps`, or `None` to concede.
    fn propose(&mut self, alice: &DensePmf, target: &DensePmf, eps: f64, round: u64) -> Result<Option<Witness>>;
}

/// Mirror-descent learner.
#[derive(Clone, Debug)]
pub struct MirrorDescentAlice {
    guess: GibbsGuess,
    /// Round in which the newest witness was accepted.
    last_accepted: Option<u64>,
}

impl MirrorDescentAlice {
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        Ok(MirrorDescentAlice {
            guess: initial_guess(n, eps)?,
            last_accepted: None,
        })
    }

    pub fn guess(&self) -> &GibbsGuess {
        &self.guess
    }
}

impl AlicePlayer for MirrorDescentAlice {
    fn name(&self) -> String {
        "mirror-descent".into()
    }

    fn disclosure(&self) -> Disclosure {
        Disclosure::Gibbs {
            eps: self.guess.eps(),
            t: self.guess.t(),
            last_accepted: self.last_accepted,
        }
    }

    fn exact_pmf(&self) -> Result<DensePmf> {
        Ok(self.guess.exact_pmf()?.0)
    }

    fn draw(&self, count: usize, seed: u64, round: u64, cap: &TrialCapRule) -> Result<Batch> {
        let trial_cap = cap.cap_for(&self.guess);
        draw_gibbs(&self.guess, count, seed, rng::domain::ALICE_SAMPLES, round, trial_cap)
    }

    fn absorb(&mut self, f: &Witness, round: u64) -> Result<()> {
        self.guess.push(f.clone())?;
        self.last_accepted = Some(round);
        Ok(())
    }
}

/// Alice who never learns: announces a fixed named distribution.
#[derive(Clone, Debug)]
pub struct StaticAlice {
    name: String,
    pmf: DensePmf,
}

impl StaticAlice {
    pub fn new(name: impl Into<String>, pmf: DensePmf) -> Self {
        StaticAlice { name: name.into(), pmf }
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Ok(Self::new("uniform", DensePmf::uniform(n)?))
    }
}

impl AlicePlayer for StaticAlice {
    fn name(&self) -> String {
        format!("static-{}", self.name)
    }

    fn disclosure(&self) -> Disclosure {
        Disclosure::Static { name: self.name.clone() }
    }

    fn exact_pmf(&self) -> Result<DensePmf> {
        Ok(self.pmf.clone())
    }

    fn draw(&self, count: usize, seed: u64, round: u64, _cap: &TrialCapRule) -> Result<Batch> {
        Ok(draw_exact(&self.pmf, count, seed, rng::domain::ALICE_SAMPLES, round))
    }

    fn absorb(&mut self, _f: &Witness, _round: u64) -> Result<()> {
        Ok(())
    }
}

/// Direct draws from a dense table, one stream per sample.
pub(crate) fn draw_exact(pmf: &DensePmf, count: usize, seed: u64, domain: u64, round: u64) -> Batch {
    let sampler = pmf.sampler();
    let samples = (0..count)
        .into_par_iter()
        .map(|i| sampler.sample(&mut rng::stream(seed, domain, round, i as u64)))
        .collect();
    Batch {
        samples,
        trials: vec![1; count],
    }
}

fn exact_gap(f: &Witness, alice: &DensePmf, target: &DensePmf) -> Result<f64> {
    Ok(alice.expectation(f)? - target.expectation(f)?)
}

fn if_gap_at_least(f: Witness, alice: &DensePmf, target: &DensePmf, eps: f64) -> Result<Option<Witness>> {
    Ok((exact_gap(&f, alice, target)? >= eps).then_some(f))
}

/// `chi_S` with `S = {alice >= target}`; concedes when `TV < eps`.
#[derive(Clone, Copy, Debug, Default)]
pub struct OptimalIndicatorBob;

impl BobPlayer for OptimalIndicatorBob {
    fn name(&self) -> String {
        "optimal-indicator".into()
    }

    fn propose(&mut self, alice: &DensePmf, target: &DensePmf, eps: f64, _round: u64) -> Result<Option<Witness>> {
        let (f, tv) = optimal_distinguisher(alice, target)?;
        Ok((tv >= eps).then_some(f))
    }
}

/// Complement of the heavy set `{target >= theta}` (default `theta = 2^-n`).
#[derive(Clone, Copy, Debug, Default)]
pub struct HeavySetBob {
    pub theta: Option<f64>,
}

impl BobPlayer for HeavySetBob {
    fn name(&self) -> String {
        "heavy-set".into()
    }

    fn propose(&mut self, alice: &DensePmf, target: &DensePmf, eps: f64, _round: u64) -> Result<Option<Witness>> {
        let theta = self.theta.unwrap_or(1.0 / target.len() as f64);
        let f = heavy_set_witness(target, theta)?.complement();
        if_gap_at_least(f, alice, target, eps)
    }
}

/// Parity witness from a stabilizer Z-string, sign flipped so that it fires
/// where the target never puts mass.
#[derive(Clone, Copy, Debug)]
pub struct CliffordBob {
    pub z_string: PauliZString,
}

impl BobPlayer for CliffordBob {
    fn name(&self) -> String {
        "clifford".into()
    }

    fn propose(&mut self, alice: &DensePmf, target: &DensePmf, eps: f64, _round: u64) -> Result<Option<Witness>> {
        let flipped = PauliZString {
            sign: -self.z_string.sign,
            ..self.z_string
        };
        if_gap_at_least(z_string_witness(&flipped)?, alice, target, eps)
    }
}

/// `1 - f_G`, so Alice's update raises the weight of large cuts.
#[derive(Clone, Debug)]
pub struct MaxCutBob {
    pub graph: MaxCutGraph,
}

impl BobPlayer for MaxCutBob {
    fn name(&self) -> String {
        "maxcut".into()
    }

    fn propose(&mut self, alice: &DensePmf, target: &DensePmf, eps: f64, _round: u64) -> Result<Option<Witness>> {
        if target.width() != self.graph.vertices() {
            return Err(Error::Dimension {
                expected: self.graph.vertices(),
                found: target.width(),
            });
        }
        if_gap_at_least(maxcut_witness(&self.graph).complement(), alice, target, eps)
    }
}
