//! The verification game between a learner (Alice), a prover holding the
//! target device (Bob), and a sampling referee.
//!
//! Each round Alice announces her guess, Bob proposes a witness `f` (or
//! concedes), and the referee draws fresh samples from both sides and accepts
//! the claim when `mean_alice(f) - mean_bob(f) >= eps / 2`. An accepted claim
//! refutes Alice's guess and she absorbs `f`.

pub mod strategies;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::distcore::{relative_entropy, same_width, tv_distance, BitString, DensePmf};
use crate::error::{Error, Result};
use crate::mirror::{ceil_guarded, iteration_cap, GibbsGuess};
use crate::rng;
use crate::witness::Witness;

pub use strategies::{
    AlicePlayer, BobPlayer, CliffordBob, HeavySetBob, MaxCutBob, MirrorDescentAlice, OptimalIndicatorBob,
    StaticAlice,
};

/// Version tag of the transcript JSON layout.
pub const TRANSCRIPT_SCHEMA: u32 = 1;

/// How many rejection-sampling trials Alice may spend per sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum TrialCapRule {
    /// `ceil(20 * e^(eps t / 4))`.
    Default,
    /// `ceil(factor * e^(eps t / 4))`.
    Scaled { factor: f64 },
    Fixed { cap: u64 },
}

impl TrialCapRule {
    pub fn cap_for(&self, g: &GibbsGuess) -> u64 {
        let scaled = |factor: f64| {
            let c = (factor * g.hamiltonian_bound().exp()).ceil();
            if c >= u64::MAX as f64 {
                u64::MAX
            } else {
                (c as u64).max(1)
            }
        };
        match *self {
            TrialCapRule::Default => scaled(20.0),
            TrialCapRule::Scaled { factor } => scaled(factor),
            TrialCapRule::Fixed { cap } => cap.max(1),
        }
    }
}

/// Whether the referee samples or reads exact expectations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefereeMode {
    /// Fresh samples per round, sized by [`sample_schedule`].
    Sampled,
    /// Exact `E_alice(f) - E_bob(f)`; only possible at desk scale.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub eps: f64,
    pub delta: f64,
    /// Maximum number of refutations (accepted witnesses) before Bob loses.
    pub round_cap: u64,
    /// The constant `c` in `ceil(c eps^-2 (ln 2t + t ln 1/delta))`.
    pub sample_schedule_constant: f64,
    pub alice_trial_cap: TrialCapRule,
    /// Re-estimate all earlier accepted witnesses each round (logged only).
    pub recheck_history: bool,
    pub referee: RefereeMode,
    /// Bob loses after this many rejected claims in a row.
    pub max_consecutive_rejections: u32,
    /// Embed full sample lists in the transcript, not just their hashes.
    pub embed_samples: bool,
}

impl GameConfig {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        let cfg = GameConfig {
            eps,
            delta,
            round_cap: 10_000,
            sample_schedule_constant: 2.0,
            alice_trial_cap: TrialCapRule::Default,
            recheck_history: true,
            referee: RefereeMode::Sampled,
            max_consecutive_rejections: 3,
            embed_samples: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::param(format!("eps = {} outside (0,1]", self.eps)));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0 / 3.0) {
            return Err(Error::param(format!("delta = {} outside (0,1/3]", self.delta)));
        }
        if !(self.sample_schedule_constant > 0.0) {
            return Err(Error::param("sample schedule constant must be positive"));
        }
        if self.max_consecutive_rejections == 0 {
            return Err(Error::param("max_consecutive_rejections must be at least 1"));
        }
        Ok(())
    }

    pub fn samples_for_round(&self, t: u64) -> Result<u64> {
        sample_schedule_with(self.sample_schedule_constant, t, self.eps, self.delta)
    }
}

/// Per-side sample count for round `t`: `ceil(2 eps^-2 (ln 2t + t ln(1/delta)))`.
pub fn sample_schedule(t: u64, eps: f64, delta: f64) -> Result<u64> {
    sample_schedule_with(2.0, t, eps, delta)
}

pub fn sample_schedule_with(c: f64, t: u64, eps: f64, delta: f64) -> Result<u64> {
    if t == 0 {
        return Err(Error::param("rounds are numbered from 1"));
    }
    if !(eps > 0.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("need eps > 0 and delta in (0,1), got {eps}, {delta}")));
    }
    let t = t as f64;
    Ok(ceil_guarded(c / (eps * eps) * ((2.0 * t).ln() + t * (1.0 / delta).ln())))
}

/// Referee decision on one claimed witness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub empirical_gap: f64,
    pub accepted: bool,
}

fn mean_of(f: &Witness, samples: &[BitString]) -> Result<f64> {
    let mut sum = 0.0;
    for x in samples {
        sum += f.eval(*x)?;
    }
    Ok(sum / samples.len() as f64)
}

/// `mean_alice(f) - mean_bob(f)`, accepted iff `>= eps / 2`. Both lists must
/// have exactly `scheduled` entries.
pub fn verify_claim(
    bob_samples: &[BitString],
    alice_samples: &[BitString],
    f: &Witness,
    eps: f64,
    scheduled: usize,
) -> Result<ClaimCheck> {
    if bob_samples.len() != scheduled || alice_samples.len() != scheduled {
        return Err(Error::Protocol(format!(
            "expected {scheduled} samples per side, got alice {} and bob {}",
            alice_samples.len(),
            bob_samples.len()
        )));
    }
    if scheduled == 0 {
        return Err(Error::Protocol("empty sample sets".into()));
    }
    let empirical_gap = mean_of(f, alice_samples)? - mean_of(f, bob_samples)?;
    Ok(ClaimCheck {
        empirical_gap,
        accepted: empirical_gap >= eps / 2.0,
    })
}

/// Fraction of `reps` independent referee checks that accept `f` when Alice
/// samples `alice` and Bob samples `bob`, `per_side` samples each.
pub fn acceptance_rate(
    f: &Witness,
    alice: &DensePmf,
    bob: &DensePmf,
    eps: f64,
    per_side: usize,
    reps: usize,
    seed: u64,
) -> Result<f64> {
    same_width(alice.width(), bob.width())?;
    let mut accepted = 0usize;
    for r in 0..reps as u64 {
        let a = strategies::draw_exact(alice, per_side, seed, rng::domain::ALICE_SAMPLES, r);
        let b = strategies::draw_exact(bob, per_side, seed, rng::domain::BOB_SAMPLES, r);
        if verify_claim(&b.samples, &a.samples, f, eps, per_side)?.accepted {
            accepted += 1;
        }
    }
    Ok(accepted as f64 / reps as f64)
}

/// Alice's announcement, recorded without raw tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Disclosure {
    /// Gibbs guess built from the first `t` accepted witnesses of the
    /// transcript; `last_accepted` is the round of the newest one.
    Gibbs {
        eps: f64,
        t: usize,
        last_accepted: Option<u64>,
    },
    Static { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BobRefutedAlice,
    BobConceded,
    AliceBudgetExceeded,
    /// Bob proposed a witness the referee did not accept.
    ClaimRejected,
    /// Alice's strategy failed for a reason other than her sampling budget.
    AliceForfeited,
    /// Bob's strategy failed.
    BobForfeited,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    AliceWins,
    BobWins,
    RoundCapReached,
}

/// Estimate of one witness in one round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    /// Round in which the checked witness was proposed.
    pub witness_round: u64,
    pub empirical_gap: f64,
    pub accepted: bool,
}

/// Desk-scale quantities the real game cannot see.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactDiagnostics {
    /// `E_alice(f) - E_target(f)` of the proposed witness, if any.
    pub witness_gap: Option<f64>,
    /// `D(target || alice)` in nats; `None` when infinite.
    pub divergence: Option<f64>,
    /// `TV(target, alice)`; `None` only when Alice could not disclose.
    pub tv: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: u64,
    pub alice_guess: Disclosure,
    pub bob_witness: Option<Witness>,
    pub referee_samples_per_side: u64,
    pub checks: Vec<WitnessCheck>,
    pub verdict: Verdict,
    pub alice_trials: u64,
    pub alice_sample_hash: Option<String>,
    pub bob_sample_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alice_samples: Option<Vec<BitString>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bob_samples: Option<Vec<BitString>>,
    pub exact: ExactDiagnostics,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl RoundRecord {
    /// The check of this round's own witness.
    pub fn current_check(&self) -> Option<&WitnessCheck> {
        self.checks.iter().find(|c| c.witness_round == self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameTranscript {
    pub schema: u32,
    pub config: GameConfig,
    pub seed: u64,
    pub alice: String,
    pub bob: String,
    pub target: String,
    pub n: usize,
    /// `D(target || uniform)` in nats.
    pub d_ref: f64,
    pub iteration_cap: u64,
    pub rounds: Vec<RoundRecord>,
    pub refutations: u64,
    pub outcome: Outcome,
    pub final_tv: f64,
    pub final_divergence: Option<f64>,
}

impl GameTranscript {
    /// `round,verdict,empirical_gap,exact_gap,divergence,tv` per round.
    pub fn csv_summary(&self) -> String {
        let mut out = String::from("round,verdict,empirical_gap,exact_gap,divergence,tv\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.12}")).unwrap_or_default();
        for r in &self.rounds {
            let verdict = serde_json::to_value(r.verdict)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.t,
                verdict,
                opt(r.current_check().map(|c| c.empirical_gap)),
                opt(r.exact.witness_gap),
                opt(r.exact.divergence),
                opt(r.exact.tv)
            ));
        }
        out
    }

    /// Exact witness gaps of every accepted round, in order.
    pub fn accepted_exact_gaps(&self) -> Vec<f64> {
        self.rounds
            .iter()
            .filter(|r| r.verdict == Verdict::BobRefutedAlice)
            .filter_map(|r| r.exact.witness_gap)
            .collect()
    }
}

/// The distribution Bob's device samples, with a label for the transcript.
#[derive(Clone, Debug, PartialEq)]
pub struct Target {
    pub label: String,
    pub pmf: DensePmf,
}

impl Target {
    pub fn new(label: impl Into<String>, pmf: DensePmf) -> Self {
        Target {
            label: label.into(),
            pmf,
        }
    }
}

/// SHA-256 over the little-endian `u32` indices of the samples.
pub fn sample_hash(samples: &[BitString]) -> String {
    let mut h = Sha256::new();
    for x in samples {
        h.update((x.index() as u32).to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Plays the game to completion.
pub fn run_game(
    config: &GameConfig,
    alice: &mut dyn AlicePlayer,
    bob: &mut dyn BobPlayer,
    target: &Target,
    seed: u64,
) -> Result<GameTranscript> {
    config.validate()?;
    let nu = &target.pmf;
    let n = nu.width();
    same_width(n, alice.exact_pmf()?.width())?;
    let d_ref = relative_entropy(nu, &DensePmf::uniform(n)?)?;

    let mut rounds: Vec<RoundRecord> = Vec::new();
    let mut accepted: Vec<(u64, Witness)> = Vec::new();
    let mut refutations = 0u64;
    let mut rejections_in_a_row = 0u32;
    let mut t = 0u64;

    let outcome = loop {
        if refutations >= config.round_cap {
            break Outcome::RoundCapReached;
        }
        t += 1;
        let disclosure = alice.disclosure();
        let mu = match alice.exact_pmf() {
            Ok(mu) => mu,
            Err(e) => {
                rounds.push(bare_record(t, disclosure, Verdict::AliceForfeited, Some(e.to_string())));
                break Outcome::BobWins;
            }
        };
        let mut exact = ExactDiagnostics {
            witness_gap: None,
            divergence: finite(relative_entropy(nu, &mu)?),
            tv: Some(tv_distance(nu, &mu)?),
        };
        let f = match bob.propose(&mu, nu, config.eps, t) {
            Ok(Some(f)) => f,
            Ok(None) => {
                let mut r = bare_record(t, disclosure, Verdict::BobConceded, None);
                r.exact = exact;
                rounds.push(r);
                break Outcome::AliceWins;
            }
            Err(e) => {
                let mut r = bare_record(t, disclosure, Verdict::BobForfeited, Some(e.to_string()));
                r.exact = exact;
                rounds.push(r);
                break Outcome::AliceWins;
            }
        };
        if f.width() != n {
            let mut r = bare_record(t, disclosure, Verdict::BobForfeited, Some("witness width mismatch".into()));
            r.exact = exact;
            rounds.push(r);
            break Outcome::AliceWins;
        }
        exact.witness_gap = Some(mu.expectation(&f)? - nu.expectation(&f)?);

        let mut record = bare_record(t, disclosure, Verdict::ClaimRejected, None);
        record.exact = exact;
        let mut to_check: Vec<(u64, &Witness)> = vec![(t, &f)];
        if config.recheck_history {
            to_check.extend(accepted.iter().map(|(r, w)| (*r, w)));
        }

        match config.referee {
            RefereeMode::Exact => {
                for (round, w) in &to_check {
                    let gap = mu.expectation(w)? - nu.expectation(w)?;
                    record.checks.push(WitnessCheck {
                        witness_round: *round,
                        empirical_gap: gap,
                        accepted: gap >= config.eps / 2.0,
                    });
                }
            }
            RefereeMode::Sampled => {
                let m = config.samples_for_round(t)?;
                record.referee_samples_per_side = m;
                let bob_batch = strategies::draw_exact(nu, m as usize, seed, rng::domain::BOB_SAMPLES, t);
                let alice_batch = match alice.draw(m as usize, seed, t, &config.alice_trial_cap) {
                    Ok(b) => b,
                    Err(e) => {
                        let verdict = match e {
                            Error::BudgetExceeded { .. } => Verdict::AliceBudgetExceeded,
                            _ => Verdict::AliceForfeited,
                        };
                        record.verdict = verdict;
                        record.bob_witness = Some(f);
                        record.note = Some(e.to_string());
                        rounds.push(record);
                        break Outcome::BobWins;
                    }
                };
                for (round, w) in &to_check {
                    let c = verify_claim(&bob_batch.samples, &alice_batch.samples, w, config.eps, m as usize)?;
                    record.checks.push(WitnessCheck {
                        witness_round: *round,
                        empirical_gap: c.empirical_gap,
                        accepted: c.accepted,
                    });
                }
                record.alice_trials = alice_batch.total_trials();
                record.alice_sample_hash = Some(sample_hash(&alice_batch.samples));
                record.bob_sample_hash = Some(sample_hash(&bob_batch.samples));
                if config.embed_samples {
                    record.alice_samples = Some(alice_batch.samples);
                    record.bob_samples = Some(bob_batch.samples);
                }
            }
        }

        let refuted = record.checks[0].accepted;
        record.bob_witness = Some(f.clone());
        if refuted {
            record.verdict = Verdict::BobRefutedAlice;
            if let Err(e) = alice.absorb(&f, t) {
                record.verdict = Verdict::AliceForfeited;
                record.note = Some(e.to_string());
                rounds.push(record);
                break Outcome::BobWins;
            }
            accepted.push((t, f));
            refutations += 1;
            rejections_in_a_row = 0;
            rounds.push(record);
        } else {
            rejections_in_a_row += 1;
            rounds.push(record);
            if rejections_in_a_row >= config.max_consecutive_rejections {
                break Outcome::AliceWins;
            }
        }
    };

    let mu = alice.exact_pmf()?;
    Ok(GameTranscript {
        schema: TRANSCRIPT_SCHEMA,
        config: config.clone(),
        seed,
        alice: alice.name(),
        bob: bob.name(),
        target: target.label.clone(),
        n,
        d_ref,
        iteration_cap: iteration_cap(d_ref, config.eps)?,
        rounds,
        refutations,
        outcome,
        final_tv: tv_distance(nu, &mu)?,
        final_divergence: finite(relative_entropy(nu, &mu)?),
    })
}

fn bare_record(t: u64, alice_guess: Disclosure, verdict: Verdict, note: Option<String>) -> RoundRecord {
    RoundRecord {
        t,
        alice_guess,
        bob_witness: None,
        referee_samples_per_side: 0,
        checks: Vec::new(),
        verdict,
        alice_trials: 0,
        alice_sample_hash: None,
        bob_sample_hash: None,
        alice_samples: None,
        bob_samples: None,
        exact: ExactDiagnostics {
            witness_gap: None,
            divergence: None,
            tv: None,
        },
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{output_distribution, random_brickwork, Circuit};
    use crate::stab::{find_z_string, random_clifford, tableau_from_clifford};
    use crate::witness::heavy_set_witness;

    fn bits(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn schedule_examples() {
        assert_eq!(sample_schedule(1, 1.0, 1.0 / 3.0).unwrap(), 4);
        let s: Vec<f64> = (1..=200).map(|t| sample_schedule(t, 0.3, 0.1).unwrap() as f64).collect();
        // Increments approach the linear slope 2 eps^-2 ln(1/delta).
        let slope = 2.0 / 0.09 * 10f64.ln();
        assert!(((s[199] - s[99]) / 100.0 - slope).abs() < 1.0);
        assert!(sample_schedule(0, 0.3, 0.1).is_err());
    }

    #[test]
    fn cumulative_schedule_is_quadratic() {
        // Oracle: closed-form sum of the un-rounded terms, within the rounding slack.
        let (eps, delta) = (0.25, 0.05);
        for big_t in [10u64, 50, 200] {
            let total: u64 = (1..=big_t).map(|t| sample_schedule(t, eps, delta).unwrap()).sum();
            let tf = big_t as f64;
            let ln_fact: f64 = (1..=big_t).map(|t| (2.0 * t as f64).ln()).sum();
            let exact = 2.0 / (eps * eps) * (ln_fact + tf * (tf + 1.0) / 2.0 * (1.0 / delta).ln());
            assert!(total as f64 >= exact && (total as f64) < exact + tf + 1.0);
        }
    }

    #[test]
    fn verify_claim_examples() {
        let s = Witness::indicator_of(2, [bits("00")]).unwrap();
        let same = vec![bits("00"), bits("01"), bits("10"), bits("11")];
        let c = verify_claim(&same, &same, &s, 0.3, 4).unwrap();
        assert_eq!((c.empirical_gap, c.accepted), (0.0, false));
        let inside = vec![bits("00"); 4];
        let outside = vec![bits("11"); 4];
        let c = verify_claim(&outside, &inside, &s, 2.0, 4).unwrap();
        assert_eq!((c.empirical_gap, c.accepted), (1.0, true));
        assert!(matches!(verify_claim(&outside, &inside, &s, 0.3, 5), Err(Error::Protocol(_))));
    }

    #[test]
    fn uniform_target_concedes_immediately() {
        let cfg = GameConfig::new(0.3, 0.1).unwrap();
        let mut alice = MirrorDescentAlice::new(4, 0.3).unwrap();
        let target = Target::new("uniform", DensePmf::uniform(4).unwrap());
        let tr = run_game(&cfg, &mut alice, &mut OptimalIndicatorBob, &target, 1).unwrap();
        assert_eq!(tr.rounds.len(), 1);
        assert_eq!(tr.rounds[0].verdict, Verdict::BobConceded);
        assert_eq!(tr.outcome, Outcome::AliceWins);
        assert_eq!(tr.final_tv, 0.0);
    }

    #[test]
    fn point_mass_target_learned_within_cap() {
        let mut cfg = GameConfig::new(0.25, 0.1).unwrap();
        cfg.referee = RefereeMode::Exact;
        let mut alice = MirrorDescentAlice::new(4, 0.25).unwrap();
        let target = Target::new("point", DensePmf::point_mass(bits("0000")));
        let tr = run_game(&cfg, &mut alice, &mut OptimalIndicatorBob, &target, 2).unwrap();
        assert_eq!(tr.outcome, Outcome::AliceWins);
        assert!(tr.refutations <= 710);
        assert!(tr.final_tv <= 0.25);
        assert_eq!(alice.guess().t() as u64, tr.refutations);
    }

    #[test]
    fn sampled_game_small_brickwork() {
        let n = 6;
        let nu = output_distribution(&random_brickwork(n, 12, 5).unwrap()).unwrap();
        let cfg = GameConfig::new(0.3, 0.1).unwrap();
        let mut alice = MirrorDescentAlice::new(n, 0.3).unwrap();
        let target = Target::new("brickwork", nu);
        let tr = run_game(&cfg, &mut alice, &mut OptimalIndicatorBob, &target, 3).unwrap();
        assert_eq!(tr.outcome, Outcome::AliceWins);
        assert!(tr.refutations <= tr.iteration_cap);
        assert!(tr.final_tv <= 0.3);
        for r in tr.rounds.iter().filter(|r| r.verdict == Verdict::BobRefutedAlice) {
            assert!(r.exact.witness_gap.unwrap() >= 0.3);
            assert!(r.referee_samples_per_side > 0);
            assert_eq!(r.checks.len() as u64, 1 + tr.rounds.iter().filter(|q| q.t < r.t && q.verdict == Verdict::BobRefutedAlice).count() as u64);
        }
        // Replay is bit-identical.
        let mut again = MirrorDescentAlice::new(n, 0.3).unwrap();
        let tr2 = run_game(&cfg, &mut again, &mut OptimalIndicatorBob, &target, 3).unwrap();
        assert_eq!(serde_json::to_string(&tr).unwrap(), serde_json::to_string(&tr2).unwrap());
        let back: GameTranscript = serde_json::from_str(&serde_json::to_string(&tr).unwrap()).unwrap();
        assert_eq!(back.rounds.len(), tr.rounds.len());
    }

    #[test]
    fn clifford_bob_against_uniform_alice() {
        let n = 5;
        let (gates, p) = (0..)
            .find_map(|seed| {
                let gates = random_clifford(n, seed).unwrap();
                find_z_string(&tableau_from_clifford(&gates, n).unwrap()).map(|p| (gates, p))
            })
            .unwrap();
        let nu = output_distribution(&Circuit::from_cliffords(n, &gates).unwrap()).unwrap();
        let mut cfg = GameConfig::new(0.3, 0.1).unwrap();
        cfg.round_cap = 1;
        let mut alice = StaticAlice::uniform(n).unwrap();
        let tr = run_game(&cfg, &mut alice, &mut CliffordBob { z_string: p }, &Target::new("clifford", nu), 4).unwrap();
        let first = &tr.rounds[0];
        assert_eq!(first.verdict, Verdict::BobRefutedAlice);
        assert!((first.exact.witness_gap.unwrap() - 0.5).abs() < 1e-12);
        assert!((first.checks[0].empirical_gap - 0.5).abs() < 0.15);
        assert_eq!(tr.outcome, Outcome::RoundCapReached);
    }

    #[test]
    fn alice_budget_loss() {
        let n = 5;
        let nu = DensePmf::point_mass(bits("00000"));
        let mut cfg = GameConfig::new(0.5, 0.1).unwrap();
        cfg.alice_trial_cap = TrialCapRule::Fixed { cap: 1 };
        let mut alice = MirrorDescentAlice::new(n, 0.5).unwrap();
        let tr = run_game(&cfg, &mut alice, &mut OptimalIndicatorBob, &Target::new("point", nu), 5).unwrap();
        assert_eq!(tr.outcome, Outcome::BobWins);
        assert_eq!(tr.rounds.last().unwrap().verdict, Verdict::AliceBudgetExceeded);
    }

    #[test]
    fn repeated_rejections_defeat_bob() {
        // A witness with exact gap 0.35 at eps = 1 is rejected (needs 0.5).
        let n = 4;
        let nu = DensePmf::uniform(n).unwrap();
        let mut mass = vec![1.0; 16];
        mass[0] = 7.0;
        let alice_pmf = DensePmf::from_weights(n, mass).unwrap();
        struct Fixed(Witness);
        impl BobPlayer for Fixed {
            fn name(&self) -> String {
                "fixed".into()
            }
            fn propose(&mut self, _: &DensePmf, _: &DensePmf, _: f64, _: u64) -> Result<Option<Witness>> {
                Ok(Some(self.0.clone()))
            }
        }
        let mut cfg = GameConfig::new(1.0, 0.1).unwrap();
        cfg.referee = RefereeMode::Exact;
        let f = Witness::indicator_of(n, [bits("0000")]).unwrap();
        let mut alice = StaticAlice::new("skewed", alice_pmf);
        let tr = run_game(&cfg, &mut alice, &mut Fixed(f), &Target::new("uniform", nu), 6).unwrap();
        assert_eq!(tr.rounds.len(), 3);
        assert!(tr.rounds.iter().all(|r| r.verdict == Verdict::ClaimRejected));
        assert_eq!(tr.outcome, Outcome::AliceWins);
    }

    #[test]
    fn referee_calibration_small() {
        let nu = output_distribution(&random_brickwork(8, 16, 0).unwrap()).unwrap();
        let u = DensePmf::uniform(8).unwrap();
        let f = heavy_set_witness(&nu, 1.0 / 256.0).unwrap();
        let m = sample_schedule(1, 0.3, 0.1).unwrap() as usize;
        let null = acceptance_rate(&f, &nu, &nu, 0.3, m, 300, 1).unwrap();
        assert!(null <= 0.1, "{null}");
        let g0 = nu.expectation(&f).unwrap() - u.expectation(&f).unwrap();
        let mixed = nu.mixture(&u, 0.3 / g0).unwrap();
        let alt = acceptance_rate(&f, &mixed, &u, 0.3, m, 300, 2).unwrap();
        assert!(alt >= 0.9, "{alt}");
    }
}
