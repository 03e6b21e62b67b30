//! One function per scenario. Each returns its artifacts in memory; writing
//! them is the caller's job.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use qverify_core::arena::{
    run_game, AlicePlayer, BobPlayer, CliffordBob, GameConfig, GameTranscript, HeavySetBob, MaxCutBob,
    MirrorDescentAlice, OptimalIndicatorBob, RefereeMode, StaticAlice, Target, TrialCapRule, Verdict,
};
use qverify_core::distcore::{renyi2_entropy, shannon_entropy};
use qverify_core::noisebudget::{grid_csv, noise_grid, verify_sdpi, NoiseBudgetReport, SdpiSpec};
use qverify_core::qsim::{
    brickwork_ensemble, noisy_output_distribution, output_distribution, random_brickwork, Circuit,
};
use qverify_core::rng::{self, derive_seed};
use qverify_core::stab::{find_z_string, random_clifford, tableau_from_clifford, z_string_witness, PauliZString};
use qverify_core::witness::{heavy_set_witness, maxcut_witness};
use qverify_core::xhog::{level_set_stats, spoof_xhog, xhog_sample_bound};
use qverify_core::{initial_guess, BitString, DensePmf, Error, MaxCutGraph, NoiseSpec, Witness};

use crate::config::{ConfigError, Scenario, ScenarioConfig};

/// Files produced by a scenario, as `(file name, contents)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
    /// One-line human summary.
    pub summary: String,
}

impl Artifacts {
    fn new(stem: &str, json: &impl Serialize, csv: String, summary: String) -> Result<Self> {
        Ok(Artifacts {
            files: vec![
                (format!("{stem}.json"), serde_json::to_string_pretty(json)? + "\n"),
                (format!("{stem}.csv"), csv),
            ],
            summary,
        })
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Artifacts> {
    match cfg.scenario {
        Scenario::Game => game(cfg),
        Scenario::XhogSpoof => xhog_spoof(cfg),
        Scenario::Clifford => clifford(cfg),
        Scenario::Maxcut => maxcut(cfg),
        Scenario::EntropySurvey => entropy_survey(cfg),
        Scenario::NoiseGrid => noise_grid_scenario(cfg),
    }
}

fn game_config(cfg: &ScenarioConfig, default_referee: &'static str) -> Result<GameConfig> {
    let mut g = GameConfig::new(cfg.eps, cfg.delta)?;
    g.referee = match cfg.get_choice("referee", &["sampled", "exact"], default_referee)? {
        "exact" => RefereeMode::Exact,
        _ => RefereeMode::Sampled,
    };
    g.round_cap = cfg.get("round_cap", g.round_cap)?;
    if cfg.scenario == Scenario::Game {
        g.sample_schedule_constant = cfg.get("schedule_constant", g.sample_schedule_constant)?;
        let raw: String = cfg.get("trial_cap", "default".to_string())?;
        g.alice_trial_cap = parse_trial_cap(&raw).map_err(|reason| ConfigError::BadValue {
            line: cfg.line_of("trial_cap").unwrap_or(0),
            key: "trial_cap".into(),
            value: raw.clone(),
            reason,
        })?;
        g.recheck_history = cfg.get("recheck_history", g.recheck_history)?;
        g.max_consecutive_rejections = cfg.get("max_rejections", g.max_consecutive_rejections)?;
        g.embed_samples = cfg.get("embed_samples", g.embed_samples)?;
    } else {
        // Long exact games: rechecking every old witness is quadratic.
        g.recheck_history = false;
    }
    g.validate()?;
    Ok(g)
}

/// `default`, `scaled:<factor>` or `fixed:<cap>`.
fn parse_trial_cap(s: &str) -> std::result::Result<TrialCapRule, String> {
    let bad = || "expected default, scaled:<x> or fixed:<n>".to_string();
    match s.split_once(':') {
        None if s == "default" => Ok(TrialCapRule::Default),
        Some(("scaled", x)) => Ok(TrialCapRule::Scaled {
            factor: x.parse().map_err(|_| bad())?,
        }),
        Some(("fixed", x)) => Ok(TrialCapRule::Fixed {
            cap: x.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

fn clifford_target(n: usize, seed: u64) -> Result<(Vec<qverify_core::CliffordGate>, DensePmf)> {
    let gates = random_clifford(n, derive_seed(seed, &[rng::domain::CLIFFORD]))?;
    let nu = output_distribution(&Circuit::from_cliffords(n, &gates)?)?;
    Ok((gates, nu))
}

fn game(cfg: &ScenarioConfig) -> Result<Artifacts> {
    let n: usize = cfg.get("n", 8)?;
    let depth: usize = cfg.get("depth", 2 * n)?;
    let noise_p: f64 = cfg.get("noise_p", 0.0)?;
    let target_kind = cfg.get_choice("target", &["brickwork", "clifford"], "brickwork")?;
    let game_cfg = game_config(cfg, "sampled")?;

    let mut z_string: Option<PauliZString> = None;
    let target = match target_kind {
        "clifford" => {
            let (gates, nu) = clifford_target(n, cfg.seed)?;
            z_string = find_z_string(&tableau_from_clifford(&gates, n)?);
            Target::new(format!("clifford-{n}"), nu)
        }
        _ => {
            let c = random_brickwork(n, depth, cfg.seed)?;
            if noise_p > 0.0 {
                let nu = noisy_output_distribution(&c, &NoiseSpec::depolarizing(noise_p)?)?;
                Target::new(format!("brickwork-{n}x{depth}-p{noise_p}"), nu)
            } else {
                Target::new(format!("brickwork-{n}x{depth}"), output_distribution(&c)?)
            }
        }
    };

    let mut alice: Box<dyn AlicePlayer> = match cfg.get_choice("alice", &["mirror", "uniform"], "mirror")? {
        "uniform" => Box::new(StaticAlice::uniform(n)?),
        _ => Box::new(MirrorDescentAlice::new(n, cfg.eps)?),
    };
    let mut bob: Box<dyn BobPlayer> = match cfg.get_choice("bob", &["optimal", "heavy-set", "clifford"], "optimal")? {
        "heavy-set" => Box::new(HeavySetBob::default()),
        "clifford" => {
            let z = z_string.ok_or_else(|| {
                Error::Infeasible("the clifford bob needs target = clifford with a Z-string".into())
            })?;
            Box::new(CliffordBob { z_string: z })
        }
        _ => Box::new(OptimalIndicatorBob),
    };

    let t = run_game(&game_cfg, alice.as_mut(), bob.as_mut(), &target, cfg.seed)?;
    let summary = format!(
        "game {}: {:?} after {} refutations (cap {}), final TV {:.4}",
        t.target, t.outcome, t.refutations, t.iteration_cap, t.final_tv
    );
    Artifacts::new("game", &t, t.csv_summary(), summary)
}

fn xhog_spoof(cfg: &ScenarioConfig) -> Result<Artifacts> {
    let n: usize = cfg.get("n", 10)?;
    let depth: usize = cfg.get("depth", 2 * n)?;
    let theta: f64 = cfg.get("theta", 0.5f64.powi(n as i32))?;
    let k: usize = cfg.get("k", 50)?;
    let b: f64 = cfg.get("b", 1.15)?;
    let s: f64 = cfg.get("s", 1.0)?;
    let reps: usize = cfg.get("reps", 1)?;
    let trial_cap: u64 = cfg.get("trial_cap", 1_000_000)?;

    let nu = output_distribution(&random_brickwork(n, depth, cfg.seed)?)?;
    let f = heavy_set_witness(&nu, theta)?;
    let stats = level_set_stats(&f, &nu)?;
    let reports = (0..reps as u64)
        .into_par_iter()
        .map(|r| spoof_xhog(&f, &nu, cfg.eps, k, b, derive_seed(cfg.seed, &[rng::domain::SPOOF, r]), trial_cap))
        .collect::<std::result::Result<Vec<_>, Error>>()?;

    let mut csv = String::from("rep,seed,mean_prob,xeb,passes_b,draws,trials\n");
    for (i, r) in reports.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{i},{},{:.12e},{:.12},{},{},{}",
            r.seed, r.score.mean_prob, r.score.xeb, r.score.passes_b, r.draws, r.trials
        );
    }
    let passes = reports.iter().filter(|r| r.score.passes_b).count();
    let draws: usize = reports.iter().map(|r| r.draws).sum();
    let trials: u64 = reports.iter().map(|r| r.trials).sum();
    let json = json!({
        "n": n,
        "depth": depth,
        "theta": theta,
        "eps": cfg.eps,
        "b": b,
        "s": s,
        "k": k,
        "seed": cfg.seed,
        "sample_bound": xhog_sample_bound(b, s).ok(),
        "level_set": stats,
        "passes": passes,
        "mean_trials_per_draw": trials as f64 / draws.max(1) as f64,
        "reports": reports.iter().map(|r| r.summary()).collect::<Vec<_>>(),
    });
    let summary = format!(
        "xhog-spoof n={n}: |L|={}, exact 2^n nu(L)/|L| = {:.4}; {passes}/{reps} repetitions pass b={b}",
        stats.size,
        stats.mean_prob * 2f64.powi(n as i32)
    );
    Artifacts::new("xhog-spoof", &json, csv, summary)
}

#[derive(Serialize)]
struct CliffordRow {
    index: usize,
    seed: u64,
    z_string: Option<String>,
    exact_gap: Option<f64>,
    empirical_gap: Option<f64>,
    samples: usize,
}

fn clifford(cfg: &ScenarioConfig) -> Result<Artifacts> {
    let n: usize = cfg.get("n", 6)?;
    let circuits: usize = cfg.get("circuits", 1)?;
    let samples: usize = cfg.get("samples", 10_000)?;
    let uniform = DensePmf::uniform(n)?;
    let rows = (0..circuits)
        .into_par_iter()
        .map(|i| -> Result<CliffordRow> {
            let seed = derive_seed(cfg.seed, &[i as u64]);
            let (gates, nu) = clifford_target(n, seed)?;
            let Some(z) = find_z_string(&tableau_from_clifford(&gates, n)?) else {
                return Ok(CliffordRow {
                    index: i,
                    seed,
                    z_string: None,
                    exact_gap: None,
                    empirical_gap: None,
                    samples,
                });
            };
            let f = z_string_witness(&z)?;
            let exact = nu.expectation(&f)? - uniform.expectation(&f)?;
            let mean = |pmf: &DensePmf, domain: u64| -> Result<f64> {
                let sampler = pmf.sampler();
                let mut acc = 0.0;
                for j in 0..samples as u64 {
                    acc += f.eval(sampler.sample(&mut rng::stream(seed, domain, i as u64, j)))?;
                }
                Ok(acc / samples.max(1) as f64)
            };
            let empirical = mean(&nu, rng::domain::BOB_SAMPLES)? - mean(&uniform, rng::domain::ALICE_SAMPLES)?;
            Ok(CliffordRow {
                index: i,
                seed,
                z_string: Some(z.to_string()),
                exact_gap: Some(exact),
                empirical_gap: Some(empirical),
                samples,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("index,seed,z_string,exact_gap,empirical_gap\n");
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.12}")).unwrap_or_default();
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            r.index,
            r.seed,
            r.z_string.clone().unwrap_or_default(),
            opt(r.exact_gap),
            opt(r.empirical_gap)
        );
    }
    let found = rows.iter().filter(|r| r.z_string.is_some()).count();
    let first = rows.iter().find(|r| r.z_string.is_some());
    let summary = match first {
        Some(r) => format!(
            "clifford n={n}: Z-strings in {found}/{circuits} circuits; first {} with empirical gap {:.4}",
            r.z_string.as_deref().unwrap_or(""),
            r.empirical_gap.unwrap_or(f64::NAN)
        ),
        None => format!("clifford n={n}: no Z-string in {circuits} circuits"),
    };
    let json = json!({ "n": n, "seed": cfg.seed, "circuits": rows });
    Artifacts::new("clifford", &json, csv, summary)
}

fn maxcut(cfg: &ScenarioConfig) -> Result<Artifacts> {
    let n: usize = cfg.get("n", 12)?;
    let degree: usize = cfg.get("degree", 3)?;
    let graph = MaxCutGraph::random_regular(n, degree, cfg.seed)?;
    let target = Target::new(format!("maxcut-{n}-{degree}"), graph.max_cut_target()?);
    let game_cfg = game_config(cfg, "exact")?;
    let mut alice = MirrorDescentAlice::new(n, cfg.eps)?;
    let mut bob = MaxCutBob { graph: graph.clone() };
    let t: GameTranscript = run_game(&game_cfg, &mut alice, &mut bob, &target, cfg.seed)?;

    // Replay the guesses: with every witness equal to 1 - f_G the t-th guess
    // is the Gibbs state of f_G at inverse weight t eps / 4.
    let f_g = maxcut_witness(&graph);
    let norm = (n * graph.max_degree()) as f64;
    let mut g = initial_guess(n, cfg.eps)?;
    let mut csv = String::from("t,beta,expected_f,expected_cut\n");
    let push_row = |g: &qverify_core::GibbsGuess, csv: &mut String| -> Result<f64> {
        let mu = g.exact_pmf()?.0;
        let value = mu.expectation(&f_g)?;
        let _ = writeln!(
            csv,
            "{},{:.6},{:.12},{:.12}",
            g.t(),
            g.t() as f64 * cfg.eps / 4.0,
            value,
            value * norm
        );
        Ok(value)
    };
    let mut last = push_row(&g, &mut csv)?;
    for r in t.rounds.iter().filter(|r| r.verdict == Verdict::BobRefutedAlice) {
        let w: &Witness = r.bob_witness.as_ref().expect("accepted rounds carry a witness");
        g.push(w.clone())?;
        last = push_row(&g, &mut csv)?;
    }
    let best = (0..1usize << n)
        .map(|i| graph.cut_size(BitString::new(i as u32, n).expect("index fits")))
        .max()
        .unwrap_or(0);
    let json = json!({
        "graph": { "vertices": n, "edges": graph.edges(), "max_cut": best },
        "transcript": t,
    });
    let summary = format!(
        "maxcut n={n}: {:?} after {} refutations; final expected cut {:.3} of max {best}",
        t.outcome,
        t.refutations,
        last * norm
    );
    Artifacts::new("maxcut", &json, csv, summary)
}

fn entropy_survey(cfg: &ScenarioConfig) -> Result<Artifacts> {
    let n: usize = cfg.get("n", 8)?;
    let depth: usize = cfg.get("depth", 3 * n)?;
    let circuits: usize = cfg.get("circuits", 500)?;
    let deltas: Vec<f64> = cfg.get_list("deltas", &[0.1, 0.2])?;
    let ensemble = brickwork_ensemble(n, depth, circuits, cfg.seed)?;
    let rows: Vec<(f64, f64, f64)> = ensemble
        .par_iter()
        .map(|c| -> Result<(f64, f64, f64)> {
            let nu = output_distribution(c)?;
            Ok((shannon_entropy(&nu), renyi2_entropy(&nu), nu.collision()))
        })
        .collect::<Result<_>>()?;
    let mut csv = String::from("index,shannon_nats,renyi2_nats,collision\n");
    for (i, (s, s2, c)) in rows.iter().enumerate() {
        let _ = writeln!(csv, "{i},{s:.12},{s2:.12},{c:.12e}");
    }
    let thresholds: Vec<_> = deltas
        .iter()
        .map(|d| {
            let threshold = n as f64 * LN_2 - 3f64.ln() - (1.0 / d).ln();
            let below = rows.iter().filter(|r| r.1 < threshold).count();
            json!({
                "delta": d,
                "threshold_nats": threshold,
                "below": below,
                "fraction": below as f64 / rows.len().max(1) as f64,
            })
        })
        .collect();
    let mean_collision = rows.iter().map(|r| r.2).sum::<f64>() / rows.len().max(1) as f64;
    let haar = 2.0 / (2f64.powi(n as i32) + 1.0);
    let json = json!({
        "n": n,
        "depth": depth,
        "circuits": circuits,
        "seed": cfg.seed,
        "mean_shannon_nats": rows.iter().map(|r| r.0).sum::<f64>() / rows.len().max(1) as f64,
        "mean_collision": mean_collision,
        "haar_collision": haar,
        "collision_ratio": mean_collision / haar,
        "thresholds": thresholds,
    });
    let summary = format!(
        "entropy-survey n={n}, depth {depth}: {circuits} circuits, mean collision / Haar = {:.4}",
        mean_collision / haar
    );
    Artifacts::new("entropy-survey", &json, csv, summary)
}

fn noise_grid_scenario(cfg: &ScenarioConfig) -> Result<Artifacts> {
    let n: usize = cfg.get("n", 6)?;
    let depths: Vec<usize> = cfg.get_list("depths", &[1, 2, 3, 4, 5])?;
    let ps: Vec<f64> = cfg.get_list("ps", &[0.05, 0.1, 0.2])?;
    let sdpi_width: usize = cfg.get("sdpi_width", 2)?;
    let sdpi_states: usize = cfg.get("sdpi_states", 0)?;
    let grid = noise_grid(n, &depths, &ps, cfg.eps, cfg.seed)?;
    let budgets = depths
        .iter()
        .flat_map(|d| ps.iter().map(move |p| (*d, *p)))
        .map(|(d, p)| NoiseBudgetReport::new(n, d, SdpiSpec::depolarizing(p)?.alpha, cfg.eps))
        .collect::<std::result::Result<Vec<_>, Error>>()?;
    let sdpi = if sdpi_states > 0 {
        ps.iter()
            .map(|p| verify_sdpi(&NoiseSpec::depolarizing(*p)?, sdpi_width, sdpi_states, cfg.seed))
            .collect::<std::result::Result<Vec<_>, Error>>()?
    } else {
        Vec::new()
    };
    let violations = grid.iter().filter(|g| !g.chain.holds).count();
    let json = json!({
        "n": n,
        "eps": cfg.eps,
        "seed": cfg.seed,
        "points": grid,
        "budgets": budgets,
        "sdpi": sdpi,
    });
    let summary = format!(
        "noise-grid n={n}: {} points, {violations} above budget{}",
        grid.len(),
        if sdpi.is_empty() {
            String::new()
        } else {
            format!(
                "; worst SDPI ratio {:.4}",
                sdpi.iter().map(|r| r.max_ratio).fold(0.0, f64::max)
            )
        }
    );
    Artifacts::new("noise-grid", &json, grid_csv(&grid), summary)
}
