//! Haar-random gates, brickwork ensembles and their second-moment diagnostics.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distcore::check_width;
use crate::error::{Error, Result};
use crate::rng;

use super::circuit::{Circuit, Gate, C64};
use super::statevector::output_distribution;

/// Largest width accepted by the moment diagnostic.
pub const MAX_DIAGNOSTIC_WIDTH: usize = 12;

/// Haar-random `dim x dim` unitary, row-major.
///
/// QR of a complex Ginibre matrix, with the columns of `Q` rephased so the
/// diagonal of `R` is real positive; without the rephasing the result is not
/// Haar distributed.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    let mut out = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            out.push(q[(i, j)]);
        }
    }
    out
}

/// Brickwork circuit of independent Haar two-qubit gates. Even layers pair
/// `(0,1), (2,3), ...`; odd layers pair `(1,2), (3,4), ...`.
pub fn random_brickwork(n: usize, depth: usize, seed: u64) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::param("brickwork needs at least two qubits"));
    }
    let layers = (0..depth)
        .map(|layer| {
            (layer % 2..n - 1)
                .step_by(2)
                .enumerate()
                .map(|(k, a)| {
                    let mut rng = rng::stream(seed, rng::domain::CIRCUIT, layer as u64, k as u64);
                    Gate::TwoQubit {
                        targets: [a, a + 1],
                        matrix: haar_unitary(4, &mut rng),
                    }
                })
                .collect()
        })
        .collect();
    Circuit::new(n, layers)
}

/// Ensemble averages of `nu(0^n)` and `sum_x nu(x)^2`, with standard errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentDiagnostic {
    pub n: usize,
    pub ensemble_size: usize,
    pub mean_p: f64,
    pub mean_p_stderr: f64,
    pub mean_collision: f64,
    pub mean_collision_stderr: f64,
}

impl MomentDiagnostic {
    /// Haar value `2 / (2^n + 1)` of the mean collision probability.
    pub fn haar_collision(&self) -> f64 {
        2.0 / ((1u64 << self.n) as f64 + 1.0)
    }

    /// Mean collision divided by its Haar value.
    pub fn collision_ratio(&self) -> f64 {
        self.mean_collision / self.haar_collision()
    }
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Second-moment diagnostic over an explicit ensemble.
pub fn moment_diagnostic_of(circuits: &[Circuit]) -> Result<MomentDiagnostic> {
    let first = circuits
        .first()
        .ok_or_else(|| Error::param("empty ensemble"))?;
    let n = first.width();
    check_width(n, MAX_DIAGNOSTIC_WIDTH, "moment diagnostic")?;
    if circuits.iter().any(|c| c.width() != n) {
        return Err(Error::param("ensemble mixes circuit widths"));
    }
    let stats: Vec<(f64, f64)> = circuits
        .par_iter()
        .map(|c| {
            let nu = output_distribution(c)?;
            Ok((nu.probs()[0], nu.collision()))
        })
        .collect::<Result<_>>()?;
    let (p0, coll): (Vec<f64>, Vec<f64>) = stats.into_iter().unzip();
    let (mean_p, mean_p_stderr) = mean_and_stderr(&p0);
    let (mean_collision, mean_collision_stderr) = mean_and_stderr(&coll);
    Ok(MomentDiagnostic {
        n,
        ensemble_size: circuits.len(),
        mean_p,
        mean_p_stderr,
        mean_collision,
        mean_collision_stderr,
    })
}

/// Second-moment diagnostic of the seeded brickwork ensemble; circuit `i`
/// uses seed `derive_seed(seed, [ENSEMBLE, i])`.
pub fn haar_moment_diagnostic(
    n: usize,
    depth: usize,
    ensemble_size: usize,
    seed: u64,
) -> Result<MomentDiagnostic> {
    check_width(n, MAX_DIAGNOSTIC_WIDTH, "moment diagnostic")?;
    let circuits = brickwork_ensemble(n, depth, ensemble_size, seed)?;
    moment_diagnostic_of(&circuits)
}

/// The `i`-th member of the seeded brickwork ensemble.
pub fn ensemble_member(n: usize, depth: usize, seed: u64, i: usize) -> Result<Circuit> {
    random_brickwork(n, depth, rng::derive_seed(seed, &[rng::domain::ENSEMBLE, i as u64]))
}

pub fn brickwork_ensemble(n: usize, depth: usize, size: usize, seed: u64) -> Result<Vec<Circuit>> {
    (0..size)
        .into_par_iter()
        .map(|i| ensemble_member(n, depth, seed, i))
        .collect()
}
