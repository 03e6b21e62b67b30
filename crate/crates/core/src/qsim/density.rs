//! Mixed-state evolution under layered local depolarizing noise.
//!
//! A `2^n x 2^n` density matrix is stored row-major, which is the same memory
//! layout as a `2n`-qubit vector whose first `n` qubits index rows (ket) and
//! last `n` qubits index columns (bra). `U rho U^dagger` is therefore `U` on
//! ket qubit `q` and `conj(U)` on bra qubit `n + q`, reusing the statevector
//! kernels.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::distcore::{check_width, DensePmf};
use crate::error::{Error, Result};

use super::circuit::{Circuit, Gate, C64};
use super::statevector::{apply_gate, StateVector};

/// Largest width simulated as a density matrix (2^20 complex entries).
pub const MAX_DENSITY_WIDTH: usize = 10;

/// Eigenvalues below this are treated as zero in entropies.
pub const EIGEN_FLOOR: f64 = 1e-12;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;
const POSITIVITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    LocalDepolarizing,
}

/// `rho -> (1-p) rho + p I/2` on every qubit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNoise")]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub p: f64,
}

#[derive(Deserialize)]
struct RawNoise {
    kind: NoiseKind,
    p: f64,
}

impl TryFrom<RawNoise> for NoiseSpec {
    type Error = Error;

    fn try_from(raw: RawNoise) -> Result<Self> {
        match raw.kind {
            NoiseKind::LocalDepolarizing => NoiseSpec::depolarizing(raw.p),
        }
    }
}

impl NoiseSpec {
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!("noise rate {p} outside [0,1]")));
        }
        Ok(NoiseSpec {
            kind: NoiseKind::LocalDepolarizing,
            p,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    width: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    /// Validated density matrix from row-major entries.
    pub fn new(width: usize, data: Vec<C64>) -> Result<Self> {
        check_width(width, MAX_DENSITY_WIDTH, "density matrix")?;
        let dim = 1usize << width;
        if data.len() != dim * dim {
            return Err(Error::Validity(format!(
                "expected {} entries, found {}",
                dim * dim,
                data.len()
            )));
        }
        let rho = DensityMatrix { width, data };
        rho.check_hermitian()?;
        let trace = rho.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Validity(format!("trace {trace} differs from 1")));
        }
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -POSITIVITY_TOL {
            return Err(Error::Validity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(rho)
    }

    /// `|0...0><0...0|`.
    pub fn zero_state(width: usize) -> Result<Self> {
        check_width(width, MAX_DENSITY_WIDTH, "density matrix")?;
        let dim = 1usize << width;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        data[0] = C64::new(1.0, 0.0);
        Ok(DensityMatrix { width, data })
    }

    pub fn maximally_mixed(width: usize) -> Result<Self> {
        check_width(width, MAX_DENSITY_WIDTH, "density matrix")?;
        let dim = 1usize << width;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Ok(DensityMatrix { width, data })
    }

    /// `|psi><psi|`.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        check_width(psi.width(), MAX_DENSITY_WIDTH, "density matrix")?;
        let a = psi.amps();
        let data = a
            .iter()
            .flat_map(|x| a.iter().map(move |y| x * y.conj()))
            .collect();
        Ok(DensityMatrix {
            width: psi.width(),
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim() + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entry(i, i).re).sum()
    }

    fn check_hermitian(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                let d = (self.entry(i, j) - self.entry(j, i).conj()).norm();
                if d > HERMITIAN_TOL {
                    return Err(Error::Validity(format!(
                        "not Hermitian at ({i},{j}): defect {d:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        let n = self.width;
        let qubits = gate.qubits();
        let m = gate.matrix();
        apply_gate(&mut self.data, 2 * n, &qubits, &m);
        let bra: Vec<usize> = qubits.iter().map(|q| q + n).collect();
        let mc: Vec<C64> = m.iter().map(|z| z.conj()).collect();
        apply_gate(&mut self.data, 2 * n, &bra, &mc);
    }

    /// Single-qubit depolarizing channel with rate `p` on qubit `q`.
    pub fn depolarize_qubit(&mut self, q: usize, p: f64) {
        let n = self.width;
        let mk = 1usize << (2 * n - 1 - q);
        let mb = 1usize << (n - 1 - q);
        let keep = 1.0 - p;
        for i in 0..self.data.len() {
            if i & (mk | mb) != 0 {
                continue;
            }
            let (d0, d1) = (self.data[i], self.data[i | mk | mb]);
            self.data[i] = d0 * (1.0 - p / 2.0) + d1 * (p / 2.0);
            self.data[i | mk | mb] = d1 * (1.0 - p / 2.0) + d0 * (p / 2.0);
            self.data[i | mk] *= keep;
            self.data[i | mb] *= keep;
        }
    }

    /// The channel applied to every qubit.
    pub fn apply_noise(&mut self, noise: &NoiseSpec) {
        match noise.kind {
            NoiseKind::LocalDepolarizing => {
                for q in 0..self.width {
                    self.depolarize_qubit(q, noise.p);
                }
            }
        }
    }

    /// Computational-basis outcome distribution.
    pub fn diagonal(&self) -> Result<DensePmf> {
        DensePmf::from_weights(
            self.width,
            (0..self.dim()).map(|i| self.entry(i, i).re.max(0.0)).collect(),
        )
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let dim = self.dim();
        let m = DMatrix::<C64>::from_fn(dim, dim, |i, j| {
            // Symmetrize so rounding noise cannot leak into the solver.
            (self.entry(i, j) + self.entry(j, i).conj()) * 0.5
        });
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `D(rho || I/2^n) = n ln 2 - S(rho)` in nats.
    pub fn divergence_from_maximally_mixed(&self) -> Result<f64> {
        Ok((self.width as f64 * std::f64::consts::LN_2 - von_neumann_entropy(self)?).max(0.0))
    }
}

/// `-sum lambda ln lambda` in nats, eigenvalues below [`EIGEN_FLOOR`] dropped.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    rho.check_hermitian()?;
    Ok(rho
        .eigenvalues()
        .into_iter()
        .filter(|l| *l >= EIGEN_FLOOR)
        .map(|l| -l * l.ln())
        .sum())
}

/// Evolves `|0><0|` through `Phi, U_1, Phi, ..., U_D, Phi`. `enabled[k]`
/// switches the noise layer before unitary layer `k` (index `D` is the layer
/// before measurement); `None` enables all `D + 1` layers.
pub fn noisy_state(c: &Circuit, noise: &NoiseSpec, enabled: Option<&[bool]>) -> Result<DensityMatrix> {
    let depth = c.depth();
    if let Some(mask) = enabled {
        if mask.len() != depth + 1 {
            return Err(Error::param(format!(
                "noise schedule has {} entries, expected {}",
                mask.len(),
                depth + 1
            )));
        }
    }
    let on = |k: usize| enabled.is_none_or(|m| m[k]);
    let mut rho = DensityMatrix::zero_state(c.width())?;
    for (k, layer) in c.layers().iter().enumerate() {
        if on(k) {
            rho.apply_noise(noise);
        }
        for gate in layer {
            rho.apply_gate(gate);
        }
    }
    if on(depth) {
        rho.apply_noise(noise);
    }
    Ok(rho)
}

pub fn noisy_output_distribution(c: &Circuit, noise: &NoiseSpec) -> Result<DensePmf> {
    noisy_state(c, noise, None)?.diagonal()
}
