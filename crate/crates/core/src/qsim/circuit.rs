use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance on `U^dagger U = I` for stored gate matrices.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Named Clifford gates, shared with the tableau simulator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum CliffordGate {
    H { qubit: usize },
    S { qubit: usize },
    X { qubit: usize },
    Z { qubit: usize },
    Cnot { control: usize, target: usize },
}

impl CliffordGate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::H { qubit }
            | CliffordGate::S { qubit }
            | CliffordGate::X { qubit }
            | CliffordGate::Z { qubit } => vec![qubit],
            CliffordGate::Cnot { control, target } => vec![control, target],
        }
    }

    /// Row-major matrix on the gate's qubits. For CNOT the local basis is
    /// `|control target>`.
    pub fn matrix(&self) -> Vec<C64> {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            CliffordGate::H { .. } => vec![h, h, h, -h],
            CliffordGate::S { .. } => vec![l, o, o, C64::new(0.0, 1.0)],
            CliffordGate::X { .. } => vec![o, l, l, o],
            CliffordGate::Z { .. } => vec![l, o, o, -l],
            CliffordGate::Cnot { .. } => vec![
                l, o, o, o, //
                o, l, o, o, //
                o, o, o, l, //
                o, o, l, o,
            ],
        }
    }
}

/// One gate. Two-qubit matrices act on the local basis `|a b>` where
/// `targets = [a, b]`, so `a` is the high bit of the 4x4 index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Gate {
    OneQubit { target: usize, matrix: Vec<C64> },
    TwoQubit { targets: [usize; 2], matrix: Vec<C64> },
    Clifford(CliffordGate),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::OneQubit { target, .. } => vec![*target],
            Gate::TwoQubit { targets, .. } => targets.to_vec(),
            Gate::Clifford(g) => g.qubits(),
        }
    }

    pub fn matrix(&self) -> Vec<C64> {
        match self {
            Gate::OneQubit { matrix, .. } | Gate::TwoQubit { matrix, .. } => matrix.clone(),
            Gate::Clifford(g) => g.matrix(),
        }
    }

    fn validate(&self, width: usize) -> Result<()> {
        let qubits = self.qubits();
        if let Some(q) = qubits.iter().find(|q| **q >= width) {
            return Err(Error::Validity(format!("target {q} out of range for {width} qubits")));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::Validity("two-qubit gate on a single qubit".into()));
        }
        let dim = 1usize << qubits.len();
        let m = self.matrix();
        if m.len() != dim * dim {
            return Err(Error::Validity(format!(
                "gate matrix has {} entries, expected {}",
                m.len(),
                dim * dim
            )));
        }
        let defect = unitarity_defect(&m, dim);
        if !(defect <= UNITARITY_TOL) {
            return Err(Error::Validity(format!("gate is not unitary (defect {defect:.3e})")));
        }
        Ok(())
    }
}

/// `max |(U^dagger U - I)_ij|` for a row-major `dim x dim` matrix.
pub fn unitarity_defect(m: &[C64], dim: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..dim {
                acc += m[k * dim + i].conj() * m[k * dim + j];
            }
            if i == j {
                acc -= 1.0;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

/// A layered circuit on `width` qubits, applied to `|0...0>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct Circuit {
    width: usize,
    layers: Vec<Vec<Gate>>,
}

#[derive(Deserialize)]
struct RawCircuit {
    width: usize,
    layers: Vec<Vec<Gate>>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = Error;

    fn try_from(raw: RawCircuit) -> Result<Self> {
        Circuit::new(raw.width, raw.layers)
    }
}

impl Circuit {
    pub fn new(width: usize, layers: Vec<Vec<Gate>>) -> Result<Self> {
        if width == 0 {
            return Err(Error::param("circuit needs at least one qubit"));
        }
        for layer in &layers {
            let mut used = vec![false; width];
            for gate in layer {
                gate.validate(width)?;
                for q in gate.qubits() {
                    if std::mem::replace(&mut used[q], true) {
                        return Err(Error::Validity(format!("qubit {q} targeted twice in one layer")));
                    }
                }
            }
        }
        Ok(Circuit { width, layers })
    }

    pub fn identity(width: usize) -> Result<Self> {
        Self::new(width, Vec::new())
    }

    /// One layer per gate in order; convenient for Clifford gate lists.
    pub fn from_cliffords(width: usize, gates: &[CliffordGate]) -> Result<Self> {
        Self::new(width, gates.iter().map(|g| vec![Gate::Clifford(*g)]).collect())
    }

    /// `H` on every qubit in a single layer.
    pub fn hadamard_all(width: usize) -> Result<Self> {
        Self::new(
            width,
            vec![(0..width).map(|qubit| Gate::Clifford(CliffordGate::H { qubit })).collect()],
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }
}
