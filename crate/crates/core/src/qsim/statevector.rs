use crate::distcore::{check_width, DensePmf, MAX_DENSE_WIDTH};
use crate::error::Result;

use super::circuit::{Circuit, Gate, C64};

/// Pure state on `width` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    width: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn zero(width: usize) -> Result<Self> {
        check_width(width, MAX_DENSE_WIDTH, "statevector")?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << width];
        amps[0] = C64::new(1.0, 0.0);
        Ok(StateVector { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) {
        apply_gate(&mut self.amps, self.width, &gate.qubits(), &gate.matrix());
    }

    /// Born-rule probabilities. Rounding drift is removed by renormalizing.
    pub fn distribution(&self) -> Result<DensePmf> {
        DensePmf::from_weights(self.width, self.amps.iter().map(|a| a.norm_sqr()).collect())
    }
}

/// Applies a 1- or 2-qubit row-major matrix to a register of `total` qubits
/// stored as a flat amplitude array. Qubit `q` is bit `total - 1 - q`.
pub(crate) fn apply_gate(amps: &mut [C64], total: usize, qubits: &[usize], m: &[C64]) {
    match *qubits {
        [q] => apply_1q(amps, total, q, m),
        [a, b] => apply_2q(amps, total, a, b, m),
        _ => unreachable!("gates act on one or two qubits"),
    }
}

fn apply_1q(amps: &mut [C64], total: usize, q: usize, m: &[C64]) {
    let mask = 1usize << (total - 1 - q);
    for i in 0..amps.len() {
        if i & mask != 0 {
            continue;
        }
        let (a0, a1) = (amps[i], amps[i | mask]);
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[i | mask] = m[2] * a0 + m[3] * a1;
    }
}

fn apply_2q(amps: &mut [C64], total: usize, a: usize, b: usize, m: &[C64]) {
    let ma = 1usize << (total - 1 - a);
    let mb = 1usize << (total - 1 - b);
    for i in 0..amps.len() {
        if i & (ma | mb) != 0 {
            continue;
        }
        let idx = [i, i | mb, i | ma, i | ma | mb];
        let v = idx.map(|k| amps[k]);
        for (r, &k) in idx.iter().enumerate() {
            amps[k] = m[4 * r] * v[0] + m[4 * r + 1] * v[1] + m[4 * r + 2] * v[2] + m[4 * r + 3] * v[3];
        }
    }
}

/// `C|0...0>`.
pub fn run_statevector(c: &Circuit) -> Result<StateVector> {
    let mut psi = StateVector::zero(c.width())?;
    for layer in c.layers() {
        for gate in layer {
            psi.apply(gate);
        }
    }
    Ok(psi)
}

/// `nu(x) = |<x|C|0>|^2`.
pub fn output_distribution(c: &Circuit) -> Result<DensePmf> {
    run_statevector(c)?.distribution()
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::distcore::{tv_distance, BitString};
    use crate::error::Error;
    use crate::qsim::circuit::CliffordGate;
    use crate::qsim::haar::random_brickwork;

    #[test]
    fn statevector_examples() {
        let psi = run_statevector(&Circuit::identity(3).unwrap()).unwrap();
        assert_eq!(psi.amps()[0], C64::new(1.0, 0.0));
        let h = run_statevector(&Circuit::hadamard_all(2).unwrap()).unwrap();
        assert!(h.amps().iter().all(|a| (a - C64::new(0.5, 0.0)).norm() < 1e-15));
        let x0 = Circuit::from_cliffords(3, &[CliffordGate::X { qubit: 0 }]).unwrap();
        let nu = output_distribution(&x0).unwrap();
        assert_eq!(nu.prob(BitString::parse("100").unwrap()), 1.0);
        assert!(matches!(StateVector::zero(21), Err(Error::Capacity { .. })));
    }

    #[test]
    fn output_distribution_examples() {
        let id = output_distribution(&Circuit::identity(4).unwrap()).unwrap();
        assert_eq!(id.probs()[0], 1.0);
        let h = output_distribution(&Circuit::hadamard_all(5).unwrap()).unwrap();
        assert!(tv_distance(&h, &DensePmf::uniform(5).unwrap()).unwrap() < 1e-14);
    }

    /// Dense-matrix oracle: builds each layer's full 2^n x 2^n unitary column
    /// by column from basis-state images, independent of the strided kernels.
    fn dense_layer_unitary(n: usize, layer: &[Gate]) -> Vec<Vec<C64>> {
        let dim = 1 << n;
        let mut u = vec![vec![C64::new(0.0, 0.0); dim]; dim];
        for col in 0..dim {
            // Image of basis state |col> under the layer: product over gates of
            // the local column, gates acting on disjoint qubits.
            let mut terms: Vec<(usize, C64)> = vec![(col, C64::new(1.0, 0.0))];
            for gate in layer {
                let qs = gate.qubits();
                let m = gate.matrix();
                let k = qs.len();
                let mut next = Vec::new();
                for (basis, amp) in terms {
                    let bit = |q: usize| (basis >> (n - 1 - q)) & 1;
                    let local_in = qs.iter().fold(0, |acc, q| acc << 1 | bit(*q));
                    for local_out in 0..(1 << k) {
                        let mut out = basis;
                        for (pos, q) in qs.iter().enumerate() {
                            let v = (local_out >> (k - 1 - pos)) & 1;
                            out = (out & !(1 << (n - 1 - q))) | (v << (n - 1 - q));
                        }
                        next.push((out, amp * m[local_out * (1 << k) + local_in]));
                    }
                }
                terms = next;
            }
            for (row, amp) in terms {
                u[row][col] += amp;
            }
        }
        u
    }

    #[test]
    fn brickwork_matches_dense_oracle() {
        let n = 6;
        let c = random_brickwork(n, 5, 17).unwrap();
        let mut v = vec![C64::new(0.0, 0.0); 1 << n];
        v[0] = C64::new(1.0, 0.0);
        for layer in c.layers() {
            let u = dense_layer_unitary(n, layer);
            v = u.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        }
        let nu = output_distribution(&c).unwrap();
        for (p, a) in nu.probs().iter().zip(&v) {
            assert!((p - a.norm_sqr()).abs() < 1e-12);
        }
        let psi = run_statevector(&c).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cnot_orientation() {
        let c = Circuit::from_cliffords(
            2,
            &[CliffordGate::X { qubit: 0 }, CliffordGate::Cnot { control: 0, target: 1 }],
        )
        .unwrap();
        let nu = output_distribution(&c).unwrap();
        assert_eq!(nu.prob(BitString::parse("11").unwrap()), 1.0);
    }
}
