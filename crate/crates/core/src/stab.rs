//! Stabilizer tableaux for Clifford circuits and the Z-string distinguisher.
//!
//! Masks use the bit-string convention: qubit `q` is bit `n - 1 - q`.
//! Row `(x, z, sign)` stands for `sign * P_0 (x) ... (x) P_{n-1}` with
//! `P_q` one of `I, X, Z, Y` for `(x_q, z_q) = (0,0), (1,0), (0,1), (1,1)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::CliffordGate;
use crate::rng;
use crate::witness::Witness;

/// Tableau width limit (masks are 64-bit).
pub const MAX_TABLEAU_WIDTH: usize = 64;

/// One Pauli operator with a real sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliRow {
    pub x_mask: u64,
    pub z_mask: u64,
    /// `+1` or `-1`.
    pub sign: i8,
}

impl PauliRow {
    fn negative(&self) -> bool {
        self.sign < 0
    }

    /// Symplectic product: 0 when the two operators commute.
    pub fn anticommutes(&self, other: &PauliRow) -> bool {
        ((self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones()) % 2 == 1
    }
}

/// Phase exponent (power of `i`) picked up when multiplying single-qubit
/// Paulis `(x1,z1) * (x2,z2)`.
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 as i32 - x2 as i32,
        (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
        (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
    }
}

/// `h <- i * h` for commuting rows, with the sign fixed by the phase rule.
fn rowsum(h: &mut PauliRow, i: &PauliRow, width: usize) {
    let mut phase = 2 * h.negative() as i32 + 2 * i.negative() as i32;
    for q in 0..width {
        let bit = 1u64 << q;
        phase += g(
            i.x_mask & bit != 0,
            i.z_mask & bit != 0,
            h.x_mask & bit != 0,
            h.z_mask & bit != 0,
        );
    }
    debug_assert!(phase.rem_euclid(2) == 0, "product of anticommuting rows");
    h.sign = if phase.rem_euclid(4) == 0 { 1 } else { -1 };
    h.x_mask ^= i.x_mask;
    h.z_mask ^= i.z_mask;
}

/// Destabilizer/stabilizer tableau of a Clifford circuit applied to `|0^n>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabTableau {
    width: usize,
    destabilizers: Vec<PauliRow>,
    stabilizers: Vec<PauliRow>,
}

impl StabTableau {
    /// Tableau of `|0^n>`: stabilizers `+Z_q`, destabilizers `+X_q`.
    pub fn zero_state(width: usize) -> Result<Self> {
        if width == 0 || width > MAX_TABLEAU_WIDTH {
            return Err(Error::Capacity {
                what: "tableau",
                requested: width,
                limit: MAX_TABLEAU_WIDTH,
            });
        }
        let row = |q: usize, x: bool| {
            let bit = 1u64 << (width - 1 - q);
            PauliRow {
                x_mask: if x { bit } else { 0 },
                z_mask: if x { 0 } else { bit },
                sign: 1,
            }
        };
        Ok(StabTableau {
            width,
            destabilizers: (0..width).map(|q| row(q, true)).collect(),
            stabilizers: (0..width).map(|q| row(q, false)).collect(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// The `n` stabilizer generators.
    pub fn generators(&self) -> &[PauliRow] {
        &self.stabilizers
    }

    fn bit(&self, q: usize) -> u64 {
        1u64 << (self.width - 1 - q)
    }

    fn rows_mut(&mut self) -> impl Iterator<Item = &mut PauliRow> {
        self.destabilizers.iter_mut().chain(self.stabilizers.iter_mut())
    }

    pub fn apply(&mut self, gate: &CliffordGate) -> Result<()> {
        if let Some(q) = gate.qubits().into_iter().find(|q| *q >= self.width) {
            return Err(Error::param(format!("gate target {q} out of range for {} qubits", self.width)));
        }
        match *gate {
            CliffordGate::H { qubit } => {
                let b = self.bit(qubit);
                for r in self.rows_mut() {
                    let (x, z) = (r.x_mask & b != 0, r.z_mask & b != 0);
                    if x && z {
                        r.sign = -r.sign;
                    }
                    if x != z {
                        r.x_mask ^= b;
                        r.z_mask ^= b;
                    }
                }
            }
            CliffordGate::S { qubit } => {
                let b = self.bit(qubit);
                for r in self.rows_mut() {
                    if r.x_mask & b != 0 {
                        if r.z_mask & b != 0 {
                            r.sign = -r.sign;
                        }
                        r.z_mask ^= b;
                    }
                }
            }
            CliffordGate::X { qubit } => {
                let b = self.bit(qubit);
                for r in self.rows_mut() {
                    if r.z_mask & b != 0 {
                        r.sign = -r.sign;
                    }
                }
            }
            CliffordGate::Z { qubit } => {
                let b = self.bit(qubit);
                for r in self.rows_mut() {
                    if r.x_mask & b != 0 {
                        r.sign = -r.sign;
                    }
                }
            }
            CliffordGate::Cnot { control, target } => {
                if control == target {
                    return Err(Error::param("CNOT control equals target"));
                }
                let (a, t) = (self.bit(control), self.bit(target));
                for r in self.rows_mut() {
                    let (xa, za) = (r.x_mask & a != 0, r.z_mask & a != 0);
                    let (xb, zb) = (r.x_mask & t != 0, r.z_mask & t != 0);
                    if xa && zb && (xb == za) {
                        r.sign = -r.sign;
                    }
                    if xa {
                        r.x_mask ^= t;
                    }
                    if zb {
                        r.z_mask ^= a;
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks commutation and independence of the generators, and that the
    /// destabilizers pair symplectically with them.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.width;
        for i in 0..n {
            for j in 0..n {
                let s = &self.stabilizers;
                let d = &self.destabilizers;
                if s[i].anticommutes(&s[j]) {
                    return Err(Error::Validity(format!("generators {i} and {j} anticommute")));
                }
                if d[i].anticommutes(&s[j]) != (i == j) {
                    return Err(Error::Validity(format!("destabilizer {i} pairs wrongly with {j}")));
                }
            }
        }
        // Rank over F2 of the 2n-bit rows.
        let mut rows: Vec<u128> = self
            .stabilizers
            .iter()
            .map(|r| (r.x_mask as u128) << 64 | r.z_mask as u128)
            .collect();
        let mut rank = 0;
        for bit in (0..128).rev() {
            let m = 1u128 << bit;
            if let Some(p) = (rank..rows.len()).find(|&k| rows[k] & m != 0) {
                rows.swap(rank, p);
                let pivot = rows[rank];
                for (k, r) in rows.iter_mut().enumerate() {
                    if k != rank && *r & m != 0 {
                        *r ^= pivot;
                    }
                }
                rank += 1;
            }
        }
        if rank != n {
            return Err(Error::Validity(format!("generators have rank {rank} < {n}")));
        }
        Ok(())
    }
}

/// Runs a Clifford gate list on `|0^n>`.
pub fn tableau_from_clifford(gates: &[CliffordGate], n: usize) -> Result<StabTableau> {
    let mut t = StabTableau::zero_state(n)?;
    for gate in gates {
        t.apply(gate)?;
    }
    Ok(t)
}

/// Gate-list length of [`random_clifford`]'s walk.
pub fn clifford_walk_length(n: usize) -> usize {
    20 * n * n + 40
}

/// Random Clifford circuit: a lazy random walk of [`clifford_walk_length`]
/// steps over `H`, `S` and `CNOT` on random qubits, followed by a uniformly
/// random Pauli layer so output signs are unbiased. Deterministic per seed.
/// This approximates, but does not exactly equal, the uniform measure on the
/// Clifford group.
pub fn random_clifford(n: usize, seed: u64) -> Result<Vec<CliffordGate>> {
    if n == 0 {
        return Err(Error::param("random Clifford needs at least one qubit"));
    }
    let mut rng = rng::stream(seed, rng::domain::CLIFFORD, n as u64, 0);
    let mut gates = Vec::new();
    let kinds = if n >= 2 { 3 } else { 2 };
    for _ in 0..clifford_walk_length(n) {
        if rng.random_bool(0.25) {
            continue;
        }
        let qubit = rng.random_range(0..n);
        gates.push(match rng.random_range(0..kinds) {
            0 => CliffordGate::H { qubit },
            1 => CliffordGate::S { qubit },
            _ => {
                let target = (qubit + rng.random_range(1..n)) % n;
                CliffordGate::Cnot {
                    control: qubit,
                    target,
                }
            }
        });
    }
    for qubit in 0..n {
        if rng.random_bool(0.5) {
            gates.push(CliffordGate::X { qubit });
        }
        if rng.random_bool(0.5) {
            gates.push(CliffordGate::Z { qubit });
        }
    }
    Ok(gates)
}

/// A signed Pauli operator made of `Z` and `I` only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliZString {
    pub width: usize,
    pub z_mask: u64,
    pub sign: i8,
}

impl std::fmt::Display for PauliZString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(if self.sign > 0 { "+" } else { "-" })?;
        for q in 0..self.width {
            let on = self.z_mask >> (self.width - 1 - q) & 1 == 1;
            f.write_str(if on { "Z" } else { "I" })?;
        }
        Ok(())
    }
}

/// Finds a nonzero Z-only element of the stabilizer group, with its sign.
///
/// Generators are row-reduced on the X block (via `rowsum`, so signs follow
/// the products); the rows left with no X part span the Z-only subgroup.
/// Those are brought to reduced echelon form and the row with the lowest
/// pivot is returned, which is the nonzero element with the numerically
/// smallest mask.
pub fn find_z_string(t: &StabTableau) -> Option<PauliZString> {
    let n = t.width;
    let mut rows = t.stabilizers.clone();
    let mut rank = 0;
    for bit in (0..n).rev() {
        let m = 1u64 << bit;
        let Some(p) = (rank..n).find(|&k| rows[k].x_mask & m != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (k, r) in rows.iter_mut().enumerate() {
            if k != rank && r.x_mask & m != 0 {
                rowsum(r, &pivot, n);
            }
        }
        rank += 1;
    }
    let mut zrows: Vec<PauliRow> = rows[rank..].to_vec();
    if zrows.is_empty() {
        return None;
    }
    debug_assert!(zrows.iter().all(|r| r.x_mask == 0 && r.z_mask != 0));
    let mut zrank = 0;
    let mut lowest = None;
    for bit in (0..n).rev() {
        let m = 1u64 << bit;
        let Some(p) = (zrank..zrows.len()).find(|&k| zrows[k].z_mask & m != 0) else {
            continue;
        };
        zrows.swap(zrank, p);
        let pivot = zrows[zrank];
        for (k, r) in zrows.iter_mut().enumerate() {
            if k != zrank && r.z_mask & m != 0 {
                rowsum(r, &pivot, n);
            }
        }
        lowest = Some(zrank);
        zrank += 1;
    }
    lowest.map(|k| PauliZString {
        width: n,
        z_mask: zrows[k].z_mask,
        sign: zrows[k].sign,
    })
}

/// `f(x) = (1 + sign * (-1)^<z, x>) / 2`.
pub fn z_string_witness(p: &PauliZString) -> Result<Witness> {
    let mask = u32::try_from(p.z_mask).map_err(|_| Error::param("Z-string wider than a witness"))?;
    Witness::parity(p.width, mask, p.sign)
}
