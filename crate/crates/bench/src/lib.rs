//! Fixed inputs for the kernel benchmarks.

use qverify_core::mirror::initial_guess;
use qverify_core::qsim::random_brickwork;
use qverify_core::stab::{random_clifford, tableau_from_clifford, StabTableau};
use qverify_core::{Circuit, DensePmf, GibbsGuess, Witness};

pub const SEED: u64 = 7;

pub fn brickwork(n: usize) -> Circuit {
    random_brickwork(n, 2 * n, SEED).expect("valid brickwork size")
}

/// A guess after `t` random indicator witnesses.
pub fn gibbs_guess(n: usize, t: usize, eps: f64) -> GibbsGuess {
    let mut g = initial_guess(n, eps).expect("valid guess");
    for k in 0..t {
        let mask = (0..1usize << n).map(|i| (i.wrapping_mul(2654435761) >> (k % 16)) & 1 == 1).collect();
        g.push(Witness::indicator(n, mask).expect("width matches")).expect("push");
    }
    g
}

pub fn clifford_tableau(n: usize) -> StabTableau {
    let gates = random_clifford(n, SEED).expect("valid width");
    tableau_from_clifford(&gates, n).expect("valid gates")
}

/// Exponential weights, close in shape to a random-circuit output.
pub fn porter_thomas(n: usize) -> DensePmf {
    let len = 1usize << n;
    let weights = (0..len)
        .map(|i| {
            let u = ((i as f64 + 0.5) * 0.618_033_988_749_895).fract();
            -u.ln()
        })
        .collect();
    DensePmf::from_weights(n, weights).expect("positive weights")
}
