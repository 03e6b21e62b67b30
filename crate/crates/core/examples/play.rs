//! Plays one game of mirror-descent Alice against the optimal Bob on an
//! eight-qubit brickwork circuit and prints the outcome.

use qverify_core::arena::{run_game, GameConfig, MirrorDescentAlice, OptimalIndicatorBob, Target};
use qverify_core::qsim::{output_distribution, random_brickwork};

fn main() -> qverify_core::Result<()> {
    let (n, eps, delta) = (8, 0.3, 0.1);
    let circuit = random_brickwork(n, 2 * n, 1)?;
    let target = Target::new("brickwork", output_distribution(&circuit)?);

    let config = GameConfig::new(eps, delta)?;
    let mut alice = MirrorDescentAlice::new(n, eps)?;
    let transcript = run_game(&config, &mut alice, &mut OptimalIndicatorBob, &target, 7)?;

    println!(
        "{:?} after {} rounds, final TV {:.4}",
        transcript.outcome,
        transcript.rounds.len(),
        transcript.final_tv
    );
    Ok(())
}
