//! Return and transition probabilities on a finite ring, classical against quantum.
//!
//! Run with `cargo run --example finite_evolution`.

use ringwalk::{distribution_snapshot, return_probability, transition_probability};
use ringwalk::{LatticeSpec, TimeGrid, WalkKind};

fn main() -> ringwalk::Result<()> {
    let grid = TimeGrid::linear(0.0, 40.0, 9)?;
    for m in 1..=3 {
        let lattice = LatticeSpec::ring(100, m)?;
        let classical = return_probability(&lattice, WalkKind::Classical, 0, &grid)?;
        let quantum = return_probability(&lattice, WalkKind::Quantum, 0, &grid)?;
        let opposite = transition_probability(&lattice, WalkKind::Quantum, 0, 50, &grid)?;
        println!("{lattice}");
        println!("{:>6} {:>12} {:>12} {:>12}", "t", "p(0,0)", "pi(0,0)", "pi(50,0)");
        for i in 0..grid.len() {
            println!(
                "{:>6.1} {:>12.6} {:>12.6} {:>12.3e}",
                grid.points()[i],
                classical.values[i],
                quantum.values[i],
                opposite.values[i]
            );
        }
    }

    // A full carpet: every node at every time.
    let lattice = LatticeSpec::ring(100, 1)?;
    let carpet = distribution_snapshot(&lattice, 0, WalkKind::Quantum, &TimeGrid::linear(0.0, 30.0, 301)?)?;
    let last = carpet.rows.last().expect("non-empty grid");
    let (peak, value) = last
        .iter()
        .enumerate()
        .take(51)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty row");
    println!("at t=30 the quantum front peaks at node {peak} with {value:.4}");
    Ok(())
}
