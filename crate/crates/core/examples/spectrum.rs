//! Bloch spectrum of a ring and its degeneracy classes.
//!
//! Run with `cargo run --example spectrum -- 100 3`.

use ringwalk::{bloch_eigenvalues, degeneracy_partition, pattern_equivalent, LatticeSpec};

fn main() -> ringwalk::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n, m) = match args.as_slice() {
        [n, m, ..] => (*n, *m),
        _ => (100, 3),
    };
    let lattice = LatticeSpec::ring(n, m)?;
    let spectrum = bloch_eigenvalues(&lattice)?;
    let partition = degeneracy_partition(&spectrum);

    println!("{lattice}: {} modes, {} distinct eigenvalues", spectrum.len(), partition.classes().len());
    println!("largest eigenvalue {:.6} (bound {})", spectrum.max_eigenvalue(), lattice.spectral_bound());
    for (value, class) in partition.class_values().iter().zip(partition.classes()).take(6) {
        println!("  E = {value:>10.6}  modes {class:?}");
    }
    if !partition.near_gaps().is_empty() {
        println!("{} near-degenerate gaps worth a second look", partition.near_gaps().len());
    }

    // Connectivities that share the degeneracy pattern share the limiting distribution.
    let twins: Vec<usize> = (1..=LatticeSpec::max_connectivity(n))
        .filter(|&other| other != m && pattern_equivalent(n, m, other).unwrap_or(false))
        .collect();
    println!("same pattern as m={m}: {twins:?}");
    Ok(())
}
