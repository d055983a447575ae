//! Cross-checks the spectral propagator against dense diagonalization and a
//! direct Runge-Kutta integration.
//!
//! Run with `cargo run --release --example oracle`.

use ringwalk::oracle::{three_way_agreement, OdeConfig};
use ringwalk::{LatticeSpec, TimeGrid, WalkKind};

fn main() -> ringwalk::Result<()> {
    let grid = TimeGrid::linear(0.0, 20.0, 41)?;
    let ode = OdeConfig::default();
    for (n, m) in [(8, 1), (16, 3), (25, 12), (32, 5)] {
        let lattice = LatticeSpec::ring(n, m)?;
        for kind in WalkKind::ALL {
            let r = three_way_agreement(&lattice, 0, kind, &grid, &ode)?;
            println!(
                "{lattice} {kind:<9} bloch/dense {:.1e}  bloch/ode {:.1e}  dense/ode {:.1e}",
                r.bloch_vs_dense, r.bloch_vs_ode, r.dense_vs_ode
            );
        }
    }
    Ok(())
}
