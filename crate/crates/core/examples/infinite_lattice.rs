//! The infinite lattice by quadrature, checked against Bessel closed forms
//! and against a ring large enough that nothing wraps around.
//!
//! Run with `cargo run --example infinite_lattice`.

use ringwalk::infinite::InfiniteWalk;
use ringwalk::{bessel_m1, no_wrap_check, QuadratureConfig, WalkKind};

fn main() -> ringwalk::Result<()> {
    let cfg = QuadratureConfig::default();

    println!("m = 1 against J_d(2t)^2 and e^-2t I_d(2t)");
    for kind in WalkKind::ALL {
        for (d, t) in [(0, 1.0), (3, 2.5), (10, 8.0)] {
            let walk = InfiniteWalk::prepare(kind, 1, d, t, &cfg)?;
            let q = walk.probability(t);
            let b = bessel_m1(kind, d, t)?;
            println!("  {kind:<9} d={d:<3} t={t:<4} quadrature {q:.12} bessel {b:.12} panels {}", walk.panels());
        }
    }

    println!("longer range hopping against a finite ring");
    for (m, d, t) in [(2, 5, 3.0), (3, 10, 2.0), (4, 0, 1.5)] {
        for kind in WalkKind::ALL {
            let r = no_wrap_check(kind, m, d, t, &cfg)?;
            println!(
                "  m={m} d={d:<3} t={t} {kind:<9} infinite {:.10} ring(N={}) {:.10} diff {:.1e}",
                r.infinite, r.nodes, r.finite, r.discrepancy
            );
        }
    }
    Ok(())
}
