//! Power laws: return-probability decay on the chain and the decay of the
//! mirror asymmetry with ring size.
//!
//! Run with `cargo run --release --example scaling`.

use ringwalk::transport::{infinite_return_series, CLUSTER_BAND};
use ringwalk::{delta_scaling, scaling_exponent, FitModel, QuadratureConfig, WalkKind};

fn exponent(model: FitModel) -> f64 {
    match model {
        FitModel::Power { exponent, .. } => exponent,
        _ => f64::NAN,
    }
}

fn main() -> ringwalk::Result<()> {
    let cfg = QuadratureConfig::default();

    let (t, p) = infinite_return_series(WalkKind::Classical, 1, (20.0, 80.0), &cfg)?;
    let classical = scaling_exponent(&t, &p, (20.0, 80.0), false)?;
    println!("classical return ~ t^{:.4}", exponent(classical.model));

    let (t, p) = infinite_return_series(WalkKind::Quantum, 1, (10.0, 100.0), &cfg)?;
    let quantum = scaling_exponent(&t, &p, (10.0, 100.0), true)?;
    println!("quantum return envelope ~ t^{:.4} from {} maxima", exponent(quantum.model), quantum.samples);

    let sizes: Vec<usize> = (20..=200).step_by(2).collect();
    let delta = delta_scaling(2, &sizes, CLUSTER_BAND)?;
    println!(
        "m=2 asymmetry ~ N^{:.4} over a cluster of {} sizes ({} clusters in total)",
        exponent(delta.fit.model),
        delta.clusters[0].len(),
        delta.clusters.len()
    );
    Ok(())
}
