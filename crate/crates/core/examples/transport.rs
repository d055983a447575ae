//! Character times and transport velocities on the infinite lattice.
//!
//! Run with `cargo run --release --example transport`. The classical sweep
//! takes a while because the first maximum moves out as `L^2`.

use ringwalk::transport::transport_samples;
use ringwalk::{fit_linear_velocity, fit_quadratic, FitModel, QuadratureConfig, WalkKind};

fn main() -> ringwalk::Result<()> {
    let cfg = QuadratureConfig::default();
    for m in 1..=3 {
        let quantum = transport_samples(WalkKind::Quantum, m, 5..=30, &cfg)?;
        let pairs: Vec<(f64, f64)> = quantum.iter().map(|s| (s.path_length as f64, s.character_time)).collect();
        if let FitModel::Linear { velocity, offset } = fit_linear_velocity(&pairs)?.model {
            println!("quantum   m={m}: v = {velocity:.3}, t0 = {offset:.3}");
        }

        let classical = transport_samples(WalkKind::Classical, m, (5..=30).step_by(5), &cfg)?;
        let pairs: Vec<(f64, f64)> = classical.iter().map(|s| (s.path_length as f64, s.character_time)).collect();
        let fit = fit_quadratic(&pairs)?;
        if let FitModel::Quadratic { beta } = fit.model {
            let speeds: Vec<String> = classical.iter().map(|s| format!("{:.3}", s.velocity())).collect();
            println!("classical m={m}: beta = {beta:.4}, R^2 = {:.5}, L/t_c = {}", fit.r_squared, speeds.join(" "));
        }
    }
    Ok(())
}
