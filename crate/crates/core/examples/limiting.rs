//! Long-time averaged distributions and the mirror-node asymmetry.
//!
//! Run with `cargo run --example limiting`.

use ringwalk::limiting::closed_form_cycle_exact;
use ringwalk::{asymmetry_scan, complete_graph_limit, limiting_distribution, LatticeSpec};

fn main() -> ringwalk::Result<()> {
    let cycle = closed_form_cycle_exact(10)?;
    let chi = limiting_distribution(&LatticeSpec::ring(10, 1)?, 0)?;
    println!("cycle N=10: exact {} {} {}; computed {:.6} {:.6} {:.6}", cycle[0], cycle[1], cycle[5], chi.values[0], chi.values[1], chi.values[5]);

    let k7 = complete_graph_limit(7)?;
    println!("complete graph N=7: chi(0) = {:.6}, chi(k) = {:.6}", k7.values[0], k7.values[1]);

    for m in [1, 6, 12] {
        let chi = limiting_distribution(&LatticeSpec::ring(100, m)?, 0)?;
        println!("N=100 m={m:<2}: source {:.4}, opposite {:.4}, node 25 {:.4}", chi.values[0], chi.values[50], chi.values[25]);
    }

    let scan = asymmetry_scan(100, 1..=49)?;
    println!("{} connectivities break mirror symmetry at N=100: {:?}", scan.nonzero.len(), scan.nonzero);
    Ok(())
}
