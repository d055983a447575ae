//! Drives an analysis from a `key = value` configuration, the same way the
//! binary does, and prints the CSV it would write.
//!
//! Run with `cargo run --example run_config`.

use ringwalk::cli::{execute, RunConfig};

fn main() {
    let text = "\
# quantum return probability on a small ring
command = evolve
n = 12
m = 2
kind = quantum
source = 0
target = 0
t_max = 5
t_count = 6
";
    let config = RunConfig::parse(text).expect("valid config");
    assert_eq!(RunConfig::parse(&config.serialize()).expect("round trip"), config);
    match execute(&config) {
        Ok(report) => {
            for (_, table) in &report.tables {
                print!("{}", table.to_csv(&config));
            }
        }
        Err(e) => eprintln!("{e:?}"),
    }
}
