use proptest::prelude::*;

use ringwalk::finite::BlochPropagator;
use ringwalk::infinite::no_wrap_check;
use ringwalk::oracle::{three_way_agreement, OdeConfig};
use ringwalk::transport::{fit_power_law, transport_samples};
use ringwalk::{
    bessel_m1, character_time, distribution_snapshot, infinite_probability, limiting_distribution,
    pattern_equivalent, transition_probability, FitModel, LatticeSpec, QuadratureConfig, TimeGrid,
    WalkKind,
};

fn lattice_strategy(max_n: usize) -> impl Strategy<Value = (usize, usize)> {
    (3..=max_n).prop_flat_map(|n| (Just(n), 1..=LatticeSpec::max_connectivity(n)))
}

fn kind_strategy() -> impl Strategy<Value = WalkKind> {
    prop_oneof![Just(WalkKind::Classical), Just(WalkKind::Quantum)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rows_are_normalized((n, m) in lattice_strategy(150), t in 0.0f64..100.0, kind in kind_strategy()) {
        let lattice = LatticeSpec::ring(n, m).unwrap();
        let row = BlochPropagator::new(&lattice).unwrap().row(kind, t).unwrap();
        let total: f64 = row.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-10, "sum {}", total);
        prop_assert!(row.iter().all(|&p| p >= -1e-12));
    }

    #[test]
    fn shifted_pairs_agree_bitwise(
        (n, m) in lattice_strategy(120),
        j in 0usize..1000,
        k in 0usize..1000,
        shift in 0usize..1000,
        t in 0.0f64..50.0,
        kind in kind_strategy(),
    ) {
        let lattice = LatticeSpec::ring(n, m).unwrap();
        let grid = TimeGrid::at(t).unwrap();
        let (j, k) = (j % n, k % n);
        let a = transition_probability(&lattice, kind, j, k, &grid).unwrap().values[0];
        let b = transition_probability(&lattice, kind, (j + shift) % n, (k + shift) % n, &grid)
            .unwrap()
            .values[0];
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn mirrored_distances_agree((n, m) in lattice_strategy(120), t in 0.0f64..50.0, kind in kind_strategy()) {
        let p = BlochPropagator::new(&LatticeSpec::ring(n, m).unwrap()).unwrap();
        for d in 1..n {
            let (a, b) = (p.probability(kind, d, t).unwrap(), p.probability(kind, n - d, t).unwrap());
            prop_assert!((a - b).abs() <= 1e-12, "d={} {} vs {}", d, a, b);
        }
    }

    #[test]
    fn limiting_distribution_is_a_distribution((n, m) in lattice_strategy(120), source in 0usize..200) {
        let lattice = LatticeSpec::ring(n, m).unwrap();
        let chi = limiting_distribution(&lattice, source % n).unwrap();
        prop_assert!((chi.total() - 1.0).abs() <= 1e-10);
        prop_assert!(chi.values.iter().all(|&v| v >= 0.0));
        prop_assert!(chi.at(source % n) >= 1.0 / n as f64 - 1e-12);
    }

    #[test]
    fn pattern_equivalence_is_symmetric(n in 3usize..120, a in 1usize..60, b in 1usize..60) {
        let top = LatticeSpec::max_connectivity(n);
        let (a, b) = (1 + (a - 1) % top, 1 + (b - 1) % top);
        prop_assert_eq!(pattern_equivalent(n, a, b).unwrap(), pattern_equivalent(n, b, a).unwrap());
        prop_assert!(pattern_equivalent(n, a, a).unwrap());
    }

    #[test]
    fn quadrature_matches_bessel_on_the_chain(d in -30i64..=30, t in 0.0f64..50.0, kind in kind_strategy()) {
        let cfg = QuadratureConfig::default();
        let q = infinite_probability(kind, 1, d, t, &cfg).unwrap();
        let b = bessel_m1(kind, d, t).unwrap();
        prop_assert!((q - b).abs() <= 1e-8, "d={} t={}: {} vs {}", d, t, q, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn three_paths_agree((n, m) in lattice_strategy(24), kind in kind_strategy(), source in 0usize..24) {
        let lattice = LatticeSpec::ring(n, m).unwrap();
        let grid = TimeGrid::linear(0.0, 10.0, 21).unwrap();
        let r = three_way_agreement(&lattice, source % n, kind, &grid, &OdeConfig::default()).unwrap();
        prop_assert!(r.worst() <= 1e-8, "{:?}", r);
    }

    #[test]
    fn unwrapped_ring_matches_infinite(m in 1usize..=4, d in -20i64..=20, t in 0.0f64..6.0, kind in kind_strategy()) {
        let r = no_wrap_check(kind, m, d, t, &QuadratureConfig::default()).unwrap();
        prop_assert!(r.discrepancy <= 1e-6, "{:?}", r);
    }
}

#[test]
fn snapshot_rows_follow_the_source() {
    let lattice = LatticeSpec::ring(9, 2).unwrap();
    let grid = TimeGrid::linear(0.0, 3.0, 7).unwrap();
    let a = distribution_snapshot(&lattice, 0, WalkKind::Quantum, &grid).unwrap();
    let b = distribution_snapshot(&lattice, 4, WalkKind::Quantum, &grid).unwrap();
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        for k in 0..9 {
            assert_eq!(ra[k].to_bits(), rb[(k + 4) % 9].to_bits());
        }
    }
}

#[test]
fn anchor_nodes_dominate_at_even_size() {
    // The source always dominates. The opposite node does too, except for a
    // handful of connectivities, checked here against an independent
    // eigen-decomposition of the N = 100 Laplacian.
    let mut opposite_exceptions = Vec::new();
    for m in 1..=49 {
        let chi = limiting_distribution(&LatticeSpec::ring(100, m).unwrap(), 0).unwrap();
        let others = chi
            .values
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != 0 && k != 50)
            .map(|(_, &v)| v)
            .fold(0.0, f64::max);
        assert!(chi.values[0] >= others - 1e-15, "m={m}");
        if chi.values[50] < others - 1e-15 {
            opposite_exceptions.push(m);
        }
    }
    assert_eq!(opposite_exceptions, [19, 20, 39, 40]);
}

#[test]
fn quantum_speed_grows_with_m_and_respects_the_bound() {
    let cfg = QuadratureConfig::default();
    let mut previous = 0.0;
    for m in 1..=4 {
        let d = 20 * m;
        let v = 20.0 / character_time(WalkKind::Quantum, m, d, None, &cfg).unwrap();
        assert!(v > previous, "m={m}: {v} <= {previous}");
        assert!(v <= (m * (m + 1)) as f64, "m={m}: {v}");
        previous = v;
    }
}

#[test]
fn quantum_incremental_speed_is_nearly_constant() {
    let cfg = QuadratureConfig::default();
    for m in 1..=3 {
        let samples = transport_samples(WalkKind::Quantum, m, (10..=30).step_by(5), &cfg).unwrap();
        let increments: Vec<f64> = samples
            .windows(2)
            .map(|w| {
                (w[1].path_length - w[0].path_length) as f64
                    / (w[1].character_time - w[0].character_time)
            })
            .collect();
        let lo = increments.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = increments.iter().cloned().fold(0.0, f64::max);
        assert!((hi - lo) / lo <= 0.10, "m={m}: {increments:?}");
    }
}

#[test]
fn synthetic_inverse_decay_gives_exponent_minus_one() {
    let points: Vec<(f64, f64)> = (20..=200).step_by(4).map(|n| (n as f64, 3.0 / n as f64)).collect();
    match fit_power_law(&points).unwrap().model {
        FitModel::Power { exponent, prefactor } => {
            assert!((exponent + 1.0).abs() < 1e-12);
            assert!((prefactor - 3.0).abs() < 1e-10);
        }
        other => panic!("{other:?}"),
    }
}
