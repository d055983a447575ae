//! Transition probabilities on finite rings from the Bloch spectrum.
//!
//! Both walks expand in the plane-wave basis. With `d = (k - j) mod N`:
//!
//! ```text
//! classical  p(d, t) = (1/N) sum_n exp(-t E_n) exp(-i d theta_n)
//! quantum    a(d, t) = (1/N) sum_n exp(-i t E_n) exp(-i d theta_n),  pi = |a|^2
//! ```
//!
//! The quantum probability is always formed from the single amplitude sum;
//! the equivalent double sum over eigenvalue pairs is never evaluated.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::lattice::{spectrum_with_table, LatticeSpec, PhaseTable, Spectrum};

/// Largest imaginary part a classical sum may carry before it is rejected.
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WalkKind {
    Classical,
    Quantum,
}

impl WalkKind {
    pub const ALL: [WalkKind; 2] = [WalkKind::Classical, WalkKind::Quantum];
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkKind::Classical => "classical",
            WalkKind::Quantum => "quantum",
        })
    }
}

impl FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" | "ctrw" => Ok(WalkKind::Classical),
            "quantum" | "ctqw" => Ok(WalkKind::Quantum),
            other => Err(Error::Precondition(format!("unknown walk kind `{other}`"))),
        }
    }
}

/// Quantum amplitudes between one source and one target.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSeries {
    pub lattice: LatticeSpec,
    pub source: usize,
    pub target: usize,
    pub grid: TimeGrid,
    pub values: Vec<Complex64>,
}

impl AmplitudeSeries {
    pub fn probabilities(&self) -> ProbabilitySeries {
        ProbabilitySeries {
            lattice: self.lattice,
            kind: WalkKind::Quantum,
            source: self.source,
            target: self.target,
            grid: self.grid.clone(),
            values: self.values.iter().map(|a| a.norm_sqr()).collect(),
        }
    }
}

/// Transition probabilities between one source and one target.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySeries {
    pub lattice: LatticeSpec,
    pub kind: WalkKind,
    pub source: usize,
    pub target: usize,
    pub grid: TimeGrid,
    pub values: Vec<f64>,
}

impl ProbabilitySeries {
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().iter().copied().zip(self.values.iter().copied())
    }
}

/// Probability of every node over time for a fixed source: row per time
/// point, column per target node.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSnapshot {
    pub lattice: LatticeSpec,
    pub kind: WalkKind,
    pub source: usize,
    pub grid: TimeGrid,
    pub rows: Vec<Vec<f64>>,
}

/// Spectral propagator for one finite ring.
///
/// Everything depends on the node pair only through `d = (k - j) mod N`, so
/// shifted pairs give bit-identical results.
#[derive(Debug, Clone)]
pub struct BlochPropagator {
    spectrum: Spectrum,
    table: PhaseTable,
}

impl BlochPropagator {
    pub fn new(lattice: &LatticeSpec) -> Result<Self> {
        let n = lattice.finite_nodes()?;
        let table = PhaseTable::new(n);
        let spectrum = spectrum_with_table(lattice, &table);
        Ok(Self { spectrum, table })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn lattice(&self) -> &LatticeSpec {
        self.spectrum.lattice()
    }

    pub fn nodes(&self) -> usize {
        self.table.len()
    }

    /// Offset `(k - j) mod N`.
    pub fn offset(&self, source: usize, target: usize) -> Result<usize> {
        let lattice = self.lattice();
        lattice.check_node(source)?;
        lattice.check_node(target)?;
        let n = self.nodes();
        Ok((target + n - source) % n)
    }

    /// `sum_n w_n exp(-i d theta_n) / N` in a fixed summation order.
    #[inline]
    fn plane_wave_sum(&self, weights: &[Complex64], d: usize) -> Complex64 {
        let n = self.nodes();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut r = 0usize;
        for w in weights {
            let phase = Complex64::new(self.table.cos(r), -self.table.sin(r));
            acc += w * phase;
            r += d;
            if r >= n {
                r -= n;
            }
        }
        acc / n as f64
    }

    fn quantum_weights(&self, t: f64) -> Vec<Complex64> {
        self.spectrum
            .eigenvalues()
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -t * e))
            .collect()
    }

    fn classical_weights(&self, t: f64) -> Vec<Complex64> {
        self.spectrum
            .eigenvalues()
            .iter()
            .map(|&e| Complex64::new((-t * e).exp(), 0.0))
            .collect()
    }

    /// Quantum amplitude at offset `d` and time `t`.
    pub fn amplitude(&self, d: usize, t: f64) -> Complex64 {
        self.plane_wave_sum(&self.quantum_weights(t), d % self.nodes())
    }

    pub fn quantum(&self, d: usize, t: f64) -> f64 {
        self.amplitude(d, t).norm_sqr()
    }

    /// Classical probability at offset `d`; fails if the sum is not real.
    pub fn classical(&self, d: usize, t: f64) -> Result<f64> {
        real_part(self.plane_wave_sum(&self.classical_weights(t), d % self.nodes()))
    }

    pub fn probability(&self, kind: WalkKind, d: usize, t: f64) -> Result<f64> {
        match kind {
            WalkKind::Classical => self.classical(d, t),
            WalkKind::Quantum => Ok(self.quantum(d, t)),
        }
    }

    /// Probabilities at every offset `d = 0..N` at time `t`.
    pub fn row(&self, kind: WalkKind, t: f64) -> Result<Vec<f64>> {
        match kind {
            WalkKind::Classical => {
                let w = self.classical_weights(t);
                (0..self.nodes())
                    .map(|d| real_part(self.plane_wave_sum(&w, d)))
                    .collect()
            }
            WalkKind::Quantum => {
                let w = self.quantum_weights(t);
                Ok((0..self.nodes())
                    .map(|d| self.plane_wave_sum(&w, d).norm_sqr())
                    .collect())
            }
        }
    }
}

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAGINARY_RESIDUE_LIMIT {
        return Err(Error::ImaginaryResidue { residue: z.im.abs() });
    }
    Ok(z.re)
}

pub fn quantum_amplitude(
    lattice: &LatticeSpec,
    source: usize,
    target: usize,
    grid: &TimeGrid,
) -> Result<AmplitudeSeries> {
    let prop = BlochPropagator::new(lattice)?;
    let d = prop.offset(source, target)?;
    let values = grid.points().iter().map(|&t| prop.amplitude(d, t)).collect();
    Ok(AmplitudeSeries {
        lattice: *lattice,
        source,
        target,
        grid: grid.clone(),
        values,
    })
}

pub fn quantum_probability(
    lattice: &LatticeSpec,
    source: usize,
    target: usize,
    grid: &TimeGrid,
) -> Result<ProbabilitySeries> {
    Ok(quantum_amplitude(lattice, source, target, grid)?.probabilities())
}

pub fn classical_probability(
    lattice: &LatticeSpec,
    source: usize,
    target: usize,
    grid: &TimeGrid,
) -> Result<ProbabilitySeries> {
    let prop = BlochPropagator::new(lattice)?;
    let d = prop.offset(source, target)?;
    let values = grid
        .points()
        .iter()
        .map(|&t| prop.classical(d, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbabilitySeries {
        lattice: *lattice,
        kind: WalkKind::Classical,
        source,
        target,
        grid: grid.clone(),
        values,
    })
}

pub fn transition_probability(
    lattice: &LatticeSpec,
    kind: WalkKind,
    source: usize,
    target: usize,
    grid: &TimeGrid,
) -> Result<ProbabilitySeries> {
    match kind {
        WalkKind::Classical => classical_probability(lattice, source, target, grid),
        WalkKind::Quantum => quantum_probability(lattice, source, target, grid),
    }
}

/// Probability of still (or again) being at the source node.
pub fn return_probability(
    lattice: &LatticeSpec,
    kind: WalkKind,
    source: usize,
    grid: &TimeGrid,
) -> Result<ProbabilitySeries> {
    transition_probability(lattice, kind, source, source, grid)
}

/// Full node-resolved evolution from `source`, rows evaluated in parallel.
pub fn distribution_snapshot(
    lattice: &LatticeSpec,
    source: usize,
    kind: WalkKind,
    grid: &TimeGrid,
) -> Result<DistributionSnapshot> {
    let prop = BlochPropagator::new(lattice)?;
    lattice.check_node(source)?;
    let n = prop.nodes();
    let rows = grid
        .points()
        .par_iter()
        .map(|&t| {
            let by_offset = prop.row(kind, t)?;
            Ok((0..n).map(|k| by_offset[(k + n - source) % n]).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(DistributionSnapshot {
        lattice: *lattice,
        kind,
        source,
        grid: grid.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ring(n: usize, m: usize) -> LatticeSpec {
        LatticeSpec::ring(n, m).unwrap()
    }

    // Closed forms for C4 from its four-term eigen-sum:
    // a(0,t) = e^{-2it} cos^2 t, pi(1,t) = sin^2(2t)/4, pi(2,t) = sin^4 t,
    // p(1,t) = (1 - e^{-4t})/4.

    #[test]
    fn c4_amplitude_closed_form() {
        let grid = TimeGrid::linear(0.0, 3.0, 31).unwrap();
        let a = quantum_amplitude(&ring(4, 1), 0, 0, &grid).unwrap();
        for (t, v) in grid.points().iter().zip(&a.values) {
            let expected = Complex64::from_polar(t.cos().powi(2), -2.0 * t);
            assert!((v - expected).norm() < 1e-14, "t={t}");
        }
        let p = a.probabilities();
        let quarter = quantum_probability(&ring(4, 1), 0, 0, &TimeGrid::at(PI / 4.0).unwrap())
            .unwrap();
        assert!((quarter.values[0] - 0.25).abs() < 1e-14);
        assert_eq!(p.values[0], 1.0);
    }

    #[test]
    fn c4_quantum_closed_forms() {
        let lattice = ring(4, 1);
        let t = TimeGrid::at(PI / 2.0).unwrap();
        let opposite = quantum_probability(&lattice, 0, 2, &t).unwrap();
        assert!((opposite.values[0] - 1.0).abs() < 1e-14);
        let t = TimeGrid::at(PI / 4.0).unwrap();
        let neighbor = quantum_probability(&lattice, 0, 1, &t).unwrap();
        assert!((neighbor.values[0] - 0.25).abs() < 1e-14);

        let grid = TimeGrid::linear(0.0, 5.0, 51).unwrap();
        let far = quantum_probability(&lattice, 1, 3, &grid).unwrap();
        for (t, v) in far.samples() {
            assert!((v - t.sin().powi(4)).abs() < 1e-14);
        }
    }

    #[test]
    fn c4_classical_closed_form() {
        let lattice = ring(4, 1);
        let t = (2.0f64).ln() / 4.0;
        let p = classical_probability(&lattice, 0, 1, &TimeGrid::at(t).unwrap()).unwrap();
        assert!((p.values[0] - 0.125).abs() < 1e-15);
    }

    #[test]
    fn initial_condition_is_a_delta() {
        let lattice = ring(100, 1);
        let grid = TimeGrid::at(0.0).unwrap();
        for kind in WalkKind::ALL {
            let s = distribution_snapshot(&lattice, 17, kind, &grid).unwrap();
            for (k, &v) in s.rows[0].iter().enumerate() {
                let expected = if k == 17 { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-14, "{kind} k={k} v={v}");
            }
        }
    }

    #[test]
    fn classical_equipartition_at_n100() {
        let lattice = ring(100, 3);
        let grid = TimeGrid::at(200.0).unwrap();
        for k in [0, 1, 37, 50, 99] {
            let p = classical_probability(&lattice, 0, k, &grid).unwrap();
            assert!((p.values[0] - 0.01).abs() < 1e-6);
        }
        let late = TimeGrid::at(1000.0).unwrap();
        let s = distribution_snapshot(&ring(100, 2), 0, WalkKind::Classical, &late).unwrap();
        assert!(s.rows[0].iter().all(|v| (v - 0.01).abs() < 1e-6));
    }

    #[test]
    fn c4_perfect_transfer_row() {
        let grid = TimeGrid::at(PI / 2.0).unwrap();
        let s = distribution_snapshot(&ring(4, 1), 0, WalkKind::Quantum, &grid).unwrap();
        let expected = [0.0, 0.0, 1.0, 0.0];
        for (v, e) in s.rows[0].iter().zip(expected) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn rows_are_normalized() {
        let grid = TimeGrid::linear(0.0, 30.0, 61).unwrap();
        for (n, m) in [(7, 2), (20, 3), (64, 5), (101, 50)] {
            for kind in WalkKind::ALL {
                let s = distribution_snapshot(&ring(n, m), 3, kind, &grid).unwrap();
                for row in &s.rows {
                    let total: f64 = row.iter().sum();
                    assert!((total - 1.0).abs() < 1e-10, "{kind} N={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn classical_decays_towards_uniform() {
        let grid = TimeGrid::logarithmic(0.01, 500.0, 200).unwrap();
        let p = return_probability(&ring(40, 2), WalkKind::Classical, 0, &grid).unwrap();
        for w in p.values.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!((p.values.last().unwrap() - 1.0 / 40.0).abs() < 1e-10);
    }

    #[test]
    fn node_range_is_checked() {
        let grid = TimeGrid::at(1.0).unwrap();
        let err = quantum_probability(&ring(10, 2), 0, 10, &grid).unwrap_err();
        assert_eq!(err, Error::NodeOutOfRange { node: 10, size: 10 });
        let inf = LatticeSpec::infinite(1).unwrap();
        assert_eq!(
            classical_probability(&inf, 0, 0, &grid).unwrap_err(),
            Error::InfiniteLattice
        );
    }
}
