//! Long-time averaged quantum probabilities and mirror-node asymmetry.
//!
//! Averaging `|a(d,t)|^2` over `t -> infinity` keeps only the pairs of Bloch
//! modes with equal eigenvalue. Grouping the modes into degeneracy classes
//! `C` gives
//!
//! ```text
//! chi(d) = (1/N^2) sum_C | sum_{n in C} exp(-i d theta_n) |^2
//! ```
//!
//! which is real and non-negative term by term.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finite::{BlochPropagator, WalkKind};
use crate::grid::TimeGrid;
use crate::lattice::{degeneracy_partition, DegeneracyPartition, LatticeSpec, PhaseTable};

/// `|Delta|` at or below this value counts as a symmetric pair.
pub const DELTA_ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LimitingDistribution {
    pub lattice: LatticeSpec,
    pub source: usize,
    /// `chi_{k, source}` indexed by target node `k`.
    pub values: Vec<f64>,
    /// Partition the values were computed from; absent for closed forms.
    pub partition: Option<DegeneracyPartition>,
}

impl LimitingDistribution {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn at(&self, node: usize) -> f64 {
        self.values[node % self.values.len()]
    }
}

/// Limiting distribution from the degeneracy classes of the Bloch spectrum.
pub fn limiting_distribution(lattice: &LatticeSpec, source: usize) -> Result<LimitingDistribution> {
    let n = lattice.finite_nodes()?;
    lattice.check_node(source)?;
    let table = PhaseTable::new(n);
    let partition = degeneracy_partition(&crate::lattice::spectrum_with_table(lattice, &table));

    let by_offset: Vec<f64> = (0..n)
        .map(|d| {
            let total: f64 = partition
                .classes()
                .iter()
                .map(|class| {
                    let (re, im) = class.iter().fold((0.0, 0.0), |(re, im), &idx| {
                        let r = (d * idx) % n;
                        (re + table.cos(r), im - table.sin(r))
                    });
                    re * re + im * im
                })
                .sum();
            total / (n * n) as f64
        })
        .collect();

    let values = (0..n).map(|k| by_offset[(k + n - source) % n]).collect();
    Ok(LimitingDistribution {
        lattice: *lattice,
        source,
        values,
        partition: Some(partition),
    })
}

/// Exact limiting probabilities of the cycle `C_N` (`m = 1`) by offset from
/// the source.
///
/// Even `N`: `2(N-1)/N^2` at the source and the opposite node, `(N-2)/N^2`
/// elsewhere. Odd `N`: `(2N-1)/N^2` at the source, `(N-1)/N^2` elsewhere.
pub fn closed_form_cycle_exact(n: usize) -> Result<Vec<Ratio<i64>>> {
    if n < 3 {
        return Err(Error::InvalidLattice(format!("N = {n} violates N >= 3")));
    }
    let nn = n as i64;
    let denom = nn * nn;
    Ok((0..n)
        .map(|d| {
            let numer = if n.is_multiple_of(2) {
                if d == 0 || d == n / 2 {
                    2 * (nn - 1)
                } else {
                    nn - 2
                }
            } else if d == 0 {
                2 * nn - 1
            } else {
                nn - 1
            };
            Ratio::new(numer, denom)
        })
        .collect())
}

pub fn closed_form_cycle(n: usize) -> Result<LimitingDistribution> {
    let exact = closed_form_cycle_exact(n)?;
    Ok(LimitingDistribution {
        lattice: LatticeSpec::ring(n, 1)?,
        source: 0,
        values: exact.iter().map(ratio_to_f64).collect(),
        partition: None,
    })
}

/// Exact limiting probabilities of the complete graph `K_N` by offset:
/// `(N^2 - 2N + 2)/N^2` at the source and `2/N^2` elsewhere.
pub fn complete_graph_limit_exact(n: usize) -> Result<Vec<Ratio<i64>>> {
    LatticeSpec::complete(n)?;
    let nn = n as i64;
    let denom = nn * nn;
    Ok((0..n)
        .map(|d| {
            if d == 0 {
                Ratio::new(nn * nn - 2 * nn + 2, denom)
            } else {
                Ratio::new(2, denom)
            }
        })
        .collect())
}

pub fn complete_graph_limit(n: usize) -> Result<LimitingDistribution> {
    let exact = complete_graph_limit_exact(n)?;
    Ok(LimitingDistribution {
        lattice: LatticeSpec::complete(n)?,
        source: 0,
        values: exact.iter().map(ratio_to_f64).collect(),
        partition: None,
    })
}

fn ratio_to_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn even_ring(n: usize, m: usize) -> Result<LatticeSpec> {
    if n % 2 == 1 {
        return Err(Error::Precondition(format!(
            "mirror node undefined for odd N = {n}"
        )));
    }
    LatticeSpec::ring(n, m)
}

fn normalized_difference(a: f64, b: f64) -> f64 {
    (a - b) / (a + b)
}

/// `(chi_j - chi_{j'}) / (chi_j + chi_{j'})` with mirror node `j' = j + N/2`.
pub fn asymmetry_delta(n: usize, m: usize, source: usize) -> Result<f64> {
    general_mirror_asymmetry(n, m, source, 0)
}

/// Asymmetry between node `j + offset` and its mirror `j + N/2 + offset`.
pub fn general_mirror_asymmetry(n: usize, m: usize, source: usize, offset: usize) -> Result<f64> {
    if offset % 2 == 1 {
        return Err(Error::Precondition(format!(
            "mirror offset must be even, got {offset}"
        )));
    }
    let lattice = even_ring(n, m)?;
    let chi = limiting_distribution(&lattice, source)?;
    let node = (source + offset) % n;
    Ok(normalized_difference(chi.at(node), chi.at(node + n / 2)))
}

pub fn is_asymmetric(delta: f64) -> bool {
    delta.abs() > DELTA_ZERO_THRESHOLD
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetryScan {
    pub n: usize,
    pub m_values: Vec<usize>,
    pub deltas: Vec<f64>,
    /// Connectivities with `|Delta|` above [`DELTA_ZERO_THRESHOLD`].
    pub nonzero: Vec<usize>,
}

/// `Delta` at source 0 for every `m` in `m_values`, evaluated in parallel.
pub fn asymmetry_scan(n: usize, m_values: impl IntoIterator<Item = usize>) -> Result<AsymmetryScan> {
    let m_values: Vec<usize> = m_values.into_iter().collect();
    if n % 2 == 1 {
        return Err(Error::Precondition(format!(
            "mirror node undefined for odd N = {n}"
        )));
    }
    let deltas = m_values
        .par_iter()
        .map(|&m| asymmetry_delta(n, m, 0))
        .collect::<Result<Vec<f64>>>()?;
    let nonzero = m_values
        .iter()
        .zip(&deltas)
        .filter(|(_, &d)| is_asymmetric(d))
        .map(|(&m, _)| m)
        .collect();
    Ok(AsymmetryScan {
        n,
        m_values,
        deltas,
        nonzero,
    })
}

/// Numerical time average `(1/T) int_0^T pi(t) dt` by the trapezoid rule on a
/// resolved grid, for every target node. This is a check on
/// [`limiting_distribution`], not a way to compute it.
pub fn numeric_time_average(lattice: &LatticeSpec, source: usize, horizon: f64) -> Result<Vec<f64>> {
    let prop = BlochPropagator::new(lattice)?;
    lattice.check_node(source)?;
    let grid = TimeGrid::resolved(horizon, prop.spectrum().max_eigenvalue())?;
    let n = prop.nodes();
    let t = grid.points();
    // Fixed-size chunks summed in order keep the result independent of the
    // thread count.
    let chunk_sums = (1..t.len())
        .collect::<Vec<_>>()
        .par_chunks(4096)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut prev = prop.row(WalkKind::Quantum, t[chunk[0] - 1])?;
            for &i in chunk {
                let row = prop.row(WalkKind::Quantum, t[i])?;
                let h = 0.5 * (t[i] - t[i - 1]);
                for d in 0..n {
                    acc[d] += h * (prev[d] + row[d]);
                }
                prev = row;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let mut acc = vec![0.0; n];
    for part in chunk_sums {
        for (a, p) in acc.iter_mut().zip(part) {
            *a += p;
        }
    }
    Ok((0..n).map(|k| acc[(k + n - source) % n] / horizon).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(n: usize, m: usize) -> Vec<f64> {
        limiting_distribution(&LatticeSpec::ring(n, m).unwrap(), 0)
            .unwrap()
            .values
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn small_cycles() {
        assert!(close(&chi(4, 1), &[0.375, 0.125, 0.375, 0.125], 1e-14));
        assert!(close(&chi(5, 1), &[0.36, 0.16, 0.16, 0.16, 0.16], 1e-14));
        assert!(close(&chi(3, 1), &[5.0 / 9.0, 2.0 / 9.0, 2.0 / 9.0], 1e-14));
    }

    #[test]
    fn cycle_closed_forms() {
        let c = closed_form_cycle_exact(100).unwrap();
        assert_eq!(c[0], Ratio::new(198, 10000));
        assert_eq!(c[50], Ratio::new(198, 10000));
        assert_eq!(c[1], Ratio::new(98, 10000));
        let c = closed_form_cycle_exact(101).unwrap();
        assert_eq!(c[0], Ratio::new(201, 10201));
        assert_eq!(c[7], Ratio::new(100, 10201));
        assert!(close(&closed_form_cycle(4).unwrap().values, &chi(4, 1), 1e-12));
        assert!(closed_form_cycle(2).is_err());
    }

    #[test]
    fn complete_graph_closed_form() {
        let k3 = complete_graph_limit_exact(3).unwrap();
        assert_eq!(k3, vec![Ratio::new(5, 9), Ratio::new(2, 9), Ratio::new(2, 9)]);
        let k101 = complete_graph_limit_exact(101).unwrap();
        assert_eq!(k101[0], Ratio::new(10001, 10201));
        for n in (3..60).step_by(2) {
            let total: Ratio<i64> = complete_graph_limit_exact(n).unwrap().into_iter().sum();
            assert_eq!(total, Ratio::from_integer(1));
        }
        assert!(complete_graph_limit(10).is_err());
    }

    #[test]
    fn source_shift_rotates_values() {
        let lattice = LatticeSpec::ring(30, 4).unwrap();
        let a = limiting_distribution(&lattice, 0).unwrap();
        let b = limiting_distribution(&lattice, 11).unwrap();
        for k in 0..30 {
            assert_eq!(a.values[k].to_bits(), b.values[(k + 11) % 30].to_bits());
        }
    }

    #[test]
    fn asymmetry_examples() {
        assert!(asymmetry_delta(100, 1, 0).unwrap().abs() <= DELTA_ZERO_THRESHOLD);
        assert!(asymmetry_delta(100, 2, 0).unwrap().abs() <= DELTA_ZERO_THRESHOLD);
        assert!(is_asymmetric(asymmetry_delta(100, 3, 0).unwrap()));
        assert!(asymmetry_delta(101, 3, 0).is_err());
        let scan = asymmetry_scan(4, [1]).unwrap();
        assert!(scan.nonzero.is_empty());
    }

    #[test]
    fn general_mirror_examples() {
        assert!(general_mirror_asymmetry(100, 1, 0, 2).unwrap().abs() <= DELTA_ZERO_THRESHOLD);
        assert_eq!(
            general_mirror_asymmetry(100, 3, 0, 0).unwrap(),
            asymmetry_delta(100, 3, 0).unwrap()
        );
        assert!(general_mirror_asymmetry(100, 3, 0, 1).is_err());
        let c = chi(100, 12);
        assert!(c[0] > 0.07 && c[50] > 0.07);
    }

    #[test]
    fn time_average_converges() {
        let lattice = LatticeSpec::ring(9, 2).unwrap();
        let avg = numeric_time_average(&lattice, 0, 2000.0).unwrap();
        let chi = limiting_distribution(&lattice, 0).unwrap();
        assert!(close(&avg, &chi.values, 2e-3));
    }
}
