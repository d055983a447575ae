//! Ring lattices with 2m-nearest-neighbor connectivity, their Laplacian and
//! the analytic Bloch spectrum.
//!
//! Nodes are labelled `0..N`. A walker on node `i` hops to every node whose
//! ring distance from `i` lies in `1..=m`, all at the same rate (fixed to 1).
//! Translation invariance diagonalizes the Laplacian in the plane-wave basis
//! with phases `theta_n = 2 pi n / N`, giving
//!
//! ```text
//! E_n = 2m - 2 * sum_{j=1..m} cos(j * theta_n)
//! ```

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Node count of a lattice: a finite ring or the infinite chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeSize {
    Finite(usize),
    Infinite,
}

impl fmt::Display for LatticeSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSize::Finite(n) => write!(f, "{n}"),
            LatticeSize::Infinite => f.write_str("inf"),
        }
    }
}

/// A ring lattice `(N, m)` or the infinite-lattice limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    size: LatticeSize,
    connectivity: usize,
}

impl LatticeSpec {
    /// Transmission rate between linked nodes. Rescaling it only rescales time.
    pub const HOPPING_RATE: f64 = 1.0;

    /// Finite ring of `n` nodes, each linked to `m` neighbors per side.
    pub fn ring(n: usize, m: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidLattice(format!(
                "N = {n} violates N >= 3"
            )));
        }
        if m < 1 {
            return Err(Error::InvalidLattice(format!("m = {m} violates m >= 1")));
        }
        let max_m = Self::max_connectivity(n);
        if m > max_m {
            return Err(Error::InvalidLattice(format!(
                "m = {m} violates m <= floor((N-1)/2) = {max_m} for N = {n}"
            )));
        }
        Ok(Self {
            size: LatticeSize::Finite(n),
            connectivity: m,
        })
    }

    /// Infinite chain with `m` neighbors per side.
    pub fn infinite(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidLattice(format!("m = {m} violates m >= 1")));
        }
        Ok(Self {
            size: LatticeSize::Infinite,
            connectivity: m,
        })
    }

    /// The complete graph `K_n` as a ring lattice; `n` must be odd.
    pub fn complete(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::InvalidLattice(format!(
                "N = {n} is even; only odd N = 2m+1 rings are complete"
            )));
        }
        Self::ring(n, (n - 1) / 2)
    }

    /// Largest valid `m` for a ring of `n` nodes.
    pub fn max_connectivity(n: usize) -> usize {
        n.saturating_sub(1) / 2
    }

    pub fn size(&self) -> LatticeSize {
        self.size
    }

    /// Node count, or `None` for the infinite lattice.
    pub fn nodes(&self) -> Option<usize> {
        match self.size {
            LatticeSize::Finite(n) => Some(n),
            LatticeSize::Infinite => None,
        }
    }

    pub(crate) fn finite_nodes(&self) -> Result<usize> {
        self.nodes().ok_or(Error::InfiniteLattice)
    }

    pub fn connectivity(&self) -> usize {
        self.connectivity
    }

    pub fn hopping_rate(&self) -> f64 {
        Self::HOPPING_RATE
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.size, LatticeSize::Finite(_))
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.size, LatticeSize::Finite(n) if n == 2 * self.connectivity + 1)
    }

    /// Node degree `2m`.
    pub fn degree(&self) -> usize {
        2 * self.connectivity
    }

    /// Upper bound on the spectrum, attained when every cosine equals -1.
    pub fn spectral_bound(&self) -> f64 {
        4.0 * self.connectivity as f64
    }

    /// Upper bound on the group velocity `|dE/dtheta| <= m(m+1)`.
    pub fn group_velocity_bound(&self) -> f64 {
        let m = self.connectivity as f64;
        m * (m + 1.0)
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        let n = self.finite_nodes()?;
        if node >= n {
            return Err(Error::NodeOutOfRange { node, size: n });
        }
        Ok(())
    }

    /// Shortest distance between two nodes measured along the ring.
    pub fn ring_distance(&self, a: usize, b: usize) -> Result<usize> {
        self.check_node(a)?;
        self.check_node(b)?;
        let n = self.finite_nodes()?;
        let d = (b + n - a) % n;
        Ok(d.min(n - d))
    }

    /// Number of hops on the shortest path between two nodes.
    pub fn path_length(&self, a: usize, b: usize) -> Result<usize> {
        Ok(self.ring_distance(a, b)?.div_ceil(self.connectivity))
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(N={}, m={})", self.size, self.connectivity)
    }
}

/// Laplacian of a finite ring: `2m` on the diagonal, `-1` between nodes at
/// ring distance `1..=m`.
pub fn build_laplacian(lattice: &LatticeSpec) -> Result<DMatrix<i64>> {
    let n = lattice.finite_nodes()?;
    let m = lattice.connectivity();
    let mut a = DMatrix::<i64>::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = (2 * m) as i64;
        for z in 1..=m {
            a[(i, (i + z) % n)] = -1;
            a[(i, (i + n - z) % n)] = -1;
        }
    }
    Ok(a)
}

/// `cos` and `sin` of `2 pi r / N` for `r` in `0..N`.
///
/// Any phase `d * theta_n` is looked up as `(d * n) mod N`, so large products
/// never go through argument reduction.
#[derive(Debug, Clone)]
pub(crate) struct PhaseTable {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl PhaseTable {
    pub(crate) fn new(n: usize) -> Self {
        let (cos, sin) = (0..n)
            .map(|r| {
                let theta = 2.0 * PI * r as f64 / n as f64;
                (theta.cos(), theta.sin())
            })
            .unzip();
        Self { cos, sin }
    }

    pub(crate) fn len(&self) -> usize {
        self.cos.len()
    }

    #[inline]
    pub(crate) fn cos(&self, r: usize) -> f64 {
        self.cos[r % self.cos.len()]
    }

    #[inline]
    pub(crate) fn sin(&self, r: usize) -> f64 {
        self.sin[r % self.sin.len()]
    }
}

/// Bloch eigenvalues `E_n` and phases `theta_n` of a finite ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    lattice: LatticeSpec,
    eigenvalues: Vec<f64>,
    phases: Vec<f64>,
}

impl Spectrum {
    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(0.0, f64::max)
    }

    /// Sum of eigenvalues, equal to the Laplacian trace `2mN`.
    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Analytic eigenvalues of the ring Laplacian.
///
/// Only `n <= N/2` is evaluated; the upper half is copied so `E_n == E_{N-n}`
/// holds bit for bit.
pub fn bloch_eigenvalues(lattice: &LatticeSpec) -> Result<Spectrum> {
    let n = lattice.finite_nodes()?;
    let table = PhaseTable::new(n);
    Ok(spectrum_with_table(lattice, &table))
}

pub(crate) fn spectrum_with_table(lattice: &LatticeSpec, table: &PhaseTable) -> Spectrum {
    let n = table.len();
    let m = lattice.connectivity();
    let mut eigenvalues = vec![0.0; n];
    for idx in 1..=n / 2 {
        let cos_sum: f64 = (1..=m).map(|j| table.cos(j * idx)).sum();
        let e = 2.0 * m as f64 - 2.0 * cos_sum;
        eigenvalues[idx] = e;
        eigenvalues[n - idx] = e;
    }
    let phases = (0..n).map(|idx| 2.0 * PI * idx as f64 / n as f64).collect();
    Spectrum {
        lattice: *lattice,
        eigenvalues,
        phases,
    }
}

/// Eigenvalue gap that still counts as a degeneracy for connectivity `m`.
pub fn degeneracy_tolerance(m: usize) -> f64 {
    1e-9 * (2.0 * m as f64).max(1.0)
}

/// Two neighboring classes whose eigenvalues sit closer than ten tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct NearDegeneracy {
    pub lower_class: usize,
    pub upper_class: usize,
    pub gap: f64,
}

/// Eigenvalue indices grouped into classes of equal eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyPartition {
    classes: Vec<Vec<usize>>,
    class_values: Vec<f64>,
    class_of: Vec<usize>,
    tolerance: f64,
    near_gaps: Vec<NearDegeneracy>,
}

impl DegeneracyPartition {
    /// Classes in ascending eigenvalue order; indices inside a class ascend.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_values(&self) -> &[f64] {
        &self.class_values
    }

    /// Class id of eigenvalue index `n`.
    pub fn class_of(&self, n: usize) -> usize {
        self.class_of[n]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Sorted multiset of class sizes.
    pub fn signature(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.classes.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    /// Adjacent classes separated by less than ten tolerances.
    pub fn near_gaps(&self) -> &[NearDegeneracy] {
        &self.near_gaps
    }

    /// Labels every index by the smallest index of its class, which identifies
    /// the set partition independently of class ordering.
    pub fn canonical_labels(&self) -> Vec<usize> {
        self.class_of.iter().map(|&c| self.classes[c][0]).collect()
    }
}

/// Groups eigenvalues that agree within [`degeneracy_tolerance`].
pub fn degeneracy_partition(spectrum: &Spectrum) -> DegeneracyPartition {
    let m = spectrum.lattice().connectivity();
    let tolerance = degeneracy_tolerance(m);
    let e = spectrum.eigenvalues();

    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by(|&a, &b| e[a].total_cmp(&e[b]).then(a.cmp(&b)));

    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_start = f64::NAN;
    for &idx in &order {
        match classes.last_mut() {
            Some(class) if e[idx] - class_start <= tolerance => class.push(idx),
            _ => {
                class_start = e[idx];
                classes.push(vec![idx]);
            }
        }
    }

    let mut class_of = vec![0; e.len()];
    for (c, class) in classes.iter_mut().enumerate() {
        class.sort_unstable();
        for &idx in class.iter() {
            class_of[idx] = c;
        }
    }
    let class_values: Vec<f64> = classes.iter().map(|c| e[c[0]]).collect();

    let mut near_gaps = Vec::new();
    for c in 1..classes.len() {
        let lower_max = classes[c - 1].iter().map(|&i| e[i]).fold(f64::MIN, f64::max);
        let upper_min = classes[c].iter().map(|&i| e[i]).fold(f64::MAX, f64::min);
        let gap = upper_min - lower_max;
        if gap <= 10.0 * tolerance {
            near_gaps.push(NearDegeneracy {
                lower_class: c - 1,
                upper_class: c,
                gap,
            });
        }
    }

    DegeneracyPartition {
        classes,
        class_values,
        class_of,
        tolerance,
        near_gaps,
    }
}

/// Whether `(n, m1)` and `(n, m2)` split the eigenvalue indices into the same
/// classes, in which case their limiting distributions coincide.
pub fn pattern_equivalent(n: usize, m1: usize, m2: usize) -> Result<bool> {
    let a = degeneracy_partition(&bloch_eigenvalues(&LatticeSpec::ring(n, m1)?)?);
    let b = degeneracy_partition(&bloch_eigenvalues(&LatticeSpec::ring(n, m2)?)?);
    Ok(a.canonical_labels() == b.canonical_labels())
}
