//! Brute-force reference paths for small rings.
//!
//! Neither path touches the Bloch formula or its phase tables:
//!
//! * dense eigendecomposition of the explicit Laplacian, then
//!   `sum_n f(t lambda_n) <k|q_n><q_n|j>`;
//! * explicit RK4 integration of the master equation `dp/dt = -A p` and the
//!   Schrodinger equation `i da/dt = A a`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::finite::{DistributionSnapshot, WalkKind};
use crate::grid::TimeGrid;
use crate::lattice::{build_laplacian, LatticeSpec};

/// Largest ring accepted by the dense eigensolver path.
pub const DENSE_MAX_NODES: usize = 512;
/// Largest ring accepted by the ODE path.
pub const ODE_MAX_NODES: usize = 256;

/// Orthonormal eigenpairs of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct DenseEigenSystem {
    pub eigenvalues: Vec<f64>,
    /// Column `n` is the eigenvector for `eigenvalues[n]`.
    pub eigenvectors: DMatrix<f64>,
}

impl DenseEigenSystem {
    pub fn of_lattice(lattice: &LatticeSpec) -> Result<Self> {
        let n = lattice.finite_nodes()?;
        if n > DENSE_MAX_NODES {
            return Err(Error::OracleTooLarge {
                size: n,
                limit: DENSE_MAX_NODES,
            });
        }
        let a = build_laplacian(lattice)?.map(|x| x as f64);
        let eig = SymmetricEigen::new(a);
        Ok(Self {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    /// `max |A - V diag(lambda) V^T|`.
    pub fn reconstruction_error(&self, a: &DMatrix<f64>) -> f64 {
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.eigenvalues.clone()));
        let r = &self.eigenvectors * lambda * self.eigenvectors.transpose();
        (a - r).amax()
    }

    /// `max |V^T V - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.eigenvalues.len();
        (self.eigenvectors.transpose() * &self.eigenvectors - DMatrix::identity(n, n)).amax()
    }

    /// Eigenvalues in ascending order.
    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Node-resolved probabilities from the dense eigensystem.
pub fn oracle_probabilities(
    lattice: &LatticeSpec,
    source: usize,
    kind: WalkKind,
    grid: &TimeGrid,
) -> Result<DistributionSnapshot> {
    lattice.check_node(source)?;
    let sys = DenseEigenSystem::of_lattice(lattice)?;
    let n = sys.eigenvalues.len();
    let v = &sys.eigenvectors;
    let rows = grid
        .points()
        .iter()
        .map(|&t| {
            (0..n)
                .map(|k| match kind {
                    WalkKind::Classical => (0..n)
                        .map(|q| (-t * sys.eigenvalues[q]).exp() * v[(k, q)] * v[(source, q)])
                        .sum(),
                    WalkKind::Quantum => (0..n)
                        .map(|q| {
                            Complex64::from_polar(v[(k, q)] * v[(source, q)], -t * sys.eigenvalues[q])
                        })
                        .sum::<Complex64>()
                        .norm_sqr(),
                })
                .collect()
        })
        .collect();
    Ok(DistributionSnapshot {
        lattice: *lattice,
        kind,
        source,
        grid: grid.clone(),
        rows,
    })
}

/// Step-size policy for [`oracle_ode`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    /// Fixed step; `None` derives one from `error_budget`.
    pub step: Option<f64>,
    /// Target accumulated phase error of the fastest mode over the horizon.
    pub error_budget: f64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self {
            step: None,
            error_budget: 1e-9,
        }
    }
}

/// Stability bound `h <= 0.05 / (4m)`.
pub fn max_ode_step(m: usize) -> f64 {
    0.05 / (4.0 * m as f64)
}

/// RK4 per-step phase error of a mode with `z = h E` is `z^5 / 120`; over a
/// horizon `T` that accumulates to `T E z^4 / 120`. The step keeps this under
/// `budget` for the spectral bound `E = 4m`.
pub fn budget_step(m: usize, horizon: f64, budget: f64) -> f64 {
    let e = 4.0 * m as f64;
    let h = (120.0 * budget / (horizon.max(1.0) * e.powi(5))).powf(0.25);
    h.min(max_ode_step(m))
}

/// `out = A x` on a ring, written as `(2m+1) x_i - sum_{|z|<=m} x_{i+z}` with
/// the window sum taken from prefix sums over a wrapped copy of `x`.
struct RingStencil {
    n: usize,
    m: usize,
    prefix: Vec<Complex64>,
}

impl RingStencil {
    fn new(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            prefix: vec![Complex64::new(0.0, 0.0); n + 2 * m + 1],
        }
    }

    fn apply(&mut self, x: &[Complex64], out: &mut [Complex64]) {
        let (n, m) = (self.n, self.m);
        let mut acc = Complex64::new(0.0, 0.0);
        self.prefix[0] = acc;
        for p in 0..n + 2 * m {
            acc += x[(p + n - m) % n];
            self.prefix[p + 1] = acc;
        }
        let width = 2 * m + 1;
        let diag = width as f64;
        for i in 0..n {
            let window = self.prefix[i + width] - self.prefix[i];
            out[i] = x[i] * diag - window;
        }
    }
}

/// Node-resolved probabilities by RK4 integration of the equations of motion.
pub fn oracle_ode(
    lattice: &LatticeSpec,
    source: usize,
    kind: WalkKind,
    grid: &TimeGrid,
    config: &OdeConfig,
) -> Result<DistributionSnapshot> {
    let n = lattice.finite_nodes()?;
    if n > ODE_MAX_NODES {
        return Err(Error::OracleTooLarge {
            size: n,
            limit: ODE_MAX_NODES,
        });
    }
    lattice.check_node(source)?;
    let m = lattice.connectivity();
    let bound = max_ode_step(m);
    let h_max = match config.step {
        Some(h) if !(h > 0.0) || h > bound => {
            return Err(Error::StepTooLarge { step: h, bound });
        }
        Some(h) => h,
        None => budget_step(m, grid.last(), config.error_budget),
    };

    // da/dt = -i A a (quantum) or dp/dt = -A p (classical).
    let coeff = match kind {
        WalkKind::Quantum => Complex64::new(0.0, -1.0),
        WalkKind::Classical => Complex64::new(-1.0, 0.0),
    };
    let mut stencil = RingStencil::new(n, m);
    let zero = Complex64::new(0.0, 0.0);
    let mut state = vec![zero; n];
    state[source] = Complex64::new(1.0, 0.0);
    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut tmp = vec![zero; n];

    let mut rhs = |x: &[Complex64], out: &mut [Complex64]| {
        stencil.apply(x, out);
        for v in out.iter_mut() {
            *v *= coeff;
        }
    };

    let mut rows = Vec::with_capacity(grid.len());
    let mut t = 0.0;
    for &target in grid.points() {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / h_max).ceil() as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                rhs(&state, &mut k1);
                for i in 0..n {
                    tmp[i] = state[i] + k1[i] * (0.5 * h);
                }
                rhs(&tmp, &mut k2);
                for i in 0..n {
                    tmp[i] = state[i] + k2[i] * (0.5 * h);
                }
                rhs(&tmp, &mut k3);
                for i in 0..n {
                    tmp[i] = state[i] + k3[i] * h;
                }
                rhs(&tmp, &mut k4);
                for i in 0..n {
                    state[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
                }
            }
            t = target;
        }
        rows.push(
            state
                .iter()
                .map(|z| match kind {
                    WalkKind::Quantum => z.norm_sqr(),
                    WalkKind::Classical => z.re,
                })
                .collect(),
        );
    }

    Ok(DistributionSnapshot {
        lattice: *lattice,
        kind,
        source,
        grid: grid.clone(),
        rows,
    })
}

/// Largest pointwise difference between two snapshots on the same grid.
pub fn max_abs_difference(a: &DistributionSnapshot, b: &DistributionSnapshot) -> f64 {
    a.rows
        .iter()
        .zip(&b.rows)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

/// Pairwise disagreement of the three routes for one lattice and kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementReport {
    pub lattice: LatticeSpec,
    pub kind: WalkKind,
    pub bloch_vs_dense: f64,
    pub bloch_vs_ode: f64,
    pub dense_vs_ode: f64,
}

impl AgreementReport {
    pub fn worst(&self) -> f64 {
        self.bloch_vs_dense.max(self.bloch_vs_ode).max(self.dense_vs_ode)
    }
}

/// Runs the Bloch, dense-eigen and ODE paths from `source` and compares them.
pub fn three_way_agreement(
    lattice: &LatticeSpec,
    source: usize,
    kind: WalkKind,
    grid: &TimeGrid,
    ode: &OdeConfig,
) -> Result<AgreementReport> {
    let bloch = crate::finite::distribution_snapshot(lattice, source, kind, grid)?;
    let dense = oracle_probabilities(lattice, source, kind, grid)?;
    let stepped = oracle_ode(lattice, source, kind, grid, ode)?;
    Ok(AgreementReport {
        lattice: *lattice,
        kind,
        bloch_vs_dense: max_abs_difference(&bloch, &dense),
        bloch_vs_ode: max_abs_difference(&bloch, &stepped),
        dense_vs_ode: max_abs_difference(&dense, &stepped),
    })
}
