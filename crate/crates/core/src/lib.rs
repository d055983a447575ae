//! Continuous-time quantum and classical random walks on ring lattices in
//! which every node links to its `m` nearest neighbors on each side.
//!
//! Everything is evaluated spectrally: the ring Laplacian is circulant, so
//! its eigenvalues are known in closed form and transition probabilities,
//! long-time averages and infinite-lattice limits reduce to sums or integrals
//! over plane waves. A brute-force [`oracle`] (dense eigendecomposition and
//! RK4 time stepping) cross-checks the spectral path on small rings.
//!
//! ```
//! use ringwalk::{limiting_distribution, LatticeSpec};
//!
//! let chi = limiting_distribution(&LatticeSpec::ring(4, 1).unwrap(), 0).unwrap();
//! assert!((chi.values[0] - 0.375).abs() < 1e-12);
//! ```

// Negated float comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference values in tests carry more digits than f64 holds on purpose.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod cli;
pub mod error;
pub mod finite;
pub mod grid;
pub mod infinite;
pub mod lattice;
pub mod limiting;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod transport;

pub use error::{Error, Result};
pub use finite::{
    classical_probability, distribution_snapshot, quantum_amplitude, quantum_probability,
    return_probability, transition_probability, AmplitudeSeries, BlochPropagator,
    DistributionSnapshot, ProbabilitySeries, WalkKind,
};
pub use grid::{Spacing, TimeGrid};
pub use infinite::{
    bessel_m1, infinite_classical, infinite_probability, infinite_quantum, no_wrap_check,
    InfiniteWalk, NoWrapReport, QuadratureConfig,
};
pub use lattice::{
    bloch_eigenvalues, build_laplacian, degeneracy_partition, pattern_equivalent,
    DegeneracyPartition, LatticeSize, LatticeSpec, Spectrum,
};
pub use limiting::{
    asymmetry_delta, asymmetry_scan, closed_form_cycle, complete_graph_limit,
    general_mirror_asymmetry, limiting_distribution, AsymmetryScan, LimitingDistribution,
};
pub use transport::{
    character_time, delta_scaling, fit_linear_velocity, fit_quadratic, scaling_exponent,
    FitModel, FitResult, TransportSample,
};
