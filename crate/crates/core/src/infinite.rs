//! Transition probabilities on the infinite lattice.
//!
//! In the `N -> infinity` limit the Bloch sums become integrals over the
//! Brillouin zone. With `S(theta) = sum_{j=1..m} cos(j theta)`, both
//! integrands are even in theta, so only `[0, pi]` is integrated:
//!
//! ```text
//! classical  p(d, t) = (1/pi) int_0^pi cos(d theta) exp(2t (S(theta) - m)) dtheta
//! quantum    a(d, t) = (1/pi) int_0^pi cos(d theta) exp(2i t S(theta)) dtheta
//! ```
//!
//! For `m = 1` these reduce to `e^{-2t} I_d(2t)` and `J_d(2t)^2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::finite::{BlochPropagator, WalkKind};
use crate::lattice::LatticeSpec;
use crate::quadrature::GaussLegendre;
use crate::special::{bessel_i_scaled, bessel_j};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance between successive panel doublings.
    pub target_error: f64,
    /// Panel count beyond which refinement gives up.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            target_error: 1e-10,
            max_subdivisions: 1 << 20,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_error > 0.0) {
            return Err(Error::Precondition(format!(
                "quadrature target error must be positive, got {}",
                self.target_error
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Precondition(
                "quadrature needs at least one subdivision".into(),
            ));
        }
        Ok(())
    }
}

/// Initial panel count: eight panels per oscillation of the integrand, whose
/// total phase over `[0, pi]` is bounded by `m(m+1) t + |d|`.
pub fn initial_panels(m: usize, d: u64, t: f64) -> usize {
    let phase = (m * (m + 1)) as f64 * t + d as f64;
    64usize.max(8 * phase.ceil() as usize)
}

/// Integrand values precomputed on one composite rule for a fixed `(m, d)`.
#[derive(Debug, Clone)]
struct PreparedRule {
    /// `w * cos(d theta) / pi` at each node.
    weights: Vec<f64>,
    /// `S(theta)` at each node.
    cos_sums: Vec<f64>,
    panels: usize,
}

impl PreparedRule {
    fn new(m: usize, d: u64, panels: usize) -> Self {
        let rule = GaussLegendre::standard().composite(0.0, PI, panels);
        let d = d as f64;
        let weights = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * (d * x).cos() / PI)
            .collect();
        let cos_sums = rule
            .nodes
            .iter()
            .map(|&x| (1..=m).map(|j| (j as f64 * x).cos()).sum())
            .collect();
        Self {
            weights,
            cos_sums,
            panels,
        }
    }

    fn classical(&self, m: usize, t: f64) -> f64 {
        let m = m as f64;
        self.weights
            .iter()
            .zip(&self.cos_sums)
            .map(|(w, s)| w * (2.0 * t * (s - m)).exp())
            .sum()
    }

    fn amplitude(&self, t: f64) -> Complex64 {
        self.weights
            .iter()
            .zip(&self.cos_sums)
            .map(|(w, s)| {
                let (sin, cos) = (2.0 * t * s).sin_cos();
                Complex64::new(w * cos, w * sin)
            })
            .sum()
    }

    /// Amplitude for quantum, probability for classical.
    fn raw(&self, kind: WalkKind, m: usize, t: f64) -> Complex64 {
        match kind {
            WalkKind::Classical => Complex64::new(self.classical(m, t), 0.0),
            WalkKind::Quantum => self.amplitude(t),
        }
    }
}

/// Quadrature evaluator for a fixed walk kind, connectivity and distance,
/// with its panel count already refined for times up to `t_max`.
#[derive(Debug, Clone)]
pub struct InfiniteWalk {
    kind: WalkKind,
    m: usize,
    d: u64,
    rule: PreparedRule,
    error_estimate: f64,
}

impl InfiniteWalk {
    /// Doubles panels from [`initial_panels`] until two successive estimates
    /// at `t_max` differ by less than the target error.
    pub fn prepare(
        kind: WalkKind,
        m: usize,
        d: i64,
        t_max: f64,
        config: &QuadratureConfig,
    ) -> Result<Self> {
        config.validate()?;
        if m < 1 {
            return Err(Error::InvalidLattice(format!("m = {m} violates m >= 1")));
        }
        if !(t_max >= 0.0) || !t_max.is_finite() {
            return Err(Error::Precondition(format!("time must be >= 0, got {t_max}")));
        }
        let d = d.unsigned_abs();
        let mut panels = initial_panels(m, d, t_max).min(config.max_subdivisions);
        let mut rule = PreparedRule::new(m, d, panels);
        let mut estimate = rule.raw(kind, m, t_max);
        loop {
            let next_panels = panels * 2;
            if next_panels > config.max_subdivisions {
                // Report the last achieved difference, or infinity if no
                // comparison was ever possible.
                return Err(Error::QuadratureNonConvergence {
                    achieved: f64::INFINITY,
                    target: config.target_error,
                    panels,
                });
            }
            let finer = PreparedRule::new(m, d, next_panels);
            let next = finer.raw(kind, m, t_max);
            let diff = (next - estimate).norm();
            panels = next_panels;
            rule = finer;
            estimate = next;
            if diff < config.target_error {
                return Ok(Self {
                    kind,
                    m,
                    d,
                    rule,
                    error_estimate: diff,
                });
            }
            if panels * 2 > config.max_subdivisions {
                return Err(Error::QuadratureNonConvergence {
                    achieved: diff,
                    target: config.target_error,
                    panels,
                });
            }
        }
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn panels(&self) -> usize {
        self.rule.panels
    }

    /// Difference between the last two panel doublings.
    pub fn error_estimate(&self) -> f64 {
        self.error_estimate
    }

    pub fn distance(&self) -> u64 {
        self.d
    }

    /// Quantum amplitude at time `t`; meaningful only for the quantum kind.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(if self.d == 0 { 1.0 } else { 0.0 }, 0.0);
        }
        self.rule.amplitude(t)
    }

    pub fn probability(&self, t: f64) -> f64 {
        if t == 0.0 {
            return if self.d == 0 { 1.0 } else { 0.0 };
        }
        match self.kind {
            WalkKind::Classical => self.rule.classical(self.m, t),
            WalkKind::Quantum => self.rule.amplitude(t).norm_sqr(),
        }
    }
}

/// `lim_{N -> inf} p_{k,j}(t)` for `d = k - j`.
pub fn infinite_classical(m: usize, d: i64, t: f64, config: &QuadratureConfig) -> Result<f64> {
    Ok(InfiniteWalk::prepare(WalkKind::Classical, m, d, t, config)?.probability(t))
}

/// `lim_{N -> inf} pi_{k,j}(t)` for `d = k - j`.
pub fn infinite_quantum(m: usize, d: i64, t: f64, config: &QuadratureConfig) -> Result<f64> {
    Ok(InfiniteWalk::prepare(WalkKind::Quantum, m, d, t, config)?.probability(t))
}

pub fn infinite_probability(
    kind: WalkKind,
    m: usize,
    d: i64,
    t: f64,
    config: &QuadratureConfig,
) -> Result<f64> {
    Ok(InfiniteWalk::prepare(kind, m, d, t, config)?.probability(t))
}

/// Closed forms on the infinite chain (`m = 1`): `e^{-2t} I_d(2t)` for the
/// classical walk and `J_d(2t)^2` for the quantum walk.
pub fn bessel_m1(kind: WalkKind, d: i64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Precondition(format!("time must be >= 0, got {t}")));
    }
    Ok(match kind {
        WalkKind::Classical => bessel_i_scaled(d, 2.0 * t),
        WalkKind::Quantum => bessel_j(d, 2.0 * t).powi(2),
    })
}

/// Finite-ring value against the infinite-lattice value, on a ring large
/// enough that the front cannot have wrapped around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoWrapReport {
    pub kind: WalkKind,
    pub m: usize,
    pub d: i64,
    pub t: f64,
    pub infinite: f64,
    pub finite: f64,
    pub nodes: usize,
    pub discrepancy: f64,
}

/// Ring size used by [`no_wrap_check`]: `2 ceil(m(m+1) t + |d|) + 16`.
pub fn no_wrap_size(m: usize, d: i64, t: f64) -> usize {
    let reach = (m * (m + 1)) as f64 * t + d.unsigned_abs() as f64;
    (2 * reach.ceil() as usize + 16).max(2 * m + 1)
}

pub fn no_wrap_check(
    kind: WalkKind,
    m: usize,
    d: i64,
    t: f64,
    config: &QuadratureConfig,
) -> Result<NoWrapReport> {
    let infinite = infinite_probability(kind, m, d, t, config)?;
    let nodes = no_wrap_size(m, d, t);
    let prop = BlochPropagator::new(&LatticeSpec::ring(nodes, m)?)?;
    let offset = d.rem_euclid(nodes as i64) as usize;
    let finite = prop.probability(kind, offset, t)?;
    Ok(NoWrapReport {
        kind,
        m,
        d,
        t,
        infinite,
        finite,
        nodes,
        discrepancy: (infinite - finite).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn delta_initial_condition() {
        for m in 1..5 {
            assert!((infinite_classical(m, 0, 0.0, &cfg()).unwrap() - 1.0).abs() < 1e-14);
            assert!((infinite_quantum(m, 0, 0.0, &cfg()).unwrap() - 1.0).abs() < 1e-14);
            assert!(infinite_classical(m, 4, 0.0, &cfg()).unwrap().abs() < 1e-14);
            assert!(infinite_quantum(m, -3, 0.0, &cfg()).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn classical_m1_is_scaled_modified_bessel() {
        let got = infinite_classical(1, 3, 2.5, &cfg()).unwrap();
        let want = bessel_i_scaled(3, 5.0);
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn quantum_m1_is_squared_bessel() {
        for (d, t) in [(0, 0.7), (4, 3.0), (-9, 12.0), (25, 20.0)] {
            let got = infinite_quantum(1, d, t, &cfg()).unwrap();
            let want = bessel_j(d, 2.0 * t).powi(2);
            assert!((got - want).abs() < 1e-10, "d={d} t={t}");
        }
    }

    #[test]
    fn quantum_return_vanishes_at_bessel_zero() {
        let t = 2.404825557695772768621632 / 2.0;
        assert!(infinite_quantum(1, 0, t, &cfg()).unwrap() < 1e-9);
    }

    #[test]
    fn matches_large_ring_without_wrap() {
        let inf = infinite_quantum(2, 5, 3.0, &cfg()).unwrap();
        let prop = BlochPropagator::new(&LatticeSpec::ring(64, 2).unwrap()).unwrap();
        assert!((inf - prop.quantum(5, 3.0)).abs() < 1e-6);
    }

    #[test]
    fn no_wrap_examples() {
        let r = no_wrap_check(WalkKind::Quantum, 1, 0, 1.0, &cfg()).unwrap();
        assert!(r.discrepancy <= 1e-8, "{r:?}");
        let r = no_wrap_check(WalkKind::Quantum, 3, 10, 2.0, &cfg()).unwrap();
        assert!(r.discrepancy <= 1e-6, "{r:?}");
        let r = no_wrap_check(WalkKind::Classical, 3, 10, 2.0, &cfg()).unwrap();
        assert!(r.discrepancy <= 1e-8, "{r:?}");
        let r = no_wrap_check(WalkKind::Quantum, 1, 0, 0.0, &cfg()).unwrap();
        assert_eq!((r.infinite, r.finite), (1.0, 1.0));
        assert_eq!(r.discrepancy, 0.0);
    }

    #[test]
    fn distance_sign_is_irrelevant() {
        for kind in WalkKind::ALL {
            let a = infinite_probability(kind, 3, 7, 2.2, &cfg()).unwrap();
            let b = infinite_probability(kind, 3, -7, 2.2, &cfg()).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn doubling_panels_is_stable() {
        for kind in WalkKind::ALL {
            let walk = InfiniteWalk::prepare(kind, 3, 12, 4.0, &cfg()).unwrap();
            let base = PreparedRule::new(3, 12, walk.panels()).raw(kind, 3, 4.0);
            let doubled = PreparedRule::new(3, 12, 2 * walk.panels()).raw(kind, 3, 4.0);
            assert!((base - doubled).norm() < cfg().target_error);
        }
    }

    #[test]
    fn non_convergence_reports_the_estimate() {
        let tight = QuadratureConfig {
            target_error: 1e-10,
            max_subdivisions: 64,
        };
        match infinite_quantum(3, 10, 30.0, &tight) {
            Err(Error::QuadratureNonConvergence { target, panels, .. }) => {
                assert_eq!(target, 1e-10);
                assert!(panels <= 64);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
        let bad = QuadratureConfig {
            target_error: 0.0,
            max_subdivisions: 64,
        };
        assert!(infinite_quantum(1, 0, 1.0, &bad).is_err());
    }
}
