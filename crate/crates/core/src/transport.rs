//! Character times, transport velocities and power-law fits.
//!
//! The character time `t_c` is the time of the first maximum of the
//! transition probability to a node at distance `d`. With the shortest path
//! length `L = ceil(d / m)`, the transport velocity is `L / t_c`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finite::{BlochPropagator, WalkKind};
use crate::infinite::{InfiniteWalk, QuadratureConfig};
use crate::lattice::{LatticeSize, LatticeSpec};
use crate::limiting::{asymmetry_delta, is_asymmetric};

/// Local maxima below this probability are treated as numerical noise in the
/// evanescent region ahead of the front.
pub const FIRST_MAXIMUM_FLOOR: f64 = 1e-6;

/// Width of the final bracket around a located maximum.
pub const REFINEMENT_TOLERANCE: f64 = 1e-4;

/// Classical scans grow their step by this fraction of the current time.
pub const CLASSICAL_SCAN_GROWTH: f64 = 0.01;

/// Distances `L = 5..=30` used for velocity fits.
pub const FIT_PATH_LENGTHS: std::ops::RangeInclusive<usize> = 5..=30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportSample {
    pub kind: WalkKind,
    pub m: usize,
    pub lattice: LatticeSize,
    /// Node distance `d`.
    pub distance: usize,
    /// Shortest path length `L = ceil(d / m)`.
    pub path_length: usize,
    pub character_time: f64,
}

impl TransportSample {
    pub fn velocity(&self) -> f64 {
        self.path_length as f64 / self.character_time
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitModel {
    /// `t_c = beta L^2`
    Quadratic { beta: f64 },
    /// `t_c = offset + L / velocity`
    Linear { velocity: f64, offset: f64 },
    /// `y = prefactor x^exponent`
    Power { exponent: f64, prefactor: f64 },
}

impl FitModel {
    pub fn name(&self) -> &'static str {
        match self {
            FitModel::Quadratic { .. } => "quadratic",
            FitModel::Linear { .. } => "linear",
            FitModel::Power { .. } => "power",
        }
    }

    /// `(name, value)` pairs of the fitted parameters.
    pub fn parameters(&self) -> Vec<(&'static str, f64)> {
        match *self {
            FitModel::Quadratic { beta } => vec![("beta", beta)],
            FitModel::Linear { velocity, offset } => {
                vec![("velocity", velocity), ("offset", offset)]
            }
            FitModel::Power {
                exponent,
                prefactor,
            } => vec![("exponent", exponent), ("prefactor", prefactor)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    /// Coefficient of determination, clamped to `[0, 1]`.
    pub r_squared: f64,
    /// Largest absolute residual in the fitted coordinates.
    pub residual_max: f64,
    pub samples: usize,
}

/// Default search window for the first maximum at distance `d`.
pub fn default_bracket(kind: WalkKind, m: usize, d: usize) -> (f64, f64) {
    let d = d as f64;
    match kind {
        WalkKind::Quantum => (0.0, d + 10.0),
        WalkKind::Classical => {
            let m = m as f64;
            // Spreading rate of the variance, 2 sum j^2.
            let rate = m * (m + 1.0) * (2.0 * m + 1.0) / 3.0;
            (0.0, 2.0 * d * d / rate + 20.0)
        }
    }
}

/// Scan step that resolves phases for spectra bounded by `4m`.
pub fn scan_step(m: usize) -> f64 {
    0.1 / (4.0 * m as f64)
}

/// Locates the first local maximum of `f` on `[lo, hi]`.
///
/// Oscillating (quantum) probabilities are scanned at `step`; monotone-rise
/// (classical) ones with a step that also grows with `t`. The bracket around
/// the first sample maximum is then refined to [`REFINEMENT_TOLERANCE`].
pub fn first_maximum<F>(f: F, lo: f64, hi: f64, step: f64, growth: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(hi > lo) || !(step > 0.0) {
        return Err(Error::Precondition(format!(
            "invalid scan [{lo}, {hi}] with step {step}"
        )));
    }
    let mut times = vec![lo];
    let mut values = vec![f(lo)];
    let mut t = lo;
    while t < hi {
        t = (t + step.max(growth * t)).min(hi);
        times.push(t);
        values.push(f(t));
        let i = values.len() - 2;
        if i >= 1
            && values[i] > FIRST_MAXIMUM_FLOOR
            && values[i] > values[i - 1]
            && values[i] >= values[i + 1]
        {
            let t_max = golden_parabolic_maximum(&f, times[i - 1], times[i + 1], REFINEMENT_TOLERANCE / 10.0);
            return Ok(t_max);
        }
    }
    let tail: Vec<String> = times
        .iter()
        .zip(&values)
        .rev()
        .take(5)
        .map(|(t, v)| format!("f({t:.4})={v:.3e}"))
        .collect();
    Err(Error::NoMaximum {
        lo,
        hi,
        trace: format!("{} samples, last: {}", times.len(), tail.join(", ")),
    })
}

/// Brent-style maximization: parabolic steps through the three best points,
/// falling back to golden-section steps. Returns a point within `tol` of the
/// maximizer of a unimodal `f` on `[a, b]`.
fn golden_parabolic_maximum<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const GOLD: f64 = 0.381_966_011_250_105_1;
    let g = |t: f64| -f(t);
    let mut x = a + GOLD * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = g(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let tol1 = tol * 0.5 + 1e-12 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < mid { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < mid { b - x } else { a - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + tol1.copysign(d)
        };
        let fu = g(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    x
}

/// First-maximum time on the infinite lattice for distance `d`.
pub fn character_time(
    kind: WalkKind,
    m: usize,
    d: usize,
    bracket: Option<(f64, f64)>,
    config: &QuadratureConfig,
) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidLattice(format!("m = {m} violates m >= 1")));
    }
    if d == 0 {
        return Ok(0.0);
    }
    let (lo, hi) = bracket.unwrap_or_else(|| default_bracket(kind, m, d));
    let walk = InfiniteWalk::prepare(kind, m, d as i64, hi, config)?;
    let growth = match kind {
        WalkKind::Classical => CLASSICAL_SCAN_GROWTH,
        WalkKind::Quantum => 0.0,
    };
    let t_c = first_maximum(|t| walk.probability(t), lo, hi, scan_step(m), growth)?;
    if kind == WalkKind::Classical {
        let peak = walk.probability(t_c);
        let later = walk.probability(t_c + (0.5 * t_c).max(1.0).min(hi - t_c).max(REFINEMENT_TOLERANCE));
        if later >= peak {
            return Err(Error::NoMaximum {
                lo,
                hi,
                trace: format!("classical value still rising after t = {t_c}"),
            });
        }
    }
    Ok(t_c)
}

/// First-maximum time between two nodes of a finite ring.
pub fn finite_character_time(
    lattice: &LatticeSpec,
    kind: WalkKind,
    source: usize,
    target: usize,
    bracket: Option<(f64, f64)>,
) -> Result<f64> {
    let prop = BlochPropagator::new(lattice)?;
    let d = prop.offset(source, target)?;
    if d == 0 {
        return Ok(0.0);
    }
    let m = lattice.connectivity();
    let ring_d = lattice.ring_distance(source, target)?;
    let (lo, hi) = bracket.unwrap_or_else(|| default_bracket(kind, m, ring_d));
    let growth = match kind {
        WalkKind::Classical => CLASSICAL_SCAN_GROWTH,
        WalkKind::Quantum => 0.0,
    };
    let f = |t: f64| prop.probability(kind, d, t).unwrap_or(f64::NAN);
    first_maximum(f, lo, hi, scan_step(m), growth)
}

/// Character-time samples at `d = m L` for each path length, in parallel.
pub fn transport_samples(
    kind: WalkKind,
    m: usize,
    path_lengths: impl IntoIterator<Item = usize>,
    config: &QuadratureConfig,
) -> Result<Vec<TransportSample>> {
    let lengths: Vec<usize> = path_lengths.into_iter().collect();
    lengths
        .par_iter()
        .map(|&l| {
            let d = m * l;
            Ok(TransportSample {
                kind,
                m,
                lattice: LatticeSize::Infinite,
                distance: d,
                path_length: l,
                character_time: character_time(kind, m, d, None, config)?,
            })
        })
        .collect()
}

/// Earliest `t` at which `|p_{k,j}(t) - 1/N| <= tolerance` for the classical
/// walk, found on a resolved scan and refined by bisection.
pub fn equipartition_time(
    lattice: &LatticeSpec,
    source: usize,
    target: usize,
    tolerance: f64,
    horizon: f64,
) -> Result<f64> {
    let prop = BlochPropagator::new(lattice)?;
    let d = prop.offset(source, target)?;
    let uniform = 1.0 / prop.nodes() as f64;
    let within = |t: f64| -> Result<bool> {
        Ok((prop.classical(d, t)? - uniform).abs() <= tolerance)
    };
    if within(0.0)? {
        return Ok(0.0);
    }
    let step = 0.1 / prop.spectrum().max_eigenvalue().max(1.0);
    let mut prev = 0.0;
    let mut t = 0.0;
    while t < horizon {
        t = (t + step).min(horizon);
        if within(t)? {
            let (mut lo, mut hi) = (prev, t);
            while hi - lo > 1e-9 * hi.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if within(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(hi);
        }
        prev = t;
    }
    Err(Error::Precondition(format!(
        "equipartition within {tolerance} not reached by t = {horizon}"
    )))
}

fn distinct_count(xs: &[f64]) -> usize {
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

fn check_samples(samples: &[(f64, f64)], min: usize) -> Result<()> {
    if samples.len() < min {
        return Err(Error::DegenerateFit(format!(
            "need at least {min} samples, got {}",
            samples.len()
        )));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    if distinct_count(&xs) < 2 {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    if samples.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::DegenerateFit("non-finite sample".into()));
    }
    Ok(())
}

fn r_squared(ys: &[f64], predicted: &[f64]) -> (f64, f64) {
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = ys.iter().zip(predicted).map(|(y, p)| (y - p).powi(2)).sum();
    let residual_max = ys
        .iter()
        .zip(predicted)
        .map(|(y, p)| (y - p).abs())
        .fold(0.0, f64::max);
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    (r2.clamp(0.0, 1.0), residual_max)
}

/// Least-squares intercept and slope of `y = a + b x`.
fn affine_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

/// One-parameter least squares for `t_c = beta L^2` over `(L, t_c)` pairs.
pub fn fit_quadratic(samples: &[(f64, f64)]) -> Result<FitResult> {
    check_samples(samples, 3)?;
    let num: f64 = samples.iter().map(|(l, t)| l * l * t).sum();
    let den: f64 = samples.iter().map(|(l, _)| l.powi(4)).sum();
    let beta = num / den;
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let pred: Vec<f64> = samples.iter().map(|(l, _)| beta * l * l).collect();
    let (r2, residual_max) = r_squared(&ys, &pred);
    Ok(FitResult {
        model: FitModel::Quadratic { beta },
        r_squared: r2,
        residual_max,
        samples: samples.len(),
    })
}

/// Least squares for the linear law `t_c = offset + L / v` over `(L, t_c)`
/// pairs; the velocity is the inverse slope.
pub fn fit_linear_velocity(samples: &[(f64, f64)]) -> Result<FitResult> {
    check_samples(samples, 3)?;
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let (offset, slope) = affine_fit(&xs, &ys);
    if !(slope > 0.0) {
        return Err(Error::DegenerateFit(format!(
            "non-positive slope {slope}; t_c does not grow with L"
        )));
    }
    let pred: Vec<f64> = xs.iter().map(|x| offset + slope * x).collect();
    let (r2, residual_max) = r_squared(&ys, &pred);
    Ok(FitResult {
        model: FitModel::Linear {
            velocity: 1.0 / slope,
            offset,
        },
        r_squared: r2,
        residual_max,
        samples: samples.len(),
    })
}

/// Log-log least squares for `y = prefactor x^exponent`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult> {
    if let Some((x, y)) = points.iter().find(|(x, y)| !(*x > 0.0) || !(*y > 0.0)) {
        return Err(Error::DegenerateFit(format!(
            "power law needs positive data, got ({x}, {y})"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    check_samples(&logs, 2)?;
    let xs: Vec<f64> = logs.iter().map(|s| s.0).collect();
    let ys: Vec<f64> = logs.iter().map(|s| s.1).collect();
    let (intercept, slope) = affine_fit(&xs, &ys);
    let pred: Vec<f64> = xs.iter().map(|x| intercept + slope * x).collect();
    let (r2, residual_max) = r_squared(&ys, &pred);
    Ok(FitResult {
        model: FitModel::Power {
            exponent: slope,
            prefactor: intercept.exp(),
        },
        r_squared: r2,
        residual_max,
        samples: points.len(),
    })
}

/// Interior samples strictly above both neighbors.
pub fn local_maxima(times: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .map(|i| (times[i], values[i]))
        .collect()
}

/// Power-law exponent of a series restricted to `window`. With `envelope`,
/// only the local maxima are fitted, which tracks the decay of an
/// oscillating signal.
pub fn scaling_exponent(
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
    envelope: bool,
) -> Result<FitResult> {
    let (lo, hi) = window;
    let inside: Vec<usize> = (0..times.len())
        .filter(|&i| times[i] >= lo && times[i] <= hi)
        .collect();
    if let Some(&i) = inside.iter().find(|&&i| !(values[i] > 0.0)) {
        return Err(Error::DegenerateFit(format!(
            "non-positive value {} at t = {} inside the window",
            values[i], times[i]
        )));
    }
    let points: Vec<(f64, f64)> = if envelope {
        let t: Vec<f64> = inside.iter().map(|&i| times[i]).collect();
        let v: Vec<f64> = inside.iter().map(|&i| values[i]).collect();
        local_maxima(&t, &v)
    } else {
        inside.iter().map(|&i| (times[i], values[i])).collect()
    };
    fit_power_law(&points)
}

/// Return probability on the infinite lattice over a window, sampled at the
/// resolved step for connectivity `m`.
pub fn infinite_return_series(
    kind: WalkKind,
    m: usize,
    window: (f64, f64),
    config: &QuadratureConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (lo, hi) = window;
    let walk = InfiniteWalk::prepare(kind, m, 0, hi, config)?;
    let step = scan_step(m);
    let count = ((hi - lo) / step).ceil() as usize + 1;
    let times: Vec<f64> = (0..count)
        .map(|i| (lo + step * i as f64).min(hi))
        .collect();
    let values = times.par_iter().map(|&t| walk.probability(t)).collect();
    Ok((times, values))
}

/// `(N, Delta)` points grouped for the mirror-asymmetry decay fit.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaScaling {
    pub m: usize,
    /// Every `(N, Delta)` evaluated, including zeros.
    pub points: Vec<(usize, f64)>,
    /// Clusters of nonzero points, largest first.
    pub clusters: Vec<Vec<(usize, f64)>>,
    pub fit: FitResult,
}

/// Log-residual gap that separates two clusters.
pub const CLUSTER_BAND: f64 = 0.05;

/// Fits `|Delta(N)| ~ N^exponent` within the most populous cluster.
///
/// Nonzero points are split by sign. Each sign group is fitted with a trial
/// power law; while some log-residual exceeds `band`, the group is cut at the
/// widest gap between sorted residuals and each part is fitted again.
pub fn delta_scaling(m: usize, sizes: &[usize], band: f64) -> Result<DeltaScaling> {
    let points = sizes
        .par_iter()
        .map(|&n| Ok((n, asymmetry_delta(n, m, 0)?)))
        .collect::<Result<Vec<(usize, f64)>>>()?;
    let nonzero: Vec<(usize, f64)> = points.iter().copied().filter(|p| is_asymmetric(p.1)).collect();
    if nonzero.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "only {} sizes with nonzero asymmetry for m = {m}",
            nonzero.len()
        )));
    }

    let (pos, neg): (Vec<_>, Vec<_>) = nonzero.iter().partition(|p| p.1 > 0.0);
    let mut clusters = Vec::new();
    for group in [pos, neg] {
        if group.is_empty() {
            continue;
        }
        clusters.extend(split_by_residual(&group, band));
    }
    clusters.sort_by_key(|c: &Vec<(usize, f64)>| std::cmp::Reverse(c.len()));

    let largest = &clusters[0];
    if largest.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "largest cluster has only {} points",
            largest.len()
        )));
    }
    let fit = fit_power_law(
        &largest
            .iter()
            .map(|&(n, d)| (n as f64, d.abs()))
            .collect::<Vec<_>>(),
    )?;
    Ok(DeltaScaling {
        m,
        points,
        clusters,
        fit,
    })
}

fn split_by_residual(group: &[(usize, f64)], band: f64) -> Vec<Vec<(usize, f64)>> {
    let mut sorted = group.to_vec();
    sorted.sort_by_key(|p| p.0);
    if sorted.len() < 3 {
        return vec![sorted];
    }
    let logs: Vec<(f64, f64)> = sorted
        .iter()
        .map(|&(n, d)| ((n as f64).ln(), d.abs().ln()))
        .collect();
    let xs: Vec<f64> = logs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = logs.iter().map(|p| p.1).collect();
    let (a, b) = if distinct_count(&xs) >= 2 {
        affine_fit(&xs, &ys)
    } else {
        (ys[0], 0.0)
    };
    let mut ranked: Vec<(f64, (usize, f64))> = sorted
        .iter()
        .zip(&logs)
        .map(|(&p, &(x, y))| (y - (a + b * x), p))
        .collect();
    if ranked.iter().all(|r| r.0.abs() <= band) {
        return vec![sorted];
    }
    ranked.sort_by(|l, r| l.0.total_cmp(&r.0));
    // Cut at the widest residual gap and re-fit each side.
    let cut = (1..ranked.len())
        .max_by(|&i, &j| {
            let gi = ranked[i].0 - ranked[i - 1].0;
            let gj = ranked[j].0 - ranked[j - 1].0;
            gi.total_cmp(&gj)
        })
        .expect("at least three points");
    let (lower, upper): (Vec<_>, Vec<_>) = ranked.iter().enumerate().partition(|(i, _)| *i < cut);
    let lower: Vec<(usize, f64)> = lower.into_iter().map(|(_, r)| r.1).collect();
    let upper: Vec<(usize, f64)> = upper.into_iter().map(|(_, r)| r.1).collect();
    let mut out = split_by_residual(&lower, band);
    out.extend(split_by_residual(&upper, band));
    out
}
