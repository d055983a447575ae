//! One function per analysis subcommand. Each returns the tables to write;
//! the first table is the main artifact, the rest are companions.

use rayon::prelude::*;

use super::config::{RunConfig, Window};
use super::output::Table;
use crate::error::Error;
use crate::finite::{distribution_snapshot, transition_probability, WalkKind};
use crate::grid::{Spacing, TimeGrid};
use crate::infinite::{no_wrap_check, InfiniteWalk, QuadratureConfig};
use crate::lattice::{bloch_eigenvalues, degeneracy_partition, LatticeSize, LatticeSpec};
use crate::limiting::{asymmetry_delta, general_mirror_asymmetry, is_asymmetric, limiting_distribution};
use crate::oracle::{three_way_agreement, OdeConfig};
use crate::transport::{
    delta_scaling, fit_linear_velocity, fit_quadratic, infinite_return_series, scaling_exponent,
    transport_samples, FitResult, CLUSTER_BAND, FIT_PATH_LENGTHS,
};

/// Why a run stopped: bad input (exit 2) or a numerical failure (exit 1).
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ImaginaryResidue { .. }
            | Error::QuadratureNonConvergence { .. }
            | Error::NoMaximum { .. }
            | Error::DegenerateFit(_) => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Tables produced by a run, plus a failure to report after writing them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub tables: Vec<(String, Table)>,
    pub failure: Option<String>,
}

impl Report {
    pub fn single(table: Table) -> Self {
        Self {
            tables: vec![(String::new(), table)],
            failure: None,
        }
    }

    pub fn with(mut self, name: &str, table: Table) -> Self {
        self.tables.push((name.to_string(), table));
        self
    }
}

pub type Outcome = Result<Report, Failure>;

// Resolution of config fields with per-command defaults.

impl RunConfig {
    pub(crate) fn node(&self, label: usize) -> Result<usize, Failure> {
        if self.one_based {
            label
                .checked_sub(1)
                .ok_or_else(|| Failure::Usage("node labels start at 1 with --one-based".into()))
        } else {
            Ok(label)
        }
    }

    pub(crate) fn label(&self, node: usize) -> usize {
        node + usize::from(self.one_based)
    }

    pub(crate) fn source_node(&self) -> Result<usize, Failure> {
        match self.source {
            Some(s) => self.node(s),
            None => Ok(0),
        }
    }

    pub(crate) fn connectivity(&self) -> Result<usize, Failure> {
        self.m.ok_or_else(|| Failure::Usage("--m is required".into()))
    }

    pub(crate) fn finite_size(&self) -> Result<usize, Failure> {
        match self.n {
            Some(LatticeSize::Finite(n)) => Ok(n),
            Some(LatticeSize::Infinite) => usage("this command needs a finite --n"),
            None => usage("--n is required"),
        }
    }

    pub(crate) fn lattice(&self) -> Result<LatticeSpec, Failure> {
        Ok(LatticeSpec::ring(self.finite_size()?, self.connectivity()?)?)
    }

    pub(crate) fn kind_or(&self, default: WalkKind) -> WalkKind {
        self.kind.unwrap_or(default)
    }

    pub(crate) fn m_values(&self, default: impl FnOnce() -> Vec<usize>) -> Vec<usize> {
        match (&self.m_range, self.m) {
            (Some(r), _) => r.0.clone(),
            (None, Some(m)) => vec![m],
            (None, None) => default(),
        }
    }

    pub(crate) fn grid(&self, t_max: f64, count: usize) -> Result<TimeGrid, Failure> {
        let spacing = self.spacing.unwrap_or(Spacing::Linear);
        let lo = self.t_min.unwrap_or(match spacing {
            Spacing::Linear => 0.0,
            Spacing::Logarithmic => 0.01,
        });
        let hi = self.t_max.unwrap_or(t_max);
        let count = self.t_count.unwrap_or(count);
        Ok(match spacing {
            Spacing::Linear => TimeGrid::linear(lo, hi, count)?,
            Spacing::Logarithmic => TimeGrid::logarithmic(lo, hi, count)?,
        })
    }

    pub(crate) fn quadrature(&self) -> QuadratureConfig {
        let d = QuadratureConfig::default();
        QuadratureConfig {
            target_error: self.quad_tol.unwrap_or(d.target_error),
            max_subdivisions: self.quad_max_subdiv.unwrap_or(d.max_subdivisions),
        }
    }

    /// Signed infinite-lattice distance from `--offset` or target minus source.
    pub(crate) fn signed_distance(&self) -> Result<i64, Failure> {
        if let Some(d) = self.offset {
            return Ok(d);
        }
        match self.target {
            Some(t) => Ok(self.node(t)? as i64 - self.source_node()? as i64),
            None => usage("--offset or --target is required"),
        }
    }

    /// Target node on a finite ring from `--target` or source plus offset.
    pub(crate) fn target_node(&self, n: usize) -> Result<usize, Failure> {
        if let Some(t) = self.target {
            return self.node(t);
        }
        match self.offset {
            Some(d) => Ok((self.source_node()? as i64 + d).rem_euclid(n as i64) as usize),
            None => usage("--target or --offset is required"),
        }
    }
}

pub(crate) const DEFAULT_T_MAX: f64 = 20.0;
pub(crate) const DEFAULT_T_COUNT: usize = 201;

pub fn spectrum(cfg: &RunConfig) -> Outcome {
    let spectrum = bloch_eigenvalues(&cfg.lattice()?)?;
    let partition = degeneracy_partition(&spectrum);
    let mut t = Table::new(&["n", "theta", "E", "class_id"]);
    for (i, (&theta, &e)) in spectrum.phases().iter().zip(spectrum.eigenvalues()).enumerate() {
        t.push(vec![i.into(), theta.into(), e.into(), partition.class_of(i).into()]);
    }
    let t = t
        .note("classes", partition.classes().len())
        .note("near_degeneracies", partition.near_gaps().len());
    Ok(Report::single(t))
}

pub fn evolve(cfg: &RunConfig) -> Outcome {
    if cfg.n == Some(LatticeSize::Infinite) {
        return infinite(cfg);
    }
    let lattice = cfg.lattice()?;
    let n = cfg.finite_size()?;
    let kind = cfg.kind_or(WalkKind::Quantum);
    let grid = cfg.grid(DEFAULT_T_MAX, DEFAULT_T_COUNT)?;
    let series =
        transition_probability(&lattice, kind, cfg.source_node()?, cfg.target_node(n)?, &grid)?;
    let mut t = Table::new(&["t", "value"]);
    for (time, value) in series.samples() {
        t.push(vec![time.into(), value.into()]);
    }
    Ok(Report::single(t))
}

pub fn infinite(cfg: &RunConfig) -> Outcome {
    let m = cfg.connectivity()?;
    let d = cfg.signed_distance()?;
    let kind = cfg.kind_or(WalkKind::Quantum);
    let grid = cfg.grid(DEFAULT_T_MAX, DEFAULT_T_COUNT)?;
    let walk = InfiniteWalk::prepare(kind, m, d, grid.last(), &cfg.quadrature())?;
    let mut t = Table::new(&["t", "value"]);
    for &time in grid.points() {
        t.push(vec![time.into(), walk.probability(time).into()]);
    }
    let t = t
        .note("panels", walk.panels())
        .note("error_estimate", walk.error_estimate());
    Ok(Report::single(t))
}

pub fn snapshot(cfg: &RunConfig) -> Outcome {
    let lattice = cfg.lattice()?;
    let kind = cfg.kind_or(WalkKind::Quantum);
    let grid = cfg.grid(DEFAULT_T_MAX, DEFAULT_T_COUNT)?;
    let snap = distribution_snapshot(&lattice, cfg.source_node()?, kind, &grid)?;
    let mut t = Table::new(&["t", "k", "value"]);
    for (&time, row) in grid.points().iter().zip(&snap.rows) {
        for (k, &p) in row.iter().enumerate() {
            t.push(vec![time.into(), cfg.label(k).into(), p.into()]);
        }
    }
    Ok(Report::single(t))
}

pub fn limiting(cfg: &RunConfig) -> Outcome {
    let chi = limiting_distribution(&cfg.lattice()?, cfg.source_node()?)?;
    let mut t = Table::new(&["k", "chi"]);
    for (k, &v) in chi.values.iter().enumerate() {
        t.push(vec![cfg.label(k).into(), v.into()]);
    }
    Ok(Report::single(t))
}

pub fn asymmetry(cfg: &RunConfig) -> Outcome {
    let n = cfg.finite_size()?;
    let source = cfg.source_node()?;
    let ms = cfg.m_values(|| (1..=LatticeSpec::max_connectivity(n)).collect());
    let deltas = ms
        .par_iter()
        .map(|&m| match cfg.offset {
            Some(off) if off >= 0 => general_mirror_asymmetry(n, m, source, off as usize),
            Some(off) => general_mirror_asymmetry(n, m, source, (off.rem_euclid(n as i64)) as usize),
            None => asymmetry_delta(n, m, source),
        })
        .collect::<crate::Result<Vec<f64>>>()?;
    let mut t = Table::new(&["m", "delta", "nonzero"]);
    let mut count = 0;
    for (&m, &d) in ms.iter().zip(&deltas) {
        count += usize::from(is_asymmetric(d));
        t.push(vec![m.into(), d.into(), is_asymmetric(d).into()]);
    }
    Ok(Report::single(t.note("nonzero_count", count)))
}

fn fit_rows(table: &mut Table, m: usize, fit: &FitResult) {
    for (name, value) in fit.model.parameters() {
        table.push(vec![m.into(), fit.model.name().into(), name.into(), value.into()]);
    }
    table.push(vec![m.into(), fit.model.name().into(), "r_squared".into(), fit.r_squared.into()]);
}

/// Samples `(m, L, d, t_c, v)` and the quadratic and linear fits per `m`.
pub(crate) fn transport_tables(
    kind: WalkKind,
    ms: &[usize],
    lengths: &[usize],
    quad: &QuadratureConfig,
) -> Result<(Table, Table), Failure> {
    let mut samples = Table::new(&["m", "L", "d", "t_c", "v"]);
    let mut fits = Table::new(&["m", "model", "quantity", "value"]);
    for &m in ms {
        let rows = transport_samples(kind, m, lengths.iter().copied(), quad)?;
        let pairs: Vec<(f64, f64)> = rows
            .iter()
            .map(|s| (s.path_length as f64, s.character_time))
            .collect();
        for s in &rows {
            samples.push(vec![
                m.into(),
                s.path_length.into(),
                s.distance.into(),
                s.character_time.into(),
                s.velocity().into(),
            ]);
        }
        fit_rows(&mut fits, m, &fit_quadratic(&pairs)?);
        fit_rows(&mut fits, m, &fit_linear_velocity(&pairs)?);
    }
    Ok((samples, fits))
}

pub fn transport(cfg: &RunConfig) -> Outcome {
    if let Some(LatticeSize::Finite(_)) = cfg.n {
        return usage("transport runs on the infinite lattice; omit --n or pass --n inf");
    }
    let kind = cfg.kind_or(WalkKind::Quantum);
    let ms = cfg.m_values(|| vec![1, 2, 3]);
    let lengths = match &cfg.distances {
        Some(d) => d.0.clone(),
        None => FIT_PATH_LENGTHS.collect(),
    };
    let (samples, fits) = transport_tables(kind, &ms, &lengths, &cfg.quadrature())?;
    Ok(Report::single(samples).with("fit", fits))
}

pub(crate) fn default_window(kind: WalkKind) -> Window {
    match kind {
        WalkKind::Classical => Window(20.0, 80.0),
        WalkKind::Quantum => Window(10.0, 100.0),
    }
}

pub fn scaling(cfg: &RunConfig) -> Outcome {
    let m = cfg.m.unwrap_or(1);
    if let Some(sizes) = &cfg.sizes {
        let band = cfg.cluster_band.unwrap_or(CLUSTER_BAND);
        let result = delta_scaling(m, &sizes.0, band)?;
        let mut t = Table::new(&["N", "delta", "cluster"]);
        for &(n, d) in &result.points {
            let cluster = result
                .clusters
                .iter()
                .position(|c| c.iter().any(|p| p.0 == n))
                .map_or(-1, |i| i as i64);
            t.push(vec![n.into(), d.into(), cluster.into()]);
        }
        let mut fits = Table::new(&["m", "model", "quantity", "value"]);
        fit_rows(&mut fits, m, &result.fit);
        return Ok(Report::single(t).with("fit", fits));
    }
    let kind = cfg.kind_or(WalkKind::Quantum);
    let Window(lo, hi) = cfg.window.unwrap_or(default_window(kind));
    let (times, values) = infinite_return_series(kind, m, (lo, hi), &cfg.quadrature())?;
    let fit = scaling_exponent(&times, &values, (lo, hi), kind == WalkKind::Quantum)?;
    let mut t = Table::new(&["t", "value"]);
    for (&time, &v) in times.iter().zip(&values) {
        t.push(vec![time.into(), v.into()]);
    }
    let mut fits = Table::new(&["m", "model", "quantity", "value"]);
    fit_rows(&mut fits, m, &fit);
    Ok(Report::single(t).with("fit", fits))
}

pub const DEFAULT_VERIFY_TOL: f64 = 1e-8;

pub fn verify(cfg: &RunConfig) -> Outcome {
    let tol = cfg.verify_tol.unwrap_or(DEFAULT_VERIFY_TOL);
    let kinds: Vec<WalkKind> = cfg.kind.map_or(WalkKind::ALL.to_vec(), |k| vec![k]);
    let grid = cfg.grid(DEFAULT_T_MAX, DEFAULT_T_COUNT)?;
    if cfg.n == Some(LatticeSize::Infinite) {
        return verify_no_wrap(cfg, &kinds, &grid, tol);
    }
    let n = cfg.finite_size()?;
    let source = cfg.source_node()?;
    let ms = cfg.m_values(|| (1..=LatticeSpec::max_connectivity(n)).collect());
    let cases: Vec<(usize, WalkKind)> = ms
        .iter()
        .flat_map(|&m| kinds.iter().map(move |&k| (m, k)))
        .collect();
    let reports = cases
        .par_iter()
        .map(|&(m, kind)| {
            three_way_agreement(&LatticeSpec::ring(n, m)?, source, kind, &grid, &OdeConfig::default())
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut t = Table::new(&["m", "kind", "bloch_vs_dense", "bloch_vs_ode", "dense_vs_ode", "pass"]);
    let mut worst: f64 = 0.0;
    for r in &reports {
        worst = worst.max(r.worst());
        t.push(vec![
            r.lattice.connectivity().into(),
            r.kind.to_string().into(),
            r.bloch_vs_dense.into(),
            r.bloch_vs_ode.into(),
            r.dense_vs_ode.into(),
            (r.worst() <= tol).into(),
        ]);
    }
    let mut report = Report::single(t.note("worst", worst));
    if worst > tol {
        report.failure = Some(format!("oracle disagreement {worst:e} exceeds {tol:e}"));
    }
    Ok(report)
}

fn verify_no_wrap(cfg: &RunConfig, kinds: &[WalkKind], grid: &TimeGrid, tol: f64) -> Outcome {
    let m = cfg.connectivity()?;
    let d = cfg.signed_distance()?;
    let quad = cfg.quadrature();
    let mut t = Table::new(&["kind", "t", "N", "infinite", "finite", "discrepancy"]);
    let mut worst: f64 = 0.0;
    for &kind in kinds {
        let rows = grid
            .points()
            .par_iter()
            .map(|&time| no_wrap_check(kind, m, d, time, &quad))
            .collect::<crate::Result<Vec<_>>>()?;
        for r in rows {
            worst = worst.max(r.discrepancy);
            t.push(vec![
                kind.to_string().into(),
                r.t.into(),
                r.nodes.into(),
                r.infinite.into(),
                r.finite.into(),
                r.discrepancy.into(),
            ]);
        }
    }
    let mut report = Report::single(t.note("worst", worst));
    if worst > tol {
        report.failure = Some(format!("finite/infinite discrepancy {worst:e} exceeds {tol:e}"));
    }
    Ok(report)
}

