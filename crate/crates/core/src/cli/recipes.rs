//! Parameter sets behind each figure. Every curve becomes one table named
//! `<fig>_<curve>`.

use rayon::prelude::*;

use super::commands::{transport_tables, Failure, Outcome, Report};
use super::config::{Command, RunConfig};
use super::output::Table;
use crate::finite::{return_probability, transition_probability, WalkKind};
use crate::grid::{Spacing, TimeGrid};
use crate::infinite::InfiniteWalk;
use crate::lattice::LatticeSpec;
use crate::limiting::{asymmetry_delta, is_asymmetric, limiting_distribution};
use crate::transport::{delta_scaling, CLUSTER_BAND, FIT_PATH_LENGTHS};

const RING: usize = 100;

/// Work producing one or more named curves.
type Job<'a> = Box<dyn Fn() -> Result<Vec<(String, Table)>, Failure> + Send + Sync + 'a>;

fn job<'a, F>(name: String, f: F) -> Job<'a>
where
    F: Fn() -> Result<Table, Failure> + Send + Sync + 'a,
{
    Box::new(move || Ok(vec![(name.clone(), f()?)]))
}

fn grid_or(cfg: &RunConfig, default: TimeGrid) -> Result<TimeGrid, Failure> {
    if cfg.t_min.is_none() && cfg.t_max.is_none() && cfg.t_count.is_none() && cfg.spacing.is_none() {
        return Ok(default);
    }
    let spacing = cfg.spacing.unwrap_or(default.spacing());
    let lo = cfg.t_min.unwrap_or(default.first());
    let hi = cfg.t_max.unwrap_or(default.last());
    let count = cfg.t_count.unwrap_or(default.len());
    Ok(match spacing {
        Spacing::Linear => TimeGrid::linear(lo, hi, count)?,
        Spacing::Logarithmic => TimeGrid::logarithmic(lo, hi, count)?,
    })
}

fn series(times: &[f64], values: impl IntoIterator<Item = f64>) -> Table {
    let mut t = Table::new(&["t", "value"]);
    for (&time, v) in times.iter().zip(values) {
        t.push(vec![time.into(), v.into()]);
    }
    t
}

fn finite_curve(kind: WalkKind, m: usize, target: usize, grid: &TimeGrid) -> Result<Table, Failure> {
    let lattice = LatticeSpec::ring(RING, m)?;
    let s = if target == 0 {
        return_probability(&lattice, kind, 0, grid)?
    } else {
        transition_probability(&lattice, kind, 0, target, grid)?
    };
    Ok(series(grid.points(), s.values))
}

fn infinite_curve(
    cfg: &RunConfig,
    kind: WalkKind,
    m: usize,
    d: i64,
    grid: &TimeGrid,
) -> Result<Table, Failure> {
    let walk = InfiniteWalk::prepare(kind, m, d, grid.last(), &cfg.quadrature())?;
    let values: Vec<f64> = grid.points().par_iter().map(|&t| walk.probability(t)).collect();
    Ok(series(grid.points(), values).note("panels", walk.panels()))
}

fn fig1<'a>(cfg: &'a RunConfig) -> Result<Vec<Job<'a>>, Failure> {
    let classical = grid_or(cfg, TimeGrid::logarithmic(0.01, 1000.0, 400)?)?;
    let quantum = grid_or(cfg, TimeGrid::scaling_default())?;
    let mut jobs: Vec<Job> = Vec::new();
    for m in [1, 2, 3, 5, 10] {
        let g = classical.clone();
        jobs.push(job(
            format!("classical_m{m}_n{RING}"),
            move || finite_curve(WalkKind::Classical, m, 0, &g),
        ));
    }
    for m in 1..=3 {
        let g = quantum.clone();
        jobs.push(job(
            format!("quantum_m{m}_n{RING}"),
            move || finite_curve(WalkKind::Quantum, m, 0, &g),
        ));
        let g = quantum.clone();
        jobs.push(job(
            format!("quantum_m{m}_inf"),
            move || infinite_curve(cfg, WalkKind::Quantum, m, 0, &g),
        ));
    }
    Ok(jobs)
}

fn fig2<'a>(cfg: &'a RunConfig) -> Result<Vec<Job<'a>>, Failure> {
    let opposite = RING / 2;
    let grids = [
        (WalkKind::Classical, grid_or(cfg, TimeGrid::linear(0.0, 1000.0, 1001)?)?),
        (WalkKind::Quantum, grid_or(cfg, TimeGrid::linear(0.0, 100.0, 1001)?)?),
    ];
    let mut jobs: Vec<Job> = Vec::new();
    for (kind, grid) in grids {
        for m in 1..=3 {
            let g = grid.clone();
            jobs.push(job(
                format!("{kind}_m{m}_n{RING}"),
                move || finite_curve(kind, m, opposite, &g),
            ));
            let g = grid.clone();
            jobs.push(job(
                format!("{kind}_m{m}_inf"),
                move || infinite_curve(cfg, kind, m, opposite as i64, &g),
            ));
        }
    }
    Ok(jobs)
}

fn fig4<'a>(cfg: &'a RunConfig) -> Result<Vec<Job<'a>>, Failure> {
    let grids = [
        (WalkKind::Classical, grid_or(cfg, TimeGrid::linear(0.0, 100.0, 1001)?)?),
        (WalkKind::Quantum, grid_or(cfg, TimeGrid::linear(0.0, 20.0, 401)?)?),
    ];
    let mut jobs: Vec<Job> = Vec::new();
    for (kind, grid) in grids {
        for m in 1..=3 {
            let d = 10 * m as i64;
            let g = grid.clone();
            jobs.push(job(
                format!("{kind}_m{m}_d{d}"),
                move || infinite_curve(cfg, kind, m, d, &g),
            ));
        }
    }
    Ok(jobs)
}

fn fig5<'a>(cfg: &'a RunConfig) -> Result<Vec<Job<'a>>, Failure> {
    let lengths: Vec<usize> = match &cfg.distances {
        Some(d) => d.0.clone(),
        None => FIT_PATH_LENGTHS.collect(),
    };
    let mut jobs: Vec<Job> = Vec::new();
    for kind in WalkKind::ALL {
        let lengths = lengths.clone();
        jobs.push(Box::new(move || {
            let (samples, fits) = transport_tables(kind, &[1, 2, 3], &lengths, &cfg.quadrature())?;
            Ok(vec![(kind.to_string(), samples), (format!("{kind}_fit"), fits)])
        }));
    }
    Ok(jobs)
}

fn fig6<'a>(cfg: &'a RunConfig) -> Result<Vec<Job<'a>>, Failure> {
    let ms = cfg.m_values(|| vec![1, 2, 3, 6, 8, 12, 25, 49]);
    let mut jobs: Vec<Job> = Vec::new();
    for m in ms {
        jobs.push(job(
            format!("chi_m{m}"),
            move || {
                let chi = limiting_distribution(&LatticeSpec::ring(RING, m)?, 0)?;
                let mut t = Table::new(&["k", "chi"]);
                for (k, &v) in chi.values.iter().enumerate() {
                    t.push(vec![cfg.label(k).into(), v.into()]);
                }
                Ok(t)
            },
        ));
    }
    Ok(jobs)
}

fn fig8<'a>(cfg: &'a RunConfig) -> Result<Vec<Job<'a>>, Failure> {
    let sizes: Vec<usize> = match &cfg.sizes {
        Some(s) => s.0.clone(),
        None => (20..=200).step_by(2).collect(),
    };
    let band = cfg.cluster_band.unwrap_or(CLUSTER_BAND);
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(job(
        format!("asymmetry_n{RING}"),
        || {
            let mut t = Table::new(&["m", "delta", "nonzero"]);
            for m in 1..=LatticeSpec::max_connectivity(RING) {
                let d = asymmetry_delta(RING, m, 0)?;
                t.push(vec![m.into(), d.into(), is_asymmetric(d).into()]);
            }
            Ok(t)
        },
    ));
    for m in 1..=4 {
        let sizes = sizes.clone();
        jobs.push(job(
            format!("delta_m{m}"),
            move || {
                let mut t = Table::new(&["N", "delta"]);
                for &n in &sizes {
                    t.push(vec![n.into(), asymmetry_delta(n, m, 0)?.into()]);
                }
                Ok(t)
            },
        ));
    }
    jobs.push(job(
        "delta_fit".into(),
        move || {
            let mut t = Table::new(&["m", "cluster_size", "exponent", "prefactor", "r_squared"]);
            for m in 2..=4 {
                // Connectivities whose asymmetries never form a cluster of
                // three are left out rather than failing the recipe.
                if let Ok(s) = delta_scaling(m, &sizes, band) {
                    let params = s.fit.model.parameters();
                    t.push(vec![
                        m.into(),
                        s.clusters[0].len().into(),
                        params[0].1.into(),
                        params[1].1.into(),
                        s.fit.r_squared.into(),
                    ]);
                }
            }
            Ok(t)
        },
    ));
    Ok(jobs)
}

/// Runs every curve of a figure in parallel.
pub fn figure(cfg: &RunConfig, which: Command) -> Outcome {
    let jobs = match which {
        Command::Fig1 => fig1(cfg)?,
        Command::Fig2 => fig2(cfg)?,
        Command::Fig4 => fig4(cfg)?,
        Command::Fig5 => fig5(cfg)?,
        Command::Fig6 => fig6(cfg)?,
        Command::Fig8 => fig8(cfg)?,
        other => return Err(Failure::Usage(format!("`{other}` is not a figure recipe"))),
    };
    let batches = jobs
        .par_iter()
        .map(|run| run())
        .collect::<Result<Vec<_>, Failure>>()?;
    let tables = batches
        .into_iter()
        .flatten()
        .map(|(curve, t)| {
            let name = format!("{which}_{curve}");
            (name.clone(), t.note("curve", name.as_str()))
        })
        .collect();
    Ok(Report {
        tables,
        failure: None,
    })
}
