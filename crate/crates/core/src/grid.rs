use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spacing {
    Linear,
    Logarithmic,
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::Logarithmic => "log",
        })
    }
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" | "logarithmic" => Ok(Spacing::Logarithmic),
            other => Err(Error::InvalidGrid(format!("unknown spacing `{other}`"))),
        }
    }
}

/// Strictly increasing, non-negative sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
    spacing: Spacing,
}

impl TimeGrid {
    /// Phase advance allowed per step on a resolved grid.
    pub const PHASE_STEP: f64 = 0.1;

    pub fn new(points: Vec<f64>, spacing: Spacing) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if !points.iter().all(|t| t.is_finite()) {
            return Err(Error::InvalidGrid("grid has non-finite points".into()));
        }
        if points[0] < 0.0 {
            return Err(Error::InvalidGrid(format!(
                "first point {} is negative",
                points[0]
            )));
        }
        if spacing == Spacing::Logarithmic && points[0] <= 0.0 {
            return Err(Error::InvalidGrid(
                "logarithmic grids must start above zero".into(),
            ));
        }
        if let Some(w) = points.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "points not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        Ok(Self { points, spacing })
    }

    /// A single time point.
    pub fn at(t: f64) -> Result<Self> {
        Self::new(vec![t], Spacing::Linear)
    }

    /// `count` evenly spaced points from `start` to `end` inclusive.
    pub fn linear(start: f64, end: f64, count: usize) -> Result<Self> {
        let points = match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => {
                let step = (end - start) / (count - 1) as f64;
                (0..count)
                    .map(|i| if i + 1 == count { end } else { start + step * i as f64 })
                    .collect()
            }
        };
        Self::new(points, Spacing::Linear)
    }

    /// `count` geometrically spaced points from `start` to `end` inclusive.
    pub fn logarithmic(start: f64, end: f64, count: usize) -> Result<Self> {
        if start <= 0.0 || end <= 0.0 {
            return Err(Error::InvalidGrid(
                "logarithmic grids must start above zero".into(),
            ));
        }
        let (ls, le) = (start.ln(), end.ln());
        let points = match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => (0..count)
                .map(|i| {
                    if i == 0 {
                        start
                    } else if i + 1 == count {
                        end
                    } else {
                        (ls + (le - ls) * i as f64 / (count - 1) as f64).exp()
                    }
                })
                .collect(),
        };
        Self::new(points, Spacing::Logarithmic)
    }

    /// Default grid for scaling studies: 400 log-spaced points on `[0.01, 100]`.
    pub fn scaling_default() -> Self {
        Self::logarithmic(0.01, 100.0, 400).expect("valid default grid")
    }

    /// Linear grid on `[0, end]` whose step keeps `max_eigenvalue * dt <= 0.1`.
    pub fn resolved(end: f64, max_eigenvalue: f64) -> Result<Self> {
        let step = Self::PHASE_STEP / max_eigenvalue.max(1.0);
        let intervals = (end / step).ceil().max(1.0) as usize;
        Self::linear(0.0, end, intervals + 1)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(TimeGrid::new(vec![], Spacing::Linear).is_err());
        assert!(TimeGrid::new(vec![-1.0, 0.0], Spacing::Linear).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.0], Spacing::Linear).is_err());
        assert!(TimeGrid::new(vec![0.0, 1.0], Spacing::Logarithmic).is_err());
        assert!(TimeGrid::logarithmic(0.0, 1.0, 3).is_err());
        assert!(TimeGrid::new(vec![0.0, 1.0, f64::NAN], Spacing::Linear).is_err());
    }

    #[test]
    fn endpoints_are_exact() {
        let g = TimeGrid::linear(0.0, 20.0, 7).unwrap();
        assert_eq!(g.first(), 0.0);
        assert_eq!(g.last(), 20.0);
        let g = TimeGrid::scaling_default();
        assert_eq!(g.len(), 400);
        assert_eq!((g.first(), g.last()), (0.01, 100.0));
    }

    #[test]
    fn resolved_step_bound() {
        let g = TimeGrid::resolved(10.0, 12.0).unwrap();
        for w in g.points().windows(2) {
            assert!((w[1] - w[0]) * 12.0 <= 0.1 + 1e-12);
        }
        assert_eq!(g.last(), 10.0);
    }
}
