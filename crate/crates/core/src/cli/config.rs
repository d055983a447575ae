//! Run configuration shared by flags and `key = value` files.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::finite::WalkKind;
use crate::grid::Spacing;
use crate::lattice::LatticeSize;

use super::output::format_float;

/// Analyses and figure recipes the binary can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Spectrum,
    Evolve,
    Snapshot,
    Infinite,
    Limiting,
    Asymmetry,
    Transport,
    Scaling,
    Verify,
    Fig1,
    Fig2,
    Fig4,
    Fig5,
    Fig6,
    Fig8,
}

impl Command {
    pub const ALL: [Command; 15] = [
        Command::Spectrum,
        Command::Evolve,
        Command::Snapshot,
        Command::Infinite,
        Command::Limiting,
        Command::Asymmetry,
        Command::Transport,
        Command::Scaling,
        Command::Verify,
        Command::Fig1,
        Command::Fig2,
        Command::Fig4,
        Command::Fig5,
        Command::Fig6,
        Command::Fig8,
    ];

    pub const NAMES: [&'static str; 15] = [
        "spectrum", "evolve", "snapshot", "infinite", "limiting", "asymmetry", "transport",
        "scaling", "verify", "fig1", "fig2", "fig4", "fig5", "fig6", "fig8",
    ];

    pub fn name(self) -> &'static str {
        let i = Self::ALL.iter().position(|&c| c == self).expect("listed");
        Self::NAMES[i]
    }

    pub fn is_recipe(self) -> bool {
        self.name().starts_with("fig")
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| format!("unknown command `{s}` (expected one of {})", Self::NAMES.join(", ")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Ordered set of integers written as `a:b`, `a:b:step` or `a,b,c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSet(pub Vec<usize>);

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.0;
        if v.len() >= 3 && v[1] > v[0] {
            let step = v[1] - v[0];
            if v.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] == step) {
                let last = v[v.len() - 1];
                return if step == 1 {
                    write!(f, "{}:{last}", v[0])
                } else {
                    write!(f, "{}:{last}:{step}", v[0])
                };
            }
        }
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for IntSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let int = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{x}` is not a non-negative integer"))
        };
        let values = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let (a, b, step) = match parts.as_slice() {
                [a, b] => (int(a)?, int(b)?, 1),
                [a, b, c] => (int(a)?, int(b)?, int(c)?),
                _ => return Err(format!("bad range `{s}`")),
            };
            if step == 0 || b < a {
                return Err(format!("empty or malformed range `{s}`"));
            }
            (a..=b).step_by(step).collect()
        } else {
            s.split(',').map(int).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err(format!("empty set `{s}`"));
        }
        Ok(IntSet(values))
    }
}

/// Time window `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window(pub f64, pub f64);

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", format_float(self.0), format_float(self.1))
    }
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("window `{s}` must look like lo:hi"))?;
        let lo: f64 = parse_value(a.trim())?;
        let hi: f64 = parse_value(b.trim())?;
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(format!("window `{s}` needs 0 <= lo < hi"));
        }
        Ok(Window(lo, hi))
    }
}

fn parse_value<T: FromStr>(s: &str) -> Result<T, String> {
    s.parse::<T>()
        .map_err(|_| format!("cannot parse `{s}` as {}", std::any::type_name::<T>()))
}

fn parse_size(s: &str) -> Result<LatticeSize, String> {
    match s {
        "inf" | "infinite" => Ok(LatticeSize::Infinite),
        _ => parse_value::<usize>(s).map(LatticeSize::Finite),
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

/// Everything that determines one run. Node labels are stored as given; with
/// `one_based` they are shifted when the run resolves them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub n: Option<LatticeSize>,
    pub m: Option<usize>,
    pub m_range: Option<IntSet>,
    pub kind: Option<WalkKind>,
    pub source: Option<usize>,
    pub target: Option<usize>,
    pub offset: Option<i64>,
    pub distances: Option<IntSet>,
    pub sizes: Option<IntSet>,
    pub window: Option<Window>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_count: Option<usize>,
    pub spacing: Option<Spacing>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub one_based: bool,
    pub quad_tol: Option<f64>,
    pub quad_max_subdiv: Option<usize>,
    pub cluster_band: Option<f64>,
    pub verify_tol: Option<f64>,
}

/// Keys in serialization order.
pub const KEYS: [&str; 22] = [
    "command",
    "n",
    "m",
    "m_range",
    "kind",
    "source",
    "target",
    "offset",
    "distances",
    "sizes",
    "window",
    "t_min",
    "t_max",
    "t_count",
    "spacing",
    "out",
    "format",
    "one_based",
    "quad_tol",
    "quad_max_subdiv",
    "cluster_band",
    "verify_tol",
];

fn positive(key: &str, x: f64) -> Result<f64, String> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{key} must be positive and finite, got {x}"))
    }
}

impl RunConfig {
    /// Sets one field from its textual form. Keys may use `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        let bad = |e: String| format!("{key}: {e}");
        match key.as_str() {
            "command" => self.command = Some(v.parse().map_err(bad)?),
            "n" => self.n = Some(parse_size(v).map_err(bad)?),
            "m" => self.m = Some(parse_value(v).map_err(bad)?),
            "m_range" => self.m_range = Some(v.parse().map_err(bad)?),
            "kind" => self.kind = Some(v.parse().map_err(|e: crate::Error| bad(e.to_string()))?),
            "source" => self.source = Some(parse_value(v).map_err(bad)?),
            "target" => self.target = Some(parse_value(v).map_err(bad)?),
            "offset" => self.offset = Some(parse_value(v).map_err(bad)?),
            "distances" => self.distances = Some(v.parse().map_err(bad)?),
            "sizes" => self.sizes = Some(v.parse().map_err(bad)?),
            "window" => self.window = Some(v.parse().map_err(bad)?),
            "t_min" => self.t_min = Some(parse_value(v).map_err(bad)?),
            "t_max" => self.t_max = Some(parse_value(v).map_err(bad)?),
            "t_count" => self.t_count = Some(parse_value(v).map_err(bad)?),
            "spacing" => {
                self.spacing = Some(v.parse().map_err(|e: crate::Error| bad(e.to_string()))?)
            }
            "out" => self.out = Some(PathBuf::from(v)),
            "format" => self.format = v.parse().map_err(bad)?,
            "one_based" => self.one_based = parse_bool(v).map_err(bad)?,
            "quad_tol" => self.quad_tol = Some(positive(&key, parse_value(v).map_err(bad)?)?),
            "quad_max_subdiv" => self.quad_max_subdiv = Some(parse_value(v).map_err(bad)?),
            "cluster_band" => {
                self.cluster_band = Some(positive(&key, parse_value(v).map_err(bad)?)?)
            }
            "verify_tol" => self.verify_tol = Some(positive(&key, parse_value(v).map_err(bad)?)?),
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Textual value of a key, or `None` when the field is unset.
    pub fn get(&self, key: &str) -> Option<String> {
        fn s<T: ToString>(x: &Option<T>) -> Option<String> {
            x.as_ref().map(|v| v.to_string())
        }
        fn f(x: &Option<f64>) -> Option<String> {
            x.map(format_float)
        }
        match key {
            "command" => s(&self.command),
            "n" => s(&self.n),
            "m" => s(&self.m),
            "m_range" => s(&self.m_range),
            "kind" => s(&self.kind),
            "source" => s(&self.source),
            "target" => s(&self.target),
            "offset" => s(&self.offset),
            "distances" => s(&self.distances),
            "sizes" => s(&self.sizes),
            "window" => s(&self.window),
            "t_min" => f(&self.t_min),
            "t_max" => f(&self.t_max),
            "t_count" => s(&self.t_count),
            "spacing" => s(&self.spacing),
            "out" => self.out.as_ref().map(|p| p.to_string_lossy().into_owned()),
            "format" => Some(self.format.to_string()),
            "one_based" => Some(self.one_based.to_string()),
            "quad_tol" => f(&self.quad_tol),
            "quad_max_subdiv" => s(&self.quad_max_subdiv),
            "cluster_band" => f(&self.cluster_band),
            "verify_tol" => f(&self.verify_tol),
            _ => None,
        }
    }

    /// Set fields as `(key, value)` pairs in [`KEYS`] order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        KEYS.iter()
            .filter_map(|&k| self.get(k).map(|v| (k, v)))
            .collect()
    }

    /// `key = value` lines accepted back by [`RunConfig::parse`].
    pub fn serialize(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Parses a config file: one `key = value` per line, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut config = RunConfig::default();
        config.merge_text(text)?;
        Ok(config)
    }

    pub fn merge_text(&mut self, text: &str) -> Result<(), String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
            self.set(k, v).map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(())
    }
}
