// SPDX-License-Identifier: Apache-2.0

//! Problem files, evaluation grids and CSV series.
//!
//! A problem file is a single JSON object:
//!
//! ```json
//! {"f": "t^5 + t", "domain": [-2, 2], "A": {"kind": "uniform", "a": 0, "b": 1}}
//! ```
//!
//! with an optional `"grid": [lo, hi, n]`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::SourceDistribution;
use crate::expr::Expr;
use crate::numerics::Bracket;
use crate::transform::{ImplicitDensity, MonotoneMap, TransformError, DEFAULT_GRID_POINTS};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid grid '{0}': expected LO:HI:N with finite LO < HI and N >= 1")]
    Grid(String),
    #[error("value at t = {t} is not finite")]
    NonFinite { t: f64 },
}

/// `n + 1` equally spaced nodes from `lo` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64, usize)", into = "(f64, f64, usize)")]
pub struct GridSpec {
    range: Bracket,
    n: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self, ProblemError> {
        let range = Bracket::new(lo, hi).map_err(|_| ProblemError::Grid(format!("{lo}:{hi}:{n}")))?;
        if n == 0 {
            return Err(ProblemError::Grid(format!("{lo}:{hi}:{n}")));
        }
        Ok(GridSpec { range, n })
    }

    pub fn range(&self) -> Bracket {
        self.range
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        self.range.grid(self.n)
    }
}

impl FromStr for GridSpec {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ProblemError::Grid(s.to_string());
        let mut parts = s.split(':');
        let (Some(lo), Some(hi), Some(n), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        GridSpec::new(lo, hi, n).map_err(|_| bad())
    }
}

impl TryFrom<(f64, f64, usize)> for GridSpec {
    type Error = ProblemError;

    fn try_from((lo, hi, n): (f64, f64, usize)) -> Result<Self, Self::Error> {
        GridSpec::new(lo, hi, n)
    }
}

impl From<GridSpec> for (f64, f64, usize) {
    fn from(g: GridSpec) -> Self {
        (g.range.lo(), g.range.hi(), g.n)
    }
}

/// One `(f, domain, A)` problem, optionally with a default output grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(rename = "f")]
    pub f_source: String,
    pub domain: Bracket,
    #[serde(rename = "A")]
    pub source: SourceDistribution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, ProblemError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ProblemError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ProblemError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem spec serializes")
    }

    pub fn build(&self) -> Result<ImplicitDensity, TransformError> {
        let f = Expr::parse(&self.f_source)?;
        let map = MonotoneMap::build(f, self.domain, DEFAULT_GRID_POINTS)?;
        ImplicitDensity::new(map, self.source.clone())
    }
}

/// Sampled curve with strictly increasing `t` and finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSeries {
    points: Vec<(f64, f64)>,
}

impl GridSeries {
    pub fn tabulate<F>(grid: &GridSpec, f: F) -> Result<Self, ProblemError>
    where
        F: Fn(f64) -> f64,
    {
        let points = grid
            .nodes()
            .map(|t| {
                let v = f(t);
                if v.is_finite() {
                    Ok((t, v))
                } else {
                    Err(ProblemError::NonFinite { t })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GridSeries { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV with header `t,<column>` and LF line endings.
    pub fn to_csv(&self, column: &str) -> String {
        let mut out = format!("t,{column}\n");
        for &(t, v) in &self.points {
            let _ = writeln!(out, "{},{}", format_number(t), format_number(v));
        }
        out
    }
}

/// Shortest text that parses back to the same `f64` (at most 17
/// significant digits). Plain decimal in `[1e-5, 1e16)`, scientific
/// notation outside it. Locale independent.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !a.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// The four worked problems: `t^5 + t` against uniform(0,1),
/// exponential(0.1) and normal(0,1), and `t + 0.9 sin t` against
/// uniform(0,1), each with a grid covering its visible support.
pub fn builtin_example(id: u32) -> Option<ProblemSpec> {
    let unit = || SourceDistribution::uniform(0.0, 1.0).expect("valid");
    let (f, domain, source, grid) = match id {
        1 => ("t^5 + t", (-2.0, 2.0), unit(), (-0.15, 0.85, 500)),
        2 => (
            "t^5 + t",
            (-3.0, 3.0),
            SourceDistribution::exponential(0.1).expect("valid"),
            (0.0, 3.0, 500),
        ),
        3 => ("t + .9*sin(t)", (-10.0, 10.0), unit(), (-0.1, 0.9, 500)),
        4 => (
            "t^5 + t",
            (-2.0, 2.0),
            SourceDistribution::normal(0.0, 1.0).expect("valid"),
            (-2.0, 2.0, 500),
        ),
        _ => return None,
    };
    Some(ProblemSpec {
        f_source: f.to_string(),
        domain: Bracket::new(domain.0, domain.1).expect("valid"),
        source,
        grid: Some(GridSpec::new(grid.0, grid.1, grid.2).expect("valid")),
    })
}
