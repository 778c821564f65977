// SPDX-License-Identifier: Apache-2.0

//! Run configuration and parameter grids.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Smallest accepted `--samples`.
pub const MIN_SAMPLES: u64 = 100;

/// `n` evenly spaced points from `start` to `end` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, n: usize) -> Grid {
        Grid { start, end, n }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.n - 1) as f64;
        (0..self.n).map(|i| if i + 1 == self.n { self.end } else { self.start + step * i as f64 }).collect()
    }

    fn check(&self) -> CliResult<()> {
        if self.n == 0 {
            return Err(CliError::Usage("grid must have at least one point".into()));
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(CliError::Usage("grid bounds must be finite".into()));
        }
        if self.n > 1 && self.end <= self.start {
            return Err(CliError::Usage(format!(
                "grid {}:{}:{} is not strictly increasing",
                self.start, self.end, self.n
            )));
        }
        Ok(())
    }
}

/// Parses a number, allowing multiples of π such as `pi`, `-pi/2`, `3pi/4` or `2*pi`.
pub fn parse_value(s: &str) -> CliResult<f64> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("cannot parse `{s}` as a number"));
    let Some((head, tail)) = s.split_once("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let head = head.trim_end_matches('*');
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let div = match tail {
        "" => 1.0,
        t => t.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(coef * PI / div)
}

impl FromStr for Grid {
    type Err = CliError;

    /// `start:end:n`
    fn from_str(s: &str) -> CliResult<Grid> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(CliError::Usage(format!("grid `{s}` is not of the form start:end:n")));
        };
        let n = n.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("grid `{s}`: bad point count")))?;
        let grid = Grid::new(parse_value(a)?, parse_value(b)?, n);
        grid.check()?;
        Ok(grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Usage(format!("unknown format `{s}`; expected csv or json"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(seed: u64, samples: u64, format: Format, out: Option<PathBuf>) -> CliResult<RunConfig> {
        if samples < MIN_SAMPLES {
            return Err(CliError::Usage(format!("--samples must be at least {MIN_SAMPLES}, got {samples}")));
        }
        Ok(RunConfig { seed, samples, format, out })
    }
}
