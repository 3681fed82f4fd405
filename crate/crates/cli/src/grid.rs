//! `--grid AXIS=start:stop:steps` parsing and resolution of swept versus
//! fixed parameters.

use std::collections::BTreeMap;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use dispteleport::sweep::{cartesian, linspace};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub axis: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl FromStr for GridSpec {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        let (axis, range) = s.split_once('=').context("grid must look like AXIS=start:stop:steps")?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, steps] = parts[..] else {
            bail!("grid range {range:?} must be start:stop:steps");
        };
        let steps: usize = steps.trim().parse().with_context(|| format!("bad step count {steps:?}"))?;
        if steps < 2 {
            bail!("grid {axis} needs at least 2 steps; pass a single value with --{axis} instead");
        }
        Ok(Self {
            axis: axis.trim().to_string(),
            start: start.trim().parse().with_context(|| format!("bad grid start {start:?}"))?,
            stop: stop.trim().parse().with_context(|| format!("bad grid stop {stop:?}"))?,
            steps,
        })
    }
}

/// Complex number written as `re,im` (or a bare real).
pub fn parse_complex(s: &str) -> Result<C64> {
    let parse = |x: &str| x.trim().parse::<f64>().with_context(|| format!("bad number {x:?} in {s:?}"));
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(parse(re)?, parse(im)?)),
        None => Ok(C64::new(parse(s)?, 0.0)),
    }
}

pub type Point = BTreeMap<&'static str, f64>;

/// Combine grids with fixed values into one point per row, last axis varying
/// fastest. `allowed` fixes both the accepted axis names and the row order;
/// an axis may be gridded or fixed but not both.
pub fn resolve(
    allowed: &[&'static str],
    grids: &[GridSpec],
    fixed: &[(&'static str, Option<f64>)],
) -> Result<Vec<Point>> {
    let mut by_axis: BTreeMap<&str, &GridSpec> = BTreeMap::new();
    for g in grids {
        let Some(name) = allowed.iter().find(|a| **a == g.axis) else {
            bail!("cannot sweep {:?} here (allowed axes: {})", g.axis, allowed.join(", "));
        };
        if by_axis.insert(name, g).is_some() {
            bail!("axis {name} gridded twice");
        }
        if fixed.iter().any(|(f, v)| f == name && v.is_some()) {
            bail!("axis {name} is both gridded and fixed with --{name}");
        }
    }
    let axes: Vec<&'static str> = allowed.iter().copied().filter(|a| by_axis.contains_key(a)).collect();
    let values = axes
        .iter()
        .map(|a| {
            let g = by_axis[a];
            Ok(linspace(g.start, g.stop, g.steps)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(cartesian(&values)
        .into_iter()
        .map(|row| {
            let mut p: Point = fixed.iter().filter_map(|(name, v)| v.map(|v| (*name, v))).collect();
            p.extend(axes.iter().copied().zip(row));
            p
        })
        .collect())
}
