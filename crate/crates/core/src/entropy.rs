//! Relative-velocity statistics and the normalized motion-entropy metric.
//!
//! For a reference node `m`, the average relative speed to each member `k`
//! of its interest set is `a[m][k] = mean_i |v(m,t_i) - v(k,t_i)|` (mean of
//! magnitudes). Normalizing the `a` values gives a distribution over the
//! interest set, and its Shannon entropy divided by `log |F_m|` is the
//! motion entropy `H_m` in `[0, 1]`. Zero means one member dominates the
//! relative motion; one means relative speeds are evenly spread.

use std::io::Write;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::mobility::{FieldGeometry, Trajectory, VelocityField};
use crate::vec2::Vec2;

pub fn relative_velocity(traj: &Trajectory, m: usize, n: usize, tick: usize) -> Result<Vec2> {
    Ok(traj.velocity(m, tick)? - traj.velocity(n, tick)?)
}

/// Mean over `window` of `|v(m) - v(n)|`.
pub fn avg_relative_speed(
    traj: &Trajectory,
    m: usize,
    n: usize,
    window: Range<usize>,
) -> Result<f64> {
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    traj.check_node(m)?;
    traj.check_node(n)?;
    traj.check_tick(window.end - 1)?;
    let samples = window.len() as f64;
    let sum: f64 = window
        .map(|t| (traj.velocities[m][t] - traj.velocities[n][t]).norm())
        .sum();
    Ok(sum / samples)
}

/// Which peers a node's entropy is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterestSet {
    #[default]
    AllOthers,
    /// The `k` nearest peers at the first tick of the window.
    Nearest(usize),
}

impl InterestSet {
    pub fn members(&self, traj: &Trajectory, m: usize, tick: usize) -> Result<Vec<usize>> {
        traj.check_node(m)?;
        traj.check_tick(tick)?;
        let mut others: Vec<usize> = (0..traj.n_nodes()).filter(|&k| k != m).collect();
        if let InterestSet::Nearest(k) = *self {
            let origin = traj.positions[m][tick];
            others.sort_by(|&a, &b| {
                let da = traj.positions[a][tick].distance(origin);
                let db = traj.positions[b][tick].distance(origin);
                da.total_cmp(&db).then(a.cmp(&b))
            });
            others.truncate(k);
            others.sort_unstable();
        }
        Ok(others)
    }
}

/// Average relative speeds from one reference node to its interest set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeSpeedTable {
    pub reference: usize,
    pub members: Vec<usize>,
    /// `speeds[i]` pairs with `members[i]`.
    pub speeds: Vec<f64>,
    pub samples: usize,
    pub window_secs: f64,
}

impl RelativeSpeedTable {
    pub fn build(
        traj: &Trajectory,
        reference: usize,
        interest: InterestSet,
        window: Range<usize>,
    ) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let members = interest.members(traj, reference, window.start)?;
        let speeds = members
            .iter()
            .map(|&k| avg_relative_speed(traj, reference, k, window.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            reference,
            members,
            speeds,
            samples: window.len(),
            window_secs: window.len() as f64 * traj.tick_duration,
        })
    }

    /// A table from raw speeds, members numbered `1..=len` (reference 0).
    pub fn from_speeds(speeds: Vec<f64>) -> Result<Self> {
        if speeds.iter().any(|a| !(*a >= 0.0 && a.is_finite())) {
            return Err(invalid("speeds", "relative speeds must be finite and >= 0"));
        }
        Ok(Self {
            reference: 0,
            members: (1..=speeds.len()).collect(),
            speeds,
            samples: 1,
            window_secs: 0.0,
        })
    }

    fn total(&self) -> f64 {
        self.speeds.iter().sum()
    }
}

/// Share of member `k`'s average relative speed in the table total.
pub fn relative_speed_probability(table: &RelativeSpeedTable, k: usize) -> Result<f64> {
    let idx = table
        .members
        .iter()
        .position(|&m| m == k)
        .ok_or(Error::OutOfRange {
            what: "interest set member",
            index: k,
            len: table.members.len(),
        })?;
    let total = table.total();
    if total <= 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    Ok(table.speeds[idx] / total)
}

pub fn probabilities(table: &RelativeSpeedTable) -> Result<Vec<f64>> {
    let total = table.total();
    if total <= 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    Ok(table.speeds.iter().map(|a| a / total).collect())
}

/// Shannon entropy of `probs` divided by `ln(probs.len())`; `0·ln 0 = 0`.
pub fn normalized_entropy(probs: &[f64]) -> Result<f64> {
    if probs.len() < 2 {
        return Err(Error::InterestSetTooSmall(probs.len()));
    }
    let h = probs
        .iter()
        .filter(|p| **p > 0.0)
        .fold(0.0, |acc, p| acc - p * p.ln());
    Ok((h / (probs.len() as f64).ln()).clamp(0.0, 1.0))
}

/// Normalized motion entropy of one reference node. A table whose speeds
/// are all zero is a motionless swarm: it yields 0 and logs a warning.
pub fn motion_entropy(table: &RelativeSpeedTable) -> Result<f64> {
    if table.members.len() < 2 {
        return Err(Error::InterestSetTooSmall(table.members.len()));
    }
    match probabilities(table) {
        Ok(p) => normalized_entropy(&p),
        Err(Error::DegenerateDistribution) => {
            log::warn!(
                "node {}: all relative speeds are zero, motion entropy set to 0",
                table.reference
            );
            Ok(0.0)
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub per_node: Vec<f64>,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl EntropyResult {
    pub fn from_values(per_node: Vec<f64>) -> Self {
        let mean = per_node.iter().sum::<f64>() / per_node.len().max(1) as f64;
        let min = per_node.iter().copied().fold(f64::INFINITY, f64::min);
        let max = per_node.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            per_node,
            mean,
            min,
            max,
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "node,H_m")?;
        for (node, h) in self.per_node.iter().enumerate() {
            writeln!(out, "{node},{h}")?;
        }
        Ok(())
    }
}

/// Motion entropy of every node over `window` (whole trajectory if `None`).
pub fn population_entropy(
    traj: &Trajectory,
    interest: InterestSet,
    window: Option<Range<usize>>,
) -> Result<EntropyResult> {
    let window = window.unwrap_or(0..traj.n_ticks());
    let per_node = (0..traj.n_nodes())
        .map(|m| {
            motion_entropy(&RelativeSpeedTable::build(
                traj,
                m,
                interest,
                window.clone(),
            )?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyResult::from_values(per_node))
}

/// z-curl samples on the interior points of a square grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurlMap {
    pub spacing: f64,
    /// Grid points per axis; point `(i, j)` sits at `((i+1)h, (j+1)h)`.
    pub points_per_axis: usize,
    /// Row-major, `values[j * points_per_axis + i]`.
    pub values: Vec<f64>,
}

impl CurlMap {
    pub fn point(&self, i: usize, j: usize) -> Vec2 {
        Vec2::new((i + 1) as f64 * self.spacing, (j + 1) as f64 * self.spacing)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec2, f64)> + '_ {
        let n = self.points_per_axis;
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &c)| (self.point(k % n, k / n), c))
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,y,curl")?;
        for (p, c) in self.iter() {
            writeln!(out, "{},{},{c}", p.x, p.y)?;
        }
        Ok(())
    }
}

pub fn curl_map(field: &VelocityField, geometry: &FieldGeometry, spacing: f64) -> Result<CurlMap> {
    field.validate()?;
    curl_map_with(|p| field.evaluate(p), geometry, spacing)
}

/// Central-difference `∂v_y/∂x − ∂v_x/∂y` of an arbitrary field.
pub fn curl_map_with(
    field: impl Fn(Vec2) -> Vec2,
    geometry: &FieldGeometry,
    spacing: f64,
) -> Result<CurlMap> {
    let side = geometry.side_length;
    if !(spacing > 0.0 && spacing < side / 4.0) {
        return Err(invalid("grid_spacing", "must be > 0 and < side_length / 4"));
    }
    let eval = |p: Vec2| {
        let v = field(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteField { x: p.x, y: p.y })
        }
    };
    // interior points strictly inside (0, side)
    let points_per_axis = ((side / spacing).ceil() as usize).saturating_sub(1);
    let mut values = Vec::with_capacity(points_per_axis * points_per_axis);
    for j in 0..points_per_axis {
        for i in 0..points_per_axis {
            let p = Vec2::new((i + 1) as f64 * spacing, (j + 1) as f64 * spacing);
            let dx = Vec2::new(spacing, 0.0);
            let dy = Vec2::new(0.0, spacing);
            let dvy_dx = (eval(p + dx)?.y - eval(p - dx)?.y) / (2.0 * spacing);
            let dvx_dy = (eval(p + dy)?.x - eval(p - dy)?.x) / (2.0 * spacing);
            values.push(dvy_dx - dvx_dy);
        }
    }
    Ok(CurlMap {
        spacing,
        points_per_axis,
        values,
    })
}
