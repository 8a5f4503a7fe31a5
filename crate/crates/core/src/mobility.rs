//! Node mobility over a bounded square field.
//!
//! A population mixes two kinds of nodes. Random nodes perform a
//! random-direction walk: every tick a fresh heading is drawn uniformly from
//! `[0, 2π)` and the node moves at the common speed. Guided nodes follow a
//! [`VelocityField`] evaluated at their current position, rescaled to the
//! same common speed. Nodes that would leave the field are folded back in
//! according to the [`BoundaryPolicy`].
//!
//! Node indices are assigned random nodes first (`0..n_random`), then guided
//! nodes. Initial positions are uniform over the field unless supplied.

use std::f64::consts::TAU;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::topology::TopologyBitString;
use crate::vec2::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldGeometry {
    pub side_length: f64,
    pub comm_radius: f64,
}

impl FieldGeometry {
    pub fn new(side_length: f64, comm_radius: f64) -> Result<Self> {
        let g = Self {
            side_length,
            comm_radius,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.side_length > 0.0 && self.side_length.is_finite()) {
            return Err(invalid("side_length", "must be positive and finite"));
        }
        if !(self.comm_radius > 0.0 && self.comm_radius.is_finite()) {
            return Err(invalid("comm_radius", "must be positive and finite"));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        self.side_length * self.side_length
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new(self.side_length / 2.0, self.side_length / 2.0)
    }

    pub fn contains(&self, p: Vec2) -> bool {
        (0.0..=self.side_length).contains(&p.x) && (0.0..=self.side_length).contains(&p.y)
    }
}

/// Analytic or sampled vector field that steers guided nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VelocityField {
    /// Rigid rotation `ω·(−(y−c_y), x−c_x)`.
    Rotation {
        center: Vec2,
        angular_rate: f64,
    },
    UniformDrift {
        velocity: Vec2,
    },
    /// Row-major samples on a regular grid, bilinearly interpolated and
    /// clamped to the grid edge outside it.
    CustomGrid {
        origin: Vec2,
        spacing: f64,
        nx: usize,
        ny: usize,
        values: Vec<Vec2>,
    },
}

impl VelocityField {
    pub fn rotation_about_center(geometry: &FieldGeometry, angular_rate: f64) -> Self {
        VelocityField::Rotation {
            center: geometry.center(),
            angular_rate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VelocityField::Rotation {
                center,
                angular_rate,
            } => {
                if !center.is_finite() || !angular_rate.is_finite() {
                    return Err(invalid("field", "rotation parameters must be finite"));
                }
            }
            VelocityField::UniformDrift { velocity } => {
                if !velocity.is_finite() {
                    return Err(invalid("field", "drift velocity must be finite"));
                }
            }
            VelocityField::CustomGrid {
                spacing,
                nx,
                ny,
                values,
                ..
            } => {
                if !(*spacing > 0.0) || *nx < 2 || *ny < 2 {
                    return Err(invalid(
                        "field",
                        "custom grid needs spacing > 0 and at least 2x2 samples",
                    ));
                }
                if values.len() != nx * ny {
                    return Err(invalid(
                        "field",
                        format!(
                            "custom grid expects {} values, got {}",
                            nx * ny,
                            values.len()
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, p: Vec2) -> Vec2 {
        match self {
            VelocityField::Rotation {
                center,
                angular_rate,
            } => {
                let d = p - *center;
                Vec2::new(-d.y, d.x) * *angular_rate
            }
            VelocityField::UniformDrift { velocity } => *velocity,
            VelocityField::CustomGrid {
                origin,
                spacing,
                nx,
                ny,
                values,
            } => {
                let gx = ((p.x - origin.x) / spacing).clamp(0.0, (*nx - 1) as f64);
                let gy = ((p.y - origin.y) / spacing).clamp(0.0, (*ny - 1) as f64);
                let i = (gx.floor() as usize).min(nx - 2);
                let j = (gy.floor() as usize).min(ny - 2);
                let (fx, fy) = (gx - i as f64, gy - j as f64);
                let at = |i: usize, j: usize| values[j * nx + i];
                at(i, j) * ((1.0 - fx) * (1.0 - fy))
                    + at(i + 1, j) * (fx * (1.0 - fy))
                    + at(i, j + 1) * ((1.0 - fx) * fy)
                    + at(i + 1, j + 1) * (fx * fy)
            }
        }
    }

    fn evaluate_checked(&self, p: Vec2) -> Result<Vec2> {
        let v = self.evaluate(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteField { x: p.x, y: p.y })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryPolicy {
    /// Mirror the overshoot back into the field.
    #[default]
    Reflect,
    /// Torus wraparound.
    Wrap,
}

impl BoundaryPolicy {
    fn apply(self, coord: f64, side: f64) -> f64 {
        match self {
            BoundaryPolicy::Reflect => {
                let period = 2.0 * side;
                let m = coord.rem_euclid(period);
                if m > side {
                    period - m
                } else {
                    m
                }
            }
            BoundaryPolicy::Wrap => coord.rem_euclid(side),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobilityConfig {
    pub n_random: usize,
    pub n_guided: usize,
    pub speed: f64,
    pub dt_step: f64,
    pub n_steps: usize,
    pub seed: u64,
    pub field: VelocityField,
    #[serde(default)]
    pub boundary: BoundaryPolicy,
}

impl MobilityConfig {
    pub fn n_nodes(&self) -> usize {
        self.n_random + self.n_guided
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes() == 0 {
            return Err(invalid("n_nodes", "population is empty"));
        }
        if self.n_nodes() < 2 {
            return Err(invalid("n_nodes", "need at least 2 nodes"));
        }
        if !(self.speed >= 0.0 && self.speed.is_finite()) {
            return Err(invalid("speed", "must be finite and >= 0"));
        }
        if !(self.dt_step > 0.0 && self.dt_step.is_finite()) {
            return Err(invalid("dt_step", "must be finite and > 0"));
        }
        if self.n_steps < 2 {
            return Err(invalid("n_steps", "need at least 2 ticks"));
        }
        self.field.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Random,
    Guided,
}

/// Positions and velocities indexed `[node][tick]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub positions: Vec<Vec<Vec2>>,
    pub velocities: Vec<Vec<Vec2>>,
    pub kinds: Vec<NodeKind>,
    pub tick_duration: f64,
}

impl Trajectory {
    pub fn n_nodes(&self) -> usize {
        self.positions.len()
    }

    pub fn n_ticks(&self) -> usize {
        self.positions.first().map_or(0, Vec::len)
    }

    pub fn position(&self, node: usize, tick: usize) -> Result<Vec2> {
        self.check_node(node)?;
        self.check_tick(tick)?;
        Ok(self.positions[node][tick])
    }

    pub fn velocity(&self, node: usize, tick: usize) -> Result<Vec2> {
        self.check_node(node)?;
        self.check_tick(tick)?;
        Ok(self.velocities[node][tick])
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<()> {
        if node < self.n_nodes() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                what: "node",
                index: node,
                len: self.n_nodes(),
            })
        }
    }

    pub(crate) fn check_tick(&self, tick: usize) -> Result<()> {
        if tick < self.n_ticks() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                what: "tick",
                index: tick,
                len: self.n_ticks(),
            })
        }
    }

    /// Dumps `tick,node,x,y,vx,vy` rows with a header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "tick,node,x,y,vx,vy")?;
        for tick in 0..self.n_ticks() {
            for node in 0..self.n_nodes() {
                let p = self.positions[node][tick];
                let v = self.velocities[node][tick];
                writeln!(out, "{tick},{node},{},{},{},{}", p.x, p.y, v.x, v.y)?;
            }
        }
        Ok(())
    }
}

/// Simulates with initial positions drawn uniformly over the field.
pub fn simulate(config: &MobilityConfig, geometry: &FieldGeometry) -> Result<Trajectory> {
    config.validate()?;
    geometry.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let side = geometry.side_length;
    let initial: Vec<Vec2> = (0..config.n_nodes())
        .map(|_| Vec2::new(rng.random_range(0.0..=side), rng.random_range(0.0..=side)))
        .collect();
    run(config, geometry, initial, &mut rng)
}

/// Simulates from caller-supplied starting points (one per node).
pub fn simulate_from(
    config: &MobilityConfig,
    geometry: &FieldGeometry,
    initial: &[Vec2],
) -> Result<Trajectory> {
    config.validate()?;
    geometry.validate()?;
    if initial.len() != config.n_nodes() {
        return Err(invalid(
            "initial",
            format!("{} positions for {} nodes", initial.len(), config.n_nodes()),
        ));
    }
    if let Some(p) = initial.iter().find(|p| !geometry.contains(**p)) {
        return Err(invalid(
            "initial",
            format!("({}, {}) lies outside the field", p.x, p.y),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    run(config, geometry, initial.to_vec(), &mut rng)
}

fn run(
    config: &MobilityConfig,
    geometry: &FieldGeometry,
    mut current: Vec<Vec2>,
    rng: &mut ChaCha8Rng,
) -> Result<Trajectory> {
    let n = config.n_nodes();
    let ticks = config.n_steps;
    let side = geometry.side_length;
    let kinds: Vec<NodeKind> = (0..n)
        .map(|i| {
            if i < config.n_random {
                NodeKind::Random
            } else {
                NodeKind::Guided
            }
        })
        .collect();

    let mut positions: Vec<Vec<Vec2>> = current
        .iter()
        .map(|&p| {
            let mut track = Vec::with_capacity(ticks);
            track.push(p);
            track
        })
        .collect();

    for _ in 1..ticks {
        for (node, pos) in current.iter_mut().enumerate() {
            let heading = match kinds[node] {
                NodeKind::Random => Vec2::from_angle(rng.random_range(0.0..TAU)),
                NodeKind::Guided => config.field.evaluate_checked(*pos)?.with_length(1.0),
            };
            let next = *pos + heading * (config.speed * config.dt_step);
            *pos = Vec2::new(
                config.boundary.apply(next.x, side),
                config.boundary.apply(next.y, side),
            );
            positions[node].push(*pos);
        }
    }

    let velocities = positions
        .iter()
        .map(|track| {
            let mut v: Vec<Vec2> = track
                .windows(2)
                .map(|w| (w[1] - w[0]) * (1.0 / config.dt_step))
                .collect();
            let last = *v.last().expect("n_steps >= 2");
            v.push(last);
            v
        })
        .collect();

    Ok(Trajectory {
        positions,
        velocities,
        kinds,
        tick_duration: config.dt_step,
    })
}

/// Unit-disk adjacency at one tick: pair `(i, j)` is linked iff the nodes
/// are within `radius` of each other.
pub fn snapshot_adjacency(
    traj: &Trajectory,
    tick: usize,
    radius: f64,
) -> Result<TopologyBitString> {
    traj.check_tick(tick)?;
    let pos: Vec<Vec2> = traj.positions.iter().map(|t| t[tick]).collect();
    Ok(TopologyBitString::from_fn(pos.len(), |i, j| {
        pos[i].distance(pos[j]) <= radius
    }))
}

/// One snapshot per tick, in tick order.
pub fn topology_run(traj: &Trajectory, radius: f64) -> Vec<TopologyBitString> {
    (0..traj.n_ticks())
        .map(|t| snapshot_adjacency(traj, t, radius).expect("tick in range"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometry() -> FieldGeometry {
        FieldGeometry::new(1000.0, 100.0).unwrap()
    }

    fn config(n_random: usize, n_guided: usize, speed: f64) -> MobilityConfig {
        MobilityConfig {
            n_random,
            n_guided,
            speed,
            dt_step: 1.0,
            n_steps: 200,
            seed: 7,
            field: VelocityField::rotation_about_center(&geometry(), 0.01),
            boundary: BoundaryPolicy::Reflect,
        }
    }

    #[test]
    fn zero_speed_is_a_fixed_point() {
        let traj = simulate(&config(3, 3, 0.0), &geometry()).unwrap();
        for track in &traj.positions {
            assert!(track.iter().all(|p| *p == track[0]));
        }
        for track in &traj.velocities {
            assert!(track.iter().all(|v| *v == Vec2::ZERO));
        }
    }

    #[test]
    fn guided_node_orbits_the_center() {
        let g = geometry();
        let d = 200.0;
        let speed = 1.0;
        let mut cfg = config(0, 2, speed);
        cfg.dt_step = 0.1;
        let period = std::f64::consts::TAU * d / speed;
        cfg.n_steps = (period / cfg.dt_step).ceil() as usize + 1;
        let start = g.center() + Vec2::new(d, 0.0);
        let other = g.center() + Vec2::new(0.0, -50.0);
        let traj = simulate_from(&cfg, &g, &[start, other]).unwrap();
        for p in &traj.positions[0] {
            let r = p.distance(g.center());
            assert!((r - d).abs() / d < 0.01, "radius drifted to {r}");
        }
    }

    #[test]
    fn same_seed_same_trajectory() {
        let a = simulate(&config(4, 4, 5.0), &geometry()).unwrap();
        let b = simulate(&config(4, 4, 5.0), &geometry()).unwrap();
        assert_eq!(a, b);
        let mut other = config(4, 4, 5.0);
        other.seed = 8;
        assert_ne!(a, simulate(&other, &geometry()).unwrap());
    }

    #[test]
    fn rejects_empty_population() {
        assert!(simulate(&config(0, 0, 1.0), &geometry()).is_err());
    }

    #[test]
    fn rejects_non_finite_field() {
        let g = geometry();
        let mut cfg = config(0, 2, 1.0);
        cfg.field = VelocityField::Rotation {
            center: g.center(),
            angular_rate: f64::INFINITY,
        };
        assert!(cfg.validate().is_err());
        cfg.field = VelocityField::CustomGrid {
            origin: Vec2::ZERO,
            spacing: 500.0,
            nx: 3,
            ny: 3,
            values: vec![Vec2::new(f64::NAN, 0.0); 9],
        };
        assert!(matches!(
            simulate(&cfg, &g),
            Err(Error::NonFiniteField { .. })
        ));
    }

    #[test]
    fn velocities_are_forward_differences() {
        let traj = simulate(&config(3, 3, 7.0), &geometry()).unwrap();
        for node in 0..traj.n_nodes() {
            for t in 0..traj.n_ticks() - 1 {
                let expect = (traj.positions[node][t + 1] - traj.positions[node][t])
                    * (1.0 / traj.tick_duration);
                assert_eq!(traj.velocities[node][t], expect);
            }
        }
    }

    #[test]
    fn reflection_folds_overshoot() {
        let b = BoundaryPolicy::Reflect;
        assert_eq!(b.apply(-3.0, 10.0), 3.0);
        assert_eq!(b.apply(12.0, 10.0), 8.0);
        assert_eq!(b.apply(5.0, 10.0), 5.0);
        assert_eq!(BoundaryPolicy::Wrap.apply(12.0, 10.0), 2.0);
    }

    #[test]
    fn grid_field_interpolates() {
        let f = VelocityField::CustomGrid {
            origin: Vec2::ZERO,
            spacing: 1.0,
            nx: 2,
            ny: 2,
            values: vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(2.0, 0.0),
                Vec2::new(0.0, 2.0),
                Vec2::new(2.0, 2.0),
            ],
        };
        assert_eq!(f.evaluate(Vec2::new(0.5, 0.5)), Vec2::new(1.0, 1.0));
        assert_eq!(f.evaluate(Vec2::new(5.0, -5.0)), Vec2::new(2.0, 0.0));
    }

    fn line_trajectory(coords: &[(f64, f64)]) -> Trajectory {
        Trajectory {
            positions: coords.iter().map(|&(x, y)| vec![Vec2::new(x, y)]).collect(),
            velocities: coords.iter().map(|_| vec![Vec2::ZERO]).collect(),
            kinds: vec![NodeKind::Random; coords.len()],
            tick_duration: 1.0,
        }
    }

    #[test]
    fn adjacency_complete_and_empty() {
        let close = line_trajectory(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(
            snapshot_adjacency(&close, 0, 5.0).unwrap().to_string(),
            "111"
        );
        assert_eq!(
            snapshot_adjacency(&close, 0, 0.5).unwrap().to_string(),
            "000"
        );
        assert!(snapshot_adjacency(&close, 1, 5.0).is_err());
    }

    #[test]
    fn adjacency_on_a_line_matches_brute_force() {
        let r = 10.0;
        let pts = [(0.0, 0.0), (r, 0.0), (2.0 * r, 0.0), (3.0 * r, 0.0)];
        let bits = snapshot_adjacency(&line_trajectory(&pts), 0, r).unwrap();
        let mut expect = String::new();
        for i in 0..4 {
            for j in i + 1..4 {
                let (a, b) = (pts[i], pts[j]);
                let d = (a.0 - b.0).hypot(a.1 - b.1);
                expect.push(if d <= r { '1' } else { '0' });
            }
        }
        assert_eq!(expect, "100101");
        assert_eq!(bits.to_string(), expect);
    }
}
