//! Monte Carlo simulation of the evolving random graph `G(n, p, w)`.
//!
//! Each epoch is an independent Erdős–Rényi draw; the topology is replaced
//! wholesale every `w` seconds. Source and destination are nodes 0 and 1.
//!
//! Seeds: trial `i` of a run with master seed `s` uses
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `i`. Trials therefore
//! never share random numbers and results do not depend on how trials are
//! scheduled across threads.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const SOURCE: usize = 0;
pub const TARGET: usize = 1;
pub const DEFAULT_EPOCH_CAP: u64 = 100_000;
/// Upper bound on simple paths tracked per route in flash statistics.
pub const PATH_LIMIT: usize = 1 << 16;

pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// One epoch's undirected edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    n: usize,
    adjacency: Vec<bool>,
    neighbors: Vec<Vec<u32>>,
}

impl Snapshot {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adjacency: vec![false; n * n],
            neighbors: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut s = Self::empty(n);
        for &(a, b) in edges {
            s.add_edge(a, b);
        }
        s
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        if a == b || self.adjacency[a * self.n + b] {
            return;
        }
        self.adjacency[a * self.n + b] = true;
        self.adjacency[b * self.n + a] = true;
        self.neighbors[a].push(b as u32);
        self.neighbors[b].push(a as u32);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a * self.n + b]
    }

    pub fn neighbors(&self, a: usize) -> &[u32] {
        &self.neighbors[a]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Draws each unordered pair independently with probability `p`.
pub fn sample_epoch<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Snapshot> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("link_probability", "must lie in [0, 1]"));
    }
    let mut s = Snapshot::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                s.add_edge(a, b);
            }
        }
    }
    Ok(s)
}

/// Breadth-first hop count from `s` to `t`; `None` when unreachable.
pub fn shortest_path_length(snap: &Snapshot, s: usize, t: usize) -> Result<Option<usize>> {
    for node in [s, t] {
        if node >= snap.n {
            return Err(Error::OutOfRange {
                what: "node",
                index: node,
                len: snap.n,
            });
        }
    }
    if s == t {
        return Err(invalid("target", "source and target must differ"));
    }
    let mut dist = vec![usize::MAX; snap.n];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in snap.neighbors(u) {
            let v = v as usize;
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                if v == t {
                    return Ok(Some(dist[v]));
                }
                queue.push_back(v);
            }
        }
    }
    Ok(None)
}

/// All simple `s`–`t` paths with exactly `hops` edges, at most `limit`.
pub fn paths_of_length(
    snap: &Snapshot,
    s: usize,
    t: usize,
    hops: usize,
    limit: usize,
) -> Vec<Vec<u32>> {
    fn walk(
        snap: &Snapshot,
        t: usize,
        hops: usize,
        path: &mut Vec<u32>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<u32>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let u = *path.last().expect("path starts at source") as usize;
        let remaining = hops + 1 - path.len();
        if remaining == 1 {
            if snap.has_edge(u, t) {
                let mut done = path.clone();
                done.push(t as u32);
                out.push(done);
            }
            return;
        }
        for &v in snap.neighbors(u) {
            let vu = v as usize;
            if vu == t || on_path[vu] {
                continue;
            }
            on_path[vu] = true;
            path.push(v);
            walk(snap, t, hops, path, on_path, out, limit);
            path.pop();
            on_path[vu] = false;
        }
    }

    let mut out = Vec::new();
    if hops == 0 || s == t {
        return out;
    }
    let mut on_path = vec![false; snap.n];
    on_path[s] = true;
    let mut path = vec![s as u32];
    walk(snap, t, hops, &mut path, &mut on_path, &mut out, limit);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    pub trials: usize,
}

impl McEstimate {
    /// `None` for an empty sample. Summation runs in slice order.
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Some(Self {
            mean,
            stderr: (var / n).sqrt(),
            trials: samples.len(),
        })
    }
}

/// Parameters shared by every trial of a graph-sequence experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceParams {
    pub nodes: usize,
    pub link_probability: f64,
    /// Seconds per epoch.
    pub epoch: f64,
    pub seed: u64,
    pub epoch_cap: u64,
}

impl SequenceParams {
    pub fn new(nodes: usize, link_probability: f64, epoch: f64, seed: u64) -> Self {
        Self {
            nodes,
            link_probability,
            epoch,
            seed,
            epoch_cap: DEFAULT_EPOCH_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(invalid("nodes", "need at least 2 nodes"));
        }
        if !(0.0..=1.0).contains(&self.link_probability) {
            return Err(invalid("link_probability", "must lie in [0, 1]"));
        }
        if !(self.epoch > 0.0 && self.epoch.is_finite()) {
            return Err(invalid("epoch", "must be finite and > 0"));
        }
        if self.epoch_cap == 0 {
            return Err(invalid("epoch_cap", "must be >= 1"));
        }
        Ok(())
    }
}

/// A materialized run of consecutive epochs.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSequence {
    pub params: SequenceParams,
    pub snapshots: Vec<Snapshot>,
}

impl GraphSequence {
    pub fn generate(params: SequenceParams, epochs: usize) -> Result<Self> {
        params.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let snapshots = (0..epochs)
            .map(|_| sample_epoch(params.nodes, params.link_probability, &mut rng))
            .collect::<Result<_>>()?;
        Ok(Self { params, snapshots })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// Time spent in failed epochs before success, or the cap when censored.
    pub elapsed_time: f64,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaitOutcome {
    /// Over successful trials only.
    pub estimate: Option<McEstimate>,
    pub capped: usize,
    pub records: Vec<TrialRecord>,
}

impl WaitOutcome {
    /// `(elapsed, fraction of all trials succeeded by then)` at each
    /// distinct success time, ascending.
    pub fn empirical_cdf(&self) -> Vec<(f64, f64)> {
        let total = self.records.len() as f64;
        let mut times: Vec<f64> = self
            .records
            .iter()
            .filter(|r| r.success)
            .map(|r| r.elapsed_time)
            .collect();
        times.sort_by(f64::total_cmp);
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, t) in times.iter().enumerate() {
            let frac = (i + 1) as f64 / total;
            match out.last_mut() {
                Some(last) if last.0 == *t => last.1 = frac,
                _ => out.push((*t, frac)),
            }
        }
        out
    }

    /// Per-epoch success rate implied by the trials (successes over all
    /// epochs drawn).
    pub fn empirical_success_rate(&self, epoch: f64) -> f64 {
        let successes = self.records.iter().filter(|r| r.success).count() as f64;
        let epochs: f64 = self
            .records
            .iter()
            .map(|r| r.elapsed_time / epoch + if r.success { 1.0 } else { 0.0 })
            .sum();
        successes / epochs
    }
}

/// Draws epochs until the source–target distance drops below `bound`.
pub fn mc_wait_for_shorter_route(
    params: &SequenceParams,
    bound: usize,
    trials: u64,
) -> Result<WaitOutcome> {
    params.validate()?;
    if trials < 100 {
        return Err(invalid("trials", "need at least 100 trials"));
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(params.seed, trial);
            for failed in 0..params.epoch_cap {
                let snap = sample_epoch(params.nodes, params.link_probability, &mut rng)?;
                if shortest_path_length(&snap, SOURCE, TARGET)?.is_some_and(|d| d < bound) {
                    return Ok(TrialRecord {
                        trial,
                        elapsed_time: failed as f64 * params.epoch,
                        success: true,
                    });
                }
            }
            Ok(TrialRecord {
                trial,
                elapsed_time: params.epoch_cap as f64 * params.epoch,
                success: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let waits: Vec<f64> = records
        .iter()
        .filter(|r| r.success)
        .map(|r| r.elapsed_time)
        .collect();
    Ok(WaitOutcome {
        estimate: McEstimate::from_samples(&waits),
        capped: records.len() - waits.len(),
        records,
    })
}

/// How a formed route is judged to survive into later epochs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Persistence {
    /// Alive while at least one of the formed paths has kept every link.
    #[default]
    PathWise,
    /// Alive while every link of every formed path persists.
    LinkSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlashOutcome {
    /// Flash frequency among trials in which a route formed.
    pub estimate: Option<McEstimate>,
    pub formed: usize,
    /// Trials in which no route formed within the epoch cap.
    pub capped: usize,
    /// Lifetime in epochs per formed trial; `None` if it outlived the cap.
    pub lifetimes: Vec<Option<u64>>,
}

/// Waits for an `hops`-link source–target route, measures how many
/// consecutive epochs it survives, and counts it as a flash route when
/// `lifetime·w < update_bound`.
pub fn mc_flash_route_stats(
    params: &SequenceParams,
    hops: usize,
    update_bound: f64,
    trials: u64,
    persistence: Persistence,
) -> Result<FlashOutcome> {
    params.validate()?;
    if trials < 100 {
        return Err(invalid("trials", "need at least 100 trials"));
    }
    if hops == 0 || hops >= params.nodes {
        return Err(invalid(
            "hops",
            format!("must lie in [1, {}]", params.nodes - 1),
        ));
    }
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Option<Option<u64>>> {
            let mut rng = trial_rng(params.seed, trial);
            let draw =
                |rng: &mut ChaCha8Rng| sample_epoch(params.nodes, params.link_probability, rng);
            let mut formed = None;
            for _ in 0..params.epoch_cap {
                let snap = draw(&mut rng)?;
                let paths = paths_of_length(&snap, SOURCE, TARGET, hops, PATH_LIMIT);
                if !paths.is_empty() {
                    formed = Some(paths);
                    break;
                }
            }
            let Some(mut alive) = formed else {
                return Ok(None);
            };
            let mut lifetime = 1;
            while lifetime < params.epoch_cap {
                let snap = draw(&mut rng)?;
                let survives = |p: &Vec<u32>| {
                    p.windows(2)
                        .all(|e| snap.has_edge(e[0] as usize, e[1] as usize))
                };
                match persistence {
                    Persistence::PathWise => alive.retain(survives),
                    Persistence::LinkSet => {
                        if !alive.iter().all(survives) {
                            alive.clear();
                        }
                    }
                }
                if alive.is_empty() {
                    return Ok(Some(Some(lifetime)));
                }
                lifetime += 1;
            }
            Ok(Some(None))
        })
        .collect::<Result<Vec<_>>>()?;

    let lifetimes: Vec<Option<u64>> = per_trial.iter().flatten().copied().collect();
    Ok(FlashOutcome {
        estimate: flash_fraction(&lifetimes, params.epoch, update_bound),
        formed: lifetimes.len(),
        capped: per_trial.len() - lifetimes.len(),
        lifetimes,
    })
}

fn flash_fraction(lifetimes: &[Option<u64>], epoch: f64, update_bound: f64) -> Option<McEstimate> {
    let flashes: Vec<f64> = lifetimes
        .iter()
        .map(|l| match l {
            Some(epochs) if (*epochs as f64) * epoch < update_bound => 1.0,
            _ => 0.0,
        })
        .collect();
    McEstimate::from_samples(&flashes)
}

impl FlashOutcome {
    /// Flash fraction of the same lifetimes under another epoch length or
    /// update bound.
    pub fn rescored(&self, epoch: f64, update_bound: f64) -> Option<McEstimate> {
        flash_fraction(&self.lifetimes, epoch, update_bound)
    }
}

/// Single-epoch distribution of the source–target hop distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteLengthDistribution {
    /// `by_length[h]` = probability the distance is exactly `h` (index 0 unused).
    pub by_length: Vec<f64>,
    pub unreachable: f64,
    /// Trials behind the estimate; `None` for an exact enumeration.
    pub trials: Option<u64>,
}

impl RouteLengthDistribution {
    /// Probability the distance is below `bound`.
    pub fn below(&self, bound: usize) -> f64 {
        self.by_length.iter().take(bound).sum()
    }
}

pub fn mc_route_length_distribution(
    nodes: usize,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<RouteLengthDistribution> {
    if nodes < 2 {
        return Err(invalid("nodes", "need at least 2 nodes"));
    }
    let dists = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            shortest_path_length(&sample_epoch(nodes, p, &mut rng)?, SOURCE, TARGET)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut by_length = vec![0.0; nodes];
    let mut unreachable = 0.0;
    let weight = 1.0 / trials as f64;
    for d in dists {
        match d {
            Some(h) => by_length[h] += weight,
            None => unreachable += weight,
        }
    }
    Ok(RouteLengthDistribution {
        by_length,
        unreachable,
        trials: Some(trials),
    })
}

/// Exact distance distribution by enumerating every graph on `nodes ≤ 7`
/// vertices.
pub fn exact_route_length_distribution(nodes: usize, p: f64) -> Result<RouteLengthDistribution> {
    if !(2..=7).contains(&nodes) {
        return Err(invalid("nodes", "exact enumeration supports 2..=7 nodes"));
    }
    let pairs: Vec<(usize, usize)> = (0..nodes)
        .flat_map(|a| (a + 1..nodes).map(move |b| (a, b)))
        .collect();
    let mut by_length = vec![0.0; nodes];
    let mut unreachable = 0.0;
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        let present = edges.len() as i32;
        let weight = p.powi(present) * (1.0 - p).powi(pairs.len() as i32 - present);
        match shortest_path_length(&Snapshot::from_edges(nodes, &edges), SOURCE, TARGET)? {
            Some(h) => by_length[h] += weight,
            None => unreachable += weight,
        }
    }
    Ok(RouteLengthDistribution {
        by_length,
        unreachable,
        trials: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_epoch_extremes() {
        let mut rng = trial_rng(1, 0);
        assert_eq!(sample_epoch(10, 0.0, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(sample_epoch(10, 1.0, &mut rng).unwrap().edge_count(), 45);
        assert!(sample_epoch(10, 1.5, &mut rng).is_err());
    }

    #[test]
    fn sample_epoch_is_seeded() {
        let a = sample_epoch(20, 0.3, &mut trial_rng(9, 4)).unwrap();
        let b = sample_epoch(20, 0.3, &mut trial_rng(9, 4)).unwrap();
        let c = sample_epoch(20, 0.3, &mut trial_rng(9, 5)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn edge_count_matches_binomial_mean() {
        let mut rng = trial_rng(2024, 0);
        let epochs = 10_000;
        let total: usize = (0..epochs)
            .map(|_| sample_epoch(50, 0.1, &mut rng).unwrap().edge_count())
            .sum();
        let mean = total as f64 / epochs as f64;
        // Binomial(1225, 0.1): mean 122.5, sd of the sample mean sqrt(110.25/1e4)
        let sd = (1225.0f64 * 0.1 * 0.9 / epochs as f64).sqrt();
        assert!((mean - 122.5).abs() < 3.0 * sd, "mean {mean}");
    }

    #[test]
    fn shortest_path_cases() {
        let direct = Snapshot::from_edges(4, &[(0, 1)]);
        assert_eq!(shortest_path_length(&direct, 0, 1).unwrap(), Some(1));
        assert_eq!(
            shortest_path_length(&Snapshot::empty(4), 0, 1).unwrap(),
            None
        );
        let path = Snapshot::from_edges(4, &[(0, 2), (2, 3), (3, 1)]);
        assert_eq!(shortest_path_length(&path, 0, 1).unwrap(), Some(3));
        assert!(shortest_path_length(&path, 1, 1).is_err());
        assert!(shortest_path_length(&path, 0, 9).is_err());
    }

    /// Length of the shortest simple path found by enumerating every
    /// ordering of intermediate nodes.
    fn brute_force_distance(snap: &Snapshot, s: usize, t: usize) -> Option<usize> {
        let others: Vec<usize> = (0..snap.n()).filter(|&v| v != s && v != t).collect();
        let mut best: Option<usize> = None;
        fn extend(
            snap: &Snapshot,
            t: usize,
            path: &mut Vec<usize>,
            others: &[usize],
            best: &mut Option<usize>,
        ) {
            let last = *path.last().unwrap();
            if snap.has_edge(last, t) {
                let len = path.len();
                *best = Some(best.map_or(len, |b: usize| b.min(len)));
            }
            for &v in others {
                if !path.contains(&v) && snap.has_edge(last, v) {
                    path.push(v);
                    extend(snap, t, path, others, best);
                    path.pop();
                }
            }
        }
        extend(snap, t, &mut vec![s], &others, &mut best);
        best
    }

    #[test]
    fn bfs_agrees_with_path_enumeration() {
        for trial in 0..300 {
            let mut rng = trial_rng(77, trial);
            let n = 2 + (trial as usize % 7);
            let snap = sample_epoch(n, 0.35, &mut rng).unwrap();
            assert_eq!(
                shortest_path_length(&snap, 0, 1).unwrap(),
                brute_force_distance(&snap, 0, 1),
                "trial {trial}"
            );
        }
    }

    #[test]
    fn exact_length_paths() {
        let snap = Snapshot::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (2, 3), (0, 1)]);
        assert_eq!(paths_of_length(&snap, 0, 1, 1, 100).len(), 1);
        assert_eq!(paths_of_length(&snap, 0, 1, 2, 100).len(), 2);
        // 0-2-3-1 and 0-3-2-1
        assert_eq!(paths_of_length(&snap, 0, 1, 3, 100).len(), 2);
        assert!(paths_of_length(&snap, 0, 1, 4, 100).is_empty());
        assert_eq!(paths_of_length(&snap, 0, 1, 2, 1).len(), 1);
    }

    #[test]
    fn estimate_statistics() {
        let e = McEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(e.mean, 2.5);
        assert!((e.stderr - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-12);
        assert!(McEstimate::from_samples(&[]).is_none());
    }

    #[test]
    fn immediate_success_waits_zero() {
        let params = SequenceParams::new(10, 1.0, 10.0, 3);
        let out = mc_wait_for_shorter_route(&params, 2, 200).unwrap();
        assert_eq!(out.capped, 0);
        assert_eq!(out.estimate.unwrap().mean, 0.0);
    }

    #[test]
    fn impossible_route_caps_every_trial() {
        let params = SequenceParams {
            epoch_cap: 5,
            ..SequenceParams::new(10, 0.0, 10.0, 3)
        };
        let out = mc_wait_for_shorter_route(&params, 5, 100).unwrap();
        assert_eq!(out.capped, 100);
        assert!(out.estimate.is_none());
        assert!(out
            .records
            .iter()
            .all(|r| !r.success && r.elapsed_time == 50.0));
        assert!(mc_wait_for_shorter_route(&params, 5, 99).is_err());
    }

    #[test]
    fn direct_link_wait_matches_geometric_mean() {
        // bound 2 succeeds iff the direct link exists: P = p
        let params = SequenceParams::new(6, 0.2, 10.0, 11);
        let out = mc_wait_for_shorter_route(&params, 2, 10_000).unwrap();
        let mean = out.estimate.unwrap().mean;
        assert!((mean - 40.0).abs() / 40.0 < 0.05, "mean {mean}");
        let cdf = out.empirical_cdf();
        assert_eq!(cdf[0].0, 0.0);
        assert!((cdf[0].1 - 0.2).abs() < 0.02);
        assert!((cdf.last().unwrap().1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parallelism_does_not_change_results() {
        let params = SequenceParams::new(12, 0.1, 1.0, 5);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_wait_for_shorter_route(&params, 3, 500).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn flash_trivial_cases() {
        let params = SequenceParams {
            epoch_cap: 50,
            ..SequenceParams::new(8, 0.3, 1.0, 1)
        };
        let none = mc_flash_route_stats(&params, 2, 0.0, 200, Persistence::PathWise).unwrap();
        assert_eq!(none.estimate.unwrap().mean, 0.0);

        let full = SequenceParams {
            link_probability: 1.0,
            ..params
        };
        let out = mc_flash_route_stats(&full, 2, 10.0, 100, Persistence::PathWise).unwrap();
        assert_eq!(out.estimate.unwrap().mean, 0.0);
        assert!(out.lifetimes.iter().all(Option::is_none));
    }

    #[test]
    fn link_set_persistence_is_stricter() {
        let params = SequenceParams::new(8, 0.5, 1.0, 2);
        let path = mc_flash_route_stats(&params, 2, 1.5, 2000, Persistence::PathWise).unwrap();
        let link = mc_flash_route_stats(&params, 2, 1.5, 2000, Persistence::LinkSet).unwrap();
        // same draws: link-set lifetimes never exceed path-wise ones
        for (a, b) in path.lifetimes.iter().zip(&link.lifetimes) {
            assert!(b.unwrap_or(u64::MAX) <= a.unwrap_or(u64::MAX));
        }
        assert!(link.estimate.unwrap().mean >= path.estimate.unwrap().mean);
    }

    #[test]
    fn exact_distribution_sums_to_one() {
        let d = exact_route_length_distribution(5, 0.3).unwrap();
        let total: f64 = d.by_length.iter().sum::<f64>() + d.unreachable;
        assert!((total - 1.0).abs() < 1e-12);
        assert!((d.by_length[1] - 0.3).abs() < 1e-12);
        assert!(exact_route_length_distribution(8, 0.3).is_err());
    }

    #[test]
    fn mc_distribution_tracks_exact() {
        let exact = exact_route_length_distribution(6, 0.25).unwrap();
        let mc = mc_route_length_distribution(6, 0.25, 20_000, 8).unwrap();
        for h in 1..6 {
            assert!(
                (exact.by_length[h] - mc.by_length[h]).abs() < 0.015,
                "h={h}"
            );
        }
        assert!((exact.unreachable - mc.unreachable).abs() < 0.015);
    }
}
