//! Closed-form route-update and predictive-gain models.
//!
//! Two parameter sets drive everything here. [`ClusterModel`] describes
//! `N` nodes over area `A` partitioned into `C` clusters with per-link
//! capacity `W` and guard distance `Δ`; it yields the best-case route
//! update time. [`GraphModel`] is the evolving random graph `G(n, p, w)`:
//! `n` nodes, i.i.d. link probability `p`, and a fresh topology every `w`
//! seconds. [`FlowModel`] adds an application flow on top of a route.
//!
//! Binomial coefficients are exact big integers; only their logarithm is
//! rounded to `f64`.

use std::f64::consts::{LN_2, PI};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Exact `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `log2(x)` for `x > 0`, exact to `f64` rounding.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 leading bits");
    (top as f64).log2() + shift as f64
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    log2_big(&binomial(n, k)) * LN_2
}

/// Per-hop distance used in the total update distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMode {
    /// `sqrt(A)/n` per node, summing to `sqrt(A)`.
    #[default]
    Literal,
    /// `sqrt(A/n)` per node, the usual nearest-neighbour scaling.
    NodeSpacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub nodes: u64,
    pub clusters: u64,
    /// Square meters.
    pub area: f64,
    /// Bits per second per connection.
    pub link_capacity: f64,
    /// Guard distance factor.
    pub guard: f64,
    #[serde(default)]
    pub distance_mode: DistanceMode,
}

impl ClusterModel {
    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(invalid("nodes", "must be >= 1"));
        }
        if !(1..=self.nodes).contains(&self.clusters) {
            return Err(invalid(
                "clusters",
                format!("must lie in [1, {}]", self.nodes),
            ));
        }
        for (name, v) in [
            ("area", self.area),
            ("link_capacity", self.link_capacity),
            ("guard", self.guard),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be finite and > 0"));
            }
        }
        Ok(())
    }
}

/// Bits needed to name the membership of one cluster,
/// `log2 C(N, ceil(N/C))`.
pub fn cluster_info_bits(model: &ClusterModel) -> Result<f64> {
    model.validate()?;
    let size = model.nodes.div_ceil(model.clusters);
    Ok(log2_big(&binomial(model.nodes, size)))
}

/// Best-case transport capacity in bit-meters per second,
/// `sqrt(8/π)·(W/Δ)·sqrt(n)`.
pub fn max_capacity(model: &ClusterModel) -> Result<f64> {
    model.validate()?;
    Ok((8.0 / PI).sqrt() * (model.link_capacity / model.guard) * (model.nodes as f64).sqrt())
}

/// Total distance update information must travel, summed over all nodes.
pub fn total_update_distance(model: &ClusterModel) -> Result<f64> {
    model.validate()?;
    let n = model.nodes as f64;
    let per_node = match model.distance_mode {
        DistanceMode::Literal => model.area.sqrt() / n,
        DistanceMode::NodeSpacing => (model.area / n).sqrt(),
    };
    Ok((0..model.nodes).map(|_| per_node).sum())
}

/// Lower bound on route update time, `C·I_c·d_sum / C_max` seconds.
pub fn route_update_time(model: &ClusterModel) -> Result<f64> {
    let info = cluster_info_bits(model)?;
    Ok(model.clusters as f64 * info * total_update_distance(model)? / max_capacity(model)?)
}

/// Update bound for a single route of `hops` links: every node is its own
/// cluster (`C = n`, `I_c = log2 n`) and the update travels `hops`
/// per-node distances.
pub fn route_update_time_for_length(model: &ClusterModel, hops: u64) -> Result<f64> {
    let n = model.nodes as f64;
    let per_hop = match model.distance_mode {
        DistanceMode::Literal => model.area.sqrt() / n,
        DistanceMode::NodeSpacing => (model.area / n).sqrt(),
    };
    Ok(n * n.log2() * hops as f64 * per_hop / max_capacity(model)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkProbMode {
    /// `πr²/A`: the chance a given peer falls inside the disk.
    #[default]
    Pairwise,
    /// `(n−1)πr²/A`: expected number of neighbours, clamped to 1.
    ExpectedDegree,
}

impl LinkProbMode {
    pub fn name(self) -> &'static str {
        match self {
            LinkProbMode::Pairwise => "pairwise",
            LinkProbMode::ExpectedDegree => "expected-degree",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkProbability {
    pub value: f64,
    /// Before clamping to `[0, 1]`.
    pub raw: f64,
    pub mode: LinkProbMode,
}

impl LinkProbability {
    pub fn clamped(&self) -> bool {
        self.value != self.raw
    }
}

pub fn link_probability(
    nodes: u64,
    radius: f64,
    area: f64,
    mode: LinkProbMode,
) -> Result<LinkProbability> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(invalid("radius", "must be finite and >= 0"));
    }
    if !(area > 0.0 && area.is_finite()) {
        return Err(invalid("area", "must be finite and > 0"));
    }
    let disk = PI * radius * radius / area;
    let raw = match mode {
        LinkProbMode::Pairwise => disk,
        LinkProbMode::ExpectedDegree => nodes.saturating_sub(1) as f64 * disk,
    };
    let value = raw.clamp(0.0, 1.0);
    if value != raw {
        log::warn!("{} link probability {raw} clamped to {value}", mode.name());
    }
    Ok(LinkProbability { value, raw, mode })
}

/// Parameters of `G(n, p, w)`. Geometry is kept when `p` was derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphModel {
    pub nodes: u64,
    pub link_probability: f64,
    /// Seconds between topology changes.
    pub epoch: f64,
    pub radius: Option<f64>,
    pub area: Option<f64>,
    pub link_prob_mode: Option<LinkProbMode>,
    /// Unclamped probability when derived from geometry.
    pub raw_link_probability: Option<f64>,
}

impl GraphModel {
    pub fn with_probability(nodes: u64, p: f64, epoch: f64) -> Result<Self> {
        let g = Self {
            nodes,
            link_probability: p,
            epoch,
            radius: None,
            area: None,
            link_prob_mode: None,
            raw_link_probability: None,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn from_geometry(
        nodes: u64,
        radius: f64,
        area: f64,
        epoch: f64,
        mode: LinkProbMode,
    ) -> Result<Self> {
        let lp = link_probability(nodes, radius, area, mode)?;
        let g = Self {
            nodes,
            link_probability: lp.value,
            epoch,
            radius: Some(radius),
            area: Some(area),
            link_prob_mode: Some(mode),
            raw_link_probability: Some(lp.raw),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.link_probability) {
            return Err(invalid("link_probability", "must lie in [0, 1]"));
        }
        if !(self.epoch > 0.0 && self.epoch.is_finite()) {
            return Err(invalid("epoch", "must be finite and > 0"));
        }
        Ok(())
    }
}

/// `C(n, n_l)·p^n_l·(1−p)^(n−n_l)`, evaluated in log space.
pub fn route_formation_probability(model: &GraphModel, hops: u64) -> Result<f64> {
    let n = model.nodes;
    if hops > n {
        return Err(invalid("hops", format!("must be <= n = {n}")));
    }
    Ok(binomial_pmf(n, hops, model.link_probability))
}

pub(crate) fn binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    // x·ln(0) terms vanish when x = 0
    let term = |count: u64, prob: f64, ln: f64| {
        if count == 0 {
            Some(0.0)
        } else if prob == 0.0 {
            None
        } else {
            Some(count as f64 * ln)
        }
    };
    let (Some(a), Some(b)) = (term(k, p, p.ln()), term(n - k, 1.0 - p, (-p).ln_1p())) else {
        return 0.0;
    };
    (ln_binomial(n, k) + a + b).exp()
}

/// Probability that a route of fewer than `bound` hops (at least one)
/// forms: `Σ_{n_l=1}^{bound−1} Pr(n_l)`. Accepts `1 ≤ bound ≤ n + 1`.
pub fn shorter_route_probability(model: &GraphModel, bound: u64) -> Result<f64> {
    if bound == 0 || bound > model.nodes + 1 {
        return Err(invalid(
            "bound",
            format!("must lie in [1, {}]", model.nodes + 1),
        ));
    }
    // folded from +0.0 so the empty sum at bound 1 is not -0.0
    let total = (1..bound).fold(0.0, |acc, l| {
        acc + binomial_pmf(model.nodes, l, model.link_probability)
    });
    Ok(total.clamp(0.0, 1.0))
}

/// Mean time spent in failed epochs before a success of per-epoch
/// probability `success`: `w·(1−P)/P`.
pub fn expected_wait(model: &GraphModel, success: f64) -> Result<f64> {
    if !(success > 0.0) {
        return Err(Error::ZeroProbability);
    }
    if success > 1.0 {
        return Err(invalid("success", "must be <= 1"));
    }
    Ok(model.epoch * (1.0 - success) / success)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowModel {
    /// Flow size in bits.
    pub flow_bits: f64,
    /// Effective rate left after each hop, bits per second.
    pub per_hop_rate: f64,
    /// Current hop count `h`.
    pub hops: u64,
    /// Hop reduction sought, `h_diff`.
    pub hop_reduction: u64,
}

impl FlowModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.flow_bits > 0.0 && self.flow_bits.is_finite()) {
            return Err(invalid("flow_bits", "must be finite and > 0"));
        }
        if !(self.per_hop_rate > 0.0 && self.per_hop_rate.is_finite()) {
            return Err(invalid("per_hop_rate", "must be finite and > 0"));
        }
        if self.hop_reduction < 1 || self.hop_reduction >= self.hops {
            return Err(invalid(
                "hop_reduction",
                format!("must satisfy 1 <= h_diff < h = {}", self.hops),
            ));
        }
        Ok(())
    }
}

/// Completion delay of a flow over `hops` links, `n_l·f_l/b_r` seconds.
pub fn per_hop_flow_delay(flow: &FlowModel, hops: u64) -> f64 {
    hops as f64 * flow.flow_bits / flow.per_hop_rate
}

/// Gain from waiting `dt` for a route of cost `c_future` instead of using
/// the current route of cost `c_current`. Exceeds one exactly when
/// `dt + c_future < c_current`.
pub fn predictive_gain(c_current: f64, dt: f64, c_future: f64) -> Result<f64> {
    if !(dt >= 0.0) {
        return Err(invalid("dt", "must be >= 0"));
    }
    if !(c_current > 0.0) || c_future < 0.0 {
        return Err(invalid("cost", "costs must be positive"));
    }
    let denom = dt + c_future;
    if denom == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(c_current / denom)
}

/// Gain from waiting for a route `h_diff` hops shorter than the current
/// `h`-hop route. Costs are flow completion times; the wait is the
/// geometric expectation with success probability
/// `shorter_route_probability(h − h_diff)`. A target that can never form
/// has unbounded wait and therefore zero gain.
pub fn differential_gain(model: &GraphModel, flow: &FlowModel) -> Result<f64> {
    flow.validate()?;
    let target = flow.hops - flow.hop_reduction;
    let current = per_hop_flow_delay(flow, flow.hops);
    let success = shorter_route_probability(model, target)?;
    let wait = match expected_wait(model, success) {
        Ok(w) => w,
        Err(Error::ZeroProbability) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    Ok(current / (per_hop_flow_delay(flow, target) + wait))
}

/// `G_dp` for every `h_diff` in `1..h`.
pub fn differential_gain_curve(model: &GraphModel, flow: &FlowModel) -> Result<Vec<(u64, f64)>> {
    (1..flow.hops)
        .map(|hop_reduction| {
            let f = FlowModel {
                hop_reduction,
                ..*flow
            };
            Ok((hop_reduction, differential_gain(model, &f)?))
        })
        .collect()
}

/// Expected time for a continuous `hops`-link route to form,
/// `w·(1−p_nl)/p_nl`.
pub fn flash_route_formation_wait(model: &GraphModel, hops: u64) -> Result<f64> {
    let p = route_formation_probability(model, hops)?;
    expected_wait(model, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlashRouteCondition {
    /// `p_nl·n_l·(1−p)·w` seconds.
    pub lifetime_proxy: f64,
    /// Best-case update time over the route length, seconds.
    pub update_bound: f64,
    pub is_flash: bool,
    /// `p_nl·n_l·(1−p)` clamped to `[0, 1]` when flash, else 0.
    pub probability: f64,
    pub raw_probability: f64,
}

pub fn flash_route_condition(
    cluster: &ClusterModel,
    graph: &GraphModel,
    hops: u64,
) -> Result<FlashRouteCondition> {
    cluster.validate()?;
    graph.validate()?;
    let formation = route_formation_probability(graph, hops)?;
    let vanish = hops as f64 * (1.0 - graph.link_probability);
    let raw_probability = formation * vanish;
    let lifetime_proxy = raw_probability * graph.epoch;
    let update_bound = route_update_time_for_length(cluster, hops)?;
    // a route that never forms or never vanishes cannot be a flash route
    let is_flash = raw_probability > 0.0 && lifetime_proxy < update_bound;
    let probability = if is_flash {
        let p = raw_probability.clamp(0.0, 1.0);
        if p != raw_probability {
            log::warn!("flash probability {raw_probability} clamped to {p}");
        }
        p
    } else {
        0.0
    };
    Ok(FlashRouteCondition {
        lifetime_proxy,
        update_bound,
        is_flash,
        probability,
        raw_probability,
    })
}

/// Which of the (up to two) link probabilities solving
/// `shorter_route_probability(bound) = target` to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CalibrationBranch {
    /// Sparse graphs: the target is reached as routes start to appear.
    Low,
    /// Dense graphs: the target is reached as long routes become unlikely.
    High,
}

/// Link probability at which `shorter_route_probability(bound)` equals
/// `target`, found by bisection on the requested side of the maximum.
pub fn solve_link_probability(
    nodes: u64,
    bound: u64,
    target: f64,
    branch: CalibrationBranch,
) -> Result<Option<f64>> {
    let eval = |p: f64| -> Result<f64> {
        shorter_route_probability(&GraphModel::with_probability(nodes, p, 1.0)?, bound)
    };
    // the cumulative is unimodal in p; locate its peak by ternary search
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if eval(a)? < eval(b)? {
            lo = a;
        } else {
            hi = b;
        }
    }
    let peak = 0.5 * (lo + hi);
    if eval(peak)? < target {
        return Ok(None);
    }
    let (mut lo, mut hi, rising) = match branch {
        CalibrationBranch::Low => (0.0, peak, true),
        CalibrationBranch::High => (peak, 1.0, false),
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (eval(mid)? < target) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Radius giving link probability `p` over `area` under `mode`.
pub fn radius_for_probability(nodes: u64, p: f64, area: f64, mode: LinkProbMode) -> f64 {
    let disk = match mode {
        LinkProbMode::Pairwise => p,
        LinkProbMode::ExpectedDegree => p / nodes.saturating_sub(1).max(1) as f64,
    };
    (disk * area / PI).sqrt()
}
