use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytic::{CalibrationBranch, DistanceMode, LinkProbMode};
use crate::entropy::InterestSet;
use crate::mobility::{BoundaryPolicy, FieldGeometry, VelocityField};
use crate::montecarlo::{Persistence, DEFAULT_EPOCH_CAP};
use crate::topology::{Codec, CompressionMode};

use super::Scenario;

/// Everything a run needs. Only `scenario` is required; every other key
/// falls back to the documented default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub mobility: MobilitySection,
    #[serde(default)]
    pub compression: CompressionSection,
    #[serde(default)]
    pub graph: GraphSection,
    #[serde(default)]
    pub cluster: ClusterSection,
    #[serde(default)]
    pub flow: FlowSection,
    #[serde(default)]
    pub route: RouteSection,
    #[serde(default)]
    pub flash: FlashSection,
    #[serde(default)]
    pub monte_carlo: MonteCarloSection,
}

fn default_repetitions() -> usize {
    20
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MobilitySection {
    pub side_length: f64,
    pub speed: f64,
    pub dt_step: f64,
    pub n_steps: usize,
    pub nodes: usize,
    /// `[random, guided]` node counts, one sweep point each.
    pub ratios: Vec<[usize; 2]>,
    /// Defaults to a rotation about the field center.
    pub field: Option<VelocityField>,
    pub boundary: BoundaryPolicy,
    pub interest: InterestSet,
    pub curl_spacing: f64,
    pub write_trajectories: bool,
}

impl Default for MobilitySection {
    fn default() -> Self {
        Self {
            side_length: 100.0,
            speed: 1.0,
            dt_step: 1.0,
            n_steps: 500,
            nodes: 8,
            ratios: (1..8).map(|r| [r, 8 - r]).collect(),
            field: None,
            boundary: BoundaryPolicy::Reflect,
            interest: InterestSet::AllOthers,
            curl_spacing: 5.0,
            write_trajectories: true,
        }
    }
}

impl MobilitySection {
    pub fn geometry(&self) -> crate::Result<FieldGeometry> {
        FieldGeometry::new(self.side_length, self.side_length)
    }

    pub fn resolved_field(&self) -> VelocityField {
        self.field.clone().unwrap_or(VelocityField::Rotation {
            center: crate::Vec2::new(self.side_length / 2.0, self.side_length / 2.0),
            angular_rate: 1.0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompressionSection {
    pub codecs: Vec<Codec>,
    pub mode: CompressionMode,
    /// Smallest fraction of the field area covered by one radio disk.
    pub coverage_min: f64,
    pub coverage_max: f64,
    pub radius_steps: usize,
}

impl Default for CompressionSection {
    fn default() -> Self {
        Self {
            codecs: Codec::ALL.to_vec(),
            mode: CompressionMode::WholeRun,
            coverage_min: 0.34,
            coverage_max: 0.75,
            radius_steps: 13,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Calibration {
    pub bound: u64,
    pub target: f64,
    pub branch: CalibrationBranch,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            bound: 15,
            target: 0.7,
            branch: CalibrationBranch::High,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphSection {
    pub nodes: u64,
    /// Radio range, meters.
    pub radius: f64,
    /// Field area, square meters.
    pub area: f64,
    /// Seconds between topology changes.
    pub epoch: f64,
    pub link_prob_mode: LinkProbMode,
    /// Overrides the geometry-derived link probability.
    pub link_probability: Option<f64>,
    /// Solve for the link probability instead; ignored when
    /// `link_probability` is set.
    pub calibration: Option<Calibration>,
}

impl Default for GraphSection {
    fn default() -> Self {
        Self {
            nodes: 100,
            radius: 2.0,
            area: 5000.0 * 5000.0,
            epoch: 10.0,
            link_prob_mode: LinkProbMode::Pairwise,
            link_probability: None,
            calibration: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterSection {
    /// Link capacity `W`, bits per second.
    pub link_capacity: f64,
    /// Guard factor `Δ`.
    pub guard: f64,
    pub distance_mode: DistanceMode,
}

impl Default for ClusterSection {
    fn default() -> Self {
        Self {
            link_capacity: 1e6,
            guard: 1.0,
            distance_mode: DistanceMode::Literal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowSection {
    pub flow_bits: f64,
    pub per_hop_rate: f64,
    pub hops: u64,
    pub hop_reduction: u64,
    /// Per-hop delay `10^e` seconds swept by the differential-gain scenario.
    pub delay_exponents: Vec<f64>,
}

impl Default for FlowSection {
    fn default() -> Self {
        Self {
            flow_bits: 1e8,
            per_hop_rate: 1e6,
            hops: 50,
            hop_reduction: 10,
            delay_exponents: vec![0.0, 1.0, 2.0, 3.0, 4.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RouteSection {
    pub k_max: u64,
    pub bound: u64,
    pub target: f64,
    /// Area readings for the calibration grid, square meters.
    pub areas: Vec<f64>,
    pub radii: Vec<f64>,
}

impl Default for RouteSection {
    fn default() -> Self {
        Self {
            k_max: 30,
            bound: 15,
            target: 0.7,
            areas: vec![5000.0, 5000.0 * 5000.0, 5.0e6 * 5.0e6],
            radii: vec![
                1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 2000.0,
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlashSection {
    pub hops: Vec<u64>,
    pub epochs: Vec<f64>,
    pub monte_carlo: bool,
    pub mc_nodes: usize,
    pub mc_link_probability: f64,
    pub mc_hops: Vec<usize>,
    pub persistence: Persistence,
}

impl Default for FlashSection {
    fn default() -> Self {
        Self {
            hops: (1..=12).collect(),
            epochs: (-6..=1).map(|e| 10f64.powi(e)).collect(),
            monte_carlo: false,
            mc_nodes: 20,
            mc_link_probability: 0.1,
            mc_hops: vec![1, 2, 3],
            persistence: Persistence::PathWise,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonteCarloSection {
    pub trials: u64,
    pub epoch_cap: u64,
    pub wait_nodes: usize,
    pub wait_link_probability: f64,
    pub wait_bound: usize,
    /// Graph sizes for the formula-versus-graph comparison; up to 7 nodes
    /// are enumerated exactly.
    pub gap_nodes: Vec<usize>,
    pub gap_link_probability: f64,
}

impl Default for MonteCarloSection {
    fn default() -> Self {
        Self {
            trials: 10_000,
            epoch_cap: DEFAULT_EPOCH_CAP,
            wait_nodes: 20,
            wait_link_probability: 0.1,
            wait_bound: 3,
            gap_nodes: vec![6, 10, 20, 30],
            gap_link_probability: 0.1,
        }
    }
}

/// One problem found in a config file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
    pub line: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub source: String,
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            match d.line {
                Some(line) => write!(f, "{}:{}: ", self.source, line)?,
                None => write!(f, "{}: ", self.source)?,
            }
            if d.path.is_empty() {
                write!(f, "{}", d.message)?;
            } else {
                write!(f, "{}: {}", d.path, d.message)?;
            }
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

impl ScenarioConfig {
    /// Defaults for `scenario`, as if the file named nothing else.
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            seed: 0,
            repetitions: default_repetitions(),
            output_dir: default_output_dir(),
            mobility: MobilitySection::default(),
            compression: CompressionSection::default(),
            graph: GraphSection::default(),
            cluster: ClusterSection::default(),
            flow: FlowSection::default(),
            route: RouteSection::default(),
            flash: FlashSection::default(),
            monte_carlo: MonteCarloSection::default(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let source = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            source: source.clone(),
            diagnostics: vec![Diagnostic {
                path: String::new(),
                message: format!("cannot read config: {e}"),
                line: None,
            }],
        })?;
        Self::parse(&text, &source)
    }

    /// Parses, fills in defaults and checks every range and cross-field
    /// constraint.
    pub fn parse(text: &str, source: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let mut config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let message = strip_position(&inner.to_string());
            ConfigError {
                source: source.to_string(),
                diagnostics: vec![Diagnostic {
                    path: if path == "." { String::new() } else { path },
                    message,
                    line: Some(inner.line()),
                }],
            }
        })?;
        config.materialize();
        let problems = config.problems();
        if problems.is_empty() {
            Ok(config)
        } else {
            Err(ConfigError {
                source: source.to_string(),
                diagnostics: problems
                    .into_iter()
                    .map(|(path, message)| Diagnostic {
                        line: locate(text, &path),
                        path,
                        message,
                    })
                    .collect(),
            })
        }
    }

    fn materialize(&mut self) {
        if self.mobility.field.is_none() {
            self.mobility.field = Some(self.mobility.resolved_field());
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// `(key path, complaint)` for every violated constraint.
    pub fn problems(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut check = |ok: bool, path: &str, msg: String| {
            if !ok {
                out.push((path.to_string(), msg));
            }
        };
        let positive = |x: f64| x > 0.0 && x.is_finite();

        check(
            self.repetitions >= 1,
            "repetitions",
            format!("must be >= 1 (got {})", self.repetitions),
        );

        let m = &self.mobility;
        check(
            positive(m.side_length),
            "mobility.side_length",
            format!("must be finite and > 0 (got {})", m.side_length),
        );
        check(
            m.speed >= 0.0 && m.speed.is_finite(),
            "mobility.speed",
            format!("must be finite and >= 0 (got {})", m.speed),
        );
        check(
            positive(m.dt_step),
            "mobility.dt_step",
            format!("must be finite and > 0 (got {})", m.dt_step),
        );
        check(
            m.n_steps >= 2,
            "mobility.n_steps",
            format!("must be >= 2 (got {})", m.n_steps),
        );
        check(
            m.nodes >= 2,
            "mobility.nodes",
            format!("must be >= 2 (got {})", m.nodes),
        );
        check(
            !m.ratios.is_empty(),
            "mobility.ratios",
            "must list at least one [random, guided] pair".into(),
        );
        for (i, [r, g]) in m.ratios.iter().enumerate() {
            check(
                r + g == m.nodes,
                &format!("mobility.ratios[{i}]"),
                format!(
                    "random + guided must equal mobility.nodes = {} (got {r} + {g})",
                    m.nodes
                ),
            );
        }
        check(
            m.curl_spacing > 0.0 && m.curl_spacing < m.side_length / 4.0,
            "mobility.curl_spacing",
            format!(
                "must lie in (0, side_length/4 = {}) (got {})",
                m.side_length / 4.0,
                m.curl_spacing
            ),
        );
        if let Some(Err(e)) = m.field.as_ref().map(VelocityField::validate) {
            check(false, "mobility.field", e.to_string());
        }

        let c = &self.compression;
        check(
            !c.codecs.is_empty(),
            "compression.codecs",
            "must name at least one codec".into(),
        );
        check(
            c.coverage_min > 0.0 && c.coverage_min <= c.coverage_max,
            "compression.coverage_min",
            format!(
                "must lie in (0, coverage_max = {}] (got {})",
                c.coverage_max, c.coverage_min
            ),
        );
        check(
            c.coverage_max <= 1.0,
            "compression.coverage_max",
            format!("must lie in (0, 1] (got {})", c.coverage_max),
        );
        check(
            c.radius_steps >= 1,
            "compression.radius_steps",
            format!("must be >= 1 (got {})", c.radius_steps),
        );

        let g = &self.graph;
        check(
            g.nodes >= 2,
            "graph.nodes",
            format!("must be >= 2 (got {})", g.nodes),
        );
        check(
            g.radius >= 0.0 && g.radius.is_finite(),
            "graph.radius",
            format!("must be finite and >= 0 (got {})", g.radius),
        );
        check(
            positive(g.area),
            "graph.area",
            format!("must be finite and > 0 (got {})", g.area),
        );
        check(
            positive(g.epoch),
            "graph.epoch",
            format!("must be finite and > 0 (got {})", g.epoch),
        );
        if let Some(p) = g.link_probability {
            check(
                (0.0..=1.0).contains(&p),
                "graph.link_probability",
                format!("must lie in [0, 1] (got {p})"),
            );
        }
        if let Some(cal) = g.calibration {
            check(
                (2..=g.nodes + 1).contains(&cal.bound),
                "graph.calibration.bound",
                format!(
                    "must lie in [2, graph.nodes + 1 = {}] (got {})",
                    g.nodes + 1,
                    cal.bound
                ),
            );
            check(
                cal.target > 0.0 && cal.target < 1.0,
                "graph.calibration.target",
                format!("must lie in (0, 1) (got {})", cal.target),
            );
        }

        let cl = &self.cluster;
        check(
            positive(cl.link_capacity),
            "cluster.link_capacity",
            format!("must be finite and > 0 (got {})", cl.link_capacity),
        );
        check(
            positive(cl.guard),
            "cluster.guard",
            format!("must be finite and > 0 (got {})", cl.guard),
        );

        let f = &self.flow;
        check(
            positive(f.flow_bits),
            "flow.flow_bits",
            format!("must be finite and > 0 (got {})", f.flow_bits),
        );
        check(
            positive(f.per_hop_rate),
            "flow.per_hop_rate",
            format!("must be finite and > 0 (got {})", f.per_hop_rate),
        );
        check(
            (2..=g.nodes + 1).contains(&f.hops),
            "flow.hops",
            format!(
                "must lie in [2, graph.nodes + 1 = {}] (got {})",
                g.nodes + 1,
                f.hops
            ),
        );
        check(
            f.hop_reduction >= 1 && f.hop_reduction < f.hops,
            "flow.hop_reduction",
            format!(
                "must satisfy 1 <= hop_reduction < flow.hops = {} (got {})",
                f.hops, f.hop_reduction
            ),
        );
        check(
            !f.delay_exponents.is_empty(),
            "flow.delay_exponents",
            "must list at least one exponent".into(),
        );
        for (i, e) in f.delay_exponents.iter().enumerate() {
            check(
                e.is_finite() && e.abs() <= 30.0,
                &format!("flow.delay_exponents[{i}]"),
                format!("must lie in [-30, 30] (got {e})"),
            );
        }

        let r = &self.route;
        check(
            (1..=g.nodes + 1).contains(&r.k_max),
            "route.k_max",
            format!(
                "must lie in [1, graph.nodes + 1 = {}] (got {})",
                g.nodes + 1,
                r.k_max
            ),
        );
        check(
            (1..=g.nodes + 1).contains(&r.bound),
            "route.bound",
            format!(
                "must lie in [1, graph.nodes + 1 = {}] (got {})",
                g.nodes + 1,
                r.bound
            ),
        );
        check(
            r.target > 0.0 && r.target < 1.0,
            "route.target",
            format!("must lie in (0, 1) (got {})", r.target),
        );
        for (i, a) in r.areas.iter().enumerate() {
            check(
                positive(*a),
                &format!("route.areas[{i}]"),
                format!("must be finite and > 0 (got {a})"),
            );
        }
        for (i, x) in r.radii.iter().enumerate() {
            check(
                x.is_finite() && *x >= 0.0,
                &format!("route.radii[{i}]"),
                format!("must be finite and >= 0 (got {x})"),
            );
        }

        let fl = &self.flash;
        check(
            !fl.hops.is_empty(),
            "flash.hops",
            "must list at least one route length".into(),
        );
        for (i, h) in fl.hops.iter().enumerate() {
            check(
                (1..=g.nodes).contains(h),
                &format!("flash.hops[{i}]"),
                format!("must lie in [1, graph.nodes = {}] (got {h})", g.nodes),
            );
        }
        check(
            !fl.epochs.is_empty(),
            "flash.epochs",
            "must list at least one epoch".into(),
        );
        for (i, w) in fl.epochs.iter().enumerate() {
            check(
                positive(*w),
                &format!("flash.epochs[{i}]"),
                format!("must be finite and > 0 (got {w})"),
            );
        }
        check(
            fl.mc_nodes >= 3,
            "flash.mc_nodes",
            format!("must be >= 3 (got {})", fl.mc_nodes),
        );
        check(
            (0.0..=1.0).contains(&fl.mc_link_probability),
            "flash.mc_link_probability",
            format!("must lie in [0, 1] (got {})", fl.mc_link_probability),
        );
        for (i, h) in fl.mc_hops.iter().enumerate() {
            check(
                *h >= 1 && *h < fl.mc_nodes,
                &format!("flash.mc_hops[{i}]"),
                format!(
                    "must lie in [1, flash.mc_nodes - 1 = {}] (got {h})",
                    fl.mc_nodes.saturating_sub(1)
                ),
            );
        }

        let mc = &self.monte_carlo;
        check(
            mc.trials >= 100,
            "monte_carlo.trials",
            format!("must be >= 100 (got {})", mc.trials),
        );
        check(
            mc.epoch_cap >= 1,
            "monte_carlo.epoch_cap",
            format!("must be >= 1 (got {})", mc.epoch_cap),
        );
        check(
            mc.wait_nodes >= 2,
            "monte_carlo.wait_nodes",
            format!("must be >= 2 (got {})", mc.wait_nodes),
        );
        check(
            (0.0..=1.0).contains(&mc.wait_link_probability),
            "monte_carlo.wait_link_probability",
            format!("must lie in [0, 1] (got {})", mc.wait_link_probability),
        );
        check(
            mc.wait_bound >= 2 && mc.wait_bound <= mc.wait_nodes,
            "monte_carlo.wait_bound",
            format!(
                "must lie in [2, monte_carlo.wait_nodes = {}] (got {})",
                mc.wait_nodes, mc.wait_bound
            ),
        );
        for (i, n) in mc.gap_nodes.iter().enumerate() {
            check(
                (2..=30).contains(n),
                &format!("monte_carlo.gap_nodes[{i}]"),
                format!("must lie in [2, 30] (got {n})"),
            );
        }
        check(
            (0.0..=1.0).contains(&mc.gap_link_probability),
            "monte_carlo.gap_link_probability",
            format!("must lie in [0, 1] (got {})", mc.gap_link_probability),
        );
        out
    }
}

/// serde_json appends " at line L column C"; the line is reported separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// Line of the deepest key along `path` that appears in `text`, searching
/// each component after the previous one. Indices are dropped.
fn locate(text: &str, path: &str) -> Option<usize> {
    let mut from = 0;
    let mut found = None;
    for part in path.split('.') {
        let key = part.split('[').next().unwrap_or(part);
        let needle = format!("\"{key}\"");
        let Some(offset) = text[from..].find(&needle) else {
            break;
        };
        from += offset + needle.len();
        found = Some(from);
    }
    found.map(|pos| text[..pos].matches('\n').count() + 1)
}
