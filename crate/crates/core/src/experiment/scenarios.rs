use rayon::prelude::*;

use crate::analytic::{
    cluster_info_bits, differential_gain_curve, expected_wait, flash_route_condition,
    link_probability, max_capacity, per_hop_flow_delay, radius_for_probability,
    route_formation_probability, route_update_time, shorter_route_probability,
    solve_link_probability, total_update_distance, CalibrationBranch, ClusterModel, DistanceMode,
    FlowModel, GraphModel, LinkProbMode,
};
use crate::entropy::{curl_map, population_entropy};
use crate::error::{invalid, Error, Result};
use crate::mobility::{simulate, topology_run, MobilityConfig, NodeKind, Trajectory};
use crate::montecarlo::{
    exact_route_length_distribution, mc_flash_route_stats, mc_route_length_distribution,
    mc_wait_for_shorter_route, SequenceParams,
};
use crate::report::GainReport;
use crate::topology::{coverage_radii, score_run};

use super::config::ScenarioConfig;
use super::output::OutputWriter;

fn ratio_label([r, g]: [usize; 2]) -> String {
    format!("{r}:{g}")
}

/// Link probability from the config: explicit value, then calibration
/// target, then radio geometry.
pub fn graph_model(cfg: &ScenarioConfig) -> Result<GraphModel> {
    let g = &cfg.graph;
    if let Some(p) = g.link_probability {
        return GraphModel::with_probability(g.nodes, p, g.epoch);
    }
    if let Some(cal) = g.calibration {
        let p = solve_link_probability(g.nodes, cal.bound, cal.target, cal.branch)?.ok_or_else(
            || {
                invalid(
                    "graph.calibration.target",
                    format!(
                        "no link probability reaches {} below {} hops",
                        cal.target, cal.bound
                    ),
                )
            },
        )?;
        return GraphModel::with_probability(g.nodes, p, g.epoch);
    }
    GraphModel::from_geometry(g.nodes, g.radius, g.area, g.epoch, g.link_prob_mode)
}

pub fn cluster_model(
    cfg: &ScenarioConfig,
    nodes: u64,
    clusters: u64,
    mode: DistanceMode,
) -> ClusterModel {
    ClusterModel {
        nodes,
        clusters,
        area: cfg.graph.area,
        link_capacity: cfg.cluster.link_capacity,
        guard: cfg.cluster.guard,
        distance_mode: mode,
    }
}

fn graph_report(name: &str, graph: &GraphModel) -> Result<GainReport> {
    let mut report = GainReport::new(name);
    report.link_prob_mode = graph.link_prob_mode.map(|m| m.name().to_string());
    report.push_raw(
        "link_probability",
        graph.link_probability,
        graph.raw_link_probability,
        "1",
    )?;
    Ok(report)
}

fn mobility_config(cfg: &ScenarioConfig, ratio: [usize; 2], rep: usize) -> MobilityConfig {
    let m = &cfg.mobility;
    MobilityConfig {
        n_random: ratio[0],
        n_guided: ratio[1],
        speed: m.speed,
        dt_step: m.dt_step,
        n_steps: m.n_steps,
        seed: cfg.seed.wrapping_add(rep as u64),
        field: m.resolved_field(),
        boundary: m.boundary,
    }
}

/// Every `(ratio index, repetition)` pair, ratio-major.
fn sweep_points(cfg: &ScenarioConfig) -> Vec<(usize, usize)> {
    (0..cfg.mobility.ratios.len())
        .flat_map(|i| (0..cfg.repetitions).map(move |rep| (i, rep)))
        .collect()
}

pub fn entropy_sweep(cfg: &ScenarioConfig, out: &mut OutputWriter) -> Result<Vec<GainReport>> {
    let m = &cfg.mobility;
    let geometry = m.geometry()?;
    let runs = sweep_points(cfg)
        .into_par_iter()
        .map(|(i, rep)| -> Result<_> {
            let traj = simulate(&mobility_config(cfg, m.ratios[i], rep), &geometry)?;
            let entropy = population_entropy(&traj, m.interest, None)?;
            let keep = (rep == 0 && m.write_trajectories).then_some(traj.clone());
            Ok((i, rep, entropy, traj.kinds, keep))
        })
        .collect::<Result<Vec<_>>>()?;

    out.csv(
        "entropy_sweep.csv",
        "ratio,rep,mean_entropy",
        runs.iter()
            .map(|(i, rep, e, _, _)| format!("{},{rep},{}", ratio_label(m.ratios[*i]), e.mean)),
    )?;
    out.csv(
        "entropy_nodes.csv",
        "ratio,rep,node,kind,H_m",
        runs.iter().flat_map(|(i, rep, e, kinds, _)| {
            e.per_node
                .iter()
                .zip(kinds)
                .enumerate()
                .map(move |(node, (h, kind))| {
                    let kind = match kind {
                        NodeKind::Random => "random",
                        NodeKind::Guided => "guided",
                    };
                    format!("{},{rep},{node},{kind},{h}", ratio_label(m.ratios[*i]))
                })
        }),
    )?;

    let mut report = GainReport::new("entropy-sweep");
    let mut summary = Vec::new();
    for (i, ratio) in m.ratios.iter().enumerate() {
        let means: Vec<f64> = runs.iter().filter(|r| r.0 == i).map(|r| r.2.mean).collect();
        let avg = means.iter().sum::<f64>() / means.len() as f64;
        let fraction = ratio[0] as f64 / m.nodes as f64;
        summary.push(format!("{},{fraction},{avg}", ratio_label(*ratio)));
        report.push(format!("mean_entropy[{}]", ratio_label(*ratio)), avg, "1")?;
    }
    out.csv(
        "entropy_summary.csv",
        "ratio,random_fraction,mean_entropy",
        summary,
    )?;

    let curl = curl_map(&m.resolved_field(), &geometry, m.curl_spacing)?;
    out.csv_with("curl.csv", |w| curl.write_csv(w))?;
    for (i, _, _, _, traj) in &runs {
        if let Some(traj) = traj {
            write_trajectory(out, m.ratios[*i], traj)?;
        }
    }
    Ok(vec![report])
}

fn write_trajectory(out: &mut OutputWriter, ratio: [usize; 2], traj: &Trajectory) -> Result<()> {
    out.csv_with(&format!("trajectory_{}-{}.csv", ratio[0], ratio[1]), |w| {
        traj.write_csv(w)
    })
}

pub fn compression_surface(
    cfg: &ScenarioConfig,
    out: &mut OutputWriter,
) -> Result<Vec<GainReport>> {
    let m = &cfg.mobility;
    let c = &cfg.compression;
    let geometry = m.geometry()?;
    let radii = coverage_radii(
        geometry.area(),
        c.coverage_min,
        c.coverage_max,
        c.radius_steps,
    );
    // scores[codec][radius] per run
    let runs = sweep_points(cfg)
        .into_par_iter()
        .map(|(i, rep)| -> Result<_> {
            let traj = simulate(&mobility_config(cfg, m.ratios[i], rep), &geometry)?;
            let entropy = population_entropy(&traj, m.interest, None)?.mean;
            let mut scores = vec![vec![0.0; radii.len()]; c.codecs.len()];
            for (ri, radius) in radii.iter().enumerate() {
                let snaps = topology_run(&traj, *radius);
                for (ci, codec) in c.codecs.iter().enumerate() {
                    scores[ci][ri] = score_run(&snaps, *codec, c.mode)?.inverse_ratio;
                }
            }
            Ok((i, entropy, scores))
        })
        .collect::<Result<Vec<_>>>()?;

    let reps = cfg.repetitions as f64;
    let n_ratios = m.ratios.len();
    let mut entropy = vec![0.0; n_ratios];
    let mut mean = vec![vec![vec![0.0; radii.len()]; n_ratios]; c.codecs.len()];
    for (i, h, scores) in &runs {
        entropy[*i] += h / reps;
        for (ci, row) in scores.iter().enumerate() {
            for (ri, s) in row.iter().enumerate() {
                mean[ci][*i][ri] += s / reps;
            }
        }
    }

    out.csv(
        "compression_radii.csv",
        "radius_index,coverage,radius",
        radii.iter().enumerate().map(|(ri, r)| {
            let coverage = std::f64::consts::PI * r * r / geometry.area();
            format!("{ri},{coverage},{r}")
        }),
    )?;
    out.csv(
        "compression_ratios.csv",
        "entropy_ratio_index,ratio,mean_entropy",
        m.ratios
            .iter()
            .enumerate()
            .map(|(i, ratio)| format!("{i},{},{}", ratio_label(*ratio), entropy[i])),
    )?;
    let mut report = GainReport::new("compression-surface");
    for (ci, codec) in c.codecs.iter().enumerate() {
        let rows = (0..radii.len())
            .flat_map(|ri| (0..n_ratios).map(move |i| (ri, i)))
            .map(|(ri, i)| format!("{ri},{i},{}", mean[ci][i][ri]));
        out.csv(
            &format!("compression_{}.csv", codec.name()),
            "radius_index,entropy_ratio_index,inverse_ratio",
            rows,
        )?;
        for (i, ratio) in m.ratios.iter().enumerate() {
            let avg = mean[ci][i].iter().sum::<f64>() / radii.len() as f64;
            report.push(
                format!("inverse_ratio[{},{}]", codec.name(), ratio_label(*ratio)),
                avg,
                "1",
            )?;
        }
    }
    Ok(vec![report])
}

pub fn route_probability(cfg: &ScenarioConfig, out: &mut OutputWriter) -> Result<Vec<GainReport>> {
    let graph = graph_model(cfg)?;
    let r = &cfg.route;
    let mut report = graph_report("route-probability", &graph)?;

    let probs = (1..=r.k_max)
        .map(|k| Ok((k, shorter_route_probability(&graph, k)?)))
        .collect::<Result<Vec<_>>>()?;
    out.csv(
        "route_probability.csv",
        "k,P_analytic",
        probs.iter().map(|(k, p)| format!("{k},{p}")),
    )?;
    let pmf = (0..=graph.nodes)
        .map(|l| Ok((l, route_formation_probability(&graph, l)?)))
        .collect::<Result<Vec<_>>>()?;
    out.csv(
        "route_pmf.csv",
        "n_l,formation_probability",
        pmf.iter().map(|(l, p)| format!("{l},{p}")),
    )?;
    report.push(
        format!("P_shorter[{}]", r.bound),
        shorter_route_probability(&graph, r.bound)?,
        "1",
    )?;

    // waiting for a shorter route, simulated
    let mc = &cfg.monte_carlo;
    let params = SequenceParams {
        epoch_cap: mc.epoch_cap,
        ..SequenceParams::new(
            mc.wait_nodes,
            mc.wait_link_probability,
            graph.epoch,
            cfg.seed,
        )
    };
    let wait = mc_wait_for_shorter_route(&params, mc.wait_bound, mc.trials)?;
    out.csv(
        "wait_trials.csv",
        "trial,elapsed_time,success",
        wait.records
            .iter()
            .map(|t| format!("{},{},{}", t.trial, t.elapsed_time, t.success)),
    )?;
    out.csv(
        "wait_cdf.csv",
        "elapsed_time,cdf",
        wait.empirical_cdf().iter().map(|(t, f)| format!("{t},{f}")),
    )?;
    let wait_graph =
        GraphModel::with_probability(mc.wait_nodes as u64, mc.wait_link_probability, graph.epoch)?;
    if let Some(est) = wait.estimate {
        report.push("wait_mean_mc", est.mean, "s")?;
        report.push("wait_stderr_mc", est.stderr, "s")?;
    }
    report.push("wait_capped_trials", wait.capped as f64, "trials")?;
    let rate = wait.empirical_success_rate(graph.epoch);
    report.push("wait_success_rate_mc", rate, "1")?;
    if rate > 0.0 {
        report.push(
            "wait_expected_from_mc_rate",
            expected_wait(&wait_graph, rate)?,
            "s",
        )?;
    }
    let formula = shorter_route_probability(&wait_graph, mc.wait_bound as u64)?;
    report.push("wait_success_rate_formula", formula, "1")?;
    if formula > 0.0 {
        report.push(
            "wait_expected_from_formula",
            expected_wait(&wait_graph, formula)?,
            "s",
        )?;
    }

    route_gap(cfg, out, &mut report)?;
    calibration(cfg, out, &mut report)?;
    Ok(vec![report])
}

/// Formula versus the hop distance actually realized in random graphs.
fn route_gap(cfg: &ScenarioConfig, out: &mut OutputWriter, report: &mut GainReport) -> Result<()> {
    let mc = &cfg.monte_carlo;
    let p = mc.gap_link_probability;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for &n in &mc.gap_nodes {
        let (truth, method) = if n <= 7 {
            (exact_route_length_distribution(n, p)?, "exhaustive")
        } else {
            (
                mc_route_length_distribution(n, p, mc.trials, cfg.seed)?,
                "monte-carlo",
            )
        };
        let model = GraphModel::with_probability(n as u64, p, 1.0)?;
        for k in 2..=n {
            let empirical = truth.below(k);
            let analytic = shorter_route_probability(&model, k as u64)?;
            let gap = analytic - empirical;
            worst = worst.max(gap.abs());
            rows.push(format!("{n},{k},{empirical},{analytic},{gap},{method}"));
        }
    }
    out.csv(
        "route_gap.csv",
        "nodes,k,P_empirical,P_analytic,gap,method",
        rows,
    )?;
    report.push("route_gap_max_abs", worst, "1")
}

/// Where the configured target probability is reached across readings of
/// the area and radius units.
fn calibration(
    cfg: &ScenarioConfig,
    out: &mut OutputWriter,
    report: &mut GainReport,
) -> Result<()> {
    let r = &cfg.route;
    let n = cfg.graph.nodes;
    let mut rows = Vec::new();
    for &area in &r.areas {
        for &radius in &r.radii {
            for mode in [LinkProbMode::Pairwise, LinkProbMode::ExpectedDegree] {
                let lp = link_probability(n, radius, area, mode)?;
                let g = GraphModel::with_probability(n, lp.value, cfg.graph.epoch)?;
                let p_bound = shorter_route_probability(&g, r.bound)?;
                rows.push(format!(
                    "{area},{radius},{},{},{},{p_bound},{}",
                    mode.name(),
                    lp.value,
                    lp.raw,
                    p_bound >= r.target
                ));
            }
        }
    }
    out.csv(
        "calibration.csv",
        "area,radius,link_prob_mode,link_probability,raw_link_probability,P_bound,reaches_target",
        rows,
    )?;

    let mut rows = Vec::new();
    for (branch, name) in [
        (CalibrationBranch::Low, "low"),
        (CalibrationBranch::High, "high"),
    ] {
        let Some(p) = solve_link_probability(n, r.bound, r.target, branch)? else {
            continue;
        };
        report.push(format!("calibrated_link_probability[{name}]"), p, "1")?;
        for &area in &r.areas {
            rows.push(format!(
                "{name},{p},{area},{},{}",
                radius_for_probability(n, p, area, LinkProbMode::Pairwise),
                radius_for_probability(n, p, area, LinkProbMode::ExpectedDegree)
            ));
        }
    }
    out.csv(
        "calibration_solutions.csv",
        "branch,link_probability,area,radius_pairwise,radius_expected_degree",
        rows,
    )
}

pub fn differential_gain(cfg: &ScenarioConfig, out: &mut OutputWriter) -> Result<Vec<GainReport>> {
    let graph = graph_model(cfg)?;
    let f = &cfg.flow;
    let flow = FlowModel {
        flow_bits: f.flow_bits,
        per_hop_rate: f.per_hop_rate,
        hops: f.hops,
        hop_reduction: f.hop_reduction,
    };
    let mut report = graph_report("differential-gain", &graph)?;
    let current = per_hop_flow_delay(&flow, flow.hops);
    report.push("current_route_delay", current, "s")?;
    report.push(
        "shorter_route_delay",
        per_hop_flow_delay(&flow, flow.hops - flow.hop_reduction),
        "s",
    )?;
    let success = shorter_route_probability(&graph, flow.hops - flow.hop_reduction)?;
    report.push("shorter_route_probability", success, "1")?;
    if success > 0.0 {
        report.push("expected_wait", expected_wait(&graph, success)?, "s")?;
    }
    report.push(
        "G_dp",
        crate::analytic::differential_gain(&graph, &flow)?,
        "1",
    )?;

    let mut curve_rows = Vec::new();
    let mut max_rows = Vec::new();
    for &e in &f.delay_exponents {
        let delay = 10f64.powf(e);
        let swept = FlowModel {
            per_hop_rate: f.flow_bits / delay,
            ..flow
        };
        let curve = differential_gain_curve(&graph, &swept)?;
        let (arg, best) = curve
            .iter()
            .copied()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (h, g)| if g > acc.1 { (h, g) } else { acc },
            );
        curve_rows.extend(curve.iter().map(|(h, g)| format!("{e},{h},{g}")));
        max_rows.push(format!("{e},{delay},{best},{arg}"));
        report.push(format!("max_G_dp[e={e}]"), best, "1")?;
    }
    out.csv(
        "differential_gain.csv",
        "delay_exponent,h_diff,G_dp",
        curve_rows,
    )?;
    out.csv(
        "differential_gain_max.csv",
        "delay_exponent,per_hop_delay,max_G_dp,argmax_h_diff",
        max_rows,
    )?;
    Ok(vec![report])
}

pub fn flash_route(cfg: &ScenarioConfig, out: &mut OutputWriter) -> Result<Vec<GainReport>> {
    let graph = graph_model(cfg)?;
    let fl = &cfg.flash;
    let cluster = cluster_model(cfg, graph.nodes, graph.nodes, cfg.cluster.distance_mode);
    let mut report = graph_report("flash-route", &graph)?;

    let mut rows = Vec::new();
    let mut flash_cells = 0;
    for &w in &fl.epochs {
        let g = GraphModel { epoch: w, ..graph };
        for &h in &fl.hops {
            let c = flash_route_condition(&cluster, &g, h)?;
            flash_cells += usize::from(c.is_flash);
            rows.push(format!(
                "{w},{h},{},{},{},{},{}",
                c.probability, c.raw_probability, c.lifetime_proxy, c.update_bound, c.is_flash
            ));
        }
    }
    out.csv(
        "flash_surface.csv",
        "epoch,n_l,probability,raw_probability,lifetime_proxy,update_bound,is_flash",
        rows,
    )?;
    report.push("flash_cells", flash_cells as f64, "cells")?;

    let waits = fl
        .hops
        .iter()
        .map(|&h| {
            let p = route_formation_probability(&graph, h)?;
            let wait = match expected_wait(&graph, p) {
                Ok(w) => w,
                Err(Error::ZeroProbability) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            Ok(format!("{h},{p},{wait}"))
        })
        .collect::<Result<Vec<_>>>()?;
    out.csv(
        "flash_formation_wait.csv",
        "n_l,formation_probability,expected_wait",
        waits,
    )?;

    if fl.monte_carlo {
        let mc_cluster = cluster_model(
            cfg,
            fl.mc_nodes as u64,
            fl.mc_nodes as u64,
            cfg.cluster.distance_mode,
        );
        let params = SequenceParams {
            epoch_cap: cfg.monte_carlo.epoch_cap,
            ..SequenceParams::new(fl.mc_nodes, fl.mc_link_probability, graph.epoch, cfg.seed)
        };
        let mut rows = Vec::new();
        for &h in &fl.mc_hops {
            let bound = crate::analytic::route_update_time_for_length(&mc_cluster, h as u64)?;
            let outcome =
                mc_flash_route_stats(&params, h, bound, cfg.monte_carlo.trials, fl.persistence)?;
            for &w in &fl.epochs {
                let (mean, stderr) = outcome
                    .rescored(w, bound)
                    .map_or((f64::NAN, f64::NAN), |e| (e.mean, e.stderr));
                rows.push(format!(
                    "{h},{w},{bound},{mean},{stderr},{},{}",
                    outcome.formed, outcome.capped
                ));
            }
        }
        out.csv(
            "flash_mc.csv",
            "n_l,epoch,update_bound,flash_fraction,stderr,formed,capped",
            rows,
        )?;
    }
    Ok(vec![report])
}

pub fn update_bound(cfg: &ScenarioConfig, out: &mut OutputWriter) -> Result<Vec<GainReport>> {
    let n = cfg.graph.nodes;
    let mut report = GainReport::new("update-bound");
    let base = cluster_model(cfg, n, 1, cfg.cluster.distance_mode);
    report.push("C_max", max_capacity(&base)?, "bit-m/s")?;
    for (mode, file, tag) in [
        (DistanceMode::Literal, "update_bound.csv", "literal"),
        (
            DistanceMode::NodeSpacing,
            "update_bound_node_spacing.csv",
            "node-spacing",
        ),
    ] {
        let rows = (1..=n)
            .into_par_iter()
            .map(|c| {
                let model = cluster_model(cfg, n, c, mode);
                Ok((c, cluster_info_bits(&model)?, route_update_time(&model)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let model = cluster_model(cfg, n, n, mode);
        report.push(format!("d_sum[{tag}]"), total_update_distance(&model)?, "m")?;
        report.push(format!("T_r[C=N,{tag}]"), route_update_time(&model)?, "s")?;
        let peak = rows.iter().map(|r| r.2).fold(0.0, f64::max);
        report.push(format!("T_r_max[{tag}]"), peak, "s")?;
        out.csv(
            file,
            "C,I_c,T_r",
            rows.iter().map(|(c, i, t)| format!("{c},{i},{t}")),
        )?;
    }
    Ok(vec![report])
}
