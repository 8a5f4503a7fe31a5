//! Route formation probabilities in the evolving random graph, and the link
//! probability at which a short route becomes likely.

use predgain::analytic::{
    radius_for_probability, route_formation_probability, shorter_route_probability,
    solve_link_probability, CalibrationBranch, GraphModel, LinkProbMode,
};

fn main() -> predgain::Result<()> {
    let area = 5000.0 * 5000.0;
    let geometric = GraphModel::from_geometry(100, 2.0, area, 10.0, LinkProbMode::Pairwise)?;
    println!(
        "r = 2 m over (5 km)^2: p = {:.3e}, P(route < 15 hops) = {:.3e}",
        geometric.link_probability,
        shorter_route_probability(&geometric, 15)?
    );

    let g = GraphModel::with_probability(100, 0.01, 10.0)?;
    for hops in 0..5 {
        println!(
            "Pr(n_l = {hops}) = {:.5}",
            route_formation_probability(&g, hops)?
        );
    }

    for branch in [CalibrationBranch::Low, CalibrationBranch::High] {
        if let Some(p) = solve_link_probability(100, 15, 0.7, branch)? {
            println!(
                "{branch:?}: p = {p:.5} gives 0.7, i.e. r = {:.1} m pairwise over (5 km)^2",
                radius_for_probability(100, p, area, LinkProbMode::Pairwise)
            );
        }
    }
    Ok(())
}
