//! Which route lengths vanish faster than an update could announce them,
//! first from the closed form and then by simulation.

use predgain::analytic::{
    flash_route_condition, route_update_time_for_length, ClusterModel, DistanceMode, GraphModel,
};
use predgain::montecarlo::{mc_flash_route_stats, Persistence, SequenceParams};

fn main() -> predgain::Result<()> {
    let cluster = ClusterModel {
        nodes: 100,
        clusters: 100,
        area: 5000.0 * 5000.0,
        link_capacity: 1e6,
        guard: 1.0,
        distance_mode: DistanceMode::Literal,
    };
    for w in [1e-6, 1e-3, 1.0] {
        let g = GraphModel::with_probability(100, 0.13, w)?;
        let row: Vec<String> = (1..=12)
            .map(|h| {
                flash_route_condition(&cluster, &g, h).map(|c| format!("{:.2}", c.probability))
            })
            .collect::<predgain::Result<_>>()?;
        println!("w = {w:e}: {}", row.join(" "));
    }

    let small = ClusterModel {
        nodes: 20,
        clusters: 20,
        ..cluster
    };
    for hops in 1..=3 {
        let bound = route_update_time_for_length(&small, hops as u64)?;
        // routes that last a single epoch are the only ones too short-lived
        let params = SequenceParams::new(20, 0.1, bound / 1.5, 9);
        let out = mc_flash_route_stats(&params, hops, bound, 5_000, Persistence::PathWise)?;
        let est = out.estimate.expect("routes formed");
        println!(
            "{hops}-hop routes, bound {bound:.3e} s: {:.3} flash ({} formed)",
            est.mean, out.formed
        );
    }
    Ok(())
}
