//! How fast can route updates possibly spread? Sweeps the cluster count
//! for 100 nodes in a 5 km square.

use predgain::analytic::{
    cluster_info_bits, max_capacity, route_update_time, ClusterModel, DistanceMode,
};

fn main() -> predgain::Result<()> {
    let base = ClusterModel {
        nodes: 100,
        clusters: 1,
        area: 5000.0 * 5000.0,
        link_capacity: 1e6,
        guard: 1.0,
        distance_mode: DistanceMode::Literal,
    };
    println!("C_max = {:.4e} bit-m/s", max_capacity(&base)?);
    println!(
        "{:>4} {:>10} {:>12} {:>12}",
        "C", "I_c", "T_r", "T_r(spacing)"
    );
    for clusters in [1, 2, 4, 10, 25, 50, 100] {
        let m = ClusterModel { clusters, ..base };
        let spaced = ClusterModel {
            distance_mode: DistanceMode::NodeSpacing,
            ..m
        };
        println!(
            "{clusters:>4} {:>10.3} {:>12.4e} {:>12.4e}",
            cluster_info_bits(&m)?,
            route_update_time(&m)?,
            route_update_time(&spaced)?
        );
    }
    Ok(())
}
