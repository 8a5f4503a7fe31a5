//! Motion entropy of each node as the population shifts from field-guided
//! to random motion.

use predgain::entropy::{population_entropy, InterestSet};
use predgain::mobility::{simulate, BoundaryPolicy, FieldGeometry, MobilityConfig, VelocityField};

fn main() -> predgain::Result<()> {
    let geometry = FieldGeometry::new(100.0, 25.0)?;
    for n_random in [1, 4, 7] {
        let config = MobilityConfig {
            n_random,
            n_guided: 8 - n_random,
            speed: 1.0,
            dt_step: 1.0,
            n_steps: 500,
            seed: 1,
            field: VelocityField::rotation_about_center(&geometry, 1.0),
            boundary: BoundaryPolicy::Reflect,
        };
        let traj = simulate(&config, &geometry)?;
        let all = population_entropy(&traj, InterestSet::AllOthers, None)?;
        let near = population_entropy(&traj, InterestSet::Nearest(3), Some(0..100))?;
        let per_node: Vec<String> = all.per_node.iter().map(|h| format!("{h:.3}")).collect();
        println!(
            "{n_random}:{} mean {:.4} (3 nearest, first 100 ticks: {:.4})  [{}]",
            8 - n_random,
            all.mean,
            near.mean,
            per_node.join(" ")
        );
    }
    Ok(())
}
