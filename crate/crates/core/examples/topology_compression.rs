//! Topology bit-strings of a mobile population and how well each codec
//! squeezes them.

use predgain::mobility::{
    simulate, topology_run, BoundaryPolicy, FieldGeometry, MobilityConfig, VelocityField,
};
use predgain::topology::{coverage_radii, score_run, Codec, CompressionMode};

fn main() -> predgain::Result<()> {
    let geometry = FieldGeometry::new(100.0, 25.0)?;
    let radii = coverage_radii(geometry.area(), 0.34, 0.75, 5);
    for n_random in [1, 4, 7] {
        let config = MobilityConfig {
            n_random,
            n_guided: 8 - n_random,
            speed: 1.0,
            dt_step: 1.0,
            n_steps: 500,
            seed: 3,
            field: VelocityField::rotation_about_center(&geometry, 1.0),
            boundary: BoundaryPolicy::Reflect,
        };
        let traj = simulate(&config, &geometry)?;
        let snaps = topology_run(&traj, radii[2]);
        println!("{n_random}:{}  first snapshot {}", 8 - n_random, snaps[0]);
        for codec in Codec::ALL {
            let whole = score_run(&snaps, codec, CompressionMode::WholeRun)?;
            let each = score_run(&snaps, codec, CompressionMode::PerSnapshot)?;
            println!(
                "  {:<10} {} -> {} bits ({:.3}); per snapshot {:.3}",
                codec.name(),
                whole.original_bits,
                whole.compressed_bits,
                whole.inverse_ratio,
                each.inverse_ratio
            );
        }
    }
    Ok(())
}
