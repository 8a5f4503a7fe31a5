//! Three random-direction nodes and five nodes riding a rotation field,
//! written as CSV to stdout.

use predgain::mobility::{simulate, BoundaryPolicy, FieldGeometry, MobilityConfig, VelocityField};

fn main() -> predgain::Result<()> {
    let geometry = FieldGeometry::new(100.0, 25.0)?;
    let config = MobilityConfig {
        n_random: 3,
        n_guided: 5,
        speed: 1.0,
        dt_step: 1.0,
        n_steps: 50,
        seed: 7,
        field: VelocityField::rotation_about_center(&geometry, 1.0),
        boundary: BoundaryPolicy::Reflect,
    };
    let traj = simulate(&config, &geometry)?;
    traj.write_csv(std::io::stdout().lock())
}
