//! Curl of a rotation field (constant, twice the angular rate) and of a
//! sheared field sampled on a grid.

use predgain::entropy::curl_map;
use predgain::mobility::{FieldGeometry, VelocityField};
use predgain::Vec2;

fn main() -> predgain::Result<()> {
    let geometry = FieldGeometry::new(100.0, 25.0)?;
    let rotation = VelocityField::rotation_about_center(&geometry, 0.5);
    let map = curl_map(&rotation, &geometry, 10.0)?;
    let (lo, hi) = map
        .values
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(*v), b.max(*v)));
    println!(
        "rotation: {} points, curl in [{lo:.6}, {hi:.6}]",
        map.values.len()
    );

    // v = (y/100, 0): curl = -1/100 everywhere
    let (nx, ny) = (11, 11);
    let values = (0..ny)
        .flat_map(|j| (0..nx).map(move |_| Vec2::new(j as f64 * 10.0 / 100.0, 0.0)))
        .collect();
    let shear = VelocityField::CustomGrid {
        origin: Vec2::ZERO,
        spacing: 10.0,
        nx,
        ny,
        values,
    };
    let map = curl_map(&shear, &geometry, 10.0)?;
    map.write_csv(std::io::stdout().lock())
}
