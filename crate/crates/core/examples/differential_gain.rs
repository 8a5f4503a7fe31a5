//! Gain from waiting for a shorter route, swept over how many hops it
//! saves and how slow each hop is.

use predgain::analytic::{differential_gain_curve, FlowModel, GraphModel};

fn main() -> predgain::Result<()> {
    let g = GraphModel::with_probability(100, 0.13, 10.0)?;
    for exponent in 0..5 {
        let delay = 10f64.powi(exponent);
        let flow = FlowModel {
            flow_bits: 1e8,
            per_hop_rate: 1e8 / delay,
            hops: 50,
            hop_reduction: 1,
        };
        let curve = differential_gain_curve(&g, &flow)?;
        let (h, best) = curve
            .iter()
            .copied()
            .fold((0, 0.0), |a, (h, v)| if v > a.1 { (h, v) } else { a });
        println!("per-hop delay {delay:>6} s: best gain {best:.3} at h_diff = {h}");
    }
    Ok(())
}
