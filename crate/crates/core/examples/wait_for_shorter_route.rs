//! Simulated time until the source and target are within two hops,
//! against the geometric mean w(1-P)/P.

use predgain::analytic::{expected_wait, GraphModel};
use predgain::montecarlo::{mc_wait_for_shorter_route, SequenceParams};

fn main() -> predgain::Result<()> {
    let (n, p, w) = (20, 0.1, 10.0);
    let outcome = mc_wait_for_shorter_route(&SequenceParams::new(n, p, w, 42), 3, 10_000)?;
    let est = outcome.estimate.expect("some trial succeeded");
    // direct link, or a relay linked to both ends
    let success = 1.0 - (1.0 - p) * (1.0 - p * p).powi(n as i32 - 2);
    let g = GraphModel::with_probability(n as u64, p, w)?;
    println!(
        "simulated  {:.2} ± {:.2} s over {} trials",
        est.mean, est.stderr, est.trials
    );
    println!("geometric  {:.2} s", expected_wait(&g, success)?);
    for (t, f) in outcome.empirical_cdf().iter().take(5) {
        println!("  P(wait <= {t:>4}) = {f:.3}");
    }
    Ok(())
}
