//! Checks the concentration bound empirically: how often does the
//! network-averaged RSS Fisher matrix actually deviate from its placement
//! mean by more than a threshold, versus the guaranteed ceiling?
//!
//! Run with: cargo run -p locbound --example deviation_bound

use locbound::asymptotic::{deviation_bound, f_phi, DeviationKind, SecondMoment};
use locbound::fim::rss_fim;
use locbound::scenario::sample_uniform_placement;
use locbound::{ArrayParams, ChannelParams, PlacementDistribution, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn main() -> Result<()> {
    let dist = PlacementDistribution::new(150.0, 30.0, PI / 3.0)?;
    let ch = ChannelParams::default();
    let arr = ArrayParams::default();
    let n = 25;
    let placements = 4000;

    // The placement mean of the per-sensor RSS information matrix is
    // isotropic: f_phi times the identity.
    let mean_density = f_phi(&dist, &ch)?;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut distances = Vec::with_capacity(placements);
    for _ in 0..placements {
        let scenario = sample_uniform_placement(&dist, n, &mut rng)?;
        let fim = rss_fim(&ch, &scenario)?;
        let scaled = fim.matrix / n as f64;
        let dx = scaled[(0, 0)] - mean_density;
        let dy = scaled[(1, 1)] - mean_density;
        let off = scaled[(0, 1)];
        distances.push((dx * dx + dy * dy + 2.0 * off * off).sqrt());
    }

    println!("{n} sensors per placement, {placements} placements");
    println!(
        "{:>12} {:>12} {:>12}",
        "delta0", "empirical", "guaranteed"
    );
    for scale in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let delta0 = scale * std::f64::consts::SQRT_2 * mean_density;
        let empirical =
            distances.iter().filter(|&&d| d > delta0).count() as f64 / placements as f64;
        let guaranteed =
            deviation_bound(DeviationKind::Rss, &dist, &ch, &arr, n, delta0, SecondMoment::Exact)?;
        println!("{:>12.5e} {:>12.4} {:>12.4}", delta0, empirical, guaranteed);
    }
    println!();
    println!("The guarantee is a Chebyshev-type bound, so it is loose but never");
    println!("violated: every empirical frequency sits at or below it.");
    Ok(())
}
