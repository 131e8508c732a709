//! Draws measurements the way the Monte Carlo machinery does: correlated
//! log-normal shadowing on the RSS vector, then per-sensor Gaussian bearing
//! errors whose variance depends on the received power and the orientation
//! error. Also shows how the correlation distance couples nearby sensors.
//!
//! Run with: cargo run -p locbound --example measurement_sampling

use locbound::channel::{mean_rss_dbm, sample_rss, ShadowingSampler};
use locbound::config::parse_scenario;
use locbound::doa::sample_doa;
use locbound::scenario::compute_geometry;
use locbound::{ArrayParams, ChannelParams, DoaModel, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let scenario = parse_scenario(include_str!("data/demo_scenario.txt"))?;
    let geom = compute_geometry(&scenario)?;
    let ch = ChannelParams::default();
    let arr = ArrayParams::default();
    let sampler = ShadowingSampler::new(&ch, &scenario)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    let rss = sample_rss(&ch, &geom, &sampler, &mut rng);
    let doa = sample_doa(DoaModel::OptimalCrb, &arr, &geom, &rss, &mut rng)?;

    println!(
        "{:>10} {:>12} {:>12} {:>12} {:>12}",
        "dist_m", "mean_dbm", "sample_dbm", "bearing_rad", "doa_std_rad"
    );
    for i in 0..scenario.n() {
        println!(
            "{:>10.2} {:>12.2} {:>12.2} {:>12.4} {:>12.6}",
            geom.distance[i],
            mean_rss_dbm(&ch, geom.distance[i]),
            rss.phi[i],
            doa.theta_hat[i],
            doa.sigma2[i].sqrt()
        );
    }

    // Empirical shadowing correlation between the two closest sensors, with
    // and without a correlation distance.
    let (a, b) = closest_pair(&scenario)?;
    println!();
    println!("shadowing correlation between sensors {a} and {b}:");
    for x_c in [0.0, 30.0] {
        let ch = ChannelParams { x_c, ..ch };
        let sampler = ShadowingSampler::new(&ch, &scenario)?;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trials = 20_000;
        let (mut sum_a, mut sum_b, mut sum_ab, mut sum_a2, mut sum_b2) =
            (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..trials {
            let s = sampler.sample(&mut rng);
            sum_a += s[a];
            sum_b += s[b];
            sum_ab += s[a] * s[b];
            sum_a2 += s[a] * s[a];
            sum_b2 += s[b] * s[b];
        }
        let n = trials as f64;
        let cov = sum_ab / n - (sum_a / n) * (sum_b / n);
        let var_a = sum_a2 / n - (sum_a / n) * (sum_a / n);
        let var_b = sum_b2 / n - (sum_b / n) * (sum_b / n);
        println!("  x_c = {x_c:>5.1} m -> correlation {:+.3}", cov / (var_a * var_b).sqrt());
    }
    Ok(())
}

fn closest_pair(scenario: &locbound::Scenario) -> Result<(usize, usize)> {
    let mut best = (0, 1, f64::INFINITY);
    for i in 0..scenario.n() {
        for j in (i + 1)..scenario.n() {
            let d = scenario.sensors[i].position.distance_to(scenario.sensors[j].position);
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    Ok((best.0, best.1))
}
