//! Benchmarks the two practical localizers against the bounds that apply to
//! them: the weighted centroid against the RSS-only bound, and the weighted
//! Stansfield estimator against the joint bound, each averaged over random
//! placements and noise draws.
//!
//! Run with: cargo run -p locbound --example localizer_monte_carlo

use locbound::fim::{ensemble_average_crb, BoundKind};
use locbound::localizers::{monte_carlo_rmse, Estimator, PlacementSource};
use locbound::{ArrayParams, ChannelParams, DoaModel, PlacementDistribution, Result};
use std::f64::consts::PI;

fn main() -> Result<()> {
    let dist = PlacementDistribution::new(150.0, 5.0, PI / 3.0)?;
    let ch = ChannelParams::default();
    let arr = ArrayParams::default();
    let trials = 4000;
    let bound_trials = 400;
    let seed = 5;

    println!("{:>4} {:>11} {:>11} {:>15} {:>15} {:>15}", "n", "rss_crb_m", "wcl_m", "joint_crb_m", "stansfield_m", "stansfield_mus");
    for n in [10, 15, 30] {
        let source = PlacementSource::Uniform { dist, n_sensors: n };
        let rss_crb =
            ensemble_average_crb(BoundKind::RssOnly, &dist, &ch, &arr, n, bound_trials, seed)?;
        let joint_crb = ensemble_average_crb(
            BoundKind::Joint(DoaModel::OptimalCrb),
            &dist,
            &ch,
            &arr,
            n,
            bound_trials,
            seed,
        )?;
        let wcl = monte_carlo_rmse(Estimator::Wcl, &source, &ch, &arr, trials, seed)?;
        let stan = monte_carlo_rmse(
            Estimator::WeightedStansfield(DoaModel::OptimalCrb),
            &source,
            &ch,
            &arr,
            trials,
            seed,
        )?;
        let stan_mus = monte_carlo_rmse(
            Estimator::WeightedStansfield(DoaModel::Music),
            &source,
            &ch,
            &arr,
            trials,
            seed,
        )?;
        println!(
            "{:>4} {:>11.2} {:>11.2} {:>15.3} {:>15.3} {:>15.3}",
            n,
            rss_crb.mean_rmse_bound,
            wcl.rmse_m,
            joint_crb.mean_rmse_bound,
            stan.rmse_m,
            stan_mus.rmse_m
        );
    }
    println!();
    println!("The weighted centroid sits well above the RSS bound (it ignores the");
    println!("path-loss model), while Stansfield tracks the joint bound within a");
    println!("small factor once bearings carry most of the information.");
    Ok(())
}
