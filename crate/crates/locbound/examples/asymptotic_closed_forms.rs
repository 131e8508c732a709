//! Evaluates the closed-form large-network bounds and compares them with
//! exact bounds averaged over random placements, showing the gap close as
//! the network grows.
//!
//! Run with: cargo run -p locbound --example asymptotic_closed_forms

use locbound::asymptotic::{
    asymptotic_rmse_joint, asymptotic_rmse_rss, AsymptoticParams, SecondMoment,
};
use locbound::fim::{ensemble_average_crb, BoundKind};
use locbound::{ArrayParams, ChannelParams, DoaModel, PlacementDistribution, Result};
use std::f64::consts::PI;

fn main() -> Result<()> {
    let ch = ChannelParams::default();
    let arr = ArrayParams::default();

    let dist = PlacementDistribution::new(150.0, 5.0, PI / 3.0)?;
    let params = AsymptoticParams { dist, ch, arr };
    let moments = params.moments(SecondMoment::Exact)?;
    println!("placement-averaged information moments (annulus 5..150 m):");
    println!("  f_phi       {:.6e}  (RSS information density, 1/m^2)", moments.f_phi);
    println!("  f_theta_phi {:.6e}  (bearing information density, 1/m^2)", moments.f_theta_phi);
    println!("  e_fn        {:.6e}  (mean per-sensor weight)", moments.e_fn);
    println!("  e_fn2       {:.6e}  (second moment of the weight)", moments.e_fn2);
    println!();

    // The closed forms assume many sensors spread over the annulus; they are
    // tightest when the guard radius is an appreciable fraction of the outer
    // radius. Compare against placement-averaged exact bounds.
    let rss_dist = PlacementDistribution::new(150.0, 15.0, PI / 3.0)?;
    let joint_dist = PlacementDistribution::new(150.0, 45.0, PI / 3.0)?;
    let placements = 400;
    let seed = 33;

    println!("RSS-only, guard ratio 0.1:");
    println!("{:>4} {:>14} {:>14} {:>9}", "n", "ensemble_m", "closed_form_m", "gap_m");
    for n in [20, 40, 60, 80] {
        let exact =
            ensemble_average_crb(BoundKind::RssOnly, &rss_dist, &ch, &arr, n, placements, seed)?;
        let asym = asymptotic_rmse_rss(&rss_dist, &ch, n)?;
        println!(
            "{:>4} {:>14.3} {:>14.3} {:>9.3}",
            n,
            exact.mean_rmse_bound,
            asym,
            (exact.mean_rmse_bound - asym).abs()
        );
    }
    println!();
    println!("joint, guard ratio 0.3:");
    println!("{:>4} {:>14} {:>14} {:>9}", "n", "ensemble_m", "closed_form_m", "gap_m");
    for n in [20, 40, 60, 80] {
        let exact = ensemble_average_crb(
            BoundKind::Joint(DoaModel::OptimalCrb),
            &joint_dist,
            &ch,
            &arr,
            n,
            placements,
            seed,
        )?;
        let asym = asymptotic_rmse_joint(&joint_dist, &ch, &arr, n)?;
        println!(
            "{:>4} {:>14.5} {:>14.5} {:>9.5}",
            n,
            exact.mean_rmse_bound,
            asym,
            (exact.mean_rmse_bound - asym).abs()
        );
    }
    Ok(())
}
