use crate::channel::{sample_rss, ChannelParams, RssVector, ShadowingSampler};
use crate::doa::{sample_doa, variance, ArrayParams, DoaModel, DoaVector};
use crate::error::{Error, Result};
use crate::scenario::{
    compute_geometry, sample_uniform_placement, wrap_angle, GeometryCache,
    PlacementDistribution, Point2, Scenario,
};
use crate::seed::{stream_seed, SALT_NOISE, SALT_PLACEMENT};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Largest condition number at which the bearing-fusion normal equations are
/// still solved.
pub const BEARING_CONDITION_LIMIT: f64 = 1e12;

/// Orientation errors are clamped to this magnitude when estimating a
/// sensor's bearing-error variance, so one near-broadside draw de-weights
/// that sensor instead of aborting the fit.
pub const ORIENTATION_CLAMP: f64 = PI / 2.0 - 1e-3;

/// One trial's measurements: RSS at every sensor, plus bearings when joint
/// estimation is requested.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    pub rss: RssVector,
    pub doa: Option<DoaVector>,
}

/// A location estimate with solver diagnostics: the condition number of the
/// normal equations (1 for solvers without one) and the ratio of the largest
/// to the smallest fusion weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub location: Point2,
    pub condition_number: f64,
    pub weight_spread: f64,
}

/// Weighted centroid: the received-power-weighted average of the sensor
/// positions.
pub fn wcl(scenario: &Scenario, rss: &RssVector) -> Result<Estimate> {
    let n = scenario.n();
    if rss.n() != n {
        return Err(Error::InvalidParameter(format!(
            "rss length {} does not match sensor count {n}",
            rss.n()
        )));
    }
    let mut sum_w = 0.0;
    let mut x = 0.0;
    let mut y = 0.0;
    let mut w_min = f64::INFINITY;
    let mut w_max = 0.0f64;
    for (sensor, &w) in scenario.sensors.iter().zip(&rss.psi) {
        if !(w > 0.0) {
            return Err(Error::InvalidParameter(
                "centroid weights must be positive received powers".into(),
            ));
        }
        sum_w += w;
        x += w * sensor.position.x;
        y += w * sensor.position.y;
        w_min = w_min.min(w);
        w_max = w_max.max(w);
    }
    Ok(Estimate {
        location: Point2::new(x / sum_w, y / sum_w),
        condition_number: 1.0,
        weight_spread: w_max / w_min,
    })
}

/// Weighted Stansfield bearing fusion: solves the weighted least-squares
/// intersection of the estimated bearing lines, with each line weighted by
/// the inverse of its estimated bearing-error variance.
///
/// The variance estimate plugs in the measured power and the estimated
/// orientation error (bearing estimate minus array orientation), clamped
/// away from broadside so a single bad draw de-weights rather than aborts.
pub fn weighted_stansfield(
    scenario: &Scenario,
    meas: &MeasurementSet,
    model: DoaModel,
    arr: &ArrayParams,
) -> Result<Estimate> {
    let n = scenario.n();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "bearing fusion needs at least two sensors".into(),
        ));
    }
    let doa = meas.doa.as_ref().ok_or_else(|| {
        Error::InvalidParameter("bearing fusion needs DoA measurements".into())
    })?;
    if meas.rss.n() != n || doa.n() != n {
        return Err(Error::InvalidParameter(
            "measurement lengths do not match sensor count".into(),
        ));
    }
    let mut weights = Vec::with_capacity(n);
    let mut w_min = f64::INFINITY;
    let mut w_max = 0.0f64;
    for i in 0..n {
        let theta = doa.theta_hat[i];
        let est_err = wrap_angle(theta - scenario.sensors[i].array_orientation);
        let clamped = est_err.abs().min(ORIENTATION_CLAMP);
        let sigma_sq = variance(model, arr, meas.rss.psi[i], clamped)?;
        let w = 1.0 / sigma_sq;
        w_min = w_min.min(w);
        w_max = w_max.max(w);
        weights.push(w);
    }
    let mut m11 = 0.0;
    let mut m12 = 0.0;
    let mut m22 = 0.0;
    let mut r1 = 0.0;
    let mut r2 = 0.0;
    for i in 0..n {
        // Normalizing by the largest weight keeps the normal equations
        // well-scaled; the solution is invariant under uniform weight scaling.
        let w = weights[i] / w_max;
        let theta = doa.theta_hat[i];
        let (sin, cos) = theta.sin_cos();
        let b = scenario.sensors[i].position.x * sin - scenario.sensors[i].position.y * cos;
        m11 += w * sin * sin;
        m12 -= w * sin * cos;
        m22 += w * cos * cos;
        r1 += w * b * sin;
        r2 -= w * b * cos;
    }
    let trace = m11 + m22;
    let det = m11 * m22 - m12 * m12;
    let disc = (trace * trace / 4.0 - det).max(0.0).sqrt();
    let (lo, hi) = (trace / 2.0 - disc, trace / 2.0 + disc);
    let condition = if lo <= 0.0 { f64::INFINITY } else { hi / lo };
    if !(condition < BEARING_CONDITION_LIMIT) {
        return Err(Error::UnlocalizableBearingGeometry { condition_number: condition });
    }
    let x = (m22 * r1 - m12 * r2) / det;
    let y = (m11 * r2 - m12 * r1) / det;
    Ok(Estimate {
        location: Point2::new(x, y),
        condition_number: condition,
        weight_spread: w_max / w_min,
    })
}

/// Which practical estimator a Monte Carlo run drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Wcl,
    WeightedStansfield(DoaModel),
}

/// Whether trials replay one fixed scenario or draw a fresh uniform
/// placement each time.
#[derive(Debug, Clone, PartialEq)]
pub enum PlacementSource {
    Fixed(Scenario),
    Uniform { dist: PlacementDistribution, n_sensors: usize },
}

/// Root-mean-square location error over Monte Carlo trials, with failed
/// (unlocalizable) trials excluded and counted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloResult {
    pub rmse_m: f64,
    pub trials_ok: usize,
    pub trials_failed: usize,
    /// Set when more than 5% of trials failed.
    pub flagged: bool,
}

/// Runs `trials` measurement realizations of the chosen estimator and
/// returns the RMSE against the true transmitter location. Deterministic in
/// `master_seed` regardless of worker scheduling.
pub fn monte_carlo_rmse(
    estimator: Estimator,
    source: &PlacementSource,
    ch: &ChannelParams,
    arr: &ArrayParams,
    trials: usize,
    master_seed: u64,
) -> Result<MonteCarloResult> {
    if trials < 1 {
        return Err(Error::InvalidParameter("monte carlo needs at least one trial".into()));
    }
    ch.validate()?;
    arr.validate()?;
    let fixed: Option<(Scenario, GeometryCache, ShadowingSampler)> = match source {
        PlacementSource::Fixed(scenario) => {
            let geom = compute_geometry(scenario)?;
            let sampler = ShadowingSampler::new(ch, scenario)?;
            Some((scenario.clone(), geom, sampler))
        }
        PlacementSource::Uniform { .. } => None,
    };
    let outcomes: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut noise_rng =
                ChaCha8Rng::seed_from_u64(stream_seed(master_seed, SALT_NOISE, &[t as u64]));
            let trial_error_sq = |scenario: &Scenario,
                                  geom: &GeometryCache,
                                  sampler: &ShadowingSampler,
                                  rng: &mut ChaCha8Rng|
             -> Result<f64> {
                let rss = sample_rss(ch, geom, sampler, rng);
                let estimate = match estimator {
                    Estimator::Wcl => wcl(scenario, &rss)?,
                    Estimator::WeightedStansfield(model) => {
                        let doa = sample_doa(model, arr, geom, &rss, rng)?;
                        let meas = MeasurementSet { rss, doa: Some(doa) };
                        weighted_stansfield(scenario, &meas, model, arr)?
                    }
                };
                let dx = estimate.location.x - scenario.pu.x;
                let dy = estimate.location.y - scenario.pu.y;
                Ok(dx * dx + dy * dy)
            };
            match (&fixed, source) {
                (Some((scenario, geom, sampler)), _) => {
                    trial_error_sq(scenario, geom, sampler, &mut noise_rng)
                }
                (None, PlacementSource::Uniform { dist, n_sensors }) => {
                    let mut placement_rng = ChaCha8Rng::seed_from_u64(stream_seed(
                        master_seed,
                        SALT_PLACEMENT,
                        &[t as u64],
                    ));
                    let scenario = sample_uniform_placement(dist, *n_sensors, &mut placement_rng)?;
                    let geom = compute_geometry(&scenario)?;
                    let sampler = ShadowingSampler::new(ch, &scenario)?;
                    trial_error_sq(&scenario, &geom, &sampler, &mut noise_rng)
                }
                (None, PlacementSource::Fixed(_)) => unreachable!(),
            }
        })
        .collect();
    let mut sum_sq = 0.0;
    let mut ok = 0usize;
    let mut failed = 0usize;
    for outcome in outcomes {
        match outcome {
            Ok(sq) => {
                sum_sq += sq;
                ok += 1;
            }
            Err(
                Error::UnlocalizableBearingGeometry { .. }
                | Error::UnlocalizableConfiguration { .. }
                | Error::BroadsideSingularity { .. },
            ) => failed += 1,
            Err(e) => return Err(e),
        }
    }
    if ok == 0 {
        return Err(Error::UnlocalizableBearingGeometry { condition_number: f64::INFINITY });
    }
    Ok(MonteCarloResult {
        rmse_m: (sum_sq / ok as f64).sqrt(),
        trials_ok: ok,
        trials_failed: failed,
        flagged: failed * 20 > trials,
    })
}
