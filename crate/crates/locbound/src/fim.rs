use crate::channel::{shadowing_covariance, ChannelParams};
use crate::doa::{beta_const, ArrayParams, DoaModel};
use crate::error::{Error, Result};
use crate::quad::gauss_hermite;
use crate::scenario::{compute_geometry, sample_uniform_placement, PlacementDistribution, Scenario};
use crate::seed::{stream_seed, SALT_PLACEMENT};
use nalgebra::{DMatrix, Matrix2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::ops::Add;

/// Conversion constant between dB-scale and natural-log-scale variances:
/// 100 / (ln 10)^2.
pub const EPSILON: f64 = 100.0 / (std::f64::consts::LN_10 * std::f64::consts::LN_10);

/// Largest condition number at which a Fisher matrix is still inverted.
pub const CONDITION_LIMIT: f64 = 1e12;

/// The three scalar constants the bound expressions are built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Constants {
    pub fn new(ch: &ChannelParams, arr: &ArrayParams) -> Constants {
        let beta = beta_const(arr);
        let alpha =
            ch.c0 * ch.p_t * (ch.sigma_s * ch.sigma_s / (2.0 * EPSILON)).exp() / beta;
        Constants { epsilon: EPSILON, alpha, beta }
    }
}

/// A 2x2 Fisher information matrix over the transmitter coordinates, in
/// units of 1/m^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherInfo {
    pub matrix: Matrix2<f64>,
}

impl FisherInfo {
    /// Wraps a matrix, averaging away any floating-point asymmetry.
    pub fn from_symmetric(m: Matrix2<f64>) -> FisherInfo {
        FisherInfo { matrix: (m + m.transpose()) * 0.5 }
    }
}

impl Add for FisherInfo {
    type Output = FisherInfo;

    fn add(self, other: FisherInfo) -> FisherInfo {
        FisherInfo { matrix: self.matrix + other.matrix }
    }
}

/// A Fisher matrix together with its inverse and the position-error bound
/// sqrt(trace(F^-1)) in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct CrbResult {
    pub fim: FisherInfo,
    pub covariance_bound: Matrix2<f64>,
    pub rmse_bound: f64,
}

/// Controls the Gauss-Hermite evaluation of the shifted log-normal
/// expectation: start at `base_order` nodes, double once, and require the
/// relative change to fall below `rel_tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub base_order: usize,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> QuadratureSpec {
        QuadratureSpec { base_order: 40, rel_tol: 1e-8 }
    }
}

/// Fisher information carried by the RSS measurements alone.
///
/// Builds the per-sensor gradient rows (dx/d^2, dy/d^2), whitens them against
/// the shadowing covariance by Cholesky solve, and scales by epsilon gamma^2.
pub fn rss_fim(ch: &ChannelParams, scenario: &Scenario) -> Result<FisherInfo> {
    ch.validate()?;
    let geom = compute_geometry(scenario)?;
    let n = geom.n();
    let mut grads = DMatrix::zeros(n, 2);
    for i in 0..n {
        let d_sq = geom.distance[i] * geom.distance[i];
        grads[(i, 0)] = geom.dx[i] / d_sq;
        grads[(i, 1)] = geom.dy[i] / d_sq;
    }
    let cov = shadowing_covariance(ch, scenario);
    let chol = match cov.cholesky() {
        Some(c) => c,
        None => {
            return Err(Error::CovarianceNotInvertible(
                "shadowing covariance has no Cholesky factor".into(),
            ))
        }
    };
    let whitened = chol.solve(&grads);
    let scale = EPSILON * ch.gamma * ch.gamma;
    let mut f = Matrix2::zeros();
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = 0.0;
            for i in 0..n {
                acc += grads[(i, a)] * whitened[(i, b)];
            }
            f[(a, b)] = scale * acc;
        }
    }
    Ok(FisherInfo::from_symmetric(f))
}

/// Fisher information carried by the DoA measurements of sensors running an
/// efficient bearing estimator.
pub fn doa_fim_optimal(
    ch: &ChannelParams,
    arr: &ArrayParams,
    scenario: &Scenario,
) -> Result<FisherInfo> {
    ch.validate()?;
    arr.validate()?;
    let consts = Constants::new(ch, arr);
    let geom = compute_geometry(scenario)?;
    let mut f = Matrix2::zeros();
    for i in 0..geom.n() {
        let weight = doa_weight(&geom, i, |d, tilde| {
            Ok(consts.alpha * tilde.cos().powi(2) / d.powf(ch.gamma))
        })?;
        accumulate_bearing_outer(&mut f, &geom, i, weight);
    }
    Ok(FisherInfo::from_symmetric(f))
}

/// Fisher information carried by the DoA measurements of sensors running
/// MUSIC, whose error variance includes a received-power-shifted noise term.
pub fn doa_fim_music(
    ch: &ChannelParams,
    arr: &ArrayParams,
    scenario: &Scenario,
    quad: &QuadratureSpec,
) -> Result<FisherInfo> {
    ch.validate()?;
    arr.validate()?;
    let geom = compute_geometry(scenario)?;
    let beta = beta_const(arr);
    let shift = arr.p_m / arr.n_a as f64;
    let mean_gain = (ch.sigma_s * ch.sigma_s / (2.0 * EPSILON)).exp();
    let mut f = Matrix2::zeros();
    for i in 0..geom.n() {
        let weight = doa_weight(&geom, i, |d, tilde| {
            let psi_med = ch.c0 * ch.p_t / d.powf(ch.gamma);
            let inv_mean = expected_inv_shifted_lognormal(psi_med, ch.sigma_s, shift, quad)?;
            let bracket = psi_med * mean_gain - shift + shift * shift * inv_mean;
            Ok(tilde.cos().powi(2) / beta * bracket)
        })?;
        accumulate_bearing_outer(&mut f, &geom, i, weight);
    }
    Ok(FisherInfo::from_symmetric(f))
}

/// Total Fisher information of the joint RSS/DoA measurement under the
/// selected DoA model: the two contributions add.
pub fn joint_fim(
    model: DoaModel,
    ch: &ChannelParams,
    arr: &ArrayParams,
    scenario: &Scenario,
    quad: &QuadratureSpec,
) -> Result<FisherInfo> {
    let rss = rss_fim(ch, scenario)?;
    let doa = match model {
        DoaModel::OptimalCrb => doa_fim_optimal(ch, arr, scenario)?,
        DoaModel::Music => doa_fim_music(ch, arr, scenario, quad)?,
    };
    Ok(rss + doa)
}

/// E[1 / (psi + shift)] where psi is log-normal with linear-scale median
/// `psi_med` and dB-scale standard deviation `sigma_s_db`.
///
/// Evaluated by Gauss-Hermite quadrature at `quad.base_order` nodes and again
/// at double the order; the doubled value is returned once the relative
/// change is below `quad.rel_tol`.
pub fn expected_inv_shifted_lognormal(
    psi_med: f64,
    sigma_s_db: f64,
    shift: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(psi_med > 0.0) || shift < 0.0 {
        return Err(Error::InvalidParameter(
            "shifted log-normal expectation needs psi_med > 0 and shift >= 0".into(),
        ));
    }
    if sigma_s_db == 0.0 {
        return Ok(1.0 / (psi_med + shift));
    }
    let scale = std::f64::consts::SQRT_2 * sigma_s_db * std::f64::consts::LN_10 / 10.0;
    let eval = |order: usize| -> f64 {
        let (x, w) = gauss_hermite(order);
        let sum: f64 = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi / (psi_med * (scale * xi).exp() + shift))
            .sum();
        sum / PI.sqrt()
    };
    let coarse = eval(quad.base_order);
    let fine = eval(quad.base_order * 2);
    if (fine - coarse).abs() > quad.rel_tol * fine.abs() {
        return Err(Error::QuadratureFailed(format!(
            "shifted log-normal expectation moved {:.3e} relative between {} and {} nodes",
            ((fine - coarse) / fine).abs(),
            quad.base_order,
            quad.base_order * 2
        )));
    }
    Ok(fine)
}

/// Inverts a Fisher matrix into a covariance bound and scalar RMSE bound.
pub fn crb_from_fim(f: &FisherInfo) -> Result<CrbResult> {
    let eigen = f.matrix.symmetric_eigen();
    let l0 = eigen.eigenvalues[0];
    let l1 = eigen.eigenvalues[1];
    let (lo, hi) = if l0 < l1 { (l0, l1) } else { (l1, l0) };
    let condition = if lo <= 0.0 { f64::INFINITY } else { hi / lo };
    if !(condition < CONDITION_LIMIT) {
        return Err(Error::UnlocalizableConfiguration { condition_number: condition });
    }
    let v = eigen.eigenvectors;
    let inv_diag = Matrix2::new(1.0 / eigen.eigenvalues[0], 0.0, 0.0, 1.0 / eigen.eigenvalues[1]);
    let covariance = v * inv_diag * v.transpose();
    let covariance = (covariance + covariance.transpose()) * 0.5;
    let rmse = covariance.trace().sqrt();
    Ok(CrbResult { fim: *f, covariance_bound: covariance, rmse_bound: rmse })
}

/// Which bound family an ensemble average evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    RssOnly,
    Joint(DoaModel),
}

/// Ensemble-averaged bound over random placements, with the count of draws
/// that had to be skipped as unlocalizable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleCrb {
    pub mean_rmse_bound: f64,
    pub trials_ok: usize,
    pub trials_failed: usize,
    /// Set when more than 1% of draws were unlocalizable.
    pub warning: bool,
}

/// Averages the RMSE bound over `trials` uniform placements of `n_sensors`
/// sensors. Unlocalizable draws are skipped and counted; any other failure
/// aborts. Deterministic in `master_seed` regardless of worker scheduling.
pub fn ensemble_average_crb(
    kind: BoundKind,
    dist: &PlacementDistribution,
    ch: &ChannelParams,
    arr: &ArrayParams,
    n_sensors: usize,
    trials: usize,
    master_seed: u64,
) -> Result<EnsembleCrb> {
    if trials < 1 {
        return Err(Error::InvalidParameter("ensemble needs at least one trial".into()));
    }
    let quad = QuadratureSpec::default();
    let draws: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = stream_seed(master_seed, SALT_PLACEMENT, &[t as u64]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let scenario = sample_uniform_placement(dist, n_sensors, &mut rng)?;
            let fim = match kind {
                BoundKind::RssOnly => rss_fim(ch, &scenario)?,
                BoundKind::Joint(model) => joint_fim(model, ch, arr, &scenario, &quad)?,
            };
            Ok(crb_from_fim(&fim)?.rmse_bound)
        })
        .collect();
    let mut sum = 0.0;
    let mut ok = 0usize;
    let mut failed = 0usize;
    for draw in draws {
        match draw {
            Ok(v) => {
                sum += v;
                ok += 1;
            }
            Err(
                Error::UnlocalizableConfiguration { .. }
                | Error::UnlocalizableBearingGeometry { .. }
                | Error::BroadsideSingularity { .. },
            ) => failed += 1,
            Err(e) => return Err(e),
        }
    }
    if ok == 0 {
        return Err(Error::DegenerateGeometry(
            "every sampled placement was unlocalizable".into(),
        ));
    }
    Ok(EnsembleCrb {
        mean_rmse_bound: sum / ok as f64,
        trials_ok: ok,
        trials_failed: failed,
        warning: failed * 100 > trials,
    })
}

// --- private helpers ---

fn doa_weight(
    geom: &crate::scenario::GeometryCache,
    i: usize,
    power_term: impl Fn(f64, f64) -> Result<f64>,
) -> Result<f64> {
    let tilde = geom.orientation_error[i];
    if tilde.abs() >= PI / 2.0 {
        return Err(Error::BroadsideSingularity { orientation_error: tilde });
    }
    let d = geom.distance[i];
    let tan_sq = tilde.tan().powi(2);
    Ok((power_term(d, tilde)? + 2.0 * tan_sq) / d.powi(4))
}

fn accumulate_bearing_outer(
    f: &mut Matrix2<f64>,
    geom: &crate::scenario::GeometryCache,
    i: usize,
    weight: f64,
) {
    let (dx, dy) = (geom.dx[i], geom.dy[i]);
    f[(0, 0)] += weight * dy * dy;
    f[(0, 1)] -= weight * dx * dy;
    f[(1, 0)] -= weight * dx * dy;
    f[(1, 1)] += weight * dx * dx;
}
