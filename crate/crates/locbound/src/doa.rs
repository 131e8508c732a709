use crate::channel::RssVector;
use crate::error::{Error, Result};
use crate::scenario::GeometryCache;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

/// Antenna-array and measurement parameters of each sensor: `n_s` snapshots
/// per localization period, `n_a` array elements, array constant `kappa`
/// (wavelength and element spacing), and measurement noise power `p_m` in
/// watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayParams {
    pub n_s: u32,
    pub n_a: u32,
    pub kappa: f64,
    pub p_m: f64,
}

impl Default for ArrayParams {
    fn default() -> ArrayParams {
        ArrayParams { n_s: 50, n_a: 2, kappa: PI, p_m: 1e-11 }
    }
}

impl ArrayParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_s < 1 {
            return Err(Error::InvalidParameter("array n_s must be at least 1".into()));
        }
        if self.n_a < 2 {
            return Err(Error::InvalidParameter("array n_a must be at least 2".into()));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidParameter("array kappa must be positive".into()));
        }
        if !(self.p_m.is_finite() && self.p_m > 0.0) {
            return Err(Error::InvalidParameter("array p_m must be positive".into()));
        }
        Ok(())
    }
}

/// Which bearing-error variance model a sensor's DoA estimator follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoaModel {
    /// An efficient estimator attaining the single-sensor bearing bound.
    OptimalCrb,
    /// The MUSIC spectral estimator, whose variance carries an extra
    /// noise-power term.
    Music,
}

/// One draw of bearing estimates at every sensor, with the per-sensor error
/// variances that generated them.
#[derive(Debug, Clone, PartialEq)]
pub struct DoaVector {
    pub theta_hat: Vec<f64>,
    pub sigma2: Vec<f64>,
}

impl DoaVector {
    pub fn n(&self) -> usize {
        self.theta_hat.len()
    }
}

/// Array noise constant: 6 p_m / (kappa^2 n_s n_a (n_a^2 - 1)).
pub fn beta_const(arr: &ArrayParams) -> f64 {
    let n_a = arr.n_a as f64;
    let n_s = arr.n_s as f64;
    6.0 * arr.p_m / (arr.kappa * arr.kappa * n_s * n_a * (n_a * n_a - 1.0))
}

/// Bearing-error variance in rad^2 for one sensor receiving linear-scale
/// power `psi` with array orientation error `orientation_error`.
pub fn variance(
    model: DoaModel,
    arr: &ArrayParams,
    psi: f64,
    orientation_error: f64,
) -> Result<f64> {
    if orientation_error.abs() >= PI / 2.0 {
        return Err(Error::BroadsideSingularity { orientation_error });
    }
    if !(psi.is_finite() && psi > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "received power must be positive, got {psi}"
        )));
    }
    let beta = beta_const(arr);
    let cos_sq = orientation_error.cos().powi(2);
    let v = match model {
        DoaModel::OptimalCrb => beta / (psi * cos_sq),
        DoaModel::Music => {
            let shift = arr.p_m / arr.n_a as f64;
            beta * (psi + shift) / (psi * psi * cos_sq)
        }
    };
    Ok(v)
}

/// Draws one bearing estimate per sensor: the true bearing plus independent
/// zero-mean Gaussian noise whose variance follows the selected model and the
/// sensor's current received power.
pub fn sample_doa<R: Rng + ?Sized>(
    model: DoaModel,
    arr: &ArrayParams,
    geom: &GeometryCache,
    rss: &RssVector,
    rng: &mut R,
) -> Result<DoaVector> {
    let n = geom.n();
    if rss.n() != n {
        return Err(Error::InvalidParameter(format!(
            "rss length {} does not match geometry length {n}",
            rss.n()
        )));
    }
    let mut theta_hat = Vec::with_capacity(n);
    let mut sigma2 = Vec::with_capacity(n);
    for i in 0..n {
        let v = variance(model, arr, rss.psi[i], geom.orientation_error[i])?;
        let z: f64 = rng.sample(StandardNormal);
        theta_hat.push(geom.bearing[i] + v.sqrt() * z);
        sigma2.push(v);
    }
    Ok(DoaVector { theta_hat, sigma2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_rss, ChannelParams, ShadowingSampler};
    use crate::scenario::{compute_geometry, Point2, Scenario, SensorNode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn test_array_validation() {
        assert!(ArrayParams::default().validate().is_ok());
        assert!(ArrayParams { n_s: 0, ..Default::default() }.validate().is_err());
        assert!(ArrayParams { n_a: 1, ..Default::default() }.validate().is_err());
        assert!(ArrayParams { kappa: 0.0, ..Default::default() }.validate().is_err());
        assert!(ArrayParams { p_m: -1e-11, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn test_beta_const_reference_value() {
        let beta = beta_const(&ArrayParams::default());
        assert!(
            (beta - 2.0264e-14).abs() / 2.0264e-14 < 1e-3,
            "default array constant, got {beta}"
        );
    }

    #[test]
    fn test_beta_const_scalings() {
        let base = beta_const(&ArrayParams::default());
        let doubled = beta_const(&ArrayParams { n_s: 100, ..Default::default() });
        assert!((doubled - base / 2.0).abs() / base < 1e-12, "doubling samples halves beta");
        let three = beta_const(&ArrayParams { n_a: 3, ..Default::default() });
        assert!((three - base / 4.0).abs() / base < 1e-12, "third antenna shrinks beta 4x");
    }

    #[test]
    fn test_variance_reference_value() {
        let arr = ArrayParams::default();
        let v = variance(DoaModel::OptimalCrb, &arr, 1e-8, 0.0).unwrap();
        assert!((v - 2.0264e-6).abs() / 2.0264e-6 < 1e-3, "got {v}");
    }

    #[test]
    fn test_variance_music_inflation_ratio() {
        let arr = ArrayParams::default();
        for psi in [1e-11, 1e-9, 1e-7] {
            let opt = variance(DoaModel::OptimalCrb, &arr, psi, 0.2).unwrap();
            let music = variance(DoaModel::Music, &arr, psi, 0.2).unwrap();
            let expected = 1.0 + arr.p_m / (arr.n_a as f64 * psi);
            assert!(
                (music / opt - expected).abs() < 1e-12,
                "inflation ratio at psi {psi}"
            );
            assert!(music > opt, "MUSIC variance strictly dominates");
        }
    }

    #[test]
    fn test_variance_orientation_dependence() {
        let arr = ArrayParams::default();
        let at_zero = variance(DoaModel::OptimalCrb, &arr, 1e-8, 0.0).unwrap();
        let at_third = variance(DoaModel::OptimalCrb, &arr, 1e-8, PI / 3.0).unwrap();
        assert!((at_third / at_zero - 4.0).abs() < 1e-12, "cos^2 factor at pi/3");
        let near_broadside = variance(DoaModel::OptimalCrb, &arr, 1e-8, PI / 2.0 - 1e-6).unwrap();
        assert!(near_broadside / at_zero > 1e10, "variance diverges toward broadside");
        let err = variance(DoaModel::OptimalCrb, &arr, 1e-8, PI / 2.0).unwrap_err();
        assert!(err.to_string().contains("broadside singularity"), "got {err}");
    }

    #[test]
    fn test_variance_monotone_in_snr_and_array_size() {
        let arr = ArrayParams::default();
        for model in [DoaModel::OptimalCrb, DoaModel::Music] {
            let lo = variance(model, &arr, 1e-10, 0.1).unwrap();
            let hi = variance(model, &arr, 1e-8, 0.1).unwrap();
            assert!(hi < lo, "variance decreasing in received power");
            let more_samples =
                variance(model, &ArrayParams { n_s: 100, ..arr }, 1e-10, 0.1).unwrap();
            assert!(more_samples < lo, "variance decreasing in n_s");
            let more_antennas =
                variance(model, &ArrayParams { n_a: 4, ..arr }, 1e-10, 0.1).unwrap();
            assert!(more_antennas < lo, "variance decreasing in n_a");
        }
    }

    #[test]
    fn test_sample_doa_zero_noise_limit() {
        let sc = Scenario::new(
            Point2::new(0.0, 0.0),
            vec![SensorNode { position: Point2::new(-80.0, 35.0), array_orientation: 0.3 }],
        )
        .unwrap();
        let geom = compute_geometry(&sc).unwrap();
        let rss = RssVector::from_phi(vec![-60.0]);
        let arr = ArrayParams { p_m: 1e-300, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let doa = sample_doa(DoaModel::OptimalCrb, &arr, &geom, &rss, &mut rng).unwrap();
        assert!(
            (doa.theta_hat[0] - geom.bearing[0]).abs() < 1e-9,
            "vanishing noise power pins the estimate to the true bearing"
        );
    }

    #[test]
    fn test_sample_doa_variance_matches_model() {
        let sc = Scenario::new(
            Point2::new(0.0, 0.0),
            vec![SensorNode { position: Point2::new(100.0, 0.0), array_orientation: PI }],
        )
        .unwrap();
        let geom = compute_geometry(&sc).unwrap();
        let rss = RssVector::from_phi(vec![-80.0]);
        let arr = ArrayParams::default();
        let expected = variance(DoaModel::Music, &arr, rss.psi[0], 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let trials = 100_000;
        let mut sum_sq = 0.0;
        for _ in 0..trials {
            let doa = sample_doa(DoaModel::Music, &arr, &geom, &rss, &mut rng).unwrap();
            let e = doa.theta_hat[0] - geom.bearing[0];
            sum_sq += e * e;
        }
        let sample_var = sum_sq / trials as f64;
        assert!(
            (sample_var - expected).abs() / expected < 0.02,
            "sample variance {sample_var} vs model {expected}"
        );
    }

    #[test]
    fn test_sample_doa_independent_across_sensors_under_correlated_shadowing() {
        let ch = ChannelParams { x_c: 30.0, ..Default::default() };
        let sc = Scenario::new(
            Point2::new(0.0, 0.0),
            vec![
                SensorNode { position: Point2::new(-70.0, 0.0), array_orientation: 0.0 },
                SensorNode { position: Point2::new(-70.0, 10.0), array_orientation: 0.0 },
            ],
        )
        .unwrap();
        let geom = compute_geometry(&sc).unwrap();
        let sampler = ShadowingSampler::new(&ch, &sc).unwrap();
        let arr = ArrayParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let trials = 100_000;
        let mut sums = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..trials {
            let rss = sample_rss(&ch, &geom, &sampler, &mut rng);
            let doa = sample_doa(DoaModel::OptimalCrb, &arr, &geom, &rss, &mut rng).unwrap();
            let a = (doa.theta_hat[0] - geom.bearing[0]) / doa.sigma2[0].sqrt();
            let b = (doa.theta_hat[1] - geom.bearing[1]) / doa.sigma2[1].sqrt();
            sums.0 += a;
            sums.1 += b;
            sums.2 += a * a;
            sums.3 += b * b;
            sums.4 += a * b;
        }
        let t = trials as f64;
        let (ma, mb) = (sums.0 / t, sums.1 / t);
        let corr = (sums.4 / t - ma * mb)
            / ((sums.2 / t - ma * ma).sqrt() * (sums.3 / t - mb * mb).sqrt());
        assert!(
            corr.abs() < 0.02,
            "bearing noises should stay independent under shadowing correlation, r = {corr}"
        );
    }
}
