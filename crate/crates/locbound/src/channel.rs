use crate::error::{Error, Result};
use crate::scenario::{GeometryCache, Scenario};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Propagation and shadowing parameters of the log-distance channel.
///
/// `p_t` is the transmit power in watts, `c0` the reference-distance gain,
/// `gamma` the path-loss exponent, `sigma_s` the shadowing standard deviation
/// in dB, and `x_c` the shadowing correlation distance in meters (0 means
/// independent shadowing across sensors).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub p_t: f64,
    pub c0: f64,
    pub gamma: f64,
    pub sigma_s: f64,
    pub x_c: f64,
}

impl Default for ChannelParams {
    fn default() -> ChannelParams {
        ChannelParams { p_t: 0.1, c0: 1.0, gamma: 5.0, sigma_s: 6.0, x_c: 0.0 }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            (self.p_t, "p_t"),
            (self.c0, "c0"),
            (self.gamma, "gamma"),
            (self.sigma_s, "sigma_s"),
            (self.x_c, "x_c"),
        ];
        for (v, name) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("channel {name} must be finite")));
            }
        }
        if self.p_t <= 0.0 || self.c0 <= 0.0 || self.gamma <= 0.0 {
            return Err(Error::InvalidParameter(
                "channel p_t, c0, gamma must be positive".into(),
            ));
        }
        if self.sigma_s < 0.0 || self.x_c < 0.0 {
            return Err(Error::InvalidParameter(
                "channel sigma_s and x_c must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Converts a power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Converts a power in watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Mean received signal strength in dBm at distance `d` meters.
pub fn mean_rss_dbm(ch: &ChannelParams, d: f64) -> f64 {
    10.0 * (1000.0 * ch.p_t * ch.c0).log10() - 10.0 * ch.gamma * d.log10()
}

/// One draw of the received signal strength at every sensor, as dBm values
/// (`phi`) and the same values converted to watts (`psi`).
#[derive(Debug, Clone, PartialEq)]
pub struct RssVector {
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
}

impl RssVector {
    pub fn from_phi(phi: Vec<f64>) -> RssVector {
        let psi = phi.iter().map(|&p| dbm_to_watts(p)).collect();
        RssVector { phi, psi }
    }

    pub fn n(&self) -> usize {
        self.phi.len()
    }
}

/// Shadowing covariance across sensors: sigma_s^2 on the diagonal, with
/// off-diagonal entries decaying as exp(-distance / x_c). With x_c = 0 the
/// matrix is diagonal (independent shadowing).
pub fn shadowing_covariance(ch: &ChannelParams, scenario: &Scenario) -> DMatrix<f64> {
    let n = scenario.n();
    let var = ch.sigma_s * ch.sigma_s;
    let mut cov = DMatrix::zeros(n, n);
    for i in 0..n {
        cov[(i, i)] = var;
        for j in (i + 1)..n {
            let entry = if ch.x_c > 0.0 {
                let d = scenario.sensors[i].position.distance_to(scenario.sensors[j].position);
                var * (-d / ch.x_c).exp()
            } else {
                0.0
            };
            cov[(i, j)] = entry;
            cov[(j, i)] = entry;
        }
    }
    cov
}

/// Draws correlated shadowing vectors through a cached Cholesky factor of the
/// shadowing covariance.
#[derive(Debug, Clone)]
pub struct ShadowingSampler {
    factor: DMatrix<f64>,
}

impl ShadowingSampler {
    /// Factors the shadowing covariance once. If the covariance is not
    /// numerically positive definite, a diagonal jitter of 1e-10 * sigma_s^2
    /// is added and the factorization retried once.
    pub fn new(ch: &ChannelParams, scenario: &Scenario) -> Result<ShadowingSampler> {
        ch.validate()?;
        let n = scenario.n();
        if ch.sigma_s == 0.0 {
            return Ok(ShadowingSampler { factor: DMatrix::zeros(n, n) });
        }
        let cov = shadowing_covariance(ch, scenario);
        if let Some(chol) = cov.clone().cholesky() {
            return Ok(ShadowingSampler { factor: chol.l() });
        }
        let jitter = 1e-10 * ch.sigma_s * ch.sigma_s;
        let mut retry = cov;
        for i in 0..n {
            retry[(i, i)] += jitter;
        }
        match retry.cholesky() {
            Some(chol) => Ok(ShadowingSampler { factor: chol.l() }),
            None => Err(Error::CovarianceNotPsd(
                "shadowing covariance has no Cholesky factor after jitter retry".into(),
            )),
        }
    }

    /// Draws one zero-mean shadowing vector in dB.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.factor.nrows();
        let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        self.apply(&z)
    }

    /// Maps a vector of independent standard normal draws through the
    /// Cholesky factor. Exposed so callers can reuse one set of draws across
    /// several channel settings.
    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        let n = self.factor.nrows();
        let mut s = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..=i {
                acc += self.factor[(i, j)] * z[j];
            }
            s[i] = acc;
        }
        s
    }

    pub fn n(&self) -> usize {
        self.factor.nrows()
    }
}

/// Draws one RSS measurement vector: the mean path-loss profile plus one
/// correlated shadowing realization.
pub fn sample_rss<R: Rng + ?Sized>(
    ch: &ChannelParams,
    geom: &GeometryCache,
    sampler: &ShadowingSampler,
    rng: &mut R,
) -> RssVector {
    let s = sampler.sample(rng);
    let phi: Vec<f64> =
        geom.distance.iter().zip(&s).map(|(&d, &sn)| mean_rss_dbm(ch, d) + sn).collect();
    RssVector::from_phi(phi)
}
