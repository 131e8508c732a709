use crate::channel::ChannelParams;
use crate::doa::ArrayParams;
use crate::error::{Error, Result};
use crate::fim::{Constants, EPSILON};
use crate::scenario::PlacementDistribution;

/// Parameter bundle for the uniform-placement asymptotics. The closed forms
/// assume independent shadowing; a nonzero correlation distance is ignored
/// (query `correlation_ignored` to surface a warning).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticParams {
    pub dist: PlacementDistribution,
    pub ch: ChannelParams,
    pub arr: ArrayParams,
}

impl AsymptoticParams {
    pub fn correlation_ignored(&self) -> bool {
        self.ch.x_c > 0.0
    }

    pub fn moments(&self, moment: SecondMoment) -> Result<MomentSet> {
        let f_phi = f_phi(&self.dist, &self.ch)?;
        let f_theta_phi = f_theta_phi(&self.dist, &self.ch, &self.arr)?;
        Ok(MomentSet {
            f_phi,
            f_theta_phi,
            e_fn: 2.0 * f_theta_phi,
            e_fn2: e_fn2(&self.dist, &self.ch, &self.arr, moment)?,
        })
    }
}

/// Which convention the fourth-power orientation moment inside the second
/// Frobenius moment uses: the exact value, or a conservative larger
/// coefficient that still yields a valid (weaker) deviation bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondMoment {
    Exact,
    UpperBound,
}

/// The scalar moments the asymptotic bounds are built from, all per-sensor
/// and placement-averaged: `f_phi` and `f_theta_phi` in 1/m^2, `e_fn` the
/// mean per-sensor information weight, `e_fn2` its second moment in 1/m^4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub f_phi: f64,
    pub f_theta_phi: f64,
    pub e_fn: f64,
    pub e_fn2: f64,
}

/// Ceiling node count of a deviation-probability requirement, together with
/// the raw real-valued bound it was rounded from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RequiredNodes {
    pub count: usize,
    pub raw_bound: f64,
}

/// Which measurement family a deviation bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationKind {
    Rss,
    Joint,
}

/// Placement-averaged per-sensor RSS information density:
/// epsilon gamma^2 ln(r/r0) / (sigma_s^2 (r^2 - r0^2)).
pub fn f_phi(dist: &PlacementDistribution, ch: &ChannelParams) -> Result<f64> {
    ch.validate()?;
    if ch.sigma_s == 0.0 {
        return Err(Error::InvalidParameter(
            "asymptotic RSS information needs sigma_s > 0".into(),
        ));
    }
    let span = dist.r * dist.r - dist.r0 * dist.r0;
    Ok(EPSILON * ch.gamma * ch.gamma * (dist.r / dist.r0).ln()
        / (ch.sigma_s * ch.sigma_s * span))
}

/// Placement-averaged per-sensor DoA information density for the optimal
/// bearing estimator, combining the power-weighted and orientation-error
/// terms.
pub fn f_theta_phi(
    dist: &PlacementDistribution,
    ch: &ChannelParams,
    arr: &ArrayParams,
) -> Result<f64> {
    ch.validate()?;
    arr.validate()?;
    let alpha = Constants::new(ch, arr).alpha;
    let span = dist.r * dist.r - dist.r0 * dist.r0;
    let term_orientation =
        2.0 * (dist.r / dist.r0).ln() * (tan_over_theta(dist.theta_t) - 1.0);
    let term_power = -(alpha / (2.0 * ch.gamma))
        * (dist.r.powf(-ch.gamma) - dist.r0.powf(-ch.gamma))
        * (sinc_double(dist.theta_t) + 1.0);
    Ok((term_orientation + term_power) / span)
}

/// Gauss hypergeometric value 2F1(5/2, 1; 7/2; -tan^2 theta_t).
///
/// The negative argument is mapped into [0, 1) by the Pfaff transform
/// 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)), after which the power
/// series converges geometrically with ratio sin^2 theta_t.
pub fn hyp2f1_term(theta_t: f64) -> Result<f64> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta_t) {
        return Err(Error::InvalidParameter(format!(
            "hypergeometric argument needs 0 <= theta_t < pi/2, got {theta_t}"
        )));
    }
    if theta_t == 0.0 {
        return Ok(1.0);
    }
    let w = theta_t.sin().powi(2);
    let prefactor = theta_t.cos().powi(5);
    let (a, b, c) = (2.5, 2.5, 3.5);
    let mut term = 1.0;
    let mut sum = 1.0;
    let max_terms = 200_000;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * w;
        sum += term;
        if term.abs() < 1e-15 * sum.abs() {
            return Ok(prefactor * sum);
        }
    }
    Err(Error::SpecialFunctionFailure(format!(
        "hypergeometric series did not converge in {max_terms} terms at theta_t = {theta_t}"
    )))
}

/// Second moment of the per-sensor joint information weight over random
/// placement, E[f_n^2], in 1/m^4.
pub fn e_fn2(
    dist: &PlacementDistribution,
    ch: &ChannelParams,
    arr: &ArrayParams,
    moment: SecondMoment,
) -> Result<f64> {
    ch.validate()?;
    arr.validate()?;
    let alpha = Constants::new(ch, arr).alpha;
    let theta_t = dist.theta_t;
    let cos4_coefficient = match moment {
        SecondMoment::Exact => 12.0,
        SecondMoment::UpperBound => 36.0,
    };
    let e_cos4 = if theta_t > 0.0 {
        ((4.0 * theta_t).sin() + 8.0 * (2.0 * theta_t).sin() + cos4_coefficient * theta_t)
            / (32.0 * theta_t)
    } else {
        cos4_coefficient / 12.0
    };
    let e_sin2 = 0.5 - sinc_double(theta_t) / 2.0;
    let e_tan4 = if theta_t > 0.0 {
        theta_t.tan().powi(5) / (5.0 * theta_t) * hyp2f1_term(theta_t)?
    } else {
        0.0
    };
    let term_sq = alpha * alpha * radial_inverse_moment(dist, 2.0 * ch.gamma + 4.0) * e_cos4;
    let term_cross = 4.0 * alpha * radial_inverse_moment(dist, ch.gamma + 4.0) * e_sin2;
    let term_tan = 4.0 * radial_inverse_moment(dist, 4.0) * e_tan4;
    Ok(term_sq + term_cross + term_tan)
}

/// RSS-only position-error bound for `n` uniformly placed sensors:
/// sqrt(2 / (n f_phi)).
pub fn asymptotic_rmse_rss(
    dist: &PlacementDistribution,
    ch: &ChannelParams,
    n: usize,
) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter("node count must be at least 1".into()));
    }
    Ok((2.0 / (n as f64 * f_phi(dist, ch)?)).sqrt())
}

/// Joint RSS/DoA position-error bound for `n` uniformly placed sensors:
/// sqrt(2 / (n (f_phi + f_theta_phi))).
pub fn asymptotic_rmse_joint(
    dist: &PlacementDistribution,
    ch: &ChannelParams,
    arr: &ArrayParams,
    n: usize,
) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter("node count must be at least 1".into()));
    }
    let density = f_phi(dist, ch)? + f_theta_phi(dist, ch, arr)?;
    Ok((2.0 / (n as f64 * density)).sqrt())
}

/// Frobenius norm of the placement-averaged per-sensor RSS information
/// matrix, sqrt(2) f_phi.
pub fn mean_fim_norm_rss(dist: &PlacementDistribution, ch: &ChannelParams) -> Result<f64> {
    Ok(std::f64::consts::SQRT_2 * f_phi(dist, ch)?)
}

/// Frobenius norm of the placement-averaged per-sensor joint information
/// matrix, sqrt(2) (f_phi + f_theta_phi).
pub fn mean_fim_norm_joint(
    dist: &PlacementDistribution,
    ch: &ChannelParams,
    arr: &ArrayParams,
) -> Result<f64> {
    Ok(std::f64::consts::SQRT_2 * (f_phi(dist, ch)? + f_theta_phi(dist, ch, arr)?))
}

/// Upper bound on the probability that the normalized Fisher matrix deviates
/// from its placement average by more than `delta0` in Frobenius norm, for
/// `n` sensors. Clamped to [0, 1].
pub fn deviation_bound(
    kind: DeviationKind,
    dist: &PlacementDistribution,
    ch: &ChannelParams,
    arr: &ArrayParams,
    n: usize,
    delta0: f64,
    moment: SecondMoment,
) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter("node count must be at least 1".into()));
    }
    if !(delta0 > 0.0) {
        return Err(Error::InvalidParameter("delta0 must be positive".into()));
    }
    let numerator = match kind {
        DeviationKind::Rss => rss_variance_proxy(dist, ch)?,
        DeviationKind::Joint => joint_variance_proxy(dist, ch, arr, moment)?,
    };
    Ok((numerator / (n as f64 * delta0 * delta0)).clamp(0.0, 1.0))
}

/// Node count guaranteeing, with probability at least 1 - eta, that the
/// normalized RSS Fisher matrix stays within `delta0` of its mean.
pub fn required_n_rss(
    dist: &PlacementDistribution,
    ch: &ChannelParams,
    delta0: f64,
    eta: f64,
) -> Result<RequiredNodes> {
    validate_requirement(delta0, eta)?;
    let raw = rss_variance_proxy(dist, ch)? / (eta * delta0 * delta0);
    Ok(to_required_nodes(raw))
}

/// Node count guaranteeing, with probability at least 1 - eta, that the
/// normalized joint Fisher matrix stays within `delta0` of its mean.
pub fn required_n_joint(
    dist: &PlacementDistribution,
    ch: &ChannelParams,
    arr: &ArrayParams,
    delta0: f64,
    eta: f64,
    moment: SecondMoment,
) -> Result<RequiredNodes> {
    validate_requirement(delta0, eta)?;
    let raw = joint_variance_proxy(dist, ch, arr, moment)? / (eta * delta0 * delta0);
    Ok(to_required_nodes(raw))
}

// --- private helpers ---

// tan(theta)/theta with its theta -> 0 limit.
fn tan_over_theta(theta: f64) -> f64 {
    if theta == 0.0 {
        1.0
    } else {
        theta.tan() / theta
    }
}

// sin(2 theta)/(2 theta) with its theta -> 0 limit.
fn sinc_double(theta: f64) -> f64 {
    if theta == 0.0 {
        1.0
    } else {
        (2.0 * theta).sin() / (2.0 * theta)
    }
}

// E[d^-k] over the annulus density 2 r / (r^2 - r0^2), for k > 2.
fn radial_inverse_moment(dist: &PlacementDistribution, k: f64) -> f64 {
    let span = dist.r * dist.r - dist.r0 * dist.r0;
    2.0 * (dist.r0.powf(2.0 - k) - dist.r.powf(2.0 - k)) / ((k - 2.0) * span)
}

// Frobenius variance proxy of the normalized RSS information over placement.
fn rss_variance_proxy(dist: &PlacementDistribution, ch: &ChannelParams) -> Result<f64> {
    ch.validate()?;
    if ch.sigma_s == 0.0 {
        return Err(Error::InvalidParameter(
            "deviation bound needs sigma_s > 0".into(),
        ));
    }
    let span = dist.r * dist.r - dist.r0 * dist.r0;
    let sigma4 = ch.sigma_s.powi(4);
    let gamma4 = ch.gamma.powi(4);
    let bracket = 1.0 / (2.0 * dist.r * dist.r * dist.r0 * dist.r0)
        - ((dist.r / dist.r0).ln() / span).powi(2);
    Ok(2.0 * EPSILON * EPSILON * gamma4 / sigma4 * bracket)
}

// Frobenius variance proxy of the normalized joint information over
// placement.
fn joint_variance_proxy(
    dist: &PlacementDistribution,
    ch: &ChannelParams,
    arr: &ArrayParams,
    moment: SecondMoment,
) -> Result<f64> {
    let f_phi = f_phi(dist, ch)?;
    let e_fn = 2.0 * f_theta_phi(dist, ch, arr)?;
    let e_fn2 = e_fn2(dist, ch, arr, moment)?;
    let sigma4 = ch.sigma_s.powi(4);
    let gamma4 = ch.gamma.powi(4);
    let leading =
        EPSILON * EPSILON * gamma4 / (sigma4 * dist.r * dist.r * dist.r0 * dist.r0);
    Ok(leading + e_fn2 - 0.5 * (e_fn + 2.0 * f_phi).powi(2))
}

fn validate_requirement(delta0: f64, eta: f64) -> Result<()> {
    if !(delta0 > 0.0 && delta0.is_finite()) {
        return Err(Error::InvalidParameter("delta0 must be positive".into()));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eta must lie in (0, 1], got {eta}"
        )));
    }
    Ok(())
}

fn to_required_nodes(raw: f64) -> RequiredNodes {
    let count = if raw <= 1.0 { 1 } else { raw.ceil() as usize };
    RequiredNodes { count, raw_bound: raw }
}
