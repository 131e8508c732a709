use crate::error::{Error, Result};
use rand::Rng;
use std::f64::consts::PI;

/// A point in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Point2 {
        Point2 { x, y }
    }

    pub fn distance_to(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A cooperating receiver: its position and the absolute orientation of its
/// antenna array boresight, in radians within [-pi, pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorNode {
    pub position: Point2,
    pub array_orientation: f64,
}

/// Transmitter location plus the sensor network observing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub pu: Point2,
    pub sensors: Vec<SensorNode>,
}

impl Scenario {
    /// Builds a scenario, rejecting empty networks, non-finite coordinates,
    /// and sensors placed exactly on the transmitter.
    pub fn new(pu: Point2, sensors: Vec<SensorNode>) -> Result<Scenario> {
        if sensors.is_empty() {
            return Err(Error::InvalidParameter("scenario needs at least one sensor".into()));
        }
        if !pu.x.is_finite() || !pu.y.is_finite() {
            return Err(Error::InvalidParameter("transmitter coordinates must be finite".into()));
        }
        for (i, s) in sensors.iter().enumerate() {
            if !s.position.x.is_finite()
                || !s.position.y.is_finite()
                || !s.array_orientation.is_finite()
            {
                return Err(Error::InvalidParameter(format!("sensor {i} has non-finite fields")));
            }
            if s.position.distance_to(pu) == 0.0 {
                return Err(Error::DegenerateGeometry(format!(
                    "sensor {i} coincides with the transmitter"
                )));
            }
        }
        Ok(Scenario { pu, sensors })
    }

    pub fn n(&self) -> usize {
        self.sensors.len()
    }
}

/// Per-sensor geometric quantities derived from a scenario: distance,
/// coordinate offsets (transmitter minus sensor), bearing from sensor to
/// transmitter, and array orientation error.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryCache {
    pub distance: Vec<f64>,
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
    pub bearing: Vec<f64>,
    pub orientation_error: Vec<f64>,
}

impl GeometryCache {
    pub fn n(&self) -> usize {
        self.distance.len()
    }
}

/// Uniform placement model: sensors land uniformly on the annulus between a
/// protective radius `r0` and the coverage radius `r`, with array orientation
/// errors uniform on (-theta_t, theta_t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementDistribution {
    pub r: f64,
    pub r0: f64,
    pub theta_t: f64,
}

impl PlacementDistribution {
    pub fn new(r: f64, r0: f64, theta_t: f64) -> Result<PlacementDistribution> {
        if !(r.is_finite() && r0.is_finite() && theta_t.is_finite()) {
            return Err(Error::InvalidParameter("placement parameters must be finite".into()));
        }
        if !(r0 > 0.0 && r > r0) {
            return Err(Error::InvalidParameter(format!(
                "placement radii must satisfy 0 < r0 < r, got r0 = {r0}, r = {r}"
            )));
        }
        if !(0.0..PI / 2.0).contains(&theta_t) {
            return Err(Error::InvalidParameter(format!(
                "orientation error bound must lie in [0, pi/2), got {theta_t}"
            )));
        }
        Ok(PlacementDistribution { r, r0, theta_t })
    }
}

/// Wraps an angle into [-pi, pi).
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        w = -PI;
    }
    w
}

/// Computes distances, offsets, bearings, and orientation errors for every
/// sensor in the scenario.
pub fn compute_geometry(scenario: &Scenario) -> Result<GeometryCache> {
    let n = scenario.n();
    let mut geom = GeometryCache {
        distance: Vec::with_capacity(n),
        dx: Vec::with_capacity(n),
        dy: Vec::with_capacity(n),
        bearing: Vec::with_capacity(n),
        orientation_error: Vec::with_capacity(n),
    };
    for (i, s) in scenario.sensors.iter().enumerate() {
        let dx = scenario.pu.x - s.position.x;
        let dy = scenario.pu.y - s.position.y;
        let d = dx.hypot(dy);
        if d == 0.0 {
            return Err(Error::DegenerateGeometry(format!(
                "sensor {i} coincides with the transmitter"
            )));
        }
        let bearing = dy.atan2(dx);
        geom.distance.push(d);
        geom.dx.push(dx);
        geom.dy.push(dy);
        geom.bearing.push(bearing);
        geom.orientation_error.push(wrap_angle(bearing - s.array_orientation));
    }
    Ok(geom)
}

/// Draws a scenario with the transmitter at the origin and `n` sensors placed
/// uniformly on the annulus, each with an independent orientation error.
///
/// Radii use the inverse CDF r = sqrt(r0^2 + u (r^2 - r0^2)); bearings are
/// uniform on [0, 2pi); each sensor's array orientation is its bearing minus
/// a U(-theta_t, theta_t) error.
pub fn sample_uniform_placement<R: Rng + ?Sized>(
    dist: &PlacementDistribution,
    n: usize,
    rng: &mut R,
) -> Result<Scenario> {
    if n == 0 {
        return Err(Error::InvalidParameter("placement needs at least one sensor".into()));
    }
    let pu = Point2::new(0.0, 0.0);
    let mut sensors = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen();
        let radius = (dist.r0 * dist.r0 + u * (dist.r * dist.r - dist.r0 * dist.r0)).sqrt();
        let bearing = rng.gen::<f64>() * 2.0 * PI;
        let tilde = if dist.theta_t > 0.0 {
            (rng.gen::<f64>() * 2.0 - 1.0) * dist.theta_t
        } else {
            0.0
        };
        let position = Point2::new(pu.x - radius * bearing.cos(), pu.y - radius * bearing.sin());
        sensors.push(SensorNode {
            position,
            array_orientation: wrap_angle(bearing - tilde),
        });
    }
    Scenario::new(pu, sensors)
}

/// Draws a reproducible scenario from a dedicated generator stream that is
/// independent of the placement streams used by ensembles and sweeps.
pub fn generate_scenario(
    dist: &PlacementDistribution,
    n: usize,
    master_seed: u64,
) -> Result<Scenario> {
    use rand::SeedableRng;
    let seed = crate::seed::stream_seed(master_seed, crate::seed::SALT_SCENARIO, &[]);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    sample_uniform_placement(dist, n, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn node(x: f64, y: f64, orientation: f64) -> SensorNode {
        SensorNode { position: Point2::new(x, y), array_orientation: orientation }
    }

    #[test]
    fn test_scenario_rejects_empty_and_coincident() {
        assert!(Scenario::new(Point2::new(0.0, 0.0), vec![]).is_err(), "empty network");
        let err = Scenario::new(Point2::new(1.0, 2.0), vec![node(1.0, 2.0, 0.0)]).unwrap_err();
        assert!(
            err.to_string().contains("degenerate geometry"),
            "coincident sensor should be degenerate, got {err}"
        );
    }

    #[test]
    fn test_wrap_angle_range_and_fixed_points() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert!((wrap_angle(3.0 * PI) - (-PI)).abs() < 1e-12, "3pi wraps to -pi");
        assert!((wrap_angle(-PI) - (-PI)).abs() < 1e-12, "-pi is a fixed point");
        assert!(wrap_angle(PI) < PI, "pi maps into the half-open interval");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let a = (rng.gen::<f64>() - 0.5) * 100.0;
            let w = wrap_angle(a);
            assert!((-PI..PI).contains(&w), "wrap({a}) = {w} out of range");
            let back = (a - w) / (2.0 * PI);
            assert!(
                (back - back.round()).abs() < 1e-9,
                "wrap({a}) = {w} differs by a non-multiple of 2pi"
            );
        }
    }

    #[test]
    fn test_geometry_sensor_south_of_pu() {
        let sc = Scenario::new(Point2::new(0.0, 0.0), vec![node(0.0, -100.0, 0.0)]).unwrap();
        let g = compute_geometry(&sc).unwrap();
        assert!((g.distance[0] - 100.0).abs() < 1e-12);
        assert!((g.bearing[0] - PI / 2.0).abs() < 1e-12, "due-north bearing is pi/2");
        assert!((g.orientation_error[0] - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn test_geometry_sensor_west_of_pu() {
        let sc = Scenario::new(Point2::new(0.0, 0.0), vec![node(-100.0, 0.0, 0.0)]).unwrap();
        let g = compute_geometry(&sc).unwrap();
        assert!((g.bearing[0] - 0.0).abs() < 1e-12, "due-east bearing is 0");
    }

    #[test]
    fn test_geometry_offset_triangle() {
        let sc = Scenario::new(Point2::new(10.0, 20.0), vec![node(40.0, -20.0, 0.0)]).unwrap();
        let g = compute_geometry(&sc).unwrap();
        assert!((g.distance[0] - 50.0).abs() < 1e-12, "3-4-5 triangle distance");
        assert!((g.dx[0] - (-30.0)).abs() < 1e-12);
        assert!((g.dy[0] - 40.0).abs() < 1e-12);
        let expected = 40.0_f64.atan2(-30.0);
        assert!((g.bearing[0] - expected).abs() < 1e-12, "bearing {} vs {}", g.bearing[0], expected);
        assert!((expected - 2.214297).abs() < 1e-6);
    }

    #[test]
    fn test_geometry_reconstructs_offsets_from_polar_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dist = PlacementDistribution::new(150.0, 5.0, PI / 3.0).unwrap();
        let sc = sample_uniform_placement(&dist, 64, &mut rng).unwrap();
        let g = compute_geometry(&sc).unwrap();
        for i in 0..g.n() {
            let (d, th) = (g.distance[i], g.bearing[i]);
            assert!((g.dx[i] - d * th.cos()).abs() < 1e-12 * d.max(1.0));
            assert!((g.dy[i] - d * th.sin()).abs() < 1e-12 * d.max(1.0));
        }
    }

    #[test]
    fn test_placement_distribution_validation() {
        assert!(PlacementDistribution::new(150.0, 5.0, PI / 3.0).is_ok());
        assert!(PlacementDistribution::new(5.0, 150.0, 0.1).is_err(), "r0 > r rejected");
        assert!(PlacementDistribution::new(150.0, 0.0, 0.1).is_err(), "r0 = 0 rejected");
        assert!(PlacementDistribution::new(150.0, 5.0, PI / 2.0).is_err(), "theta_t = pi/2 rejected");
        assert!(PlacementDistribution::new(150.0, 5.0, -0.1).is_err(), "negative theta_t rejected");
    }

    #[test]
    fn test_placement_radii_within_annulus_and_mean_square() {
        let dist = PlacementDistribution::new(150.0, 5.0, PI / 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 10_000;
        let sc = sample_uniform_placement(&dist, n, &mut rng).unwrap();
        let g = compute_geometry(&sc).unwrap();
        let mut sum_sq = 0.0;
        for &d in &g.distance {
            assert!(d >= dist.r0 - 1e-9 && d <= dist.r + 1e-9, "radius {d} outside annulus");
            sum_sq += d * d;
        }
        let mean_sq = sum_sq / n as f64;
        let expected = (dist.r * dist.r + dist.r0 * dist.r0) / 2.0;
        assert!(
            (mean_sq - expected).abs() / expected < 0.02,
            "mean square radius {mean_sq} vs {expected}"
        );
    }

    #[test]
    fn test_placement_orientation_errors_bounded_and_centered() {
        let theta_t = PI / 3.0;
        let dist = PlacementDistribution::new(150.0, 5.0, theta_t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sc = sample_uniform_placement(&dist, 20_000, &mut rng).unwrap();
        let g = compute_geometry(&sc).unwrap();
        let mut mean = 0.0;
        for &t in &g.orientation_error {
            assert!(t.abs() < PI / 2.0, "orientation error {t} reaches broadside");
            assert!(t.abs() <= theta_t + 1e-12, "orientation error {t} exceeds theta_t");
            mean += t;
        }
        mean /= g.n() as f64;
        assert!(mean.abs() < 0.02, "orientation errors should be centered, mean {mean}");
    }

    #[test]
    fn test_placement_degenerate_annulus_pins_radius() {
        let dist = PlacementDistribution::new(100.0, 99.9, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sc = sample_uniform_placement(&dist, 500, &mut rng).unwrap();
        let g = compute_geometry(&sc).unwrap();
        for &d in &g.distance {
            assert!((d - 100.0).abs() < 0.2, "radius {d} should hug the thin annulus");
        }
    }

    #[test]
    fn test_placement_radius_cdf_kolmogorov_smirnov() {
        let dist = PlacementDistribution::new(150.0, 5.0, PI / 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12345);
        let n = 100_000;
        let sc = sample_uniform_placement(&dist, n, &mut rng).unwrap();
        let g = compute_geometry(&sc).unwrap();
        let mut radii = g.distance.clone();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let span = dist.r * dist.r - dist.r0 * dist.r0;
        let mut d_stat: f64 = 0.0;
        for (i, &r) in radii.iter().enumerate() {
            let cdf = (r * r - dist.r0 * dist.r0) / span;
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d_stat = d_stat.max((cdf - lo).abs()).max((hi - cdf).abs());
        }
        let critical = 1.63 / (n as f64).sqrt();
        assert!(d_stat < critical, "KS statistic {d_stat} exceeds alpha=0.01 critical {critical}");
    }

    #[test]
    fn test_placement_reproducible_from_seed() {
        let dist = PlacementDistribution::new(150.0, 5.0, PI / 3.0).unwrap();
        let a = sample_uniform_placement(&dist, 10, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_uniform_placement(&dist, 10, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b, "same seed must give the same placement");
    }
}
