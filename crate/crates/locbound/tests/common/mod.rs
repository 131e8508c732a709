// Shared helpers for the integration suites: a Monte Carlo Hessian oracle
// for Fisher matrices and a reader for the tables the sweep harness writes.

use std::path::Path;

use locbound::channel::{
    mean_rss_dbm, sample_rss, shadowing_covariance, RssVector, ShadowingSampler,
};
use locbound::doa::{sample_doa, variance, DoaVector};
use locbound::scenario::{compute_geometry, wrap_angle, GeometryCache};
use locbound::{ArrayParams, ChannelParams, DoaModel, Point2, Scenario};
use nalgebra::{Cholesky, DVector, Dyn, Matrix2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Which measurement family the oracle differentiates.
#[derive(Clone, Copy)]
pub enum OracleKind {
    Rss,
    Doa(DoaModel),
}

/// Monte Carlo estimate of a scenario's location Fisher matrix.
///
/// Draws measurement realizations at the true transmitter location, averages
/// the exact log-density over a nine-point stencil of candidate locations
/// around it, and applies second differences with spacing `step`. Every draw
/// is shared across the stencil.
pub fn monte_carlo_hessian_fim(
    kind: OracleKind,
    ch: &ChannelParams,
    arr: &ArrayParams,
    scenario: &Scenario,
    draws: usize,
    step: f64,
    seed: u64,
) -> Matrix2<f64> {
    let geom0 = compute_geometry(scenario).expect("reference geometry");
    let sampler = ShadowingSampler::new(ch, scenario).expect("shadowing sampler");
    let chol =
        Cholesky::new(shadowing_covariance(ch, scenario)).expect("covariance factorizes");
    let mut geoms = Vec::with_capacity(9);
    for i in -1_i32..=1 {
        for j in -1_i32..=1 {
            let pu = Point2::new(
                scenario.pu.x + step * f64::from(i),
                scenario.pu.y + step * f64::from(j),
            );
            let shifted = Scenario::new(pu, scenario.sensors.clone()).expect("shifted scenario");
            geoms.push(compute_geometry(&shifted).expect("shifted geometry"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean_logp = [0.0_f64; 9];
    for _ in 0..draws {
        let rss = sample_rss(ch, &geom0, &sampler, &mut rng);
        let doa = match kind {
            OracleKind::Rss => None,
            OracleKind::Doa(model) => {
                Some(sample_doa(model, arr, &geom0, &rss, &mut rng).expect("doa draw"))
            }
        };
        for (k, geom) in geoms.iter().enumerate() {
            mean_logp[k] += match (kind, &doa) {
                (OracleKind::Rss, _) => rss_log_density(ch, geom, &rss, &chol),
                (OracleKind::Doa(model), Some(d)) => doa_log_density(model, arr, geom, &rss, d),
                (OracleKind::Doa(_), None) => unreachable!(),
            };
        }
    }
    for v in &mut mean_logp {
        *v /= draws as f64;
    }
    let at = |i: i32, j: i32| mean_logp[((i + 1) * 3 + (j + 1)) as usize];
    let f_xx = -(at(1, 0) - 2.0 * at(0, 0) + at(-1, 0)) / (step * step);
    let f_yy = -(at(0, 1) - 2.0 * at(0, 0) + at(0, -1)) / (step * step);
    let f_xy = -(at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * step * step);
    Matrix2::new(f_xx, f_xy, f_xy, f_yy)
}

/// Relative Frobenius distance of `a` from the reference `b`.
pub fn relative_frobenius(a: &Matrix2<f64>, b: &Matrix2<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

/// One data row of a sweep table.
pub struct TableRow {
    pub sweep_value: f64,
    pub curve: String,
    pub rmse_m: f64,
    pub stderr_m: f64,
}

/// Reads the data rows of a sweep table, keeping file order.
pub fn read_table(path: &Path) -> Vec<TableRow> {
    let text = std::fs::read_to_string(path).expect("table exists");
    text.lines()
        .skip(1)
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            TableRow {
                sweep_value: fields[0].parse().expect("numeric sweep value"),
                curve: fields[1].to_string(),
                rmse_m: fields[2].parse().expect("numeric rmse"),
                stderr_m: fields[3].parse().expect("numeric stderr"),
            }
        })
        .collect()
}

/// The (sweep value, rmse, stderr) triples of one curve, in sweep order.
pub fn curve_points(rows: &[TableRow], curve: &str) -> Vec<(f64, f64, f64)> {
    rows.iter()
        .filter(|r| r.curve == curve)
        .map(|r| (r.sweep_value, r.rmse_m, r.stderr_m))
        .collect()
}

// --- private helpers ---

fn rss_log_density(
    ch: &ChannelParams,
    geom: &GeometryCache,
    rss: &RssVector,
    chol: &Cholesky<f64, Dyn>,
) -> f64 {
    let r = DVector::from_fn(geom.n(), |i, _| rss.phi[i] - mean_rss_dbm(ch, geom.distance[i]));
    let solved = chol.solve(&r);
    -0.5 * r.dot(&solved)
}

fn doa_log_density(
    model: DoaModel,
    arr: &ArrayParams,
    geom: &GeometryCache,
    rss: &RssVector,
    doa: &DoaVector,
) -> f64 {
    let mut total = 0.0;
    for i in 0..geom.n() {
        let v = variance(model, arr, rss.psi[i], geom.orientation_error[i])
            .expect("stencil stays away from broadside");
        let e = wrap_angle(doa.theta_hat[i] - geom.bearing[i]);
        total -= 0.5 * (v.ln() + e * e / v);
    }
    total
}
