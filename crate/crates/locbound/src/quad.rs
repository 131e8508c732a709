use nalgebra::DMatrix;
use std::sync::OnceLock;

// Gauss-Hermite rules for the physicists' weight exp(-x^2):
// integral f(x) exp(-x^2) dx is approximated by sum w_i f(x_i).

static RULE_40: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
static RULE_80: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
static RULE_160: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();

/// Returns cached (nodes, weights) of the Gauss-Hermite rule with the given
/// number of nodes. Only the orders used by the bound computations are
/// cached; other orders are built on the fly.
pub(crate) fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    match order {
        40 => RULE_40.get_or_init(|| build_rule(40)).clone(),
        80 => RULE_80.get_or_init(|| build_rule(80)).clone(),
        160 => RULE_160.get_or_init(|| build_rule(160)).clone(),
        _ => build_rule(order),
    }
}

// --- private helpers ---

// Golub-Welsch: eigenvalues of the symmetric tridiagonal Jacobi matrix give
// the nodes; squared first eigenvector components scaled by sqrt(pi) give the
// weights.
fn build_rule(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let mut jacobi = DMatrix::zeros(order, order);
    for k in 1..order {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eigen = jacobi.symmetric_eigen();
    let total = std::f64::consts::PI.sqrt();
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let node = eigen.eigenvalues[i];
            let first = eigen.eigenvectors[(0, i)];
            (node, total * first * first)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_rule_integrates_gaussian_moments() {
        for order in [8, 40, 80] {
            let (x, w) = gauss_hermite(order);
            assert_eq!(x.len(), order);
            let sqrt_pi = std::f64::consts::PI.sqrt();
            let m0: f64 = w.iter().sum();
            let m1: f64 = x.iter().zip(&w).map(|(xi, wi)| xi * wi).sum();
            let m2: f64 = x.iter().zip(&w).map(|(xi, wi)| xi * xi * wi).sum();
            let m4: f64 = x.iter().zip(&w).map(|(xi, wi)| xi.powi(4) * wi).sum();
            assert!((m0 - sqrt_pi).abs() < 1e-12 * sqrt_pi, "order {order} zeroth moment");
            assert!(m1.abs() < 1e-12, "order {order} odd moment");
            assert!((m2 - sqrt_pi / 2.0).abs() < 1e-11, "order {order} second moment");
            assert!((m4 - 0.75 * sqrt_pi).abs() < 1e-10, "order {order} fourth moment");
        }
    }

    #[test]
    fn test_rule_reproduces_lognormal_mean() {
        let (x, w) = gauss_hermite(40);
        let sigma = 1.3;
        let value: f64 = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi * (std::f64::consts::SQRT_2 * sigma * xi).exp())
            .sum::<f64>()
            / std::f64::consts::PI.sqrt();
        let expected = (sigma * sigma / 2.0).exp();
        assert!(
            (value - expected).abs() / expected < 1e-10,
            "E[exp(sigma Z)] via quadrature, got {value} vs {expected}"
        );
    }

    #[test]
    fn test_nodes_sorted_and_symmetric() {
        let (x, w) = gauss_hermite(40);
        for i in 1..x.len() {
            assert!(x[i] > x[i - 1], "nodes must be strictly increasing");
        }
        for i in 0..x.len() {
            let j = x.len() - 1 - i;
            assert!((x[i] + x[j]).abs() < 1e-10, "nodes symmetric about zero");
            assert!((w[i] - w[j]).abs() < 1e-12, "weights symmetric about zero");
            assert!(w[i] > 0.0, "weights positive");
        }
    }
}
