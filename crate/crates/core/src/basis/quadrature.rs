use std::f64::consts::PI;

/// Gauss-Legendre rule on `[-1, 1]` with weights normalised to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `E[f]` under the uniform density `1/2` on `[-1, 1]`.
    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Legendre `P_n(x)` and `P_n'(x)`.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let n_f = n as f64;
    let dp = n_f * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// The `r`-point Gauss-Legendre rule, nodes ascending, exact for polynomials
/// of degree `2r - 1` against the density `1/2`.
///
/// # Panics
///
/// Panics if `r == 0`.
pub fn gauss_legendre(r: usize) -> GaussRule {
    assert!(r >= 1, "Gauss-Legendre rule needs at least one node");
    if r == 1 {
        return GaussRule {
            nodes: vec![0.0],
            weights: vec![1.0],
        };
    }
    let mut nodes = vec![0.0; r];
    let mut weights = vec![0.0; r];
    let half = r.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess for the (i+1)-th largest root.
        let mut x = (PI * (i as f64 + 0.75) / (r as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(r, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_and_derivative(r, x);
                dp = d;
                break;
            }
        }
        // weights on [-1,1] sum to 2; halve for the probability density
        let w = 1.0 / ((1.0 - x * x) * dp * dp);
        nodes[r - 1 - i] = x;
        nodes[i] = -x;
        weights[r - 1 - i] = w;
        weights[i] = w;
    }
    if r % 2 == 1 {
        nodes[r / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}
