use crate::basis::MultiIndexSet;

/// `E_{p0} = Σ_{|j| ≤ p0} û_j²` for one scalar component.
pub fn truncated_energy(coeffs: &[f64], set: &MultiIndexSet, p0: usize) -> f64 {
    let n0 = set.truncated_len(p0.min(set.degree()));
    coeffs.iter().take(n0).map(|c| c * c).sum()
}

/// Projected right-hand sides of the full and reduced systems.
///
/// Every array is basis-major with `s` components per basis function:
/// entry `k * s + c` belongs to multi-index `k` and state component `c`.
/// Only the first `n0 = |{|j| ≤ p0}|` basis functions are read.
#[derive(Debug, Clone, Copy)]
pub struct ProjectedRates<'a> {
    /// Number of state components `s`.
    pub components: usize,
    /// `û`, the full-system coefficients.
    pub full_coeffs: &'a [f64],
    /// `⟨L(Σ_{|i|≤p} û_i Φ_i), Φ_j⟩`.
    pub full_rates: &'a [f64],
    /// `ũ`, the reduced-system coefficients.
    pub reduced_coeffs: &'a [f64],
    /// `⟨L(Σ_{|i|≤p0} ũ_i Φ_i), Φ_j⟩`.
    pub reduced_rates: &'a [f64],
}

/// Indicator values of one element.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorValues {
    /// Signed `Q` per state component.
    pub q: Vec<f64>,
    /// `𝐐 = Σ_c w_c |Q_c|`: summed over state variables, integrated over space.
    pub q_total: f64,
    /// Directional criterion `s¹_i` per random dimension.
    pub s1: Vec<f64>,
    /// Directional criterion `s²_i` per random dimension.
    pub s2: Vec<f64>,
}

/// Evaluates `Q`, `𝐐`, `s¹` and `s²` from projected rates.
///
/// `dof_weights` has one quadrature weight per spatial degree of freedom;
/// component `c` uses `dof_weights[c % n_dof]`. `p0 = p` is accepted here and
/// gives `Q = 0` whenever the reduced inputs equal the full ones.
pub fn energy_transfer(
    rates: ProjectedRates<'_>,
    set: &MultiIndexSet,
    p0: usize,
    dof_weights: &[f64],
) -> IndicatorValues {
    let n0 = set.truncated_len(p0);
    let n_dof = dof_weights.len();
    let s = rates.components;

    let term = |k: usize, c: usize| {
        let i = k * s + c;
        2.0 * rates.full_rates[i] * rates.full_coeffs[i] - 2.0 * rates.reduced_rates[i] * rates.reduced_coeffs[i]
    };
    let weight = |c: usize| dof_weights[c % n_dof];

    let mut q = vec![0.0; s];
    for k in 0..n0 {
        for (c, qc) in q.iter_mut().enumerate() {
            *qc += term(k, c);
        }
    }
    let q_total = q.iter().enumerate().map(|(c, v)| weight(c) * v.abs()).sum();

    let d = set.dim();
    let mut s1 = vec![0.0; d];
    let mut s2 = vec![0.0; d];
    for i in 0..d {
        if let Some(k) = set.univariate(i, p0) {
            s1[i] = (0..s).map(|c| weight(c) * term(k, c).abs()).sum();
        }
        s2[i] = (0..s)
            .map(|c| {
                let sum: f64 = (1..=p0).filter_map(|n| set.univariate(i, n)).map(|k| term(k, c)).sum();
                weight(c) * sum.abs()
            })
            .sum();
    }
    IndicatorValues { q, q_total, s1, s2 }
}
