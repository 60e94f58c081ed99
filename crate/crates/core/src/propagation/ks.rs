use rustfft::num_complex::Complex64;

use crate::models::KuramotoSivashinsky;

/// One step of the integrating-factor scheme: the linear symbol
/// `-4k⁴ + αk²` is integrated exactly, the quadratic term with Heun's
/// method (second order).
pub fn ks_semi_implicit_step(model: &KuramotoSivashinsky, uh: &mut [Complex64], alpha: f64, dt: f64) {
    let n = uh.len();
    // The symbol depends on |k| only.
    let per_k: Vec<f64> = (0..=n / 2)
        .map(|m| (model.linear_symbol(m, alpha) * dt).exp())
        .collect();
    let decay: Vec<f64> = (0..n).map(|m| per_k[model.wavenumber(m).abs() as usize]).collect();
    let n1 = model.nonlinear_term(uh, alpha);
    let predictor: Vec<Complex64> = (0..n).map(|m| (uh[m] + n1[m] * dt) * decay[m]).collect();
    let n2 = model.nonlinear_term(&predictor, alpha);
    for m in 0..n {
        uh[m] = uh[m] * decay[m] + (n1[m] * decay[m] + n2[m]) * (0.5 * dt);
    }
}
