/// `√(2n+1) P_n(x)`: the degree-`n` Legendre polynomial normalised so that
/// `∫ Φ_m Φ_n dx / 2 = δ_mn` on `[-1, 1]`.
pub fn legendre_orthonormal(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return 1.0;
    }
    let mut cur = x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    ((2 * n + 1) as f64).sqrt() * cur
}

/// Fills `out[n]` with the orthonormal Legendre values for `n = 0..out.len()`.
pub fn legendre_orthonormal_all(x: f64, out: &mut [f64]) {
    let len = out.len();
    if len == 0 {
        return;
    }
    let mut prev = 1.0;
    out[0] = 1.0;
    if len == 1 {
        return;
    }
    let mut cur = x;
    out[1] = 3f64.sqrt() * x;
    for n in 1..len - 1 {
        let k = n as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        out[n + 1] = ((2 * n + 3) as f64).sqrt() * cur;
    }
}

/// Values and first derivatives of the orthonormal Legendre polynomials
/// `0..values.len()` at `x`.
pub fn legendre_orthonormal_with_derivative(x: f64, values: &mut [f64], derivs: &mut [f64]) {
    let len = values.len();
    debug_assert_eq!(len, derivs.len());
    if len == 0 {
        return;
    }
    // P_n and P_n' from the standard recurrences, scaled at the end.
    let (mut p_prev, mut p_cur) = (0.0, 1.0);
    let (mut d_prev, mut d_cur) = (0.0, 0.0);
    for n in 0..len {
        let scale = ((2 * n + 1) as f64).sqrt();
        values[n] = scale * p_cur;
        derivs[n] = scale * d_cur;
        let k = n as f64;
        let p_next = ((2.0 * k + 1.0) * x * p_cur - k * p_prev) / (k + 1.0);
        // P'_{n+1} = P'_{n-1} + (2n+1) P_n
        let d_next = d_prev + (2.0 * k + 1.0) * p_cur;
        p_prev = p_cur;
        p_cur = p_next;
        d_prev = d_cur;
        d_cur = d_next;
    }
}
