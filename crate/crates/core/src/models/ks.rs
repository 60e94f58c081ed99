use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::models::Model;
use crate::propagation::ks_semi_implicit_step;

/// `u₀(x) = 2.6680 cos x + 0.1979 cos 2x + 0.0094 cos 3x`.
pub fn ks_initial_condition(x: f64) -> f64 {
    2.6680 * x.cos() + 0.1979 * (2.0 * x).cos() + 0.0094 * (3.0 * x).cos()
}

/// Kuramoto-Sivashinsky equation `u_t = -4 u_xxxx - α [u_xx + ½ (u_x)²]` on
/// the periodic interval `[0, 2π)`, discretised pseudo-spectrally on `n`
/// equispaced points. The bifurcation parameter is mapped affinely from
/// `ξ ∈ [-1, 1]` onto `alpha_range`.
#[derive(Clone)]
pub struct KuramotoSivashinsky {
    n: usize,
    pub alpha_range: (f64, f64),
    /// Apply the 2/3 rule to the quadratic term.
    pub dealias: bool,
    /// Drop the quadratic term entirely (linear-growth checks).
    pub nonlinear: bool,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for KuramotoSivashinsky {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KuramotoSivashinsky")
            .field("n", &self.n)
            .field("alpha_range", &self.alpha_range)
            .field("dealias", &self.dealias)
            .field("nonlinear", &self.nonlinear)
            .finish()
    }
}

impl KuramotoSivashinsky {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "periodic grid size must be a power of two ≥ 8, got {n}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            alpha_range: (13.0, 17.0),
            dealias: true,
            nonlinear: true,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.n).map(|j| 2.0 * PI * j as f64 / self.n as f64).collect()
    }

    pub fn alpha(&self, xi: f64) -> f64 {
        let (lo, hi) = self.alpha_range;
        0.5 * (lo + hi) + 0.5 * (hi - lo) * xi
    }

    /// Signed wavenumber of FFT bin `m`; the Nyquist bin maps to zero.
    pub fn wavenumber(&self, m: usize) -> f64 {
        let n = self.n;
        if m < n / 2 {
            m as f64
        } else if m == n / 2 {
            0.0
        } else {
            m as f64 - n as f64
        }
    }

    fn kept(&self, m: usize) -> bool {
        !self.dealias || self.wavenumber(m).abs() <= (self.n / 3) as f64
    }

    /// Symbol `-4k⁴ + αk²` of the linear operator.
    pub fn linear_symbol(&self, m: usize, alpha: f64) -> f64 {
        let k = self.wavenumber(m);
        let k2 = k * k;
        -4.0 * k2 * k2 + alpha * k2
    }

    pub fn to_fourier(&self, u: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    pub fn to_physical(&self, uh: &[Complex64], out: &mut [f64]) {
        let mut buf = uh.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        for (o, c) in out.iter_mut().zip(buf) {
            *o = c.re * scale;
        }
    }

    /// Fourier coefficients of the quadratic term `-(α/2)(u_x)²`.
    pub fn nonlinear_term(&self, uh: &[Complex64], alpha: f64) -> Vec<Complex64> {
        let n = self.n;
        if !self.nonlinear {
            return vec![Complex64::new(0.0, 0.0); n];
        }
        let mut ux: Vec<Complex64> = (0..n)
            .map(|m| {
                if self.kept(m) {
                    Complex64::new(0.0, self.wavenumber(m)) * uh[m]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        self.inverse.process(&mut ux);
        let scale = 1.0 / n as f64;
        let mut sq: Vec<Complex64> = ux
            .iter()
            .map(|c| {
                let v = c.re * scale;
                Complex64::new(v * v, 0.0)
            })
            .collect();
        self.forward.process(&mut sq);
        for (m, c) in sq.iter_mut().enumerate() {
            *c = if self.kept(m) {
                *c * (-0.5 * alpha)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        sq
    }

    /// Full right-hand side in Fourier space. With de-aliasing on, modes
    /// outside the retained band `|k| ≤ n/3` get a zero rate.
    pub fn rhs_fourier(&self, uh: &[Complex64], alpha: f64) -> Vec<Complex64> {
        let mut out = self.nonlinear_term(uh, alpha);
        for (m, c) in out.iter_mut().enumerate() {
            if self.kept(m) {
                *c += uh[m] * self.linear_symbol(m, alpha);
            }
        }
        out
    }
}

/// Pseudo-spectral right-hand side on a power-of-two periodic grid.
pub fn ks_rhs(u: &[f64], alpha: f64) -> Result<Vec<f64>> {
    let model = KuramotoSivashinsky::new(u.len())?;
    let uh = model.to_fourier(u);
    let mut out = vec![0.0; u.len()];
    model.to_physical(&model.rhs_fourier(&uh, alpha), &mut out);
    Ok(out)
}

impl Model for KuramotoSivashinsky {
    fn name(&self) -> &str {
        "ks"
    }

    fn random_dim(&self) -> usize {
        1
    }

    fn n_vars(&self) -> usize {
        1
    }

    fn n_dof(&self) -> usize {
        self.n
    }

    fn initial_state(&self, _xi: &[f64], out: &mut [f64]) {
        for (o, x) in out.iter_mut().zip(self.grid()) {
            *o = ks_initial_condition(x);
        }
    }

    fn rhs(&self, _t: f64, u: &[f64], xi: &[f64], du: &mut [f64]) {
        let uh = self.to_fourier(u);
        self.to_physical(&self.rhs_fourier(&uh, self.alpha(xi[0])), du);
    }

    fn step(&self, _t: f64, dt: f64, u: &mut [f64], xi: &[f64]) {
        let mut uh = self.to_fourier(u);
        ks_semi_implicit_step(self, &mut uh, self.alpha(xi[0]), dt);
        self.to_physical(&uh, u);
    }

    fn dof_weights(&self) -> Vec<f64> {
        vec![2.0 * PI / self.n as f64; self.n]
    }
}
