//! Exact statistics, Monte Carlo and quasi-Monte Carlo references, and the
//! error metrics used to compare moment series.

use std::io::{BufRead, Write};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::models::Model;
use crate::propagation::{first_blowup, Moments};

/// Exact mean and variance of `u(t) = u0 e^{-κt}`, `κ ~ U(-1, 1)`.
pub fn ode_exact_stats(t: f64, u0: f64) -> (f64, f64) {
    if t < 1e-6 {
        let t2 = t * t;
        return (u0 * (1.0 + t2 / 6.0), u0 * u0 * t2 / 3.0);
    }
    let mean = u0 * t.sinh() / t;
    let var = u0 * u0 * ((2.0 * t).sinh() / (2.0 * t) - (t.sinh() / t).powi(2));
    (mean, var)
}

/// Largest supported Sobol dimension.
pub const SOBOL_MAX_DIM: usize = 3;

/// `(s, a, m_1..m_s)` for dimensions 2 and 3; dimension 1 is van der Corput.
const SOBOL_PRIMITIVES: [(u32, u32, &[u32]); 2] = [(1, 0, &[1]), (2, 1, &[1, 3])];

const SOBOL_BITS: usize = 32;

fn sobol_directions(dim: usize) -> Vec<[u32; SOBOL_BITS]> {
    let mut out = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut v = [0u32; SOBOL_BITS];
        if i == 0 {
            for (k, v) in v.iter_mut().enumerate() {
                *v = 1 << (31 - k);
            }
        } else {
            let (s, a, m) = SOBOL_PRIMITIVES[i - 1];
            let s = s as usize;
            for k in 0..s {
                v[k] = m[k] << (31 - k);
            }
            for k in s..SOBOL_BITS {
                let mut x = v[k - s] ^ (v[k - s] >> s);
                for j in 1..s {
                    if (a >> (s - 1 - j)) & 1 == 1 {
                        x ^= v[k - j];
                    }
                }
                v[k] = x;
            }
        }
        out.push(v);
    }
    out
}

/// The first `n` points of the Sobol sequence in `[-1, 1]^d`, flattened
/// point-major. The all-zero initial point is skipped, so the first point
/// is the domain centre.
pub fn sobol_points(d: usize, n: usize) -> Result<Vec<f64>> {
    if d == 0 || d > SOBOL_MAX_DIM {
        return Err(Error::UnsupportedDimension(d, SOBOL_MAX_DIM));
    }
    let dirs = sobol_directions(d);
    let mut x = vec![0u32; d];
    let mut out = Vec::with_capacity(n * d);
    for i in 1..=n {
        // Gray-code update: flip the direction of the lowest zero bit of i - 1.
        let c = (i - 1).trailing_ones() as usize;
        for (xj, dir) in x.iter_mut().zip(&dirs) {
            *xj ^= dir[c];
        }
        out.extend(x.iter().map(|&v| 2.0 * (v as f64 / 4294967296.0) - 1.0));
    }
    Ok(out)
}

/// Source of realizations for [`mc_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Pseudo-random uniform points from a seeded ChaCha8 stream.
    Uniform {
        seed: u64,
    },
    Sobol,
}

impl Sampler {
    pub fn points(&self, d: usize, n: usize) -> Result<Vec<f64>> {
        match *self {
            Sampler::Sobol => sobol_points(d, n),
            Sampler::Uniform { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect())
            }
        }
    }
}

/// Mean and variance per state component at a sequence of times.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MomentSeries {
    pub times: Vec<f64>,
    pub mean: Vec<Vec<f64>>,
    pub variance: Vec<Vec<f64>>,
}

impl MomentSeries {
    pub fn push(&mut self, t: f64, m: &Moments) {
        self.times.push(t);
        self.mean.push(m.mean.clone());
        self.variance.push(m.variance.clone());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn components(&self) -> usize {
        self.mean.first().map_or(0, Vec::len)
    }

    /// Moments at `t`, linearly interpolated between stored times.
    pub fn at(&self, t: f64) -> Option<Moments> {
        let n = self.times.len();
        if n == 0 || t < self.times[0] - 1e-12 || t > self.times[n - 1] + 1e-12 {
            return None;
        }
        let i = self.times.partition_point(|&s| s < t);
        if i < n && (self.times[i] - t).abs() <= 1e-12 {
            return Some(Moments {
                mean: self.mean[i].clone(),
                variance: self.variance[i].clone(),
            });
        }
        if i == 0 {
            return Some(Moments {
                mean: self.mean[0].clone(),
                variance: self.variance[0].clone(),
            });
        }
        if i == n {
            return Some(Moments {
                mean: self.mean[n - 1].clone(),
                variance: self.variance[n - 1].clone(),
            });
        }
        let a = (t - self.times[i - 1]) / (self.times[i] - self.times[i - 1]);
        let lerp = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(x, y)| x + a * (y - x)).collect();
        Some(Moments {
            mean: lerp(&self.mean[i - 1], &self.mean[i]),
            variance: lerp(&self.variance[i - 1], &self.variance[i]),
        })
    }

    /// `time,mean_1,var_1,mean_2,var_2,...`; negative round-off variances
    /// down to `-1e-12` are written as zero.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let s = self.components();
        let mut header = vec!["time".to_string()];
        for c in 1..=s {
            header.push(format!("mean_{c}"));
            header.push(format!("var_{c}"));
        }
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.len() {
            let mut cols = vec![fmt_f64(self.times[i])];
            for c in 0..s {
                let v = self.variance[i][c];
                let v = if (-1e-12..0.0).contains(&v) { 0.0 } else { v };
                cols.push(fmt_f64(self.mean[i][c]));
                cols.push(fmt_f64(v));
            }
            writeln!(w, "{}", cols.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Validation("empty moment series".into()))??;
        let cols = header.split(',').count();
        if cols < 3 || cols % 2 == 0 {
            return Err(Error::Validation(format!("malformed moment header: {header}")));
        }
        let s = (cols - 1) / 2;
        let mut out = MomentSeries::default();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let vals: std::result::Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
            let vals = vals.map_err(|e| Error::Validation(format!("row {}: {e}", i + 2)))?;
            if vals.len() != cols {
                return Err(Error::Validation(format!(
                    "row {}: {} columns, expected {cols}",
                    i + 2,
                    vals.len()
                )));
            }
            out.times.push(vals[0]);
            out.mean.push((0..s).map(|c| vals[1 + 2 * c]).collect());
            out.variance.push((0..s).map(|c| vals[2 + 2 * c]).collect());
        }
        Ok(out)
    }
}

/// Result of a sampling estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub series: MomentSeries,
    /// Realizations dropped after a blow-up.
    pub excluded: usize,
}

/// Per-chunk running statistics, combined pairwise in a fixed order.
#[derive(Debug, Clone)]
struct Running {
    n: f64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Running {
    fn new(len: usize) -> Self {
        Self {
            n: 0.0,
            mean: vec![0.0; len],
            m2: vec![0.0; len],
        }
    }

    fn add(&mut self, x: &[f64]) {
        self.n += 1.0;
        for ((m, m2), &x) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let d = x - *m;
            *m += d / self.n;
            *m2 += d * (x - *m);
        }
    }

    fn merge(mut self, other: &Running) -> Self {
        if other.n == 0.0 {
            return self;
        }
        let n = self.n + other.n;
        for i in 0..self.mean.len() {
            let d = other.mean[i] - self.mean[i];
            self.m2[i] += other.m2[i] + d * d * self.n * other.n / n;
            self.mean[i] += d * other.n / n;
        }
        self.n = n;
        self
    }
}

const MC_CHUNK: usize = 256;

/// Propagates `n` realizations with the model's own integrator and records
/// the sample mean and (population) variance at each of `times`, which
/// should be multiples of `dt`.
pub fn mc_estimate<M: Model + ?Sized>(
    model: &M,
    sampler: Sampler,
    n: usize,
    times: &[f64],
    dt: f64,
) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let d = model.random_dim();
    let s = model.state_len();
    let points = sampler.points(d, n)?;
    let targets: Vec<u64> = times.iter().map(|t| (t / dt).round() as u64).collect();
    let nt = times.len();

    let partials: Vec<(Vec<Running>, usize)> = points
        .par_chunks(MC_CHUNK * d)
        .map(|chunk| {
            let mut stats = vec![Running::new(s); nt];
            let mut excluded = 0;
            let mut traj = vec![0.0; nt * s];
            let mut u = vec![0.0; s];
            'sample: for xi in chunk.chunks(d) {
                model.initial_state(xi, &mut u);
                let mut step = 0u64;
                for (k, &target) in targets.iter().enumerate() {
                    while step < target {
                        model.step(step as f64 * dt, dt, &mut u, xi);
                        step += 1;
                        if first_blowup(&u).is_some() {
                            excluded += 1;
                            continue 'sample;
                        }
                    }
                    traj[k * s..(k + 1) * s].copy_from_slice(&u);
                }
                for (k, st) in stats.iter_mut().enumerate() {
                    st.add(&traj[k * s..(k + 1) * s]);
                }
            }
            (stats, excluded)
        })
        .collect();

    let mut total = vec![Running::new(s); nt];
    let mut excluded = 0;
    for (stats, ex) in &partials {
        excluded += ex;
        for (t, st) in total.iter_mut().zip(stats) {
            *t = std::mem::replace(t, Running::new(0)).merge(st);
        }
    }
    let mut series = MomentSeries::default();
    for (k, st) in total.iter().enumerate() {
        let var = st
            .m2
            .iter()
            .map(|m2| if st.n > 0.0 { m2 / st.n } else { f64::NAN })
            .collect();
        series.times.push(times[k]);
        series.mean.push(st.mean.clone());
        series.variance.push(var);
    }
    Ok(McEstimate { series, excluded })
}

/// Maximum relative variance error and the times excluded from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSummary {
    pub value: f64,
    /// Times at which some reference variance was zero.
    pub excluded_times: Vec<f64>,
}

/// `sup_t max_c |var_c(t) - var_ref_c(t)| / var_ref_c(t)` over the series'
/// times in `(0, ∞)`. The reference is interpolated linearly when the grids
/// differ. Components whose reference variance is zero at a time are
/// skipped there and the time is reported.
pub fn relative_error(series: &MomentSeries, reference: &MomentSeries) -> Result<ErrorSummary> {
    if series.components() != reference.components() {
        return Err(Error::Validation(format!(
            "series has {} components, reference {}",
            series.components(),
            reference.components()
        )));
    }
    let mut value: f64 = 0.0;
    let mut excluded_times = Vec::new();
    for (i, &t) in series.times.iter().enumerate() {
        if t <= 0.0 {
            continue;
        }
        let r = reference
            .at(t)
            .ok_or_else(|| Error::Validation(format!("reference does not cover t = {t}")))?;
        let mut skipped = false;
        for (v, vr) in series.variance[i].iter().zip(&r.variance) {
            if *vr == 0.0 {
                skipped = true;
                continue;
            }
            value = value.max((v - vr).abs() / vr.abs());
        }
        if skipped {
            excluded_times.push(t);
        }
    }
    Ok(ErrorSummary { value, excluded_times })
}

/// Per-time relative errors of mean and variance against the exact ODE
/// statistics, reduced to their maxima over `t > 0`.
pub fn ode_relative_errors(series: &MomentSeries, u0: f64) -> (f64, f64) {
    let mut em: f64 = 0.0;
    let mut ev: f64 = 0.0;
    for (i, &t) in series.times.iter().enumerate() {
        if t <= 0.0 {
            continue;
        }
        let (m, v) = ode_exact_stats(t, u0);
        em = em.max((series.mean[i][0] - m).abs() / m.abs());
        ev = ev.max((series.variance[i][0] - v).abs() / v);
    }
    (em, ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::LinearOde;

    #[test]
    fn exact_stats_examples() {
        assert_eq!(ode_exact_stats(0.0, 1.0), (1.0, 0.0));
        let (m, v) = ode_exact_stats(1.0, 1.0);
        assert!((m - 1f64.sinh()).abs() < 1e-15);
        // Midpoint quadrature of e^{-κ} and e^{-2κ} over κ ∈ [-1, 1].
        let n = 1_000_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for i in 0..n {
            let k = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
            s1 += (-k).exp();
            s2 += (-2.0 * k).exp();
        }
        let (qm, q2) = (s1 / n as f64, s2 / n as f64);
        assert!((m - qm).abs() < 1e-9);
        assert!((v - (q2 - qm * qm)).abs() < 1e-9);
        for i in 0..200 {
            assert!(ode_exact_stats(i as f64 * 0.05, 1.0).0 >= 1.0);
        }
        // Continuity across the series branch.
        let (a, b) = (ode_exact_stats(0.99e-6, 1.0), ode_exact_stats(1.01e-6, 1.0));
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    }

    #[test]
    fn sobol_basics() {
        let p = sobol_points(3, 8).unwrap();
        assert_eq!(&p[..3], &[0.0, 0.0, 0.0]);
        // Second and third points of the standard sequence: (.75,.25,.25), (.25,.75,.75).
        assert_eq!(&p[3..6], &[0.5, -0.5, -0.5]);
        assert_eq!(&p[6..9], &[-0.5, 0.5, 0.5]);
        assert_eq!(sobol_points(3, 8).unwrap(), p);
        assert!(matches!(sobol_points(4, 8), Err(Error::UnsupportedDimension(4, 3))));
    }

    #[test]
    fn sobol_moments() {
        let n = 1 << 14;
        let p = sobol_points(3, n).unwrap();
        for i in 0..3 {
            let m: f64 = p.iter().skip(i).step_by(3).sum::<f64>() / n as f64;
            let m2: f64 = p.iter().skip(i).step_by(3).map(|x| x * x).sum::<f64>() / n as f64;
            assert!(m.abs() < 5e-3, "dim {i}: {m}");
            assert!((m2 - 1.0 / 3.0).abs() < 5e-3, "dim {i}: {m2}");
        }
    }

    struct Constant;
    impl Model for Constant {
        fn name(&self) -> &str {
            "constant"
        }
        fn random_dim(&self) -> usize {
            1
        }
        fn n_vars(&self) -> usize {
            1
        }
        fn initial_state(&self, _xi: &[f64], out: &mut [f64]) {
            out[0] = 2.0;
        }
        fn rhs(&self, _t: f64, u: &[f64], _xi: &[f64], du: &mut [f64]) {
            du[0] = -u[0];
        }
    }

    #[test]
    fn deterministic_model_has_zero_variance() {
        let est = mc_estimate(&Constant, Sampler::Uniform { seed: 7 }, 1000, &[0.5, 1.0], 0.01).unwrap();
        assert_eq!(est.excluded, 0);
        assert!(est.series.variance.iter().all(|v| v[0] == 0.0));
    }

    #[test]
    fn sobol_linear_ode() {
        let est = mc_estimate(&LinearOde::default(), Sampler::Sobol, 1 << 16, &[1.0, 10.0], 0.01).unwrap();
        let (m1, _) = ode_exact_stats(1.0, 1.0);
        assert!((est.series.mean[0][0] - m1).abs() < 1e-3);
        let (_, v10) = ode_exact_stats(10.0, 1.0);
        assert!((est.series.variance[1][0] - v10).abs() / v10 < 0.01);
    }

    #[test]
    fn seeded_mc_is_reproducible() {
        let a = mc_estimate(&LinearOde::default(), Sampler::Uniform { seed: 3 }, 2000, &[1.0], 0.01).unwrap();
        let b = mc_estimate(&LinearOde::default(), Sampler::Uniform { seed: 3 }, 2000, &[1.0], 0.01).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn relative_error_examples() {
        let mut r = MomentSeries::default();
        for i in 0..5 {
            let t = i as f64;
            r.push(
                t,
                &Moments {
                    mean: vec![1.0, 0.0],
                    variance: vec![1.0 + t, if i == 2 { 0.0 } else { 2.0 }],
                },
            );
        }
        assert_eq!(relative_error(&r, &r).unwrap().value, 0.0);
        let mut s = r.clone();
        for v in &mut s.variance {
            for x in v.iter_mut() {
                *x *= 1.1;
            }
        }
        let e = relative_error(&s, &r).unwrap();
        assert!((e.value - 0.1).abs() < 1e-12);
        assert_eq!(e.excluded_times, vec![2.0]);
    }

    #[test]
    fn csv_round_trip() {
        let mut r = MomentSeries::default();
        r.push(
            0.5,
            &Moments {
                mean: vec![1.0 / 3.0],
                variance: vec![2.0 / 7.0],
            },
        );
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(MomentSeries::read_csv(&buf[..]).unwrap(), r);
    }
}
