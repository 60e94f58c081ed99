use crate::error::{Error, Result};
use crate::random_space::ElementId;

/// States whose magnitude exceeds this are treated as blown up.
pub const BLOWUP_THRESHOLD: f64 = 1e10;

/// One classical fourth-order Runge-Kutta step, in place.
pub fn rk4_step<F>(y: &mut [f64], t: f64, dt: f64, mut f: F)
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    f(t, y, &mut k1);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * dt * k1[i];
    }
    f(t + 0.5 * dt, &tmp, &mut k2);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * dt * k2[i];
    }
    f(t + 0.5 * dt, &tmp, &mut k3);
    for i in 0..n {
        tmp[i] = y[i] + dt * k3[i];
    }
    f(t + dt, &tmp, &mut k4);
    for i in 0..n {
        y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Index of the first entry that is non-finite or above [`BLOWUP_THRESHOLD`].
pub fn first_blowup(y: &[f64]) -> Option<usize> {
    y.iter().position(|v| !v.is_finite() || v.abs() > BLOWUP_THRESHOLD)
}

/// [`rk4_step`] that reports a blow-up of any stage or of the result.
pub fn rk4_step_checked<F>(y: &mut [f64], t: f64, dt: f64, element: ElementId, mut f: F) -> Result<()>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut bad_stage = None;
    rk4_step(y, t, dt, |t, y, dy| {
        f(t, y, dy);
        if bad_stage.is_none() && first_blowup(dy).is_some() {
            bad_stage = Some(t);
        }
    });
    if let Some(stage_t) = bad_stage {
        return Err(Error::NumericalBlowup {
            element,
            time: t,
            detail: format!("non-finite right-hand side at stage time {stage_t}"),
        });
    }
    if let Some(i) = first_blowup(y) {
        return Err(Error::NumericalBlowup {
            element,
            time: t + dt,
            detail: format!("state component {i} = {}", y[i]),
        });
    }
    Ok(())
}
