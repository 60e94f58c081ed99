use std::f64::consts::PI;

use amr_gpc::propagation::{BurgersConfig, BurgersSolver};
use amr_gpc::refinement::Tolerances;

/// Pre-shock solution `u = sin(2π(x - u t))`, solved by Newton's method.
fn characteristic(x: f64, t: f64) -> f64 {
    let mut u = (2.0 * PI * x).sin();
    for _ in 0..100 {
        let arg = 2.0 * PI * (x - u * t);
        let f = u - arg.sin();
        let df = 1.0 + 2.0 * PI * t * arg.cos();
        let du = f / df;
        u -= du;
        if du.abs() < 1e-15 {
            break;
        }
    }
    u
}

fn fixed(elements: usize, p: usize) -> BurgersSolver {
    BurgersSolver::new(BurgersConfig {
        p,
        p0: (p + 1).div_ceil(2).min(p - 1),
        initial_elements: elements,
        dt: 1e-4,
        check_interval: 10,
        tolerances: Tolerances {
            tol1: f64::INFINITY,
            ..Tolerances::default()
        },
    })
    .unwrap()
}

fn max_error(solver: &BurgersSolver, t: f64) -> f64 {
    (0..=400)
        .map(|k| -1.0 + 2.0 * k as f64 / 400.0)
        .map(|x| (solver.evaluate(x).unwrap() - characteristic(x, t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn smooth_phase_follows_characteristics() {
    let mut solver = fixed(32, 7);
    solver.advance_to(0.1).unwrap();
    let err = max_error(&solver, 0.1);
    eprintln!("max error at t = 0.1: {err:e}");
    assert!(err < 1e-4, "{err}");
}

#[test]
fn integral_is_conserved() {
    let mut solver = BurgersSolver::new(BurgersConfig {
        tolerances: Tolerances {
            tol1: 1e-3,
            ..Tolerances::default()
        },
        ..BurgersConfig::default()
    })
    .unwrap();
    assert!(solver.integral().abs() < 1e-14);
    for t in [0.05, 0.1, 0.1592] {
        solver.advance_to(t).unwrap();
        assert!(solver.integral().abs() < 1e-10, "t = {t}: {}", solver.integral());
    }
    assert!(solver.mesh().len() > 8);
}

#[test]
fn antisymmetry_is_preserved() {
    let mut solver = fixed(8, 5);
    solver.advance_to(0.1).unwrap();
    for x in [0.1, 0.3, 0.45, 0.7, 0.95] {
        let (a, b) = (solver.evaluate(x).unwrap(), solver.evaluate(-x).unwrap());
        assert!((a + b).abs() < 1e-10, "x = {x}: {a} vs {b}");
    }
}
