use amr_gpc::experiment::{compare, execute, parse_config, Experiment, ExperimentConfig, RunMode};

#[test]
fn mc_error_falls_with_sample_count() {
    let mean_error = |samples: usize| {
        (1..=5)
            .map(|seed| {
                let mut c = ExperimentConfig::defaults(Experiment::Ode);
                c.mode = RunMode::Mc;
                c.samples = samples;
                c.seed = seed;
                c.t_final = 2.0;
                execute(&c).unwrap().summary.max_rel_error_variance.unwrap()
            })
            .sum::<f64>()
            / 5.0
    };
    let (small, large) = (mean_error(64), mean_error(4096));
    assert!(large < small, "{large} vs {small}");
}

#[test]
fn ko1d_table_shape() {
    let text = "
[ko1d.global]
mode = global-collocation
t_final = 10
[ko1d.coarse]
tol1 = 1e-3
t_final = 10
[ko1d.fine]
tol1 = 1e-5
t_final = 10
";
    let rows = compare(&parse_config(text).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0].error, 0.0);
    assert_eq!(rows[1].elements, Some(2));
    assert!(
        rows[3].error < rows[2].error && rows[2].error < rows[1].error,
        "{rows:?}"
    );
}

#[test]
fn global_modes_ignore_tolerance() {
    for mode in [RunMode::GlobalCollocation, RunMode::GlobalGpc] {
        let mut c = ExperimentConfig::defaults(Experiment::Ko2d);
        c.mode = mode;
        c.t_final = 1.0;
        c.tol1 = 1e-12;
        c.reference = amr_gpc::experiment::ReferenceSpec::None;
        let s = execute(&c).unwrap().summary;
        assert_eq!(s.elements, Some(4));
        assert_eq!(s.split_counts, Some(vec![0, 0]));
    }
}
