use nusamp::harness::{summary_json, sweep, write_csv, BoundKind, ExperimentConfig};

fn cfg(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(text).unwrap()
}

#[test]
fn identical_configs_give_identical_reports() {
    let c = cfg(r#"{"sequence": {"kind": "perturbed", "L": 0.3, "seed": 77}, "signal": {"kind": "sinc_squared", "sigma": 2.0},
        "N_list": [4, 6, 8, 10, 12], "grid_points": 128}"#);
    let a = sweep(&c).unwrap();
    let b = sweep(&c).unwrap();
    assert_eq!(write_csv(&a.rows), write_csv(&b.rows));
    assert_eq!(summary_json(&c, &a), summary_json(&c, &b));
}

#[test]
fn different_seeds_change_perturbed_results() {
    let text = |seed: u64| {
        format!(r#"{{"sequence": {{"kind": "perturbed", "L": 0.3, "seed": {seed}}}, "N_list": [4, 6, 8, 10], "grid_points": 64}}"#)
    };
    let a = sweep(&cfg(&text(1))).unwrap();
    let b = sweep(&cfg(&text(2))).unwrap();
    assert_ne!(a.rows[0].n_star, b.rows[0].n_star);
}

#[test]
fn shifted_sinc_combo_sine_type_sweep() {
    let c = cfg(r#"{"sequence": {"kind": "sine_type", "A": 2.0, "g": [{"coefficient": 0.5, "frequency": 0.7}, {"coefficient": 0.4, "frequency": 2.9}]},
        "signal": {"kind": "shifted_sinc_combo", "sigma": 1.2, "terms": [{"coefficient": 1.0, "shift": 0.25}, {"coefficient": -0.6, "shift": -1.5}]},
        "N_list": [4, 6, 8, 10, 12, 14], "grid_points": 128}"#);
    let r = sweep(&c).unwrap();
    assert_eq!(r.bound_kind, BoundKind::Theorem);
    assert!(r.dominance_ok(), "{r:?}");
    assert!(r.interpolation_max_residual <= 1e-12);
    assert!(r.fitted_slope < 0.0);
}

#[test]
fn fixed_product_window_matches_auto_for_uniform() {
    let base = r#""sequence": {"kind": "uniform"}, "signal": {"kind": "cos_sigma", "sigma": 1.0}, "N_list": [3, 5, 7, 9], "grid_points": 64"#;
    let auto = sweep(&cfg(&format!("{{{base}}}"))).unwrap();
    let fixed = sweep(&cfg(&format!(r#"{{{base}, "M_prod": 2048}}"#))).unwrap();
    for (a, b) in auto.rows.iter().zip(&fixed.rows) {
        assert!((a.max_error - b.max_error).abs() <= 1e-10 * a.max_error.max(1e-13));
    }
}
