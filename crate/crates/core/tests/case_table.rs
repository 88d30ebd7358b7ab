use fwmedian::bounds::cases::{case_table_check, instance_sweep, single_aspect_ratio};

/// The grid algorithm's actual cells never exceed the largest component of
/// their case, diagnostics included.
#[test]
fn selected_configurations_stay_under_case_maxima() {
    let rows = case_table_check();
    let bands = [
        ("1", 1e-3, 1.0 / 9.0),
        ("2", 1.0 / 9.0, 0.125),
        ("3", 0.125, 2.0 / 9.0),
        ("4", 2.0 / 9.0, 0.25),
        ("5", 0.25, 0.5),
    ];
    for (label, lo, hi) in bands {
        let row = rows.iter().find(|r| r.label == label).unwrap();
        let k_min = if label == "5" { 4 } else { 2 };
        let ceiling = row.components.iter().map(|c| c.rho).fold(0.0, f64::max);
        let worst = instance_sweep(lo, hi, k_min..160, 10);
        assert!(worst <= ceiling + 1e-6, "case {label}: {worst} > {ceiling}");
    }
}

#[test]
fn rows_are_bounded_by_the_overall_guarantee() {
    let rows = case_table_check();
    assert_eq!(rows.len(), 7);
    for r in &rows {
        assert!(r.rho_max > 1.0 && r.rho_max <= 2.002 + 1e-9, "{}: {}", r.label, r.rho_max);
        assert!(r.components.iter().any(|c| c.counted));
    }
    let overall = rows.iter().map(|r| r.rho_max).fold(0.0, f64::max);
    assert!((overall - 2.002).abs() < 1e-9);
}

/// Small cells sit in the disk branch of the lower bound, where the ratio
/// depends on the aspect ratio alone. It dips near 1.3 and then grows.
#[test]
fn single_aspect_ratio_is_not_monotone() {
    let rho = |b: f64| single_aspect_ratio(b, 0.125, 0.25).0;
    assert!((rho(1.0) - single_aspect_ratio(1.0, 1e-3, 1.0 / 9.0).0).abs() < 1e-9);
    assert!(rho(1.3) < rho(1.0) && rho(1.3) < rho(16.0 / 9.0));
    assert!(rho(1.0) > rho(16.0 / 9.0));
    let mut prev = rho(1.3);
    for beta in [1.5, 2.0, 2.5, 3.0] {
        assert!(rho(beta) > prev, "beta {beta}");
        prev = rho(beta);
    }
}
