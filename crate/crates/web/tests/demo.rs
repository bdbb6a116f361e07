use fwc_web::{
    beam_pattern_mag, dispersion_curve_db, length_grid, power_curves_w, rfof_crossover_km, BEAM_THETA_STEP_DEG,
};

#[test]
fn grid_endpoints() {
    assert_eq!(length_grid(25.0, 0), Vec::<f64>::new());
    assert_eq!(length_grid(25.0, 1), vec![0.0]);
    let g = length_grid(25.0, 101);
    assert_eq!((g[0], g[100]), (0.0, 25.0));
    assert!((g[1] - 0.25).abs() < 1e-12);
}

#[test]
fn dispersion_curve_starts_flat_and_hits_a_null_near_4km_at_30ghz() {
    let c = dispersion_curve_db(30e9, 8.0, 801).unwrap();
    assert_eq!(c[0], 0.0);
    let worst = (0..c.len()).max_by(|a, b| c[*a].total_cmp(&c[*b])).unwrap();
    let km = 8.0 * worst as f64 / 800.0;
    assert!((km - 4.06).abs() < 0.02, "{km}");
}

#[test]
fn power_curves_layout() {
    let c = power_curves_w(10e9, 100, 1.0, 25.0, 11).unwrap();
    assert_eq!(c.len(), 33);
    let (bbof, rfof) = (&c[0..11], &c[22..33]);
    assert!(bbof.iter().all(|x| *x == bbof[0]));
    assert!(rfof[0] < bbof[0] && rfof[10] > bbof[0]);
}

#[test]
fn crossover_matches_curves() {
    let x = rfof_crossover_km(10e9, 100, 1.0, 25.0).unwrap().unwrap();
    assert!((10.0..=17.0).contains(&x));
    assert_eq!(rfof_crossover_km(10e9, 100, 1.0, 1.0).unwrap(), None);
}

#[test]
fn beam_patterns_peak_where_expected() {
    let peak =
        |v: &[f64]| -90.0 + BEAM_THETA_STEP_DEG * (0..v.len()).max_by(|a, b| v[*a].total_cmp(&v[*b])).unwrap() as f64;
    let ttd = beam_pattern_mag(16, 30.0, 20e9, true).unwrap();
    assert_eq!(peak(&ttd), 30.0);
    assert!(ttd.iter().all(|m| *m <= 1.0 + 1e-12));
    let po = beam_pattern_mag(16, 30.0, 20e9, false).unwrap();
    assert!((peak(&po) - 14.48).abs() <= BEAM_THETA_STEP_DEG);
}

#[test]
fn invalid_inputs_are_errors() {
    assert!(beam_pattern_mag(0, 30.0, 10e9, true).is_err());
    assert!(power_curves_w(10e9, 0, 1.0, 25.0, 3).is_err());
}
