//! Ensemble properties of windowed recovery under random phase.

use holo_core::statistics::{
    lemma1_empirical_moments, lemma1_predicted_moments, windowed_energy_experiment, WeightVector,
};

const M: usize = 256;

#[test]
fn energy_grows_with_window_length() {
    let means: Vec<f64> = [M / 8, M / 4, M / 2, M]
        .into_iter()
        .map(|len| {
            windowed_energy_experiment(M, len, 0, 1.0, 100, 40)
                .unwrap()
                .empirical_mean_energy
        })
        .collect();
    assert!(means.windows(2).all(|w| w[0] <= w[1]), "{means:?}");
    assert!((means[3] - 1.0).abs() < 1e-12);
}

#[test]
fn energy_does_not_depend_on_window_position() {
    for len in [32, 64, 128] {
        let first = windowed_energy_experiment(M, len, 0, 1.0, 200, 7).unwrap();
        let last = windowed_energy_experiment(M, len, M - len, 1.0, 200, 7).unwrap();
        let rel = (first.empirical_mean_energy - last.empirical_mean_energy).abs() / first.empirical_mean_energy;
        assert!(rel < 0.05, "L={len}: {rel}");
    }
}

#[test]
fn energy_scales_with_amplitude_squared() {
    let report = windowed_energy_experiment(M, 64, 17, 3.0, 200, 3).unwrap();
    assert_eq!(report.expected_energy, 64.0 / 256.0 * 9.0);
    assert!(report.relative_error() < 0.05, "{report:?}");
}

#[test]
fn kernel_row_moments_match_monte_carlo() {
    let phi = WeightVector::phi_row(5, 16, 64).unwrap();
    let (energy, sigma) = lemma1_predicted_moments(&phi);
    // one row of the squared kernel sums to L/M
    assert!((energy - 0.25).abs() < 1e-12);
    let trials = 100_000;
    let report = lemma1_empirical_moments(&phi, trials, 99).unwrap();
    let band = 3.0 * report.empirical_sigma / (trials as f64).sqrt();
    assert!((report.empirical_mean_energy - energy).abs() < band, "{report:?}");
    assert!((report.empirical_sigma - sigma).abs() / sigma < 0.02);
}

#[test]
fn reports_are_reproducible() {
    let a = windowed_energy_experiment(64, 16, 8, 1.0, 50, 12).unwrap();
    let b = windowed_energy_experiment(64, 16, 8, 1.0, 50, 12).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.seeds, (12..62).collect::<Vec<u64>>());
    let c = windowed_energy_experiment(64, 16, 8, 1.0, 50, 13).unwrap();
    assert_ne!(a.empirical_mean_energy, c.empirical_mean_energy);
}
