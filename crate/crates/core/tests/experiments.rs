use std::time::Duration;

use chordal_forge::experiments::{
    histogram, lower_bound_family, mean_row, run_report, size_ratio_report, ExperimentError,
};
use chordal_forge::generator::{generate_with_density, run_batch};
use chordal_forge::representation::minimize;
use chordal_forge::{generate, GenConfig, Graph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn report_agrees_with_and_without_representation(n in 1usize..120, seed in any::<u64>()) {
        let r = generate(&GenConfig::new(n, seed)).unwrap();
        let mut with = run_report(&r.graph, Some(&r.rep), Duration::ZERO).unwrap();
        let mut without = run_report(&r.graph, None, Duration::ZERO).unwrap();
        with.clique_sd = (with.clique_sd * 1e9).round();
        without.clique_sd = (without.clique_sd * 1e9).round();
        prop_assert_eq!(&with, &without);
        prop_assert!(with.clique_min as f64 <= with.clique_mean && with.clique_mean <= with.clique_max as f64);
        prop_assert!(with.clique_count <= n);
    }
}

#[test]
fn half_density_has_about_ten_cliques() {
    let reports = run_batch(10, 2024, |seed, _| {
        let d = generate_with_density(&GenConfig::new(1000, seed), 0.5, 0.05, 1000).unwrap();
        run_report(&d.result.graph, Some(&d.result.rep), d.result.elapsed).unwrap()
    });
    let mean = mean_row(&reports).unwrap();
    // clique_count column, within ±50% of 9.5
    assert!(
        (4.75..=14.25).contains(&mean[3]),
        "mean clique count {}",
        mean[3]
    );
    assert_eq!(mean[2], 1.0);
}

#[test]
fn histogram_mass_matches_clique_counts() {
    let reports: Vec<_> = (0..6)
        .map(|s| {
            let r = generate(&GenConfig::new(150, s)).unwrap();
            run_report(&r.graph, Some(&r.rep), r.elapsed).unwrap()
        })
        .collect();
    let total: usize = reports.iter().map(|r| r.clique_count).sum();
    for width in [1, 5, 13] {
        let h = histogram(&reports, width).unwrap();
        assert!((h.total_frequency() * reports.len() as f64 - total as f64).abs() < 1e-9);
    }
    assert_eq!(
        histogram(&reports, 0).unwrap_err(),
        ExperimentError::ZeroBinWidth
    );
    assert_eq!(histogram(&[], 5).unwrap_err(), ExperimentError::NoRuns);
}

#[test]
fn family_ratio_grows_like_three_to_the_k() {
    let mut previous = 0.0;
    for k in 1..=3 {
        let rep = lower_bound_family(k).unwrap();
        let (min, mult) = minimize(&rep);
        let report = size_ratio_report(&rep, &min, &mult).unwrap();
        assert!(
            report.ratio >= 6.0 / 19.0 * 3f64.powi(k as i32),
            "k = {k}: {}",
            report.ratio
        );
        assert!(report.ratio > 2.0 * previous);
        assert!(report.minimal_size <= report.bound_2m_plus_n);
        assert!(report.total_size <= report.weighted_size);
        previous = report.ratio;
    }
    assert!(matches!(
        lower_bound_family(0),
        Err(ExperimentError::FamilyOrder { k: 0, .. })
    ));
    assert!(matches!(
        lower_bound_family(5),
        Err(ExperimentError::FamilyOrder { k: 5, .. })
    ));
}

#[test]
fn empty_graph_report() {
    let r = run_report(&Graph::empty(4), None, Duration::ZERO).unwrap();
    assert_eq!((r.components, r.clique_count), (4, 4));
    assert_eq!(r.clique_sizes, vec![1, 1, 1, 1]);
    assert_eq!(
        run_report(&Graph::cycle(5), None, Duration::ZERO).unwrap_err(),
        ExperimentError::NotChordal
    );
}
