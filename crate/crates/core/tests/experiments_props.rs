use distrecon::experiments::{
    count_table, lattice_experiment, random_configurations, random_g_statistics, RNG_ALGORITHM,
};
use distrecon::Rational;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn lattice_invariants() {
    for n in 1..=3u32 {
        let r = lattice_experiment(n).unwrap();
        let side = u64::from(n + 1);
        assert_eq!(r.total_configs, binomial(side * side, 4));
        assert!(r.fail_count >= r.repeated_distance_count);
        assert!(r.g_zero_count <= r.fail_count);
        assert_eq!(r.nonrepeated_count, r.total_configs - r.repeated_distance_count);
        assert_eq!(r.fail_count - r.repeated_distance_count, r.nonrepeated_fail_count);
    }
}

#[test]
fn lattice_three() {
    let r = lattice_experiment(3).unwrap();
    assert_eq!((r.total_configs, r.repeated_distance_count, r.fail_count), (1820, 1636, 1748));
    assert_eq!(r.nonrepeated_fail_fraction, "112/184");
    assert_eq!(r.nonrepeated_fail_ratio(), Some(Rational::new(14.into(), 23.into())));
    assert!((r.nonrepeated_fail_pct - 60.869).abs() < 1e-3);
}

#[test]
fn random_statistics_depend_only_on_seed() {
    let a = random_g_statistics(300, 1e-6, 3);
    assert_eq!(a, random_g_statistics(300, 1e-6, 3));
    assert_eq!(a.rng, RNG_ALGORITHM);
    assert!(a.below_threshold_count <= a.trials);
    let loose = random_g_statistics(300, 1e300, 3);
    assert_eq!(loose.below_threshold_count, 300);
    assert_eq!(random_configurations(10, 5)[..4], random_configurations(4, 5)[..]);
}

#[test]
fn counts() {
    let rows = count_table(&[5, 6, 7, 8]).unwrap();
    let values: Vec<u128> = rows.iter().map(|r| r.combinations).collect();
    assert_eq!(values, vec![100_800, 2_059_200, 19_535_040, 120_556_800]);
}
