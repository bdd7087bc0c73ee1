use hyperweil::admissibility::admissible_set;
use hyperweil::census::{run_and_verify, CensusMode};
use hyperweil::Partition;

#[test]
fn genus_two_over_f5_realizes_only_admissible_classes() {
    let s = run_and_verify(2, 5, CensusMode::Exhaustive).unwrap();
    assert_eq!(s.violations, 0, "{:?}", s.violation_log);
    assert!(s.all_classes_admissible());
    assert!(s.realized_classes.len() <= admissible_set(2).unwrap().len());
}

#[test]
fn genus_three_over_f3_misses_all_ones() {
    let s = run_and_verify(3, 3, CensusMode::Exhaustive).unwrap();
    assert_eq!(s.violations, 0, "{:?}", s.violation_log);
    assert!(s.all_classes_admissible());
    assert!(!s.realized(&Partition::new(vec![1; 8]).unwrap()));
}

#[test]
fn genus_three_sample_over_f11_realizes_every_admissible_class() {
    let s = run_and_verify(3, 11, CensusMode::Sample { count: 100_000, seed: 2024 }).unwrap();
    assert_eq!(s.violations, 0, "{:?}", s.violation_log);
    assert_eq!(s.realized_classes.len(), 6);
    assert!(s.all_classes_admissible());
}
