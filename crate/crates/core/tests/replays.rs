use secant_core::horace::{replay_theorem_i1, replay_theorem_minus, GoalStatus, ScheduleVerdict};
use secant_core::*;

#[test]
fn smallest_product_case() {
    let t = replay_theorem_minus(1, 1, &[3, 3, 2], &CohomologyConfig::default()).unwrap();
    assert_eq!(t.verdict, ScheduleVerdict::Verified);
    let last = t.goals.last().unwrap();
    let s = last.secant.as_ref().unwrap();
    assert_eq!((s.z, s.defect), (12, 0));
    assert_eq!(s.cohomology.matrix_shape(), (48, 48));
}

#[test]
fn product_with_a_plane() {
    let t = replay_theorem_minus(2, 1, &[3, 3, 2], &CohomologyConfig::default()).unwrap();
    assert_eq!(t.verdict, ScheduleVerdict::Verified);
    assert_eq!(t.hypotheses[0].alpha, 40);
    assert_eq!(t.hypotheses[0].n, 4);
    let s = t.goals.last().unwrap().secant.as_ref().unwrap();
    assert_eq!(s.cohomology.sections, 120);
}

#[test]
fn four_factor_product() {
    let t = replay_theorem_minus(1, 1, &[3, 3, 2, 2], &CohomologyConfig::default()).unwrap();
    assert_eq!(t.verdict, ScheduleVerdict::Verified);
    assert_eq!(t.hypotheses.len(), 2);
}

#[test]
fn chain_up_to_four() {
    let y = MultiProjectiveFormat::new(vec![1, 1]).unwrap();
    let t = replay_theorem_i1(
        &y,
        &BundleDegree::new(vec![3, 3]),
        4,
        &CohomologyConfig::default(),
    )
    .unwrap();
    assert_eq!(t.verdict, ScheduleVerdict::Verified);
    let labels: Vec<&str> = t
        .goals
        .iter()
        .filter(|g| g.statement.is_some())
        .map(|g| g.description.as_str())
        .collect();
    assert_eq!(
        labels,
        [
            "B(t=2,z=12)",
            "A(t=2,z=12)",
            "C(t=3,z=16)",
            "A(t=3,z=16)",
            "A(t=2,z=12)",
            "C(t=4,z=20)",
            "B(t=4,z=20)",
            "A(t=4,z=20)"
        ]
    );
    assert!(t
        .goals
        .iter()
        .all(|g| g.status != GoalStatus::ExceedsExpected));
}

#[test]
fn traces_are_reproducible() {
    let c = CohomologyConfig::default();
    let a = replay_theorem_minus(1, 1, &[3, 3, 2], &c).unwrap();
    let b = replay_theorem_minus(1, 1, &[3, 3, 2], &c).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}
