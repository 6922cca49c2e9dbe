use ccrscript::geometry::{
    arc_endpoint, path_length, plan_path, sample_path, Pose, Side, Travel, TurnConstraint, GOAL_TOLERANCE,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_pose(rng: &mut StdRng) -> Pose {
    Pose::new(
        rng.random_range(-6.0..6.0),
        rng.random_range(-1.0..6.0),
        rng.random_range(0.0..360.0),
    )
}

/// Re-derives every segment from its predecessor's end with the public endpoint formulas.
fn fold_path(start: Pose, path: &[ccrscript::geometry::PathSegment]) -> Pose {
    path.iter().fold(start, |pose, seg| seg.replay(&pose))
}

#[test]
fn random_plans_reach_their_goals() {
    let mut rng = StdRng::seed_from_u64(0x5eed_cafe);
    for case in 0..10_000 {
        let start = random_pose(&mut rng);
        let goal = random_pose(&mut rng);
        let c = TurnConstraint::new(rng.random_range(0.1..2.0)).unwrap();
        let travel = if case % 2 == 0 {
            Travel::Forward
        } else {
            Travel::Backing
        };
        let path = plan_path(&start, &goal, travel, &c).unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert!(path.len() <= 3);
        let mut pose = start;
        for seg in &path {
            assert_eq!(seg.travel, travel);
            assert!(pose.approx_eq(&seg.start, GOAL_TOLERANCE), "case {case}: broken chain");
            if let ccrscript::geometry::SegmentKind::Arc { radius, .. } = seg.kind {
                assert!(radius >= c.min_radius());
            }
            pose = seg.end;
        }
        let folded = fold_path(start, &path);
        assert!(
            folded.approx_eq(&goal, GOAL_TOLERANCE),
            "case {case}: {start} -> {goal} folded to {folded}"
        );
        let straight = start.position().distance(goal.position());
        assert!(path_length(&path) >= straight - 1e-9);
    }
}

fn pose_strategy() -> impl Strategy<Value = Pose> {
    (-5.0..5.0f64, 0.0..5.0f64, 0.0..360.0f64).prop_map(|(x, y, h)| Pose::new(x, y, h))
}

proptest! {
    #[test]
    fn right_arc_mirrors_left_arc(p in pose_strategy(), r in 0.1..3.0f64, a in 0.0..720.0f64) {
        let right = arc_endpoint(&p, r, a, Side::Right, Travel::Forward).unwrap();
        let left = arc_endpoint(&p.mirrored(), r, a, Side::Left, Travel::Forward).unwrap();
        prop_assert!(right.mirrored().approx_eq(&left, 1e-9));
    }

    #[test]
    fn length_survives_rigid_motion(
        start in pose_strategy(),
        goal in pose_strategy(),
        (tx, ty, rot) in (-3.0..3.0f64, -3.0..3.0f64, 0.0..360.0f64),
    ) {
        let c = TurnConstraint::new(0.5).unwrap();
        let moved = |p: &Pose| {
            let (s, co) = (-rot.to_radians()).sin_cos();
            Pose::new(p.x * co - p.y * s + tx, p.x * s + p.y * co + ty, p.heading + rot)
        };
        let a = path_length(&plan_path(&start, &goal, Travel::Forward, &c).unwrap());
        let b = path_length(&plan_path(&moved(&start), &moved(&goal), Travel::Forward, &c).unwrap());
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn sampling_never_jumps(start in pose_strategy(), goal in pose_strategy(), frac in 0.0..1.0f64, delta in 1e-6..0.5f64) {
        let c = TurnConstraint::new(0.6).unwrap();
        let path = plan_path(&start, &goal, Travel::Forward, &c).unwrap();
        let len = path_length(&path);
        prop_assume!(len > 0.0);
        let s = frac * len;
        let t = (s + delta).min(len);
        let a = sample_path(&path, s).unwrap();
        let b = sample_path(&path, t).unwrap();
        prop_assert!(a.position().distance(b.position()) <= (t - s) + 1e-9);
        prop_assert!(sample_path(&path, 0.0).unwrap().approx_eq(&start, 1e-9));
        prop_assert!(sample_path(&path, len).unwrap().approx_eq(&goal, 1e-9));
    }

    #[test]
    fn backing_plan_is_as_short_as_reversed_forward_plan(start in pose_strategy(), goal in pose_strategy()) {
        let c = TurnConstraint::new(0.8).unwrap();
        let fwd = path_length(&plan_path(&start, &goal, Travel::Forward, &c).unwrap());
        let back = path_length(&plan_path(&goal, &start, Travel::Backing, &c).unwrap());
        prop_assert!((fwd - back).abs() < 1e-9);
    }
}
