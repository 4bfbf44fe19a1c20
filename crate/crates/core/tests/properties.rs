use ballfield::axioms::index_monotonicity_check;
use ballfield::continuity::{DistanceTable, FarthestPointCover};
use ballfield::gaussian::SampleBatch;
use ballfield::geometry::{apply_motion, ball_volume, intersection_volume, region_contains_ball, Ball, EuclideanMotion, Region};
use ballfield::kernels::{eval_kernel, pseudo_metric, KernelSpec, QuadratureConfig, SpectralMultiplier};
use ballfield::transform::{apply_transform, Transform};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn ball_in(d: usize) -> impl Strategy<Value = Ball> {
    (prop::collection::vec(-2.0f64..2.0, d), 0.05f64..1.5).prop_map(|(c, r)| Ball::new(c, r).unwrap())
}

fn pair() -> impl Strategy<Value = (Ball, Ball)> {
    (1usize..=5).prop_flat_map(|d| (ball_in(d), ball_in(d)))
}

fn triple() -> impl Strategy<Value = (Ball, Ball, Ball)> {
    (1usize..=4).prop_flat_map(|d| (ball_in(d), ball_in(d), ball_in(d)))
}

fn kernel() -> impl Strategy<Value = KernelSpec> {
    prop_oneof![
        Just(KernelSpec::W),
        Just(KernelSpec::White),
        (0.3f64..3.0).prop_map(|mass| KernelSpec::FreeField { mass }),
        (0.1f64..1.0, 0.5f64..2.0, 1.0f64..2.0).prop_map(|(floor, mass, exponent)| {
            KernelSpec::Spectral(SpectralMultiplier { floor, weight: 1.0, mass, exponent })
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn intersection_is_symmetric_and_bounded((a, b) in pair()) {
        let ab = intersection_volume(&a, &b).unwrap();
        let ba = intersection_volume(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!(ab >= 0.0);
        let cap = ball_volume(a.dim(), a.radius()).unwrap().min(ball_volume(b.dim(), b.radius()).unwrap());
        prop_assert!(ab <= cap * (1.0 + 1e-12));
    }

    #[test]
    fn motions_preserve_intersection_volume((a, b) in pair(), seed in any::<u64>()) {
        let g = EuclideanMotion::random(a.dim(), 3.0, &mut ChaCha8Rng::seed_from_u64(seed));
        let before = intersection_volume(&a, &b).unwrap();
        let after = intersection_volume(&apply_motion(&g, &a).unwrap(), &apply_motion(&g, &b).unwrap()).unwrap();
        prop_assert!((before - after).abs() <= 1e-12 * before.max(1.0), "{} vs {}", before, after);
    }

    #[test]
    fn time_reflection_is_an_involution(b in (1usize..=5).prop_flat_map(ball_in)) {
        prop_assert_eq!(b.reflect_time().reflect_time(), b.clone());
        let mut c = b.center().to_vec();
        c[0] = 0.0;
        let on_plane = Ball::new(c, b.radius()).unwrap();
        prop_assert_eq!(on_plane.reflect_time(), on_plane.clone());
    }

    #[test]
    fn region_containment_is_monotone(
        lo in prop::collection::vec(-1.0f64..0.0, 2),
        grow in prop::collection::vec(0.0f64..1.0, 2),
        width in prop::collection::vec(0.5f64..2.0, 2),
        pool in prop::collection::vec(ball_in(2), 1..20),
        shift in prop::collection::vec(-1.0f64..1.0, 2),
    ) {
        let hi: Vec<f64> = lo.iter().zip(&width).map(|(l, w)| l + w).collect();
        let small = Region::Box { lo: lo.clone(), hi: hi.clone() };
        let big = Region::Box {
            lo: lo.iter().zip(&grow).map(|(l, g)| l - g).collect(),
            hi: hi.iter().zip(&grow).map(|(h, g)| h + g).collect(),
        };
        for b in &pool {
            if region_contains_ball(&small, b) {
                prop_assert!(region_contains_ball(&big, b));
            }
        }
        let r = index_monotonicity_check(&small, &big, &pool, &[EuclideanMotion::translation(shift)]).unwrap();
        prop_assert!(r.inclusion_holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernels_are_symmetric_and_cauchy_schwarz(spec in kernel(), (a, b) in (2usize..=3).prop_flat_map(|d| (ball_in(d), ball_in(d)))) {
        let ab = eval_kernel(&spec, &a, &b, &q()).unwrap();
        let ba = eval_kernel(&spec, &b, &a, &q()).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-10 * ab.abs().max(1e-300));
        let aa = eval_kernel(&spec, &a, &a, &q()).unwrap();
        let bb = eval_kernel(&spec, &b, &b, &q()).unwrap();
        prop_assert!(ab * ab <= aa * bb * (1.0 + 1e-7), "{} {} {}", ab, aa, bb);
    }

    #[test]
    fn kernels_are_motion_invariant(spec in kernel(), (a, b) in (2usize..=3).prop_flat_map(|d| (ball_in(d), ball_in(d))), seed in any::<u64>()) {
        let g = EuclideanMotion::random(a.dim(), 3.0, &mut ChaCha8Rng::seed_from_u64(seed));
        let before = eval_kernel(&spec, &a, &b, &q()).unwrap();
        let after = eval_kernel(&spec, &apply_motion(&g, &a).unwrap(), &apply_motion(&g, &b).unwrap(), &q()).unwrap();
        let tol = match spec {
            KernelSpec::W | KernelSpec::White => 1e-12 * before.abs().max(1.0),
            _ => 1e-10,
        };
        prop_assert!((before - after).abs() <= tol, "{} vs {}", before, after);
    }

    #[test]
    fn pseudo_metric_triangle_inequality(spec in kernel(), (a, b, c) in triple()) {
        let ab = pseudo_metric(&spec, &a, &b, &q()).unwrap();
        let bc = pseudo_metric(&spec, &b, &c, &q()).unwrap();
        let ac = pseudo_metric(&spec, &a, &c, &q()).unwrap();
        prop_assert!(ac <= ab + bc + 1e-9 * (ab + bc).max(1.0), "{} > {} + {}", ac, ab, bc);
    }

    #[test]
    fn covering_numbers_are_monotone(balls in prop::collection::vec(ball_in(2), 2..25), e1 in 0.01f64..10.0, e2 in 0.01f64..10.0) {
        let table = DistanceTable::compute(&KernelSpec::White, &balls, &q()).unwrap();
        let cover = FarthestPointCover::new(&table);
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        prop_assert!(cover.count_closed(lo) >= cover.count_closed(hi));
        prop_assert!(cover.count_open(lo) >= cover.count_open(hi));
        prop_assert!(cover.count_open(lo) >= cover.count_closed(lo));
        prop_assert!(cover.count_closed(lo) >= 1 && cover.count_open(lo) <= balls.len());
    }

    #[test]
    fn transforms_commute_with_permutations(
        values in prop::collection::vec(-3.0f64..3.0, 12),
        perm_cols in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
        perm_rows in Just((0..3).collect::<Vec<usize>>()).prop_shuffle(),
        which in 0usize..5,
    ) {
        let phi = [
            Transform::Identity,
            Transform::Tanh,
            Transform::Power { p: 3 },
            Transform::Clip { bound: 1.0 },
            Transform::Table { knots: vec![(-1.0, -2.0), (0.0, 0.0), (2.0, 1.0)] },
        ][which].clone();
        let balls: Vec<Ball> = (0..4).map(|k| Ball::new(vec![k as f64, 0.0], 0.5).unwrap()).collect();
        let batch = SampleBatch {
            balls: balls.clone(),
            n_samples: 3,
            values: values.clone(),
            seed: 0,
            rng_algorithm: String::new(),
            kernel: String::new(),
            jitter_applied: 0.0,
            transforms: vec![],
            extrapolated: false,
        };
        let permute = |v: &[f64]| -> Vec<f64> {
            perm_rows.iter().flat_map(|&r| perm_cols.iter().map(move |&c| v[r * 4 + c])).collect()
        };
        let mut permuted = batch.clone();
        permuted.values = permute(&values);
        permuted.balls = perm_cols.iter().map(|&c| balls[c].clone()).collect();
        let a = apply_transform(&phi, &batch).unwrap();
        let b = apply_transform(&phi, &permuted).unwrap();
        prop_assert_eq!(permute(&a.values), b.values);
    }
}
