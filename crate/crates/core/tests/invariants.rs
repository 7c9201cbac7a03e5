use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use elastica::matching::dp_solve;
use elastica::samples::{self, random_open_curve};
use elastica::{
    closure_defect, forward, inverse, match_closed, match_open, project_to_closed, reparam_action, shape_geodesic,
    ElasticParams, GeodesicOptions, MatchOptions, PlaneCurve, ProjectionOptions, Reparameterization,
};

fn curve(seed: u64, segments: usize, max_angle: f64) -> PlaneCurve {
    random_open_curve(&mut ChaCha8Rng::seed_from_u64(seed), segments, max_angle)
}

fn max_gap(a: &PlaneCurve, b: &PlaneCurve) -> f64 {
    let (a, b) = (a.translate(-a.vertices()[0]), b.translate(-b.vertices()[0]));
    a.vertices()
        .iter()
        .zip(b.vertices())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest gap between two curves over a fine parameter grid, modulo translation.
fn sampled_gap(a: &PlaneCurve, b: &PlaneCurve) -> f64 {
    let offset = a.eval(0.0) - b.eval(0.0);
    (0..=1000)
        .map(|k| {
            let t = k as f64 / 1000.0;
            (a.eval(t) - b.eval(t) - offset).norm()
        })
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_undoes_forward(seed in any::<u64>(), segments in 3usize..40, rho in 0.1f64..2.0) {
        let c = curve(seed, segments, 0.9 * PI.min(PI / rho));
        let back = inverse(&forward(&c, ElasticParams::from_ratio(rho).unwrap())).unwrap();
        let shifted = c.translate(-c.vertices()[0]);
        prop_assert!(max_gap(&back, &shifted) <= 1e-9 * c.arclength());
    }

    #[test]
    fn norm_is_twice_b_root_length(seed in any::<u64>(), segments in 2usize..30, a in 0.1f64..4.0, b in 0.1f64..4.0) {
        let c = curve(seed, segments, 0.5);
        let q = forward(&c, ElasticParams::new(a, b).unwrap());
        prop_assert!((q.norm_sq() - 4.0 * b * b * c.arclength()).abs() <= 1e-12 * q.norm_sq());
    }

    #[test]
    fn scaling_multiplies_by_root_lambda(seed in any::<u64>(), lambda in 0.05f64..20.0, rho in 0.1f64..3.0) {
        let c = curve(seed, 12, 0.4);
        let p = ElasticParams::from_ratio(rho).unwrap();
        let q = forward(&c, p);
        let scaled = forward(&c.scale(lambda), p);
        for (x, y) in scaled.samples().iter().zip(q.samples()) {
            prop_assert!((x - y * lambda.sqrt()).norm() <= 1e-12 * lambda.sqrt() * y.norm());
        }
    }

    #[test]
    fn warp_action_preserves_norm(seed in any::<u64>(), cuts in prop::collection::vec((0.01f64..0.99, 0.01f64..0.99), 1..6)) {
        let mut bp: Vec<f64> = cuts.iter().map(|c| c.0).collect();
        let mut vals: Vec<f64> = cuts.iter().map(|c| c.1).collect();
        bp.sort_by(f64::total_cmp);
        vals.sort_by(f64::total_cmp);
        let breakpoints: Vec<f64> = std::iter::once(0.0).chain(bp).chain(std::iter::once(1.0)).collect();
        let values: Vec<f64> = std::iter::once(0.0).chain(vals).chain(std::iter::once(1.0)).collect();
        prop_assume!(breakpoints.windows(2).all(|w| w[1] - w[0] > 1e-6));
        let gamma = Reparameterization::new(breakpoints, values).unwrap();
        let q = forward(&curve(seed, 10, 0.6), ElasticParams::from_ratio(0.7).unwrap());
        let acted = reparam_action(&gamma, &q);
        prop_assert!((acted.norm_sq() - q.norm_sq()).abs() <= 1e-12 * q.norm_sq());
    }
}

#[test]
fn refining_the_grid_never_raises_dp_cost() {
    let p = ElasticParams::srvf();
    for seed in 0..6 {
        let q1 = forward(&curve(seed, 15, 0.7), p);
        let q2 = forward(&curve(seed + 100, 23, 0.7), p);
        let mut previous = f64::INFINITY;
        for n in [8, 16, 32, 64] {
            let cost = dp_solve(&q1, &q2, n, 4).unwrap().cost;
            assert!(cost <= previous + 1e-10, "seed {seed}, n {n}: {cost} > {previous}");
            previous = cost;
        }
    }
}

#[test]
fn matched_distance_ignores_grid_warps() {
    let gamma = Reparameterization::from_grid_path(&[(0, 0), (16, 10), (40, 30), (64, 64)], 64).unwrap();
    let opts = MatchOptions {
        grid_n: 64,
        ..MatchOptions::default()
    };
    for pair in samples::figure_pairs() {
        for rho in [0.5, 1.0, 2.0] {
            let p = ElasticParams::from_ratio(rho).unwrap();
            let plain = match_open(&pair.first, &pair.second, p, &opts).unwrap().distance;
            let warped_curve = pair.second.reparameterize(&gamma).unwrap();
            let warped = match_open(&pair.first, &warped_curve, p, &opts).unwrap().distance;
            assert!(
                (plain - warped).abs() <= 0.02 * plain,
                "{} rho {rho}: {plain} vs {warped}",
                pair.name
            );
        }
    }
}

#[test]
fn closed_match_finds_shifted_start() {
    let c = samples::flower(40, 5, 0.3);
    let shifted = c
        .cyclic_shift(13)
        .unwrap()
        .rotate(0.4)
        .translate(Complex64::new(2.0, -1.0));
    for rho in [0.5, 1.0] {
        let m = match_closed(
            &c,
            &shifted,
            ElasticParams::from_ratio(rho).unwrap(),
            &MatchOptions::default(),
        )
        .unwrap();
        assert!(m.distance < 1e-8, "rho {rho}: {}", m.distance);
        // Five-fold symmetry makes every shift of 8 equivalent.
        assert_eq!((m.seed + 13) % 8, 0, "seed {}", m.seed);
    }
}

#[test]
fn projected_open_curves_close() {
    for c in [samples::horseshoe(50), samples::hook(50), samples::arc(50, PI)] {
        let c = c.normalize(true, true);
        for rho in [0.17, 0.5, 1.0, 1.25] {
            let q = forward(&c, ElasticParams::from_ratio(rho).unwrap());
            let out = project_to_closed(&q, ProjectionOptions::default()).unwrap();
            assert!(closure_defect(&out.q).norm() <= out.residual + 1e-15);
            let closed = inverse(&out.q).unwrap();
            let n = closed.vertices().len();
            let gap = (closed.vertices()[n - 1] - closed.vertices()[0]).norm();
            assert!(gap <= out.residual * (1.0 + 1e-9) + 1e-15, "{gap} vs {}", out.residual);
            assert!(out.residual <= ProjectionOptions::default().tolerance_for(&q));
        }
    }
}

#[test]
fn geodesic_curves_interpolate_between_endpoints() {
    let pair = &samples::figure_pairs()[0];
    let opts = GeodesicOptions {
        steps: 5,
        fixed_length: true,
        matching: MatchOptions {
            grid_n: 48,
            ..MatchOptions::default()
        },
        ..GeodesicOptions::default()
    };
    let geo = shape_geodesic(
        &pair.first,
        &pair.second,
        ElasticParams::from_ratio(0.5).unwrap(),
        &opts,
    )
    .unwrap();
    assert_eq!(geo.curves.len(), 5);
    assert!(sampled_gap(&geo.curves[0], &geo.start) < 1e-9);
    assert!(sampled_gap(&geo.curves[4], &geo.end) < 1e-9);
    let lengths: Vec<f64> = geo.curves.iter().map(PlaneCurve::arclength).collect();
    assert!(lengths.iter().all(|l| (l - 1.0).abs() < 1e-9), "{lengths:?}");
}
