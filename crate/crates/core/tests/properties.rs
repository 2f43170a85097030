// Copyright 2026 The ccsketch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

mod common;

use proptest::prelude::*;

use ccsketch::entropy::{
    entropy_from_moments, shannon_exact, shannon_from_moment_estimate, tsallis_from_moments, EntropyRoute,
};
use ccsketch::estimators::{estimate_samples, EstimatorKind};
use ccsketch::harness::exact_moment;
use ccsketch::lambda::{g, lambda_star, optimal_lambda, DEFAULT_TOLERANCE};
use ccsketch::{Sketch, SketchConfig};

use common::rel;

fn positive_vector(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3f64..1e3, 2..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn estimators_are_homogeneous(
        x in positive_vector(200),
        c in 1e-3f64..1e3,
        alpha in prop::sample::select(vec![0.1, 0.5, 0.8, 0.95, 0.999, 1.2, 1.5, 1.9]),
    ) {
        let scaled: Vec<f64> = x.iter().map(|v| v * c).collect();
        for kind in EstimatorKind::ALL.into_iter().filter(|k| k.supports(alpha)) {
            let base = estimate_samples(kind, alpha, &x, None).unwrap().value;
            let after = estimate_samples(kind, alpha, &scaled, None).unwrap().value;
            prop_assert!(rel(after, c.powf(alpha) * base) < 1e-12, "{kind} at {alpha}");
        }
    }

    #[test]
    fn op_is_mle_at_one_half(x in positive_vector(500)) {
        let op = estimate_samples(EstimatorKind::OptimalPower, 0.5, &x, None).unwrap().value;
        let mle = estimate_samples(EstimatorKind::MaximumLikelihood, 0.5, &x, None).unwrap().value;
        prop_assert!(rel(op, mle) < 1e-12);
    }

    #[test]
    fn op_at_minus_one_is_hm(x in positive_vector(300), alpha in 0.01f64..0.99) {
        let op = estimate_samples(EstimatorKind::OptimalPower, alpha, &x, Some(-1.0)).unwrap().value;
        let hm = estimate_samples(EstimatorKind::HarmonicMean, alpha, &x, None).unwrap().value;
        prop_assert!(rel(op, hm) < 1e-10);
    }

    #[test]
    fn lambda_star_is_a_minimum(alpha in prop::sample::select(vec![0.05, 0.3, 0.6, 0.85, 0.97, 1.1, 1.4, 1.8])) {
        let opt = optimal_lambda(alpha, DEFAULT_TOLERANCE).unwrap();
        let at = g(opt.lambda_star, alpha).unwrap();
        // At 10 tol the curvature term is below the rounding noise of g.
        let eps = 10.0 * DEFAULT_TOLERANCE;
        let floor = at * (1.0 - 1e-12);
        prop_assert!(g(opt.lambda_star - eps, alpha).unwrap() >= floor);
        prop_assert!(g(opt.lambda_star + eps, alpha).unwrap() >= floor);
        let step = 1e-3 * opt.lambda_star.abs().max(0.1);
        prop_assert!(g(opt.lambda_star - step, alpha).unwrap() > at);
        prop_assert!(g(opt.lambda_star + step, alpha).unwrap() > at);
        prop_assert_eq!(opt.lambda_star < 0.0, alpha < 1.0);
    }

    #[test]
    fn entropies_are_scale_invariant(a in positive_vector(100), c in 1e-2f64..1e2) {
        let scaled: Vec<f64> = a.iter().map(|v| v * c).collect();
        prop_assert!(rel(shannon_exact(&scaled).unwrap(), shannon_exact(&a).unwrap()) < 1e-12);
        for route in [EntropyRoute::Tsallis, EntropyRoute::Renyi] {
            for alpha in [0.9, 0.99, 1.01] {
                let exact = |v: &[f64]| {
                    entropy_from_moments(route, exact_moment(v, alpha).unwrap(), exact_moment(v, 1.0).unwrap(), alpha)
                        .unwrap()
                };
                prop_assert!((exact(&scaled) - exact(&a)).abs() < 1e-9 * (1.0 + exact(&a).abs()));
            }
        }
    }

    #[test]
    fn shannon_lies_between_zero_and_log_d(a in prop::collection::vec(0.0f64..10.0, 1..200)) {
        prop_assume!(a.iter().any(|&v| v > 0.0));
        let h = shannon_exact(&a).unwrap();
        prop_assert!(h >= 0.0 && h <= (a.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn entropy_gap_shrinks_towards_one(a in positive_vector(60)) {
        let h = shannon_exact(&a).unwrap();
        prop_assume!(h > 1e-3);
        let f1 = exact_moment(&a, 1.0).unwrap();
        for route in [EntropyRoute::Tsallis, EntropyRoute::Renyi] {
            let gaps: Vec<f64> = [0.9, 0.99, 0.999, 0.9999]
                .iter()
                .map(|&alpha| (entropy_from_moments(route, exact_moment(&a, alpha).unwrap(), f1, alpha).unwrap() - h).abs())
                .collect();
            prop_assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{route:?}: {gaps:?}");
        }
    }

    #[test]
    fn plug_in_with_oracle_moment_is_tsallis(a in positive_vector(50), seed in any::<u64>()) {
        let alpha = 0.999;
        let sketch = Sketch::from_vector(SketchConfig::new(alpha, 4, seed, a.len() as u64).unwrap(), &a).unwrap();
        let oracle = exact_moment(&a, alpha).unwrap();
        let est = shannon_from_moment_estimate(EntropyRoute::Tsallis, oracle, sketch.f1(), alpha).unwrap();
        prop_assert_eq!(est.shannon_estimate, tsallis_from_moments(oracle, sketch.f1(), alpha).unwrap());
    }

    #[test]
    fn sketch_f1_matches_first_moment_oracle(a in positive_vector(300), seed in any::<u64>()) {
        let sketch = Sketch::from_vector(SketchConfig::new(0.6, 3, seed, a.len() as u64).unwrap(), &a).unwrap();
        prop_assert!(rel(sketch.f1(), exact_moment(&a, 1.0).unwrap()) < 1e-9);
    }
}

#[test]
fn lambda_star_is_negative_below_one() {
    for i in 1..1000 {
        let alpha = i as f64 / 1000.0;
        assert!(lambda_star(alpha).unwrap().lambda_star < 0.0, "alpha {alpha}");
    }
}
