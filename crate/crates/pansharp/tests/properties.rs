//! Property tests for the core algebraic invariants.

use proptest::prelude::*;

use pansharp::bvls::{bvls_solve, default_kkt_tol, default_max_iters, BoundedLsqProblem};
use pansharp::raster::{
    intensity, pixelwise_combine, MultibandImage, PixelOp, Raster, SpectralWeights,
};

fn raster_strategy(w: usize, h: usize) -> impl Strategy<Value = Raster> {
    prop::collection::vec(-1e3..1e3f64, w * h)
        .prop_map(move |s| Raster::new(w, h, s).unwrap())
}

fn image_strategy(k: usize, w: usize, h: usize) -> impl Strategy<Value = MultibandImage> {
    prop::collection::vec(raster_strategy(w, h), k)
        .prop_map(|bands| MultibandImage::new(bands).unwrap())
}

proptest! {
    #[test]
    fn intensity_is_linear_in_the_weights(
        ms in image_strategy(3, 6, 5),
        w1 in prop::collection::vec(0.0..1.0f64, 3),
        w2 in prop::collection::vec(0.0..1.0f64, 3),
        alpha in 0.0..1.0f64,
    ) {
        // Convex combination keeps every component inside [0, 1].
        let beta = 1.0 - alpha;
        let combined: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| alpha * a + beta * b).collect();
        let lhs = intensity(&ms, &SpectralWeights::new(combined).unwrap()).unwrap();
        let i1 = intensity(&ms, &SpectralWeights::new(w1).unwrap()).unwrap();
        let i2 = intensity(&ms, &SpectralWeights::new(w2).unwrap()).unwrap();
        for ((l, a), b) in lhs.samples().iter().zip(i1.samples()).zip(i2.samples()) {
            let want = alpha * a + beta * b;
            let tol = 1e-12 * want.abs().max(1.0);
            prop_assert!((l - want).abs() <= tol);
        }
    }

    #[test]
    fn one_hot_weights_select_a_band(
        ms in image_strategy(4, 5, 4),
        hot in 0usize..4,
    ) {
        let mut w = vec![0.0; 4];
        w[hot] = 1.0;
        let out = intensity(&ms, &SpectralWeights::new(w).unwrap()).unwrap();
        prop_assert_eq!(out.samples(), ms.band(hot).samples());
    }

    #[test]
    fn add_and_subtract_are_mutual_inverses(
        a in raster_strategy(7, 3),
        b in raster_strategy(7, 3),
    ) {
        let sum = pixelwise_combine(&a, &b, PixelOp::Add, 0.0).unwrap();
        let back = pixelwise_combine(&sum, &b, PixelOp::Subtract, 0.0).unwrap();
        for (x, y) in back.samples().iter().zip(a.samples()) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }

    #[test]
    fn bvls_solutions_are_feasible_and_certified(
        design in prop::collection::vec(-2.0..2.0f64, 30 * 3),
        target in prop::collection::vec(-3.0..3.0f64, 30),
    ) {
        let p = BoundedLsqProblem::unit_box(30, 3, design, target).unwrap();
        let tol = default_kkt_tol(&p);
        let sol = bvls_solve(&p, tol, default_max_iters(3)).unwrap();
        for &w in &sol.weights {
            prop_assert!((0.0..=1.0).contains(&w));
        }
        prop_assert!(sol.kkt_satisfied(tol));
    }

    #[test]
    fn full_matching_never_breaks_rank_order(
        src in raster_strategy(8, 8),
        target in raster_strategy(8, 8),
    ) {
        let out = pansharp::adjust::match_histogram_full(&src, &target, 512).unwrap();
        let mut pairs: Vec<(f64, f64)> = src
            .samples()
            .iter()
            .copied()
            .zip(out.samples().iter().copied())
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in pairs.windows(2) {
            prop_assert!(w[1].1 >= w[0].1 - 1e-12);
        }
    }
}
