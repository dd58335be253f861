//! Property tests for the algebraic laws the crate relies on.

mod common;

use common::*;
use cosdyn::conditions::{sup_product, BorelSet, PartitionScheme};
use cosdyn::dynamics::{
    adjoint_s, adjoint_t, apply_function_operator, cosine, duality_pairing, forward_weight_product,
    Direction, FamilyMember,
};
use cosdyn::error::Error;
use cosdyn::measure::{AtomicMeasure, CompactWindow};
use cosdyn::witness::{build_witness_member, certify_norm_bounds, BallSpec};
use proptest::prelude::*;

proptest! {
    #[test]
    fn tv_distance_is_a_metric(x in measure(), y in measure(), z in measure()) {
        prop_assert_eq!(x.tv_distance(&y), y.tv_distance(&x));
        prop_assert_eq!(x.tv_distance(&x), 0.0);
        let direct = x.tv_distance(&z);
        let detour = x.tv_distance(&y) + y.tv_distance(&z);
        prop_assert!(direct <= detour * (1.0 + 1e-12));
    }

    #[test]
    fn restriction_splits_total_variation_exactly(m in measure(), cut in dyadic_position()) {
        let left = m.restrict(|t| t < cut);
        let right = m.restrict(|t| t >= cut);
        // Dyadic masses with bounded exponent range add without rounding.
        prop_assert_eq!(
            left.total_variation() + right.total_variation(),
            m.total_variation()
        );
    }

    #[test]
    fn normalization_is_idempotent(m in measure()) {
        let again = AtomicMeasure::new(m.atoms().iter().map(|a| (a.position, a.mass)));
        prop_assert_eq!(again, m);
    }

    #[test]
    fn adjoint_actions_form_a_semigroup(
        sys in exact_system(),
        m in measure(),
        a in 0u32..=6,
        b in 0u32..=6,
    ) {
        let forward_composed = adjoint_t(&sys, &adjoint_t(&sys, &m, a), b);
        assert_measures_close(&forward_composed, &adjoint_t(&sys, &m, a + b), 1e-12);

        let backward_composed = adjoint_s(&sys, &adjoint_s(&sys, &m, a), b);
        assert_measures_close(&backward_composed, &adjoint_s(&sys, &m, a + b), 1e-12);
    }

    #[test]
    fn backward_inverts_forward(sys in exact_system(), m in measure(), n in 0u32..=8) {
        let round_trip = adjoint_s(&sys, &adjoint_t(&sys, &m, n), n);
        assert_measures_close(&round_trip, &m, 1e-12);
        let other_way = adjoint_t(&sys, &adjoint_s(&sys, &m, n), n);
        assert_measures_close(&other_way, &m, 1e-12);
    }

    #[test]
    fn cosine_satisfies_the_functional_equation(
        sys in exact_system(),
        m in measure(),
        n in 0u32..=5,
        gap in 0u32..=5,
    ) {
        // 2 C_m C_n = C_{m+n} + C_{m-n} with m = n + gap.
        let big = n + gap;
        let lhs = cosine(&sys, &cosine(&sys, &m, n), big).scaled(2.0);
        let rhs = AtomicMeasure::linear_combine(
            1.0,
            &cosine(&sys, &m, big + n),
            1.0,
            &cosine(&sys, &m, gap),
        );
        assert_measures_close(&lhs, &rhs, 1e-12);
    }

    #[test]
    fn adjoint_and_function_side_agree_in_duality(
        sys in translation_system(),
        m in measure(),
        n in 0u32..=10,
    ) {
        let f = |t: f64| (0.3 * t).sin() + 0.25 * t.cos();
        let image = cosine(&sys, &m, n);
        let function_side = |t: f64| {
            0.5 * (apply_function_operator(&sys, f, t, n, Direction::Forward)
                + apply_function_operator(&sys, f, t, n, Direction::Backward))
        };
        let lhs = duality_pairing(&image, f);
        let rhs = duality_pairing(&m, function_side);
        // Both pairings sum the same products; scale the tolerance by the
        // term magnitudes on both sides so cancellation cannot starve it.
        let lhs_terms: f64 = image
            .atoms()
            .iter()
            .map(|a| (a.mass * f(a.position)).abs())
            .sum();
        let rhs_terms: f64 = m
            .atoms()
            .iter()
            .map(|a| (a.mass * function_side(a.position)).abs())
            .sum();
        let scale = (lhs_terms + rhs_terms).max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * scale);
    }

    #[test]
    fn weight_products_satisfy_the_cocycle_law(
        sys in translation_system(),
        t in dyadic_position(),
        m in 0u32..=12,
        n in 0u32..=12,
    ) {
        let whole = forward_weight_product(&sys, t, m + n);
        let shifted = sys.alpha.apply_iter(t, m as i64);
        let split = forward_weight_product(&sys, t, m) * forward_weight_product(&sys, shifted, n);
        prop_assert!((whole - split).abs() <= 1e-12 * whole.abs().max(split.abs()));
    }

    #[test]
    fn single_step_image_is_bounded_by_the_weight_sup(
        sys in translation_system(),
        m in measure(),
    ) {
        let image = adjoint_t(&sys, &m, 1);
        let bound = sys.weight.sup() * m.total_variation();
        prop_assert!(image.total_variation() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn sup_products_grow_with_the_window(
        sys in translation_system(),
        lo in dyadic_position(),
        inner in 1u32..=16,
        outer_extra in 0u32..=16,
        n in 1u32..=6,
        forward in any::<bool>(),
    ) {
        // Same left endpoint and a step that divides both spans, so the
        // smaller window samples a subset of the larger window's grid.
        let step = 0.25;
        let small = CompactWindow::new(lo, lo + inner as f64 * step).unwrap();
        let large =
            CompactWindow::new(lo, lo + (inner + outer_extra) as f64 * step).unwrap();
        let dir = if forward { Direction::Forward } else { Direction::Backward };
        let sup_small = sup_product(&sys, &small, n, dir, step).unwrap();
        let sup_large = sup_product(&sys, &large, n, dir, step).unwrap();
        prop_assert!(sup_small <= sup_large);
    }

    #[test]
    fn sup_products_are_stable_under_grid_refinement(
        sys in translation_system(),
        lo in dyadic_position(),
        len in 1u32..=16,
        n in 1u32..=6,
    ) {
        let window = CompactWindow::new(lo, lo + len as f64 * 0.25).unwrap();
        let coarse = sup_product(&sys, &window, n, Direction::Forward, 0.25).unwrap();
        let fine = sup_product(&sys, &window, n, Direction::Forward, 0.125).unwrap();
        // Halving a dyadic step keeps every coarse point on the fine grid.
        prop_assert!(coarse <= fine);
    }

    #[test]
    fn witness_lambda_squares_to_the_mass_ratio(
        sys in translation_system(),
        mu in measure(),
        nu in measure(),
        n in 1u32..=8,
    ) {
        prop_assume!(!mu.is_empty() && !nu.is_empty());
        let window = CompactWindow::new(-8.0, 8.0).unwrap();
        let scheme = PartitionScheme::e_equals_k(window);
        let ball_mu = BallSpec::new(mu, 1.0).unwrap();
        let ball_nu = BallSpec::new(nu, 1.0).unwrap();
        let member = FamilyMember::power(sys, n).unwrap();
        let report = build_witness_member(&member, n, &ball_mu, &ball_nu, &scheme).unwrap();
        let ratio = report.norms.b() / report.norms.a();
        prop_assert!((report.lambda * report.lambda - ratio).abs() <= 1e-12 * ratio);
    }

    #[test]
    fn witness_certification_holds_for_random_splits(
        sys in translation_system(),
        mu in measure(),
        nu in measure(),
        cuts in (-8192i32..=8192, -8192i32..=8192),
        n in 1u32..=8,
    ) {
        prop_assume!(!mu.is_empty() && !nu.is_empty());
        let window = CompactWindow::new(-8.0, 8.0).unwrap();
        let k = BorelSet::window(&window);
        let c1 = (cuts.0.min(cuts.1)) as f64 / 1024.0;
        let c2 = (cuts.0.max(cuts.1)) as f64 / 1024.0;
        let a = k.intersect(&BorelSet::from_intervals([(-8.0, c1)]).unwrap());
        let d = k.intersect(&BorelSet::from_intervals([(c1, c2)]).unwrap());
        let e = k.difference(&a.union(&d));
        let scheme = PartitionScheme::new(a, d, e, window).unwrap();

        let ball_mu = BallSpec::new(mu.clone(), 1.0).unwrap();
        let ball_nu = BallSpec::new(nu.clone(), 1.0).unwrap();
        let member = FamilyMember::power(sys, n).unwrap();
        let report = match build_witness_member(&member, n, &ball_mu, &ball_nu, &scheme) {
            Ok(report) => report,
            // A cut that swallows all the mass of one side is fine to skip.
            Err(Error::DegenerateWitness(_)) => return Ok(()),
            Err(other) => return Err(TestCaseError::fail(other.to_string())),
        };
        let cert = certify_norm_bounds(&report, &member, &scheme, &mu, &nu, 0.25).unwrap();
        prop_assert!(cert.all_pass, "{:?}", cert);
    }
}
