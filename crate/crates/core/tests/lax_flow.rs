use proptest::prelude::*;
use qlax_core::algebra::{commutator, power, Algebra};
use qlax_core::laxflow::{
    deform, iterated_integrals, lax_residual, lax_solve, texp, LaxProblem, Path,
};
use qlax_core::psdo::kdv_pair;
use qlax_core::random;
use qlax_core::rational::{factorial, frac, int, Rational};
use qlax_core::{QSeries, RatMatrix, TPoly};

fn problem(seed: u64, n: usize, order: usize) -> LaxProblem<RatMatrix> {
    random::matrix_problem(&mut random::rng(seed), n, order, order - 1, 3)
}

fn trace_series(s: &Path<RatMatrix>, n: usize) -> Vec<Vec<Rational>> {
    s.coeffs()
        .iter()
        .map(|p| p.coeffs().iter().map(|m| m.trace(n)).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn time_ordered_exponential_solves_its_ode(seed in any::<u64>(), n in 1usize..=4, order in 1usize..=6) {
        let prob = problem(seed, n, order);
        let pq = deform(prob.path(), order).pq;
        let w = texp(&pq).unwrap();
        prop_assert_eq!(w.dt(), pq.mul(&w).unwrap());
        prop_assert_eq!(w.at_time(&int(0)), QSeries::one(order));
    }

    #[test]
    fn iterated_integrals_are_graded(seed in any::<u64>(), order in 1usize..=6) {
        let prob = problem(seed, 3, order);
        let d = deform(prob.path(), order);
        prop_assert!(!d.lossy);
        prop_assert_eq!(d.pq.val(), Some(1));
        for (i, a) in iterated_integrals(&d.pq).unwrap().iter().enumerate() {
            prop_assert!(a.val().is_none_or(|v| v >= i), "a_{} has valuation {:?}", i, a.val());
        }
    }

    #[test]
    fn conjugation_solves_deformed_equation(seed in any::<u64>(), n in 1usize..=4, order in 1usize..=6) {
        let prob = problem(seed, n, order);
        let sol = lax_solve(&prob).unwrap();
        prop_assert!(lax_residual(&sol.lq, &sol.pq).unwrap().is_zero());
        prop_assert_eq!(sol.lq.at_time(&int(0)), QSeries::constant(prob.initial().clone(), order));
    }

    #[test]
    fn traces_of_powers_are_conserved(seed in any::<u64>(), order in 1usize..=5) {
        let n = 3;
        let prob = problem(seed, n, order);
        let lq = lax_solve(&prob).unwrap().lq;
        let mut pw = QSeries::one(order);
        for m in 1..=3 {
            pw = pw.mul(&lq).unwrap();
            let tr = trace_series(&pw, n);
            let l0m = power(prob.initial(), m);
            prop_assert_eq!(tr[0].first().cloned().unwrap_or_else(|| int(0)), l0m.trace(n));
            for (k, coeffs) in tr.iter().enumerate() {
                for (j, c) in coeffs.iter().enumerate() {
                    if k > 0 || j > 0 {
                        prop_assert_eq!(c.clone(), int(0), "trace(L^{}) at q^{} t^{}", m, k, j);
                    }
                }
            }
        }
    }

    #[test]
    fn truncation_order_is_consistent(seed in any::<u64>(), order in 1usize..=4) {
        let prob = problem(seed, 3, order);
        let hi = LaxProblem::new(prob.path().clone(), prob.initial().clone(), order + 2).unwrap();
        prop_assert_eq!(lax_solve(&hi).unwrap().lq.truncate(order), lax_solve(&prob).unwrap().lq);
    }
}

#[test]
fn constant_path_matches_adjoint_series() {
    for seed in 0..10 {
        let mut rng = random::rng(seed);
        let p = random::matrix(&mut rng, 3, 3);
        let l0 = random::matrix(&mut rng, 3, 3);
        let order = 5;
        let lq =
            lax_solve(&LaxProblem::new(TPoly::constant(p.clone()), l0.clone(), order).unwrap())
                .unwrap()
                .lq;
        let mut ad_k = l0.clone();
        for k in 0..=order {
            let want = TPoly::monomial(ad_k.scale(&factorial(k).recip()), k);
            assert_eq!(lq.coeff(k), &want, "seed {seed}, order {k}");
            ad_k = commutator(&p, &ad_k);
        }
    }
}

#[test]
fn constant_path_exponential_matches_series_exp() {
    let p = random::matrix(&mut random::rng(3), 3, 3);
    let order = 5;
    let pq = deform(&TPoly::constant(p), order).pq;
    // exp of the series q·t·P computed by the q-series exponential
    let qtp = pq.map(|c| c.mul(&TPoly::monomial(RatMatrix::one(), 1)));
    assert_eq!(texp(&pq).unwrap(), qtp.exp().unwrap());
}

#[test]
fn kdv_residual_vanishes_through_third_order() {
    let (l, p) = kdv_pair();
    for order in 1..=3 {
        let prob = LaxProblem::new(TPoly::constant(p.clone()), l.clone(), order).unwrap();
        let sol = lax_solve(&prob).unwrap();
        assert_eq!(sol.pq.val(), Some(1));
        assert_eq!(sol.lq.val(), Some(0));
        assert!(
            lax_residual(&sol.lq, &sol.pq).unwrap().is_zero(),
            "N = {order}"
        );
        let mut ad_k = l.clone();
        for k in 0..=order {
            assert_eq!(
                sol.lq.coeff(k),
                &TPoly::monomial(ad_k.scale(&factorial(k).recip()), k)
            );
            ad_k = commutator(&p, &ad_k);
        }
    }
}

#[test]
fn kdv_with_time_dependent_path() {
    let (l, p) = kdv_pair();
    let path = TPoly::new(vec![p.clone(), l.scale(&frac(1, 3))]);
    let prob = LaxProblem::new(path, l, 2).unwrap();
    let sol = lax_solve(&prob).unwrap();
    assert!(lax_residual(&sol.lq, &sol.pq).unwrap().is_zero());
}

#[test]
fn nilpotent_flow_preserves_trace_and_determinant_pointwise() {
    let p = RatMatrix::from_ints(&[&[0, 1, 2], &[0, 0, 3], &[0, 0, 0]]);
    let l0 = RatMatrix::from_ints(&[&[2, 0, 1], &[1, -1, 0], &[0, 4, 1]]);
    let order = 6;
    let lq = lax_solve(&LaxProblem::new(TPoly::constant(p), l0.clone(), order).unwrap())
        .unwrap()
        .lq;
    for (q0, t0) in [
        (frac(1, 2), int(3)),
        (int(2), frac(-1, 3)),
        (int(1), int(1)),
    ] {
        let m = lq.eval_at(&q0, &t0);
        assert_eq!(m.trace(3), l0.trace(3));
        assert_eq!(m.det(3), l0.det(3));
    }
}
