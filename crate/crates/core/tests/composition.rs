mod common;

use common::{mi, plain_at, plain_compose, q, tuple_fdb};
use mvbell::multiindex::{enumerate_up_to, pow};
use mvbell::verify::{random_pair, random_series, random_vector};
use mvbell::{fdb, Error, FaaDiBruno, MultiIndex, Rational, TaylorSeries};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scalar(center: Rational, derivs: &[Rational]) -> TaylorSeries {
    TaylorSeries::from_coeffs(
        1,
        derivs.len() as u32 - 1,
        vec![center],
        derivs
            .iter()
            .enumerate()
            .map(|(i, c)| (mi(&[i as u32]), vec![c.clone()])),
    )
    .unwrap()
}

fn derivs(s: &TaylorSeries) -> Vec<Rational> {
    (0..=s.order())
        .map(|i| s.derivative_at(&mi(&[i])).unwrap().swap_remove(0))
        .collect()
}

#[test]
fn engine_and_series_oracle_match_plain_substitution() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let engine = FaaDiBruno::new();
    for _ in 0..30 {
        let (d1, d2, d3) = (
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
            rng.gen_range(1..=2),
        );
        let order = rng.gen_range(0..=4);
        let (f, g) = random_pair(&mut rng, d1, d2, d3, order);
        let plain = plain_compose(&f, &g);
        let oracle = f.compose_oracle(&g).unwrap();
        let tensor = engine.all(&f, &g, order).unwrap();
        assert_eq!(tensor.len(), enumerate_up_to(d1, order).len());
        for (n, v) in &tensor.values {
            let want = plain_at(&plain, n, d3);
            assert_eq!(v, &want, "fdb at {n:?}");
            assert_eq!(oracle.derivative_at(n).unwrap(), want, "oracle at {n:?}");
        }
    }
}

#[test]
fn scalar_path_matches_tuple_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let c = random_vector(&mut rng, 1);
        let g = random_series(&mut rng, 1, 6, c);
        let f = random_series(&mut rng, 1, 6, g.value());
        let (fd, gd) = (derivs(&f), derivs(&g));
        for n in 0..=6 {
            assert_eq!(
                fdb::fdb_1d(&f, &g, n).unwrap(),
                tuple_fdb(&fd, &gd, n),
                "n={n}"
            );
        }
    }
}

#[test]
fn third_derivative_worked_example() {
    // (f∘g)''' = f'g''' + 3f''g'g'' + f'''g'³
    let (f1, f2, f3) = (q(2, 1), q(-1, 3), q(5, 2));
    let (g1, g2, g3) = (q(3, 1), q(1, 2), q(-4, 1));
    let g = scalar(q(1, 1), &[q(7, 1), g1.clone(), g2.clone(), g3.clone()]);
    let f = scalar(q(7, 1), &[q(0, 1), f1.clone(), f2.clone(), f3.clone()]);
    let want = &f1 * &g3 + q(3, 1) * &f2 * &g1 * &g2 + &f3 * &g1 * &g1 * &g1;
    assert_eq!(fdb::fdb_1d(&f, &g, 3).unwrap(), want);
    assert_eq!(fdb::fdb_derivative(&f, &g, &mi(&[3])).unwrap(), vec![want]);
}

#[test]
fn linear_in_the_outer_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let (f1, g) = random_pair(&mut rng, 2, 2, 2, 3);
        let f2 = random_series(&mut rng, 2, 3, g.value());
        let c = q(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        let combo = f1.add(&f2.scale(&c)).unwrap();
        let lhs = fdb::fdb_all(&combo, &g, 3).unwrap();
        let a = fdb::fdb_all(&f1, &g, 3).unwrap();
        let b = fdb::fdb_all(&f2, &g, 3).unwrap();
        for (n, v) in &lhs.values {
            let want: Vec<Rational> = a.values[n]
                .iter()
                .zip(&b.values[n])
                .map(|(x, y)| x + &c * y)
                .collect();
            assert_eq!(v, &want);
        }
    }
}

#[test]
fn identity_outer_function_returns_inner_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = random_vector(&mut rng, 2);
    let g = random_series(&mut rng, 2, 3, c);
    let f = TaylorSeries::identity(3, g.value());
    for n in enumerate_up_to(2, 3).into_iter().filter(|n| !n.is_zero()) {
        assert_eq!(
            fdb::fdb_derivative(&f, &g, &n).unwrap(),
            g.derivative_at(&n).unwrap()
        );
    }
}

#[test]
fn exponential_of_linear_form_has_monomial_derivatives() {
    // ∂ⁿ exp(u·(x−c)) at c is uⁿ
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for d in 1..=3 {
        let u = random_vector(&mut rng, d);
        let c = random_vector(&mut rng, d);
        let x = TaylorSeries::identity(4, c.clone());
        let shifted = x.sub(&TaylorSeries::constant(c.clone(), 4, c)).unwrap();
        let e = shifted.dot(&u).unwrap().exp_series().unwrap();
        for n in enumerate_up_to(d, 4) {
            assert_eq!(e.derivative_at(&n).unwrap(), vec![pow(&u, &n).unwrap()]);
        }
    }
}

#[test]
fn one_dimensional_composition_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let c = random_vector(&mut rng, 1);
        let h = random_series(&mut rng, 1, 4, c);
        let g = random_series(&mut rng, 1, 4, h.value());
        let f = random_series(&mut rng, 1, 4, g.value());
        let left = f.compose_oracle(&g).unwrap().compose_oracle(&h).unwrap();
        let right = f.compose_oracle(&g.compose_oracle(&h).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn generating_identity_holds_for_random_inner_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..5 {
        let (d1, d2) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let c = random_vector(&mut rng, d1);
        let g = random_series(&mut rng, d2, 4, c);
        let u = random_vector(&mut rng, d2);
        let report = fdb::check_generating_identity(&g, &u, 4).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
    }
}

#[test]
fn cache_does_not_change_results() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (f, g) = random_pair(&mut rng, 2, 2, 1, 4);
    let cached = FaaDiBruno::new();
    let first = cached.all(&f, &g, 4).unwrap();
    let second = cached.all(&f, &g, 4).unwrap();
    assert!(cached.cached_polynomials() > 0);
    assert_eq!(first, second);
    assert_eq!(first, FaaDiBruno::uncached().all(&f, &g, 4).unwrap());
}

#[test]
fn contract_violations_are_reported() {
    let g = TaylorSeries::identity(2, vec![q(1, 1), q(2, 1)]);
    let wrong_center = TaylorSeries::identity(2, vec![q(0, 1), q(0, 1)]);
    assert!(matches!(
        fdb::fdb_derivative(&wrong_center, &g, &mi(&[1, 0])),
        Err(Error::Contract(_))
    ));
    let f = TaylorSeries::identity(2, g.value());
    assert!(matches!(
        fdb::fdb_derivative(&f, &g, &mi(&[2, 1])),
        Err(Error::Truncation {
            requested: 3,
            order: 2
        })
    ));
    assert!(matches!(
        fdb::fdb_derivative(&f, &g, &mi(&[1])),
        Err(Error::Contract(_))
    ));
    let scalar_f = TaylorSeries::constant(vec![Rational::one()], 2, vec![Rational::zero()]);
    assert!(fdb::fdb_all(&scalar_f, &g, 2).is_err());
}

#[test]
fn zero_index_is_the_value_of_the_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let (f, g) = random_pair(&mut rng, 2, 3, 2, 2);
    let zero = MultiIndex::zeros(2);
    assert_eq!(fdb::fdb_derivative(&f, &g, &zero).unwrap(), f.value());
}
