use normlab::dyadic::{
    auxiliary_sides, difference, distribution_measure, expectation, haar_reconstruct,
    haar_transform, khintchine_report, lambda_grid, layer_cake, maximal_fn,
    modified_weak_type_pairs, rademacher_sum, square_fn, stopping_decompose, tail_integral,
    weak_type_sup, DyadicInterval, DyadicStepFunction, StoppingMode,
};
use normlab::random::{self, StepFamily};
use normlab::scalar::modulus;
use normlab::{Exponent, Field};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

fn family() -> impl Strategy<Value = StepFamily> {
    prop::sample::select(StepFamily::ALL.to_vec())
}

fn sample(seed: u64, fam: StepFamily, level: u32, f: Field) -> DyadicStepFunction {
    random::step_function_from(&mut random::rng(seed), fam, level, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn expectations_are_self_adjoint_projections(seed: u64, level in 0u32..7, k in 0u32..8, f in field()) {
        let mut rng = random::rng(seed);
        let a = random::step_function(&mut rng, level, f);
        let b = random::step_function(&mut rng, level, f);
        let ea = expectation(&a, k);
        prop_assert!(modulus(ea.pairing(&b) - a.pairing(&expectation(&b, k))) < 1e-12);
        prop_assert!(expectation(&ea, k).sub(&ea).sup_norm() < 1e-12);
    }

    #[test]
    fn martingale_differences_are_orthogonal(seed: u64, level in 1u32..7, f in field()) {
        let g = random::step_function(&mut random::rng(seed), level, f);
        let d: Vec<_> = (0..=level).map(|j| difference(&g, j)).collect();
        for i in 0..d.len() {
            for j in 0..i {
                prop_assert!(modulus(d[i].pairing(&d[j].conj())) < 1e-12);
            }
        }
        let total = d.iter().skip(1).fold(d[0].clone(), |acc, x| acc.add(x));
        prop_assert!(total.sub(&g).sup_norm() < 1e-12);
    }

    #[test]
    fn square_function_l2_identity(seed: u64, fam in family(), level in 0u32..8, f in field()) {
        let g = sample(seed, fam, level, f);
        let s = square_fn(&g);
        let lhs = s.l2_norm_sq();
        let rhs = g.l2_norm_sq();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn maximal_weak_type_one(seed: u64, fam in family(), level in 0u32..8, f in field()) {
        let g = sample(seed, fam, level, f);
        let m = maximal_fn(&g);
        let (sup, _) = weak_type_sup(&m).unwrap();
        prop_assert!(sup <= g.l1_norm() * (1.0 + 1e-12));
        for (lam, lhs, rhs) in modified_weak_type_pairs(&g) {
            prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-15, "λ={} {} {}", lam, lhs, rhs);
        }
    }

    #[test]
    fn maximal_lp_bound(seed: u64, fam in family(), level in 0u32..8, p in 1.05f64..6.0) {
        let g = sample(seed, fam, level, Field::Complex);
        let m = maximal_fn(&g);
        let q = p / (p - 1.0);
        let p = Exponent::new(p).unwrap();
        prop_assert!(m.lp_norm(p) <= q * g.lp_norm(p) * (1.0 + 1e-12));
        prop_assert!(m.sup_norm() <= g.sup_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn layer_cake_matches_direct_integral(seed: u64, fam in family(), level in 0u32..8, p in 0.3f64..5.0) {
        let g = sample(seed, fam, level, Field::Complex).abs();
        let (direct, layered) = layer_cake(&g, p).unwrap();
        prop_assert!((direct - layered).abs() <= 1e-10 * direct.max(1.0));
    }

    #[test]
    fn distribution_is_monotone_and_chebyshev(seed: u64, level in 0u32..8) {
        let g = random::step_function(&mut random::rng(seed), level, Field::Real).abs();
        let vals: Vec<f64> = g.moduli().collect();
        let mut prev = 1.0;
        for lam in lambda_grid(&vals) {
            let d = distribution_measure(&g, lam).unwrap();
            prop_assert!(d <= prev);
            prop_assert!(lam * d <= tail_integral(&g, lam, false).unwrap() * (1.0 + 1e-12));
            prop_assert!(lam * d <= g.l1_norm() * (1.0 + 1e-12));
            prev = d;
        }
    }

    #[test]
    fn haar_parseval_and_inverse(seed: u64, fam in family(), level in 0u32..8, f in field()) {
        let g = sample(seed, fam, level, f);
        let h = haar_transform(&g);
        prop_assert!((h.energy() - g.l2_norm_sq()).abs() <= 1e-12 * g.l2_norm_sq().max(1.0));
        let back = haar_reconstruct(&h).unwrap();
        prop_assert!(back.sub(&g).sup_norm() <= 1e-12 * g.sup_norm().max(1.0));
    }

    #[test]
    fn stopping_replacement_is_bounded(seed: u64, fam in family(), level in 1u32..7, frac in 0.1f64..0.9) {
        let g = sample(seed, fam, level, Field::Complex);
        let m = maximal_fn(&g);
        let lam = frac * m.sup_norm() + 1e-9;
        let d = stopping_decompose(&g, lam, StoppingMode::Average).unwrap();
        prop_assume!(!d.degenerate);
        prop_assert!(d.replaced.sup_norm() <= lam * (1.0 + 1e-12));
        prop_assert!(d.parent_measure() <= 2.0 * d.stopped_measure() + 1e-15);
        let stopped = (0..g.len())
            .filter(|&c| m.values()[c].re > lam)
            .count() as f64 / g.len() as f64;
        prop_assert!((d.stopped_measure() - stopped).abs() < 1e-15);
        prop_assert!(modulus(d.replaced.integral() - g.integral()) < 1e-12 * g.l1_norm().max(1.0));
    }

    #[test]
    fn auxiliary_sides_at_base_cases(seed: u64, n in 1usize..4, level in 0u32..6, p in 1.0f64..4.0) {
        let mut rng = random::rng(seed);
        let betas: Vec<_> = (0..n).map(|_| random::step_function(&mut rng, level, Field::Real).abs()).collect();
        let (lhs, rhs) = auxiliary_sides(&betas, p, Exponent::new(p).unwrap()).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        let (lhs, rhs) = auxiliary_sides(&betas, p, Exponent::INF).unwrap();
        // max_j E_j(β_j) ≤ M(max_j β_j), then Doob
        if p > 1.0 {
            prop_assert!(lhs <= p / (p - 1.0) * rhs * (1.0 + 1e-12));
        }
    }
}

#[test]
fn khintchine_fourth_moment_by_enumerating_signs() {
    let mut rng = random::rng(7);
    for n in 1..=8 {
        let a: Vec<f64> = (0..n)
            .map(|_| random::scalar(&mut rng, Field::Real).re)
            .collect();
        let mut moment = 0.0;
        for signs in 0u32..1 << n {
            let s: f64 = a
                .iter()
                .enumerate()
                .map(|(j, x)| if signs >> j & 1 == 1 { -x } else { *x })
                .sum();
            moment += s.powi(4);
        }
        moment /= f64::from(1u32 << n);
        let r = khintchine_report(&a, &[1.0, 2.0, 4.0]).unwrap();
        assert!((r.fourth_moment - moment).abs() <= 1e-12 * moment.max(1.0));
        assert!((r.fourth_moment_formula - moment).abs() <= 1e-12 * moment.max(1.0));
        assert!(r.sandwich_excess() <= 1e-12);
        let f = rademacher_sum(&a).unwrap();
        assert!((f.sup_norm() - r.sup).abs() < 1e-12);
    }
}

#[test]
fn maximal_function_of_an_indicator() {
    let i = DyadicInterval::new(2, 1).unwrap();
    let g = DyadicStepFunction::indicator(i, 3).unwrap();
    let m = maximal_fn(&g).real_values().unwrap();
    assert_eq!(m, vec![0.5, 0.5, 1.0, 1.0, 0.25, 0.25, 0.25, 0.25]);
}
