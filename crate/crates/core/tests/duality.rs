use normlab::duality::{
    certify_domination, euclidean_extend, gauge_value, hahn_banach_extend,
    hahn_banach_extend_complex, LinearFunctional, MaxLinearGauge, PolyhedralCone,
};
use normlab::random;
use normlab::scalar::{modulus, real, Scalar};
use normlab::{Exponent, Field, Vector};
use proptest::prelude::*;
use rand::Rng;

// A functional dominated by the gauge: a convex combination of its rows.
fn dominated(gauge: &MaxLinearGauge, weights: &[f64]) -> Vector {
    let mut acc = Vector::zeros(gauge.dim(), gauge.rows()[0].field()).unwrap();
    for (c, w) in gauge.rows().iter().zip(weights) {
        acc = acc.checked_add(&c.scale(real(*w))).unwrap();
    }
    acc
}

fn restrict(lambda: &Vector, basis: &[Vector]) -> Vec<Scalar> {
    basis.iter().map(|w| w.pairing(lambda).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn real_extension_is_dominated(seed: u64, n in 2usize..5, rows in 2usize..7, k in 1usize..3) {
        let mut rng = random::rng(seed);
        let k = k.min(n - 1);
        let gauge = MaxLinearGauge::new(
            (0..rows).map(|_| random::vector(&mut rng, n, Field::Real)).collect(),
            false,
        ).unwrap();
        let w = random::convex_weights(&mut rng, rows);
        let target = dominated(&gauge, &w);
        let basis: Vec<Vector> = (0..k).map(|_| random::vector(&mut rng, n, Field::Real)).collect();
        let mu = restrict(&target, &basis);
        let lambda = hahn_banach_extend(&basis, &mu, &gauge).unwrap();
        for (b, m) in basis.iter().zip(&mu) {
            prop_assert!(modulus(lambda.eval(b).unwrap() - m) < 1e-8);
        }
        prop_assert!(certify_domination(&lambda, &gauge).unwrap());
        for _ in 0..20 {
            let v = random::vector(&mut rng, n, Field::Real);
            prop_assert!(lambda.eval(&v).unwrap().re <= gauge.eval(&v).unwrap() + 1e-8);
        }
    }

    #[test]
    fn complex_extension_real_part_is_dominated(seed: u64, n in 1usize..4, rows in 2usize..6) {
        let mut rng = random::rng(seed);
        let gauge = MaxLinearGauge::new(
            (0..rows).map(|_| random::vector(&mut rng, n, Field::Complex)).collect(),
            false,
        ).unwrap();
        let w = random::convex_weights(&mut rng, rows);
        let target = dominated(&gauge, &w);
        let basis = vec![random::vector(&mut rng, n, Field::Complex)];
        let mu = restrict(&target, &basis);
        let lambda = hahn_banach_extend_complex(&basis, &mu, &gauge).unwrap();
        prop_assert!(modulus(lambda.eval(&basis[0]).unwrap() - mu[0]) < 1e-8);
        for _ in 0..20 {
            let v = random::vector(&mut rng, n, Field::Complex);
            prop_assert!(lambda.eval(&v).unwrap().re <= gauge.eval(&v).unwrap() + 1e-8);
        }
    }

    #[test]
    fn euclidean_extension_keeps_the_norm(seed: u64, n in 2usize..6, k in 1usize..3, f in prop_oneof![Just(Field::Real), Just(Field::Complex)]) {
        let mut rng = random::rng(seed);
        let k = k.min(n);
        let basis: Vec<Vector> = (0..k).map(|_| random::vector(&mut rng, n, f)).collect();
        let mu: Vec<Scalar> = (0..k).map(|_| random::scalar(&mut rng, f)).collect();
        let lambda = euclidean_extend(&basis, &mu).unwrap();
        for (b, m) in basis.iter().zip(&mu) {
            prop_assert!(modulus(lambda.eval(b).unwrap() - m) < 1e-8);
        }
        // any other extension differs by something vanishing on W and so is
        // at least as large in the Euclidean dual norm
        let mut other = random::vector(&mut rng, n, f);
        let p = normlab::operators::orthogonal_projection(&basis).unwrap();
        other = other.checked_sub(&p.apply(&other).unwrap()).unwrap();
        let bigger = LinearFunctional::new(lambda.coeffs().checked_add(&other.conj()).unwrap());
        prop_assert!(bigger.dual_norm(Exponent::TWO) >= lambda.dual_norm(Exponent::TWO) * (1.0 - 1e-10));
    }

    #[test]
    fn linf_gauge_value_is_the_sup_norm(seed: u64, n in 1usize..6) {
        let v = random::vector(&mut random::rng(seed), n, Field::Real);
        let gauge = MaxLinearGauge::linf(n).unwrap();
        let g = gauge_value(&gauge, &v, 1e-12).unwrap();
        prop_assert!((g - v.p_norm(Exponent::INF)).abs() <= 1e-10 * g.max(1.0));
    }

    #[test]
    fn l1_gauge_value_is_the_l1_norm(seed: u64, n in 1usize..6) {
        let v = random::vector(&mut random::rng(seed), n, Field::Real);
        let gauge = MaxLinearGauge::l1(n).unwrap();
        prop_assert!((gauge.eval(&v).unwrap() - v.p_norm(Exponent::ONE)).abs() < 1e-12);
        let g = gauge_value(&gauge, &v, 1e-12).unwrap();
        prop_assert!((g - v.p_norm(Exponent::ONE)).abs() <= 1e-10 * g.max(1.0));
    }

    #[test]
    fn orthant_is_self_dual(seed: u64, n in 1usize..6) {
        let cone = PolyhedralCone::orthant(n).unwrap();
        let v = random::vector(&mut random::rng(seed), n, Field::Real);
        let nonneg = v.entries().iter().all(|z| z.re >= 0.0);
        prop_assert_eq!(cone.dual_contains(&v, 0.0).unwrap(), nonneg);
        prop_assert_eq!(cone.contains(&v, 1e-10).unwrap(), nonneg);
    }

    #[test]
    fn closed_cone_equals_its_double_dual(seed: u64, n in 2usize..4, m in 1usize..6) {
        let mut rng = random::rng(seed);
        let gens: Vec<Vector> = (0..m).map(|_| random::vector(&mut rng, n, Field::Real)).collect();
        let cone = PolyhedralCone::new(&gens).unwrap();
        for _ in 0..10 {
            let v = if rng.gen_bool(0.5) {
                let w = random::convex_weights(&mut rng, m);
                gens.iter().zip(&w).fold(Vector::zeros(n, Field::Real).unwrap(), |acc, (g, t)| {
                    acc.checked_add(&g.scale(real(*t * 3.0))).unwrap()
                })
            } else {
                random::vector(&mut rng, n, Field::Real)
            };
            prop_assert_eq!(
                cone.contains(&v, 1e-9).unwrap(),
                cone.double_dual_contains(&v, 1e-9).unwrap(),
                "{:?}", v
            );
        }
    }
}
