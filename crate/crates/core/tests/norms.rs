use normlab::convex::{jensen_gap, ConvexSampledFunction};
use normlab::duality::{dual_extremizer, dual_norm, LinearFunctional};
use normlab::random;
use normlab::scalar::{modulus, real};
use normlab::vector::polarize;
use normlab::{Exponent, Field, Vector};
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::TWO),
        Just(Exponent::INF),
        (1.01f64..8.0).prop_map(|p| Exponent::new(p).unwrap()),
    ]
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

fn pair(seed: u64, dim: usize, field: Field) -> (Vector, Vector) {
    let mut rng = random::rng(seed);
    (
        random::vector(&mut rng, dim, field),
        random::vector(&mut rng, dim, field),
    )
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn minkowski(seed: u64, dim in 1usize..12, p in exponent(), f in field()) {
        let (v, w) = pair(seed, dim, f);
        let lhs = v.checked_add(&w).unwrap().p_norm(p);
        prop_assert!(lhs <= (v.p_norm(p) + w.p_norm(p)) * (1.0 + 1e-12));
    }

    #[test]
    fn holder(seed: u64, dim in 1usize..12, p in exponent(), f in field()) {
        let (v, w) = pair(seed, dim, f);
        let lhs = modulus(v.pairing(&w).unwrap());
        prop_assert!(lhs <= v.p_norm(p) * w.p_norm(p.conjugate()) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn exponent_comparisons(seed: u64, dim in 1usize..12, a in exponent(), b in exponent()) {
        let (p, q) = if a.value() <= b.value() { (a, b) } else { (b, a) };
        let (v, _) = pair(seed, dim, Field::Complex);
        let (np, nq) = (v.p_norm(p), v.p_norm(q));
        prop_assert!(nq <= np * (1.0 + 1e-12));
        let factor = (dim as f64).powf(p.recip() - q.recip());
        prop_assert!(np <= factor * nq * (1.0 + 1e-12));
    }

    #[test]
    fn cauchy_schwarz_and_parallelogram(seed: u64, dim in 1usize..12, f in field()) {
        let (v, w) = pair(seed, dim, f);
        let ip = modulus(v.inner_product(&w).unwrap());
        prop_assert!(ip <= v.norm2() * w.norm2() * (1.0 + 1e-12));
        let s = v.checked_add(&w).unwrap().norm2().powi(2) + v.checked_sub(&w).unwrap().norm2().powi(2);
        let t = 2.0 * (v.norm2().powi(2) + w.norm2().powi(2));
        prop_assert!(close(s, t, 1e-12));
    }

    #[test]
    fn polarization_recovers_inner_product(seed: u64, dim in 1usize..10, f in field()) {
        let (v, w) = pair(seed, dim, f);
        let z = polarize(|x| x.norm2().powi(2), &v, &w, f).unwrap();
        let ip = v.inner_product(&w).unwrap();
        prop_assert!(modulus(z - ip) <= 1e-12 * v.norm2().max(1.0) * w.norm2().max(1.0));
    }

    #[test]
    fn dual_extremizer_attains(seed: u64, dim in 1usize..12, p in exponent(), f in field()) {
        let (_, w) = pair(seed, dim, f);
        prop_assume!(!w.is_zero());
        let v = dual_extremizer(&w, p).unwrap();
        let attained = modulus(v.pairing(&w).unwrap());
        let expected = w.p_norm(p.conjugate()) * v.p_norm(p);
        prop_assert!(close(attained, expected, 1e-12));
        let lambda = LinearFunctional::new(w.clone());
        prop_assert_eq!(dual_norm(&lambda, p), w.p_norm(p.conjugate()));
    }

    #[test]
    fn jensen_for_convex_powers(seed: u64, n in 1usize..8, p in 1.0f64..6.0) {
        let mut rng = random::rng(seed);
        let weights = random::convex_weights(&mut rng, n);
        let points: Vec<f64> = (0..n).map(|_| random::scalar(&mut rng, Field::Real).re * 3.0).collect();
        let gap = jensen_gap(|x: f64| x.abs().powf(p), &weights, &points).unwrap();
        prop_assert!(gap >= -1e-12);
    }

    #[test]
    fn sampled_convex_functions_pass_both_checks(p in 1.0f64..5.0, n in 3usize..30) {
        let grid: Vec<f64> = (0..n).map(|k| -1.0 + 2.0 * k as f64 / (n - 1) as f64).collect();
        let f = ConvexSampledFunction::sample(grid, |x| x.abs().powf(p)).unwrap();
        prop_assert!(f.difference_quotient_check());
        prop_assert!(f.midpoint_check());
        for k in 0..f.len() {
            let line = f.support_line(k).unwrap();
            for (x, y) in f.grid().iter().zip(f.values()) {
                prop_assert!(line.eval(*x) <= y + 1e-12);
            }
        }
    }
}

#[test]
fn norm_of_unit_vectors_is_one() {
    for p in [
        Exponent::ONE,
        Exponent::new(1.5).unwrap(),
        Exponent::TWO,
        Exponent::INF,
    ] {
        let e = Vector::unit(5, 3, Field::Complex).unwrap();
        assert_eq!(e.p_norm(p), 1.0);
        assert_eq!(e.scale(real(-2.0)).p_norm(p), 2.0);
    }
}
