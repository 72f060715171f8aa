use normlab::random;
use normlab::scalar::{modulus, real, Scalar};
use normlab::seqspace::{
    convergence_check, dual_extremizer_seq, fubini_check, lp_norm_seq, pairing_abs, pairing_seq,
    product_key, split_product_key, truncate, unordered_sum, ConvergenceMode, SparseFn,
};
use normlab::{Exponent, Field};
use proptest::prelude::*;
use rand::Rng;

fn sparse(seed: u64, n: usize, f: Field) -> SparseFn {
    let mut rng = random::rng(seed);
    let mut out = SparseFn::new();
    for _ in 0..n {
        let key = format!("k{}", rng.gen_range(0..3 * n.max(1)));
        out.insert(key.into_bytes(), random::scalar(&mut rng, f));
    }
    out
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

proptest! {
    #[test]
    fn holder_on_sequences(a: u64, b: u64, n in 0usize..20, p in 1.0f64..8.0, f in field()) {
        let (x, y) = (sparse(a, n, f), sparse(b, n, f));
        let p = Exponent::new(p).unwrap();
        let lhs = pairing_abs(&x, &y);
        prop_assert!(modulus(pairing_seq(&x, &y)) <= lhs * (1.0 + 1e-12) + 1e-15);
        prop_assert!(lhs <= lp_norm_seq(&x, p) * lp_norm_seq(&y, p.conjugate()) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn norms_decrease_in_p(seed: u64, n in 0usize..20, a in 0.2f64..8.0, b in 0.2f64..8.0) {
        let x = sparse(seed, n, Field::Complex);
        let (p, q) = if a <= b { (a, b) } else { (b, a) };
        let np = normlab::vector::p_norm_of(x.moduli(), Exponent::new(p.max(1.0)).unwrap());
        let nq = normlab::vector::p_norm_of(x.moduli(), Exponent::new(q.max(1.0)).unwrap());
        prop_assert!(nq <= np * (1.0 + 1e-12) + 1e-15);
        // 0 < p < 1: the quasi-norm sum Σ|x|^p still dominates
        let raw = |r: f64| x.moduli().map(|m| m.powf(r)).sum::<f64>().powf(1.0 / r);
        prop_assert!(raw(q) <= raw(p) * (1.0 + 1e-12) + 1e-15);
        prop_assert!(x.moduli().fold(0.0, f64::max) <= raw(p) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn quasi_triangle_below_one(a: u64, b: u64, n in 1usize..12, p in 0.1f64..1.0) {
        let (x, y) = (sparse(a, n, Field::Real), sparse(b, n, Field::Real));
        let s = |g: &SparseFn| g.moduli().map(|m| m.powf(p)).sum::<f64>();
        prop_assert!(s(&x.add(&y)) <= (s(&x) + s(&y)) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn extremizer_attains_the_dual_norm(seed: u64, n in 1usize..15, p in 1.0f64..8.0, f in field()) {
        let g = sparse(seed, n, f);
        let p = Exponent::new(p).unwrap();
        let e = dual_extremizer_seq(&g, p).unwrap();
        prop_assert!((lp_norm_seq(&e, p) - 1.0).abs() < 1e-12);
        let q = lp_norm_seq(&g, p.conjugate());
        prop_assert!((modulus(pairing_seq(&e, &g)) - q).abs() <= 1e-12 * q.max(1.0));
    }

    #[test]
    fn truncation_leaves_a_small_tail(seed: u64, n in 0usize..20, eps in 0.0f64..3.0) {
        let x = sparse(seed, n, Field::Complex);
        let (set, tail) = truncate(&x, eps).unwrap();
        prop_assert!(tail <= eps);
        let outside: f64 = x.iter().filter(|(k, _)| !set.contains(*k)).map(|(_, v)| modulus(*v)).sum();
        prop_assert!((outside - tail).abs() < 1e-12);
        let dropped_one_more = set.len().checked_sub(1).map(|_| {
            let smallest = set.iter().map(|k| modulus(x.get(k))).fold(f64::INFINITY, f64::min);
            tail + smallest
        });
        if let Some(t) = dropped_one_more {
            prop_assert!(t > eps);
        }
    }

    #[test]
    fn fubini_on_a_random_grid(seed: u64, f in field()) {
        let mut rng = random::rng(seed);
        let mut g = SparseFn::new();
        for i in 0..5u8 {
            for j in 0..5u8 {
                if rng.gen_bool(0.7) {
                    g.insert(product_key(&[b'x', i], &[b'y', j, 0, 255]), random::scalar(&mut rng, f));
                }
            }
        }
        let r = fubini_check(&g).unwrap();
        prop_assert!(r.max_gap() <= 1e-12 * lp_norm_seq(&g, Exponent::ONE).max(1.0));
        for (k, _) in g.iter() {
            let (x, y) = split_product_key(k).unwrap();
            prop_assert_eq!(&product_key(x, y), k);
        }
    }

    #[test]
    fn sums_are_linear(a: u64, b: u64, n in 0usize..15, c in -3.0f64..3.0) {
        let (x, y) = (sparse(a, n, Field::Complex), sparse(b, n, Field::Complex));
        let lhs = unordered_sum(&x.add(&y.scale(real(c))));
        let rhs = unordered_sum(&x) + unordered_sum(&y) * c;
        prop_assert!(modulus(lhs - rhs) < 1e-12 * (1.0 + lp_norm_seq(&x, Exponent::ONE) + lp_norm_seq(&y, Exponent::ONE) * c.abs()));
    }

    #[test]
    fn monotone_partial_sums(seed: u64, n in 1usize..12) {
        let limit = sparse(seed, n, Field::Real).abs_values();
        let family: Vec<SparseFn> = (1..=6)
            .map(|k| limit.scale(real(1.0 - 0.5f64.powi(k))))
            .chain([limit.clone()])
            .collect();
        let r = convergence_check(ConvergenceMode::Monotone, &family, &limit, None).unwrap();
        prop_assert!(r.holds);
        prop_assert!(r.gaps.last().copied().unwrap() < 1e-12);
    }

    #[test]
    fn dominated_family(seed: u64, n in 1usize..12) {
        let limit = sparse(seed, n, Field::Complex);
        let dom = limit.abs_values().scale(real(2.0));
        let family: Vec<SparseFn> = (1..=6)
            .map(|k| limit.scale(Scalar::new(1.0, 0.5f64.powi(k))))
            .collect();
        let r = convergence_check(ConvergenceMode::Dominated, &family, &limit, Some(&dom)).unwrap();
        prop_assert!(r.holds);
    }
}

trait AbsValues {
    fn abs_values(&self) -> SparseFn;
}

impl AbsValues for SparseFn {
    fn abs_values(&self) -> SparseFn {
        let mut out = SparseFn::new();
        for (k, v) in self.iter() {
            out.insert(k.clone(), real(modulus(*v)));
        }
        out
    }
}

#[test]
fn fatou_with_escaping_mass() {
    let family: Vec<SparseFn> = (0..5)
        .map(|k| SparseFn::delta(format!("n{k}").into_bytes()))
        .collect();
    let r = convergence_check(ConvergenceMode::Fatou, &family, &SparseFn::new(), None).unwrap();
    assert!(r.holds);
    assert_eq!((r.lhs, r.rhs), (0.0, 1.0));
}
