//! Property tests against independent oracles.

use num_rational::BigRational;
use proptest::prelude::*;
use taut_core::exact::{
    bernoulli_number, bernoulli_poly, binomial, stirling_generalized_first, stirling_generalized_second, ExactRational,
    SymmetricEvalContext,
};
use taut_core::intersection::{dimension, kappa_psi_integral, kappa_psi_integral_lemma, psi_integral};
use taut_core::poly::{tp_add, tp_exp, tp_mul, tp_scale, TautMonomial, TautPolynomial};

fn q(p: i64, d: i64) -> ExactRational {
    ExactRational::new(p, d)
}

fn big(x: &ExactRational) -> BigRational {
    x.to_big()
}

fn rat() -> impl Strategy<Value = ExactRational> {
    (any::<i64>(), 1..=i64::MAX).prop_map(|(p, d)| ExactRational::new(p, d))
}

fn small_rat() -> impl Strategy<Value = ExactRational> {
    (-20i64..=20, 1i64..=12).prop_map(|(p, d)| q(p, d))
}

/// Coefficients of `prod (1 + c_j u)` up to `u^max`.
fn product_coeffs(cs: &[ExactRational], max: usize) -> Vec<ExactRational> {
    let mut out = vec![ExactRational::zero(); max + 1];
    out[0] = ExactRational::one();
    for c in cs {
        for m in (1..=max).rev() {
            let t = &out[m - 1] * c;
            out[m] += t;
        }
    }
    out
}

/// Coefficients of `prod (1 + c_j u)^{-1}` up to `u^max`.
fn inverse_product_coeffs(cs: &[ExactRational], max: usize) -> Vec<ExactRational> {
    let mut out = vec![ExactRational::zero(); max + 1];
    out[0] = ExactRational::one();
    for c in cs {
        // multiply by sum_k (-c u)^k
        for m in 1..=max {
            let t = &out[m - 1] * c;
            out[m] -= t;
        }
    }
    out
}

fn poly(n: usize, trunc: u32) -> impl Strategy<Value = TautPolynomial> {
    let mono = (proptest::collection::vec(1u32..=3, 0..=2), proptest::collection::vec(0u32..=2, n));
    proptest::collection::vec((mono, small_rat()), 0..5).prop_map(move |terms| {
        let mut p = TautPolynomial::zero(n, trunc);
        for ((mut k, d), c) in terms {
            k.sort_unstable();
            let m = TautMonomial::new(&k, d);
            if m.degree() <= trunc {
                p.add_term(m, c);
            }
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_ops_match_bigrational(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(big(&(&a + &b)), big(&a) + big(&b));
        prop_assert_eq!(big(&(&a * &b)), big(&a) * big(&b));
        prop_assert_eq!(big(&(&a - &b)), big(&a) - big(&b));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        prop_assert_eq!(a.cmp(&b), big(&a).cmp(&big(&b)));
        let s = a.to_string();
        prop_assert_eq!(s.parse::<ExactRational>().unwrap(), a);
    }

    #[test]
    fn bernoulli_difference_equation(m in 1usize..=14, x in small_rat()) {
        // B_m(x + 1) - B_m(x) = m x^{m-1}
        let lhs = bernoulli_poly(m, &(&x + &ExactRational::one())) - bernoulli_poly(m, &x);
        prop_assert_eq!(lhs, ExactRational::from(m as i64) * x.pow(m as i32 - 1));
    }

    #[test]
    fn power_sums_and_newton(base in small_rat(), count in 0usize..=6, l in 0usize..=6) {
        let ctx = SymmetricEvalContext::new(base.clone(), count);
        let vars: Vec<ExactRational> = (0..count).map(|j| &base + &ExactRational::from(j as i64)).collect();
        for m in 1..=5u32 {
            let direct = vars.iter().fold(ExactRational::zero(), |acc, v| acc + v.pow(m as i32));
            prop_assert_eq!(ctx.power_sum(m), direct);
        }
        prop_assert_eq!(ctx.elementary_symmetric(l), product_coeffs(&vars, l)[l].clone());
        let neg: Vec<ExactRational> = vars.iter().map(|v| -v).collect();
        prop_assert_eq!(ctx.complete_homogeneous(l), inverse_product_coeffs(&neg, l)[l].clone());
    }

    #[test]
    fn stirling_first_is_product_expansion(k in 0i64..=6, x in small_rat()) {
        let cs: Vec<ExactRational> = (0..k).map(|j| &x + &ExactRational::from(j)).collect();
        let want = product_coeffs(&cs, k as usize);
        for m in 0..=k {
            prop_assert_eq!(stirling_generalized_first(k, m, &x).unwrap(), want[m as usize].clone());
        }
    }

    #[test]
    fn stirling_second_is_inverse_expansion(kk in 0i64..=6, x in small_rat()) {
        let cs: Vec<ExactRational> = (1..=kk).map(|j| &x - &ExactRational::from(j)).collect();
        let want = inverse_product_coeffs(&cs, 6);
        for m in 0..=6 {
            prop_assert_eq!(stirling_generalized_second(-kk, m, &x).unwrap(), want[m as usize].clone());
        }
    }

    #[test]
    fn ring_axioms(a in poly(2, 4), b in poly(2, 4), c in poly(2, 4)) {
        let ab = tp_mul(&a, &b).unwrap();
        prop_assert_eq!(&ab, &tp_mul(&b, &a).unwrap());
        prop_assert_eq!(tp_mul(&ab, &c).unwrap(), tp_mul(&a, &tp_mul(&b, &c).unwrap()).unwrap());
        let lhs = tp_mul(&a, &tp_add(&b, &c).unwrap()).unwrap();
        let rhs = tp_add(&ab, &tp_mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let one = TautPolynomial::one(2, 4);
        prop_assert_eq!(tp_mul(&a, &one).unwrap(), a.clone());
    }

    #[test]
    fn exp_times_exp_of_negative(a in poly(1, 5)) {
        let a = tp_add(&a, &tp_scale(&TautPolynomial::one(1, 5), &-a.coeff(&TautMonomial::one(1)))).unwrap();
        let prod = tp_mul(&tp_exp(&a), &tp_exp(&tp_scale(&a, &-ExactRational::one()))).unwrap();
        prop_assert_eq!(prod, TautPolynomial::one(1, 5));
    }

    #[test]
    fn string_and_dilaton(g in 0u32..=3, n in 1usize..=5, picks in proptest::collection::vec(0usize..5, 12)) {
        prop_assume!(dimension(g, n) >= 0 && (g > 0 || n >= 3));
        let mut d = vec![0u32; n];
        for p in picks.iter().take(dimension(g, n) as usize) {
            d[p % n] += 1;
        }
        let mut with0 = d.clone();
        with0.push(0);
        let mut sum = ExactRational::zero();
        for j in 0..n {
            if d[j] > 0 {
                let mut e = d.clone();
                e[j] -= 1;
                sum += psi_integral(g, &e).unwrap();
            }
        }
        prop_assert_eq!(psi_integral(g, &with0).unwrap(), sum);
        let mut with1 = d.clone();
        with1.push(1);
        let factor = ExactRational::from(2 * g as i64 - 2 + n as i64);
        prop_assert_eq!(psi_integral(g, &with1).unwrap(), factor * psi_integral(g, &d).unwrap());
    }

    #[test]
    fn kappa_reductions_agree(g in 0u32..=2, n in 1usize..=4, kappa in proptest::collection::vec(1u32..=3, 1..=3), picks in proptest::collection::vec(0usize..4, 8)) {
        prop_assume!(g > 0 || n >= 3);
        let dim = dimension(g, n);
        let kdeg: i64 = kappa.iter().map(|&k| k as i64).sum();
        prop_assume!(kdeg <= dim);
        let mut d = vec![0u32; n];
        for p in picks.iter().take((dim - kdeg) as usize) {
            d[p % n] += 1;
        }
        let mut k = kappa.clone();
        k.sort_unstable();
        prop_assert_eq!(kappa_psi_integral(g, &d, &k).unwrap(), kappa_psi_integral_lemma(g, &d, &k).unwrap());
    }
}

#[test]
fn faulhaber_sums() {
    for m in 0..=10usize {
        for n in 1..=8i64 {
            let direct = (0..n).fold(ExactRational::zero(), |acc, k| acc + ExactRational::from(k).pow(m as i32));
            let via = (bernoulli_poly(m + 1, &ExactRational::from(n)) - bernoulli_number(m + 1))
                / ExactRational::from(m as i64 + 1);
            assert_eq!(direct, via, "m={m} n={n}");
        }
    }
    assert_eq!(bernoulli_number(1), q(-1, 2));
    assert_eq!(bernoulli_number(12), q(-691, 2730));
}

#[test]
fn binomial_negative_top() {
    // C(-1, i) = (-1)^i, C(-2, 3) = -4
    for i in 0..6u32 {
        assert_eq!(binomial(-1, i), ExactRational::from(if i % 2 == 0 { 1 } else { -1 }));
    }
    assert_eq!(binomial(-2, 3), q(-4, 1));
}

#[test]
fn n_zero_kappa_reduction() {
    // int_{M_2} kappa_3 = int_{M_{2,1}} psi^4 = 1/1152
    assert_eq!(kappa_psi_integral(2, &[], &[3]).unwrap(), q(1, 1152));
    assert_eq!(kappa_psi_integral_lemma(2, &[], &[3]).unwrap(), q(1, 1152));
    assert_eq!(kappa_psi_integral(2, &[], &[1, 1, 1]).unwrap(), kappa_psi_integral_lemma(2, &[], &[1, 1, 1]).unwrap());
}
