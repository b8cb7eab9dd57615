//! Bernoulli numbers and polynomials.
//!
//! Convention: `B_1 = -1/2`, i.e. `B_m = B_m(0)` where
//! `t e^{tx} / (e^t - 1) = sum_m B_m(x) t^m / m!`.

use parking_lot::RwLock;

use super::rational::{binomial, ExactRational};

static CACHE: RwLock<Vec<ExactRational>> = RwLock::new(Vec::new());

/// `B_m` computed from `sum_{k=0}^{m} C(m+1, k) B_k = 0`, memoized.
pub fn bernoulli_number(m: usize) -> ExactRational {
    {
        let cache = CACHE.read();
        if let Some(b) = cache.get(m) {
            return b.clone();
        }
    }
    let mut cache = CACHE.write();
    if cache.is_empty() {
        cache.push(ExactRational::one());
    }
    while cache.len() <= m {
        let k = cache.len();
        let mut acc = ExactRational::zero();
        for (j, b) in cache.iter().enumerate() {
            if !b.is_zero() {
                acc += binomial(k as i64 + 1, j as u32) * b;
            }
        }
        let b = -acc / ExactRational::from(k as i64 + 1);
        cache.push(b);
    }
    cache[m].clone()
}

/// `B_m(x) = sum_k C(m, k) B_k x^{m-k}`.
pub fn bernoulli_poly(m: usize, x: &ExactRational) -> ExactRational {
    let mut acc = ExactRational::zero();
    let mut xp = ExactRational::one();
    // iterate k = m, m-1, ..., 0 so x^{m-k} grows
    for k in (0..=m).rev() {
        let b = bernoulli_number(k);
        if !b.is_zero() {
            acc += binomial(m as i64, k as u32) * b * &xp;
        }
        xp = &xp * x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn first_values() {
        let expect = [
            q(1, 1),
            q(-1, 2),
            q(1, 6),
            q(0, 1),
            q(-1, 30),
            q(0, 1),
            q(1, 42),
            q(0, 1),
            q(-1, 30),
        ];
        for (m, e) in expect.iter().enumerate() {
            assert_eq!(&bernoulli_number(m), e, "B_{m}");
        }
        assert_eq!(bernoulli_number(12), q(-691, 2730));
    }

    #[test]
    fn polynomial_values() {
        assert_eq!(bernoulli_poly(1, &q(1, 2)), q(0, 1));
        assert_eq!(bernoulli_poly(3, &q(0, 1)), q(0, 1));
        assert_eq!(bernoulli_poly(3, &q(1, 1)), q(0, 1));
        assert_eq!(bernoulli_poly(3, &q(3, 2)), q(3, 4));
        assert_eq!(bernoulli_poly(2, &q(1, 1)), q(1, 6));
    }
}
