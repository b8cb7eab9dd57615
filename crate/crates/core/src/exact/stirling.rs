//! Ordinary and generalized Stirling numbers.
//!
//! `stirling1(n, k)` is the unsigned Stirling number of the first kind and
//! `stirling2(n, k)` the Stirling number of the second kind. Both are
//! extended to negative arguments by the duality `{n, k} = [-k, -n]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{binomial, ExactRational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StirlingError {
    #[error("first-kind index m = {m} exceeds k = {k}")]
    IndexTooLarge { k: i64, m: i64 },
    #[error("negative index m = {0}")]
    NegativeIndex(i64),
}

fn unsigned_first_table(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    // row-by-row: [i+1, j] = i [i, j] + [i, j-1]
    let mut row = vec![BigInt::zero(); n + 1];
    row[0] = BigInt::one();
    for i in 0..n {
        let mut next = vec![BigInt::zero(); n + 1];
        for j in 0..=i + 1 {
            let mut v = BigInt::zero();
            if j <= i {
                v += &row[j] * BigInt::from(i);
            }
            if j >= 1 {
                v += &row[j - 1];
            }
            next[j] = v;
        }
        row = next;
    }
    row[k].clone()
}

fn second_table(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    // {i+1, j} = j {i, j} + {i, j-1}
    let mut row = vec![BigInt::zero(); n + 1];
    row[0] = BigInt::one();
    for i in 0..n {
        let mut next = vec![BigInt::zero(); n + 1];
        for j in 0..=i + 1 {
            let mut v = BigInt::zero();
            if j <= i {
                v += &row[j] * BigInt::from(j);
            }
            if j >= 1 {
                v += &row[j - 1];
            }
            next[j] = v;
        }
        row = next;
    }
    row[k].clone()
}

/// Unsigned Stirling number of the first kind `[n, k]`.
pub fn stirling1(n: i64, k: i64) -> BigInt {
    if n >= 0 && k >= 0 {
        unsigned_first_table(n, k)
    } else if n <= 0 && k <= 0 {
        second_table(-k, -n)
    } else {
        BigInt::zero()
    }
}

/// Stirling number of the second kind `{n, k}`.
pub fn stirling2(n: i64, k: i64) -> BigInt {
    if n >= 0 && k >= 0 {
        second_table(n, k)
    } else if n <= 0 && k <= 0 {
        unsigned_first_table(-k, -n)
    } else {
        BigInt::zero()
    }
}

/// `(-1)^k s(k, k - m, x) = sum_{i=0}^{m} C(k + i - m, i) [k, k - m + i] x^i`.
///
/// This is the coefficient of `u^m` in `prod_{j=0}^{k-1} (1 + (x + j) u)`.
pub fn stirling_generalized_first(
    k: i64,
    m: i64,
    x: &ExactRational,
) -> Result<ExactRational, StirlingError> {
    if m < 0 {
        return Err(StirlingError::NegativeIndex(m));
    }
    if m > k {
        return Err(StirlingError::IndexTooLarge { k, m });
    }
    let mut acc = ExactRational::zero();
    let mut xp = ExactRational::one();
    for i in 0..=m {
        let s = stirling1(k, k - m + i);
        if !s.is_zero() {
            acc += binomial(k + i - m, i as u32) * ExactRational::from_bigint(s) * &xp;
        }
        xp = &xp * x;
    }
    Ok(acc)
}

/// `S(k + m, k, x) = sum_{i=0}^{m} C(m - k - 1, i) (-1)^i {m - i - k, -k} x^i`.
///
/// For `k = -K <= 0` this is the coefficient of `u^m` in
/// `prod_{j=1}^{K} (1 + (x - j) u)^{-1}`.
pub fn stirling_generalized_second(
    k: i64,
    m: i64,
    x: &ExactRational,
) -> Result<ExactRational, StirlingError> {
    if m < 0 {
        return Err(StirlingError::NegativeIndex(m));
    }
    let mut acc = ExactRational::zero();
    let mut xp = ExactRational::one();
    for i in 0..=m {
        let s = stirling2(m - i - k, -k);
        if !s.is_zero() {
            let mut term = binomial(m - k - 1, i as u32) * ExactRational::from_bigint(s) * &xp;
            if i % 2 == 1 {
                term = -term;
            }
            acc += term;
        }
        xp = &xp * x;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn small_tables() {
        assert_eq!(stirling1(4, 2), BigInt::from(11));
        assert_eq!(stirling2(5, 3), BigInt::from(25));
        assert_eq!(stirling1(0, 0), BigInt::one());
        assert_eq!(stirling2(-1, -3), BigInt::from(2));
    }

    #[test]
    fn generalized_small() {
        for k in 0..5 {
            assert_eq!(stirling_generalized_first(k, 0, &q(3, 7)).unwrap(), q(1, 1));
        }
        assert_eq!(stirling_generalized_first(2, 1, &q(0, 1)).unwrap(), q(1, 1));
        assert!(stirling_generalized_first(2, 3, &q(0, 1)).is_err());
        // k = -1: sum_m (1 - x)^m u^m
        assert_eq!(stirling_generalized_second(-1, 3, &q(1, 3)).unwrap(), q(8, 27));
    }
}
