//! Arbitrary-precision rationals with an `i128` fast path.
//!
//! Values are kept in lowest terms with a positive denominator. A value is
//! stored inline whenever both numerator and denominator fit in `i128`; the
//! boxed `BigRational` form is used only when they do not. Because the
//! representation is canonical, derived equality and hashing are exact.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i128, i128),
    Big(Box<BigRational>),
}

/// Exact rational number, the scalar type of every computed quantity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactRational(Repr);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl ExactRational {
    pub fn zero() -> Self {
        ExactRational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        ExactRational(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        ExactRational(Repr::Small(n as i128, 1))
    }

    /// `num / den`, reduced. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Self::zero();
        }
        let (mut num, mut den) = if den < 0 {
            match (num.checked_neg(), den.checked_neg()) {
                (Some(n), Some(d)) => (n, d),
                _ => {
                    return Self::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)))
                }
            }
        } else {
            (num, den)
        };
        let g = gcd_u128(num.unsigned_abs(), den as u128);
        if g > 1 {
            num /= g as i128;
            den /= g as i128;
        }
        ExactRational(Repr::Small(num, den))
    }

    /// Takes a reduced-or-not `BigRational` into canonical form.
    fn from_big(q: BigRational) -> Self {
        // BigRational::new already reduces; new_raw callers reduce themselves.
        let (n, d) = (q.numer(), q.denom());
        match (n.to_i128(), d.to_i128()) {
            (Some(n), Some(d)) => ExactRational(Repr::Small(n, d)),
            _ => ExactRational(Repr::Big(Box::new(q))),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(0, _) => panic!("reciprocal of zero"),
            Repr::Small(n, d) => Self::from_i128(*d, *n),
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }

    pub fn pow(&self, exp: i32) -> Self {
        if exp < 0 {
            return self.recip().pow(-exp);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Floor as an `i64`; panics if out of range.
    pub fn floor_i64(&self) -> i64 {
        match &self.0 {
            Repr::Small(n, d) => i64::try_from(n.div_euclid(*d)).expect("floor out of range"),
            Repr::Big(b) => b.floor().to_integer().to_i64().expect("floor out of range"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Decimal rendering with a fixed number of digits after the point,
    /// rounded toward zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        let big = self.to_big();
        let neg = big.is_negative();
        let abs = big.abs();
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = (abs.numer() * &scale) / abs.denom();
        let (int_part, frac) = scaled.div_rem(&scale);
        let mut s = String::new();
        if neg && !(int_part.is_zero() && frac.is_zero()) {
            s.push('-');
        }
        s.push_str(&int_part.to_string());
        if digits > 0 {
            s.push('.');
            let f = frac.to_string();
            for _ in f.len()..digits {
                s.push('0');
            }
            s.push_str(&f);
        }
        s
    }
}

impl Default for ExactRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<i32> for ExactRational {
    fn from(n: i32) -> Self {
        Self::from_int(n as i64)
    }
}

impl From<u32> for ExactRational {
    fn from(n: u32) -> Self {
        Self::from_int(n as i64)
    }
}

impl From<usize> for ExactRational {
    fn from(n: usize) -> Self {
        Self::from_int(n as i64)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        Self::from_bigint(n)
    }
}

impl From<BigRational> for ExactRational {
    fn from(q: BigRational) -> Self {
        Self::from_big(q)
    }
}

fn add_impl(a: &ExactRational, b: &ExactRational) -> ExactRational {
    match (&a.0, &b.0) {
        (Repr::Small(0, _), _) => b.clone(),
        (_, Repr::Small(0, _)) => a.clone(),
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            if ad == bd {
                if let Some(s) = an.checked_add(*bn) {
                    return ExactRational::from_i128(s, *ad);
                }
            } else {
                let g = gcd_u128(*ad as u128, *bd as u128) as i128;
                let (ad_g, bd_g) = (ad / g, bd / g);
                let num = an
                    .checked_mul(bd_g)
                    .and_then(|x| bn.checked_mul(ad_g).and_then(|y| x.checked_add(y)));
                if let (Some(num), Some(den)) = (num, ad.checked_mul(bd_g)) {
                    return ExactRational::from_i128(num, den);
                }
            }
            ExactRational::from_big(a.to_big() + b.to_big())
        }
        _ => ExactRational::from_big(a.to_big() + b.to_big()),
    }
}

fn mul_impl(a: &ExactRational, b: &ExactRational) -> ExactRational {
    match (&a.0, &b.0) {
        (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => ExactRational::zero(),
        (Repr::Small(1, 1), _) => b.clone(),
        (_, Repr::Small(1, 1)) => a.clone(),
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            // cross-cancel so the result is already reduced
            let g1 = gcd_u128(an.unsigned_abs(), *bd as u128) as i128;
            let g2 = gcd_u128(bn.unsigned_abs(), *ad as u128) as i128;
            let num = (an / g1).checked_mul(bn / g2);
            let den = (ad / g2).checked_mul(bd / g1);
            match (num, den) {
                (Some(n), Some(d)) => ExactRational(Repr::Small(n, d)),
                _ => ExactRational::from_big(a.to_big() * b.to_big()),
            }
        }
        _ => ExactRational::from_big(a.to_big() * b.to_big()),
    }
}

fn neg_impl(a: &ExactRational) -> ExactRational {
    match &a.0 {
        Repr::Small(n, d) => match n.checked_neg() {
            Some(m) => ExactRational(Repr::Small(m, *d)),
            None => ExactRational::from_big(-a.to_big()),
        },
        Repr::Big(b) => ExactRational::from_big(-(**b).clone()),
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        neg_impl(&self)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        neg_impl(self)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                $body(self, rhs)
            }
        }
        impl $trait<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                $body(&self, &rhs)
            }
        }
        impl $trait<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                $body(&self, rhs)
            }
        }
        impl $trait<ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, |a: &ExactRational, b: &ExactRational| add_impl(a, &neg_impl(b)));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, |a: &ExactRational, b: &ExactRational| mul_impl(a, &b.recip()));

macro_rules! forward_assign {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ExactRational> for ExactRational {
            fn $method(&mut self, rhs: &ExactRational) {
                *self = &*self $op rhs;
            }
        }
        impl $trait<ExactRational> for ExactRational {
            fn $method(&mut self, rhs: ExactRational) {
                *self = &*self $op &rhs;
            }
        }
    };
}

forward_assign!(AddAssign, add_assign, +);
forward_assign!(SubAssign, sub_assign, -);
forward_assign!(MulAssign, mul_assign, *);
forward_assign!(DivAssign, div_assign, /);

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactRational> for ExactRational {
    fn sum<I: Iterator<Item = &'a ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

impl Product for ExactRational {
    fn product<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::one(), |acc, x| acc * x)
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => match (an.checked_mul(*bd), bn.checked_mul(*ad)) {
                (Some(x), Some(y)) => x.cmp(&y),
                _ => self.to_big().cmp(&other.to_big()),
            },
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseRationalError::Malformed(s.to_string());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| bad())?;
        let den: BigInt = d.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        Ok(ExactRational::from_bigints(num, den))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Zero for ExactRational {
    fn zero() -> Self {
        ExactRational::zero()
    }
    fn is_zero(&self) -> bool {
        ExactRational::is_zero(self)
    }
}

impl One for ExactRational {
    fn one() -> Self {
        ExactRational::one()
    }
}

/// Binomial coefficient `C(a, i)` for any integer top, using the polynomial
/// extension `a (a-1) ... (a-i+1) / i!`.
pub fn binomial(a: i64, i: u32) -> ExactRational {
    let mut acc = BigInt::one();
    let mut fact = BigInt::one();
    for j in 0..i as i64 {
        acc *= BigInt::from(a - j);
        fact *= BigInt::from(j + 1);
    }
    ExactRational::from_bigints(acc, fact)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn lowest_terms_and_sign() {
        assert_eq!(q(2, -4), q(-1, 2));
        assert_eq!(q(0, -7), ExactRational::zero());
        assert_eq!(q(-6, -9).to_string(), "2/3");
        assert_eq!(q(5, 1).to_string(), "5");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = ExactRational::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Small(..)));
        let quad = &sq * &sq;
        assert!(matches!(quad.0, Repr::Big(_)));
        let back = &quad / &sq;
        assert_eq!(back, sq);
        assert!(matches!(back.0, Repr::Small(..)));
        let m = ExactRational(Repr::Small(i128::MIN, 1));
        assert_eq!((-&m).to_string(), "170141183460469231731687303715884105728");
        assert_eq!(-(-&m), m);
        let sum = &quad + &ExactRational::one();
        assert_eq!(&sum - &quad, ExactRational::one());
    }

    #[test]
    fn parse_and_display() {
        let x: ExactRational = "-15/6".parse().unwrap();
        assert_eq!(x, q(-5, 2));
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("abc".parse::<ExactRational>().is_err());
        let huge: ExactRational = "123456789012345678901234567891/2".parse().unwrap();
        assert_eq!(huge.to_string(), "123456789012345678901234567891/2");
    }

    #[test]
    fn ordering_and_decimal() {
        assert!(q(1, 3) < q(1, 2));
        assert!(q(-1, 2) < q(-1, 3));
        assert_eq!(q(-1, 12).to_decimal(4), "-0.0833");
        assert_eq!(q(7, 2).to_decimal(2), "3.50");
    }

    #[test]
    fn binomials_with_negative_top() {
        assert_eq!(binomial(5, 2), q(10, 1));
        assert_eq!(binomial(-1, 3), q(-1, 1));
        assert_eq!(binomial(-2, 2), q(3, 1));
        assert_eq!(binomial(0, 2), q(0, 1));
        assert_eq!(binomial(3, 0), q(1, 1));
    }

    #[test]
    fn pow_and_recip() {
        assert_eq!(q(2, 3).pow(3), q(8, 27));
        assert_eq!(q(2, 3).pow(-2), q(9, 4));
        assert_eq!(q(-3, 7).recip(), q(-7, 3));
    }
}
