//! Hodge integrals `int prod ch_k(E) prod psi_i^{d_i} prod kappa`, by
//! Mumford's formula
//!
//! `ch_k(E) = B_{k+1}/(k+1)! [kappa_k - sum psi_i^k
//!     + 1/2 sum_{boundary} sum_{a+b=k-1} (-1)^a psi'^a psi''^b]`,
//!
//! with the boundary sum over the irreducible gluing and all ordered
//! reducible gluings. Lambda classes enter through
//! `Lambda(t) = sum lambda_i t^i = exp(sum_{k odd} (k-1)! ch_k t^k)`.

use parking_lot::RwLock;
use rustc_hash::FxHashMap;

use crate::exact::{bernoulli_number, factorial, ExactRational};
use crate::intersection::{
    dimension, for_each_multiset_split, is_stable, kappa_psi_integral, psi_integral, u_to_v,
    IntersectionError,
};
use crate::poly::partitions;

type Key = (u32, Vec<u32>, Vec<u32>);
static HODGE_CACHE: RwLock<Option<FxHashMap<Key, ExactRational>>> = RwLock::new(None);

/// `int_{g,n} prod_{k in ch} ch_k(E) prod psi_i^{d_i}`.
pub fn ch_psi_integral(g: u32, d: &[u32], ch: &[u32]) -> Result<ExactRational, IntersectionError> {
    if !is_stable(g, d.len()) {
        return Err(IntersectionError::Unstable(g, d.len()));
    }
    Ok(hodge(g, d.to_vec(), ch.to_vec()))
}

fn hodge_or_zero(g: u32, d: Vec<u32>, ch: Vec<u32>) -> ExactRational {
    if !is_stable(g, d.len()) {
        return ExactRational::zero();
    }
    hodge(g, d, ch)
}

fn hodge(g: u32, mut d: Vec<u32>, mut ch: Vec<u32>) -> ExactRational {
    let n = d.len();
    let total: i64 = d.iter().chain(ch.iter()).map(|&x| x as i64).sum();
    if total != dimension(g, n) {
        return ExactRational::zero();
    }
    if ch.is_empty() {
        return psi_integral(g, &d).expect("stable");
    }
    if g == 0 || ch.iter().any(|&k| k % 2 == 0) {
        return ExactRational::zero();
    }
    d.sort_unstable_by(|a, b| b.cmp(a));
    ch.sort_unstable_by(|a, b| b.cmp(a));
    let key = (g, d, ch);
    if let Some(v) = HODGE_CACHE.read().as_ref().and_then(|m| m.get(&key).cloned()) {
        return v;
    }
    let (_, d, ch) = key.clone();
    let value = if *d.last().unwrap_or(&u32::MAX) == 0 && is_stable(g, n - 1) {
        let rest = &d[..n - 1];
        let mut acc = ExactRational::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut e = rest.to_vec();
                e[j] -= 1;
                acc += hodge(g, e, ch.clone());
            }
        }
        acc
    } else if let Some(pos) = d.iter().position(|&x| x == 1).filter(|_| is_stable(g, n - 1)) {
        let mut e = d.clone();
        e.remove(pos);
        ExactRational::from(2 * g as i64 - 3 + n as i64) * hodge(g, e, ch.clone())
    } else {
        mumford_step(g, &d, &ch)
    };
    HODGE_CACHE.write().get_or_insert_with(FxHashMap::default).entry(key).or_insert(value.clone());
    value
}

fn mumford_step(g: u32, d: &[u32], ch: &[u32]) -> ExactRational {
    let k = ch[0];
    let rest: Vec<u32> = ch[1..].to_vec();
    let c = bernoulli_number(k as usize + 1) / ExactRational::from_bigint(factorial(k + 1));
    if c.is_zero() {
        return ExactRational::zero();
    }
    let mut acc = ExactRational::zero();
    // kappa_k by one added point: ch pulls back
    let mut e = d.to_vec();
    e.push(k + 1);
    acc += hodge(g, e, rest.clone());
    for i in 0..d.len() {
        let mut e = d.to_vec();
        e[i] += k;
        acc -= hodge(g, e, rest.clone());
    }
    let half = ExactRational::new(1, 2);
    let mut boundary = ExactRational::zero();
    for a in 0..k {
        let b = k - 1 - a;
        let sign = if a % 2 == 0 { ExactRational::one() } else { -ExactRational::one() };
        let mut term = ExactRational::zero();
        if g >= 1 {
            let mut e = d.to_vec();
            e.push(a);
            e.push(b);
            term += hodge_or_zero(g - 1, e, rest.clone());
        }
        for_each_multiset_split(d, |left, right, mult| {
            for g1 in 0..=g {
                let g2 = g - g1;
                let mut l = left.to_vec();
                l.push(a);
                let mut r = right.to_vec();
                r.push(b);
                if !is_stable(g1, l.len()) || !is_stable(g2, r.len()) {
                    continue;
                }
                for_each_multiset_split(&rest, |k1, k2, kmult| {
                    if (g1 == 0 && !k1.is_empty()) || (g2 == 0 && !k2.is_empty()) {
                        return;
                    }
                    let lv = hodge_or_zero(g1, l.clone(), k1.to_vec());
                    if lv.is_zero() {
                        return;
                    }
                    let rv = hodge_or_zero(g2, r.clone(), k2.to_vec());
                    if !rv.is_zero() {
                        term += mult * kmult * lv * rv;
                    }
                });
            }
        });
        boundary += sign * term;
    }
    acc += half * boundary;
    c * acc
}

/// `lambda_i` as a combination of ch-monomials: pairs (ch indices, coefficient).
pub fn lambda_in_ch(i: u32) -> Vec<(Vec<u32>, ExactRational)> {
    let mut out = Vec::new();
    for part in partitions(i) {
        if part.iter().any(|&k| k % 2 == 0) {
            continue;
        }
        // prod ((k-1)! ch_k)^{e_k} / e_k!
        let mut coef = ExactRational::one();
        let mut j = 0;
        while j < part.len() {
            let k = part[j];
            let e = part[j..].iter().take_while(|&&x| x == k).count() as u32;
            let fk = ExactRational::from_bigint(factorial(k - 1));
            coef = coef * fk.pow(e as i32) / ExactRational::from_bigint(factorial(e));
            j += e as usize;
        }
        out.push((part, coef));
    }
    out
}

/// `int_{g,n} lambda_i psi^d`.
pub fn lambda_psi_integral(g: u32, d: &[u32], i: u32) -> Result<ExactRational, IntersectionError> {
    lambda_kappa_psi_integral(g, d, &[], i)
}

/// `int_{g,n} lambda_i prod kappa_{b_j} psi^d`, removing kappa classes by
/// added points (the Hodge bundle pulls back).
pub fn lambda_kappa_psi_integral(
    g: u32,
    d: &[u32],
    kappa: &[u32],
    i: u32,
) -> Result<ExactRational, IntersectionError> {
    if !is_stable(g, d.len()) {
        return Err(IntersectionError::Unstable(g, d.len()));
    }
    if i > g {
        return Ok(ExactRational::zero());
    }
    if i == 0 {
        return kappa_psi_integral(g, d, kappa);
    }
    let mut acc = ExactRational::zero();
    for (chs, c) in lambda_in_ch(i) {
        acc += c * ch_kappa_psi(g, d.to_vec(), kappa.to_vec(), &chs);
    }
    Ok(acc)
}

fn ch_kappa_psi(g: u32, d: Vec<u32>, kappa: Vec<u32>, ch: &[u32]) -> ExactRational {
    let total: i64 = d.iter().chain(kappa.iter()).chain(ch.iter()).map(|&x| x as i64).sum();
    if total != dimension(g, d.len()) {
        return ExactRational::zero();
    }
    if kappa.is_empty() {
        return hodge(g, d, ch.to_vec());
    }
    let b = kappa[0];
    let rest = &kappa[1..];
    let mut acc = ExactRational::zero();
    for mask in 0u32..(1 << rest.len()) {
        let mut extra = b + 1;
        let mut kept = Vec::new();
        for (j, &m) in rest.iter().enumerate() {
            if mask & (1 << j) != 0 {
                extra += m;
            } else {
                kept.push(m);
            }
        }
        let mut e = d.clone();
        e.push(extra);
        let v = ch_kappa_psi(g, e, kept, ch);
        if mask.count_ones() % 2 == 1 {
            acc -= v;
        } else {
            acc += v;
        }
    }
    acc
}

/// `int_{g,n} Lambda(t) psi^d`.
pub fn lambda_total_psi_integral(g: u32, d: &[u32], t: &ExactRational) -> Result<ExactRational, IntersectionError> {
    let mut acc = ExactRational::zero();
    let mut tp = ExactRational::one();
    for i in 0..=g {
        acc += &tp * lambda_psi_integral(g, d, i)?;
        tp = &tp * t;
    }
    Ok(acc)
}

/// `int_{g,n} Lambda(t) psi^d exp(sum_m u_m kappa_m)` by the added-points
/// expansion.
pub fn lambda_exp_kappa_integral(
    g: u32,
    d: &[u32],
    t: &ExactRational,
    u: &[ExactRational],
) -> Result<ExactRational, IntersectionError> {
    if !is_stable(g, d.len()) {
        return Err(IntersectionError::Unstable(g, d.len()));
    }
    let dim = dimension(g, d.len());
    let used: i64 = d.iter().map(|&x| x as i64).sum();
    if used > dim {
        return Ok(ExactRational::zero());
    }
    let top = (dim - used) as u32;
    let v = u_to_v(u, top as usize);
    let mut acc = ExactRational::zero();
    // lambda degree i leaves top - i for the added points
    for big_d in 0..=top {
        for part in partitions(big_d) {
            let mut coef = ExactRational::one();
            let mut j = 0;
            while j < part.len() {
                let e = part[j..].iter().take_while(|&&x| x == part[j]).count() as u32;
                coef = coef / ExactRational::from_bigint(factorial(e));
                j += e as usize;
            }
            for &p in &part {
                coef *= &v[p as usize];
            }
            if coef.is_zero() {
                continue;
            }
            let mut e = d.to_vec();
            e.extend(part.iter().map(|&p| p + 1));
            let i = top - big_d;
            acc += coef * t.pow(i as i32) * lambda_psi_integral(g, &e, i)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn known_values() {
        assert_eq!(lambda_psi_integral(1, &[0], 1).unwrap(), q(1, 24));
        assert_eq!(lambda_total_psi_integral(1, &[0], &q(-1, 1)).unwrap(), q(-1, 24));
        // int_{M_2} lambda_1^3 = 1/2880 and lambda_1 lambda_2 = 1/5760
        let l1_cubed: ExactRational = {
            let mut acc = ExactRational::zero();
            // lambda_1 = ch_1
            acc += ch_psi_integral(2, &[], &[1, 1, 1]).unwrap();
            acc
        };
        assert_eq!(l1_cubed, q(1, 2880));
        let l1l2 = ch_psi_integral(2, &[], &[1, 1, 1]).unwrap() / q(2, 1);
        assert_eq!(l1l2, q(1, 5760));
        // lambda_g formula: int_{M_{2,1}} lambda_2 psi^2 = b_2 = 7/5760
        assert_eq!(lambda_psi_integral(2, &[2], 2).unwrap(), q(7, 5760));
    }
}
