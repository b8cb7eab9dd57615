//! Intersection numbers of psi and kappa classes on moduli of stable curves.
//!
//! Pure psi integrals `<tau_{d_1} ... tau_{d_n}>_g` come from the DVV
//! recursion seeded by `<tau_0^3>_0 = 1` and `<tau_1>_1 = 1/24`, with string
//! and dilaton shortcuts. Kappa classes are removed by adding marked points.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;
use serde_json::json;

use crate::exact::{factorial, ExactRational};
use crate::poly::{partitions, series_exp, TautPolynomial};
use crate::report::CheckReport;

pub const CACHE_VERSION: &str = "taut-psi-cache v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntersectionError {
    #[error("unstable moduli space (g, n) = ({0}, {1})")]
    Unstable(u32, usize),
    #[error("polynomial has {got} points but the space has {expected}")]
    PointMismatch { expected: usize, got: usize },
}

/// `(g, d_1..d_n)` with the exponents sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PsiIndex {
    pub g: u32,
    pub exponents: Vec<u32>,
}

impl PsiIndex {
    pub fn new(g: u32, exponents: &[u32]) -> Self {
        let mut e = exponents.to_vec();
        e.sort_unstable_by(|a, b| b.cmp(a));
        PsiIndex { g, exponents: e }
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }
}

pub fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

pub fn dimension(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

type PsiMap = FxHashMap<PsiIndex, ExactRational>;

static PSI_CACHE: RwLock<Option<PsiMap>> = RwLock::new(None);

fn cache_get(key: &PsiIndex) -> Option<ExactRational> {
    PSI_CACHE.read().as_ref().and_then(|m| m.get(key).cloned())
}

fn cache_put(key: PsiIndex, v: ExactRational) {
    let mut w = PSI_CACHE.write();
    w.get_or_insert_with(FxHashMap::default).entry(key).or_insert(v);
}

pub fn psi_cache_len() -> usize {
    PSI_CACHE.read().as_ref().map_or(0, |m| m.len())
}

pub fn clear_psi_cache() {
    *PSI_CACHE.write() = None;
}

/// `<tau_{d_1} ... tau_{d_n}>_g`.
pub fn psi_integral(g: u32, d: &[u32]) -> Result<ExactRational, IntersectionError> {
    if !is_stable(g, d.len()) {
        return Err(IntersectionError::Unstable(g, d.len()));
    }
    Ok(psi_sorted(PsiIndex::new(g, d)))
}

/// Value for a possibly unstable index (zero when unstable).
fn psi_or_zero(g: u32, d: Vec<u32>) -> ExactRational {
    if !is_stable(g, d.len()) {
        return ExactRational::zero();
    }
    let mut d = d;
    d.sort_unstable_by(|a, b| b.cmp(a));
    psi_sorted(PsiIndex { g, exponents: d })
}

fn double_factorial_odd(k: i64) -> ExactRational {
    // (2j+1)!! for k = 2j+1; (-1)!! = 1
    let mut acc = num_bigint::BigInt::from(1);
    let mut i = k;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    ExactRational::from_bigint(acc)
}

fn psi_sorted(key: PsiIndex) -> ExactRational {
    let g = key.g;
    let n = key.n();
    let sum: i64 = key.exponents.iter().map(|&x| x as i64).sum();
    if sum != dimension(g, n) {
        return ExactRational::zero();
    }
    if g == 0 && n == 3 {
        return ExactRational::one();
    }
    if g == 1 && n == 1 {
        return ExactRational::new(1, 24);
    }
    if let Some(v) = cache_get(&key) {
        return v;
    }
    let d = &key.exponents;
    let value = if *d.last().unwrap() == 0 {
        // string: drop one tau_0
        let rest = &d[..n - 1];
        let mut acc = ExactRational::zero();
        let mut j = 0;
        while j < rest.len() {
            let v = rest[j];
            let mult = rest.iter().filter(|&&x| x == v).count();
            if v > 0 {
                let mut e = rest.to_vec();
                e[j] -= 1;
                acc += ExactRational::from(mult) * psi_or_zero(g, e);
            }
            j += mult;
        }
        acc
    } else if d.contains(&1) {
        let pos = d.iter().position(|&x| x == 1).unwrap();
        let mut e = d.clone();
        e.remove(pos);
        ExactRational::from(2 * g as i64 - 2 + n as i64 - 1) * psi_or_zero(g, e)
    } else {
        dvv(g, d)
    };
    cache_put(key, value.clone());
    value
}

/// DVV recursion on the first (largest) exponent `k + 1 >= 2`.
fn dvv(g: u32, d: &[u32]) -> ExactRational {
    let k = d[0] as i64 - 1;
    let rest: Vec<u32> = d[1..].to_vec();
    let mut acc = ExactRational::zero();
    for j in 0..rest.len() {
        let dj = rest[j] as i64;
        let coef = double_factorial_odd(2 * k + 2 * dj + 1) / double_factorial_odd(2 * dj - 1);
        let mut e = rest.clone();
        e[j] += k as u32;
        acc += coef * psi_or_zero(g, e);
    }
    let half = ExactRational::new(1, 2);
    for a in 0..k {
        let b = k - 1 - a;
        let coef = double_factorial_odd(2 * a + 1) * double_factorial_odd(2 * b + 1);
        if g >= 1 {
            let mut e = rest.clone();
            e.push(a as u32);
            e.push(b as u32);
            acc += &half * &coef * psi_or_zero(g - 1, e);
        }
        let mut split = ExactRational::zero();
        for_each_multiset_split(&rest, |left, right, mult| {
            for g1 in 0..=g {
                let g2 = g - g1;
                let mut l = left.to_vec();
                l.push(a as u32);
                let mut r = right.to_vec();
                r.push(b as u32);
                if !is_stable(g1, l.len()) || !is_stable(g2, r.len()) {
                    continue;
                }
                let lv = psi_or_zero(g1, l);
                if lv.is_zero() {
                    continue;
                }
                let rv = psi_or_zero(g2, r);
                if !rv.is_zero() {
                    split += mult * lv * rv;
                }
            }
        });
        acc += &half * &coef * split;
    }
    acc / double_factorial_odd(2 * k + 3)
}

/// Calls `f(left, right, multiplicity)` for every split of the multiset
/// `items` into two sub-multisets, where `multiplicity` counts the labelled
/// splits that produce it.
pub fn for_each_multiset_split<T: Clone + Ord, F: FnMut(&[T], &[T], &ExactRational)>(items: &[T], mut f: F) {
    let mut sorted = items.to_vec();
    sorted.sort();
    let mut groups: Vec<(T, usize)> = Vec::new();
    for it in sorted {
        match groups.last_mut() {
            Some((v, c)) if *v == it => *c += 1,
            _ => groups.push((it, 1)),
        }
    }
    let mut choice = vec![0usize; groups.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut mult = ExactRational::one();
        for (gi, (v, c)) in groups.iter().enumerate() {
            for _ in 0..choice[gi] {
                left.push(v.clone());
            }
            for _ in choice[gi]..*c {
                right.push(v.clone());
            }
            mult *= crate::exact::binomial(*c as i64, choice[gi] as u32);
        }
        f(&left, &right, &mult);
        let mut i = 0;
        loop {
            if i == groups.len() {
                return;
            }
            if choice[i] < groups[i].1 {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Writes the psi cache as sorted `g;d_1,...,d_n;p/q` lines.
pub fn save_psi_cache(path: &Path) -> std::io::Result<usize> {
    let mut entries: Vec<(PsiIndex, ExactRational)> = PSI_CACHE
        .read()
        .as_ref()
        .map(|m| m.iter().map(|(k, v)| (k.clone(), v.clone())).collect())
        .unwrap_or_default();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = fs::File::create(path)?;
    writeln!(out, "# {CACHE_VERSION}")?;
    for (k, v) in &entries {
        let ds: Vec<String> = k.exponents.iter().map(u32::to_string).collect();
        writeln!(out, "{};{};{}", k.g, ds.join(","), v)?;
    }
    Ok(entries.len())
}

fn parse_cache_line(line: &str) -> Option<(PsiIndex, ExactRational)> {
    let mut parts = line.split(';');
    let g: u32 = parts.next()?.trim().parse().ok()?;
    let ds = parts.next()?.trim();
    let v: ExactRational = parts.next()?.trim().parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    let exps: Vec<u32> = if ds.is_empty() {
        Vec::new()
    } else {
        ds.split(',').map(|s| s.trim().parse().ok()).collect::<Option<_>>()?
    };
    if !is_stable(g, exps.len()) || exps.iter().map(|&d| d as i64).sum::<i64>() != dimension(g, exps.len()) {
        return None;
    }
    Some((PsiIndex::new(g, &exps), v))
}

/// Loads cache entries. Malformed lines are skipped with a warning; a file
/// with a different version header is ignored entirely.
pub fn load_psi_cache(path: &Path) -> std::io::Result<usize> {
    let file = fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == format!("# {CACHE_VERSION}") => {}
        _ => {
            log::warn!("cache file {} has an unknown header; ignored", path.display());
            return Ok(0);
        }
    }
    let mut loaded = 0;
    let mut w = PSI_CACHE.write();
    let map = w.get_or_insert_with(FxHashMap::default);
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_cache_line(&line) {
            Some((k, v)) => {
                map.entry(k).or_insert(v);
                loaded += 1;
            }
            None => log::warn!("skipping corrupt cache line {}: {:?}", lineno + 2, line),
        }
    }
    Ok(loaded)
}

// ---------------------------------------------------------------------------
// kappa classes

type MixedKey = (u32, Vec<u32>, Vec<u32>);
static MIXED_CACHE: RwLock<Option<FxHashMap<MixedKey, ExactRational>>> = RwLock::new(None);

/// `int psi^d prod kappa_{b_j}` by repeated pullback:
/// `int A kappa_b = int_{n+1} pi^*A psi_{n+1}^{b+1}` with
/// `pi^* kappa_m = kappa_m - psi_{n+1}^m`.
///
/// Also valid for `n = 0` (then `g >= 2`), where `kappa_b` is the
/// pushforward of `psi_1^{b+1}` from one marked point.
pub fn kappa_psi_integral(g: u32, d: &[u32], kappa: &[u32]) -> Result<ExactRational, IntersectionError> {
    if !is_stable(g, d.len()) {
        return Err(IntersectionError::Unstable(g, d.len()));
    }
    Ok(mixed(g, d.to_vec(), kappa.to_vec()))
}

fn mixed(g: u32, mut d: Vec<u32>, mut kappa: Vec<u32>) -> ExactRational {
    let total: i64 = d.iter().chain(kappa.iter()).map(|&x| x as i64).sum();
    if total != dimension(g, d.len()) {
        return ExactRational::zero();
    }
    if kappa.is_empty() {
        return psi_or_zero(g, d);
    }
    d.sort_unstable_by(|a, b| b.cmp(a));
    kappa.sort_unstable_by(|a, b| b.cmp(a));
    let key = (g, d, kappa);
    if let Some(v) = MIXED_CACHE.read().as_ref().and_then(|m| m.get(&key).cloned()) {
        return v;
    }
    let (g, d, kappa) = key.clone();
    let b = kappa[0];
    let rest = &kappa[1..];
    let mut acc = ExactRational::zero();
    let l = rest.len();
    for mask in 0u32..(1 << l) {
        let mut extra = b + 1;
        let mut kept = Vec::with_capacity(l);
        for (j, &m) in rest.iter().enumerate() {
            if mask & (1 << j) != 0 {
                extra += m;
            } else {
                kept.push(m);
            }
        }
        let mut e = d.clone();
        e.push(extra);
        let v = mixed(g, e, kept);
        if mask.count_ones() % 2 == 1 {
            acc -= v;
        } else {
            acc += v;
        }
    }
    MIXED_CACHE.write().get_or_insert_with(FxHashMap::default).entry(key).or_insert(acc.clone());
    acc
}

/// `v_k` from `exp(-sum_m u_m y^m) = 1 - sum_k v_k y^k`, for `k = 1..=max`.
/// `u[m - 1] = u_m`. The returned vector has index 0 unused.
pub fn u_to_v(u: &[ExactRational], max: usize) -> Vec<ExactRational> {
    let mut f = vec![ExactRational::zero(); max + 1];
    for (i, c) in u.iter().enumerate() {
        if i + 1 <= max {
            f[i + 1] = -c;
        }
    }
    let e = series_exp(&f, max);
    let mut v: Vec<ExactRational> = e.iter().map(|c| -c).collect();
    v[0] = ExactRational::zero();
    v
}

fn multiplicity_factor(part: &[u32]) -> ExactRational {
    let mut denom = num_bigint::BigInt::from(1);
    let mut i = 0;
    while i < part.len() {
        let c = part[i..].iter().take_while(|&&x| x == part[i]).count();
        denom *= factorial(c as u32);
        i += c;
    }
    ExactRational::from_bigints(1.into(), denom)
}

/// `int psi^d exp(sum_m u_m kappa_m)` by the added-points expansion
/// `sum_ell 1/ell! sum_mu prod v_{mu_j} int_{n+ell} psi^d prod psi_{n+j}^{mu_j+1}`,
/// grouped by partitions of the missing degree.
pub fn exp_kappa_integral(g: u32, d: &[u32], u: &[ExactRational]) -> Result<ExactRational, IntersectionError> {
    if !is_stable(g, d.len()) {
        return Err(IntersectionError::Unstable(g, d.len()));
    }
    let dim = dimension(g, d.len());
    let used: i64 = d.iter().map(|&x| x as i64).sum();
    if used > dim {
        return Ok(ExactRational::zero());
    }
    let big_d = (dim - used) as u32;
    let v = u_to_v(u, big_d as usize);
    Ok(exp_kappa_with_v(g, d, &v, big_d))
}

/// Same as [`exp_kappa_integral`] with precomputed `v` (index 0 unused).
pub fn exp_kappa_with_v(g: u32, d: &[u32], v: &[ExactRational], big_d: u32) -> ExactRational {
    let mut acc = ExactRational::zero();
    for part in partitions(big_d) {
        let mut coef = multiplicity_factor(&part);
        for &p in &part {
            coef *= &v[p as usize];
            if coef.is_zero() {
                break;
            }
        }
        if coef.is_zero() {
            continue;
        }
        let mut e = d.to_vec();
        e.extend(part.iter().map(|&p| p + 1));
        acc += coef * psi_or_zero(g, e);
    }
    acc
}

/// Sparse polynomial in formal variables `u_1..u_D`, keyed by exponent
/// vectors, truncated componentwise by a fixed bound.
#[derive(Clone, Debug)]
struct UPoly {
    terms: HashMap<Vec<u32>, ExactRational>,
}

impl UPoly {
    fn constant(c: ExactRational, len: usize) -> Self {
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; len], c);
        }
        UPoly { terms }
    }

    fn mul(&self, other: &UPoly, bound: &[u32]) -> UPoly {
        let mut terms: HashMap<Vec<u32>, ExactRational> = HashMap::new();
        for (ea, ca) in &self.terms {
            'inner: for (eb, cb) in &other.terms {
                let mut e = Vec::with_capacity(ea.len());
                for i in 0..ea.len() {
                    let s = ea[i] + eb[i];
                    if s > bound[i] {
                        continue 'inner;
                    }
                    e.push(s);
                }
                *terms.entry(e).or_default() += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        UPoly { terms }
    }

    fn add_assign(&mut self, other: &UPoly, scale: &ExactRational) {
        for (e, c) in &other.terms {
            *self.terms.entry(e.clone()).or_default() += c * scale;
        }
        self.terms.retain(|_, c| !c.is_zero());
    }
}

/// `int psi^d prod kappa_{b_j}` through the added-points lemma with formal
/// `u`: the monomial is `prod e_m!` times the coefficient of `prod u_m^{e_m}`
/// in `int psi^d exp(sum u_m kappa_m)`.
pub fn kappa_psi_integral_lemma(g: u32, d: &[u32], kappa: &[u32]) -> Result<ExactRational, IntersectionError> {
    if !is_stable(g, d.len()) {
        return Err(IntersectionError::Unstable(g, d.len()));
    }
    let dim = dimension(g, d.len());
    let kdeg: i64 = kappa.iter().map(|&x| x as i64).sum();
    let used: i64 = d.iter().map(|&x| x as i64).sum::<i64>() + kdeg;
    if used != dim {
        return Ok(ExactRational::zero());
    }
    if kappa.is_empty() {
        return Ok(psi_or_zero(g, d.to_vec()));
    }
    let big_d = kdeg as usize;
    let mut bound = vec![0u32; big_d];
    for &m in kappa {
        bound[m as usize - 1] += 1;
    }
    // series in y with UPoly coefficients: exp(-sum u_m y^m)
    let mut e: Vec<UPoly> = (0..=big_d).map(|_| UPoly::constant(ExactRational::zero(), big_d)).collect();
    e[0] = UPoly::constant(ExactRational::one(), big_d);
    for k in 1..=big_d {
        // k e_k = sum_j j f_j e_{k-j}, f_j = -u_j
        let mut acc = UPoly::constant(ExactRational::zero(), big_d);
        for j in 1..=k {
            if bound[j - 1] == 0 {
                continue;
            }
            let mut uj = vec![0u32; big_d];
            uj[j - 1] = 1;
            let mut t = HashMap::new();
            t.insert(uj, ExactRational::from(-(j as i64)));
            let fj = UPoly { terms: t };
            acc.add_assign(&fj.mul(&e[k - j], &bound), &ExactRational::one());
        }
        let inv = ExactRational::from(k).recip();
        let mut scaled = UPoly::constant(ExactRational::zero(), big_d);
        scaled.add_assign(&acc, &inv);
        e[k] = scaled;
    }
    let v: Vec<UPoly> = e
        .iter()
        .map(|p| {
            let mut neg = UPoly::constant(ExactRational::zero(), big_d);
            neg.add_assign(p, &-ExactRational::one());
            neg
        })
        .collect();
    let mut total = ExactRational::zero();
    for part in partitions(big_d as u32) {
        let mut prod = UPoly::constant(multiplicity_factor(&part), big_d);
        for &p in &part {
            prod = prod.mul(&v[p as usize], &bound);
            if prod.terms.is_empty() {
                break;
            }
        }
        let c = prod.terms.get(&bound).cloned().unwrap_or_default();
        if c.is_zero() {
            continue;
        }
        let mut ex = d.to_vec();
        ex.extend(part.iter().map(|&p| p + 1));
        total += c * psi_or_zero(g, ex);
    }
    for &b in &bound {
        total *= ExactRational::from_bigint(factorial(b));
    }
    Ok(total)
}

/// `int_{g,n} p` for a polynomial in kappa and psi classes.
pub fn integrate_mixed(g: u32, n: usize, p: &TautPolynomial) -> Result<ExactRational, IntersectionError> {
    if !is_stable(g, n) {
        return Err(IntersectionError::Unstable(g, n));
    }
    if p.n_points() != n {
        return Err(IntersectionError::PointMismatch { expected: n, got: p.n_points() });
    }
    let dim = dimension(g, n) as u32;
    let mut acc = ExactRational::zero();
    for (m, c) in p.terms() {
        if m.degree() != dim {
            continue;
        }
        let v = if m.has_kappa() {
            kappa_psi_integral_lemma(g, &m.psi, &m.kappa_list())?
        } else {
            psi_or_zero(g, m.psi.clone())
        };
        acc += c * v;
    }
    Ok(acc)
}

/// All psi exponent vectors of length `n` with total degree `deg`.
pub fn psi_vectors(n: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, deg: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(deg);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=deg).rev() {
            cur.push(k);
            rec(n, deg - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, deg, &mut Vec::new(), &mut out);
    out
}

/// Checks `int_{g,n+1} (kappa_m - psi_{n+1}^m) pi^*(A) psi_{n+1}^j
/// = int_{g,n} kappa_m kappa_{j-1} A` for every test monomial `A` in psi and
/// kappa classes and every `j >= 1` of complementary degree, with
/// `kappa_0 = 2g - 2 + n`. Both sides are evaluated by the added-points
/// lemma on their own spaces.
pub fn forgetful_pullback_check(g: u32, n: usize, m: u32) -> Result<CheckReport, IntersectionError> {
    if !is_stable(g, n) {
        return Err(IntersectionError::Unstable(g, n));
    }
    let dim = dimension(g, n) as u32;
    let mut labels = Vec::new();
    let mut lhs_all = Vec::new();
    let mut rhs_all = Vec::new();
    let kappa0 = ExactRational::from(2 * g as i64 - 2 + n as i64);
    // A of degree a, psi_{n+1}^j with a + m + j = dim + 1
    for a in 0..=dim {
        if a + m > dim {
            break;
        }
        let j = dim + 1 - a - m;
        for kdeg in 0..=a {
            for kpart in partitions(kdeg) {
                for dvec in psi_vectors(n, a - kdeg) {
                    // lhs: expand (kappa_m - psi^m) prod (kappa_k - psi^k)
                    let mut factors = vec![m];
                    factors.extend(kpart.iter().copied());
                    let mut lhs = ExactRational::zero();
                    for mask in 0u32..(1 << factors.len()) {
                        let mut extra = j;
                        let mut kept = Vec::new();
                        for (i, &f) in factors.iter().enumerate() {
                            if mask & (1 << i) != 0 {
                                extra += f;
                            } else {
                                kept.push(f);
                            }
                        }
                        let mut e = dvec.clone();
                        e.push(extra);
                        let v = kappa_psi_integral_lemma(g, &e, &kept)?;
                        if mask.count_ones() % 2 == 1 {
                            lhs -= v;
                        } else {
                            lhs += v;
                        }
                    }
                    let mut kk = kpart.clone();
                    kk.push(m);
                    let rhs = if j == 1 {
                        &kappa0 * kappa_psi_integral_lemma(g, &dvec, &kk)?
                    } else {
                        kk.push(j - 1);
                        kappa_psi_integral_lemma(g, &dvec, &kk)?
                    };
                    labels.push(format!("A=k{:?}*psi{:?},j={}", kpart, dvec, j));
                    lhs_all.push(lhs);
                    rhs_all.push(rhs);
                }
            }
        }
    }
    let params = json!({"g": g, "n": n, "m": m});
    let mut rep = CheckReport::pairings("forgetful_pullback", params, &labels, &rhs_all, &lhs_all);
    if labels.is_empty() {
        rep = rep.with_note("vacuous: degree exceeds dimension, both sides 0");
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn base_values() {
        assert_eq!(psi_integral(0, &[0, 0, 0]).unwrap(), q(1, 1));
        assert_eq!(psi_integral(0, &[1, 0, 0, 0]).unwrap(), q(1, 1));
        assert_eq!(psi_integral(1, &[1]).unwrap(), q(1, 24));
        assert_eq!(psi_integral(2, &[4]).unwrap(), q(1, 1152));
        assert_eq!(psi_integral(1, &[0]).unwrap(), q(0, 1));
        assert!(psi_integral(0, &[0, 0]).is_err());
        assert_eq!(psi_integral(0, &[1, 1, 0, 0, 0]).unwrap(), q(2, 1));
        assert_eq!(psi_integral(0, &[2, 0, 0, 0, 0]).unwrap(), q(1, 1));
        assert_eq!(psi_integral(3, &[7]).unwrap(), q(1, 82944));
        assert_eq!(psi_integral(2, &[2, 3]).unwrap(), q(29, 5760));
    }

    #[test]
    fn kappa_routes_agree() {
        assert_eq!(kappa_psi_integral(1, &[0], &[1]).unwrap(), q(1, 24));
        assert_eq!(kappa_psi_integral_lemma(1, &[0], &[1]).unwrap(), q(1, 24));
        assert_eq!(kappa_psi_integral(1, &[0, 0], &[2]).unwrap(), q(1, 24));
        for (g, d, k) in [
            (1u32, vec![0u32, 1], vec![1u32]),
            (0, vec![0, 0, 0, 0, 0], vec![1, 1]),
            (2, vec![1], vec![2, 1]),
            (2, vec![], vec![1, 1, 1]),
            (1, vec![0, 0, 0], vec![1, 1, 1]),
        ] {
            assert_eq!(
                kappa_psi_integral(g, &d, &k).unwrap(),
                kappa_psi_integral_lemma(g, &d, &k).unwrap(),
                "{g} {d:?} {k:?}"
            );
        }
        // int_{M_2} kappa_3 = 1/1152
        assert_eq!(kappa_psi_integral(2, &[], &[3]).unwrap(), q(1, 1152));
    }

    #[test]
    fn exp_route() {
        // int_{1,1} exp(-sum kappa_m/m) = -1/24
        let u = vec![q(-1, 1)];
        assert_eq!(exp_kappa_integral(1, &[0], &u).unwrap(), q(-1, 24));
    }

    #[test]
    fn split_multiplicities() {
        let mut total = ExactRational::zero();
        for_each_multiset_split(&[1, 1, 2], |_, _, m| total += m.clone());
        assert_eq!(total, q(8, 1));
    }
}
