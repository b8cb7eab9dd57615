//! Truncated polynomials in `kappa_1, kappa_2, ...` and `psi_1, ..., psi_n`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact::{bernoulli_poly, ExactRational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("point count mismatch: {0} vs {1}")]
    PointMismatch(usize, usize),
    #[error("truncation mismatch: {0} vs {1}")]
    TruncMismatch(u32, u32),
    #[error("point index {index} out of range 1..={n}")]
    PointOutOfRange { index: usize, n: usize },
    #[error("edge slots collide at point {0}")]
    SlotCollision(usize),
    #[error("edge numerator not divisible by (psi' + psi''): residue at degree {0}")]
    NotDivisible(u32),
    #[error("residue {w} outside 0..{r}")]
    BadResidue { w: u32, r: u32 },
}

/// `prod kappa_m^{e_m} * prod psi_i^{d_i}`.
///
/// `kappa` holds `(m, e_m)` pairs with `m >= 1`, `e_m >= 1`, sorted by `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TautMonomial {
    pub kappa: Vec<(u32, u32)>,
    pub psi: Vec<u32>,
}

impl TautMonomial {
    pub fn one(n: usize) -> Self {
        TautMonomial { kappa: Vec::new(), psi: vec![0; n] }
    }

    pub fn psi(psi: Vec<u32>) -> Self {
        TautMonomial { kappa: Vec::new(), psi }
    }

    /// Builds a monomial from a list of kappa indices (with repetition).
    pub fn new(kappa_indices: &[u32], psi: Vec<u32>) -> Self {
        let mut kappa: Vec<(u32, u32)> = Vec::new();
        let mut idx = kappa_indices.to_vec();
        idx.sort_unstable();
        for m in idx {
            assert!(m >= 1, "kappa_0 is not a monomial factor");
            match kappa.last_mut() {
                Some((k, e)) if *k == m => *e += 1,
                _ => kappa.push((m, 1)),
            }
        }
        TautMonomial { kappa, psi }
    }

    pub fn n_points(&self) -> usize {
        self.psi.len()
    }

    pub fn kappa_degree(&self) -> u32 {
        self.kappa.iter().map(|(m, e)| m * e).sum()
    }

    pub fn psi_degree(&self) -> u32 {
        self.psi.iter().sum()
    }

    pub fn degree(&self) -> u32 {
        self.kappa_degree() + self.psi_degree()
    }

    /// Kappa indices with repetition, ascending.
    pub fn kappa_list(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for &(m, e) in &self.kappa {
            for _ in 0..e {
                out.push(m);
            }
        }
        out
    }

    pub fn has_kappa(&self) -> bool {
        !self.kappa.is_empty()
    }

    pub fn mul(&self, other: &TautMonomial) -> TautMonomial {
        debug_assert_eq!(self.psi.len(), other.psi.len());
        let mut kappa: Vec<(u32, u32)> = Vec::with_capacity(self.kappa.len() + other.kappa.len());
        let (mut i, mut j) = (0, 0);
        while i < self.kappa.len() || j < other.kappa.len() {
            match (self.kappa.get(i), other.kappa.get(j)) {
                (Some(&(a, ea)), Some(&(b, eb))) if a == b => {
                    kappa.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
                (Some(&(a, ea)), Some(&(b, _))) if a < b => {
                    kappa.push((a, ea));
                    i += 1;
                }
                (Some(_), Some(&(b, eb))) => {
                    kappa.push((b, eb));
                    j += 1;
                }
                (Some(&p), None) => {
                    kappa.push(p);
                    i += 1;
                }
                (None, Some(&p)) => {
                    kappa.push(p);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let psi = self.psi.iter().zip(&other.psi).map(|(a, b)| a + b).collect();
        TautMonomial { kappa, psi }
    }
}

impl fmt::Display for TautMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for &(m, e) in &self.kappa {
            if e == 1 {
                parts.push(format!("k{m}"));
            } else {
                parts.push(format!("k{m}^{e}"));
            }
        }
        for (i, &d) in self.psi.iter().enumerate() {
            match d {
                0 => {}
                1 => parts.push(format!("psi{}", i + 1)),
                _ => parts.push(format!("psi{}^{d}", i + 1)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Truncated graded polynomial with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TautPolynomial {
    n_points: usize,
    trunc: u32,
    terms: BTreeMap<TautMonomial, ExactRational>,
}

impl TautPolynomial {
    pub fn zero(n_points: usize, trunc: u32) -> Self {
        TautPolynomial { n_points, trunc, terms: BTreeMap::new() }
    }

    pub fn one(n_points: usize, trunc: u32) -> Self {
        Self::constant(n_points, trunc, ExactRational::one())
    }

    pub fn constant(n_points: usize, trunc: u32, c: ExactRational) -> Self {
        let mut p = Self::zero(n_points, trunc);
        p.add_term(TautMonomial::one(n_points), c);
        p
    }

    pub fn monomial(n_points: usize, trunc: u32, mono: TautMonomial, c: ExactRational) -> Self {
        assert_eq!(mono.n_points(), n_points);
        let mut p = Self::zero(n_points, trunc);
        p.add_term(mono, c);
        p
    }

    /// `psi_i` with 1-based `i`.
    pub fn psi(n_points: usize, trunc: u32, i: usize) -> Result<Self, PolyError> {
        if i == 0 || i > n_points {
            return Err(PolyError::PointOutOfRange { index: i, n: n_points });
        }
        let mut d = vec![0; n_points];
        d[i - 1] = 1;
        Ok(Self::monomial(n_points, trunc, TautMonomial::psi(d), ExactRational::one()))
    }

    pub fn kappa(n_points: usize, trunc: u32, m: u32) -> Self {
        Self::monomial(n_points, trunc, TautMonomial::new(&[m], vec![0; n_points]), ExactRational::one())
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn trunc_degree(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TautMonomial, &ExactRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &TautMonomial) -> ExactRational {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    /// Adds `c * mono`, dropping it if above the truncation degree.
    pub fn add_term(&mut self, mono: TautMonomial, c: ExactRational) {
        if c.is_zero() || mono.degree() > self.trunc {
            return;
        }
        debug_assert_eq!(mono.n_points(), self.n_points);
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.n_points != other.n_points {
            return Err(PolyError::PointMismatch(self.n_points, other.n_points));
        }
        if self.trunc != other.trunc {
            return Err(PolyError::TruncMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        let mut out = Self::zero(self.n_points, self.trunc);
        for (m, c) in &self.terms {
            if m.degree() == degree {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Re-truncates to a lower degree bound.
    pub fn truncate(&self, trunc: u32) -> Self {
        let mut out = Self::zero(self.n_points, trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

pub fn tp_add(a: &TautPolynomial, b: &TautPolynomial) -> Result<TautPolynomial, PolyError> {
    a.check_compatible(b)?;
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.add_term(m.clone(), c.clone());
    }
    Ok(out)
}

pub fn tp_scale(a: &TautPolynomial, c: &ExactRational) -> TautPolynomial {
    let mut out = TautPolynomial::zero(a.n_points, a.trunc);
    if c.is_zero() {
        return out;
    }
    for (m, v) in &a.terms {
        out.terms.insert(m.clone(), v * c);
    }
    out
}

pub fn tp_mul(a: &TautPolynomial, b: &TautPolynomial) -> Result<TautPolynomial, PolyError> {
    a.check_compatible(b)?;
    let mut out = TautPolynomial::zero(a.n_points, a.trunc);
    for (ma, ca) in &a.terms {
        let da = ma.degree();
        for (mb, cb) in &b.terms {
            if da + mb.degree() > a.trunc {
                continue;
            }
            out.add_term(ma.mul(mb), ca * cb);
        }
    }
    Ok(out)
}

/// `exp(p)` for `p` without constant term.
pub fn tp_exp(p: &TautPolynomial) -> TautPolynomial {
    assert!(
        p.coeff(&TautMonomial::one(p.n_points)).is_zero(),
        "exp of a series with nonzero constant term"
    );
    let mut out = TautPolynomial::one(p.n_points, p.trunc);
    let mut power = TautPolynomial::one(p.n_points, p.trunc);
    for k in 1..=p.trunc {
        power = tp_mul(&power, p).expect("same shape");
        if power.is_empty() {
            break;
        }
        let scaled = tp_scale(&power, &ExactRational::from(k as i64).recip());
        power = scaled.clone();
        out = tp_add(&out, &scaled).expect("same shape");
    }
    out
}

fn partitions_with_parts_up_to(total: u32, max_part: u32, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
    if total == 0 {
        out.push(cur.clone());
        return;
    }
    for part in (1..=max_part.min(total)).rev() {
        cur.push(part);
        partitions_with_parts_up_to(total - part, part, out, cur);
        cur.pop();
    }
}

/// All partitions of `total` as descending lists.
pub fn partitions(total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    partitions_with_parts_up_to(total, total, &mut out, &mut Vec::new());
    out
}

/// `exp(sum_m c_m kappa_m)` truncated at `trunc`. `coeffs[m - 1] = c_m`;
/// missing entries are zero.
pub fn exp_kappa_series(coeffs: &[ExactRational], n_points: usize, trunc: u32) -> TautPolynomial {
    let mut out = TautPolynomial::zero(n_points, trunc);
    let c = |m: u32| coeffs.get(m as usize - 1).cloned().unwrap_or_default();
    for d in 0..=trunc {
        for part in partitions(d) {
            let mono = TautMonomial::new(&part, vec![0; n_points]);
            let mut coef = ExactRational::one();
            for &(m, e) in &mono.kappa {
                let cm = c(m);
                coef = coef * cm.pow(e as i32) / ExactRational::from_bigint(crate::exact::factorial(e));
                if coef.is_zero() {
                    break;
                }
            }
            out.add_term(mono, coef);
        }
    }
    out
}

/// `sum_{k <= trunc} weight^k psi_i^k`.
pub fn psi_geometric(
    i: usize,
    weight: &ExactRational,
    n_points: usize,
    trunc: u32,
) -> Result<TautPolynomial, PolyError> {
    if i == 0 || i > n_points {
        return Err(PolyError::PointOutOfRange { index: i, n: n_points });
    }
    let mut out = TautPolynomial::zero(n_points, trunc);
    let mut w = ExactRational::one();
    for k in 0..=trunc {
        let mut d = vec![0; n_points];
        d[i - 1] = k;
        out.add_term(TautMonomial::psi(d), w.clone());
        w = &w * weight;
    }
    Ok(out)
}

/// Univariate truncated series `sum c_k y^k`.
pub type Series = Vec<ExactRational>;

pub fn series_mul(a: &[ExactRational], b: &[ExactRational], trunc: usize) -> Series {
    let mut out = vec![ExactRational::zero(); trunc + 1];
    for (i, x) in a.iter().enumerate().take(trunc + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(trunc + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `exp(f)` for a series with `f[0] = 0`, via `E' = f' E`.
pub fn series_exp(f: &[ExactRational], trunc: usize) -> Series {
    assert!(f.first().map_or(true, |c| c.is_zero()));
    let mut e = vec![ExactRational::zero(); trunc + 1];
    e[0] = ExactRational::one();
    for k in 1..=trunc {
        // k e_k = sum_{j=1}^{k} j f_j e_{k-j}
        let mut acc = ExactRational::zero();
        for j in 1..=k {
            if let Some(fj) = f.get(j) {
                if !fj.is_zero() && !e[k - j].is_zero() {
                    acc += ExactRational::from(j) * fj * &e[k - j];
                }
            }
        }
        e[k] = acc / ExactRational::from(k);
    }
    e
}

/// Coefficients `(-x)^m B_{m+1}(y) / (m (m+1))` for `m = 1..=trunc`,
/// returned with index 0 unused (zero).
pub fn chiodo_coefficients(y: &ExactRational, x: &ExactRational, trunc: u32) -> Series {
    let mut out = vec![ExactRational::zero(); trunc as usize + 1];
    let mx = -x;
    let mut p = ExactRational::one();
    for m in 1..=trunc as usize {
        p = &p * &mx;
        let b = bernoulli_poly(m + 1, y);
        if !b.is_zero() {
            out[m] = &p * b / ExactRational::from((m * (m + 1)) as i64);
        }
    }
    out
}

/// `exp(-sum_m c_m psi^m)` as a univariate series: the leg factor of a
/// marking with decoration `a` (the true integer, not its residue).
pub fn leg_factor_series(a: i64, r: u32, x: &ExactRational, trunc: u32) -> Series {
    let y = ExactRational::new(a, r as i64);
    let c = chiodo_coefficients(&y, x, trunc);
    let neg: Series = c.iter().map(|v| -v).collect();
    series_exp(&neg, trunc as usize)
}

/// Bivariate series in `(psi', psi'')`, dense, total degree `<= trunc`.
/// `coeffs[p][q]` is the coefficient of `psi'^p psi''^q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeSeries {
    trunc: u32,
    coeffs: Vec<Vec<ExactRational>>,
}

impl EdgeSeries {
    pub fn zero(trunc: u32) -> Self {
        let coeffs = (0..=trunc).map(|p| vec![ExactRational::zero(); (trunc - p + 1) as usize]).collect();
        EdgeSeries { trunc, coeffs }
    }

    pub fn one(trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0][0] = ExactRational::one();
        s
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn get(&self, p: u32, q: u32) -> ExactRational {
        if p + q > self.trunc {
            return ExactRational::zero();
        }
        self.coeffs[p as usize][q as usize].clone()
    }

    pub fn coeff_ref(&self, p: u32, q: u32) -> Option<&ExactRational> {
        if p + q > self.trunc {
            return None;
        }
        Some(&self.coeffs[p as usize][q as usize])
    }

    pub fn set(&mut self, p: u32, q: u32, c: ExactRational) {
        if p + q <= self.trunc {
            self.coeffs[p as usize][q as usize] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|row| row.iter().all(|c| c.is_zero()))
    }

    /// Nonzero entries `(p, q, c)`.
    pub fn nonzero(&self) -> Vec<(u32, u32, ExactRational)> {
        let mut out = Vec::new();
        for (p, row) in self.coeffs.iter().enumerate() {
            for (q, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out.push((p as u32, q as u32, c.clone()));
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &EdgeSeries) -> EdgeSeries {
        let t = self.trunc.min(other.trunc);
        let mut out = EdgeSeries::zero(t);
        for (p1, q1, c1) in self.nonzero() {
            for (p2, q2, c2) in other.nonzero() {
                if p1 + p2 + q1 + q2 <= t {
                    let cur = out.coeffs[(p1 + p2) as usize][(q1 + q2) as usize].clone();
                    out.coeffs[(p1 + p2) as usize][(q1 + q2) as usize] = cur + &c1 * &c2;
                }
            }
        }
        out
    }

    /// Exchanges the roles of `psi'` and `psi''`.
    pub fn swapped(&self) -> EdgeSeries {
        let mut out = EdgeSeries::zero(self.trunc);
        for (p, q, c) in self.nonzero() {
            out.set(q, p, c);
        }
        out
    }

    /// `-(psi' + psi'')`, the excess normal-bundle factor of a shared edge.
    pub fn negative_normal(trunc: u32) -> EdgeSeries {
        let mut s = EdgeSeries::zero(trunc);
        s.set(1, 0, -ExactRational::one());
        s.set(0, 1, -ExactRational::one());
        s
    }

    /// `self * (psi' + psi'')`, truncated at `trunc`.
    pub fn times_sum(&self, trunc: u32) -> EdgeSeries {
        let mut out = EdgeSeries::zero(trunc);
        for (p, q, c) in self.nonzero() {
            if p + q < trunc {
                let a = out.get(p + 1, q) + &c;
                out.set(p + 1, q, a);
                let b = out.get(p, q + 1) + &c;
                out.set(p, q + 1, b);
            }
        }
        out
    }
}

/// The edge factor
/// `(1 - exp(-sum_m c_m (psi'^m - (-psi'')^m))) / (psi' + psi'')`
/// with `c_m = (-x)^m B_{m+1}(w/r) / (m (m+1))`, truncated to total degree
/// `trunc`. The division is exact and is verified by re-multiplication.
pub fn edge_local_factor(w: u32, r: u32, x: &ExactRational, trunc: u32) -> Result<EdgeSeries, PolyError> {
    if w >= r {
        return Err(PolyError::BadResidue { w, r });
    }
    let top = trunc as usize + 1;
    let c = chiodo_coefficients(&ExactRational::new(w as i64, r as i64), x, top as u32);
    // exponent splits as f(psi') + h(psi'')
    let f: Series = c.iter().map(|v| -v).collect();
    let h: Series = c
        .iter()
        .enumerate()
        .map(|(m, v)| if m % 2 == 0 { v.clone() } else { -v })
        .collect();
    let ef = series_exp(&f, top);
    let eh = series_exp(&h, top);
    let mut num = EdgeSeries::zero(top as u32);
    for p in 0..=top {
        for q in 0..=top - p {
            let mut v = -(&ef[p] * &eh[q]);
            if p == 0 && q == 0 {
                v += ExactRational::one();
            }
            num.set(p as u32, q as u32, v);
        }
    }
    let quot = divide_by_sum(&num, trunc)?;
    if quot.times_sum(top as u32) != num {
        return Err(PolyError::NotDivisible(top as u32));
    }
    Ok(quot)
}

/// Exact quotient of `num` by `(psi' + psi'')`, degree by degree.
fn divide_by_sum(num: &EdgeSeries, trunc: u32) -> Result<EdgeSeries, PolyError> {
    if !num.get(0, 0).is_zero() {
        return Err(PolyError::NotDivisible(0));
    }
    let mut quot = EdgeSeries::zero(trunc);
    for d in 1..=num.trunc {
        // num[p][d-p] = quot[p-1][d-p] + quot[p][d-1-p]
        let mut prev = ExactRational::zero();
        for p in 0..d {
            let qv = num.get(p, d - p) - &prev;
            if d - 1 <= trunc {
                quot.set(p, d - 1 - p, qv.clone());
            }
            prev = qv;
        }
        if num.get(d, 0) != prev {
            return Err(PolyError::NotDivisible(d));
        }
    }
    Ok(quot)
}

/// Places an edge series on a single vertex (a self-loop) by mapping
/// `psi'^p psi''^q` to `psi_a^p psi_b^q` (1-based points).
pub fn substitute_edge(
    series: &EdgeSeries,
    n_points: usize,
    trunc: u32,
    a: usize,
    b: usize,
) -> Result<TautPolynomial, PolyError> {
    for &i in &[a, b] {
        if i == 0 || i > n_points {
            return Err(PolyError::PointOutOfRange { index: i, n: n_points });
        }
    }
    if a == b {
        return Err(PolyError::SlotCollision(a));
    }
    let mut out = TautPolynomial::zero(n_points, trunc);
    for (p, q, c) in series.nonzero() {
        let mut d = vec![0; n_points];
        d[a - 1] = p;
        d[b - 1] = q;
        out.add_term(TautMonomial::psi(d), c);
    }
    Ok(out)
}

impl fmt::Display for TautPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if m.degree() == 0 {
                abs.to_string()
            } else if abs.is_one() {
                m.to_string()
            } else {
                format!("{abs}*{m}")
            };
            if first {
                if neg {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if neg {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

/// Coefficients `c_0..c_{k-1}` of the unique polynomial of degree `< k`
/// through the `k` points `(xs[j], ys[j])` (distinct `xs`).
pub fn interpolate(xs: &[ExactRational], ys: &[ExactRational]) -> Vec<ExactRational> {
    assert_eq!(xs.len(), ys.len());
    let k = xs.len();
    // Newton divided differences
    let mut dd: Vec<ExactRational> = ys.to_vec();
    for level in 1..k {
        for j in (level..k).rev() {
            dd[j] = (&dd[j] - &dd[j - 1]) / (&xs[j] - &xs[j - level]);
        }
    }
    // expand the Newton form from the innermost term outwards
    let mut coeffs = vec![ExactRational::zero(); k];
    for j in (0..k).rev() {
        // coeffs <- coeffs * (X - xs[j]) + dd[j]
        let mut next = vec![ExactRational::zero(); k];
        for (t, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if t + 1 < k {
                next[t + 1] += c;
            }
            next[t] -= c * &xs[j];
        }
        next[0] += &dd[j];
        coeffs = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = |x: &ExactRational| x * x * x * q(2, 3) - x + q(5, 1);
        let xs: Vec<ExactRational> = (0..5).map(|i| q(i, 2)).collect();
        let ys: Vec<ExactRational> = xs.iter().map(f).collect();
        let c = interpolate(&xs, &ys);
        assert_eq!(c, vec![q(5, 1), q(-1, 1), q(0, 1), q(2, 3), q(0, 1)]);
    }
    use crate::exact::q;

    #[test]
    fn truncation_kills_square() {
        let one = TautPolynomial::one(1, 1);
        let p = TautPolynomial::psi(1, 1, 1).unwrap();
        let a = tp_add(&one, &p).unwrap();
        let b = tp_add(&one, &tp_scale(&p, &q(-1, 1))).unwrap();
        assert_eq!(tp_mul(&a, &b).unwrap(), one);
    }

    #[test]
    fn kappa_merge_and_purge() {
        let k1 = TautPolynomial::kappa(0, 4, 1);
        let sq = tp_mul(&k1, &k1).unwrap();
        let (m, c) = sq.terms().next().unwrap();
        assert_eq!(m.kappa, vec![(1, 2)]);
        assert!(c.is_one());
        let mut p = tp_scale(&TautPolynomial::kappa(1, 4, 2), &q(3, 1));
        p.add_term(TautMonomial::psi(vec![1]), q(0, 1));
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn exp_kappa_examples() {
        assert_eq!(exp_kappa_series(&[], 0, 3), TautPolynomial::one(0, 3));
        let e = exp_kappa_series(&[q(-1, 1)], 0, 2);
        assert_eq!(e.to_string(), "1 - k1 + 1/2*k1^2");
        let e = exp_kappa_series(&[q(-1, 1), q(-1, 2), q(-1, 3)], 0, 3);
        assert_eq!(
            e.to_string(),
            "1 - k1 + 1/2*k1*k2 + 1/2*k1^2 - 1/6*k1^3 - 1/2*k2 - 1/3*k3"
        );
    }

    #[test]
    fn geometric() {
        let g = psi_geometric(1, &q(-1, 1), 1, 2).unwrap();
        assert_eq!(g.to_string(), "1 - psi1 + psi1^2");
        let g = psi_geometric(1, &q(0, 1), 1, 2).unwrap();
        assert_eq!(g, TautPolynomial::one(1, 2));
    }

    #[test]
    fn edge_factor_constant_term() {
        let e = edge_local_factor(0, 1, &q(1, 1), 1).unwrap();
        assert_eq!(e.get(0, 0), q(-1, 12));
        let z = edge_local_factor(1, 3, &q(0, 1), 4).unwrap();
        assert!(z.is_zero());
        let s = edge_local_factor(1, 2, &q(1, 1), 5).unwrap();
        assert_eq!(s, s.swapped());
    }

    #[test]
    fn self_loop_substitution() {
        let mut s = EdgeSeries::zero(2);
        s.set(1, 1, q(1, 1));
        let p = substitute_edge(&s, 3, 3, 2, 3).unwrap();
        assert_eq!(p.to_string(), "psi2*psi3");
        assert!(substitute_edge(&s, 3, 3, 2, 2).is_err());
    }
}
