//! Integrals of Omega-classes against tautological test classes, by the
//! stable-graph sum.
//!
//! Every evaluation reduces to the same contraction: a stable graph with a
//! bivariate series on each edge, a univariate series on each leg and a
//! common vertex exponential `exp(sum_m c_m kappa_m)`. Vertex integrals are
//! memoized by (genus, vertex series, kappa insertion, leg series,
//! half-edge exponents).

use std::sync::Arc;

use parking_lot::RwLock;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::exact::ExactRational;
use crate::graphs::{automorphism_order, enumerate_stable_graphs, enumerate_weightings, GraphError, StableGraph, Weighting};
use crate::hodge::{lambda_exp_kappa_integral, lambda_kappa_psi_integral};
use crate::intersection::{dimension, exp_kappa_integral, is_stable, kappa_psi_integral, psi_vectors, IntersectionError};
use crate::poly::{
    chiodo_coefficients, edge_local_factor, interpolate, leg_factor_series, partitions, series_mul, EdgeSeries,
    PolyError, Series, TautMonomial, TautPolynomial,
};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OmegaError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("test class has {got} points, expected {expected}")]
    PointMismatch { expected: usize, got: usize },
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
}

/// The parameters `(r, s, a_1..a_n, x)` of one Omega-class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmegaSpec {
    pub r: u32,
    pub s: i64,
    pub a: Vec<i64>,
    pub x: ExactRational,
}

impl OmegaSpec {
    pub fn new(r: u32, s: i64, a: Vec<i64>, x: ExactRational) -> Self {
        OmegaSpec { r, s, a, x }
    }

    pub fn with_x(&self, x: ExactRational) -> Self {
        OmegaSpec { x, ..self.clone() }
    }

    /// Checks `r > 0`, the number of decorations and the modular constraint
    /// on `(g, n)`.
    pub fn validate(&self, g: u32, n: usize) -> Result<(), OmegaError> {
        if self.r == 0 {
            return Err(GraphError::ZeroModulus.into());
        }
        if self.a.len() != n {
            return Err(GraphError::LegCount { expected: n, got: self.a.len() }.into());
        }
        if !is_stable(g, n) {
            return Err(GraphError::Unstable(g, n).into());
        }
        let sum: i64 = self.a.iter().sum();
        let target = (2 * g as i64 - 2 + n as i64) * self.s;
        if (sum - target).rem_euclid(self.r as i64) != 0 {
            return Err(GraphError::ConstraintViolated { sum, target, r: self.r }.into());
        }
        Ok(())
    }

    /// The degree-0 part of the class on `M_{g,n}`: `r^{2g-1}`.
    pub fn normalization(&self, g: u32) -> ExactRational {
        ExactRational::from(self.r as i64).pow(2 * g as i32 - 1)
    }

    fn vertex_series(&self, trunc: u32) -> Series {
        chiodo_coefficients(&ExactRational::new(self.s, self.r as i64), &self.x, trunc)
    }
}

// ---------------------------------------------------------------------------
// interned series and memo tables

#[derive(Default)]
struct Interner {
    ids: FxHashMap<Series, u32>,
    items: Vec<Arc<Series>>,
}

static SERIES: RwLock<Option<Interner>> = RwLock::new(None);

fn canonical_series(mut s: Series) -> Series {
    while s.last().map_or(false, |c| c.is_zero()) {
        s.pop();
    }
    s
}

fn intern(s: Series) -> u32 {
    let s = canonical_series(s);
    if let Some(id) = SERIES.read().as_ref().and_then(|t| t.ids.get(&s).copied()) {
        return id;
    }
    let mut guard = SERIES.write();
    let t = guard.get_or_insert_with(Interner::default);
    if let Some(&id) = t.ids.get(&s) {
        return id;
    }
    let id = t.items.len() as u32;
    t.items.push(Arc::new(s.clone()));
    t.ids.insert(s, id);
    id
}

fn series_by_id(id: u32) -> Arc<Series> {
    SERIES.read().as_ref().expect("series table initialized").items[id as usize].clone()
}

type Small = SmallVec<[u32; 8]>;
type CoreKey = (u32, u32, Small, Small);
type VertexKey = (u32, u32, Small, Small, Small);

/// Nonzero coefficients `(p, q, c)` of an edge series.
type EdgeTerms = Arc<Vec<(u32, u32, ExactRational)>>;
type EdgeKey = (u32, u32, ExactRational, u32);

static CORE_CACHE: RwLock<Option<FxHashMap<CoreKey, ExactRational>>> = RwLock::new(None);
static VERTEX_CACHE: RwLock<Option<FxHashMap<VertexKey, ExactRational>>> = RwLock::new(None);
static EDGE_CACHE: RwLock<Option<FxHashMap<EdgeKey, Arc<EdgeSeries>>>> = RwLock::new(None);

fn cached<K: std::hash::Hash + Eq + Clone, V: Clone>(
    table: &RwLock<Option<FxHashMap<K, V>>>,
    key: &K,
    compute: impl FnOnce() -> V,
) -> V {
    if let Some(v) = table.read().as_ref().and_then(|m| m.get(key).cloned()) {
        return v;
    }
    let v = compute();
    table.write().get_or_insert_with(FxHashMap::default).entry(key.clone()).or_insert_with(|| v.clone());
    v
}

pub fn clear_omega_caches() {
    *CORE_CACHE.write() = None;
    *VERTEX_CACHE.write() = None;
    *EDGE_CACHE.write() = None;
    *TERM_CACHE.write() = None;
    *EDGE_TERMS_CACHE.write() = None;
}

fn edge_factor(w: u32, r: u32, x: &ExactRational, trunc: u32) -> Result<Arc<EdgeSeries>, OmegaError> {
    let key = (w, r, x.clone(), trunc);
    if let Some(v) = EDGE_CACHE.read().as_ref().and_then(|m| m.get(&key).cloned()) {
        return Ok(v);
    }
    let e = Arc::new(edge_local_factor(w, r, x, trunc)?);
    EDGE_CACHE.write().get_or_insert_with(FxHashMap::default).insert(key, e.clone());
    Ok(e)
}

static EDGE_TERMS_CACHE: RwLock<Option<FxHashMap<EdgeKey, EdgeTerms>>> = RwLock::new(None);

fn edge_factor_terms(w: u32, r: u32, x: &ExactRational, trunc: u32) -> Result<EdgeTerms, OmegaError> {
    let key = (w, r, x.clone(), trunc);
    if let Some(v) = EDGE_TERMS_CACHE.read().as_ref().and_then(|m| m.get(&key).cloned()) {
        return Ok(v);
    }
    let t = edge_terms(&*edge_factor(w, r, x, trunc)?);
    EDGE_TERMS_CACHE.write().get_or_insert_with(FxHashMap::default).insert(key, t.clone());
    Ok(t)
}

/// `int_{g,|d|} exp(sum_m c_m kappa_m) prod kappa_{K_j} psi^d` with `d` sorted.
fn core_integral(g: u32, c_id: u32, kappa: &[u32], d: &[u32]) -> ExactRational {
    let dim = dimension(g, d.len());
    let used: i64 = d.iter().chain(kappa.iter()).map(|&v| v as i64).sum();
    if used > dim {
        return ExactRational::zero();
    }
    let key: CoreKey = (g, c_id, Small::from_slice(kappa), Small::from_slice(d));
    cached(&CORE_CACHE, &key, || {
        let c = series_by_id(c_id);
        if kappa.is_empty() {
            let u: Vec<ExactRational> = c.iter().skip(1).cloned().collect();
            return exp_kappa_integral(g, d, &u).expect("stable vertex");
        }
        let rest = (dim - used) as u32;
        let mut acc = ExactRational::zero();
        for part in partitions(rest) {
            let mut coef = ExactRational::one();
            let mut i = 0;
            while i < part.len() {
                let mult = part[i..].iter().take_while(|&&m| m == part[i]).count();
                let cm = c.get(part[i] as usize).cloned().unwrap_or_default();
                coef *= cm.pow(mult as i32);
                coef /= ExactRational::from_bigint(crate::exact::factorial(mult as u32));
                i += mult;
            }
            if coef.is_zero() {
                continue;
            }
            let mut k: Vec<u32> = kappa.to_vec();
            k.extend(part.iter().copied());
            k.sort_unstable();
            acc += coef * kappa_psi_integral(g, d, &k).expect("stable vertex");
        }
        acc
    })
}

/// Vertex integral with leg series folded in. `legs` and `e` are sorted.
fn vertex_value(g: u32, c_id: u32, kappa: &[u32], legs: &[u32], e: &[u32]) -> ExactRational {
    let n = legs.len() + e.len();
    let dim = dimension(g, n);
    let used: i64 = e.iter().chain(kappa.iter()).map(|&v| v as i64).sum();
    if used > dim {
        return ExactRational::zero();
    }
    if legs.is_empty() {
        return core_integral(g, c_id, kappa, e);
    }
    let key: VertexKey = (g, c_id, Small::from_slice(kappa), Small::from_slice(legs), Small::from_slice(e));
    cached(&VERTEX_CACHE, &key, || {
        let budget = (dim - used) as u32;
        let series: Vec<Arc<Series>> = legs.iter().map(|&id| series_by_id(id)).collect();
        let mut acc = ExactRational::zero();
        let mut j = vec![0u32; legs.len()];
        fold_legs(&series, budget, 0, &mut j, ExactRational::one(), &mut |j, coef| {
            let mut d = Small::from_slice(e);
            d.extend_from_slice(j);
            d.sort_unstable_by(|a, b| b.cmp(a));
            acc += coef * core_integral(g, c_id, kappa, &d);
        });
        acc
    })
}

fn fold_legs(
    series: &[Arc<Series>],
    budget: u32,
    pos: usize,
    j: &mut Vec<u32>,
    coef: ExactRational,
    f: &mut impl FnMut(&[u32], ExactRational),
) {
    if pos == series.len() {
        f(j, coef);
        return;
    }
    for k in 0..=budget {
        let Some(c) = series[pos].get(k as usize) else { break };
        if c.is_zero() {
            continue;
        }
        j[pos] = k;
        fold_legs(series, budget - k, pos + 1, j, &coef * c, f);
    }
    j[pos] = 0;
}

/// A fully decorated graph ready for contraction.
struct Decorated<'a> {
    graph: &'a StableGraph,
    edges: &'a [EdgeTerms],
    c_id: u32,
    legs_at: Vec<Small>,
    dims: &'a [i64],
}

impl<'a> Decorated<'a> {
    fn new(graph: &'a StableGraph, dims: &'a [i64], edges: &'a [EdgeTerms], c_id: u32, leg_ids: &[u32]) -> Self {
        let nv = graph.num_vertices();
        let mut legs_at = vec![Small::new(); nv];
        for (i, &v) in graph.legs.iter().enumerate() {
            legs_at[v].push(leg_ids[i]);
        }
        for l in legs_at.iter_mut() {
            l.sort_unstable();
        }
        Decorated { graph, edges, c_id, legs_at, dims }
    }

    /// Sum over edge-series monomials and over the ways of distributing the
    /// kappa insertion among vertices.
    fn contract(&self, kappa: &[u32]) -> ExactRational {
        let nv = self.graph.num_vertices();
        let mut assignments: Vec<Vec<Small>> = Vec::new();
        distribute_kappa(kappa, 0, &mut vec![Small::new(); nv], self.dims, &mut assignments);
        if assignments.is_empty() {
            return ExactRational::zero();
        }
        let mut exps: Vec<Small> = vec![Small::new(); nv];
        let mut load: SmallVec<[i64; 8]> = SmallVec::from_elem(0, nv);
        let mut acc = ExactRational::zero();
        self.dfs(0, &mut exps, &mut load, ExactRational::one(), &assignments, &mut acc);
        acc
    }

    fn dfs(
        &self,
        e: usize,
        exps: &mut Vec<Small>,
        load: &mut SmallVec<[i64; 8]>,
        coef: ExactRational,
        assignments: &[Vec<Small>],
        acc: &mut ExactRational,
    ) {
        if e == self.edges.len() {
            for kv in assignments {
                let mut prod = coef.clone();
                for v in 0..exps.len() {
                    let kdeg: i64 = kv[v].iter().map(|&m| m as i64).sum();
                    if load[v] + kdeg > self.dims[v] {
                        prod = ExactRational::zero();
                        break;
                    }
                    let mut ev = exps[v].clone();
                    ev.sort_unstable_by(|a, b| b.cmp(a));
                    let val = vertex_value(self.graph.genera[v], self.c_id, &kv[v], &self.legs_at[v], &ev);
                    if val.is_zero() {
                        prod = ExactRational::zero();
                        break;
                    }
                    prod *= val;
                }
                if !prod.is_zero() {
                    *acc += prod;
                }
            }
            return;
        }
        let (a, b) = self.graph.edges[e];
        for (p, q, c) in self.edges[e].iter() {
            let (p, q) = (*p, *q);
            let (p64, q64) = (p as i64, q as i64);
            if a == b {
                if load[a] + p64 + q64 > self.dims[a] {
                    continue;
                }
            } else if load[a] + p64 > self.dims[a] || load[b] + q64 > self.dims[b] {
                continue;
            }
            exps[a].push(p);
            exps[b].push(q);
            load[a] += p64;
            load[b] += q64;
            self.dfs(e + 1, exps, load, &coef * c, assignments, acc);
            load[a] -= p64;
            load[b] -= q64;
            exps[b].pop();
            exps[a].pop();
        }
    }
}

fn distribute_kappa(kappa: &[u32], pos: usize, cur: &mut Vec<Small>, dims: &[i64], out: &mut Vec<Vec<Small>>) {
    if pos == kappa.len() {
        let mut sorted = cur.clone();
        for s in sorted.iter_mut() {
            s.sort_unstable();
        }
        out.push(sorted);
        return;
    }
    for v in 0..cur.len() {
        let deg: i64 = cur[v].iter().map(|&m| m as i64).sum::<i64>() + kappa[pos] as i64;
        if deg > dims[v] {
            continue;
        }
        cur[v].push(kappa[pos]);
        distribute_kappa(kappa, pos + 1, cur, dims, out);
        cur[v].pop();
    }
}

fn shifted(series: &Series, k: u32) -> Series {
    let mut out = vec![ExactRational::zero(); k as usize];
    out.extend(series.iter().cloned());
    out
}

fn test_terms(g: u32, n: usize, t: &TautPolynomial) -> Result<Vec<(TautMonomial, ExactRational)>, OmegaError> {
    if t.n_points() != n {
        return Err(OmegaError::PointMismatch { expected: n, got: t.n_points() });
    }
    let dim = dimension(g, n);
    Ok(t.terms().filter(|(m, _)| (m.degree() as i64) <= dim).map(|(m, c)| (m.clone(), c.clone())).collect())
}

// ---------------------------------------------------------------------------
// single Omega-class

struct Prepared {
    c_id: u32,
    legs: Vec<Series>,
    trunc: u32,
}

fn prepare(g: u32, n: usize, spec: &OmegaSpec) -> Result<Prepared, OmegaError> {
    spec.validate(g, n)?;
    let trunc = dimension(g, n).max(0) as u32;
    let c_id = intern(spec.vertex_series(trunc));
    let legs = spec.a.iter().map(|&a| leg_factor_series(a, spec.r, &spec.x, trunc)).collect();
    Ok(Prepared { c_id, legs, trunc })
}

type TermKey = (u32, usize, u32, i64, Vec<i64>, ExactRational, u32);

/// The graphs, their vertex dimensions, and the decorated terms
/// `(graph index, edge series, prefactor)`.
struct TermList {
    graphs: Arc<Vec<StableGraph>>,
    dims: Arc<Vec<Vec<i64>>>,
    terms: Vec<(usize, Vec<EdgeTerms>, ExactRational)>,
}

type Terms = Arc<TermList>;

static DIMS_CACHE: RwLock<Option<FxHashMap<(u32, usize), Arc<Vec<Vec<i64>>>>>> = RwLock::new(None);

fn vertex_dims(g: u32, n: usize, graphs: &[StableGraph]) -> Arc<Vec<Vec<i64>>> {
    cached(&DIMS_CACHE, &(g, n), || {
        Arc::new(
            graphs
                .iter()
                .map(|gr| {
                    let val = gr.valences();
                    (0..gr.num_vertices()).map(|v| dimension(gr.genera[v], val[v])).collect()
                })
                .collect(),
        )
    })
}

fn edge_terms(series: &EdgeSeries) -> EdgeTerms {
    Arc::new(series.nonzero())
}

static TERM_CACHE: RwLock<Option<FxHashMap<TermKey, Terms>>> = RwLock::new(None);

/// Decorated (graph, weighting) terms of one class with their prefactors.
/// They depend on `s` and `a` only through residues mod `r`.
fn graph_terms(g: u32, n: usize, spec: &OmegaSpec, trunc: u32) -> Result<Terms, OmegaError> {
    let ri = spec.r as i64;
    let key = (
        g,
        n,
        spec.r,
        spec.s.rem_euclid(ri),
        spec.a.iter().map(|a| a.rem_euclid(ri)).collect::<Vec<_>>(),
        spec.x.clone(),
        trunc,
    );
    if let Some(t) = TERM_CACHE.read().as_ref().and_then(|m| m.get(&key).cloned()) {
        return Ok(t);
    }
    let graphs = enumerate_stable_graphs(g, n)?;
    let r = ExactRational::from(ri);
    let mut out = Vec::new();
    for (idx, gr) in graphs.iter().enumerate() {
        let pref = r.pow(2 * g as i32 - 1 - gr.h1() as i32) / ExactRational::from(automorphism_order(gr) as i64);
        for w in enumerate_weightings(gr, spec.r, spec.s, &spec.a)? {
            let edges = (0..gr.num_edges())
                .map(|e| edge_factor_terms(w.half_edges[2 * e], spec.r, &spec.x, trunc))
                .collect::<Result<Vec<_>, _>>()?;
            out.push((idx, edges, pref.clone()));
        }
    }
    let dims = vertex_dims(g, n, &graphs);
    let t: Terms = Arc::new(TermList { graphs, dims, terms: out });
    TERM_CACHE.write().get_or_insert_with(FxHashMap::default).insert(key, t.clone());
    Ok(t)
}

/// `int_{M_{g,n}} Omega^{[x]}(r, s; a) * mono` for one monomial.
fn pair_monomial(g: u32, n: usize, spec: &OmegaSpec, prep: &Prepared, mono: &TautMonomial) -> Result<ExactRational, OmegaError> {
    let leg_ids: Vec<u32> = prep.legs.iter().zip(&mono.psi).map(|(l, &k)| intern(shifted(l, k))).collect();
    let kappa = mono.kappa_list();
    let terms = graph_terms(g, n, spec, prep.trunc)?;
    let (graphs, list) = (&terms.graphs, &terms.terms);
    let budget = dimension(g, n) - mono.degree() as i64;
    let mut total = ExactRational::zero();
    for (idx, edges, pref) in list {
        let gr = &graphs[*idx];
        // terms follow the graphs, which are sorted by edge count
        if gr.num_edges() as i64 > budget {
            break;
        }
        if !admits(gr, mono) {
            continue;
        }
        let dec = Decorated::new(gr, &terms.dims[*idx], edges, prep.c_id, &leg_ids);
        let v = dec.contract(&kappa);
        if !v.is_zero() {
            total += pref * v;
        }
    }
    Ok(total)
}

/// Whether a graph can contribute to the pairing with `mono`: every edge
/// raises the degree by one, and the psi-powers of the legs at a vertex
/// must fit in its dimension.
fn admits(gr: &StableGraph, mono: &TautMonomial) -> bool {
    let dim = dimension(gr.genus(), gr.n());
    if gr.num_edges() as i64 + mono.degree() as i64 > dim {
        return false;
    }
    let val = gr.valences();
    let mut load = vec![0i64; gr.num_vertices()];
    for (i, &v) in gr.legs.iter().enumerate() {
        load[v] += mono.psi[i] as i64;
    }
    (0..gr.num_vertices()).all(|v| load[v] <= dimension(gr.genera[v], val[v]))
}

/// Pairings of `Omega * factor` against each basis monomial; each distinct
/// monomial of the expanded products is paired once.
pub fn omega_pairings_times(
    g: u32,
    n: usize,
    spec: &OmegaSpec,
    factor: &TautPolynomial,
    basis: &[TautMonomial],
) -> Result<Vec<ExactRational>, OmegaError> {
    let dim = dimension(g, n).max(0) as u32;
    let products: Vec<TautPolynomial> = basis
        .iter()
        .map(|m| {
            let mp = TautPolynomial::monomial(n, dim, m.clone(), ExactRational::one());
            crate::poly::tp_mul(factor, &mp)
        })
        .collect::<Result<_, _>>()?;
    let mut uniq: Vec<TautMonomial> = products.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    uniq.sort();
    uniq.dedup();
    let vals = omega_pairings(g, n, spec, &uniq)?;
    let table: FxHashMap<&TautMonomial, &ExactRational> = uniq.iter().zip(vals.iter()).collect();
    Ok(products
        .iter()
        .map(|p| p.terms().map(|(m, c)| c * table[m]).sum())
        .collect())
}

/// `int_{M_{g,n}} Omega^{[x]}_{g,n}(r, s; a) * T` by the stable-graph sum.
/// Leg factors use the integer decorations `a_i`; weightings use residues.
/// Kappa classes in `T` restrict additively to the vertices of each graph.
pub fn omega_integral(g: u32, n: usize, spec: &OmegaSpec, t: &TautPolynomial) -> Result<ExactRational, OmegaError> {
    let prep = prepare(g, n, spec)?;
    let mut acc = ExactRational::zero();
    for (mono, c) in test_terms(g, n, t)? {
        acc += c * pair_monomial(g, n, spec, &prep, &mono)?;
    }
    Ok(acc)
}

/// Pairings of one class against each monomial of a basis.
pub fn omega_pairings(g: u32, n: usize, spec: &OmegaSpec, basis: &[TautMonomial]) -> Result<Vec<ExactRational>, OmegaError> {
    let prep = prepare(g, n, spec)?;
    let dim = dimension(g, n);
    basis
        .par_iter()
        .map(|m| {
            if m.psi.len() != n {
                return Err(OmegaError::PointMismatch { expected: n, got: m.psi.len() });
            }
            if m.degree() as i64 > dim {
                return Ok(ExactRational::zero());
            }
            pair_monomial(g, n, spec, &prep, m)
        })
        .collect()
}

/// All monomials in psi and kappa of degree at most `dim(g, n)`; with
/// `with_kappa = false` only psi-monomials.
pub fn pairing_basis(g: u32, n: usize, with_kappa: bool) -> Vec<TautMonomial> {
    let dim = dimension(g, n).max(0) as u32;
    let mut out = Vec::new();
    for deg in 0..=dim {
        for kdeg in 0..=deg {
            if kdeg > 0 && !with_kappa {
                continue;
            }
            let kparts = if kdeg == 0 { vec![vec![]] } else { partitions(kdeg) };
            for kp in &kparts {
                for pv in psi_vectors(n, deg - kdeg) {
                    let mut k = kp.clone();
                    k.sort_unstable();
                    out.push(TautMonomial::new(&k, pv));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// products of two classes

/// Contracts all edges of `gr` outside `keep`. Returns the contracted graph
/// (edges in the order of `keep`, orientation preserved) and the vertex map.
pub fn contract_edges(gr: &StableGraph, keep: &[usize]) -> (StableGraph, Vec<usize>) {
    let nv = gr.num_vertices();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut contracted_loops = vec![0u32; nv];
    let mut contracted: Vec<(usize, usize)> = Vec::new();
    for (e, &(a, b)) in gr.edges.iter().enumerate() {
        if !keep.contains(&e) {
            contracted.push((a, b));
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let roots: Vec<usize> = (0..nv).map(|v| find(&mut parent, v)).collect();
    let mut ids: Vec<usize> = roots.clone();
    ids.sort_unstable();
    ids.dedup();
    let map: Vec<usize> = roots.iter().map(|r| ids.binary_search(r).unwrap()).collect();
    let mut genera = vec![0u32; ids.len()];
    let mut nverts = vec![0u32; ids.len()];
    for v in 0..nv {
        genera[map[v]] += gr.genera[v];
        nverts[map[v]] += 1;
    }
    for &(a, _) in &contracted {
        contracted_loops[map[a]] += 1;
    }
    for c in 0..ids.len() {
        // h^1 of the contracted component
        genera[c] += contracted_loops[c] + 1 - nverts[c];
    }
    let legs = gr.legs.iter().map(|&v| map[v]).collect();
    let edges = keep.iter().map(|&e| (map[gr.edges[e].0], map[gr.edges[e].1])).collect();
    (StableGraph { genera, legs, edges }, map)
}

/// Pairings of the product `Omega_A * Omega_B` against a basis. See
/// [`multi_product_pairings`].
pub fn product_pairings(
    g: u32,
    n: usize,
    spec_a: &OmegaSpec,
    spec_b: &OmegaSpec,
    basis: &[TautMonomial],
    normalize: bool,
) -> Result<Vec<ExactRational>, OmegaError> {
    multi_product_pairings(g, n, &[spec_a.clone(), spec_b.clone()], basis, normalize)
}

/// Pairings of a product of classes against a basis, through generic
/// graphs: every graph together with a nonempty set of factors on each
/// edge, such that contracting the edges outside factor `j` gives a
/// degeneration of factor `j`. An edge shared by `k` factors carries the
/// excess factor `(-(psi' + psi''))^{k-1}`. With `normalize`, each class is
/// divided by its degree-0 part.
pub fn multi_product_pairings(
    g: u32,
    n: usize,
    specs: &[OmegaSpec],
    basis: &[TautMonomial],
    normalize: bool,
) -> Result<Vec<ExactRational>, OmegaError> {
    if specs.is_empty() {
        return Err(OmegaError::Unsupported("empty product".into()));
    }
    let preps: Vec<Prepared> = specs.iter().map(|sp| prepare(g, n, sp)).collect::<Result<_, _>>()?;
    let trunc = preps[0].trunc;
    let mut c_sum: Series = vec![ExactRational::zero(); trunc as usize + 1];
    for p in &preps {
        let c = series_by_id(p.c_id);
        for (m, slot) in c_sum.iter_mut().enumerate() {
            *slot += c.get(m).cloned().unwrap_or_default();
        }
    }
    let c_id = intern(c_sum);
    let mut legs: Vec<Series> = preps[0].legs.clone();
    for p in &preps[1..] {
        legs = legs.iter().zip(&p.legs).map(|(x, y)| series_mul(x, y, trunc as usize)).collect();
    }
    let graphs = enumerate_stable_graphs(g, n)?;
    let excess = EdgeSeries::negative_normal(trunc);
    let k = specs.len();
    let full = (1u32 << k) - 1;

    let dims = vertex_dims(g, n, &graphs);
    let mut decorated: Vec<(usize, Vec<EdgeTerms>, ExactRational)> = Vec::new();
    for (idx, gr) in graphs.iter().enumerate() {
        let ne = gr.num_edges();
        let aut = ExactRational::from(automorphism_order(gr) as i64);
        let mut roles = vec![1u32; ne];
        loop {
            // per factor: kept edges, weightings and prefactor
            let mut kept: Vec<Vec<usize>> = Vec::with_capacity(k);
            let mut weights: Vec<Vec<Weighting>> = Vec::with_capacity(k);
            let mut pref = aut.recip();
            for (j, sp) in specs.iter().enumerate() {
                let ej: Vec<usize> = (0..ne).filter(|&e| roles[e] & (1 << j) != 0).collect();
                let (gj, _) = contract_edges(gr, &ej);
                weights.push(enumerate_weightings(&gj, sp.r, sp.s, &sp.a)?);
                pref *= ExactRational::from(sp.r as i64).pow(2 * g as i32 - 1 - gj.h1() as i32);
                kept.push(ej);
            }
            let mut choice = vec![0usize; k];
            if weights.iter().all(|w| !w.is_empty()) {
                loop {
                    let mut edges = Vec::with_capacity(ne);
                    for e in 0..ne {
                        let mut series: Option<EdgeSeries> = None;
                        for j in 0..k {
                            if let Some(pos) = kept[j].iter().position(|&x| x == e) {
                                let w = weights[j][choice[j]].half_edges[2 * pos];
                                let f = edge_factor(w, specs[j].r, &specs[j].x, trunc)?;
                                series = Some(match series {
                                    None => (*f).clone(),
                                    Some(prev) => prev.mul(&f).mul(&excess),
                                });
                            }
                        }
                        edges.push(edge_terms(&series.expect("edge covered")));
                    }
                    decorated.push((idx, edges, pref.clone()));
                    let mut i = 0;
                    while i < k {
                        choice[i] += 1;
                        if choice[i] < weights[i].len() {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                    if i == k {
                        break;
                    }
                }
            }
            let mut i = 0;
            while i < ne {
                roles[i] += 1;
                if roles[i] <= full {
                    break;
                }
                roles[i] = 1;
                i += 1;
            }
            if i == ne {
                break;
            }
        }
    }
    let scale = if normalize {
        specs.iter().map(|sp| sp.normalization(g)).product::<ExactRational>().recip()
    } else {
        ExactRational::one()
    };
    let dim = dimension(g, n);
    basis
        .par_iter()
        .map(|m| {
            if m.psi.len() != n {
                return Err(OmegaError::PointMismatch { expected: n, got: m.psi.len() });
            }
            if m.degree() as i64 > dim {
                return Ok(ExactRational::zero());
            }
            let leg_ids: Vec<u32> = legs.iter().zip(&m.psi).map(|(l, &k)| intern(shifted(l, k))).collect();
            let kappa = m.kappa_list();
            let mut acc = ExactRational::zero();
            for (idx, edges, pref) in &decorated {
                if !admits(&graphs[*idx], m) {
                    continue;
                }
                let dec = Decorated::new(&graphs[*idx], &dims[*idx], edges, c_id, &leg_ids);
                let v = dec.contract(&kappa);
                if !v.is_zero() {
                    acc += pref * v;
                }
            }
            Ok(acc * &scale)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// r = 1 closed form

/// For `r = 1` the class factors as
/// `Lambda(-x) * exp(sum_m (-x)^m/(m(m+1)) [(B_{m+1}(s) - B_{m+1}) kappa_m
///   - sum_i (B_{m+1}(a_i) - B_{m+1}) psi_i^m])`.
#[derive(Debug, Clone)]
pub struct ClosedFormR1 {
    pub g: u32,
    pub n: usize,
    /// Argument of `Lambda`.
    pub t: ExactRational,
    /// `u[m - 1]` multiplies `kappa_m`.
    pub u: Vec<ExactRational>,
    pub legs: Vec<Series>,
}

pub fn omega_closed_form_r1(g: u32, n: usize, s: i64, a: &[i64], x: &ExactRational) -> Result<ClosedFormR1, OmegaError> {
    let spec = OmegaSpec::new(1, s, a.to_vec(), x.clone());
    spec.validate(g, n)?;
    let trunc = dimension(g, n).max(0) as u32;
    let zero = ExactRational::zero();
    let base = chiodo_coefficients(&zero, x, trunc);
    let vs = chiodo_coefficients(&ExactRational::from(s), x, trunc);
    let u: Vec<ExactRational> = (1..=trunc as usize).map(|m| &vs[m] - &base[m]).collect();
    let legs = a
        .iter()
        .map(|&ai| {
            let ca = chiodo_coefficients(&ExactRational::from(ai), x, trunc);
            let f: Series = (0..=trunc as usize).map(|m| if m == 0 { zero.clone() } else { &base[m] - &ca[m] }).collect();
            crate::poly::series_exp(&f, trunc as usize)
        })
        .collect();
    Ok(ClosedFormR1 { g, n, t: -x, u, legs })
}

impl ClosedFormR1 {
    /// `int Lambda(t) exp(u . kappa) prod legs * T` through Hodge integrals.
    pub fn integral(&self, t: &TautPolynomial) -> Result<ExactRational, OmegaError> {
        let (g, n) = (self.g, self.n);
        let dim = dimension(g, n);
        let mut acc = ExactRational::zero();
        for (mono, coef) in test_terms(g, n, t)? {
            let legs: Vec<Arc<Series>> = self.legs.iter().zip(&mono.psi).map(|(l, &k)| Arc::new(shifted(l, k))).collect();
            let kappa = mono.kappa_list();
            let kdeg: i64 = kappa.iter().map(|&m| m as i64).sum();
            let budget = dim - kdeg;
            if budget < 0 {
                continue;
            }
            let mut j = vec![0u32; n];
            let mut err = None;
            fold_legs(&legs, budget as u32, 0, &mut j, coef.clone(), &mut |d, c| {
                if err.is_some() {
                    return;
                }
                match self.psi_kappa_term(d, &kappa) {
                    Ok(v) => acc += c * v,
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(acc)
    }

    fn psi_kappa_term(&self, d: &[u32], kappa: &[u32]) -> Result<ExactRational, OmegaError> {
        let g = self.g;
        if kappa.is_empty() {
            return Ok(lambda_exp_kappa_integral(g, d, &self.t, &self.u)?);
        }
        let dim = dimension(g, d.len());
        let used: i64 = d.iter().chain(kappa.iter()).map(|&v| v as i64).sum();
        if used > dim {
            return Ok(ExactRational::zero());
        }
        let mut acc = ExactRational::zero();
        let mut tp = ExactRational::one();
        for i in 0..=g {
            let rest = dim - used - i as i64;
            if rest < 0 {
                break;
            }
            for part in partitions(rest as u32) {
                let mut coef = tp.clone();
                let mut k = 0;
                while k < part.len() {
                    let mult = part[k..].iter().take_while(|&&m| m == part[k]).count();
                    let um = self.u.get(part[k] as usize - 1).cloned().unwrap_or_default();
                    coef *= um.pow(mult as i32);
                    coef /= ExactRational::from_bigint(crate::exact::factorial(mult as u32));
                    k += mult;
                }
                if coef.is_zero() {
                    continue;
                }
                let mut all: Vec<u32> = kappa.to_vec();
                all.extend(part.iter().copied());
                acc += coef * lambda_kappa_psi_integral(g, d, &all, i)?;
            }
            tp = &tp * &self.t;
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Hodge classes through the graph sum

/// The class with `(r, s, a) = (1, 1, (1, ..., 1))` at `x = -t`, which is
/// `Lambda(t)`.
pub fn hodge_spec(n: usize, t: &ExactRational) -> OmegaSpec {
    OmegaSpec::new(1, 1, vec![1; n], -t)
}

/// `int Lambda(t) * T` by the graph sum.
pub fn hodge_expand(g: u32, n: usize, t: &ExactRational, test: &TautPolynomial) -> Result<ExactRational, OmegaError> {
    omega_integral(g, n, &hodge_spec(n, t), test)
}

/// `int lambda_i * T` by sampling `Lambda(t)` at `t = 0..=g` and
/// interpolating.
pub fn hodge_integral(g: u32, n: usize, i: u32, test: &TautPolynomial) -> Result<ExactRational, OmegaError> {
    if i > g {
        return Ok(ExactRational::zero());
    }
    let ts: Vec<ExactRational> = (0..=g as i64).map(ExactRational::from).collect();
    let ys: Vec<ExactRational> = ts.iter().map(|t| hodge_expand(g, n, t, test)).collect::<Result<_, _>>()?;
    Ok(interpolate(&ts, &ys)[i as usize].clone())
}

// ---------------------------------------------------------------------------
// degree bounds

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeBound {
    /// `g = 0`, `s = 0`, all `a_i > 0` except at most one in `{-1, 0}`.
    Jkv,
    /// `s < 0` and all `a_i > 0`.
    NegativeS,
}

/// The largest degree allowed to be nonzero: `floor` of the stated bound.
pub fn degree_bound(g: u32, n: usize, spec: &OmegaSpec, kind: DegreeBound) -> Result<i64, OmegaError> {
    spec.validate(g, n)?;
    let r = spec.r as i64;
    let sum: i64 = spec.a.iter().sum();
    match kind {
        DegreeBound::Jkv => {
            let low = spec.a.iter().filter(|&&a| a <= 0).count();
            if g != 0 || spec.s != 0 || low > 1 || spec.a.iter().any(|&a| a < -1) {
                return Err(OmegaError::Unsupported("hypothesis of the genus-0 bound".into()));
            }
            // k > sum/r - 1
            Ok((sum - r).div_euclid(r))
        }
        DegreeBound::NegativeS => {
            if spec.s >= 0 || spec.a.iter().any(|&a| a <= 0) {
                return Err(OmegaError::Unsupported("hypothesis of the negative-s bound".into()));
            }
            let sp = -spec.s;
            let numer = (2 * g as i64 - 2 + n as i64) * sp + r * (g as i64 - 1) + sum;
            Ok(numer.div_euclid(r))
        }
    }
}

/// Verifies that every degree above the bound pairs to zero against all
/// psi-monomials of complementary degree. The degree-`k` part is the
/// `x^k` coefficient, extracted by interpolation over `dim + 1` values of
/// `x`.
pub fn degree_bound_check(g: u32, n: usize, spec: &OmegaSpec, kind: DegreeBound) -> Result<CheckReport, OmegaError> {
    let bound = degree_bound(g, n, spec, kind)?;
    let dim = dimension(g, n);
    let params = json!({"g": g, "n": n, "r": spec.r, "s": spec.s, "a": spec.a, "bound": bound, "kind": format!("{kind:?}")});
    let name = "degree_bound";
    if bound >= dim {
        let z = ExactRational::zero();
        return Ok(CheckReport::scalar(name, params, &z, &z).with_note("vacuous: bound >= dimension"));
    }
    let xs: Vec<ExactRational> = (1..=dim + 1).map(ExactRational::from).collect();
    let mut labels = Vec::new();
    let mut got = Vec::new();
    for k in (bound + 1)..=dim {
        for pv in psi_vectors(n, (dim - k) as u32) {
            let mono = TautMonomial::psi(pv.clone());
            let ys: Vec<ExactRational> = xs
                .iter()
                .map(|x| pair_single(g, n, &spec.with_x(x.clone()), &mono))
                .collect::<Result<_, _>>()?;
            let coeffs = interpolate(&xs, &ys);
            labels.push(format!("deg {k} x psi^{pv:?}"));
            got.push(coeffs[k as usize].clone());
        }
    }
    let expected = vec![ExactRational::zero(); got.len()];
    Ok(CheckReport::pairings(name, params, &labels, &expected, &got))
}

fn pair_single(g: u32, n: usize, spec: &OmegaSpec, mono: &TautMonomial) -> Result<ExactRational, OmegaError> {
    let prep = prepare(g, n, spec)?;
    pair_monomial(g, n, spec, &prep, mono)
}

/// First parameter set (by increasing dimension, then `r`, `s'`, `a`) for
/// which the negative-s bound leaves a degree to check.
pub fn first_nonvacuous_negative_s(max_dim: i64, max_r: u32) -> Option<(u32, usize, OmegaSpec, i64)> {
    for dim in 1..=max_dim {
        for g in 0..=(dim as u32 + 3) / 3 {
            let n = dim + 3 - 3 * g as i64;
            if n < 0 || !is_stable(g, n as usize) {
                continue;
            }
            let n = n as usize;
            for r in 1..=max_r {
                for sp in 1..=3i64 {
                    let mut a = vec![1i64; n];
                    loop {
                        let spec = OmegaSpec::new(r, -sp, a.clone(), ExactRational::one());
                        if spec.validate(g, n).is_ok() {
                            if let Ok(b) = degree_bound(g, n, &spec, DegreeBound::NegativeS) {
                                if b < dim {
                                    return Some((g, n, spec, b));
                                }
                            }
                        }
                        // next non-decreasing a in 1..=r
                        let mut i = n;
                        loop {
                            if i == 0 {
                                break;
                            }
                            i -= 1;
                            if a[i] < r as i64 {
                                a[i] += 1;
                                for j in i + 1..n {
                                    a[j] = a[i];
                                }
                                break;
                            }
                            if i == 0 {
                                i = usize::MAX;
                                break;
                            }
                        }
                        if i == usize::MAX || n == 0 {
                            break;
                        }
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn one(g: u32, n: usize) -> TautPolynomial {
        TautPolynomial::one(n, dimension(g, n) as u32)
    }

    #[test]
    fn euler_characteristic_small() {
        let spec = OmegaSpec::new(1, -1, vec![0], q(1, 1));
        assert_eq!(omega_integral(1, 1, &spec, &one(1, 1)).unwrap(), q(-1, 12));
        let spec = OmegaSpec::new(1, -1, vec![0, 0, 0], q(1, 1));
        assert_eq!(omega_integral(0, 3, &spec, &one(0, 3)).unwrap(), q(1, 1));
        let spec = OmegaSpec::new(1, -1, vec![0, 0], q(1, 1));
        assert_eq!(omega_integral(1, 2, &spec, &one(1, 2)).unwrap(), q(1, 12));
    }

    #[test]
    fn hodge_calibration() {
        let psi0 = one(1, 1);
        assert_eq!(hodge_integral(1, 1, 1, &psi0).unwrap(), q(1, 24));
        assert_eq!(hodge_expand(1, 1, &q(-1, 1), &psi0).unwrap(), q(-1, 24));
        let p = TautPolynomial::psi(1, 1, 1).unwrap();
        assert_eq!(hodge_integral(1, 1, 0, &p).unwrap(), q(1, 24));
    }

    #[test]
    fn closed_form_agrees_with_graph_sum() {
        for (g, n) in [(1, 1), (1, 2), (0, 4), (2, 0), (0, 5)] {
            let a = vec![0; n];
            let spec = OmegaSpec::new(1, -1, a.clone(), q(1, 1));
            let cf = omega_closed_form_r1(g, n, -1, &a, &q(1, 1)).unwrap();
            let t = one(g, n);
            assert_eq!(cf.integral(&t).unwrap(), omega_integral(g, n, &spec, &t).unwrap(), "({g},{n})");
        }
    }

    #[test]
    fn contraction_tracks_genus() {
        let gr: StableGraph = "V:0,0|L:0,1|E:(0,1),(0,1)".parse().unwrap();
        let (c, _) = contract_edges(&gr, &[1]);
        assert_eq!(c.to_string(), "V:0|L:0,0|E:(0,0)");
        assert_eq!(c.genus(), 1);
    }
}
