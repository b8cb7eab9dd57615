//! Stable graphs of type `(g, n)`: enumeration up to isomorphism,
//! automorphism orders and mod-`r` weightings.
//!
//! A graph stores vertex genera, the vertex of each leg and a list of edges
//! `(a, b)` with `a <= b` (self-loops have `a == b`). Edge `e` owns
//! half-edges `2e` (at `a`) and `2e + 1` (at `b`).
//!
//! Serialization: `V:g_1,g_2,...|L:v(1),...,v(n)|E:(a,b),...` with 0-based
//! vertex indices.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use parking_lot::Mutex;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::intersection::is_stable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unstable (g, n) = ({0}, {1})")]
    Unstable(u32, usize),
    #[error("modular constraint violated: Σa_i ≢ (2g−2+n)s mod r (Σa_i = {sum}, (2g−2+n)s = {target}, r = {r})")]
    ConstraintViolated { sum: i64, target: i64, r: u32 },
    #[error("r must be positive")]
    ZeroModulus,
    #[error("expected {expected} leg decorations, got {got}")]
    LegCount { expected: usize, got: usize },
    #[error("malformed graph serialization: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StableGraph {
    pub genera: Vec<u32>,
    pub legs: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl StableGraph {
    pub fn smooth(g: u32, n: usize) -> Self {
        StableGraph { genera: vec![g], legs: vec![0; n], edges: Vec::new() }
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n(&self) -> usize {
        self.legs.len()
    }

    pub fn h1(&self) -> usize {
        self.edges.len() + 1 - self.genera.len()
    }

    pub fn genus(&self) -> u32 {
        self.genera.iter().sum::<u32>() + self.h1() as u32
    }

    pub fn half_edge_vertex(&self, h: usize) -> usize {
        let (a, b) = self.edges[h / 2];
        if h % 2 == 0 {
            a
        } else {
            b
        }
    }

    /// Number of special points (legs and half-edges) at each vertex.
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.genera.len()];
        for &v in &self.legs {
            val[v] += 1;
        }
        for &(a, b) in &self.edges {
            val[a] += 1;
            val[b] += 1;
        }
        val
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.genera.len();
        if nv == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let r0 = find(&mut parent, 0);
        (0..nv).all(|v| find(&mut parent, v) == r0)
    }

    pub fn is_valid_stable(&self) -> bool {
        self.is_connected()
            && self
                .genera
                .iter()
                .zip(self.valences())
                .all(|(&g, val)| 2 * g as i64 - 2 + val as i64 > 0)
    }

    /// Legs at vertex `v` (0-based leg indices).
    pub fn legs_at(&self, v: usize) -> Vec<usize> {
        (0..self.legs.len()).filter(|&i| self.legs[i] == v).collect()
    }

    /// Half-edges at vertex `v`.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if a == v {
                out.push(2 * e);
            }
            if b == v {
                out.push(2 * e + 1);
            }
        }
        out
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`. Edges are normalized
    /// and sorted.
    pub fn relabel(&self, perm: &[usize]) -> StableGraph {
        let mut genera = vec![0; self.genera.len()];
        for (v, &g) in self.genera.iter().enumerate() {
            genera[perm[v]] = g;
        }
        let legs = self.legs.iter().map(|&v| perm[v]).collect();
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        edges.sort_unstable();
        StableGraph { genera, legs, edges }
    }

    fn encoding(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.genera.len() + self.legs.len() + 2 * self.edges.len() + 2);
        out.push(self.genera.len() as u32);
        out.extend(self.genera.iter().copied());
        out.extend(self.legs.iter().map(|&v| v as u32));
        out.push(self.edges.len() as u32);
        for &(a, b) in &self.edges {
            out.push(a as u32);
            out.push(b as u32);
        }
        out
    }

    pub fn serialize(&self) -> String {
        self.to_string()
    }

    /// Canonical representative and the number of vertex permutations that
    /// fix the graph.
    pub fn canonical(&self) -> (StableGraph, u64) {
        canonical_form(self)
    }

    /// Edge multiplicity factor of the automorphism group: `prod m!` over
    /// parallel edge classes and `prod 2^k k!` over self-loops.
    pub fn edge_symmetry_factor(&self) -> u64 {
        let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for &e in &self.edges {
            *counts.entry(e).or_default() += 1;
        }
        let mut f = 1u64;
        for (&(a, b), &m) in &counts {
            let fact: u64 = (1..=m).product();
            f *= fact;
            if a == b {
                f *= 1 << m;
            }
        }
        f
    }
}

impl fmt::Display for StableGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gs: Vec<String> = self.genera.iter().map(u32::to_string).collect();
        let ls: Vec<String> = self.legs.iter().map(usize::to_string).collect();
        let es: Vec<String> = self.edges.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "V:{}|L:{}|E:{}", gs.join(","), ls.join(","), es.join(","))
    }
}

impl FromStr for StableGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::Parse(s.to_string());
        let parts: Vec<&str> = s.trim().split('|').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let body = |p: &str, tag: &str| -> Result<String, GraphError> {
            p.strip_prefix(tag).map(str::to_string).ok_or_else(bad)
        };
        let v = body(parts[0], "V:")?;
        let l = body(parts[1], "L:")?;
        let e = body(parts[2], "E:")?;
        let genera: Vec<u32> = v.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let legs: Vec<usize> = if l.is_empty() {
            Vec::new()
        } else {
            l.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        let mut edges = Vec::new();
        let mut rest = e.as_str();
        while !rest.is_empty() {
            let rest2 = rest.trim_start_matches(',');
            let close = rest2.find(')').ok_or_else(bad)?;
            let inner = rest2.get(1..close).ok_or_else(bad)?;
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            edges.push(if a <= b { (a, b) } else { (b, a) });
            rest = &rest2[close + 1..];
        }
        let nv = genera.len();
        if legs.iter().any(|&x| x >= nv) || edges.iter().any(|&(_, b)| b >= nv) {
            return Err(bad());
        }
        Ok(StableGraph { genera, legs, edges })
    }
}

// ---------------------------------------------------------------------------
// canonical forms

fn refine(g: &StableGraph) -> Vec<u64> {
    let nv = g.genera.len();
    let val = g.valences();
    let mut legmask: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, &v) in g.legs.iter().enumerate() {
        legmask[v].push(i);
    }
    let mut loops = vec![0usize; nv];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &(a, b) in &g.edges {
        if a == b {
            loops[a] += 1;
        } else {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    // initial colors from local data
    let keys: Vec<(u32, Vec<usize>, usize, usize)> =
        (0..nv).map(|v| (g.genera[v], legmask[v].clone(), loops[v], val[v])).collect();
    let mut color = rank(&keys);
    loop {
        let next_keys: Vec<(u64, Vec<u64>)> = (0..nv)
            .map(|v| {
                let mut nb: Vec<u64> = adj[v].iter().map(|&w| color[w]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let next = rank(&next_keys);
        let distinct_old = count_distinct(&color);
        let distinct_new = count_distinct(&next);
        color = next;
        if distinct_new == distinct_old {
            break;
        }
    }
    color
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u64> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap() as u64).collect()
}

fn count_distinct(c: &[u64]) -> usize {
    let mut s: Vec<u64> = c.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// Minimal encoding over all vertex orders compatible with the refined
/// coloring, plus the count of permutations that fix the graph.
fn canonical_form(g: &StableGraph) -> (StableGraph, u64) {
    let nv = g.genera.len();
    let color = refine(g);
    // cells in color order
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by_key(|&v| (color[v], v));
    for &v in &order {
        match cells.last_mut() {
            Some(c) if color[c[0]] == color[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut base_perm = vec![0usize; nv];
    let mut pos = 0;
    for cell in &cells {
        for (k, &v) in cell.iter().enumerate() {
            base_perm[v] = pos + k;
        }
        pos += cell.len();
    }
    let base = g.relabel(&base_perm).encoding();
    let mut best: Option<(Vec<u32>, StableGraph)> = None;
    let mut auts = 0u64;
    // iterate over the product of permutations of each cell
    let perms: Vec<Vec<Vec<usize>>> = cells.iter().map(|c| permutations(c)).collect();
    let mut idx = vec![0usize; cells.len()];
    let mut perm = vec![0usize; nv];
    loop {
        let mut pos = 0;
        for (ci, cell) in cells.iter().enumerate() {
            let p = &perms[ci][idx[ci]];
            for k in 0..cell.len() {
                perm[p[k]] = pos + k;
            }
            pos += cell.len();
        }
        let cand = g.relabel(&perm);
        let enc = cand.encoding();
        if enc == base {
            auts += 1;
        }
        if best.as_ref().map_or(true, |(b, _)| enc < *b) {
            best = Some((enc, cand));
        }
        let mut i = 0;
        loop {
            if i == cells.len() {
                return (best.unwrap().1, auts);
            }
            idx[i] += 1;
            if idx[i] < perms[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// `|Aut(Gamma)|` for automorphisms fixing every leg.
pub fn automorphism_order(g: &StableGraph) -> u64 {
    let (_, vertex_auts) = canonical_form(g);
    vertex_auts * g.edge_symmetry_factor()
}

// ---------------------------------------------------------------------------
// enumeration

/// Degenerations of `g` obtained by splitting one vertex or adding a
/// self-loop at a vertex of positive genus.
fn one_edge_degenerations(g: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    let nv = g.genera.len();
    for v in 0..nv {
        if g.genera[v] >= 1 {
            let mut h = g.clone();
            h.genera[v] -= 1;
            h.edges.push((v, v));
            out.push(h);
        }
        // separating split: v stays, new vertex w = nv
        let legs_v = g.legs_at(v);
        // half-edges at v: (edge index, side); loops contribute two
        let mut halves: Vec<(usize, usize)> = Vec::new();
        for (e, &(a, b)) in g.edges.iter().enumerate() {
            if a == v {
                halves.push((e, 0));
            }
            if b == v {
                halves.push((e, 1));
            }
        }
        let items = legs_v.len() + halves.len();
        for gv1 in 0..=g.genera[v] {
            let gv2 = g.genera[v] - gv1;
            for mask in 0u64..(1u64 << items) {
                let mut h = g.clone();
                let w = nv;
                h.genera[v] = gv1;
                h.genera.push(gv2);
                let mut count_w = 0usize;
                for (k, &leg) in legs_v.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        h.legs[leg] = w;
                        count_w += 1;
                    }
                }
                for (k, &(e, side)) in halves.iter().enumerate() {
                    if mask & (1 << (legs_v.len() + k)) != 0 {
                        if side == 0 {
                            h.edges[e].0 = w;
                        } else {
                            h.edges[e].1 = w;
                        }
                        count_w += 1;
                    }
                }
                let count_v = items - count_w;
                // new edge adds one special point on each side
                if 2 * gv1 as i64 - 2 + count_v as i64 + 1 <= 0 {
                    continue;
                }
                if 2 * gv2 as i64 - 2 + count_w as i64 + 1 <= 0 {
                    continue;
                }
                for e in h.edges.iter_mut() {
                    if e.0 > e.1 {
                        *e = (e.1, e.0);
                    }
                }
                h.edges.push((v, w));
                out.push(h);
            }
        }
    }
    out
}

/// Enumeration by successive vertex splitting with isomorph rejection.
pub fn enumerate_by_splitting(g: u32, n: usize) -> Result<Vec<StableGraph>, GraphError> {
    if !is_stable(g, n) {
        return Err(GraphError::Unstable(g, n));
    }
    let mut all: Vec<StableGraph> = Vec::new();
    let mut level = vec![StableGraph::smooth(g, n)];
    while !level.is_empty() {
        let mut seen: HashSet<StableGraph> = HashSet::new();
        let mut next = Vec::new();
        for gr in &level {
            for child in one_edge_degenerations(gr) {
                let (c, _) = canonical_form(&child);
                if seen.insert(c.clone()) {
                    next.push(c);
                }
            }
        }
        all.extend(level.into_iter());
        level = next;
    }
    let mut all: Vec<StableGraph> = all.into_iter().map(|x| canonical_form(&x).0).collect();
    sort_graphs(&mut all);
    Ok(all)
}

/// Graphs of type `(g, n)` obtained from one of type `(g, n - 1)` by adding
/// leg `n`: on a vertex, on a new genus-0 vertex splitting an edge, or on a
/// new genus-0 vertex splitting a leg.
fn leg_insertions(parent: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    let nv = parent.genera.len();
    for v in 0..nv {
        let mut h = parent.clone();
        h.legs.push(v);
        out.push(h);
    }
    // edges: identical parallel edges give isomorphic children, skip repeats
    let mut seen_edges: HashSet<(usize, usize)> = HashSet::new();
    for (e, &(a, b)) in parent.edges.iter().enumerate() {
        if !seen_edges.insert((a, b)) {
            continue;
        }
        let mut h = parent.clone();
        let x = nv;
        h.genera.push(0);
        h.legs.push(x);
        h.edges.remove(e);
        h.edges.push((a, x));
        h.edges.push((b, x));
        out.push(h);
    }
    for i in 0..parent.legs.len() {
        let mut h = parent.clone();
        let x = nv;
        let v = h.legs[i];
        h.genera.push(0);
        h.legs[i] = x;
        h.legs.push(x);
        h.edges.push((v, x));
        out.push(h);
    }
    out
}

type GraphCache = FxHashMap<(u32, usize), Arc<Vec<StableGraph>>>;
static GRAPH_CACHE: Mutex<Option<GraphCache>> = Mutex::new(None);

fn sort_graphs(v: &mut [StableGraph]) {
    v.sort_by(|a, b| (a.num_edges(), a.encoding()).cmp(&(b.num_edges(), b.encoding())));
}

/// All stable graphs of type `(g, n)` up to isomorphism, each in canonical
/// labeling, sorted by (number of edges, canonical encoding). Results are
/// memoized.
pub fn enumerate_stable_graphs(g: u32, n: usize) -> Result<Arc<Vec<StableGraph>>, GraphError> {
    if !is_stable(g, n) {
        return Err(GraphError::Unstable(g, n));
    }
    if let Some(v) = GRAPH_CACHE.lock().as_ref().and_then(|m| m.get(&(g, n)).cloned()) {
        return Ok(v);
    }
    let list = if n == 0 || !is_stable(g, n - 1) {
        enumerate_by_splitting(g, n)?
    } else {
        let parents = enumerate_stable_graphs(g, n - 1)?;
        let mut out = Vec::new();
        for p in parents.iter() {
            let kids = leg_insertions(p);
            if automorphism_order(p) == 1 {
                out.extend(kids.into_iter().map(|k| canonical_form(&k).0));
            } else {
                let mut seen = HashSet::new();
                for k in kids {
                    let c = canonical_form(&k).0;
                    if seen.insert(c.clone()) {
                        out.push(c);
                    }
                }
            }
        }
        sort_graphs(&mut out);
        out
    };
    let arc = Arc::new(list);
    GRAPH_CACHE.lock().get_or_insert_with(FxHashMap::default).insert((g, n), arc.clone());
    Ok(arc)
}

// ---------------------------------------------------------------------------
// weightings

/// Residues on half-edges, indexed like the half-edges of the graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weighting {
    pub half_edges: Vec<u32>,
}

pub fn modular_constraint_holds(g: u32, n: usize, r: u32, s: i64, a: &[i64]) -> bool {
    let sum: i64 = a.iter().sum();
    let target = (2 * g as i64 - 2 + n as i64) * s;
    (sum - target).rem_euclid(r as i64) == 0
}

/// All half-edge residue assignments with both halves of an edge summing
/// to 0 mod `r` and, at each vertex, the sum of leg residues and half-edge
/// residues congruent to `(2 g_v - 2 + n_v) s` mod `r`.
pub fn enumerate_weightings(gr: &StableGraph, r: u32, s: i64, a: &[i64]) -> Result<Vec<Weighting>, GraphError> {
    if r == 0 {
        return Err(GraphError::ZeroModulus);
    }
    if a.len() != gr.n() {
        return Err(GraphError::LegCount { expected: gr.n(), got: a.len() });
    }
    let g = gr.genus();
    if !modular_constraint_holds(g, gr.n(), r, s, a) {
        return Err(GraphError::ConstraintViolated {
            sum: a.iter().sum(),
            target: (2 * g as i64 - 2 + gr.n() as i64) * s,
            r,
        });
    }
    let ri = r as i64;
    let nv = gr.num_vertices();
    let val = gr.valences();
    let mut need: Vec<i64> = (0..nv)
        .map(|v| ((2 * gr.genera[v] as i64 - 2 + val[v] as i64) * s).rem_euclid(ri))
        .collect();
    for (i, &v) in gr.legs.iter().enumerate() {
        need[v] = (need[v] - a[i]).rem_euclid(ri);
    }
    // spanning tree from vertex 0; the other edges are free, tree edges are
    // then forced from the leaves inwards
    let ne = gr.num_edges();
    let mut parent_edge: Vec<Option<usize>> = vec![None; nv];
    let mut seen = vec![false; nv];
    let mut order = vec![0usize];
    seen[0] = true;
    let mut in_tree = vec![false; ne];
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for (e, &(x, y)) in gr.edges.iter().enumerate() {
            let other = if x == v { y } else if y == v { x } else { continue };
            if !seen[other] {
                seen[other] = true;
                in_tree[e] = true;
                parent_edge[other] = Some(e);
                order.push(other);
            }
        }
    }
    let free: Vec<usize> = (0..ne).filter(|&e| !in_tree[e]).collect();
    let mut out = Vec::new();
    let mut w = vec![0u32; ne];
    let mut choice = vec![0u32; free.len()];
    loop {
        for (k, &e) in free.iter().enumerate() {
            w[e] = choice[k];
        }
        // half-edge residue of e at its first endpoint is w[e]
        let mut sums = vec![0i64; nv];
        for &e in &free {
            let (x, y) = gr.edges[e];
            sums[x] += w[e] as i64;
            sums[y] += (ri - w[e] as i64).rem_euclid(ri);
        }
        for &v in order.iter().skip(1).rev() {
            let e = parent_edge[v].expect("tree vertex");
            let (x, y) = gr.edges[e];
            let at_v = (need[v] - sums[v]).rem_euclid(ri);
            let first = if x == v { at_v } else { (ri - at_v).rem_euclid(ri) };
            w[e] = first as u32;
            sums[x] += first;
            sums[y] += (ri - first).rem_euclid(ri);
        }
        if (sums[0] - need[0]).rem_euclid(ri) == 0 {
            let mut he = Vec::with_capacity(2 * ne);
            for &x in &w {
                he.push(x);
                he.push((r - x) % r);
            }
            out.push(Weighting { half_edges: he });
        }
        let mut i = 0;
        loop {
            if i == free.len() {
                out.sort();
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < r {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_stable_graphs(0, 3).unwrap().len(), 1);
        assert_eq!(enumerate_stable_graphs(1, 1).unwrap().len(), 2);
        assert_eq!(enumerate_stable_graphs(0, 4).unwrap().len(), 4);
        assert_eq!(enumerate_stable_graphs(0, 5).unwrap().len(), 26);
        assert_eq!(enumerate_stable_graphs(2, 0).unwrap().len(), 7);
    }

    #[test]
    fn aut_examples() {
        let loop1: StableGraph = "V:0|L:0|E:(0,0)".parse().unwrap();
        assert_eq!(automorphism_order(&loop1), 2);
        let banana: StableGraph = "V:0,0|L:0,1|E:(0,1),(0,1)".parse().unwrap();
        assert_eq!(automorphism_order(&banana), 2);
        assert_eq!(automorphism_order(&StableGraph::smooth(2, 0)), 1);
        let s = banana.to_string();
        assert_eq!(s, "V:0,0|L:0,1|E:(0,1),(0,1)");
    }

    #[test]
    fn weighting_examples() {
        let loop1: StableGraph = "V:0|L:0|E:(0,0)".parse().unwrap();
        let w = enumerate_weightings(&loop1, 2, 0, &[0]).unwrap();
        assert_eq!(w.len(), 2);
        assert!(enumerate_weightings(&loop1, 2, 0, &[1]).is_err());
        assert_eq!(enumerate_weightings(&loop1, 1, 5, &[3]).unwrap().len(), 1);
    }
}
