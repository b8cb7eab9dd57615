//! Brute-force oracles for stable graphs, shared with the acceptance run.

use std::collections::{BTreeSet, HashMap};

use taut_core::graphs::StableGraph;

pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn key(g: &StableGraph) -> String {
    g.to_string()
}

pub fn min_key(g: &StableGraph, perms: &[Vec<usize>]) -> String {
    perms.iter().map(|p| key(&g.relabel(p))).min().unwrap()
}

pub fn multisets(pool: &[(usize, usize)], k: usize, start: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if k == 0 {
        out.push(cur.clone());
        return;
    }
    for i in start..pool.len() {
        cur.push(pool[i]);
        multisets(pool, k - 1, i, cur, out);
        cur.pop();
    }
}

/// Every stable graph as a vertex-labeled object, deduplicated by the
/// minimum over all vertex relabelings.
pub fn brute_force(g: u32, n: usize) -> BTreeSet<String> {
    let mut found = BTreeSet::new();
    let dim = 3 * g as usize + n - 3;
    for nv in 1..=dim + 1 {
        let perms = all_perms(nv);
        let pool: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).collect();
        for ne in (nv - 1)..=dim {
            let h1 = ne + 1 - nv;
            if h1 as u32 > g {
                continue;
            }
            let rest = g - h1 as u32;
            let mut edge_sets = Vec::new();
            multisets(&pool, ne, 0, &mut Vec::new(), &mut edge_sets);
            // genus distributions summing to `rest`
            let mut genera_all = Vec::new();
            let mut cur = vec![0u32; nv];
            loop {
                if cur.iter().sum::<u32>() == rest {
                    genera_all.push(cur.clone());
                }
                let mut i = 0;
                while i < nv {
                    cur[i] += 1;
                    if cur[i] <= rest {
                        break;
                    }
                    cur[i] = 0;
                    i += 1;
                }
                if i == nv {
                    break;
                }
            }
            for edges in &edge_sets {
                let skeleton = StableGraph { genera: vec![0; nv], legs: vec![], edges: edges.clone() };
                if !skeleton.is_connected() {
                    continue;
                }
                for genera in &genera_all {
                    let total = nv.pow(n as u32);
                    for code in 0..total {
                        let mut c = code;
                        let legs: Vec<usize> = (0..n)
                            .map(|_| {
                                let v = c % nv;
                                c /= nv;
                                v
                            })
                            .collect();
                        let gr = StableGraph { genera: genera.clone(), legs, edges: edges.clone() };
                        if gr.is_valid_stable() {
                            found.insert(min_key(&gr, &perms));
                        }
                    }
                }
            }
        }
    }
    found
}

/// Pairs (vertex map, half-edge map) preserving incidence, genera, legs
/// and the edge pairing.
pub fn brute_aut(g: &StableGraph) -> u64 {
    let nh = 2 * g.num_edges();
    if nh == 0 {
        return 1;
    }
    let mut count = 0;
    for tau in all_perms(nh) {
        if (0..nh).any(|h| tau[h ^ 1] != tau[h] ^ 1) {
            continue;
        }
        let mut sigma: HashMap<usize, usize> = HashMap::new();
        let mut ok = true;
        for h in 0..nh {
            let v = g.half_edge_vertex(h);
            let w = g.half_edge_vertex(tau[h]);
            if *sigma.entry(v).or_insert(w) != w {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let ok = (0..g.num_vertices()).all(|v| g.genera[sigma[&v]] == g.genera[v])
            && g.legs.iter().all(|&v| sigma[&v] == v);
        let injective = sigma.values().collect::<BTreeSet<_>>().len() == sigma.len();
        if ok && injective {
            count += 1;
        }
    }
    count
}

pub fn small_types() -> Vec<(u32, usize)> {
    let mut v = Vec::new();
    for g in 0..=2u32 {
        for n in 0..=7usize {
            let d = 3 * g as i64 - 3 + n as i64;
            if (0..=4).contains(&d) && (g > 0 || n >= 3) && !(g == 1 && n == 0) {
                v.push((g, n));
            }
        }
    }
    v
}

/// Every residue vector on the edges, kept when all vertex congruences hold.
pub fn brute_weightings(gr: &StableGraph, r: u32, s: i64, a: &[i64]) -> Vec<Vec<u32>> {
    let ri = r as i64;
    let nv = gr.genera.len();
    let mut val = vec![0i64; nv];
    for &v in &gr.legs {
        val[v] += 1;
    }
    for &(x, y) in &gr.edges {
        val[x] += 1;
        val[y] += 1;
    }
    let ne = gr.edges.len();
    let mut out = Vec::new();
    for code in 0..(r as usize).pow(ne as u32) {
        let mut c = code;
        let mut he = Vec::new();
        let mut sums = vec![0i64; nv];
        for &(x, y) in &gr.edges {
            let w = (c % r as usize) as i64;
            c /= r as usize;
            he.push(w as u32);
            he.push(((ri - w) % ri) as u32);
            sums[x] += w;
            sums[y] += ri - w;
        }
        for (i, &v) in gr.legs.iter().enumerate() {
            sums[v] += a[i];
        }
        let ok = (0..nv).all(|v| (sums[v] - (2 * gr.genera[v] as i64 - 2 + val[v]) * s).rem_euclid(ri) == 0);
        if ok {
            out.push(he);
        }
    }
    out.sort();
    out
}
