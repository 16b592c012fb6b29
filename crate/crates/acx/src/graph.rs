//! Graphs and r-uniform hypergraphs: G(n,p) sampling, bitset clique
//! counting, small-pattern copy counting, induced edge statistics,
//! edge-flip increments, degree peeling and dispersedness checking.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::poly::{binomial_f64, next_combination, MultilinearPolynomial};

/// A simple graph (r = 2, with adjacency bitsets) or an r-uniform
/// hypergraph (edge list of r-sets).
#[derive(Clone, Debug, PartialEq)]
pub struct GraphInstance {
    n: usize,
    r: usize,
    edges: Vec<Vec<u32>>,
    /// Adjacency bitsets, populated only for r = 2.
    adj: Vec<Vec<u64>>,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl GraphInstance {
    /// Builds an r-uniform instance. Edges are sorted and deduplicated;
    /// loops (repeated vertices within an edge) are rejected.
    pub fn new(n: usize, r: usize, mut edges: Vec<Vec<u32>>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidGraph("edge arity must be >= 1".into()));
        }
        for e in &mut edges {
            e.sort_unstable();
            if e.len() != r {
                return Err(Error::InvalidGraph(format!(
                    "edge {e:?} has arity {}, expected {r}",
                    e.len()
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("edge {e:?} repeats a vertex")));
            }
            if let Some(&v) = e.last() {
                if v as usize >= n {
                    return Err(Error::InvalidGraph(format!(
                        "vertex {v} out of range for n = {n}"
                    )));
                }
            }
        }
        edges.sort();
        edges.dedup();
        let mut adj = Vec::new();
        if r == 2 {
            adj = vec![vec![0u64; words_for(n)]; n];
            for e in &edges {
                let (u, v) = (e[0] as usize, e[1] as usize);
                adj[u][v / 64] |= 1 << (v % 64);
                adj[v][u / 64] |= 1 << (u % 64);
            }
        }
        Ok(GraphInstance { n, r, edges, adj })
    }

    pub fn graph(n: usize, pairs: Vec<(u32, u32)>) -> Result<Self> {
        Self::new(n, 2, pairs.into_iter().map(|(a, b)| vec![a, b]).collect())
    }

    pub fn empty(n: usize, r: usize) -> Self {
        Self::new(n, r, Vec::new()).expect("empty instance")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push(vec![u, v]);
            }
        }
        Self::new(n, 2, edges).expect("complete graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        debug_assert_eq!(self.r, 2);
        self.adj[u as usize][v as usize / 64] >> (v % 64) & 1 == 1
    }

    /// Average degree r * e / n.
    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.r as f64 * self.edges.len() as f64 / self.n as f64
        }
    }

    /// Number of hyperedges entirely inside `set`.
    pub fn induced_edge_count(&self, set: &[u32]) -> u64 {
        let mut member = vec![false; self.n];
        for &v in set {
            member[v as usize] = true;
        }
        self.edges
            .iter()
            .filter(|e| e.iter().all(|&v| member[v as usize]))
            .count() as u64
    }

    /// Induced sub-instance on `set` (vertices re-indexed densely).
    pub fn induced(&self, set: &[u32]) -> GraphInstance {
        let remap: HashMap<u32, u32> = set
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|v| remap.contains_key(v)))
            .map(|e| e.iter().map(|v| remap[v]).collect())
            .collect();
        GraphInstance::new(set.len(), self.r, edges).expect("induced instance")
    }

    /// Graph with vertex v deleted (remaining vertices re-indexed).
    pub fn without_vertex(&self, v: u32) -> GraphInstance {
        let set: Vec<u32> = (0..self.n as u32).filter(|&u| u != v).collect();
        self.induced(&set)
    }

    /// Neighbourhood of v as a vertex list (r = 2 only).
    pub fn neighbours(&self, v: u32) -> Vec<u32> {
        (0..self.n as u32).filter(|&u| self.has_edge(v, u)).collect()
    }

    /// The polynomial sum over edges of the product of vertex indicators;
    /// its value at a 0/1 vertex vector is the induced edge count.
    pub fn edge_polynomial(&self) -> MultilinearPolynomial {
        MultilinearPolynomial::new(
            self.n,
            self.edges.iter().map(|e| (e.clone(), 1.0)),
        )
        .expect("edge polynomial")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(s)
            .map_err(|e| Error::InvalidGraph(format!("graph JSON: {e}")))?;
        GraphInstance::new(file.n, file.r, file.edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphFile {
            n: self.n,
            r: self.r,
            edges: self.edges.clone(),
        })
        .expect("serializable")
    }
}

/// On-disk format: `{"n": int, "r": int, "edges": [[int...]...]}`.
#[derive(Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub r: usize,
    pub edges: Vec<Vec<u32>>,
}

/// Samples G(n, p): each unordered pair present independently with
/// probability p. Reproducible per seed.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<GraphInstance> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability must lie in [0,1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen::<f64>() < p {
                edges.push(vec![u, v]);
            }
        }
    }
    GraphInstance::new(n, 2, edges)
}

/// Number of h-vertex cliques, by ordered extension with bitset
/// intersections.
pub fn count_cliques(g: &GraphInstance, h: usize) -> u64 {
    assert_eq!(g.r, 2, "clique counting needs a simple graph");
    assert!(h >= 1);
    if h == 1 {
        return g.n as u64;
    }
    let words = words_for(g.n);
    let mut all = vec![u64::MAX; words];
    // Clear bits beyond n.
    let excess = words * 64 - g.n;
    if excess > 0 {
        all[words - 1] = if g.n % 64 == 0 { 0 } else { u64::MAX >> excess };
    }
    if g.n == 0 {
        return 0;
    }

    fn popcount(bits: &[u64]) -> u64 {
        bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    fn rec(g: &GraphInstance, cand: &[u64], remaining: usize) -> u64 {
        if remaining == 1 {
            return popcount(cand);
        }
        let mut count = 0;
        let words = cand.len();
        for w in 0..words {
            let mut bits = cand[w];
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let v = w * 64 + b;
                // Extend only with neighbours above v.
                let mut next = vec![0u64; words];
                for i in 0..words {
                    next[i] = cand[i] & g.adj[v][i];
                }
                // Mask off v and everything below it.
                for (i, word) in next.iter_mut().enumerate() {
                    if i < w {
                        *word = 0;
                    } else if i == w {
                        *word &= !((1u64 << b) - 1) & !(1u64 << b);
                    }
                }
                count += rec(g, &next, remaining - 1);
            }
        }
        count
    }

    rec(g, &all, h)
}

/// Number of automorphisms of a small pattern graph (v(H) <= 8), by
/// brute-force permutation check.
pub fn automorphism_count(h: &GraphInstance) -> Result<u64> {
    assert_eq!(h.r, 2);
    if h.n > 8 {
        return Err(Error::InvalidParameter(format!(
            "automorphism check capped at 8 vertices, got {}",
            h.n
        )));
    }
    let mut perm: Vec<u32> = (0..h.n as u32).collect();
    let mut count = 0u64;
    loop {
        let preserved = h.edges.iter().all(|e| {
            h.has_edge(perm[e[0] as usize], perm[e[1] as usize])
        });
        if preserved {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(count)
}

fn next_permutation(p: &mut [u32]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopyMode {
    Unlabelled,
    Labelled,
}

/// Counts copies of a small pattern H (no isolated vertices, v(H) <= cap)
/// in g. Labelled copies are injective maps sending H-edges to g-edges;
/// unlabelled copies are subgraphs of g isomorphic to H, i.e. the
/// labelled count divided by |Aut(H)|.
pub fn count_copies(
    pattern: &GraphInstance,
    g: &GraphInstance,
    mode: CopyMode,
    cap: usize,
) -> Result<u64> {
    assert_eq!(pattern.r, 2);
    assert_eq!(g.r, 2);
    if pattern.n > cap {
        return Err(Error::InvalidParameter(format!(
            "pattern has {} vertices, cap is {cap}",
            pattern.n
        )));
    }
    let mut seen = vec![false; pattern.n];
    for e in &pattern.edges {
        for &v in e {
            seen[v as usize] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::InvalidParameter(
            "pattern has isolated vertices; strip them first".into(),
        ));
    }
    let labelled = count_injective_maps(pattern, g, &[]);
    match mode {
        CopyMode::Labelled => Ok(labelled),
        CopyMode::Unlabelled => {
            let aut = automorphism_count(pattern)?;
            Ok(labelled / aut)
        }
    }
}

/// Injective maps from the pattern into g preserving edges, with an
/// optional forced prefix (pattern vertex order 0, 1, ...).
fn count_injective_maps(pattern: &GraphInstance, g: &GraphInstance, prefix: &[u32]) -> u64 {
    let hn = pattern.n;
    // Pattern adjacency among earlier-assigned vertices.
    let mut earlier: Vec<Vec<u32>> = vec![Vec::new(); hn];
    for e in &pattern.edges {
        let (a, b) = (e[0], e[1]);
        earlier[b as usize].push(a);
    }

    fn rec(
        pattern: &GraphInstance,
        g: &GraphInstance,
        earlier: &[Vec<u32>],
        assigned: &mut Vec<u32>,
        used: &mut Vec<bool>,
    ) -> u64 {
        let next = assigned.len();
        if next == pattern.n() {
            return 1;
        }
        let mut count = 0;
        for cand in 0..g.n() as u32 {
            if used[cand as usize] {
                continue;
            }
            if earlier[next]
                .iter()
                .all(|&a| g.has_edge(assigned[a as usize], cand))
            {
                assigned.push(cand);
                used[cand as usize] = true;
                count += rec(pattern, g, earlier, assigned, used);
                assigned.pop();
                used[cand as usize] = false;
            }
        }
        count
    }

    let mut assigned: Vec<u32> = Vec::with_capacity(hn);
    let mut used = vec![false; g.n];
    for &v in prefix {
        // Check prefix consistency against earlier pattern edges.
        let idx = assigned.len();
        if !earlier[idx]
            .iter()
            .all(|&a| g.has_edge(assigned[a as usize], v))
        {
            return 0;
        }
        if used[v as usize] {
            return 0;
        }
        assigned.push(v);
        used[v as usize] = true;
    }
    rec(pattern, g, &earlier, &mut assigned, &mut used)
}

/// Labelled-copy difference from flipping the pair {u, v}: the number of
/// labelled copies of H in g + {u,v} that use that edge. Independent of
/// the pair's current status; always >= 0.
pub fn delta_edge(g: &GraphInstance, pattern: &GraphInstance, u: u32, v: u32) -> Result<u64> {
    assert_eq!(g.r, 2);
    if u == v {
        return Err(Error::InvalidParameter("pair endpoints must differ".into()));
    }
    // Work in g with the edge present.
    let g_plus = if g.has_edge(u, v) {
        g.clone()
    } else {
        let mut edges = g.edges.clone();
        edges.push(vec![u.min(v), u.max(v)]);
        GraphInstance::new(g.n, 2, edges)?
    };
    // A copy uses {u, v} iff some pattern edge maps onto the pair. To
    // avoid double counting, count maps grouped by the first pattern
    // vertex pair landing on {u, v} is unnecessary: summing over all
    // pattern edges and both orientations counts each copy once per
    // pattern edge mapped onto the pair, but an injective map sends
    // exactly one pattern edge to the pair {u, v}. So the sum is exact.
    let mut total = 0u64;
    for e in &pattern.edges {
        for (a, b) in [(e[0], e[1]), (e[1], e[0])] {
            // Relabel the pattern so that a, b come first.
            let relabel = reorder_pattern(pattern, a, b);
            total += count_injective_maps(&relabel, &g_plus, &[u, v]);
        }
    }
    Ok(total)
}

/// Pattern with vertices reordered so `a` gets index 0 and `b` index 1.
fn reorder_pattern(pattern: &GraphInstance, a: u32, b: u32) -> GraphInstance {
    let mut order: Vec<u32> = vec![a, b];
    order.extend((0..pattern.n as u32).filter(|&v| v != a && v != b));
    let mut rank = vec![0u32; pattern.n];
    for (i, &v) in order.iter().enumerate() {
        rank[v as usize] = i as u32;
    }
    let edges = pattern
        .edges
        .iter()
        .map(|e| vec![rank[e[0] as usize], rank[e[1] as usize]])
        .collect();
    GraphInstance::new(pattern.n, 2, edges).expect("relabelled pattern")
}

/// Exact expected edge-flip increment over G(n, p) for a pattern with h
/// vertices and e(H) edges: 2 e(H) p^{e(H)-1} (n-2)(n-3)...(n-h+1).
pub fn expected_delta_edge(n: usize, pattern: &GraphInstance, p: f64) -> f64 {
    let h = pattern.n;
    let m = pattern.edge_count();
    let mut falling = 1.0;
    for i in 2..h {
        falling *= (n - i) as f64;
    }
    2.0 * m as f64 * p.powi(m as i32 - 1) * falling
}

/// E_k = p^{C(h-1,2)} * C(k, h-1): the expected number of (h-1)-cliques
/// among a k-set of candidate neighbours.
pub fn expected_ek(k: usize, h: usize, p: f64) -> f64 {
    assert!(h >= 1);
    let exponent = (h - 1) * (h.saturating_sub(2)) / 2; // C(h-1, 2)
    p.powi(exponent as i32) * binomial_f64(k as u64, (h - 1) as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetMode {
    /// Uniformly random k-subset.
    UniformK,
    /// Each vertex independently with probability k/n.
    Bernoulli,
}

/// One sampled induced edge statistic.
#[derive(Clone, Debug)]
pub struct EdgeStatisticSample {
    pub set: Vec<u32>,
    pub value: u64,
    pub mode: SubsetMode,
}

/// Draws a vertex subset (uniform k-set or Bernoulli(k/n)) and returns
/// its exact induced (hyper)edge count.
pub fn edge_statistic(
    g: &GraphInstance,
    k: usize,
    mode: SubsetMode,
    seed: u64,
) -> Result<EdgeStatisticSample> {
    if k > g.n {
        return Err(Error::InvalidParameter(format!(
            "subset size {k} exceeds vertex count {}",
            g.n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set: Vec<u32> = match mode {
        SubsetMode::UniformK => {
            let mut pool: Vec<u32> = (0..g.n as u32).collect();
            for i in 0..k {
                let j = rng.gen_range(i..g.n);
                pool.swap(i, j);
            }
            pool.truncate(k);
            pool
        }
        SubsetMode::Bernoulli => {
            let p = if g.n == 0 { 0.0 } else { k as f64 / g.n as f64 };
            (0..g.n as u32).filter(|_| rng.gen::<f64>() < p).collect()
        }
    };
    set.sort_unstable();
    let value = g.induced_edge_count(&set);
    Ok(EdgeStatisticSample { set, value, mode })
}

/// Exact distribution of the induced edge count over all C(n, k)
/// subsets. Enumeration helper, n <= 14.
pub fn exact_edge_statistic_distribution(
    g: &GraphInstance,
    k: usize,
) -> Result<DiscreteDistribution> {
    if g.n > 14 {
        return Err(Error::CapExceeded { needed: g.n, cap: 14 });
    }
    if k > g.n {
        return Err(Error::InvalidParameter("k exceeds n".into()));
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    if k == 0 {
        counts.insert(0, 1);
    } else {
        let mut combo: Vec<u32> = (0..k as u32).collect();
        loop {
            *counts.entry(g.induced_edge_count(&combo)).or_insert(0) += 1;
            if !next_combination(&mut combo, g.n as u32) {
                break;
            }
        }
    }
    let total: u64 = counts.values().sum();
    DiscreteDistribution::from_atoms(
        counts
            .into_iter()
            .map(|(v, c)| (v as f64, c as f64 / total as f64))
            .collect(),
        0.0,
    )
}

/// Iteratively deletes vertices of induced degree below `threshold`
/// until none remain; returns the surviving vertex set. With threshold
/// = (average degree) / r the survivors are nonempty.
pub fn min_degree_subgraph(g: &GraphInstance, threshold: f64) -> Vec<u32> {
    let mut alive = vec![true; g.n];
    loop {
        let mut degree = vec![0u64; g.n];
        for e in &g.edges {
            if e.iter().all(|&v| alive[v as usize]) {
                for &v in e {
                    degree[v as usize] += 1;
                }
            }
        }
        let mut removed = false;
        for v in 0..g.n {
            if alive[v] && (degree[v] as f64) < threshold {
                alive[v] = false;
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    (0..g.n as u32).filter(|&v| alive[v as usize]).collect()
}

#[derive(Clone, Debug, Serialize)]
pub enum DispersednessMode {
    Exact,
    Sampled { budget: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct DispersednessRow {
    pub k: usize,
    /// Clique count value attaining the worst frequency.
    pub worst_l: u64,
    pub count: u64,
    pub total: f64,
    pub frequency: f64,
}

/// Per-k worst-case frequency of a single clique-count value over
/// k-subsets. Exact mode certifies; sampled mode only reports evidence.
#[derive(Clone, Debug, Serialize)]
pub struct DispersednessReport {
    pub c: f64,
    pub q: f64,
    pub h: usize,
    pub rows: Vec<DispersednessRow>,
    pub dispersed: bool,
    /// True only in exact mode; sampling cannot certify the bound.
    pub certified: bool,
    pub mode: DispersednessMode,
}

/// Checks (c, q, h)-dispersedness: for every k in [cn, (1-c)n] and every
/// l, at most a q-fraction of k-subsets induce exactly l copies of K_h.
pub fn dispersedness_check(
    g: &GraphInstance,
    c: f64,
    q: f64,
    h: usize,
    mode: DispersednessMode,
    ) -> Result<DispersednessReport> {
    if !(c > 0.0 && c < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "dispersedness parameter c must lie in (0, 1/2), got {c}"
        )));
    }
    assert_eq!(g.r, 2);
    let n = g.n;
    let k_lo = (c * n as f64).ceil() as usize;
    let k_hi = ((1.0 - c) * n as f64).floor() as usize;
    let mut rows = Vec::new();
    match mode {
        DispersednessMode::Exact => {
            if n > 18 {
                return Err(Error::CapExceeded { needed: n, cap: 18 });
            }
            for k in k_lo..=k_hi.min(n) {
                let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
                if k == 0 {
                    hist.insert(0, 1);
                } else {
                    let mut combo: Vec<u32> = (0..k as u32).collect();
                    loop {
                        let cliques = count_cliques(&g.induced(&combo), h);
                        *hist.entry(cliques).or_insert(0) += 1;
                        if !next_combination(&mut combo, n as u32) {
                            break;
                        }
                    }
                }
                let total: u64 = hist.values().sum();
                let (&worst_l, &count) =
                    hist.iter().max_by_key(|&(_, &c)| c).expect("nonempty");
                rows.push(DispersednessRow {
                    k,
                    worst_l,
                    count,
                    total: total as f64,
                    frequency: count as f64 / total as f64,
                });
            }
        }
        DispersednessMode::Sampled { budget, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for k in k_lo..=k_hi.min(n) {
                let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
                for _ in 0..budget.max(1) {
                    let mut pool: Vec<u32> = (0..n as u32).collect();
                    for i in 0..k {
                        let j = rng.gen_range(i..n);
                        pool.swap(i, j);
                    }
                    pool.truncate(k);
                    let cliques = count_cliques(&g.induced(&pool), h);
                    *hist.entry(cliques).or_insert(0) += 1;
                }
                let total: u64 = hist.values().sum();
                let (&worst_l, &count) =
                    hist.iter().max_by_key(|&(_, &c)| c).expect("nonempty");
                rows.push(DispersednessRow {
                    k,
                    worst_l,
                    count,
                    total: total as f64,
                    frequency: count as f64 / total as f64,
                });
            }
        }
    }
    let dispersed = rows.iter().all(|r| r.frequency <= q);
    let certified = matches!(mode, DispersednessMode::Exact);
    Ok(DispersednessReport {
        c,
        q,
        h,
        rows,
        dispersed,
        certified,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Assignment;

    /// Brute-force clique count over all h-subsets.
    fn brute_cliques(g: &GraphInstance, h: usize) -> u64 {
        if h == 1 {
            return g.n() as u64;
        }
        if h > g.n() {
            return 0;
        }
        let mut combo: Vec<u32> = (0..h as u32).collect();
        let mut count = 0;
        loop {
            let mut is_clique = true;
            'check: for i in 0..h {
                for j in i + 1..h {
                    if !g.has_edge(combo[i], combo[j]) {
                        is_clique = false;
                        break 'check;
                    }
                }
            }
            if is_clique {
                count += 1;
            }
            if !next_combination(&mut combo, g.n() as u32) {
                break;
            }
        }
        count
    }

    fn path3() -> GraphInstance {
        GraphInstance::graph(3, vec![(0, 1), (1, 2)]).unwrap()
    }

    fn triangle() -> GraphInstance {
        GraphInstance::complete(3)
    }

    #[test]
    fn gnp_extremes() {
        assert_eq!(sample_gnp(10, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(10, 1.0, 1).unwrap().edge_count(), 45);
    }

    #[test]
    fn gnp_edge_count_concentrates() {
        // n = 100, p = 0.5: mean 2475, sd ~ 24.9; 4 sigma check.
        for seed in 0..20 {
            let g = sample_gnp(100, 0.5, seed).unwrap();
            let e = g.edge_count() as f64;
            assert!((e - 2475.0).abs() < 4.0 * (2475.0f64 * 0.5).sqrt(), "{e}");
        }
    }

    #[test]
    fn clique_count_examples() {
        assert_eq!(count_cliques(&GraphInstance::complete(4), 3), 4);
        assert_eq!(count_cliques(&GraphInstance::empty(5, 2), 2), 0);
        assert_eq!(count_cliques(&GraphInstance::complete(6), 4), 15);
    }

    #[test]
    fn clique_count_matches_brute_force() {
        for seed in 0..10 {
            let g = sample_gnp(12, 0.5, seed).unwrap();
            for h in 1..=5 {
                assert_eq!(count_cliques(&g, h), brute_cliques(&g, h));
            }
        }
        // Also across the 64-bit word boundary.
        let g = sample_gnp(70, 0.2, 3).unwrap();
        assert_eq!(count_cliques(&g, 3), brute_cliques(&g, 3));
    }

    #[test]
    fn copy_counting_examples() {
        let edge = GraphInstance::graph(2, vec![(0, 1)]).unwrap();
        let g = sample_gnp(8, 0.5, 2).unwrap();
        assert_eq!(
            count_copies(&edge, &g, CopyMode::Unlabelled, 8).unwrap(),
            g.edge_count() as u64
        );
        assert_eq!(
            count_copies(&edge, &g, CopyMode::Labelled, 8).unwrap(),
            2 * g.edge_count() as u64
        );

        let k4 = GraphInstance::complete(4);
        assert_eq!(count_copies(&triangle(), &k4, CopyMode::Unlabelled, 8).unwrap(), 4);

        assert_eq!(count_copies(&path3(), &k4, CopyMode::Labelled, 8).unwrap(), 24);
        assert_eq!(count_copies(&path3(), &k4, CopyMode::Unlabelled, 8).unwrap(), 12);
    }

    #[test]
    fn automorphisms() {
        assert_eq!(automorphism_count(&triangle()).unwrap(), 6);
        assert_eq!(automorphism_count(&path3()).unwrap(), 2);
        assert_eq!(automorphism_count(&GraphInstance::complete(4)).unwrap(), 24);
    }

    #[test]
    fn isolated_vertices_rejected() {
        let h = GraphInstance::graph(3, vec![(0, 1)]).unwrap();
        let g = GraphInstance::complete(4);
        assert!(count_copies(&h, &g, CopyMode::Labelled, 8).is_err());
    }

    #[test]
    fn delta_edge_examples() {
        let edge = GraphInstance::graph(2, vec![(0, 1)]).unwrap();
        let g = sample_gnp(7, 0.4, 5).unwrap();
        assert_eq!(delta_edge(&g, &edge, 0, 3).unwrap(), 2);

        let k4 = GraphInstance::complete(4);
        assert_eq!(delta_edge(&k4, &triangle(), 0, 1).unwrap(), 12);
    }

    #[test]
    fn delta_edge_matches_copy_difference() {
        let patterns = [triangle(), path3(), GraphInstance::complete(4)];
        for seed in 0..8 {
            let g = sample_gnp(9, 0.5, seed).unwrap();
            for pattern in &patterns {
                for (u, v) in [(0u32, 1u32), (2, 5), (7, 8)] {
                    let mut plus_edges = g.edges().to_vec();
                    plus_edges.push(vec![u.min(v), u.max(v)]);
                    let g_plus = GraphInstance::new(9, 2, plus_edges).unwrap();
                    let minus_edges: Vec<Vec<u32>> = g
                        .edges()
                        .iter()
                        .filter(|e| e.as_slice() != [u.min(v), u.max(v)])
                        .cloned()
                        .collect();
                    let g_minus = GraphInstance::new(9, 2, minus_edges).unwrap();
                    let diff = count_copies(pattern, &g_plus, CopyMode::Labelled, 8)
                        .unwrap()
                        - count_copies(pattern, &g_minus, CopyMode::Labelled, 8).unwrap();
                    assert_eq!(delta_edge(&g, pattern, u, v).unwrap(), diff);
                }
            }
        }
    }

    #[test]
    fn expected_delta_edge_matches_exhaustive_average() {
        // Oracle: exact expectation by enumerating all graphs on the
        // remaining pairs, weighting by p^{present} (1-p)^{absent}.
        let n = 5;
        let p = 0.3f64;
        for pattern in [triangle(), path3()] {
            let pairs: Vec<(u32, u32)> = (0..n as u32)
                .flat_map(|u| ((u + 1)..n as u32).map(move |v| (u, v)))
                .filter(|&(u, v)| !(u == 0 && v == 1))
                .collect();
            let m = pairs.len();
            let mut expectation = 0.0;
            for mask in 0u64..1 << m {
                let edges: Vec<Vec<u32>> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &(u, v))| vec![u, v])
                    .collect();
                let present = mask.count_ones() as i32;
                let weight = p.powi(present) * (1.0 - p).powi(m as i32 - present);
                let g = GraphInstance::new(n, 2, edges).unwrap();
                expectation += weight * delta_edge(&g, &pattern, 0, 1).unwrap() as f64;
            }
            let closed = expected_delta_edge(n, &pattern, p);
            assert!(
                (expectation - closed).abs() < 1e-9,
                "pattern e={} oracle {expectation} closed {closed}",
                pattern.edge_count()
            );
        }
    }

    #[test]
    fn expected_ek_examples() {
        assert_eq!(expected_ek(7, 2, 0.3), 7.0);
        assert_eq!(expected_ek(1, 3, 0.5), 0.0);
        assert!((expected_ek(10, 3, 0.5) - 22.5).abs() < 1e-12);
    }

    #[test]
    fn edge_statistic_examples() {
        let empty = GraphInstance::empty(8, 2);
        let s = edge_statistic(&empty, 4, SubsetMode::UniformK, 1).unwrap();
        assert_eq!(s.value, 0);
        assert_eq!(s.set.len(), 4);

        let kn = GraphInstance::complete(9);
        for seed in 0..5 {
            let s = edge_statistic(&kn, 5, SubsetMode::UniformK, seed).unwrap();
            assert_eq!(s.value, 10); // C(5,2)
        }

        // Sample is internally consistent.
        let g = sample_gnp(10, 0.5, 4).unwrap();
        let s = edge_statistic(&g, 6, SubsetMode::Bernoulli, 9).unwrap();
        assert_eq!(s.value, g.induced_edge_count(&s.set));
    }

    #[test]
    fn exact_edge_statistic_sums_to_one() {
        let g = sample_gnp(10, 0.5, 11).unwrap();
        for k in [0, 3, 5, 10] {
            let d = exact_edge_statistic_distribution(&g, k).unwrap();
            let total: f64 = d.atoms().iter().map(|a| a.1).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bernoulli_statistic_equals_edge_polynomial() {
        // e(G[A]) equals the edge polynomial evaluated at the indicator.
        let g = sample_gnp(12, 0.4, 8).unwrap();
        let f = g.edge_polynomial();
        for seed in 0..20 {
            let s = edge_statistic(&g, 5, SubsetMode::Bernoulli, seed).unwrap();
            let mut bits = vec![false; 12];
            for &v in &s.set {
                bits[v as usize] = true;
            }
            assert_eq!(
                f.evaluate(&Assignment::new(bits)).unwrap(),
                s.value as f64
            );
        }
    }

    #[test]
    fn clique_decomposition_identity() {
        // X_{K_h}(G) = X_{K_h}(G - v) + X_{K_{h-1}}(G[N(v)]).
        for seed in 0..10 {
            let g = sample_gnp(11, 0.5, seed).unwrap();
            for h in 2..=4usize {
                for v in [0u32, 5, 10] {
                    let without = count_cliques(&g.without_vertex(v), h);
                    let neighbourhood = g.induced(&g.neighbours(v));
                    let via_v = count_cliques(&neighbourhood, h - 1);
                    assert_eq!(count_cliques(&g, h), without + via_v);
                }
            }
        }
    }

    #[test]
    fn min_degree_examples() {
        let k5 = GraphInstance::complete(5);
        assert_eq!(min_degree_subgraph(&k5, 2.0).len(), 5);

        let star = GraphInstance::graph(
            6,
            vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)],
        )
        .unwrap();
        assert!(min_degree_subgraph(&star, 2.0).is_empty());
    }

    #[test]
    fn min_degree_peeling_guarantee() {
        for seed in 0..20 {
            let g = sample_gnp(15, 0.4, seed).unwrap();
            let threshold = g.average_degree() / 2.0;
            let survivors = min_degree_subgraph(&g, threshold);
            assert!(!survivors.is_empty());
            let induced = g.induced(&survivors);
            for v in 0..induced.n() as u32 {
                let deg = induced.neighbours(v).len() as f64;
                assert!(deg >= threshold);
            }
        }
    }

    #[test]
    fn dispersedness_clique_degenerate() {
        // K_n: every k-subset induces exactly C(k, h) cliques, so the
        // worst frequency is 1 and no q < 1 can hold.
        let g = GraphInstance::complete(10);
        let report =
            dispersedness_check(&g, 0.3, 0.5, 3, DispersednessMode::Exact).unwrap();
        assert!(!report.dispersed);
        assert!(report.rows.iter().all(|r| r.frequency == 1.0));

        let empty = GraphInstance::empty(10, 2);
        let report =
            dispersedness_check(&empty, 0.3, 0.5, 3, DispersednessMode::Exact).unwrap();
        assert!(report.rows.iter().all(|r| r.worst_l == 0 && r.frequency == 1.0));
    }

    #[test]
    fn dispersedness_histogram_recount() {
        // Independent recount of random cells of the exact histogram.
        let g = sample_gnp(12, 0.5, 21).unwrap();
        let report =
            dispersedness_check(&g, 0.25, 0.9, 3, DispersednessMode::Exact).unwrap();
        for row in report.rows.iter().take(4) {
            // Recount subsets of size k inducing exactly worst_l triangles.
            let mut combo: Vec<u32> = (0..row.k as u32).collect();
            let mut count = 0u64;
            loop {
                if count_cliques(&g.induced(&combo), 3) == row.worst_l {
                    count += 1;
                }
                if !next_combination(&mut combo, 12) {
                    break;
                }
            }
            assert_eq!(count, row.count);
        }
    }

    #[test]
    fn json_round_trip() {
        let g = sample_gnp(6, 0.5, 3).unwrap();
        let back = GraphInstance::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }
}
