//! Polynomial rank via hypergraph matching.
//!
//! Two notions: the degree-d uniform variant (only size-d monomials with
//! large coefficients become edges) and the non-uniform rank r(f) (all
//! sizes >= 1). Any matching lower-bounds the rank, so a greedy maximal
//! matching always yields a sound certificate; branch-and-bound settles
//! small instances exactly.

use crate::error::{Error, Result};
use crate::poly::MultilinearPolynomial;

/// Which monomials become hyperedges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    /// Only monomials of size exactly deg(f).
    MnvDegreeD,
    /// All monomial sizes >= 1.
    NonUniform,
}

/// Hypergraph whose edges are the large-coefficient monomials of f.
#[derive(Clone, Debug)]
pub struct CoefficientHypergraph {
    n: usize,
    edges: Vec<Vec<u32>>,
}

impl CoefficientHypergraph {
    pub fn new(n: usize, mut edges: Vec<Vec<u32>>) -> Self {
        for e in &mut edges {
            e.sort_unstable();
            e.dedup();
        }
        edges.sort();
        edges.dedup();
        CoefficientHypergraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn min_edge_size(&self) -> usize {
        self.edges.iter().map(Vec::len).min().unwrap_or(1)
    }
}

/// A matching witnessing a rank lower bound; `exact` marks a proven
/// maximum.
#[derive(Clone, Debug)]
pub struct RankCertificate {
    pub matching: Vec<Vec<u32>>,
    pub exact: bool,
}

impl RankCertificate {
    pub fn size(&self) -> usize {
        self.matching.len()
    }
}

/// Edges are exactly the non-constant monomials of the selected sizes
/// with |coefficient| >= threshold (default 1).
pub fn build_hypergraph(
    f: &MultilinearPolynomial,
    mode: RankMode,
    threshold: f64,
) -> Result<CoefficientHypergraph> {
    if threshold <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    let d = f.degree();
    let edges = f
        .terms()
        .filter(|(m, c)| {
            !m.is_constant()
                && c.abs() >= threshold
                && match mode {
                    RankMode::MnvDegreeD => m.degree() == d,
                    RankMode::NonUniform => true,
                }
        })
        .map(|(m, _)| m.vars().to_vec())
        .collect();
    Ok(CoefficientHypergraph::new(f.n(), edges))
}

/// Maximal matching by a single lexicographic scan. Deterministic; size
/// lower-bounds the true maximum.
pub fn greedy_matching(h: &CoefficientHypergraph) -> RankCertificate {
    let mut used = vec![false; h.n];
    let mut matching = Vec::new();
    for e in &h.edges {
        if e.iter().all(|&v| !used[v as usize]) {
            for &v in e {
                used[v as usize] = true;
            }
            matching.push(e.clone());
        }
    }
    RankCertificate {
        matching,
        exact: false,
    }
}

/// Maximum matching by branch-and-bound over the edge conflict graph.
/// Refuses instances above `edge_cap` (the problem is hard in general);
/// callers should fall back to `greedy_matching`.
pub fn exact_matching(h: &CoefficientHypergraph, edge_cap: usize) -> Result<RankCertificate> {
    let m = h.edges.len();
    if m > edge_cap {
        return Err(Error::EdgeCapExceeded {
            edges: m,
            cap: edge_cap,
        });
    }
    if m == 0 {
        return Ok(RankCertificate {
            matching: Vec::new(),
            exact: true,
        });
    }
    // conflicts[i] = bitmask of edges sharing a vertex with edge i.
    let mut conflicts = vec![0u64; m];
    for i in 0..m {
        for j in i + 1..m {
            if h.edges[i].iter().any(|v| h.edges[j].contains(v)) {
                conflicts[i] |= 1 << j;
                conflicts[j] |= 1 << i;
            }
        }
    }

    struct Search<'a> {
        conflicts: &'a [u64],
        best: Vec<usize>,
    }
    impl Search<'_> {
        fn go(&mut self, chosen: &mut Vec<usize>, avail: u64) {
            if chosen.len() + avail.count_ones() as usize <= self.best.len() {
                return; // cannot beat the incumbent
            }
            if avail == 0 {
                if chosen.len() > self.best.len() {
                    self.best = chosen.clone();
                }
                return;
            }
            let i = avail.trailing_zeros() as usize;
            // Include edge i.
            chosen.push(i);
            self.go(chosen, avail & !(1 << i) & !self.conflicts[i]);
            chosen.pop();
            // Exclude edge i.
            self.go(chosen, avail & !(1 << i));
        }
    }

    let greedy = greedy_matching(h);
    let greedy_idx: Vec<usize> = greedy
        .matching
        .iter()
        .map(|e| h.edges.iter().position(|x| x == e).expect("edge present"))
        .collect();
    let mut search = Search {
        conflicts: &conflicts,
        best: greedy_idx,
    };
    let all: u64 = if m == 64 { u64::MAX } else { (1 << m) - 1 };
    search.go(&mut Vec::new(), all);

    let matching = search.best.iter().map(|&i| h.edges[i].clone()).collect();
    Ok(RankCertificate {
        matching,
        exact: true,
    })
}

/// Rank report: exact when the edge count permits, otherwise the greedy
/// lower bound (sound for every bound that is monotone in the rank).
pub fn rank(h: &CoefficientHypergraph, edge_cap: usize) -> RankCertificate {
    match exact_matching(h, edge_cap) {
        Ok(cert) => cert,
        Err(_) => greedy_matching(h),
    }
}
