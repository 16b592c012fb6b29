//! Exact distributions of f(xi) for xi in Ber(p)^n, point/interval
//! probabilities, the Levy concentration function and binomial/Poisson
//! reference quantities.
//!
//! Three exact routes are available:
//!   * direct 2^n enumeration (n up to a configurable cap, split into
//!     assignment-prefix chunks whose merge is order-independent),
//!   * decomposition into variable-disjoint components followed by
//!     convolution (reaches far beyond the cap when terms decouple),
//!   * the weight table of a fully symmetric polynomial, which works at
//!     any n via binomial weights.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{BernoulliSpec, MultilinearPolynomial, SymmetricForm};

/// Default enumeration cap (per connected component of variables).
pub const DEFAULT_ENUM_CAP: usize = 30;

/// Default relative merge tolerance for real-valued atoms. Zero in
/// exact-integer mode.
pub const DEFAULT_MERGE_EPS: f64 = 1e-9;

/// Compensated (Kahan) summation.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// An exact finite distribution: atoms sorted by value, probabilities
/// positive, total mass 1 within 1e-12.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDistribution {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteDistribution {
    /// Builds a distribution from (value, prob) pairs: sorts, merges
    /// values closer than `eps` (relative to magnitude, absolute near
    /// zero), drops zero-probability atoms and validates the total mass.
    pub fn from_atoms(mut raw: Vec<(f64, f64)>, eps: f64) -> Result<Self> {
        raw.retain(|&(_, p)| p != 0.0);
        raw.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values"));
        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (v, p) in raw {
            if p < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "negative probability {p}"
                )));
            }
            match atoms.last_mut() {
                Some(last) if (v - last.0).abs() <= eps * last.0.abs().max(1.0) => {
                    // Merge class: probability-weighted representative.
                    let w = last.1 + p;
                    last.0 = (last.0 * last.1 + v * p) / w;
                    last.1 = w;
                }
                _ => atoms.push((v, p)),
            }
        }
        let total = kahan_sum(atoms.iter().map(|a| a.1));
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::ProbabilityMass { sum: total });
        }
        Ok(DiscreteDistribution { atoms })
    }

    pub fn point_mass(value: f64) -> Self {
        DiscreteDistribution {
            atoms: vec![(value, 1.0)],
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn min_value(&self) -> f64 {
        self.atoms.first().map_or(0.0, |a| a.0)
    }

    pub fn max_value(&self) -> f64 {
        self.atoms.last().map_or(0.0, |a| a.0)
    }

    /// Total mass of atoms within `eps` of x (eps = 0: exact match after
    /// construction-time merging).
    pub fn point_probability(&self, x: f64, eps: f64) -> f64 {
        kahan_sum(
            self.atoms
                .iter()
                .filter(|&&(v, _)| (v - x).abs() <= eps)
                .map(|a| a.1),
        )
    }

    /// Mass in the interval from lo to hi with configurable strictness.
    pub fn interval_probability(
        &self,
        lo: f64,
        hi: f64,
        lo_open: bool,
        hi_open: bool,
    ) -> f64 {
        kahan_sum(
            self.atoms
                .iter()
                .filter(|&&(v, _)| {
                    let left = if lo_open { v > lo } else { v >= lo };
                    let right = if hi_open { v < hi } else { v <= hi };
                    left && right
                })
                .map(|a| a.1),
        )
    }

    /// Levy concentration function Q(t) = sup_x Pr(x <= X <= x + t),
    /// with a maximizing left endpoint. The supremum is attained with the
    /// left endpoint at an atom, so scanning atoms is exact.
    pub fn concentration_function(&self, t: f64) -> (f64, f64) {
        assert!(t >= 0.0, "window width must be nonnegative");
        let prefix = self.prefix_sums();
        let mut best = (0.0f64, self.min_value());
        let mut j = 0usize;
        for i in 0..self.atoms.len() {
            if j < i {
                j = i;
            }
            while j + 1 < self.atoms.len() && self.atoms[j + 1].0 <= self.atoms[i].0 + t
            {
                j += 1;
            }
            // Single-atom windows bypass the prefix difference so the
            // mass is the stored probability, bit for bit.
            let mass = if i == j {
                self.atoms[i].1
            } else {
                prefix[j + 1] - prefix[i]
            };
            if mass > best.0 {
                best = (mass, self.atoms[i].0);
            }
        }
        best
    }

    /// sup_x Pr(|X - x| < radius), i.e. the largest mass of an open
    /// interval of length 2*radius, with a maximizing center.
    pub fn max_open_interval_mass(&self, radius: f64) -> (f64, f64) {
        assert!(radius >= 0.0);
        if radius == 0.0 {
            return (0.0, self.min_value());
        }
        let prefix = self.prefix_sums();
        let mut best = (0.0f64, self.min_value());
        let mut j = 0usize;
        for i in 0..self.atoms.len() {
            if j < i {
                j = i;
            }
            while j + 1 < self.atoms.len()
                && self.atoms[j + 1].0 - self.atoms[i].0 < 2.0 * radius
            {
                j += 1;
            }
            // Single-atom windows report the stored probability exactly.
            let mass = if i == j {
                self.atoms[i].1
            } else {
                prefix[j + 1] - prefix[i]
            };
            if mass > best.0 {
                best = (mass, (self.atoms[i].0 + self.atoms[j].0) / 2.0);
            }
        }
        best
    }

    fn prefix_sums(&self) -> Vec<f64> {
        let mut prefix = Vec::with_capacity(self.atoms.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for &(_, p) in &self.atoms {
            acc += p;
            prefix.push(acc);
        }
        prefix
    }

    /// Deterministic CSV export: header then rows ordered by value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,prob\n");
        for &(v, p) in &self.atoms {
            out.push_str(&format!("{v},{p}\n"));
        }
        out
    }

    pub fn to_export(&self) -> DistributionExport {
        DistributionExport {
            atoms: self
                .atoms
                .iter()
                .map(|&(value, prob)| AtomExport { value, prob })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct DistributionExport {
    pub atoms: Vec<AtomExport>,
}

#[derive(Serialize, Deserialize)]
pub struct AtomExport {
    pub value: f64,
    pub prob: f64,
}

/// The full pmf of Bin(n, p), computed outward from the mode by ratio
/// recurrences and normalized with compensated summation. Stable for n
/// well beyond exact enumeration reach.
pub fn binomial_pmf_table(n: usize, p: f64) -> Vec<f64> {
    assert!(p > 0.0 && p < 1.0);
    if n == 0 {
        return vec![1.0];
    }
    let q = 1.0 - p;
    let mode = (((n + 1) as f64 * p).floor() as usize).min(n);
    let mut t = vec![0.0f64; n + 1];
    t[mode] = 1.0;
    for k in (1..=mode).rev() {
        // pmf(k-1) = pmf(k) * k q / ((n-k+1) p)
        t[k - 1] = t[k] * (k as f64 * q) / ((n - k + 1) as f64 * p);
    }
    for k in mode..n {
        t[k + 1] = t[k] * ((n - k) as f64 * p) / ((k + 1) as f64 * q);
    }
    let total = kahan_sum(t.iter().copied());
    for v in &mut t {
        *v /= total;
    }
    t
}

/// Modal probability of Bin(n, p): the pmf at mode floor((n+1)p).
pub fn binomial_modal(n: usize, p: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let table = binomial_pmf_table(n, p);
    let mode = (((n + 1) as f64 * p).floor() as usize).min(n);
    table[mode]
}

/// max_k e^{-lambda} lambda^k / k! over k in N.
pub fn poisson_pmf_max(lambda: f64) -> f64 {
    assert!(lambda > 0.0);
    let mut term = (-lambda).exp();
    let mut best = term;
    let mut k = 0u64;
    loop {
        k += 1;
        term *= lambda / k as f64;
        if term > best {
            best = term;
        }
        if k as f64 > lambda && term < best * 1e-3 {
            break;
        }
    }
    best
}

/// Smallest window [mode - w, mode + w] (clamped to [0, n]) of Bin(n, p)
/// with mass at least 1 - delta. Used as the flip-process window.
pub fn binomial_central_window(n: usize, p: f64, delta: f64) -> (usize, usize) {
    let table = binomial_pmf_table(n, p);
    let mode = (((n + 1) as f64 * p).floor() as usize).min(n);
    let mut w = 0usize;
    loop {
        let lo = mode.saturating_sub(w);
        let hi = (mode + w).min(n);
        let mass = kahan_sum(table[lo..=hi].iter().copied());
        if mass >= 1.0 - delta || (lo == 0 && hi == n) {
            return (lo, hi);
        }
        w += 1;
    }
}

/// Exact distribution of f(xi), xi in Ber(p)^n.
///
/// Components of co-occurring variables are enumerated independently
/// (each must fit under `cap`) and convolved. When some component is too
/// large the symmetric weight-table route is tried before giving up.
pub fn exact_distribution(
    f: &MultilinearPolynomial,
    spec: &BernoulliSpec,
    cap: usize,
) -> Result<DiscreteDistribution> {
    if spec.n != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: spec.n,
        });
    }
    if f.degree() == 0 {
        return Ok(DiscreteDistribution::point_mass(f.constant_coefficient()));
    }
    let components = variable_components(f);
    let largest = components.iter().map(|c| c.len()).max().unwrap_or(0);
    if largest > cap {
        if let Some(sym) = f.detect_symmetric() {
            return symmetric_distribution(&sym, spec);
        }
        return Err(Error::CapExceeded {
            needed: largest,
            cap,
        });
    }

    let int_terms = f.integer_coefficients();
    let mut acc: Option<Vec<(f64, f64)>> = None;
    for comp in &components {
        let sub = component_polynomial(f, comp);
        let atoms = enumerate_component(&sub, spec.p, int_terms.is_some())?;
        acc = Some(match acc {
            None => atoms,
            Some(prev) => convolve_atoms(&prev, &atoms, int_terms.is_some()),
        });
    }
    let constant = f.constant_coefficient();
    let mut atoms = acc.unwrap_or_else(|| vec![(0.0, 1.0)]);
    if constant != 0.0 {
        for a in &mut atoms {
            a.0 += constant;
        }
    }
    let eps = if int_terms.is_some() { 0.0 } else { DEFAULT_MERGE_EPS };
    DiscreteDistribution::from_atoms(atoms, eps)
}

/// Exact distribution through the weight table of a symmetric polynomial:
/// Pr(f = v) = sum over weights w with g(w) = v of C(n,w) p^w (1-p)^{n-w}.
pub fn symmetric_distribution(
    sym: &SymmetricForm,
    spec: &BernoulliSpec,
) -> Result<DiscreteDistribution> {
    if spec.n != sym.n() {
        return Err(Error::DimensionMismatch {
            expected: sym.n(),
            got: spec.n,
        });
    }
    let n = sym.n();
    let pmf = binomial_pmf_table(n, spec.p);
    if sym.is_integer() {
        let mut by_value: BTreeMap<i64, f64> = BTreeMap::new();
        for w in 0..=n {
            let v = sym.weight_value_int(w).ok_or_else(|| {
                Error::InvalidParameter("weight value overflows i64".into())
            })?;
            *by_value.entry(v).or_insert(0.0) += pmf[w];
        }
        let atoms = by_value.into_iter().map(|(v, p)| (v as f64, p)).collect();
        DiscreteDistribution::from_atoms(atoms, 0.0)
    } else {
        let atoms = (0..=n).map(|w| (sym.weight_value(w), pmf[w])).collect();
        DiscreteDistribution::from_atoms(atoms, DEFAULT_MERGE_EPS)
    }
}

/// Connected components of variables under term co-occurrence. Variables
/// that appear in no term are omitted.
fn variable_components(f: &MultilinearPolynomial) -> Vec<Vec<u32>> {
    let n = f.n();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut root = x;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = x;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    let mut used = vec![false; n];
    for (m, _) in f.terms() {
        let vars = m.vars();
        for &v in vars {
            used[v as usize] = true;
        }
        for w in vars.windows(2) {
            let a = find(&mut parent, w[0]);
            let b = find(&mut parent, w[1]);
            parent[a as usize] = b;
        }
    }
    let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for v in 0..n as u32 {
        if used[v as usize] {
            let root = find(&mut parent, v);
            groups.entry(root).or_default().push(v);
        }
    }
    groups.into_values().collect()
}

/// The restriction of f to one component, reindexed densely, with the
/// constant term stripped (added back by the caller).
fn component_polynomial(f: &MultilinearPolynomial, comp: &[u32]) -> MultilinearPolynomial {
    let remap: HashMap<u32, u32> = comp
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let terms: Vec<(Vec<u32>, f64)> = f
        .terms()
        .filter(|(m, _)| !m.is_constant() && m.vars().iter().all(|v| remap.contains_key(v)))
        .map(|(m, c)| (m.vars().iter().map(|v| remap[v]).collect(), c))
        .collect();
    MultilinearPolynomial::new(comp.len(), terms).expect("reindexed component")
}

/// Exhaustive enumeration of one component (n <= 63). Returns raw atoms.
/// Assignments are split into prefix chunks; per-chunk tallies are exact
/// integer counts per (value, weight), so the merge is associative and
/// commutative and the result is independent of the chunking.
fn enumerate_component(
    f: &MultilinearPolynomial,
    p: f64,
    int_mode: bool,
) -> Result<Vec<(f64, f64)>> {
    let n = f.n();
    if n >= 64 {
        return Err(Error::CapExceeded { needed: n, cap: 63 });
    }
    let masks: Vec<(u64, f64)> = f
        .terms()
        .map(|(m, c)| (m.mask().expect("component fits in u64"), c))
        .collect();

    let total: u64 = 1 << n;
    let chunk_bits = 16u32.min(n as u32);
    let chunk_size: u64 = 1 << chunk_bits;
    let chunks: u64 = total >> chunk_bits;

    // Tally per (value key, weight). Integer mode keys by exact i64
    // value; float mode keys by the f64 bit pattern (evaluation order is
    // fixed, so equal term subsets give identical bits) and nearby values
    // are merged afterwards.
    let tally: HashMap<i64, Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut local: HashMap<i64, Vec<u64>> = HashMap::new();
            let base = chunk * chunk_size;
            for x in base..base + chunk_size {
                let key = if int_mode {
                    let mut v: i64 = 0;
                    for &(m, c) in &masks {
                        if x & m == m {
                            v += c as i64;
                        }
                    }
                    v
                } else {
                    let mut v: f64 = 0.0;
                    for &(m, c) in &masks {
                        if x & m == m {
                            v += c;
                        }
                    }
                    v.to_bits() as i64
                };
                let w = x.count_ones() as usize;
                local.entry(key).or_insert_with(|| vec![0u64; n + 1])[w] += 1;
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, counts) in b {
                let e = a.entry(k).or_insert_with(|| vec![0u64; n + 1]);
                for (i, c) in counts.into_iter().enumerate() {
                    e[i] += c;
                }
            }
            a
        });

    let q = 1.0 - p;
    let pw: Vec<f64> = (0..=n).map(|w| p.powi(w as i32)).collect();
    let qw: Vec<f64> = (0..=n).map(|w| q.powi(w as i32)).collect();
    let mut atoms: Vec<(f64, f64)> = tally
        .into_iter()
        .map(|(key, counts)| {
            let value = if int_mode {
                key as f64
            } else {
                f64::from_bits(key as u64)
            };
            let prob = kahan_sum(
                counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(w, &c)| c as f64 * pw[w] * qw[n - w]),
            );
            (value, prob)
        })
        .collect();
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    Ok(atoms)
}

/// Convolution of two atom lists (sum of independent variables).
fn convolve_atoms(a: &[(f64, f64)], b: &[(f64, f64)], int_mode: bool) -> Vec<(f64, f64)> {
    let mut map: HashMap<i64, (f64, f64)> = HashMap::with_capacity(a.len() + b.len());
    for &(va, pa) in a {
        for &(vb, pb) in b {
            let v = va + vb;
            let key = if int_mode {
                v as i64
            } else {
                v.to_bits() as i64
            };
            let e = map.entry(key).or_insert((v, 0.0));
            e.1 += pa * pb;
        }
    }
    let mut atoms: Vec<(f64, f64)> = map.into_values().collect();
    atoms.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite"));
    atoms
}
