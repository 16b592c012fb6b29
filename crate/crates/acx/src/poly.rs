//! Multilinear polynomials over {0,1}^n: representation, evaluation,
//! increments, restriction and symmetry detection.
//!
//! Polynomials are stored as a sparse map from monomials (sorted variable
//! index sets) to real coefficients. Over zero-one inputs every polynomial
//! has a canonical multilinear form since x_i^2 = x_i; repeated indices in
//! an input monomial are collapsed on construction.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A monomial: a set of variable indices, sorted and duplicate-free.
/// The empty set denotes the constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    vars: Vec<u32>,
}

impl Monomial {
    /// Builds a monomial from arbitrary indices, sorting and collapsing
    /// duplicates (x_i^2 = x_i).
    pub fn new(mut vars: Vec<u32>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        Monomial { vars }
    }

    pub fn constant() -> Self {
        Monomial { vars: Vec::new() }
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    /// Bitmask form, available when every index fits in a 64-bit word.
    pub fn mask(&self) -> Option<u64> {
        if self.vars.last().map_or(true, |&v| v < 64) {
            Some(self.vars.iter().fold(0u64, |m, &v| m | (1 << v)))
        } else {
            None
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.vars.cmp(&other.vars))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A zero-one assignment to all n variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// Assignment from the low n bits of a mask (bit i = variable i).
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Assignment {
            bits: (0..n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.bits[i] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Parameters of an i.i.d. Bernoulli vector in {0,1}^n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BernoulliSpec {
    pub n: usize,
    pub p: f64,
}

impl BernoulliSpec {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Bernoulli probability must lie in (0,1), got {p}"
            )));
        }
        Ok(BernoulliSpec { n, p })
    }
}

/// A sparse multilinear polynomial in n zero-one variables.
///
/// Invariants: every stored coefficient is nonzero, every index is < n,
/// monomials are unique.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearPolynomial {
    n: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl MultilinearPolynomial {
    /// Builds a polynomial, merging duplicate monomials and dropping zero
    /// coefficients. Repeated variables inside a monomial are collapsed.
    pub fn new<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut map: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (vars, coef) in terms {
            let mono = Monomial::new(vars);
            if let Some(&v) = mono.vars().last() {
                if v as usize >= n {
                    return Err(Error::IndexOutOfRange {
                        index: v as usize,
                        n,
                    });
                }
            }
            *map.entry(mono).or_insert(0.0) += coef;
        }
        map.retain(|_, c| *c != 0.0);
        Ok(MultilinearPolynomial { n, terms: map })
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(Monomial::constant(), c);
        }
        MultilinearPolynomial { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn constant_coefficient(&self) -> f64 {
        self.terms.get(&Monomial::constant()).copied().unwrap_or(0.0)
    }

    /// True when every coefficient is >= 0.
    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|&c| c >= 0.0)
    }

    /// All coefficients if they are integers exactly representable in i64.
    pub fn integer_coefficients(&self) -> Option<Vec<(Monomial, i64)>> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, &c) in &self.terms {
            if c.fract() != 0.0 || c.abs() >= 9.0e15 {
                return None;
            }
            out.push((m.clone(), c as i64));
        }
        Some(out)
    }

    /// Evaluates f at a full assignment.
    pub fn evaluate(&self, x: &Assignment) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut sum = 0.0;
        for (m, &c) in &self.terms {
            if m.vars().iter().all(|&v| x.bit(v as usize)) {
                sum += c;
            }
        }
        Ok(sum)
    }

    /// f with bit i set minus f with bit i cleared; independent of x's own
    /// bit i. Equals the sum of coefficients of terms containing i whose
    /// other variables are all one in x.
    pub fn delta_increment(&self, x: &Assignment, i: usize) -> Result<f64> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let i = i as u32;
        let mut sum = 0.0;
        for (m, &c) in &self.terms {
            if m.vars().contains(&i)
                && m.vars().iter().all(|&v| v == i || x.bit(v as usize))
            {
                sum += c;
            }
        }
        Ok(sum)
    }

    /// Substitutes fixed variables and re-indexes the remaining ones
    /// densely (in increasing original order). Degree never increases.
    pub fn restrict(&self, fixed: &BTreeMap<u32, bool>) -> MultilinearPolynomial {
        let mut remap: BTreeMap<u32, u32> = BTreeMap::new();
        let mut next = 0u32;
        for v in 0..self.n as u32 {
            if !fixed.contains_key(&v) {
                remap.insert(v, next);
                next += 1;
            }
        }
        let mut map: BTreeMap<Monomial, f64> = BTreeMap::new();
        'terms: for (m, &c) in &self.terms {
            let mut vars = Vec::with_capacity(m.degree());
            for &v in m.vars() {
                match fixed.get(&v) {
                    Some(false) => continue 'terms,
                    Some(true) => {}
                    None => vars.push(remap[&v]),
                }
            }
            let mono = Monomial::new(vars);
            *map.entry(mono).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        MultilinearPolynomial {
            n: next as usize,
            terms: map,
        }
    }

    /// If f is invariant under all variable permutations (each monomial
    /// size fully populated with one common coefficient, or absent),
    /// returns the compact symmetric form; otherwise None.
    pub fn detect_symmetric(&self) -> Option<SymmetricForm> {
        let d = self.degree();
        let mut by_degree = vec![0.0f64; d + 1];
        let mut counts = vec![0u128; d + 1];
        let mut firsts: Vec<Option<f64>> = vec![None; d + 1];
        for (m, &c) in &self.terms {
            let k = m.degree();
            counts[k] += 1;
            match firsts[k] {
                None => firsts[k] = Some(c),
                Some(f) if f == c => {}
                Some(_) => return None,
            }
        }
        for k in 0..=d {
            match firsts[k] {
                None => by_degree[k] = 0.0,
                Some(c) => {
                    let expect = binomial_u128(self.n as u64, k as u64)?;
                    if counts[k] != expect {
                        return None;
                    }
                    by_degree[k] = c;
                }
            }
        }
        Some(SymmetricForm::new(self.n, by_degree))
    }
}

/// C(n, k) in u128, None on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// A fully symmetric multilinear polynomial, stored by monomial size:
/// f = sum_k by_degree[k] * (sum of all size-k monomials).
///
/// Its value depends only on the weight of the assignment, which enables
/// exact distributions at any n through a weight table.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricForm {
    n: usize,
    by_degree: Vec<f64>,
}

impl SymmetricForm {
    pub fn new(n: usize, by_degree: Vec<f64>) -> Self {
        SymmetricForm { n, by_degree }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.by_degree
            .iter()
            .rposition(|&c| c != 0.0)
            .unwrap_or(0)
    }

    pub fn by_degree(&self) -> &[f64] {
        &self.by_degree
    }

    /// True when every per-degree coefficient is an integer in i64 range.
    pub fn is_integer(&self) -> bool {
        self.by_degree
            .iter()
            .all(|c| c.fract() == 0.0 && c.abs() < 9.0e15)
    }

    /// g(w) = value of f at any weight-w assignment = sum_k c_k * C(w, k).
    pub fn weight_value(&self, w: usize) -> f64 {
        let mut sum = 0.0;
        for (k, &c) in self.by_degree.iter().enumerate() {
            if c != 0.0 {
                sum += c * binomial_f64(w as u64, k as u64);
            }
        }
        sum
    }

    /// Exact integer g(w), when all coefficients are integers.
    pub fn weight_value_int(&self, w: usize) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        let mut sum: i128 = 0;
        for (k, &c) in self.by_degree.iter().enumerate() {
            if c != 0.0 {
                let b = binomial_u128(w as u64, k as u64)? as i128;
                sum += (c as i128) * b;
            }
        }
        i64::try_from(sum).ok()
    }

    /// The weight-function table g(0), ..., g(n).
    pub fn weight_table(&self) -> Vec<f64> {
        (0..=self.n).map(|w| self.weight_value(w)).collect()
    }

    /// Expands to an explicit sparse polynomial. Only sensible for small n.
    pub fn expand(&self) -> Result<MultilinearPolynomial> {
        let mut terms = Vec::new();
        for (k, &c) in self.by_degree.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mut combo: Vec<u32> = (0..k as u32).collect();
            loop {
                terms.push((combo.clone(), c));
                if !next_combination(&mut combo, self.n as u32) {
                    break;
                }
            }
        }
        MultilinearPolynomial::new(self.n, terms)
    }
}

/// C(n, k) as f64 via a multiplicative loop.
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Advances a sorted k-combination over {0, ..., n-1} to its lexicographic
/// successor. Returns false when the last combination was reached.
/// The empty combination has no successor.
pub fn next_combination(combo: &mut [u32], n: u32) -> bool {
    let k = combo.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) as u32 {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// On-disk polynomial format:
/// `{"n": int, "terms": [{"vars": [int...], "coef": number}...]}`.
#[derive(Serialize, Deserialize)]
pub struct PolynomialFile {
    pub n: usize,
    pub terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
pub struct TermFile {
    pub vars: Vec<u32>,
    pub coef: f64,
}

impl MultilinearPolynomial {
    pub fn from_file(file: &PolynomialFile) -> Result<Self> {
        MultilinearPolynomial::new(
            file.n,
            file.terms.iter().map(|t| (t.vars.clone(), t.coef)),
        )
    }

    pub fn to_file(&self) -> PolynomialFile {
        PolynomialFile {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| TermFile {
                    vars: m.vars().to_vec(),
                    coef: c,
                })
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: PolynomialFile = serde_json::from_str(s)
            .map_err(|e| Error::InvalidParameter(format!("polynomial JSON: {e}")))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }
}

/// The running example f = sum_i x_i - sum_{i<j} x_i x_j in compact
/// symmetric form: g(k) = k - k(k-1)/2.
pub fn linear_minus_pairs_symmetric(n: usize) -> SymmetricForm {
    SymmetricForm::new(n, vec![0.0, 1.0, -1.0])
}

/// The same polynomial with explicit terms, for small n.
pub fn linear_minus_pairs(n: usize) -> MultilinearPolynomial {
    let mut terms = Vec::new();
    for i in 0..n as u32 {
        terms.push((vec![i], 1.0));
        for j in i + 1..n as u32 {
            terms.push((vec![i, j], -1.0));
        }
    }
    MultilinearPolynomial::new(n, terms).expect("valid construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(n: usize, terms: &[(&[u32], f64)]) -> MultilinearPolynomial {
        MultilinearPolynomial::new(n, terms.iter().map(|(v, c)| (v.to_vec(), *c)))
            .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f = poly(2, &[(&[0], 1.0), (&[1], 1.0)]);
        assert_eq!(f.evaluate(&Assignment::new(vec![true, true])).unwrap(), 2.0);

        let c = MultilinearPolynomial::constant(3, 3.0);
        assert_eq!(
            c.evaluate(&Assignment::new(vec![false, true, false])).unwrap(),
            3.0
        );

        let f = poly(3, &[(&[0, 1], 1.0), (&[2], -2.0)]);
        assert_eq!(
            f.evaluate(&Assignment::new(vec![true, true, true])).unwrap(),
            -1.0
        );
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let f = poly(2, &[(&[0], 1.0)]);
        assert!(f.evaluate(&Assignment::new(vec![true])).is_err());
    }

    #[test]
    fn delta_increment_examples() {
        let f = poly(2, &[(&[0], 1.0), (&[1], 1.0)]);
        let x = Assignment::new(vec![false, false]);
        assert_eq!(f.delta_increment(&x, 0).unwrap(), 1.0);

        let g = poly(2, &[(&[0, 1], 1.0)]);
        assert_eq!(
            g.delta_increment(&Assignment::new(vec![false, true]), 0).unwrap(),
            1.0
        );
        assert_eq!(
            g.delta_increment(&Assignment::new(vec![false, false]), 0).unwrap(),
            0.0
        );
        assert!(g.delta_increment(&Assignment::new(vec![false, false]), 2).is_err());
    }

    #[test]
    fn delta_increment_linear_minus_pairs() {
        // Brute-force oracle: f(set) - f(cleared) at n=3, x=(1,1,0), i=2.
        let f = linear_minus_pairs(3);
        let mut hi = Assignment::new(vec![true, true, true]);
        let mut lo = Assignment::new(vec![true, true, false]);
        let expect = f.evaluate(&hi).unwrap() - f.evaluate(&lo).unwrap();
        assert_eq!(expect, -1.0);
        hi.set(2, true);
        lo.set(2, false);
        assert_eq!(
            f.delta_increment(&Assignment::new(vec![true, true, false]), 2).unwrap(),
            expect
        );
    }

    #[test]
    fn delta_matches_two_evaluations_exhaustive() {
        // n <= 12 per the module invariant; a few structured cases here.
        for f in [
            linear_minus_pairs(5),
            poly(4, &[(&[0, 1, 2], 2.0), (&[1, 3], -1.5), (&[2], 0.25)]),
        ] {
            let n = f.n();
            for mask in 0u64..1 << n {
                let x = Assignment::from_mask(mask, n);
                for i in 0..n {
                    let mut hi = x.clone();
                    hi.set(i, true);
                    let mut lo = x.clone();
                    lo.set(i, false);
                    let direct = f.evaluate(&hi).unwrap() - f.evaluate(&lo).unwrap();
                    assert_eq!(f.delta_increment(&x, i).unwrap(), direct);
                }
            }
        }
    }

    #[test]
    fn restrict_examples() {
        let f = poly(3, &[(&[0, 1], 1.0), (&[2], 1.0)]);
        let mut fixed = BTreeMap::new();
        fixed.insert(2, true);
        let g = f.restrict(&fixed);
        assert_eq!(g.n(), 2);
        assert_eq!(g.constant_coefficient(), 1.0);
        assert_eq!(
            g.evaluate(&Assignment::new(vec![true, true])).unwrap(),
            2.0
        );

        let h = poly(2, &[(&[0, 1], 1.0)]);
        let mut fixed = BTreeMap::new();
        fixed.insert(0, false);
        let z = h.restrict(&fixed);
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn restrict_commutes_with_merge() {
        // evaluate(restrict(f, fixed), y) == evaluate(f, merge(fixed, y)),
        // exhaustive over assignments for a structured f.
        let f = poly(
            6,
            &[
                (&[0, 3], 1.5),
                (&[1, 2, 4], -2.0),
                (&[5], 3.0),
                (&[0, 1, 2, 3], 0.5),
                (&[], -1.0),
            ],
        );
        for fix_mask in 0u64..1 << 6 {
            for fix_vals in 0u64..1 << 6 {
                let mut fixed = BTreeMap::new();
                for i in 0..6u32 {
                    if fix_mask >> i & 1 == 1 {
                        fixed.insert(i, fix_vals >> i & 1 == 1);
                    }
                }
                let g = f.restrict(&fixed);
                let free: Vec<u32> =
                    (0..6u32).filter(|i| !fixed.contains_key(i)).collect();
                for y_mask in 0u64..1 << free.len() {
                    let y = Assignment::from_mask(y_mask, free.len());
                    let mut merged = Assignment::new(vec![false; 6]);
                    for (i, &v) in free.iter().enumerate() {
                        merged.set(v as usize, y.bit(i));
                    }
                    for (&v, &b) in &fixed {
                        merged.set(v as usize, b);
                    }
                    assert_eq!(
                        g.evaluate(&y).unwrap(),
                        f.evaluate(&merged).unwrap()
                    );
                }
                assert!(g.degree() <= f.degree());
            }
        }
    }

    #[test]
    fn detect_symmetric_examples() {
        let f = linear_minus_pairs(4);
        let sym = f.detect_symmetric().expect("symmetric");
        let table = sym.weight_table();
        assert_eq!(table, vec![0.0, 1.0, 1.0, 0.0, -2.0]);
        // Oracle: evaluate at one representative per weight.
        for w in 0..=4 {
            let x = Assignment::from_mask((1u64 << w) - 1, 4);
            assert_eq!(f.evaluate(&x).unwrap(), table[w]);
        }

        let g = poly(2, &[(&[0], 1.0), (&[1], -1.0)]);
        assert!(g.detect_symmetric().is_none());

        let c = MultilinearPolynomial::constant(2, 5.0);
        let sym = c.detect_symmetric().expect("constant is symmetric");
        assert_eq!(sym.weight_table(), vec![5.0, 5.0, 5.0]);
    }

    #[test]
    fn detect_symmetric_iff_swap_invariant() {
        // Compare against an explicit transposition check on n <= 6.
        let cases = [
            poly(4, &[(&[0], 1.0), (&[1], 1.0), (&[2], 1.0), (&[3], 1.0)]),
            poly(4, &[(&[0], 1.0), (&[1], 1.0), (&[2], 1.0)]),
            linear_minus_pairs(6),
            poly(3, &[(&[0, 1], 1.0), (&[0, 2], 1.0), (&[1, 2], 2.0)]),
        ];
        for f in cases {
            let n = f.n();
            let mut invariant = true;
            'outer: for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    let swapped: Vec<(Vec<u32>, f64)> = f
                        .terms()
                        .map(|(m, c)| {
                            let vars = m
                                .vars()
                                .iter()
                                .map(|&v| {
                                    if v == a {
                                        b
                                    } else if v == b {
                                        a
                                    } else {
                                        v
                                    }
                                })
                                .collect();
                            (vars, c)
                        })
                        .collect();
                    let g = MultilinearPolynomial::new(n, swapped).unwrap();
                    if g != f {
                        invariant = false;
                        break 'outer;
                    }
                }
            }
            assert_eq!(f.detect_symmetric().is_some(), invariant);
        }
    }

    #[test]
    fn normalizes_repeated_variables() {
        // x_0^2 enters as vars [0, 0] and collapses to x_0.
        let f = poly(1, &[(&[0, 0], 2.0), (&[0], 1.0)]);
        assert_eq!(f.num_terms(), 1);
        assert_eq!(f.evaluate(&Assignment::new(vec![true])).unwrap(), 3.0);
    }

    #[test]
    fn json_round_trip() {
        let f = linear_minus_pairs(3);
        let g = MultilinearPolynomial::from_json(&f.to_json()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn combination_iterator_covers_all() {
        let mut combo = vec![0u32, 1, 2];
        let mut count = 1;
        while next_combination(&mut combo, 6) {
            count += 1;
        }
        assert_eq!(count, 20); // C(6,3)
    }
}
