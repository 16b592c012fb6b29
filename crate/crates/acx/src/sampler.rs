//! Monte Carlo estimation of point/interval probabilities, and the
//! instrumented random bit-flip process.
//!
//! All randomness flows through seedable ChaCha streams: sampling splits
//! into a fixed number of worker streams whose hit counts are summed in
//! worker order, so results are identical regardless of thread count.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::binomial_central_window;
use crate::error::{Error, Result};
use crate::poly::{BernoulliSpec, MultilinearPolynomial};

/// Number of independent RNG streams sampling is split across. Fixed so
/// that results do not depend on the executing thread count.
const WORKER_STREAMS: u64 = 16;

/// A seeded Monte Carlo estimate with a Wilson score interval and a
/// distribution-free Hoeffding interval at the same level.
#[derive(Clone, Debug, Serialize)]
pub struct MCEstimate {
    pub hits: u64,
    pub samples: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub hoeffding_lo: f64,
    pub hoeffding_hi: f64,
    pub level: f64,
    pub seed: u64,
}

/// Terms compiled to bit masks over u64 words for fast evaluation.
struct CompiledPoly {
    words: usize,
    terms: Vec<(Vec<u64>, f64)>,
}

impl CompiledPoly {
    fn new(f: &MultilinearPolynomial) -> Self {
        let words = f.n().div_ceil(64).max(1);
        let terms = f
            .terms()
            .map(|(m, c)| {
                let mut mask = vec![0u64; words];
                for &v in m.vars() {
                    mask[v as usize / 64] |= 1 << (v % 64);
                }
                (mask, c)
            })
            .collect();
        CompiledPoly { words, terms }
    }

    fn eval(&self, x: &[u64]) -> f64 {
        let mut sum = 0.0;
        'terms: for (mask, c) in &self.terms {
            for w in 0..self.words {
                if x[w] & mask[w] != mask[w] {
                    continue 'terms;
                }
            }
            sum += c;
        }
        sum
    }
}

fn sample_bits(rng: &mut ChaCha8Rng, n: usize, threshold: u128, out: &mut [u64]) {
    out.fill(0);
    for i in 0..n {
        if (rng.next_u64() as u128) < threshold {
            out[i / 64] |= 1 << (i % 64);
        }
    }
}

fn run_sampling<F>(
    f: &MultilinearPolynomial,
    spec: &BernoulliSpec,
    samples: u64,
    level: f64,
    seed: u64,
    hit: F,
) -> Result<MCEstimate>
where
    F: Fn(f64) -> bool + Sync,
{
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence level must lie in (0,1), got {level}"
        )));
    }
    if spec.n != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: spec.n,
        });
    }
    let compiled = CompiledPoly::new(f);
    let n = f.n();
    let threshold = (spec.p * 2f64.powi(64)) as u128;

    // Fixed split over worker streams; the last stream absorbs the
    // remainder. Per-stream counts are summed in stream order.
    let per = samples / WORKER_STREAMS;
    let hits: u64 = (0..WORKER_STREAMS)
        .into_par_iter()
        .map(|w| {
            let quota = if w == WORKER_STREAMS - 1 {
                samples - per * (WORKER_STREAMS - 1)
            } else {
                per
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w + 1);
            let mut x = vec![0u64; compiled.words];
            let mut local = 0u64;
            for _ in 0..quota {
                sample_bits(&mut rng, n, threshold, &mut x);
                if hit(compiled.eval(&x)) {
                    local += 1;
                }
            }
            local
        })
        .sum();

    let estimate = hits as f64 / samples as f64;
    let delta = 1.0 - level;
    let z = normal_quantile(1.0 - delta / 2.0);
    let (ci_lo, ci_hi) = wilson_interval(hits, samples, z);
    let eps = ((2.0 / delta).ln() / (2.0 * samples as f64)).sqrt();
    Ok(MCEstimate {
        hits,
        samples,
        estimate,
        ci_lo,
        ci_hi,
        hoeffding_lo: (estimate - eps).max(0.0),
        hoeffding_hi: (estimate + eps).min(1.0),
        level,
        seed,
    })
}

/// Estimates Pr(|f(xi) - x| <= eps) from seeded samples.
pub fn mc_point(
    f: &MultilinearPolynomial,
    spec: &BernoulliSpec,
    x: f64,
    eps: f64,
    samples: u64,
    level: f64,
    seed: u64,
) -> Result<MCEstimate> {
    run_sampling(f, spec, samples, level, seed, move |v| (v - x).abs() <= eps)
}

/// Estimates the probability that f(xi) lands in an interval with
/// configurable endpoint strictness.
#[allow(clippy::too_many_arguments)]
pub fn mc_interval(
    f: &MultilinearPolynomial,
    spec: &BernoulliSpec,
    lo: f64,
    hi: f64,
    lo_open: bool,
    hi_open: bool,
    samples: u64,
    level: f64,
    seed: u64,
) -> Result<MCEstimate> {
    run_sampling(f, spec, samples, level, seed, move |v| {
        let left = if lo_open { v > lo } else { v >= lo };
        let right = if hi_open { v < hi } else { v <= hi };
        left && right
    })
}

/// Wilson score interval for hits out of n at normal quantile z.
pub fn wilson_interval(hits: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let phat = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Inverse standard normal CDF (Acklam's rational approximation,
/// absolute error below 1.15e-9).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    let p_low = 0.02425;
    if p < p_low {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - p_low {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}

/// One run of the random bit-flip process: start from the all-zero
/// vector, flip bits to one in the order of a uniformly random
/// permutation, and record f along the trajectory.
#[derive(Clone, Debug, Serialize)]
pub struct ErdosProcessTrace {
    /// Flip order: position t holds the variable flipped at step t + 1.
    pub permutation: Vec<u32>,
    /// f(x^0), ..., f(x^n).
    pub values: Vec<f64>,
    /// Central binomial window [N1, N2] the count Y is restricted to.
    pub window: (usize, usize),
    pub target: f64,
    pub half_width: f64,
    /// Number of t in [N1, N2] with |f(x^t) - target| < half_width.
    pub y: u64,
}

impl ErdosProcessTrace {
    /// CSV rows: t, flipped index (empty at t = 0), f(x^t).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,flipped,value\n");
        out.push_str(&format!("0,,{}\n", self.values[0]));
        for (t, &i) in self.permutation.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", t + 1, i, self.values[t + 1]));
        }
        out
    }
}

/// Runs the flip process once. Values are maintained incrementally via
/// per-variable increments (only the terms touching the flipped variable
/// are visited per step).
pub fn erdos_process(
    f: &MultilinearPolynomial,
    spec: &BernoulliSpec,
    target: f64,
    half_width: f64,
    window_delta: f64,
    seed: u64,
) -> Result<ErdosProcessTrace> {
    if half_width <= 0.0 {
        return Err(Error::InvalidParameter(
            "process half-width must be positive".into(),
        ));
    }
    if spec.n != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: spec.n,
        });
    }
    let n = f.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut permutation: Vec<u32> = (0..n as u32).collect();
    // Fisher-Yates.
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        permutation.swap(i, j);
    }

    // terms_of[v] = indices of terms containing variable v.
    let terms: Vec<(Vec<u32>, f64)> =
        f.terms().map(|(m, c)| (m.vars().to_vec(), c)).collect();
    let mut terms_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, (vars, _)) in terms.iter().enumerate() {
        for &v in vars {
            terms_of[v as usize].push(idx);
        }
    }

    let mut bits = vec![false; n];
    let mut value = f.constant_coefficient();
    let mut values = Vec::with_capacity(n + 1);
    values.push(value);
    for &i in &permutation {
        let mut delta = 0.0;
        for &t in &terms_of[i as usize] {
            let (vars, c) = &terms[t];
            if vars.iter().all(|&v| v == i || bits[v as usize]) {
                delta += c;
            }
        }
        bits[i as usize] = true;
        value += delta;
        values.push(value);
    }

    let window = if n == 0 {
        (0, 0)
    } else {
        binomial_central_window(n, spec.p, window_delta)
    };
    let y = (window.0..=window.1)
        .filter(|&t| (values[t] - target).abs() < half_width)
        .count() as u64;
    Ok(ErdosProcessTrace {
        permutation,
        values,
        window,
        target,
        half_width,
        y,
    })
}
