//! End-to-end acceptance gate: ten independently checked criteria, one
//! printed pass/fail line each (visible with `--nocapture`). Every
//! tolerance is pinned in the assertion it guards.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use acx::bounds::{
    self, check_bessel, check_main_term, check_nonneg_poisson, check_rank_trend,
    check_weak_bound, random_nonneg_poly, random_p, random_signed_poly, tau, tau_envelope,
};
use acx::dist::{
    binomial_modal, exact_distribution, symmetric_distribution, DEFAULT_ENUM_CAP,
};
use acx::graph::{
    count_cliques, count_copies, delta_edge, min_degree_subgraph, sample_gnp, CopyMode,
    GraphInstance,
};
use acx::poly::{linear_minus_pairs, BernoulliSpec, MultilinearPolynomial};
use acx::sampler::mc_point;

fn report(criterion: usize, what: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!(
        "criterion {criterion}: PASS — {what} ({elapsed:.2?} of {budget:.2?} budget)"
    );
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its {budget:?} budget: {elapsed:?}"
    );
}

#[test]
fn criterion_01_exact_inequality_sweep() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..500 {
        let f = random_nonneg_poly(&mut rng, 16, 4);
        let p = random_p(&mut rng, false);
        let spec = BernoulliSpec::new(f.n(), p).unwrap();
        let a = check_nonneg_poisson(&f, &spec, DEFAULT_ENUM_CAP);
        assert!(!a.is_violated(), "point-mass bound violated: {a:?}");
        let b = check_weak_bound(&f, &spec, DEFAULT_ENUM_CAP);
        assert!(!b.is_violated(), "weak bound violated: {b:?}");
    }
    for _ in 0..500 {
        let f = random_signed_poly(&mut rng, 14, 4);
        let p = random_p(&mut rng, true);
        let spec = BernoulliSpec::new(f.n(), p).unwrap();
        let b = check_weak_bound(&f, &spec, DEFAULT_ENUM_CAP);
        assert!(!b.is_violated(), "weak bound violated: {b:?}");
        let a = check_nonneg_poisson(&f, &spec, DEFAULT_ENUM_CAP);
        assert!(!a.is_violated(), "point-mass bound violated: {a:?}");
    }
    report(
        1,
        "1000 random polynomials, zero exact-bound violations at 1e-12",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_02_tau_limit_and_envelope() {
    let started = Instant::now();
    assert!((tau(1e-4) - (-1.0f64).exp()).abs() <= 1e-3);
    for i in 1..=10_000 {
        let p = i as f64 / 10_001.0;
        assert!(tau(p) <= tau_envelope(p) + 1e-12, "p={p}");
    }
    report(
        2,
        "tau(1e-4) near 1/e; tau below its envelope on a 10^4 grid",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_03_counterexample_value() {
    let started = Instant::now();

    // Large n through the weight table.
    let n = 10_000;
    let spec = BernoulliSpec::new(n, 1.0 / n as f64).unwrap();
    let sym = bounds::counterexample_symmetric(n);
    let d = symmetric_distribution(&sym, &spec).unwrap();
    let pr1 = d.point_probability(1.0, 0.0);
    let limit = 1.5 * (-1.0f64).exp();
    assert!(
        (pr1 - limit).abs() <= 2e-3,
        "Pr(f=1) = {pr1}, limit {limit}"
    );

    // n = 20: weight table against full 2^20 enumeration, atom for atom.
    let n = 20;
    let spec = BernoulliSpec::new(n, 1.0 / n as f64).unwrap();
    let table = symmetric_distribution(&bounds::counterexample_symmetric(n), &spec).unwrap();
    let brute = exact_distribution(&linear_minus_pairs(n), &spec, n).unwrap();
    assert_eq!(table.atoms().len(), brute.atoms().len());
    for (a, b) in table.atoms().iter().zip(brute.atoms()) {
        assert_eq!(a.0, b.0, "value mismatch");
        assert!((a.1 - b.1).abs() <= 1e-12, "prob mismatch at {}", a.0);
    }

    report(
        3,
        "quadratic counterexample hits 3/(2e); weight table matches enumeration",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_04_bessel_extremal() {
    let started = Instant::now();
    let rep = check_bessel(1.0, 2000).unwrap();
    assert!(
        (rep.lhs - rep.rhs).abs() <= 5e-3,
        "Pr(X=0) = {} vs limit {}",
        rep.lhs,
        rep.rhs
    );
    for i in 0..=40 {
        let lambda = i as f64 / 2.0;
        let s = bounds::bessel_i0_series(lambda);
        let q = bounds::bessel_i0_quadrature(lambda);
        assert!((s - q).abs() <= 1e-10 * s.max(1.0), "lambda={lambda}");
    }
    report(
        4,
        "balanced pm-one form near exp(-1) I0(1); series/quadrature to 1e-10",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_05_main_term_tightness() {
    let started = Instant::now();
    let rep = check_main_term(400, 0.5, 0.4).unwrap();
    let modal = binomial_modal(400, 0.5);
    assert!(
        (rep.lhs - modal).abs() <= 1e-12,
        "window mass {} vs modal {}",
        rep.lhs,
        modal
    );
    report(
        5,
        "linear window mass equals the modal binomial probability to 1e-12",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_06_rank_trend_constant() {
    let started = Instant::now();
    let mut constants = Vec::new();
    for r in [8usize, 16, 32, 64] {
        let rep = check_rank_trend(r, 2, 0.5, DEFAULT_ENUM_CAP).unwrap();
        constants.push(rep.lhs * (r as f64).sqrt());
    }
    let max = constants.iter().cloned().fold(f64::MIN, f64::max);
    let min = constants.iter().cloned().fold(f64::MAX, f64::min);
    assert!(
        max / min <= 2.0,
        "implied constants spread beyond factor 2: {constants:?}"
    );
    report(
        6,
        "width-1 mass times sqrt(r) stays within a factor 2 over r in 8..64",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_07_graph_identities() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    use rand::Rng;
    for trial in 0..200u64 {
        let n = rng.gen_range(5..=12usize);
        let p = rng.gen_range(0.2..0.8);
        let g = sample_gnp(n, p, 9000 + trial).unwrap();

        // Clique decomposition at a random vertex for each h.
        let v = rng.gen_range(0..n as u32);
        for h in 2..=4usize {
            let whole = count_cliques(&g, h);
            let without = count_cliques(&g.without_vertex(v), h);
            let through = count_cliques(&g.induced(&g.neighbours(v)), h - 1);
            assert_eq!(whole, without + through, "n={n} h={h} v={v}");
        }

        // delta_edge equals the labelled-copy difference across the flip.
        let u = rng.gen_range(0..n as u32);
        let w = (u + 1 + rng.gen_range(0..n as u32 - 1)) % n as u32;
        let h = rng.gen_range(2..=4usize);
        let pattern = GraphInstance::complete(h);
        let mut plus = g.edges().to_vec();
        plus.push(vec![u.min(w), u.max(w)]);
        let g_plus = GraphInstance::new(n, 2, plus).unwrap();
        let minus: Vec<Vec<u32>> = g
            .edges()
            .iter()
            .filter(|e| e.as_slice() != [u.min(w), u.max(w)])
            .cloned()
            .collect();
        let g_minus = GraphInstance::new(n, 2, minus).unwrap();
        let diff = count_copies(&pattern, &g_plus, CopyMode::Labelled, 8).unwrap()
            - count_copies(&pattern, &g_minus, CopyMode::Labelled, 8).unwrap();
        assert_eq!(delta_edge(&g, &pattern, u, w).unwrap(), diff);
    }
    report(
        7,
        "clique decomposition and edge-flip increments agree on 200 graphs",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_08_degree_peeling() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    use rand::Rng;
    for _ in 0..200 {
        let r = rng.gen_range(2..=3usize);
        let n = rng.gen_range(r + 1..=40usize);
        let m = rng.gen_range(0..=3 * n);
        let edges: Vec<Vec<u32>> = (0..m)
            .map(|_| {
                let mut pool: Vec<u32> = (0..n as u32).collect();
                for i in 0..r {
                    let j = rng.gen_range(i..n);
                    pool.swap(i, j);
                }
                pool.truncate(r);
                pool
            })
            .collect();
        let g = GraphInstance::new(n, r, edges).unwrap();
        let threshold = g.average_degree() / r as f64;
        let survivors = min_degree_subgraph(&g, threshold);
        assert!(!survivors.is_empty(), "peeling emptied n={n} r={r} m={m}");
        // Verify the induced degree of every survivor.
        let alive: std::collections::HashSet<u32> = survivors.iter().copied().collect();
        for &v in &survivors {
            let deg = g
                .edges()
                .iter()
                .filter(|e| e.contains(&v) && e.iter().all(|x| alive.contains(x)))
                .count() as f64;
            assert!(deg >= threshold, "vertex {v} degree {deg} < {threshold}");
        }
    }
    report(
        8,
        "peeling at (average degree)/r leaves a nonempty verified core, 200 hypergraphs",
        started,
        Duration::from_secs(30),
    );
}

/// Fixed single-component instance on 18 variables used for the Monte
/// Carlo coverage check.
fn coverage_instance() -> MultilinearPolynomial {
    let n = 18;
    let mut terms: Vec<(Vec<u32>, f64)> = (0..n as u32).map(|i| (vec![i], 1.0)).collect();
    for i in 0..n as u32 - 1 {
        terms.push((vec![i, i + 1], -1.0));
    }
    MultilinearPolynomial::new(n, terms).unwrap()
}

#[test]
fn criterion_09_mc_covers_exact() {
    let started = Instant::now();
    let f = coverage_instance();
    let spec = BernoulliSpec::new(18, 0.3).unwrap();
    let dist = exact_distribution(&f, &spec, DEFAULT_ENUM_CAP).unwrap();
    let (&(target, exact), _) = dist
        .atoms()
        .iter()
        .map(|a| (a, a.1))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();

    let mut covered = 0u32;
    for seed in 0..1000u64 {
        let est = mc_point(&f, &spec, target, 0.0, 1_000_000, 0.99, seed).unwrap();
        if est.ci_lo <= exact && exact <= est.ci_hi {
            covered += 1;
        }
    }
    assert!(
        covered >= 985,
        "99% intervals covered the exact value only {covered}/1000 times"
    );
    report(
        9,
        "million-sample 99% intervals cover the exact value in >= 985/1000 trials",
        started,
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_10_cli_reproducibility() {
    let started = Instant::now();
    let bin = env!("CARGO_BIN_EXE_acx");
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "dist", "--extremal", "counterexample", "--n", "1000", "--p", "0.001", "--t", "0",
            "--t", "1", "--format", "csv",
        ],
        vec![
            "dist", "--extremal", "matching", "--r", "4", "--d", "2", "--p", "0.5", "--mc",
            "--samples", "20000", "--seed", "5", "--format", "json",
        ],
        vec!["graph", "sample", "--gnp", "30,0.4", "--seed", "9"],
        vec![
            "graph", "dispersed", "--gnp", "12,0.5", "--c", "0.25", "--h", "3", "--exact",
            "--format", "csv",
        ],
        vec![
            "process", "--extremal", "linear", "--n", "50", "--p", "0.5", "--target", "25",
            "--seed", "3", "--format", "csv",
        ],
        vec![
            "verify", "--theorem", "weak", "--random", "20", "--nmax", "10", "--seed", "5",
            "--format", "csv",
        ],
        vec![
            "rank", "--extremal", "matching", "--r", "5", "--d", "3", "--exact",
        ],
    ];
    for args in &invocations {
        let run = |threads: &str| {
            let out = std::process::Command::new(bin)
                .args(args)
                .env("ACX_THREADS", threads)
                .output()
                .expect("binary runs");
            assert!(
                out.status.success(),
                "{args:?} failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            out.stdout
        };
        let first = run("1");
        let second = run("4");
        assert_eq!(first, second, "outputs differ for {args:?}");
        assert!(!first.is_empty(), "no output for {args:?}");
    }
    report(
        10,
        "repeated CLI runs with identical config and seed are byte-identical",
        started,
        Duration::from_secs(120),
    );
}
