//! `acx` command line: exact/sampled distributions, concentration
//! functions, rank certificates, bound verification, and graph
//! statistics. All randomness is seeded; same config + seed gives
//! byte-identical output. Exit codes: 0 ok, 1 exact-bound violation,
//! 2 usage or cap error.

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use acx::bounds::{self, BoundReport};
use acx::dist::{self, DEFAULT_ENUM_CAP};
use acx::error::Error;
use acx::graph::{self, CopyMode, DispersednessMode, GraphInstance, SubsetMode};
use acx::poly::{BernoulliSpec, MultilinearPolynomial};
use acx::rank::{self, RankMode};
use acx::sampler;

#[derive(Parser)]
#[command(name = "acx", version, about = "Anti-concentration toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct PolySource {
    /// Polynomial JSON file ({"n": ..., "terms": [{"vars": [...], "coef": ...}]}).
    #[arg(long)]
    poly: Option<String>,
    /// Named extremal generator: matching, power-sum, counterexample,
    /// linear, pm-one.
    #[arg(long)]
    extremal: Option<String>,
    /// Size parameter n for --extremal.
    #[arg(long)]
    n: Option<usize>,
    /// Block count r for --extremal matching.
    #[arg(long)]
    r: Option<usize>,
    /// Degree d for --extremal matching / power-sum.
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact (or sampled) distribution of f(xi) plus requested Q_X(t).
    Dist {
        #[command(flatten)]
        source: PolySource,
        #[arg(long)]
        p: f64,
        /// Interval widths t for the concentration function (repeatable).
        #[arg(long = "t")]
        t: Vec<f64>,
        /// Enumeration cap on the largest co-occurrence component.
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: usize,
        /// Fall back to a sampled histogram instead of exact enumeration.
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Concentration function Q_X(t) only.
    Qfunc {
        #[command(flatten)]
        source: PolySource,
        #[arg(long)]
        p: f64,
        #[arg(long = "t", required = true)]
        t: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Rank certificate via hypergraph matching.
    Rank {
        #[command(flatten)]
        source: PolySource,
        /// mnv (degree-d monomials only) or nonuniform (all sizes).
        #[arg(long, default_value = "nonuniform")]
        mode: String,
        /// Coefficient magnitude threshold for hyperedges.
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        /// Request a proven-maximum matching (falls back when too large).
        #[arg(long)]
        exact: bool,
        /// Edge-count cap for the exact branch-and-bound.
        #[arg(long, default_value_t = 60)]
        edge_cap: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Verify a bound; exit 1 if an exact bound reports "violated".
    Verify {
        /// Bound id: nonneg-poisson, weak, main-term, rank-trend,
        /// bessel, edge-clique, edge-uniform, clique-spread, copy-spread.
        #[arg(long)]
        theorem: String,
        #[command(flatten)]
        source: PolySource,
        /// Run against this many random instances instead of one.
        #[arg(long)]
        random: Option<usize>,
        /// Max variable count for random instances.
        #[arg(long, default_value_t = 16)]
        nmax: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        /// Graph JSON input for graph-based bounds.
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0.99)]
        level: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Graph sampling and statistics.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
    /// One-bit-at-a-time flip process trace for f(xi).
    Process {
        #[command(flatten)]
        source: PolySource,
        #[arg(long)]
        p: f64,
        /// Target value whose window is tracked.
        #[arg(long)]
        target: f64,
        /// Half-width s of the tracked window around the target.
        #[arg(long, default_value_t = 0.4)]
        s: f64,
        /// Tail mass delta for the central weight window (default 1/sqrt(n)).
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Map max point probability against p (and tau/envelope) for an instance.
    Sweep {
        #[command(flatten)]
        source: PolySource,
        #[arg(long, default_value_t = 0.01)]
        pmin: f64,
        #[arg(long, default_value_t = 0.5)]
        pmax: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Sample G(n,p) and write it as graph JSON.
    Sample {
        /// "n,p" pair, e.g. 50,0.5.
        #[arg(long)]
        gnp: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Clique count of one graph, or a histogram over sampled graphs.
    Cliques {
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        gnp: Option<String>,
        #[arg(long)]
        h: usize,
        /// Number of sampled graphs (with --gnp).
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Copies of a small pattern graph in a host graph.
    Copies {
        #[arg(long)]
        input: String,
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value = "unlabelled")]
        mode: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Induced edge-count statistic of random vertex subsets.
    Edgestat {
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        gnp: Option<String>,
        #[arg(long)]
        k: usize,
        /// uniform (k-subset) or bernoulli (inclusion probability k/n).
        #[arg(long, default_value = "uniform")]
        mode: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// (c,q,h)-dispersedness check (exact for n <= 18, else sampled).
    Dispersed {
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        gnp: Option<String>,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Iterated low-degree peeling; threshold accepts numbers or avg/<x>.
    Mindeg {
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "avg/2")]
        threshold: String,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    configure_threads();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints its own help/version through this path.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Honors ACX_THREADS as a cap on the global worker pool.
fn configure_threads() {
    if let Ok(v) = std::env::var("ACX_THREADS") {
        if let Ok(t) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build_global();
        }
    }
}

fn emit(output: &OutputOpts, text: String) -> Result<(), Error> {
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidParameter(format!("cannot write output: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_poly(source: &PolySource) -> Result<MultilinearPolynomial, Error> {
    match (&source.poly, &source.extremal) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidParameter(format!("cannot read {path}: {e}")))?;
            MultilinearPolynomial::from_json(&text)
        }
        (None, Some(name)) => build_extremal(name, source),
        _ => Err(Error::InvalidParameter(
            "provide exactly one of --poly or --extremal".into(),
        )),
    }
}

fn build_extremal(name: &str, source: &PolySource) -> Result<MultilinearPolynomial, Error> {
    let need_n = || {
        source
            .n
            .ok_or_else(|| Error::InvalidParameter(format!("--extremal {name} needs --n")))
    };
    match name {
        "matching" => {
            let r = source
                .r
                .ok_or_else(|| Error::InvalidParameter("matching needs --r".into()))?;
            let d = source.d.unwrap_or(2);
            bounds::matching_polynomial(r, d)
        }
        "power-sum" => bounds::power_sum(need_n()?, source.d.unwrap_or(2)),
        "counterexample" => {
            let n = need_n()?;
            if n > 64 {
                // Large n: expandable only through the symmetric form.
                bounds::counterexample_symmetric(n).expand()
            } else {
                Ok(bounds::counterexample(n))
            }
        }
        "linear" => MultilinearPolynomial::new(
            need_n()?,
            (0..need_n()? as u32).map(|i| (vec![i], 1.0)),
        ),
        "pm-one" => bounds::pm_one_linear(need_n()?),
        other => Err(Error::InvalidParameter(format!(
            "unknown extremal generator '{other}'"
        ))),
    }
}

/// Distribution for a source, preferring the compact symmetric route
/// for named symmetric extremals at large n.
fn source_distribution(
    source: &PolySource,
    p: f64,
    cap: usize,
) -> Result<dist::DiscreteDistribution, Error> {
    if let Some(name) = &source.extremal {
        if name == "counterexample" {
            let n = source
                .n
                .ok_or_else(|| Error::InvalidParameter("counterexample needs --n".into()))?;
            let spec = BernoulliSpec::new(n, p)?;
            return dist::symmetric_distribution(&bounds::counterexample_symmetric(n), &spec);
        }
        if name == "linear" {
            let n = source
                .n
                .ok_or_else(|| Error::InvalidParameter("linear needs --n".into()))?;
            let spec = BernoulliSpec::new(n, p)?;
            return dist::symmetric_distribution(
                &acx::poly::SymmetricForm::new(n, vec![0.0, 1.0]),
                &spec,
            );
        }
    }
    let f = load_poly(source)?;
    let spec = BernoulliSpec::new(f.n(), p)?;
    dist::exact_distribution(&f, &spec, cap)
}

#[derive(Serialize)]
struct QRow {
    t: f64,
    q: f64,
    at: f64,
}

fn q_rows(d: &dist::DiscreteDistribution, ts: &[f64]) -> Vec<QRow> {
    ts.iter()
        .map(|&t| {
            let (q, at) = d.concentration_function(t);
            QRow { t, q, at }
        })
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Dist {
            source,
            p,
            t,
            cap,
            mc,
            samples,
            seed,
            output,
        } => {
            if mc {
                let f = load_poly(&source)?;
                let spec = BernoulliSpec::new(f.n(), p)?;
                let hist = mc_histogram(&f, &spec, samples, seed)?;
                let text = match output.format {
                    Format::Json => serde_json::to_string_pretty(&hist).expect("serializable"),
                    Format::Csv => {
                        let mut s = String::from("value,count,frequency\n");
                        for row in &hist.rows {
                            s.push_str(&format!(
                                "{},{},{}\n",
                                row.value, row.count, row.frequency
                            ));
                        }
                        s
                    }
                };
                emit(&output, text)?;
                return Ok(ExitCode::SUCCESS);
            }
            let d = source_distribution(&source, p, cap).map_err(|e| match e {
                Error::CapExceeded { needed, cap } => Error::InvalidParameter(format!(
                    "component of {needed} variables exceeds the enumeration cap {cap}; \
                     rerun with --mc for a sampled histogram or raise --cap"
                )),
                other => other,
            })?;
            let q = q_rows(&d, &t);
            let text = match output.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        distribution: dist::DistributionExport,
                        q: Vec<QRow>,
                    }
                    serde_json::to_string_pretty(&Out {
                        distribution: d.to_export(),
                        q,
                    })
                    .expect("serializable")
                }
                Format::Csv => {
                    let mut s = d.to_csv();
                    if !q.is_empty() {
                        s.push_str("\nt,q,at\n");
                        for row in &q {
                            s.push_str(&format!("{},{},{}\n", row.t, row.q, row.at));
                        }
                    }
                    s
                }
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Qfunc {
            source,
            p,
            t,
            cap,
            output,
        } => {
            let d = source_distribution(&source, p, cap)?;
            let q = q_rows(&d, &t);
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&q).expect("serializable"),
                Format::Csv => {
                    let mut s = String::from("t,q,at\n");
                    for row in &q {
                        s.push_str(&format!("{},{},{}\n", row.t, row.q, row.at));
                    }
                    s
                }
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Rank {
            source,
            mode,
            threshold,
            exact,
            edge_cap,
            output,
        } => {
            let f = load_poly(&source)?;
            let mode = match mode.as_str() {
                "mnv" => RankMode::MnvDegreeD,
                "nonuniform" => RankMode::NonUniform,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown rank mode '{other}' (use mnv or nonuniform)"
                    )))
                }
            };
            let h = rank::build_hypergraph(&f, mode, threshold)?;
            let cert = if exact {
                match rank::exact_matching(&h, edge_cap) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("warning: {e}; falling back to greedy matching");
                        rank::greedy_matching(&h)
                    }
                }
            } else {
                rank::greedy_matching(&h)
            };
            #[derive(Serialize)]
            struct Out {
                edges: usize,
                size: usize,
                exact: bool,
                matching: Vec<Vec<u32>>,
            }
            let out = Out {
                edges: h.edges().len(),
                size: cert.size(),
                exact: cert.exact,
                matching: cert.matching,
            };
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&out).expect("serializable"),
                Format::Csv => format!("edges,size,exact\n{},{},{}\n", out.edges, out.size, out.exact),
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify {
            theorem,
            source,
            random,
            nmax,
            p,
            s,
            lambda,
            k,
            h,
            input,
            cap,
            samples,
            level,
            seed,
            output,
        } => {
            let reports = run_verify(
                &theorem, &source, random, nmax, p, s, lambda, k, h, &input, cap, samples,
                level, seed,
            )?;
            let violated = reports.iter().any(BoundReport::is_violated);
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&reports).expect("serializable"),
                Format::Csv => {
                    let mut out = String::from(BoundReport::csv_header());
                    out.push('\n');
                    for r in &reports {
                        out.push_str(&r.to_csv_row());
                        out.push('\n');
                    }
                    out
                }
            };
            emit(&output, text)?;
            Ok(if violated {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }

        Command::Graph { command } => run_graph(command),

        Command::Process {
            source,
            p,
            target,
            s,
            delta,
            seed,
            output,
        } => {
            let f = load_poly(&source)?;
            let spec = BernoulliSpec::new(f.n(), p)?;
            let delta = delta.unwrap_or(1.0 / (f.n().max(1) as f64).sqrt());
            let trace = sampler::erdos_process(&f, &spec, target, s, delta, seed)?;
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&trace).expect("serializable"),
                Format::Csv => trace.to_csv(),
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Sweep {
            source,
            pmin,
            pmax,
            steps,
            cap,
            output,
        } => {
            if !(pmin > 0.0 && pmax < 1.0 && pmin <= pmax) || steps == 0 {
                return Err(Error::InvalidParameter(
                    "need 0 < pmin <= pmax < 1 and steps >= 1".into(),
                ));
            }
            #[derive(Serialize)]
            struct Row {
                n: usize,
                p: f64,
                max_point_prob: f64,
                tau: f64,
                envelope: f64,
            }
            let mut rows = Vec::new();
            for i in 0..steps {
                let frac = if steps == 1 {
                    0.0
                } else {
                    i as f64 / (steps - 1) as f64
                };
                let p = pmin + frac * (pmax - pmin);
                let d = source_distribution(&source, p, cap)?;
                let max_point_prob = d
                    .atoms()
                    .iter()
                    .map(|&(_, pr)| pr)
                    .fold(0.0f64, f64::max);
                rows.push(Row {
                    n: d.atoms().len(),
                    p,
                    max_point_prob,
                    tau: bounds::tau(p),
                    envelope: bounds::tau_envelope(p),
                });
            }
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&rows).expect("serializable"),
                Format::Csv => {
                    let mut s = String::from("atoms,p,max_point_prob,tau,envelope\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{},{},{},{},{}\n",
                            r.n, r.p, r.max_point_prob, r.tau, r.envelope
                        ));
                    }
                    s
                }
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct HistRow {
    value: f64,
    count: u64,
    frequency: f64,
}

#[derive(Serialize)]
struct Histogram {
    samples: u64,
    seed: u64,
    rows: Vec<HistRow>,
}

fn mc_histogram(
    f: &MultilinearPolynomial,
    spec: &BernoulliSpec,
    samples: u64,
    seed: u64,
) -> Result<Histogram, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<u64, (f64, u64)> = BTreeMap::new();
    let n = f.n();
    let mut bits = vec![false; n];
    for _ in 0..samples {
        for b in bits.iter_mut() {
            *b = rng.gen::<f64>() < spec.p;
        }
        let v = f.evaluate(&acx::poly::Assignment::new(bits.clone()))?;
        let e = counts.entry(v.to_bits()).or_insert((v, 0));
        e.1 += 1;
    }
    let mut rows: Vec<HistRow> = counts
        .into_values()
        .map(|(value, count)| HistRow {
            value,
            count,
            frequency: count as f64 / samples as f64,
        })
        .collect();
    rows.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("finite values"));
    Ok(Histogram {
        samples,
        seed,
        rows,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    theorem: &str,
    source: &PolySource,
    random: Option<usize>,
    nmax: usize,
    p: Option<f64>,
    s: Option<f64>,
    lambda: Option<f64>,
    k: Option<usize>,
    h: Option<usize>,
    input: &Option<String>,
    cap: usize,
    samples: u64,
    level: f64,
    seed: u64,
) -> Result<Vec<BoundReport>, Error> {
    let load_graph = || -> Result<GraphInstance, Error> {
        let path = input
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("this bound needs --input".into()))?;
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {path}: {e}")))?;
        GraphInstance::from_json(&text)
    };
    match theorem {
        "nonneg-poisson" | "weak" => {
            let exact_check = |f: &MultilinearPolynomial, spec: &BernoulliSpec| {
                if theorem == "nonneg-poisson" {
                    bounds::check_nonneg_poisson(f, spec, cap)
                } else {
                    bounds::check_weak_bound(f, spec, cap)
                }
            };
            if let Some(count) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut reports = Vec::with_capacity(count);
                for _ in 0..count {
                    let (f, pp) = if theorem == "nonneg-poisson" {
                        (
                            bounds::random_nonneg_poly(&mut rng, nmax, 4),
                            bounds::random_p(&mut rng, false),
                        )
                    } else {
                        (
                            bounds::random_signed_poly(&mut rng, nmax, 4),
                            bounds::random_p(&mut rng, true),
                        )
                    };
                    let spec = BernoulliSpec::new(f.n(), pp)?;
                    reports.push(exact_check(&f, &spec));
                }
                Ok(reports)
            } else {
                let f = load_poly(source)?;
                let pp = p.ok_or_else(|| Error::InvalidParameter("missing --p".into()))?;
                let spec = BernoulliSpec::new(f.n(), pp)?;
                Ok(vec![exact_check(&f, &spec)])
            }
        }
        "main-term" => {
            let n = source
                .n
                .ok_or_else(|| Error::InvalidParameter("main-term needs --n".into()))?;
            let pp = p.unwrap_or(0.5);
            let ss = s.unwrap_or(0.4);
            Ok(vec![bounds::check_main_term(n, pp, ss)?])
        }
        "rank-trend" => {
            let d = source.d.unwrap_or(2);
            let pp = p.unwrap_or(0.5);
            let rs = match source.r {
                Some(r) => vec![r],
                None => vec![8, 16, 32, 64],
            };
            rs.into_iter()
                .map(|r| bounds::check_rank_trend(r, d, pp, cap.max(r * d)))
                .collect()
        }
        "bessel" => {
            let l = lambda.ok_or_else(|| Error::InvalidParameter("bessel needs --lambda".into()))?;
            let n = source
                .n
                .ok_or_else(|| Error::InvalidParameter("bessel needs --n".into()))?;
            Ok(vec![bounds::check_bessel(l, n)?])
        }
        "edge-clique" => {
            let n = source
                .n
                .ok_or_else(|| Error::InvalidParameter("edge-clique needs --n".into()))?;
            let kk = k.ok_or_else(|| Error::InvalidParameter("edge-clique needs --k".into()))?;
            Ok(vec![bounds::check_edge_statistic_clique(n, kk)?])
        }
        "edge-uniform" => {
            let g = load_graph()?;
            let kk = k.ok_or_else(|| Error::InvalidParameter("edge-uniform needs --k".into()))?;
            Ok(vec![bounds::check_edge_statistic_uniform(
                &g, kk, samples, level, seed,
            )?])
        }
        "clique-spread" => {
            let n = source
                .n
                .ok_or_else(|| Error::InvalidParameter("clique-spread needs --n".into()))?;
            let hh = h.ok_or_else(|| Error::InvalidParameter("clique-spread needs --h".into()))?;
            Ok(vec![bounds::check_clique_count_spread(
                n,
                hh,
                p.unwrap_or(0.5),
                samples,
                level,
                seed,
            )?])
        }
        "copy-spread" => {
            let n = source
                .n
                .ok_or_else(|| Error::InvalidParameter("copy-spread needs --n".into()))?;
            let pattern = load_graph()?;
            Ok(vec![bounds::check_copy_count_spread(
                n,
                &pattern,
                p.unwrap_or(0.5),
                samples,
                level,
                seed,
            )?])
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown bound id '{other}'"
        ))),
    }
}

fn parse_gnp(spec: &str) -> Result<(usize, f64), Error> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "--gnp expects n,p (got '{spec}')"
        )));
    }
    let n = parts[0]
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::InvalidParameter(format!("bad n in --gnp '{spec}'")))?;
    let p = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidParameter(format!("bad p in --gnp '{spec}'")))?;
    Ok((n, p))
}

fn load_graph_source(
    input: &Option<String>,
    gnp: &Option<String>,
    seed: u64,
) -> Result<GraphInstance, Error> {
    match (input, gnp) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidParameter(format!("cannot read {path}: {e}")))?;
            GraphInstance::from_json(&text)
        }
        (None, Some(spec)) => {
            let (n, p) = parse_gnp(spec)?;
            graph::sample_gnp(n, p, seed)
        }
        _ => Err(Error::InvalidParameter(
            "provide exactly one of --input or --gnp".into(),
        )),
    }
}

fn count_histogram_text(hist: &BTreeMap<u64, u64>, trials: u64, format: Format, seed: u64) -> String {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                value: u64,
                count: u64,
                frequency: f64,
            }
            #[derive(Serialize)]
            struct Out {
                trials: u64,
                seed: u64,
                rows: Vec<Row>,
            }
            let rows = hist
                .iter()
                .map(|(&value, &count)| Row {
                    value,
                    count,
                    frequency: count as f64 / trials as f64,
                })
                .collect();
            serde_json::to_string_pretty(&Out { trials, seed, rows }).expect("serializable")
        }
        Format::Csv => {
            let mut s = String::from("value,count,frequency\n");
            for (&value, &count) in hist {
                s.push_str(&format!(
                    "{},{},{}\n",
                    value,
                    count,
                    count as f64 / trials as f64
                ));
            }
            s
        }
    }
}

fn run_graph(command: GraphCommand) -> Result<ExitCode, Error> {
    match command {
        GraphCommand::Sample { gnp, seed, output } => {
            let (n, p) = parse_gnp(&gnp)?;
            let g = graph::sample_gnp(n, p, seed)?;
            let text = match output.format {
                Format::Json => g.to_json(),
                Format::Csv => {
                    let mut s = String::from("u,v\n");
                    for e in g.edges() {
                        s.push_str(&format!("{},{}\n", e[0], e[1]));
                    }
                    s
                }
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }

        GraphCommand::Cliques {
            input,
            gnp,
            h,
            trials,
            seed,
            output,
        } => {
            if h == 0 {
                return Err(Error::InvalidParameter("need --h >= 1".into()));
            }
            let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
            if let Some(spec) = &gnp {
                let (n, p) = parse_gnp(spec)?;
                for t in 0..trials.max(1) {
                    let g = graph::sample_gnp(n, p, seed.wrapping_add(t))?;
                    *hist.entry(graph::count_cliques(&g, h)).or_insert(0) += 1;
                }
            } else {
                let g = load_graph_source(&input, &None, seed)?;
                if g.r() != 2 {
                    return Err(Error::InvalidParameter(
                        "clique counting needs a simple graph (r = 2)".into(),
                    ));
                }
                *hist.entry(graph::count_cliques(&g, h)).or_insert(0) += 1;
            }
            let trials = hist.values().sum::<u64>();
            let text = count_histogram_text(&hist, trials, output.format, seed);
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }

        GraphCommand::Copies {
            input,
            pattern,
            mode,
            output,
        } => {
            let g = load_graph_source(&Some(input), &None, 0)?;
            let h = load_graph_source(&Some(pattern), &None, 0)?;
            let mode = match mode.as_str() {
                "labelled" => CopyMode::Labelled,
                "unlabelled" => CopyMode::Unlabelled,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown copy mode '{other}' (use labelled or unlabelled)"
                    )))
                }
            };
            let count = graph::count_copies(&h, &g, mode, 8)?;
            #[derive(Serialize)]
            struct Out {
                pattern_vertices: usize,
                pattern_edges: usize,
                mode: String,
                count: u64,
            }
            let out = Out {
                pattern_vertices: h.n(),
                pattern_edges: h.edge_count(),
                mode: if mode == CopyMode::Labelled {
                    "labelled".into()
                } else {
                    "unlabelled".into()
                },
                count,
            };
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&out).expect("serializable"),
                Format::Csv => format!(
                    "pattern_vertices,pattern_edges,mode,count\n{},{},{},{}\n",
                    out.pattern_vertices, out.pattern_edges, out.mode, out.count
                ),
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }

        GraphCommand::Edgestat {
            input,
            gnp,
            k,
            mode,
            trials,
            seed,
            output,
        } => {
            let g = load_graph_source(&input, &gnp, seed)?;
            let mode = match mode.as_str() {
                "uniform" => SubsetMode::UniformK,
                "bernoulli" => SubsetMode::Bernoulli,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown subset mode '{other}' (use uniform or bernoulli)"
                    )))
                }
            };
            let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
            for t in 0..trials.max(1) {
                let s = graph::edge_statistic(&g, k, mode, seed.wrapping_add(t + 1))?;
                *hist.entry(s.value).or_insert(0) += 1;
            }
            let text = count_histogram_text(&hist, trials.max(1), output.format, seed);
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }

        GraphCommand::Dispersed {
            input,
            gnp,
            c,
            q,
            h,
            exact,
            budget,
            seed,
            output,
        } => {
            let g = load_graph_source(&input, &gnp, seed)?;
            let mode = if exact {
                DispersednessMode::Exact
            } else {
                DispersednessMode::Sampled { budget, seed }
            };
            let report = graph::dispersedness_check(&g, c, q, h, mode)?;
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable"),
                Format::Csv => {
                    let mut s = String::from("k,l,count,frequency\n");
                    for row in &report.rows {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            row.k, row.worst_l, row.count, row.frequency
                        ));
                    }
                    s
                }
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }

        GraphCommand::Mindeg {
            input,
            threshold,
            output,
        } => {
            let g = load_graph_source(&Some(input), &None, 0)?;
            let thr = parse_threshold(&threshold, &g)?;
            let survivors = graph::min_degree_subgraph(&g, thr);
            #[derive(Serialize)]
            struct Out {
                threshold: f64,
                survivors: Vec<u32>,
            }
            let out = Out {
                threshold: thr,
                survivors,
            };
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&out).expect("serializable"),
                Format::Csv => {
                    let mut s = String::from("vertex\n");
                    for v in &out.survivors {
                        s.push_str(&format!("{v}\n"));
                    }
                    s
                }
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Accepts a plain number, or avg/<x> (x a number or "r") relative to
/// the average degree.
fn parse_threshold(spec: &str, g: &GraphInstance) -> Result<f64, Error> {
    if let Some(rest) = spec.strip_prefix("avg/") {
        let div = if rest == "r" {
            g.r() as f64
        } else {
            rest.parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad threshold '{spec}'")))?
        };
        if div <= 0.0 {
            return Err(Error::InvalidParameter("threshold divisor must be positive".into()));
        }
        Ok(g.average_degree() / div)
    } else {
        spec.parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("bad threshold '{spec}'")))
    }
}
