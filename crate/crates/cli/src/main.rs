//! Command-line surface for the hypergraph perfect-matching toolkit.
//!
//! Exit codes: 0 = yes (a matching was produced), 1 = no (with certificate
//! or oracle confirmation), 2 = error. All default output is
//! byte-reproducible for identical inputs and flags; timing lines only
//! appear with `--timings`.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hypermatch_core::fractional::{conjectured_cstar, max_fractional_matching};
use hypermatch_core::hypergraph::Hypergraph;
use hypermatch_core::instances;
use hypermatch_core::lattice::{self, IndexVector, Lattice};
use hypermatch_core::partition::{build_partition, validate_partition, PipelineParams};
use hypermatch_core::pipeline::{self, Family, NoWitness, Verdict};
use hypermatch_core::{Int, Rat};

#[derive(Parser)]
#[command(name = "hypermatch", version, about = "Exact perfect-matching decisions for k-uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance in the shared text format.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Run the lattice decision pipeline.
    Decide {
        #[arg(long)]
        input: String,
        /// Degree parameter reported in the trace (1 <= ell <= k-1).
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        json: bool,
        /// Print a timing line to stderr (non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Run the exhaustive backtracking oracle.
    Oracle {
        #[arg(long)]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Exact maximum fractional matching value (and witness).
    Fractional {
        #[arg(long)]
        input: String,
        /// Also print the nonzero edge weights.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
        /// Print the conjectured threshold coefficient for this ell instead.
        #[arg(long)]
        cstar_ell: Option<usize>,
    },
    /// Build and validate the vertex partition; prints JSON.
    Partition {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Robust vectors, lattice basis, coset order, residues, transferrals; JSON.
    LatticeInfo {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Generate instances, run decide against the oracle, emit CSV.
    CrossValidate {
        /// Family spec: `acceptance`, `random:n=9,k=3,p=1/2`, `space:n=6,k=3`,
        /// `cover:n=9,k=3`, `complete:n=9,k=3`.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// CSV output path (stdout when omitted).
        #[arg(long)]
        out: Option<String>,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[command(flatten)]
        params: ParamArgs,
        /// Include timing columns (non-reproducible output).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// Bipartition with odd |Y| and even-intersection edges.
    Space {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Small covering set W; every edge meets W.
    Cover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Partition-defined edges from an allowed index-vector list.
    Lattice {
        /// Comma-separated part sizes, e.g. `3,3`.
        #[arg(long)]
        parts: String,
        #[arg(long)]
        k: usize,
        /// Semicolon-separated vectors, e.g. `3,0;1,2`.
        #[arg(long)]
        allowed: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Seeded binomial random k-graph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Inclusion probability as a rational, e.g. `1/2` or `0.3`.
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

/// Pipeline threshold overrides; defaults are the documented desk-scale
/// values.
#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    delta_prime: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    coefficient_cap: Option<usize>,
    #[arg(long)]
    oracle_cap: Option<usize>,
}

fn parse_rational(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| format!("bad numerator in {:?}", s))?;
        let d: i64 = den.trim().parse().map_err(|_| format!("bad denominator in {:?}", s))?;
        if d == 0 {
            return Err(format!("zero denominator in {:?}", s));
        }
        return Ok(Rat::new(Int::from(n), Int::from(d)));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let w: i64 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().map_err(|_| format!("bad decimal {:?}", s))?
        };
        let digits = frac.len() as u32;
        let f: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| format!("bad decimal {:?}", s))? };
        let den = 10i64.pow(digits);
        let sign = if s.starts_with('-') { -1 } else { 1 };
        return Ok(Rat::new(Int::from(w * den + sign * f), Int::from(den)));
    }
    let n: i64 = s.parse().map_err(|_| format!("bad rational {:?}", s))?;
    Ok(Rat::from_integer(Int::from(n)))
}

impl ParamArgs {
    fn build(&self) -> Result<PipelineParams, String> {
        let mut p = PipelineParams::default();
        if let Some(v) = &self.mu {
            p.mu = parse_rational(v)?;
        }
        if let Some(v) = &self.beta {
            p.beta = parse_rational(v)?;
        }
        if let Some(v) = &self.alpha {
            p.alpha = parse_rational(v)?;
        }
        if let Some(v) = &self.delta {
            p.delta = parse_rational(v)?;
        }
        if let Some(v) = &self.delta_prime {
            p.delta_prime = parse_rational(v)?;
        }
        if let Some(v) = &self.gamma {
            p.gamma = parse_rational(v)?;
        }
        if let Some(v) = self.t {
            p.t = v;
        }
        p.q = self.q.or(p.q);
        if let Some(v) = self.b {
            p.b = v;
        }
        if let Some(v) = self.coefficient_cap {
            p.coefficient_cap = v;
        }
        if let Some(v) = self.oracle_cap {
            p.oracle_cap = v;
        }
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }
}

fn read_input(path: &str) -> Result<Hypergraph, String> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| e.to_string())?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path, e))?
    };
    Hypergraph::from_text(&text).map_err(|e| e.to_string())
}

fn emit(text: String, out: &Option<String>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn parse_vectors(spec: &str) -> Result<Vec<IndexVector>, String> {
    spec.split(';')
        .map(|v| {
            v.split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| format!("bad coordinate {:?}", c)))
                .collect::<Result<Vec<i64>, String>>()
                .map(IndexVector::new)
        })
        .collect()
}

fn parse_family(spec: &str) -> Result<Vec<Family>, String> {
    if spec == "acceptance" {
        return Ok(pipeline::acceptance_families());
    }
    let (kind, rest) = spec.split_once(':').ok_or_else(|| format!("bad family {:?}", spec))?;
    let mut n = 9usize;
    let mut k = 3usize;
    let mut p = "1/2".to_string();
    for kv in rest.split(',') {
        let (key, val) = kv.split_once('=').ok_or_else(|| format!("bad family field {:?}", kv))?;
        match key {
            "n" => n = val.parse().map_err(|_| format!("bad n {:?}", val))?,
            "k" => k = val.parse().map_err(|_| format!("bad k {:?}", val))?,
            "p" => p = val.to_string(),
            other => return Err(format!("unknown family field {:?}", other)),
        }
    }
    let fam = match kind {
        "random" => {
            let r = parse_rational(&p)?;
            Family::Random {
                n,
                k,
                p_num: i64::try_from(r.numer()).map_err(|_| "p numerator too large")?,
                p_den: i64::try_from(r.denom()).map_err(|_| "p denominator too large")?,
            }
        }
        "space" => Family::Space { n, k },
        "cover" => Family::Cover { n, k },
        "complete" => Family::Complete { n, k },
        other => return Err(format!("unknown family kind {:?}", other)),
    };
    Ok(vec![fam])
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { family } => {
            let (h, out) = match family {
                GenFamily::Space { n, k, out } => (instances::space_barrier(n, k).map_err(|e| e.to_string())?, out),
                GenFamily::Cover { n, k, out } => (instances::cover_barrier(n, k).map_err(|e| e.to_string())?, out),
                GenFamily::Lattice { parts, k, allowed, out } => {
                    let sizes: Vec<usize> = parts
                        .split(',')
                        .map(|s| s.trim().parse().map_err(|_| format!("bad part size {:?}", s)))
                        .collect::<Result<_, String>>()?;
                    let vecs = parse_vectors(&allowed)?;
                    (
                        instances::lattice_barrier(&sizes, k, &vecs).map_err(|e| e.to_string())?,
                        out,
                    )
                }
                GenFamily::Random { n, k, p, seed, out } => {
                    let prob = parse_rational(&p)?;
                    (
                        instances::random_kgraph(n, k, &prob, seed).map_err(|e| e.to_string())?,
                        out,
                    )
                }
            };
            emit(h.to_text(), &out)?;
            Ok(0)
        }

        Command::Decide { input, ell, params, json, timings } => {
            let h = read_input(&input)?;
            let params = params.build()?;
            let t0 = std::time::Instant::now();
            let decision = hypermatch_core::pipeline::decide(&h, ell, &params).map_err(|e| e.to_string())?;
            let elapsed = t0.elapsed();
            if json {
                println!("{}", serde_json::to_string_pretty(&decision).map_err(|e| e.to_string())?);
            } else {
                match &decision.verdict {
                    Verdict::PerfectMatching(m) => {
                        println!("verdict: perfect matching ({} edges)", m.len());
                        for e in m.edges() {
                            println!("  {}", e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
                        }
                    }
                    Verdict::NoPerfectMatching(NoWitness::Divisibility { n, k }) => {
                        println!("verdict: no perfect matching ({} does not divide {})", k, n);
                    }
                    Verdict::NoPerfectMatching(NoWitness::Insoluble(cert)) => {
                        println!(
                            "verdict: no perfect matching (insoluble at budget {}, |Q| = {})",
                            cert.solubility_bound, cert.coset_order
                        );
                    }
                    Verdict::OracleFallback { result, stage } => match result {
                        Some(m) => {
                            println!("verdict: perfect matching via oracle fallback at stage `{}`", stage);
                            for e in m.edges() {
                                println!("  {}", e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
                            }
                        }
                        None => println!("verdict: no perfect matching (oracle fallback at stage `{}`)", stage),
                    },
                }
                for s in &decision.trace.stages {
                    println!("trace[{}]: {}", s.stage, s.summary);
                }
            }
            if timings {
                eprintln!("decide took {} us", elapsed.as_micros());
            }
            Ok(if decision.verdict.says_yes() { 0 } else { 1 })
        }

        Command::Oracle { input, json } => {
            let h = read_input(&input)?;
            let result = h.perfect_matching_oracle();
            if json {
                println!("{}", serde_json::to_string_pretty(&result).map_err(|e| e.to_string())?);
            } else {
                match &result {
                    Some(m) => {
                        println!("perfect matching ({} edges)", m.len());
                        for e in m.edges() {
                            println!("  {}", e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
                        }
                    }
                    None => println!("no perfect matching"),
                }
            }
            Ok(if result.is_some() { 0 } else { 1 })
        }

        Command::Fractional { input, witness, json, cstar_ell } => {
            if let Some(ell) = cstar_ell {
                let h = read_input(&input)?;
                let c = conjectured_cstar(h.k(), ell).map_err(|e| e.to_string())?;
                println!("{}", c);
                return Ok(0);
            }
            let h = read_input(&input)?;
            let (value, fm) = max_fractional_matching(&h);
            if json {
                let map = fm.as_map(&h);
                let wit: std::collections::BTreeMap<String, String> = map
                    .iter()
                    .map(|(e, w)| {
                        (
                            e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
                            w.to_string(),
                        )
                    })
                    .collect();
                let doc = serde_json::json!({
                    "value": value.to_string(),
                    "perfect": fm.is_perfect(&h),
                    "witness": if witness { Some(wit) } else { None },
                });
                println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
            } else {
                println!("{}", value);
                if witness {
                    for (e, w) in fm.as_map(&h) {
                        println!("  {}  {}", e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "), w);
                    }
                }
            }
            Ok(0)
        }

        Command::Partition { input, params } => {
            let h = read_input(&input)?;
            let params = params.build()?;
            match build_partition(&h, &params) {
                Ok((p, report)) => {
                    let validation = validate_partition(&h, &p, &params);
                    let doc = serde_json::json!({
                        "partition": p,
                        "build": report,
                        "validation": validation,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
                    Ok(0)
                }
                Err(e) => {
                    let doc = serde_json::json!({ "error": e.to_string() });
                    println!("{}", serde_json::to_string_pretty(&doc).map_err(|er| er.to_string())?);
                    Ok(1)
                }
            }
        }

        Command::LatticeInfo { input, params } => {
            let h = read_input(&input)?;
            let params = params.build()?;
            let (p, _) = build_partition(&h, &params).map_err(|e| e.to_string())?;
            let merged = lattice::merge_transferral_parts(&h, &p, &params);
            let p = merged.partition;
            let robust = lattice::robust_vectors(&h, &p, &params.mu);
            let gens = robust.all();
            let l = Lattice::generate(p.r(), &gens).map_err(|e| e.to_string())?;
            let group = lattice::CosetGroup::new(&l, p.r(), h.k()).map_err(|e| e.to_string())?;
            let transferrals: Vec<Vec<bool>> = (0..p.r())
                .map(|i| (0..p.r()).map(|j| i != j && lattice::has_transferral(&l, i, j)).collect())
                .collect();
            let leftover: Vec<usize> = (0..h.n()).filter(|v| !p.v0().contains(*v)).collect();
            let leftover_vec = p.index_vector(&leftover);
            let leftover_residue = group.residue(&leftover_vec).ok().map(|r| format!("{}", r));
            let doc = serde_json::json!({
                "partition": p,
                "robust_type1": robust.type1,
                "robust_type2": robust.type2,
                "hnf_basis": l.basis_vectors(),
                "coset_order": group.order().map(|o| o.to_string()),
                "invariant_factors": group.invariant_factors().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "leftover_vector": leftover_vec,
                "leftover_residue": leftover_residue,
                "transferral_matrix": transferrals,
            });
            println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
            Ok(0)
        }

        Command::CrossValidate { family, count, seed, out, ell, params, timings } => {
            let families = parse_family(&family)?;
            let params = params.build()?;
            match pipeline::cross_validate(ell, &families, count, seed, &params) {
                Ok(report) => {
                    emit(report.to_csv(timings), &out)?;
                    eprintln!("{} instances, 0 disagreements", report.rows.len());
                    Ok(0)
                }
                Err(dis) => {
                    eprintln!("DISAGREEMENT on {} (seed {})", dis.family, dis.seed);
                    eprintln!("decide said {}, oracle said {}", dis.decide_yes, dis.oracle_yes);
                    eprintln!("reproduction instance:\n{}", dis.instance_text);
                    Ok(2)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    // behave like a regular pipe citizen under `head` and friends
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
