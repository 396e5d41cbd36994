//! `qperm`: command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use qperm_core::claims::{self, ClaimOptions};
use qperm_core::dim2::{classify, describe, verify_congruence, Dim2Class};
use qperm_core::eval::{qperm_naive, qperm_substituted};
use qperm_core::exact::{format_rat, parse_rat, LinearSolution, Rat, RatMatrix};
use qperm_core::format::{parse_matrix, parse_rat_matrix};
use qperm_core::hessenberg::{membership, qperm_hessenberg_fast, qperm_hessenberg_numeric, QSpec};
use qperm_core::mixed::{recover_base_matrix, search_consistent_targets, sign_matrix_invariants};
use qperm_core::perf::{hessenberg_suite, mixed_suite};
use qperm_core::perm::{enumerate_sn, Perm};
use qperm_core::preservers::{basis, sheet_solve, unvec, SheetSpec};
use qperm_core::tau::{solve_tau, TauSolution};
use qperm_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "qperm",
    version,
    about = "Exact q-permanents and Schur-multiplier converters"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for randomized verification trials.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the mixed search and batch checks (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Print the full JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the results object as JSON to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// P_q(A) by full expansion.
    Eval {
        #[arg(long)]
        matrix: PathBuf,
        /// Substitute q = Q (a rational).
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// P_q(A) for lower Hessenberg A through a single determinant.
    HessEval {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// The 2n - 2 basis matrices of the preserver space.
    PreserverBasis {
        #[arg(long)]
        n: usize,
    },
    /// Solves Tr_σ(R) = k_σ/θ over all σ in lexicographic order.
    SheetSolve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        theta: String,
        /// Comma-separated integers, one per permutation.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        k: Vec<i64>,
    },
    /// Classifies an exponent matrix H for Hessenberg inputs.
    HessMembership {
        #[arg(long)]
        matrix: PathBuf,
        /// Root-of-unity regime q = e^{2πiθ}; omit for |q| ≠ 1.
        #[arg(long)]
        theta: Option<String>,
    },
    /// Solves for (Λ, x) with P_q(q^Λ ∘ A) = P_{q^x}(A P_τ).
    TauConvert {
        #[arg(long)]
        n: usize,
        /// Cycle notation like "(12)(34)" or a one-line array like "[2,1,4,3]".
        #[arg(long)]
        tau: String,
    },
    /// Enumerates the consistent mixed targets and their base matrices.
    MixedSearch {
        #[arg(long)]
        n: usize,
    },
    /// Classifies a 4×4 converter for n = 2.
    Classify2 {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Runs the acceptance checks.
    VerifyPaper {
        /// Run only these claim ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
    /// Timing tables.
    Bench {
        #[arg(value_enum)]
        suite: Suite,
        /// Runs per size; the median is reported.
        #[arg(long, default_value_t = 5)]
        runs: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    Hessenberg,
    MixedSearch,
}

enum Failure {
    Usage(String),
    Module(Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Module(e) => match e {
                Error::Parse { .. }
                | Error::InvalidArgument(_)
                | Error::InvalidPermutation(_)
                | Error::SizeTooLarge { .. }
                | Error::SizeTooSmall { .. }
                | Error::DimensionMismatch { .. }
                | Error::NotHessenberg { .. }
                | Error::ZeroQ
                | Error::QAtSingularity(_)
                | Error::SingularG
                | Error::NonConstantBlock
                | Error::NonIntegerExponent { .. }
                | Error::NonIntegerTargetExponent { .. } => 2,
                _ => 1,
            },
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Module(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => f.write_str(m),
            Self::Module(e) => write!(f, "{e}"),
        }
    }
}

/// What a subcommand produced.
struct Outcome {
    text: String,
    results: Value,
    /// False when a verification inside the command failed.
    ok: bool,
}

impl Outcome {
    fn ok(text: String, results: Value) -> Self {
        Self {
            text,
            results,
            ok: true,
        }
    }
}

type Run = Result<Outcome, Failure>;

fn read(path: &Path, digest: &mut Sha256) -> Result<String, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    digest.update(text.as_bytes());
    Ok(text)
}

fn rational(text: &str, what: &str) -> Result<Rat, Failure> {
    parse_rat(text.trim()).ok_or_else(|| Failure::Usage(format!("{what}: expected an integer or p/q, got {text:?}")))
}

fn rat_rows(m: &RatMatrix) -> Value {
    json!(m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(format_rat).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn rat_grid(m: &RatMatrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(format_rat).collect::<Vec<_>>().join("\t"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn eval(matrix: &Path, q: Option<&str>, hessenberg: bool, digest: &mut Sha256) -> Run {
    let a = parse_matrix(&read(matrix, digest)?)?;
    let method = if hessenberg { "hessenberg_det" } else { "naive" };
    let value = match (q, hessenberg) {
        (Some(q), true) => {
            let q0 = rational(q, "--q")?;
            format_rat(&qperm_hessenberg_numeric(&a.substitute(&q0)?, &q0)?)
        }
        (Some(q), false) => format_rat(&qperm_substituted(&a, &rational(q, "--q")?)?),
        (None, true) => qperm_hessenberg_fast(&a)?.value.to_string(),
        (None, false) => qperm_naive(&a)?.value.to_string(),
    };
    Ok(Outcome::ok(
        value.clone(),
        json!({ "n": a.rows(), "method": method, "q": q, "value": value }),
    ))
}

fn preserver_basis(n: usize) -> Run {
    let b = basis(n)?;
    let text = b
        .labels
        .iter()
        .zip(&b.matrices)
        .map(|(l, m)| format!("{l}:\n{}", rat_grid(m)))
        .collect::<Vec<_>>()
        .join("\n\n");
    let items: Vec<Value> = b
        .labels
        .iter()
        .zip(&b.matrices)
        .map(|(l, m)| json!({ "label": l, "matrix": rat_rows(m) }))
        .collect();
    Ok(Outcome::ok(
        text,
        json!({ "n": n, "dimension": items.len(), "basis": items }),
    ))
}

fn sheet(n: usize, theta: &str, k: Vec<i64>) -> Run {
    let spec = SheetSpec {
        n,
        theta: rational(theta, "--theta")?,
        k,
    };
    match sheet_solve(&spec)? {
        LinearSolution::Inconsistent { rank } => Ok(Outcome {
            text: "no solution: k is not in the image of the trace map".into(),
            results: json!({ "n": n, "status": "inconsistent", "rank": rank }),
            ok: false,
        }),
        LinearSolution::Solution(s) => {
            let r0 = unvec(n, &s.particular);
            let text = format!(
                "particular solution (kernel dimension {}):\n{}",
                s.kernel_dim(),
                rat_grid(&r0)
            );
            Ok(Outcome::ok(
                text,
                json!({ "n": n, "status": "solution", "particular": rat_rows(&r0), "kernel_dim": s.kernel_dim() }),
            ))
        }
    }
}

fn hess_membership(matrix: &Path, theta: Option<&str>, digest: &mut Sha256) -> Run {
    let h = parse_rat_matrix(&read(matrix, digest)?)?;
    let spec = match theta {
        Some(t) => QSpec::RootOfUnityTheta(rational(t, "--theta")?),
        None => QSpec::GenericModulus,
    };
    let r = membership(&h, &spec)?;
    let class = serde_json::to_value(r.classification).expect("plain enum");
    let k: Option<Vec<String>> = r.k.as_ref().map(|ks| ks.iter().map(ToString::to_string).collect());
    let text = class.as_str().unwrap_or_default().to_string();
    Ok(Outcome::ok(
        text,
        json!({ "n": h.rows(), "classification": class, "k": k }),
    ))
}

fn parse_perm(n: usize, text: &str) -> Result<Perm, Failure> {
    Ok(Perm::parse(n, text)?)
}

fn tau_convert(n: usize, tau: &str) -> Run {
    let t = parse_perm(n, tau)?;
    let sol = solve_tau(&t)?;
    let text = match &sol {
        TauSolution::Converter(c) => format!(
            "converter for {t}: x = {}{}\nLambda:\n{}\nkernel dimension {}",
            format_rat(&c.converter.x),
            if c.x_forced { "" } else { " (x is free; sgn chosen)" },
            rat_grid(&c.converter.lambda),
            c.kernel_dim()
        ),
        TauSolution::Empty { certificate: Some(c) } => {
            let quad: Vec<String> = c.quadruple.0.iter().map(|p| format!("{:?}", p.one_line())).collect();
            format!(
                "empty for {t}\ncertificate: balanced quadruple {} at positions {:?}, alternating sum {}",
                quad.join(", "),
                c.positions,
                c.gap
            )
        }
        TauSolution::Empty { certificate: None } => format!("empty for {t} (no certificate found)"),
    };
    let results = json!({
        "n": n,
        "tau": t.to_string(),
        "solution": serde_json::to_value(&sol).expect("serializable"),
    });
    Ok(Outcome::ok(text, results))
}

fn mixed(n: usize, jobs: usize) -> Run {
    let perms = enumerate_sn(n)?;
    let targets = search_consistent_targets(n, jobs)?;
    let mut comps = Vec::with_capacity(targets.len());
    let mut lines = vec![format!("n = {n}: {} consistent targets", targets.len())];
    for t in &targets {
        let c = recover_base_matrix(t)?;
        let inv = sign_matrix_invariants(&c)?;
        lines.push(format!(
            "b = {:?}  det {} per {} trace {}",
            t.b, inv.det, inv.per, inv.trace
        ));
        comps.push(json!({
            "b": t.b,
            "delta": t.delta,
            "M0": rat_rows(&c.m0),
            "integral": c.integral,
            "sign_invariants": serde_json::to_value(&inv).expect("serializable"),
        }));
    }
    let order: Vec<String> = perms.iter().map(ToString::to_string).collect();
    let results = json!({
        "n": n,
        "count": targets.len(),
        "order": order,
        "targets": targets.iter().map(|t| t.b.clone()).collect::<Vec<_>>(),
        "components": comps,
    });
    Ok(Outcome::ok(lines.join("\n"), results))
}

fn classify2(matrix: &Path, seed: u64, digest: &mut Sha256) -> Run {
    let m = parse_matrix(&read(matrix, digest)?)?;
    if m.rows() != 4 {
        return Err(Failure::Usage(format!(
            "classify2 needs a 4×4 matrix, got {}×{}",
            m.rows(),
            m.cols()
        )));
    }
    let class = classify(&m)?;
    let ok = class == Dim2Class::NotAConverter || verify_congruence(&m, 20, seed)?;
    Ok(Outcome {
        text: describe(&class),
        results: serde_json::to_value(&class).expect("serializable"),
        ok,
    })
}

fn verify_paper(only: &[u8], opts: &ClaimOptions) -> Run {
    let ids: Vec<u8> = if only.is_empty() {
        (1..=claims::CLAIM_COUNT as u8).collect()
    } else {
        only.to_vec()
    };
    let mut rows = Vec::new();
    for id in ids {
        rows.push(claims::run(id, opts)?);
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    let mut lines: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{} [{:>2}] {}: {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.id,
                r.name,
                r.detail
            )
        })
        .collect();
    lines.push(format!("{passed}/{} passed", rows.len()));
    Ok(Outcome {
        text: lines.join("\n"),
        ok: passed == rows.len(),
        results: json!({ "passed": passed, "total": rows.len(), "claims": rows }),
    })
}

fn bench(suite: Suite, runs: usize, seed: u64, jobs: usize) -> Run {
    let runs = runs.max(1);
    match suite {
        Suite::Hessenberg => {
            let r = hessenberg_suite(&[4, 6, 8, 10, 16, 32, 40, 64], runs, seed);
            let mut lines = vec![format!("{:>4} {:>12} {:>12}  agree", "n", "fast (s)", "naive (s)")];
            for row in &r.rows {
                lines.push(format!(
                    "{:>4} {:>12.6} {:>12}  {}",
                    row.n,
                    row.fast_seconds,
                    row.naive_seconds.map_or("infeasible".into(), |t| format!("{t:.6}")),
                    row.agree.map_or("-".into(), |a| a.to_string())
                ));
            }
            lines.push(format!("log-log slope over all sizes: {:.2}", r.slope));
            let ok = r.rows.iter().all(|row| row.agree != Some(false));
            Ok(Outcome {
                text: lines.join("\n"),
                results: serde_json::to_value(&r).expect("serializable"),
                ok,
            })
        }
        Suite::MixedSearch => {
            let rows = mixed_suite(&[2, 3, 4], jobs, runs);
            let lines: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "n = {}: {} targets in {:.4}s (jobs {})",
                        r.n, r.count, r.seconds, r.jobs
                    )
                })
                .collect();
            Ok(Outcome::ok(
                lines.join("\n"),
                serde_json::to_value(&rows).expect("serializable"),
            ))
        }
    }
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::HessEval { .. } => "hess-eval",
        Command::PreserverBasis { .. } => "preserver-basis",
        Command::SheetSolve { .. } => "sheet-solve",
        Command::HessMembership { .. } => "hess-membership",
        Command::TauConvert { .. } => "tau-convert",
        Command::MixedSearch { .. } => "mixed-search",
        Command::Classify2 { .. } => "classify2",
        Command::VerifyPaper { .. } => "verify-paper",
        Command::Bench { .. } => "bench",
    }
}

fn dispatch(cli: &Cli, digest: &mut Sha256) -> Run {
    let g = &cli.global;
    match &cli.command {
        Command::Eval { matrix, q } => eval(matrix, q.as_deref(), false, digest),
        Command::HessEval { matrix, q } => eval(matrix, q.as_deref(), true, digest),
        Command::PreserverBasis { n } => preserver_basis(*n),
        Command::SheetSolve { n, theta, k } => sheet(*n, theta, k.clone()),
        Command::HessMembership { matrix, theta } => hess_membership(matrix, theta.as_deref(), digest),
        Command::TauConvert { n, tau } => tau_convert(*n, tau),
        Command::MixedSearch { n } => mixed(*n, g.jobs),
        Command::Classify2 { matrix } => classify2(matrix, g.seed, digest),
        Command::VerifyPaper { only } => verify_paper(
            only,
            &ClaimOptions {
                seed: g.seed,
                jobs: g.jobs,
            },
        ),
        Command::Bench { suite, runs } => bench(*suite, *runs, g.seed, g.jobs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.jobs > 0 {
        // Output never depends on the worker count, so a failure here is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.jobs)
            .build_global();
    }
    let mut digest = Sha256::new();
    digest.update(std::env::args().skip(1).collect::<Vec<_>>().join("\0").as_bytes());
    let start = Instant::now();
    let outcome = match dispatch(&cli, &mut digest) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {f}");
            return ExitCode::from(f.exit_code());
        }
    };
    let report = json!({
        "subcommand": name(&cli.command),
        "inputs_digest": format!("{:x}", digest.finalize()),
        "seed": cli.global.seed,
        "ok": outcome.ok,
        "results": outcome.results,
        "timings": { "seconds": start.elapsed().as_secs_f64() },
    });
    if let Some(path) = &cli.global.out {
        let body = serde_json::to_string_pretty(&report["results"]).expect("valid JSON") + "\n";
        if let Err(e) = std::fs::write(path, body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.global.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("valid JSON"));
    } else {
        println!("{}", outcome.text);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
