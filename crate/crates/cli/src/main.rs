use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use beq_core::cumulants::{bernoulli_moment, bernoulli_moment_closed, bernoulli_moment_recurrence, cumulants_from_moments, BernoulliParams, CumulantSpec};
use beq_core::definetti::{forward_invariance_check, id_cumulant_residual, recover_cumulants, MomentFamily};
use beq_core::haar::{haar_value_with, GeneratorWord, HaarMode};
use beq_core::partitions::{enumerate_category, shared_kernel_classes, CategoryId, MultiIndex};
use beq_core::posets::PartitionPoset;
use beq_core::representations::{matrix_invariants_hold, sums_to_one, verify_kernel_class_relations, verify_rank_one_relations, verify_semigroup_relations};
use beq_core::scalar::{format_rational, parse_rational};
use beq_core::verify::{run_all, run_criterion, Grid, CRITERIA, DEFAULT_MAX_CELLS};
use beq_core::weingarten::{gram, projection_entry, projection_matrix, weingarten, weingarten_estimate_residual, LabelledMatrix};
use beq_core::{Error, ExactMatrix};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "beq", version, about = "Exact partition, Weingarten, Haar and cumulant computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List D(k) in canonical order.
    Enumerate {
        #[arg(long)]
        category: CategoryId,
        #[arg(long)]
        k: usize,
    },
    /// Möbius matrix of D(k) ordered by refinement.
    Mobius {
        #[arg(long, default_value = "s")]
        category: CategoryId,
        #[arg(long)]
        k: usize,
    },
    /// Gram matrix G(π, σ) = n^{|π ∨ σ|}.
    Gram {
        #[arg(long)]
        category: CategoryId,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Inverse of the Gram matrix.
    Weingarten {
        #[arg(long)]
        category: CategoryId,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// One entry of the projection onto Span{T_π}, or the whole matrix.
    Projection {
        #[arg(long)]
        category: CategoryId,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// row multi-index, e.g. 1,2,1
        #[arg(long, requires = "j")]
        i: Option<String>,
        #[arg(long, requires = "i")]
        j: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// |n^{|π|} W(π, σ) − μ(π, σ)| for all pairs.
    WeinResidual {
        #[arg(long, default_value = "s")]
        category: CategoryId,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Haar state of a word such as "p;11,22;p".
    Haar {
        #[arg(long)]
        category: CategoryId,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "closed")]
        mode: HaarMode,
        /// cross-check closed forms against the Weingarten path
        #[arg(long)]
        verify: bool,
    },
    /// Verify the generator relations in the finite representation.
    RepCheck {
        #[arg(long)]
        category: CategoryId,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Boolean cumulants from single-variable moments m_1, m_2, ….
    Cumulants {
        #[arg(long)]
        moments: String,
        #[arg(long, default_value = "s")]
        category: CategoryId,
    },
    /// Moments of the Boolean Bernoulli law with mean μ and variance σ².
    Bernoulli {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        var: String,
        #[arg(long, default_value_t = 10)]
        upto: usize,
    },
    /// Invariance and cumulant residuals over a range of n.
    Definetti {
        #[arg(long)]
        category: CategoryId,
        /// cumulants as order:value pairs, e.g. 1:1,2:1/2
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        k: usize,
        /// a single n or an inclusive range a..b
        #[arg(long)]
        n: String,
        #[arg(long)]
        n0: Option<usize>,
    },
    /// Recover cumulants from a JSON file of moment vectors.
    DefinettiRecover {
        #[arg(long)]
        moments: PathBuf,
    },
    /// Run the acceptance checks.
    Verify {
        /// run every criterion
        #[arg(long, conflicts_with = "criterion")]
        all: bool,
        #[arg(long)]
        criterion: Vec<u8>,
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// A failed run: `usage` selects exit code 2 over 1.
struct Failure {
    usage: bool,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let usage = matches!(
            e,
            Error::Parse(_)
                | Error::InvalidArgument(_)
                | Error::IndexOutOfRange { .. }
                | Error::LengthMismatch { .. }
                | Error::InvalidPartition(_)
                | Error::EmptyCategory { .. }
                | Error::UnsupportedCategory(_)
                | Error::SupportViolation { .. }
        );
        Failure {
            usage,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        usage: true,
        message: message.into(),
    }
}

/// Output plus whether every check in it passed.
struct Report {
    body: Output,
    passed: bool,
}

enum Output {
    Json(Value),
    Text(String),
}

fn ok(v: Value) -> Result<Report, Failure> {
    Ok(Report {
        body: Output::Json(v),
        passed: true,
    })
}

fn q(v: &BigRational) -> Value {
    Value::String(format_rational(v))
}

fn kappa_json(spec: &CumulantSpec) -> Value {
    Value::Object(spec.kappa.iter().map(|(o, v)| (o.to_string(), q(v))).collect())
}

fn max_cells() -> Result<usize, Failure> {
    match std::env::var("BW_MAX_CELLS") {
        Ok(s) => s.parse().map_err(|_| usage(format!("BW_MAX_CELLS: not a number: {s}"))),
        Err(_) => Ok(DEFAULT_MAX_CELLS),
    }
}

fn check_cells(n: usize, k: usize) -> Result<(), Failure> {
    let cap = max_cells()?;
    match n.checked_pow(k as u32) {
        Some(s) if s <= cap => Ok(()),
        _ => Err(usage(format!("--n {n} --k {k}: n^k exceeds BW_MAX_CELLS={cap}"))),
    }
}

fn parse_index(flag: &str, s: &str, n: usize) -> Result<MultiIndex, Failure> {
    let entries = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| usage(format!("--{flag}: expected comma-separated integers, got {s:?}")))?;
    MultiIndex::new(n, entries).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn parse_rationals(flag: &str, s: &str) -> Result<Vec<BigRational>, Failure> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| usage(format!("--{flag}: {e}"))))
        .collect()
}

fn parse_kappa(s: &str) -> Result<Vec<(usize, BigRational)>, Failure> {
    s.split(',')
        .map(|pair| {
            let (m, v) = pair
                .split_once(':')
                .ok_or_else(|| usage(format!("--kappa: expected order:value, got {pair:?}")))?;
            let m = m
                .trim()
                .parse()
                .map_err(|_| usage(format!("--kappa: bad order {m:?}")))?;
            let v = parse_rational(v.trim()).map_err(|e| usage(format!("--kappa: {e}")))?;
            Ok((m, v))
        })
        .collect()
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("--n: expected N or A..B, got {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if a == 0 || a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            Ok((n, n))
        }
    }
}

fn matrix_json(m: &ExactMatrix) -> Result<Value, Failure> {
    Ok(Value::Array(
        m.to_rationals()?
            .iter()
            .map(|row| Value::Array(row.iter().map(q).collect()))
            .collect(),
    ))
}

fn matrix_csv(m: &ExactMatrix) -> Result<String, Failure> {
    let rows = m.to_rationals()?;
    Ok(rows
        .iter()
        .map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n"))
}

fn labelled(m: &LabelledMatrix, format: Format) -> Result<Report, Failure> {
    if format == Format::Csv {
        let header = m.labels.iter().map(|l| format!("\"{l}\"")).collect::<Vec<_>>().join(",");
        return Ok(Report {
            body: Output::Text(format!("{header}\n{}", matrix_csv(&m.matrix)?)),
            passed: true,
        });
    }
    ok(json!({
        "category": m.category,
        "k": m.k,
        "n": m.n,
        "labels": m.labels,
        "matrix": matrix_json(&m.matrix)?,
    }))
}

fn run(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::Enumerate { category, k } => {
            if k > 16 {
                return Err(usage("--k: at most 16"));
            }
            ok(json!(enumerate_category(category, k)))
        }
        Command::Mobius { category, k } => {
            if k > 10 {
                return Err(usage("--k: at most 10"));
            }
            let poset = PartitionPoset::category(category, k);
            let elems = poset.elements().to_vec();
            let mut rows = Vec::new();
            for p in &elems {
                let row = elems
                    .iter()
                    .map(|r| poset.mobius(p, r).map(|v| q(&v)))
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push(Value::Array(row));
            }
            ok(json!({ "category": category, "k": k, "labels": elems, "mobius": rows }))
        }
        Command::Gram { category, k, n, format } => labelled(&gram(category, k, n)?, format),
        Command::Weingarten { category, k, n, format } => labelled(&weingarten(category, k, n)?, format),
        Command::Projection {
            category,
            k,
            n,
            i,
            j,
            format,
        } => match (i, j) {
            (Some(i), Some(j)) => {
                let (i, j) = (parse_index("i", &i, n)?, parse_index("j", &j, n)?);
                if i.len() != k || j.len() != k {
                    return Err(usage(format!("--i and --j must have length {k}")));
                }
                let v = projection_entry(category, k, n, &i, &j)?;
                ok(json!({ "category": category, "k": k, "n": n, "i": i.entries(), "j": j.entries(), "value": q(&v) }))
            }
            _ => {
                check_cells(n, k)?;
                let cap = max_cells()?;
                let m = projection_matrix(category, k, n, cap)?;
                if format == Format::Csv {
                    return Ok(Report {
                        body: Output::Text(matrix_csv(&m.matrix)?),
                        passed: true,
                    });
                }
                ok(json!({ "category": category, "k": k, "n": n, "matrix": matrix_json(&m.matrix)? }))
            }
        },
        Command::WeinResidual { category, k, n } => {
            let elems = enumerate_category(category, k);
            let mut rows = Vec::new();
            for p in &elems {
                for s in &elems {
                    let r = weingarten_estimate_residual(category, k, n, p, s)?;
                    rows.push(json!({ "pi": p, "sigma": s, "residual": q(&r) }));
                }
            }
            ok(json!({ "category": category, "k": k, "n": n, "residuals": rows }))
        }
        Command::Haar {
            category,
            n,
            word,
            mode,
            verify,
        } => {
            let w = GeneratorWord::parse(n, &word).map_err(|e| usage(format!("--word: {e}")))?;
            let mode = if verify { HaarMode::Verify } else { mode };
            match haar_value_with(category, &w, mode) {
                Ok(v) => ok(json!({ "category": category, "n": n, "word": w.to_string(), "value": q(&v) })),
                Err(Error::InvalidArgument(msg)) if mode == HaarMode::Verify => Ok(Report {
                    body: Output::Json(json!({ "category": category, "n": n, "word": w.to_string(), "mismatch": msg })),
                    passed: false,
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::RepCheck { category, n, k } => {
            check_cells(n, k)?;
            let report = verify_semigroup_relations(category, n, k)?;
            let mut checks: Vec<Value> = report
                .checks
                .iter()
                .map(|(name, passed)| json!({ "relation": name, "passed": passed }))
                .collect();
            let mut extra = vec![(
                "kernel-class sums".to_string(),
                verify_kernel_class_relations(category, n, k)?,
            )];
            if category != CategoryId::O {
                extra.push(("sum of permutation vectors is 1".into(), sums_to_one(n)));
            }
            if category == CategoryId::S && n >= 2 {
                extra.push(("rank-one projection relations".into(), verify_rank_one_relations(n)));
            }
            if category != CategoryId::S {
                extra.push(("matrix invariants".into(), matrix_invariants_hold(n)));
            }
            let passed = report.passed() && extra.iter().all(|(_, p)| *p);
            checks.extend(extra.iter().map(|(name, p)| json!({ "relation": name, "passed": p })));
            Ok(Report {
                body: Output::Json(json!({ "category": category, "n": n, "k": k, "passed": passed, "checks": checks })),
                passed,
            })
        }
        Command::Cumulants { moments, category } => {
            let m = parse_rationals("moments", &moments)?;
            let report = cumulants_from_moments(&m, category);
            let passed = report.violations.is_empty();
            Ok(Report {
                body: Output::Json(json!({
                    "category": category,
                    "kappa": kappa_json(&report.spec),
                    "violations": report.violations,
                })),
                passed,
            })
        }
        Command::Bernoulli { mu, var, upto } => {
            let mu = parse_rational(&mu).map_err(|e| usage(format!("--mu: {e}")))?;
            let var = parse_rational(&var).map_err(|e| usage(format!("--var: {e}")))?;
            let params = BernoulliParams::new(mu, var).map_err(|e| usage(format!("--var: {e}")))?;
            let mut moments = Vec::new();
            let mut passed = true;
            for m in 1..=upto {
                let value = bernoulli_moment(&params, m);
                let closed = bernoulli_moment_closed(&params, m)?;
                passed &= closed == value && bernoulli_moment_recurrence(&params, m) == value;
                moments.push(q(&value));
            }
            Ok(Report {
                body: Output::Json(json!({
                    "mean": q(&params.mean),
                    "variance": q(&params.variance),
                    "rational_roots": params.has_rational_roots(),
                    "moments": moments,
                    "closed_form_agrees": passed,
                })),
                passed,
            })
        }
        Command::Definetti {
            category,
            kappa,
            k,
            n,
            n0,
        } => {
            let spec = CumulantSpec::new(category, parse_kappa(&kappa)?);
            spec.validate()?;
            let (lo, hi) = parse_range(&n)?;
            check_cells(hi, k)?;
            let mut rows = Vec::new();
            let mut passed = true;
            for n in lo..=hi {
                let invariance = match forward_invariance_check(&spec, k, n) {
                    Ok(r) => r,
                    Err(Error::Singular) => {
                        rows.push(json!({ "n": n, "status": "singular" }));
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                passed &= invariance.is_zero();
                let mut worst = BigRational::zero();
                let mut worst_far: Option<BigRational> = None;
                let n0 = n0.map(|v| v.min(n));
                for class in shared_kernel_classes(k, n).iter() {
                    let r = id_cumulant_residual(category, n, &class.representative, n0)?;
                    if r.residual > worst {
                        worst = r.residual;
                    }
                    if let Some(f) = r.far_residual {
                        if worst_far.as_ref().is_none_or(|w| f > *w) {
                            worst_far = Some(f);
                        }
                    }
                }
                rows.push(json!({
                    "n": n,
                    "invariance_residual": q(&invariance),
                    "id_cumulant_residual": q(&worst),
                    "far_residual": worst_far.as_ref().map(q),
                }));
            }
            Ok(Report {
                body: Output::Json(json!({ "category": category, "k": k, "kappa": kappa_json(&spec), "rows": rows })),
                passed,
            })
        }
        Command::DefinettiRecover { moments } => {
            let text = std::fs::read_to_string(&moments)
                .map_err(|e| usage(format!("--moments {}: {e}", moments.display())))?;
            let family: MomentFamily =
                serde_json::from_str(&text).map_err(|e| usage(format!("--moments {}: {e}", moments.display())))?;
            let cap = max_cells()?;
            if family.vectors.iter().any(|v| v.values.len() > cap) {
                return Err(usage(format!("--moments: a vector exceeds BW_MAX_CELLS={cap}")));
            }
            match recover_cumulants(&family) {
                Ok(r) => ok(json!({ "recovered": r.spec, "orders": r.orders, "classes_checked": r.classes_checked })),
                Err(Error::InconsistentMoments(msg)) => Ok(Report {
                    body: Output::Json(json!({ "error": "inconsistent moments", "detail": msg })),
                    passed: false,
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify {
            all,
            criterion,
            max_k,
            max_n,
            seed,
        } => {
            if !all && criterion.is_empty() {
                return Err(usage("verify: pass --all or at least one --criterion"));
            }
            let mut grid = match (max_k, max_n) {
                (None, None) => Grid::full(),
                (k, n) => Grid::capped(k.unwrap_or(usize::MAX), n.unwrap_or(usize::MAX)),
            };
            grid.max_cells = max_cells()?;
            if let Some(seed) = seed {
                grid.seed = seed;
            }
            let results = if all {
                run_all(&grid)
            } else {
                let mut out = Vec::new();
                for id in criterion {
                    if !CRITERIA.iter().any(|(c, _)| *c == id) {
                        return Err(usage(format!("--criterion: no criterion {id}")));
                    }
                    out.push(run_criterion(id, &grid)?);
                }
                out
            };
            let passed = results.iter().all(|r| r.passed);
            let rows: Vec<Value> = results
                .iter()
                .map(|r| json!({ "criterion": r.id, "name": r.name, "passed": r.passed, "detail": r.detail }))
                .collect();
            Ok(Report {
                body: Output::Json(json!({ "passed": passed, "results": rows })),
                passed,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            let text = match report.body {
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("JSON values serialize"),
                Output::Text(t) => t,
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(if f.usage { 2 } else { 1 })
        }
    }
}
