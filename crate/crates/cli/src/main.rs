//! `uelr`: build codes, measure them, evaluate bounds and run experiments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use uelr_core::bound::{
    a2_exact, b_max_weight, cm_bound, fig1_csv, fig1_curves, general_bsc_threshold, griesmer_slack, johnson_upper,
    ldgm_converse, linear_bec_threshold, linear_grid, locality_singleton, locality_threshold, ut_feasible,
};
use uelr_core::codefile::StoredCode;
use uelr_core::decode::{local_repair, repair_plan};
use uelr_core::experiment::{run_experiment, Constructor, ExperimentConfig};
use uelr_core::lab::Runner;
use uelr_core::metric::update_cost;
use uelr_core::rng::{derive_seed, GENERATOR};
use uelr_core::{BitVec, Budget, Encoder, EnsembleMode, HammingForm, MetricsReport, ReceivedWord};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "uelr", version, about = "Update-efficient and locally repairable binary codes")]
struct Cli {
    /// Seed for randomized commands; generated and recorded when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for experiments (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a code file.
    #[command(subcommand)]
    Construct(Construct),
    /// Update-efficiency, distance and locality of a code file.
    Metrics {
        code: PathBuf,
        /// Report what is computable when `2^k` exceeds the enumeration budget.
        #[arg(long)]
        allow_partial: bool,
    },
    /// Evaluate a bound or threshold.
    #[command(subcommand)]
    Bounds(Bounds),
    /// Run an experiment config.
    Simulate { config: PathBuf },
    /// Rebuild one erased symbol from its repair group.
    Repair {
        code: PathBuf,
        /// Received word, `?` for erasures, leftmost symbol is position 1.
        #[arg(long)]
        word: String,
        /// 1-based position to rebuild.
        #[arg(long)]
        position: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Sparse,
    Systematic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    FixedWeight,
    Bernoulli,
}

#[derive(Subcommand)]
enum Construct {
    /// `[2^m - 1, 2^m - 1 - m, 3]` Hamming code.
    Hamming {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "sparse")]
        form: Form,
    },
    /// `[n, 1, n]` repetition code.
    Repetition {
        #[arg(long)]
        n: usize,
    },
    /// `[n, n-1, 2]` single-parity-check code.
    Spc {
        #[arg(long)]
        n: usize,
    },
    /// Copies of a linear code side by side.
    Concatenated {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        copies: usize,
    },
    /// Random regular LDPC code.
    Ldpc {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        check_degree: usize,
    },
    /// Random low-density generator matrix.
    Ldgm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value = "fixed-weight")]
        mode: Mode,
    },
    /// Nonlinear positional code with `c` repetitions.
    Positional {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: usize,
    },
}

#[derive(Args)]
struct Fig1Args {
    #[arg(long, default_value_t = 0.05)]
    p_min: f64,
    #[arg(long, default_value_t = 0.45)]
    p_max: f64,
    #[arg(long, default_value_t = 9)]
    steps: usize,
}

#[derive(Subcommand)]
enum Bounds {
    /// Row-weight threshold for linear codes on the BEC.
    Thm5 {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps: f64,
    },
    /// Update-efficiency threshold for any code on the BSC.
    Thm6 {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// LDGM ensemble converse predictions.
    Thm8 {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Locality threshold on the BEC.
    Thm9 {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps: f64,
    },
    /// Coefficient table as CSV.
    Fig1(Fig1Args),
    /// Upper bound on log2 M from locality and distance.
    Cm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
    },
    /// Griesmer slack `s` and the update-efficiency range `[d, d + s]`.
    Griesmer {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
    /// Largest distance for locality `r`.
    Singleton {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
    /// Exact A2(n, d).
    A2 {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        d: usize,
    },
    /// Exact B(n, d, t) and the Johnson bound.
    B {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: usize,
    },
    /// Whether `u` basis vectors of weight at most `t` fit an `[n, k, d]` code.
    Ut {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        t: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let out = cli.output.as_deref();
    match cli.command {
        Command::Construct(c) => construct(c, cli.seed, out),
        Command::Metrics { code, allow_partial } => metrics(&code, allow_partial, out),
        Command::Bounds(b) => bounds(b, out),
        Command::Simulate { config } => simulate(&config, cli.seed, cli.threads, out),
        Command::Repair { code, word, position } => repair(&code, &word, position, out),
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos() as u64);
        derive_seed(nanos ^ u64::from(std::process::id()), "auto")
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Machine output goes to `out` with a one-line summary on stdout, or to
/// stdout when no file is given.
fn emit(out: Option<&Path>, doc: &Value, summary: &str) -> Result<()> {
    match out {
        Some(path) => {
            write_file(path, &pretty(doc))?;
            println!("{summary}");
            println!("wrote {}", path.display());
        }
        None => print!("{}", pretty(doc)),
    }
    Ok(())
}

fn load_code(path: &Path) -> Result<StoredCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    StoredCode::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn construct(c: Construct, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let randomized = matches!(c, Construct::Ldpc { .. } | Construct::Ldgm { .. });
    let seed = randomized.then(|| resolve_seed(seed));
    let (name, params, code) = match c {
        Construct::Hamming { m, form } => {
            let form = match form {
                Form::Sparse => HammingForm::SparseTriples,
                Form::Systematic => HammingForm::Systematic,
            };
            let spec = Constructor::Hamming { m, form };
            ("hamming", json!({"m": m, "form": form}), spec.build()?)
        }
        Construct::Repetition { n } => ("repetition", json!({"n": n}), Constructor::Repetition { n }.build()?),
        Construct::Spc { n } => {
            ("single_parity_check", json!({"n": n}), Constructor::SingleParityCheck { n }.build()?)
        }
        Construct::Concatenated { base, copies } => {
            let stored = load_code(&base)?;
            let Some(linear) = stored.as_linear() else {
                bail!("{} is not a full-rank linear code", base.display());
            };
            let code = StoredCode::Linear(uelr_core::concatenated(linear, copies)?);
            ("concatenated", json!({"base": base, "copies": copies}), code)
        }
        Construct::Ldpc { m, rate, check_degree } => {
            let seed = seed.expect("randomized");
            let spec = Constructor::Ldpc { m, rate, check_degree, seed };
            ("ldpc", json!({"m": m, "rate": rate, "check_degree": check_degree}), spec.build()?)
        }
        Construct::Ldgm { n, k, t, mode } => {
            let mode = match mode {
                Mode::FixedWeight => EnsembleMode::FixedWeight,
                Mode::Bernoulli => EnsembleMode::Bernoulli,
            };
            let spec = Constructor::Ldgm { n, k, t, seed: seed.expect("randomized"), mode };
            ("ldgm", json!({"n": n, "k": k, "t": t, "mode": mode}), spec.build()?)
        }
        Construct::Positional { k, c } => ("positional", json!({"k": k, "c": c}), Constructor::Positional { k, c }.build()?),
    };
    let provenance = json!({
        "tool": "uelr",
        "version": VERSION,
        "rng": GENERATOR,
        "constructor": name,
        "params": params,
        "seed": seed,
    });
    let enc = code.encoder();
    let mut summary = format!("{name}: n = {}, k = {}", enc.block_len(), enc.message_len());
    if let StoredCode::RankDeficient { rank, .. } = &code {
        summary.push_str(&format!(" (generator rank {rank})"));
    }
    match out {
        Some(path) => {
            write_file(path, &code.to_json_string(Some(provenance)))?;
            println!("{summary}");
            println!("wrote {}", path.display());
        }
        None => print!("{}", code.to_json_string(Some(provenance))),
    }
    Ok(())
}

fn metrics(path: &Path, allow_partial: bool, out: Option<&Path>) -> Result<()> {
    let budget = Budget::default();
    let code = load_code(path)?;
    let report = match &code {
        StoredCode::Linear(c) => {
            let r = MetricsReport::compute(c, &budget, allow_partial)?;
            serde_json::to_value(&r)?
        }
        StoredCode::Positional(p) => {
            let k = p.message_len();
            budget.check_messages(k)?;
            let mut t = 0;
            for x in 0..1u64 << k {
                for i in 0..k {
                    let mut e = BitVec::zeros(k);
                    e.set(i, true);
                    t = t.max(update_cost(p, &BitVec::from_index_msb(x, k), &e));
                }
            }
            json!({"n": p.block_len(), "k": k, "t": t})
        }
        StoredCode::RankDeficient { rank, .. } => bail!("generator has dependent rows (rank {rank})"),
    };
    let field = |k: &str| report.get(k).map_or_else(|| "-".to_string(), Value::to_string);
    let summary = ["n", "k", "d", "t", "r_upper", "r_exact"]
        .iter()
        .map(|k| format!("{k} = {}", field(k)))
        .collect::<Vec<_>>()
        .join(", ");
    let doc = json!({
        "tool": "uelr",
        "version": VERSION,
        "input": path,
        "allow_partial": allow_partial,
        "metrics": report,
    });
    emit(out, &doc, &summary)
}

fn bounds(b: Bounds, out: Option<&Path>) -> Result<()> {
    let (name, params, value, text): (&str, Value, Value, String) = match b {
        Bounds::Thm5 { n, k, p, eps } => {
            let t = linear_bec_threshold(n, k, p, eps)?;
            ("thm5", json!({"n": n, "k": k, "p": p, "eps": eps}), json!(t), t.to_string())
        }
        Bounds::Thm6 { k, p, alpha } => {
            let t = general_bsc_threshold(k, p, alpha)?;
            ("thm6", json!({"k": k, "p": p, "alpha": alpha}), json!(t), t.to_string())
        }
        Bounds::Thm8 { n, k, t, p, alpha } => {
            let c = ldgm_converse(n, k, t, p, alpha)?;
            let text = format!(
                "ensemble fraction >= {:.6}\nerror probability >= {:.6} (uncapped {:.6})\nweight threshold {}",
                c.ensemble_fraction_lb, c.error_prob_lb, c.error_prob_raw, c.weight_threshold
            );
            ("thm8", json!({"n": n, "k": k, "t": t, "p": p, "alpha": alpha}), json!(c), text)
        }
        Bounds::Thm9 { p, eps } => {
            let v = locality_threshold(p, eps)?;
            ("thm9", json!({"p": p, "eps": eps}), json!(v), format!("{v:.6}"))
        }
        Bounds::Fig1(a) => {
            let csv = fig1_csv(&fig1_curves(&linear_grid(a.p_min, a.p_max, a.steps)?)?);
            match out {
                Some(path) => {
                    write_file(path, &csv)?;
                    println!("fig1: {} rows", csv.lines().count() - 1);
                    println!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
            return Ok(());
        }
        Bounds::Cm { n, r, d } => {
            let v = cm_bound(n, r, d)?;
            ("cm", json!({"n": n, "r": r, "d": d}), json!(v), format_number(v))
        }
        Bounds::Griesmer { n, k, d } => {
            let s = griesmer_slack(n, k, d);
            let text = if s < 0 { format!("s = {s} (no such code)") } else { format!("s = {s}, {d} <= t <= {}", d as i64 + s) };
            ("griesmer", json!({"n": n, "k": k, "d": d}), json!(s), text)
        }
        Bounds::Singleton { n, k, r } => {
            let v = locality_singleton(n, k, r)?;
            ("singleton", json!({"n": n, "k": k, "r": r}), json!(v), v.to_string())
        }
        Bounds::A2 { n, d } => {
            let v = a2_exact(n, d)?;
            ("a2", json!({"n": n, "d": d}), json!(v), v.to_string())
        }
        Bounds::B { n, d, t } => {
            let v = b_max_weight(n, d, t)?;
            let j = johnson_upper(n, d, t);
            let text = match j {
                Some(j) => format!("{v} (johnson {j:.6})"),
                None => v.to_string(),
            };
            ("b", json!({"n": n, "d": d, "t": t}), json!({"exact": v, "johnson": j}), text)
        }
        Bounds::Ut { n, k, d, u, t } => {
            let v = ut_feasible(n, k, d, u, t)?;
            ("ut", json!({"n": n, "k": k, "d": d, "u": u, "t": t}), json!(v), v.to_string())
        }
    };
    match out {
        Some(path) => {
            let doc = json!({"tool": "uelr", "version": VERSION, "bound": name, "params": params, "value": value});
            write_file(path, &pretty(&doc))?;
            println!("{text}");
            println!("wrote {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v:.6}")
    }
}

fn simulate(path: &Path, seed: Option<u64>, threads: Option<usize>, out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut config: ExperimentConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if seed.is_some() {
        config.seed = seed;
    }
    config.seed = Some(resolve_seed(config.seed));
    let base_dir = path.parent().unwrap_or(Path::new("."));
    let runner = Runner::new(threads)?;
    let result = run_experiment(&config, base_dir, &runner, &Budget::default())?;
    let output = out.map(Path::to_path_buf).or_else(|| config.output.as_ref().map(|o| base_dir.join(o)));
    let doc = json!({
        "tool": "uelr",
        "version": VERSION,
        "rng": GENERATOR,
        "seed": config.seed,
        "config": config,
        "result": result,
    });
    let summary = format!("{:?} (seed {}): {}", config.experiment, config.seed.expect("resolved"), result.summary());
    emit(output.as_deref(), &doc, &summary)?;
    if let (Some(path), Some(csv)) = (&output, result.csv()) {
        let csv_path = path.with_extension("csv");
        write_file(&csv_path, &csv)?;
        println!("wrote {}", csv_path.display());
    }
    Ok(())
}

fn repair(path: &Path, word: &str, position: usize, out: Option<&Path>) -> Result<()> {
    let code = load_code(path)?;
    let Some(linear) = code.as_linear() else {
        bail!("repair needs a full-rank linear code");
    };
    let received = ReceivedWord::parse(word).context("word must use the characters 0, 1 and ?")?;
    if received.len() != linear.n() {
        bail!("word has {} symbols, code has n = {}", received.len(), linear.n());
    }
    if position == 0 || position > linear.n() {
        bail!("position must lie in 1..={}", linear.n());
    }
    let plan = repair_plan(linear, position - 1, &Budget::default())?;
    let bit = local_repair(&received, &plan)?;
    let query: Vec<usize> = plan.query.iter().map(|q| q + 1).collect();
    let summary = format!("position {position} = {} from {:?}", u8::from(bit), query);
    let doc = json!({
        "tool": "uelr",
        "version": VERSION,
        "input": path,
        "word": word,
        "position": position,
        "query": query,
        "value": u8::from(bit),
    });
    emit(out, &doc, &summary)
}
