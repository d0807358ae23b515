//! Command-line toolkit for tournaments and tournament kernels.
//!
//! Exit codes: 0 success, 1 validation or usage error, 2 internal
//! assertion failure.

mod verify;

use std::io::Read;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;

use tourlim::homcount::{densities, transitivity_report};
use tourlim::kdecomp::{decompose_kernel, decompose_segment_kernel, is_irreducible_kernel, reducibility_witness};
use tourlim::kdensity::{kernel_transitivity_report, t_general_segment, t_ind_of_digraph, t_ind_segment};
use tourlim::kernel::{eta, kernel_from_json_str, kernel_to_json, kernel_direct_sum, Segment};
use tourlim::rational::{format_rational, parse_rational, Rational};
use tourlim::sampler::{mc_density, sample_tournament, SampleConfig};
use tourlim::tdecomp::{decompose, is_irreducible};
use tourlim::tournament::{direct_sum, Digraph, OrderedParts, Tournament};
use tourlim::SegmentKernel;

#[derive(Parser)]
#[command(
    name = "tourlim",
    about = "Exact densities, decompositions and W-random sampling for tournaments and tournament kernels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON instead of line-oriented text.
    #[arg(long, global = true)]
    json: bool,
    /// Print numeric results as decimals instead of p/q rationals.
    #[arg(long, global = true)]
    decimal: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tournament and print it in the text format.
    Gen {
        /// transitive | cyclic | random-uniform | from-kernel
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Kernel file (for --family from-kernel).
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Densities of a pattern in a tournament or kernel target.
    Density {
        /// Named pattern (C3, P4, T5, E2, ...) or a tournament file.
        #[arg(long)]
        pattern: String,
        /// Tournament text file or kernel JSON file (auto-detected).
        #[arg(long)]
        target: PathBuf,
        /// t | tinj | tind (kernel targets: tinj coincides with t).
        #[arg(long, default_value = "tind")]
        kind: String,
        /// Exact computation (default).
        #[arg(long)]
        exact: bool,
        /// Monte Carlo estimate (kernel targets only).
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Canonical decomposition of a tournament or kernel.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Multi-criterion transitivity or irreducibility report.
    Check {
        #[arg(long, visible_alias = "kernel")]
        input: PathBuf,
        /// transitive | irreducible
        #[arg(long)]
        property: String,
    },
    /// Ordered direct sum of tournaments, or of kernels with weights.
    Dsum {
        /// Comma-separated kernel weights, e.g. 1/2,1/4,1/4.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Tournament files, kernel files, or the built-ins
        /// `transitive` / `uniform`.
        inputs: Vec<String>,
    },
    /// Sample a W-random tournament from a kernel.
    Sample {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo density estimate with exact cross-check when available.
    Estimate {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The cumulative embedding of a kernel's segments into [0, 1).
    Eta {
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Run the built-in verification suites.
    Verify {
        /// identities | decomposition | sampling | all
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug)]
enum CliError {
    Validation(String),
}

impl From<tourlim::Error> for CliError {
    fn from(e: tourlim::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("io error: {e}"))
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successes; anything else is a usage error
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = panic::catch_unwind(move || run(cli));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CliError::Validation(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(_) => {
            eprintln!("internal assertion failure");
            ExitCode::from(2)
        }
    }
}

/// Either kind of analysable object, auto-detected from file content.
enum Input {
    Tournament(Tournament),
    Kernel(SegmentKernel),
}

fn read_file(path: &Path) -> CliResult<String> {
    let mut text = String::new();
    std::fs::File::open(path)
        .map_err(|e| CliError::Validation(format!("cannot open {}: {e}", path.display())))?
        .read_to_string(&mut text)?;
    Ok(text)
}

fn load_input(path: &Path) -> CliResult<Input> {
    let text = read_file(path)?;
    if text.trim_start().starts_with('{') {
        Ok(Input::Kernel(kernel_from_json_str(&text)?))
    } else {
        Ok(Input::Tournament(Tournament::parse(&text)?))
    }
}

fn load_kernel(path: &Path) -> CliResult<SegmentKernel> {
    match load_input(path)? {
        Input::Kernel(w) => Ok(w),
        Input::Tournament(_) => Err(CliError::Validation(format!(
            "{} is a tournament file, expected a kernel",
            path.display()
        ))),
    }
}

/// Resolves a named pattern: a letter among C/P/T/E and a positive size.
fn named_pattern(name: &str) -> Option<Digraph> {
    let (letter, digits) = name.split_at(1);
    let k: usize = digits.parse().ok().filter(|&k| k >= 1)?;
    match letter {
        "C" | "c" => Digraph::cycle(k).ok(),
        "P" | "p" => Digraph::path(k).ok(),
        "T" | "t" => Digraph::transitive(k).ok(),
        "E" | "e" => Digraph::empty(k).ok(),
        _ => None,
    }
}

fn load_pattern(name: &str) -> CliResult<Digraph> {
    if let Some(d) = named_pattern(name) {
        return Ok(d);
    }
    let path = Path::new(name);
    if path.exists() {
        let text = read_file(path)?;
        return Ok(Tournament::parse(&text)?.to_digraph());
    }
    Err(CliError::Validation(format!(
        "unknown pattern {name:?}: expected C<k>, P<k>, T<k>, E<k> or a tournament file"
    )))
}

struct Output {
    json: bool,
    decimal: bool,
}

impl Output {
    fn number(&self, r: &Rational) -> String {
        if self.decimal {
            format!("{}", r.to_f64().unwrap_or(f64::NAN))
        } else {
            format_rational(r)
        }
    }

    fn number_json(&self, r: &Rational) -> serde_json::Value {
        if self.decimal {
            serde_json::json!(r.to_f64().unwrap_or(f64::NAN))
        } else {
            serde_json::Value::String(format_rational(r))
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let output = Output {
        json: cli.json,
        decimal: cli.decimal,
    };
    match cli.command {
        Command::Gen {
            family,
            n,
            kernel,
            seed,
            out,
        } => {
            let g = match family.as_str() {
                "transitive" => Tournament::transitive(n)?,
                "cyclic" => Tournament::cyclic(n)?,
                "random-uniform" => {
                    if n == 0 {
                        return Err(CliError::Validation("InvalidSize: n must be at least 1".into()));
                    }
                    Tournament::random_uniform(n, seed)
                }
                "from-kernel" => {
                    let path = kernel.ok_or_else(|| {
                        CliError::Validation("--family from-kernel needs --kernel FILE".into())
                    })?;
                    let w = load_kernel(&path)?;
                    sample_tournament(&w, &SampleConfig::new(n, seed, 1))
                }
                other => {
                    return Err(CliError::Validation(format!(
                        "unknown family {other:?}: expected transitive, cyclic, random-uniform or from-kernel"
                    )))
                }
            };
            emit(&out, &g.to_text())
        }

        Command::Density {
            pattern,
            target,
            kind,
            exact,
            mc,
            reps,
            seed,
        } => {
            if exact && mc {
                return Err(CliError::Validation("--exact and --mc are mutually exclusive".into()));
            }
            let f = load_pattern(&pattern)?;
            match load_input(&target)? {
                Input::Tournament(g) => {
                    if mc {
                        return Err(CliError::Validation(
                            "--mc estimates kernel densities; the target is a tournament".into(),
                        ));
                    }
                    let d = densities(&f, &g.to_digraph())?;
                    let value = match kind.as_str() {
                        "t" => d.t,
                        "tinj" => d.t_inj,
                        "tind" => d.t_ind,
                        other => {
                            return Err(CliError::Validation(format!(
                                "unknown kind {other:?}: expected t, tinj or tind"
                            )))
                        }
                    };
                    if output.json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "pattern": pattern,
                                "kind": kind,
                                "value": output.number_json(&value),
                            })
                        );
                    } else {
                        println!("{}", output.number(&value));
                    }
                    Ok(())
                }
                Input::Kernel(w) => {
                    if mc {
                        let ft = f.as_tournament().map_err(|_| {
                            CliError::Validation(
                                "Monte Carlo estimates need a tournament pattern".into(),
                            )
                        })?;
                        let exact_value = t_ind_segment(&ft, &w).ok();
                        let report = mc_density(
                            &ft,
                            &w,
                            &SampleConfig::new(ft.n(), seed, reps),
                            exact_value,
                        );
                        if output.json {
                            println!("{}", estimate_json(&report, &output));
                        } else {
                            println!("{}", report.describe());
                        }
                        return Ok(());
                    }
                    let value = match kind.as_str() {
                        "t" | "tinj" => t_general_segment(&f, &w)?,
                        "tind" => {
                            let d = t_ind_of_digraph(&f, &w)?;
                            if !d.pattern_is_tournament && !output.json {
                                eprintln!("note: pattern is not a tournament; induced density is 0");
                            }
                            d.value
                        }
                        other => {
                            return Err(CliError::Validation(format!(
                                "unknown kind {other:?}: expected t, tinj or tind"
                            )))
                        }
                    };
                    if output.json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "pattern": pattern,
                                "kind": kind,
                                "value": output.number_json(&value),
                            })
                        );
                    } else {
                        println!("{}", output.number(&value));
                    }
                    Ok(())
                }
            }
        }

        Command::Decompose { input } => match load_input(&input)? {
            Input::Tournament(g) => {
                let d = decompose(&g);
                if output.json {
                    let comps: Vec<serde_json::Value> = d
                        .components
                        .iter()
                        .map(|c| serde_json::json!({"kind": c.kind.as_str(), "vertices": c.vertices}))
                        .collect();
                    let coarse: Vec<serde_json::Value> = d
                        .coarse
                        .iter()
                        .map(|c| serde_json::json!({"kind": c.kind.as_str(), "vertices": c.vertices}))
                        .collect();
                    println!(
                        "{}",
                        serde_json::json!({"components": comps, "coarse": coarse})
                    );
                } else {
                    println!("components: {}", d.components.len());
                    for c in &d.components {
                        println!("  {} {:?}", c.kind.as_str(), c.vertices);
                    }
                    println!("coarse: {}", d.coarse.len());
                    for c in &d.coarse {
                        println!("  {} {:?}", c.kind.as_str(), c.vertices);
                    }
                }
                Ok(())
            }
            Input::Kernel(w) => {
                let canonical = decompose_segment_kernel(&w)?;
                // per-atom block maps of the input kernel
                let mut block_maps: Vec<serde_json::Value> = Vec::new();
                for seg in w.segments() {
                    if let Segment::Atom { kernel, .. } = seg {
                        let d = decompose_kernel(kernel)?;
                        block_maps.push(serde_json::json!(d.block_map));
                    }
                }
                if output.json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "kernel": kernel_to_json(&canonical),
                            "block_maps": block_maps,
                        })
                    );
                } else {
                    println!("segments: {}", canonical.segment_count());
                    for (i, seg) in canonical.segments().iter().enumerate() {
                        match seg {
                            Segment::Atom { weight, kernel } => println!(
                                "  {i}: atom weight {} blocks {}",
                                output.number(weight),
                                kernel.block_count()
                            ),
                            Segment::Transitive { weight } => {
                                println!("  {i}: transitive weight {}", output.number(weight))
                            }
                        }
                    }
                    println!("{}", kernel_to_json(&canonical));
                }
                Ok(())
            }
        },

        Command::Check { input, property } => match (load_input(&input)?, property.as_str()) {
            (Input::Tournament(g), "transitive") => {
                let rep = transitivity_report(&g);
                if output.json {
                    let c = rep.criteria();
                    println!(
                        "{}",
                        serde_json::json!({
                            "property": "transitive",
                            "verdict": rep.verdict(),
                            "criteria": {
                                "relation_transitive": c[0],
                                "acyclic": c[1],
                                "no_c3": c[2],
                                "orderable": c[3],
                                "score_sum": c[4],
                                "path_counts": c[5],
                                "p3_count": c[6],
                                "transitive_counts": c[7],
                                "t3_count": c[8],
                            },
                            "c3_count": rep.c3_count.to_string(),
                            "score_sum": rep.score_sum.to_string(),
                        })
                    );
                } else {
                    println!("verdict: {}", rep.verdict());
                    println!("relation_transitive = {}", rep.relation_transitive);
                    println!("acyclic = {}", rep.acyclic);
                    println!("no_c3 = {} (c3_count = {})", rep.no_c3, rep.c3_count);
                    println!("orderable = {}", rep.orderable);
                    println!(
                        "score_sum = {} (got {}, expected {})",
                        rep.score_sum_matches, rep.score_sum, rep.expected_score_sum
                    );
                    println!("path_counts = {}", rep.path_counts_match);
                    println!("p3_count = {}", rep.p3_count_matches);
                    println!("transitive_counts = {}", rep.transitive_counts_match);
                    println!("t3_count = {}", rep.t3_count_matches);
                    println!("all_agree = {}", rep.all_agree());
                }
                Ok(())
            }
            (Input::Tournament(g), "irreducible") => {
                let rep = is_irreducible(&g);
                if output.json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "property": "irreducible",
                            "verdict": rep.irreducible,
                            "classes": rep.class_count,
                            "witness": rep.witness,
                        })
                    );
                } else {
                    println!("verdict: {}", rep.irreducible);
                    println!("strongly_connected_classes = {}", rep.class_count);
                    if let Some(x) = &rep.witness {
                        println!("beaten_last_part = {x:?}");
                    }
                }
                Ok(())
            }
            (Input::Kernel(w), "transitive") => {
                let rep = kernel_transitivity_report(&w, 4)?;
                if output.json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "property": "transitive",
                            "verdict": rep.verdict(),
                            "t_c3": output.number_json(&rep.t_c3),
                            "t_p3": output.number_json(&rep.t_p3),
                            "t_t3": output.number_json(&rep.t_t3),
                            "score_integral": output.number_json(&rep.score_integral),
                            "criteria": {
                                "c3_vanishes": rep.c3_vanishes,
                                "p3_is_sixth": rep.p3_is_sixth,
                                "t3_is_sixth": rep.t3_is_sixth,
                                "score_is_third": rep.score_is_third,
                                "pk_match": rep.pk_match,
                                "tk_match": rep.tk_match,
                            },
                        })
                    );
                } else {
                    println!("verdict: {}", rep.verdict());
                    println!("t_c3 = {}", output.number(&rep.t_c3));
                    println!("t_p3 = {}", output.number(&rep.t_p3));
                    println!("t_t3 = {}", output.number(&rep.t_t3));
                    println!("score_integral = {}", output.number(&rep.score_integral));
                    println!(
                        "criteria: c3 {} p3 {} t3 {} score {} pk {} tk {}",
                        rep.c3_vanishes,
                        rep.p3_is_sixth,
                        rep.t3_is_sixth,
                        rep.score_is_third,
                        rep.pk_match,
                        rep.tk_match
                    );
                    println!("all_agree = {}", rep.all_agree());
                }
                Ok(())
            }
            (Input::Kernel(w), "irreducible") => {
                // a segment kernel is irreducible only as a lone atom
                let (verdict, witness): (bool, Option<Vec<usize>>) = match w.segments() {
                    [Segment::Atom { kernel, .. }] => {
                        (is_irreducible_kernel(kernel), reducibility_witness(kernel))
                    }
                    _ => (false, None),
                };
                if output.json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "property": "irreducible",
                            "verdict": verdict,
                            "witness_blocks": witness,
                            "segments": w.segment_count(),
                        })
                    );
                } else {
                    println!("verdict: {verdict}");
                    println!("segments = {}", w.segment_count());
                    if let Some(b) = witness {
                        println!("beaten_last_blocks = {b:?}");
                    } else if !verdict {
                        println!("reducible: more than one segment in the direct sum");
                    }
                }
                Ok(())
            }
            (_, other) => Err(CliError::Validation(format!(
                "unknown property {other:?}: expected transitive or irreducible"
            ))),
        },

        Command::Dsum {
            weights,
            out,
            inputs,
        } => {
            if inputs.is_empty() {
                return Err(CliError::Validation("Empty: at least one input is required".into()));
            }
            // built-in kernel names or files
            let mut kernels: Vec<SegmentKernel> = Vec::new();
            let mut tournaments: Vec<Tournament> = Vec::new();
            for input in &inputs {
                match input.as_str() {
                    "transitive" => kernels.push(SegmentKernel::transitive()),
                    "uniform" => kernels.push(SegmentKernel::from_step(
                        tourlim::kernel::quasirandom(),
                    )),
                    _ => match load_input(Path::new(input))? {
                        Input::Kernel(w) => kernels.push(w),
                        Input::Tournament(g) => tournaments.push(g),
                    },
                }
            }
            match (tournaments.is_empty(), kernels.is_empty()) {
                (false, true) => {
                    if weights.is_some() {
                        return Err(CliError::Validation(
                            "weights apply to kernel sums, not tournament sums".into(),
                        ));
                    }
                    let g = direct_sum(&OrderedParts::new(tournaments)?);
                    emit(&out, &g.to_text())
                }
                (true, false) => {
                    let weights = weights.ok_or_else(|| {
                        CliError::Validation("kernel sums need --weights w1,w2,...".into())
                    })?;
                    let ws: Vec<Rational> = weights
                        .split(',')
                        .map(|s| parse_rational(s).map_err(CliError::from))
                        .collect::<CliResult<_>>()?;
                    if ws.len() != kernels.len() {
                        return Err(CliError::Validation(format!(
                            "{} weights for {} kernels",
                            ws.len(),
                            kernels.len()
                        )));
                    }
                    let mut segments = Vec::new();
                    for (w, kernel) in ws.iter().zip(kernels) {
                        for seg in kernel.segments() {
                            segments.push(match seg {
                                Segment::Atom { weight, kernel } => Segment::Atom {
                                    weight: w * weight,
                                    kernel: kernel.clone(),
                                },
                                Segment::Transitive { weight } => Segment::Transitive {
                                    weight: w * weight,
                                },
                            });
                        }
                    }
                    let sum = kernel_direct_sum(segments)?;
                    emit(&out, &format!("{}\n", kernel_to_json(&sum)))
                }
                _ => Err(CliError::Validation(
                    "inputs must be all tournaments or all kernels".into(),
                )),
            }
        }

        Command::Sample { kernel, n, seed, out } => {
            let w = load_kernel(&kernel)?;
            let g = sample_tournament(&w, &SampleConfig::new(n, seed, 1));
            emit(&out, &g.to_text())
        }

        Command::Estimate {
            pattern,
            kernel,
            reps,
            seed,
        } => {
            let f = load_pattern(&pattern)?.as_tournament().map_err(|_| {
                CliError::Validation("Monte Carlo estimates need a tournament pattern".into())
            })?;
            let w = load_kernel(&kernel)?;
            let exact = t_ind_segment(&f, &w).ok();
            let report = mc_density(&f, &w, &SampleConfig::new(f.n(), seed, reps), exact);
            if output.json {
                println!("{}", estimate_json(&report, &output));
            } else {
                println!("{}", report.describe());
            }
            Ok(())
        }

        Command::Eta { kernel } => {
            let w = load_kernel(&kernel)?;
            let intervals = eta(&w);
            if output.json {
                let rows: Vec<serde_json::Value> = intervals
                    .iter()
                    .zip(w.segments())
                    .map(|(e, seg)| {
                        serde_json::json!({
                            "segment": e.segment,
                            "type": if seg.is_transitive() { "transitive" } else { "atom" },
                            "start": output.number_json(&e.start),
                            "width": output.number_json(&e.width),
                        })
                    })
                    .collect();
                println!("{}", serde_json::json!({ "intervals": rows }));
            } else {
                for (e, seg) in intervals.iter().zip(w.segments()) {
                    println!(
                        "segment {}: {} start {} width {}",
                        e.segment,
                        if seg.is_transitive() { "transitive" } else { "atom" },
                        output.number(&e.start),
                        output.number(&e.width)
                    );
                }
            }
            Ok(())
        }

        Command::Verify { suite } => verify::run(&suite).map_err(CliError::Validation),
    }
}

fn estimate_json(report: &tourlim::sampler::EstimateReport, output: &Output) -> serde_json::Value {
    serde_json::json!({
        "estimate": report.estimate,
        "std_error": report.std_error,
        "hits": report.hits,
        "reps": report.reps,
        "exact": report.exact.as_ref().map(|e| output.number_json(e)),
        "z": report.z,
    })
}
