//! Command-line front end: every module is reachable through a subcommand,
//! all randomness flows from an explicit seed, and output is machine-
//! readable JSON or CSV on stdout (diagnostics on stderr).
//!
//! Exit codes: 0 success, 1 verification failure (a rejected certificate or
//! a cover counterexample), 2 usage or parse errors.

use clap::{Parser, Subcommand, ValueEnum};
use littlestone_lab::certs::Certificate;
use littlestone_lab::class::{
    powerset, random_class, singletons, thresholds, ConceptClass, Hypothesis, LabeledSequence,
};
use littlestone_lab::dims::{self, DEFAULT_THRESHOLD_BUDGET};
use littlestone_lab::learners::{BudgetWrapper, Learner, Soa, TraceRecord};
use littlestone_lab::online::{build_cover, run_online, verify_cover, ExpertCover};
use littlestone_lab::pec::{estimate_global_stability, force_mind_changes, simulate_pec};
use littlestone_lab::sampling::{quantile_discrepancy, run_alln, AdversaryKind};
use littlestone_lab::stability::{
    epsilon_good_check, largest_good_subset, learner_mutual_information, pac_bayes_gap, InfoUnit,
};
use littlestone_lab::{io, Error, Result};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

/// Fixed default seed; never time-based.
const DEFAULT_SEED: u64 = 0x00C0_FFEE;

#[derive(Parser)]
#[command(
    name = "littlestone-lab",
    version,
    about = "Dimensions, learners, and stability measures for finite concept classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Compute VC, Littlestone, and threshold dimensions of a class.
    Dims {
        /// Class file or generator spec (thresholds:N, singletons:N,
        /// powerset:M, random:M,H,SEED).
        #[arg(long)]
        class: String,
        /// Exact-search size budget for the threshold dimension.
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_BUDGET)]
        budget: usize,
        /// Also compute the strict all-distinct-nodes tree dimension.
        #[arg(long)]
        strict_distinct: bool,
        /// Check pattern counts against the Sauer-Shelah-Perles bound for
        /// these comma-separated subset sizes.
        #[arg(long)]
        ssp: Option<String>,
        /// Write certificates to <PREFIX>.tree.json, <PREFIX>.halfgraph.json,
        /// <PREFIX>.shattered.json.
        #[arg(long, value_name = "PREFIX")]
        certs: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Verify a certificate file against a class (exit 1 if rejected).
    Certify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        class: String,
    },
    /// Run the SOA over a sequence file and emit its trace.
    Soa {
        #[arg(long)]
        class: String,
        #[arg(long)]
        seq: PathBuf,
        /// Diagnostic mode: recompute the hypothesis after every observation.
        #[arg(long)]
        eager: bool,
        /// Run even if the sequence is not realizable by the class.
        #[arg(long)]
        allow_unrealizable: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// PEC-learning simulation and the mind-change-forcing adversary.
    Pec {
        #[command(subcommand)]
        command: PecCommand,
    },
    /// Online SSP expert covers.
    Cover {
        #[command(subcommand)]
        command: CoverCommand,
    },
    /// Adversarial law-of-large-numbers simulation.
    Alln {
        #[command(subcommand)]
        command: AllnCommand,
    },
    /// Information-stability measures.
    Stability {
        #[command(subcommand)]
        command: StabilityCommand,
    },
    /// Epsilon-good subsets of a point set.
    Goodsets {
        #[arg(long)]
        class: String,
        #[arg(long)]
        eps: f64,
        /// Comma-separated point indices; defaults to the whole domain.
        #[arg(long)]
        set: Option<String>,
        /// Exact-search budget on |Y|.
        #[arg(long, default_value_t = 16)]
        budget: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Emit a generated class as a canonical class file.
    Generate {
        #[arg(long)]
        class: String,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PecCommand {
    /// Feed seeded i.i.d. draws to a learner and record the trace.
    Sim {
        #[arg(long)]
        class: String,
        /// Distribution file; defaults to uniform on the graph of the
        /// lexicographically first hypothesis.
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(long, default_value = "soa")]
        learner: String,
        #[arg(long, default_value_t = 1000)]
        horizon: usize,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Force mind changes out of a budgeted learner.
    Adversary {
        #[arg(long)]
        class: String,
        #[arg(long, default_value = "soa")]
        learner: String,
        #[arg(long)]
        budget: u64,
        /// Wrap the learner to freeze after the budget is spent.
        #[arg(long)]
        wrap: bool,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    /// Global-stability frequency estimate over seeded trials.
    Frequency {
        #[arg(long)]
        class: String,
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(long, default_value = "soa")]
        learner: String,
        #[arg(long = "n", default_value_t = 100)]
        sample_size: usize,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum CoverCommand {
    /// Build the expert cover for a horizon and print it.
    Build {
        #[arg(long)]
        class: String,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Verify a cover file (exit 1 on counterexample).
    Verify {
        #[arg(long)]
        class: String,
        #[arg(long)]
        cover: PathBuf,
        /// Enumeration budget before switching to sampling.
        #[arg(long, default_value_t = 5_000_000)]
        budget: usize,
        /// Sampled sequences when enumeration is infeasible.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum AllnCommand {
    /// Run seeded sampler-vs-adversary trials and report discrepancies.
    Sim {
        #[arg(long)]
        class: String,
        #[arg(long, default_value = "oblivious")]
        adversary: String,
        #[arg(long = "N", default_value_t = 4096)]
        stream_len: usize,
        #[arg(long = "n", default_value_t = 100)]
        sample_len: usize,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Display constant for the reference curve.
        #[arg(long, default_value_t = 1.0)]
        constant: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum StabilityCommand {
    /// Exact mutual information and PAC-Bayes gap of a learner.
    Info {
        #[arg(long)]
        class: String,
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(long, default_value = "soa")]
        learner: String,
        /// Sample size to enumerate.
        #[arg(long = "n", default_value_t = 2)]
        sample_size: usize,
        #[arg(long, default_value_t = 2_000_000)]
        budget: usize,
        /// Report in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Check epsilon-excellence of a vertex set against supplied good sets.
    Excellent {
        /// Adjacency-matrix JSON file (symmetric 0/1 entries).
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        eps: f64,
        /// Comma-separated vertex indices of the candidate set B.
        #[arg(long)]
        set: String,
        /// Semicolon-separated comma lists, one per epsilon-good set.
        #[arg(long)]
        good: String,
    },
}

fn load_class(spec: &str) -> Result<ConceptClass> {
    if let Some((name, params)) = spec.split_once(':') {
        match name {
            "thresholds" => return thresholds(parse_num(params)?),
            "singletons" => return singletons(parse_num(params)?),
            "powerset" => return powerset(parse_num(params)?),
            "random" => {
                let parts: Vec<&str> = params.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(format!(
                        "random generator wants random:M,H,SEED, got {spec:?}"
                    )));
                }
                return random_class(
                    parse_num(parts[0])?,
                    parse_num(parts[1])?,
                    parse_num(parts[2])? as u64,
                );
            }
            _ => {}
        }
    }
    let bytes = std::fs::read(spec)?;
    io::read_class(&bytes)
}

fn parse_num(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected a number, got {s:?}")))
}

fn build_learner(spec: &str, class: &Arc<ConceptClass>) -> Result<Box<dyn Learner>> {
    littlestone_lab::learners::from_spec(spec, class)
}

fn load_dist(
    path: &Option<PathBuf>,
    class: &ConceptClass,
) -> Result<littlestone_lab::FiniteDistribution> {
    match path {
        Some(p) => {
            let bytes = std::fs::read(p)?;
            io::read_distribution(&bytes, class.m())
        }
        None => littlestone_lab::FiniteDistribution::uniform_on_graph(class.hypothesis(0)),
    }
}

fn parse_point_set(spec: &str) -> Result<Vec<usize>> {
    spec.split(',').map(parse_num).collect::<Result<Vec<_>>>()
}

fn hyp_bits(h: &Hypothesis) -> Vec<u8> {
    h.to_u8_vec()
}

fn trace_json_lines(records: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let line = json!({
            "step": r.step,
            "point": r.point,
            "label": r.label as u8,
            "predicted": r.predicted as u8,
            "mistake": r.mistake,
            "mind_change": r.mind_change,
            "hypothesis": hyp_bits(&r.hypothesis),
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

fn trace_csv(records: &[TraceRecord]) -> String {
    let mut out = String::from("step,point,label,predicted,mistake,mind_change,hypothesis\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:?}\n",
            r.step,
            r.point,
            r.label as u8,
            r.predicted as u8,
            r.mistake,
            r.mind_change,
            r.hypothesis
        ));
    }
    out
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Dims {
            class,
            budget,
            strict_distinct,
            ssp,
            certs,
            format,
        } => {
            let class = load_class(&class)?;
            let vc = dims::vc_dim(&class);
            let l = dims::ldim(&class);
            let t = dims::threshold_dim(&class, budget);
            let ssp_report = ssp
                .map(|sizes| {
                    let parsed = parse_point_set(&sizes)?;
                    dims::ssp_check(&class, &parsed, 100_000, DEFAULT_SEED)
                })
                .transpose()?;
            if let Some(prefix) = &certs {
                if class.is_empty() {
                    return Err(Error::InvalidArgument(
                        "the empty class has no certificates".into(),
                    ));
                }
                let base = prefix.to_string_lossy();
                std::fs::write(
                    format!("{base}.tree.json"),
                    io::write_tree_cert(&dims::ldim_certificate(&class)?),
                )?;
                if let Some(hg) = &t.certificate {
                    std::fs::write(
                        format!("{base}.halfgraph.json"),
                        io::write_half_graph_cert(hg),
                    )?;
                }
                std::fs::write(
                    format!("{base}.shattered.json"),
                    io::write_shattered_set_cert(&dims::vc_certificate(&class)?),
                )?;
            }
            match format {
                Format::Json => {
                    #[derive(serde::Serialize)]
                    struct DimsOut {
                        vc: i32,
                        ldim: i32,
                        threshold: usize,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        threshold_lower_bound_only: Option<bool>,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        ldim_distinct: Option<i32>,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        ssp: Option<dims::SspReport>,
                    }
                    let out = DimsOut {
                        vc,
                        ldim: l,
                        threshold: t.k,
                        threshold_lower_bound_only: t.lower_bound_only.then_some(true),
                        ldim_distinct: strict_distinct.then(|| dims::ldim_distinct_nodes(&class)),
                        ssp: ssp_report,
                    };
                    println!("{}", serde_json::to_string(&out)?);
                }
                Format::Csv => {
                    println!("vc,ldim,threshold,lower_bound_only");
                    println!("{vc},{l},{},{}", t.k, t.lower_bound_only);
                }
            }
            Ok(0)
        }
        Command::Certify { cert, class } => {
            let class = load_class(&class)?;
            let bytes = std::fs::read(&cert)?;
            let certificate: Certificate = io::read_certificate(&bytes)?;
            match certificate.verify(&class) {
                Ok(()) => {
                    println!("{}", json!({"valid": true, "kind": certificate.kind()}));
                    Ok(0)
                }
                Err(e) => {
                    println!(
                        "{}",
                        json!({"valid": false, "kind": certificate.kind(), "reason": e.to_string()})
                    );
                    eprintln!("certificate rejected: {e}");
                    Ok(1)
                }
            }
        }
        Command::Soa {
            class,
            seq,
            eager,
            allow_unrealizable,
            format,
        } => {
            let class = Arc::new(load_class(&class)?);
            let seq_bytes = std::fs::read(&seq)?;
            let sequence: LabeledSequence = io::read_sequence(&seq_bytes)?;
            let mut learner = Soa::with_mode(class.clone(), eager)?;
            let run = run_online(&mut learner, &class, &sequence, allow_unrealizable)?;
            match format {
                Format::Json => print!("{}", trace_json_lines(&run.records)),
                Format::Csv => print!("{}", trace_csv(&run.records)),
            }
            eprintln!(
                "mistakes={} mind_changes={} realizable={} divergences={}",
                run.mistakes,
                learner.mind_changes(),
                run.realizable,
                learner.divergences()
            );
            Ok(0)
        }
        Command::Pec { command } => run_pec(command),
        Command::Cover { command } => run_cover(command),
        Command::Alln { command } => run_alln_cmd(command),
        Command::Stability { command } => run_stability(command),
        Command::Goodsets {
            class,
            eps,
            set,
            budget,
            format,
        } => {
            let class = load_class(&class)?;
            let points = match set {
                Some(s) => parse_point_set(&s)?,
                None => (0..class.m()).collect(),
            };
            let (good, violator) = epsilon_good_check(&points, &class, eps)?;
            let report = largest_good_subset(&points, &class, eps, budget)?;
            match format {
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "eps": eps,
                            "set": points,
                            "set_good": good,
                            "violating_hypothesis": violator.as_ref().map(hyp_bits),
                            "largest_subset": report.subset,
                            "largest_size": report.subset.len(),
                            "exact": report.exact,
                            "exponent": report.exponent,
                        })
                    );
                }
                Format::Csv => {
                    println!("set_size,set_good,largest_size,exact,exponent");
                    println!(
                        "{},{},{},{},{}",
                        points.len(),
                        good,
                        report.subset.len(),
                        report.exact,
                        report.exponent.map_or(String::from(""), |e| e.to_string())
                    );
                }
            }
            Ok(0)
        }
        Command::Generate { class, out } => {
            let class = load_class(&class)?;
            let bytes = io::write_class(&class);
            match out {
                Some(path) => std::fs::write(path, bytes)?,
                None => print!("{}", String::from_utf8_lossy(&bytes)),
            }
            Ok(0)
        }
    }
}

fn run_pec(command: PecCommand) -> Result<u8> {
    match command {
        PecCommand::Sim {
            class,
            dist,
            learner,
            horizon,
            trials,
            seed,
            format,
        } => {
            let class = Arc::new(load_class(&class)?);
            let d = load_dist(&dist, &class)?;
            if trials == 1 && format == Format::Json {
                let mut l = build_learner(&learner, &class)?;
                let trace = simulate_pec(l.as_mut(), &d, &class, horizon, seed)?;
                println!(
                    "{}",
                    json!({
                        "horizon": trace.horizon,
                        "hypotheses": trace.hypotheses.iter().map(hyp_bits).collect::<Vec<_>>(),
                        "steps": trace.steps.iter().map(|s| json!({
                            "step": s.step,
                            "hypothesis": s.hypothesis_id,
                            "loss": s.loss,
                            "mind_change": s.mind_change,
                        })).collect::<Vec<_>>(),
                        "summary": {
                            "mind_changes": trace.summary.mind_changes,
                            "first_zero_loss_step": trace.summary.first_zero_loss_step,
                            "terminal_loss": trace.summary.terminal_loss,
                        },
                    })
                );
                return Ok(0);
            }
            if format == Format::Csv {
                println!("trial,mind_changes,first_zero_loss_step,terminal_loss");
            }
            for trial in 0..trials {
                let mut l = build_learner(&learner, &class)?;
                let trace = simulate_pec(
                    l.as_mut(),
                    &d,
                    &class,
                    horizon,
                    seed.wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
                )?;
                match format {
                    Format::Csv => println!(
                        "{},{},{},{}",
                        trial,
                        trace.summary.mind_changes,
                        trace
                            .summary
                            .first_zero_loss_step
                            .map_or(String::from(""), |s| s.to_string()),
                        trace.summary.terminal_loss
                    ),
                    Format::Json => println!(
                        "{}",
                        json!({
                            "trial": trial,
                            "mind_changes": trace.summary.mind_changes,
                            "first_zero_loss_step": trace.summary.first_zero_loss_step,
                            "terminal_loss": trace.summary.terminal_loss,
                        })
                    ),
                }
            }
            Ok(0)
        }
        PecCommand::Frequency {
            class,
            dist,
            learner,
            sample_size,
            trials,
            seed,
        } => {
            let class = Arc::new(load_class(&class)?);
            let d = load_dist(&dist, &class)?;
            let spec = learner;
            let est = estimate_global_stability(
                || build_learner(&spec, &class),
                &d,
                &class,
                sample_size,
                trials,
                seed,
            )?;
            println!(
                "{}",
                json!({
                    "modal_hypothesis": hyp_bits(&est.modal),
                    "frequency": est.frequency,
                    "half_width": est.half_width,
                    "trials": est.trials,
                    "distinct_outputs": est.table.len(),
                })
            );
            Ok(0)
        }
        PecCommand::Adversary {
            class,
            learner,
            budget,
            wrap,
            cap,
        } => {
            let class = Arc::new(load_class(&class)?);
            let spec = learner;
            let verdict = force_mind_changes(
                || {
                    let inner = build_learner(&spec, &class)?;
                    if wrap {
                        Ok(Box::new(BudgetWrapper::new(inner, budget)) as Box<dyn Learner>)
                    } else {
                        Ok(inner)
                    }
                },
                &class,
                budget,
                cap,
            )?;
            println!(
                "{}",
                json!({
                    "verdict": verdict.outcome.as_str(),
                    "budget": verdict.budget,
                    "mind_changes": verdict.mind_changes,
                    "sequence": verdict.sequence.items.iter()
                        .map(|ex| (ex.point, ex.label as u8)).collect::<Vec<_>>(),
                    "distribution": verdict.distribution.as_ref().map(|d| d.atoms().iter()
                        .map(|a| (a.point, a.label as u8, a.weight)).collect::<Vec<_>>()),
                    "transcript_len": verdict.transcript.len(),
                })
            );
            Ok(0)
        }
    }
}

fn run_cover(command: CoverCommand) -> Result<u8> {
    match command {
        CoverCommand::Build {
            class,
            horizon,
            budget,
        } => {
            let class = Arc::new(load_class(&class)?);
            let cover = build_cover(&class, horizon, budget)?;
            let file = io::CoverFile {
                n: cover.n,
                d: cover.d,
                subsets: cover.subsets.clone(),
            };
            println!("{}", serde_json::to_string(&file)?);
            Ok(0)
        }
        CoverCommand::Verify {
            class,
            cover,
            budget,
            trials,
            seed,
        } => {
            let class = Arc::new(load_class(&class)?);
            let bytes = std::fs::read(&cover)?;
            let file: io::CoverFile = serde_json::from_slice(&bytes)
                .map_err(|e| Error::Parse(format!("cover file: {e}")))?;
            let cover = ExpertCover::from_subsets(class, file.n, file.d, file.subsets);
            let v = verify_cover(&cover, budget, trials, seed)?;
            println!(
                "{}",
                json!({
                    "covered": v.covered,
                    "exhaustive": v.exhaustive,
                    "sequences_checked": v.sequences_checked,
                    "counterexample": v.counterexample.as_ref().map(|s| s.items.iter()
                        .map(|ex| (ex.point, ex.label as u8)).collect::<Vec<_>>()),
                })
            );
            Ok(if v.covered { 0 } else { 1 })
        }
    }
}

fn run_alln_cmd(command: AllnCommand) -> Result<u8> {
    match command {
        AllnCommand::Sim {
            class,
            adversary,
            stream_len,
            sample_len,
            trials,
            delta,
            constant,
            seed,
            format,
        } => {
            let class = load_class(&class)?;
            let kind = match adversary.as_str() {
                "oblivious" => AdversaryKind::ObliviousUniform,
                "round-robin" => AdversaryKind::RoundRobin,
                "chaser" => AdversaryKind::ThresholdChaser,
                other => {
                    return Err(Error::Parse(format!(
                        "unknown adversary {other:?} (expected oblivious, round-robin, chaser)"
                    )))
                }
            };
            match format {
                Format::Csv => {
                    println!("trial,n,discrepancy");
                    for trial in 0..trials {
                        let mut adv = kind.build(class.m(), seed ^ (trial << 1 | 1));
                        let r = run_alln(
                            &class,
                            adv.as_mut(),
                            stream_len,
                            sample_len,
                            seed.wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
                        )?;
                        println!("{trial},{},{}", r.sample_len, r.discrepancy);
                    }
                }
                Format::Json => {
                    let report = quantile_discrepancy(
                        &class,
                        |trial| kind.build(class.m(), seed ^ (trial << 1 | 1)),
                        stream_len,
                        sample_len,
                        trials,
                        delta,
                        seed,
                        constant,
                    )?;
                    println!("{}", serde_json::to_string(&report)?);
                }
            }
            Ok(0)
        }
    }
}

fn run_stability(command: StabilityCommand) -> Result<u8> {
    match command {
        StabilityCommand::Info {
            class,
            dist,
            learner,
            sample_size,
            budget,
            bits,
        } => {
            let class = Arc::new(load_class(&class)?);
            let d = load_dist(&dist, &class)?;
            let spec = learner;
            let (mi, joint) = learner_mutual_information(
                || build_learner(&spec, &class),
                &class,
                &d,
                sample_size,
                budget,
            )?;
            let gap = pac_bayes_gap(&joint, &joint.mean_posterior())?;
            let unit = if bits { InfoUnit::Bits } else { InfoUnit::Nats };
            println!(
                "{}",
                json!({
                    "n": sample_size,
                    "unit": if bits { "bits" } else { "nats" },
                    "mutual_information": unit.from_nats(mi),
                    "pac_bayes_gap_mean_posterior": unit.from_nats(gap),
                    "identity_gap": (mi - gap).abs(),
                    "samples": joint.rows.len(),
                    "outcomes": joint.outcomes.len(),
                })
            );
            Ok(0)
        }
        StabilityCommand::Excellent {
            graph,
            eps,
            set,
            good,
        } => {
            let bytes = std::fs::read(&graph)?;
            let adjacency = io::read_graph(&bytes)?;
            let g = littlestone_lab::stability::Graph::new(adjacency)?;
            let b_set = parse_point_set(&set)?;
            let good_sets: Vec<Vec<usize>> = good
                .split(';')
                .map(parse_point_set)
                .collect::<Result<_>>()?;
            let (excellent, witness) =
                littlestone_lab::stability::epsilon_excellent_check(&g, &b_set, eps, &good_sets)?;
            println!(
                "{}",
                json!({
                    "excellent": excellent,
                    "witness_good_set": witness,
                })
            );
            Ok(if excellent { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
