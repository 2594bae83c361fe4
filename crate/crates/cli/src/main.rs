use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use himm_core::corpus;
use himm_core::divisions::{division_set, realize_division, DivisionCaps, DivisionMode};
use himm_core::embedding::Budget;
use himm_core::engine::{
    decide_dual_immersion, decide_immersion, dual_oracle, immersion_oracle, verify_immersion, Answer, DecideConfig,
    Decision, ImmersionWitness,
};
use himm_core::transforms::{
    default_params, densify, factor_graph, m_factor_graph, primary_vertex_nodes, role_counts, LabeledGraph, Mode,
};
use himm_core::{Hypergraph, Transposed};

#[derive(Parser)]
#[command(name = "himm", version, about = "Decide hypergraph immersion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether H immerses in G.
    Check {
        h: PathBuf,
        g: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Pipeline)]
        method: MethodArg,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Decide by exhaustive search only.
    Oracle {
        h: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// List the division set of H.
    Divisions {
        h: PathBuf,
        /// Print only the number of members.
        #[arg(long)]
        count_only: bool,
        /// Only the all-star division.
        #[arg(long)]
        star_only: bool,
        /// Write member-<i>.json and member-<i>.dot here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DivisionCaps::default().max_edge_size)]
        max_edge_size: usize,
        #[arg(long, default_value_t = DivisionCaps::default().max_combinations)]
        max_combinations: u128,
    },
    /// Build a factor graph, its densified form, or the transpose of G.
    Transform {
        g: PathBuf,
        #[command(flatten)]
        which: TransformKind,
        /// Duplicates per vertex for --densify.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write DOT here (graphs only).
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide whether A dual-immerses in B.
    Dual {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Pipeline)]
        method: MethodArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check a witness of H in G.
    Verify { h: PathBuf, g: PathBuf, witness: PathBuf },
    /// Compare pipeline and oracle on seeded random instances.
    Suite {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Pipeline,
    Oracle,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Pin,
    Literal,
}

#[derive(Args)]
struct RunArgs {
    /// Expansion limit per embedding search.
    #[arg(long, env = "HIMM_BUDGET")]
    budget: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Write the witness JSON here when the answer is yes.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Test division members one at a time.
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_expansions: self.budget,
            deadline: self.timeout.map(|s| Instant::now() + Duration::from_secs_f64(s)),
        }
    }
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    star_only: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TransformKind {
    #[arg(long)]
    factor: bool,
    #[arg(long, value_name = "M")]
    m_factor: Option<usize>,
    #[arg(long, value_name = "L")]
    densify: Option<usize>,
    #[arg(long)]
    dual: bool,
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn print_json(v: &impl Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn exit_for(answer: Answer) -> ExitCode {
    match answer {
        Answer::Yes => ExitCode::SUCCESS,
        Answer::No => ExitCode::from(1),
        Answer::Unknown => ExitCode::from(3),
    }
}

fn config(run: &RunArgs, params: Option<&ParamArgs>, h: &Hypergraph, g: &Hypergraph) -> DecideConfig {
    let mut cfg = DecideConfig {
        budget: run.budget(),
        parallel: !run.sequential,
        ..DecideConfig::default()
    };
    if let Some(p) = params {
        if p.m.is_some() || p.l.is_some() || p.mode.is_some() {
            let mut chosen = default_params(h, g);
            chosen.m = p.m.unwrap_or(chosen.m);
            chosen.l = p.l.unwrap_or(chosen.l);
            if let Some(mode) = p.mode {
                chosen.mode = match mode {
                    ModeArg::Pin => Mode::Pin,
                    ModeArg::Literal => Mode::LiteralDensify,
                };
            }
            cfg.params = Some(chosen);
        }
        if p.star_only {
            cfg.divisions = DivisionMode::StarOnly;
        }
    }
    cfg
}

fn save_witness(run: &RunArgs, w: Option<&ImmersionWitness>) -> Result<()> {
    if let (Some(path), Some(w)) = (&run.witness, w) {
        write_json(path, w)?;
    }
    Ok(())
}

/// Fails when one method says yes and the other no.
fn compare(a: Answer, b: Answer) -> Result<()> {
    if a != b && a != Answer::Unknown && b != Answer::Unknown {
        bail!("methods disagree: pipeline {a:?}, oracle {b:?}");
    }
    Ok(())
}

fn check(h: &Path, g: &Path, method: MethodArg, run: &RunArgs, params: &ParamArgs) -> Result<ExitCode> {
    let (h, g) = (read_hypergraph(h)?, read_hypergraph(g)?);
    let cfg = config(run, Some(params), &h, &g);
    let pipeline = || -> Result<Decision> { Ok(decide_immersion(&h, &g, &cfg)?) };
    let oracle = || immersion_oracle(&h, &g, run.budget());
    let d = match method {
        MethodArg::Pipeline => pipeline()?,
        MethodArg::Oracle => oracle(),
        MethodArg::Both => {
            let (p, o) = (pipeline()?, oracle());
            compare(p.answer, o.answer)?;
            print_json(&json!({ "pipeline": p, "oracle": o }))?;
            save_witness(run, p.witness.as_ref().or(o.witness.as_ref()))?;
            let answer = if p.answer == Answer::Unknown { o.answer } else { p.answer };
            return Ok(exit_for(answer));
        }
    };
    print_json(&d)?;
    save_witness(run, d.witness.as_ref())?;
    Ok(exit_for(d.answer))
}

fn divisions(
    h: &Path,
    count_only: bool,
    star_only: bool,
    out: Option<&Path>,
    caps: DivisionCaps,
) -> Result<ExitCode> {
    let h = read_hypergraph(h)?;
    let mode = if star_only { DivisionMode::StarOnly } else { DivisionMode::Full };
    let set = division_set(&h, &caps, mode)?;
    if count_only {
        println!("{}", set.len());
        return Ok(ExitCode::SUCCESS);
    }
    let mut members = Vec::with_capacity(set.len());
    for (i, m) in set.members.iter().enumerate() {
        let real = realize_division(&h, &m.choices)?;
        if let Some(dir) = out {
            fs::create_dir_all(dir)?;
            write_json(&dir.join(format!("member-{i}.json")), &real)?;
            fs::write(dir.join(format!("member-{i}.dot")), m.graph.to_dot(&format!("member-{i}")))?;
        }
        members.push(json!({ "index": i, "choices": m.choices, "hypergraph": real }));
    }
    if out.is_none() {
        print_json(&json!({ "count": set.len(), "rawCount": set.raw_count.to_string(), "members": members }))?;
    } else {
        println!("{}", set.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_graph(x: &LabeledGraph, out: Option<&Path>, dot: Option<&Path>) -> Result<()> {
    let (v, e, a) = role_counts(x);
    eprintln!(
        "nodes {} (vertex {v}, edge {e}, added {a}), links {}",
        x.node_count(),
        x.link_count()
    );
    match out {
        Some(p) => write_json(p, &x.to_json())?,
        None => print_json(&x.to_json())?,
    }
    if let Some(p) = dot {
        fs::write(p, x.to_dot("G")).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn transform(g: &Path, which: &TransformKind, m: usize, out: Option<&Path>, dot: Option<&Path>) -> Result<ExitCode> {
    let g = read_hypergraph(g)?;
    if which.dual {
        let t = g.transpose();
        eprintln!(
            "vertices {} -> {}, edges {} -> {}, incidences {}",
            g.vertex_count(),
            t.hypergraph.vertex_count(),
            g.edge_count(),
            t.hypergraph.edge_count(),
            t.hypergraph.incidence_count()
        );
        if !t.dropped.is_empty() {
            eprintln!("isolated vertices dropped: {}", t.dropped.join(", "));
        }
        match out {
            Some(p) => write_json(p, &t.hypergraph)?,
            None => print_json(&t.hypergraph)?,
        }
        return Ok(ExitCode::SUCCESS);
    }
    let x = if which.factor {
        factor_graph(&g)
    } else if let Some(mm) = which.m_factor {
        m_factor_graph(&g, mm)?
    } else {
        let l = which.densify.expect("one transform flag is set");
        let base = m_factor_graph(&g, m)?;
        densify(&base, &primary_vertex_nodes(&base), l)?
    };
    emit_graph(&x, out, dot)?;
    Ok(ExitCode::SUCCESS)
}

fn dual(a: &Path, b: &Path, method: MethodArg, run: &RunArgs) -> Result<ExitCode> {
    let a = Transposed::plain(read_hypergraph(a)?);
    let b = Transposed::plain(read_hypergraph(b)?);
    let cfg = config(run, None, &a.hypergraph, &b.hypergraph);
    let d = match method {
        MethodArg::Pipeline => decide_dual_immersion(&a, &b, &cfg)?,
        MethodArg::Oracle => dual_oracle(&a, &b, run.budget()),
        MethodArg::Both => {
            let p = decide_dual_immersion(&a, &b, &cfg)?;
            let o = dual_oracle(&a, &b, run.budget());
            compare(p.answer, o.answer)?;
            print_json(&json!({ "pipeline": p, "oracle": o }))?;
            let answer = if p.answer == Answer::Unknown { o.answer } else { p.answer };
            return Ok(exit_for(answer));
        }
    };
    print_json(&d)?;
    Ok(exit_for(d.answer))
}

fn verify(h: &Path, g: &Path, witness: &Path) -> Result<ExitCode> {
    let (h, g) = (read_hypergraph(h)?, read_hypergraph(g)?);
    let text = fs::read_to_string(witness).with_context(|| format!("reading {}", witness.display()))?;
    let w: ImmersionWitness =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", witness.display()))?;
    let r = verify_immersion(&h, &g, &w);
    let iso = r
        .isomorphism
        .as_ref()
        .map(|i| json!({ "vertexMap": i.vertex_map, "edgeMap": i.edge_map }));
    let mut report = json!({ "ok": r.is_ok(), "violations": r.violations, "replayChecked": r.replay_checked });
    if let Some(iso) = iso {
        report["isomorphism"] = iso;
    }
    print_json(&report)?;
    Ok(if r.is_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn suite(seed: u64, count: usize, run: &RunArgs) -> Result<ExitCode> {
    let mut disagreements: Vec<Value> = Vec::new();
    let (mut yes, mut unknown) = (0, 0);
    for inst in corpus::random_instances(seed, count) {
        let cfg = config(run, None, &inst.h, &inst.g);
        let p = decide_immersion(&inst.h, &inst.g, &cfg)?;
        let o = immersion_oracle(&inst.h, &inst.g, run.budget());
        match (p.answer, o.answer) {
            (Answer::Unknown, _) | (_, Answer::Unknown) => unknown += 1,
            (a, b) if a != b => disagreements.push(json!({ "name": inst.name, "pipeline": a, "oracle": b })),
            (Answer::Yes, _) => yes += 1,
            _ => {}
        }
    }
    print_json(&json!({
        "seed": seed,
        "instances": count,
        "yes": yes,
        "unknown": unknown,
        "disagreements": disagreements,
    }))?;
    Ok(if disagreements.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check {
            h,
            g,
            method,
            run,
            params,
        } => check(&h, &g, method, &run, &params),
        Command::Oracle { h, g, run } => check(
            &h,
            &g,
            MethodArg::Oracle,
            &run,
            &ParamArgs {
                m: None,
                l: None,
                mode: None,
                star_only: false,
            },
        ),
        Command::Divisions {
            h,
            count_only,
            star_only,
            out,
            max_edge_size,
            max_combinations,
        } => divisions(
            &h,
            count_only,
            star_only,
            out.as_deref(),
            DivisionCaps {
                max_edge_size,
                max_combinations,
            },
        ),
        Command::Transform { g, which, m, out, dot } => transform(&g, &which, m, out.as_deref(), dot.as_deref()),
        Command::Dual { a, b, method, run } => dual(&a, &b, method, &run),
        Command::Verify { h, g, witness } => verify(&h, &g, &witness),
        Command::Suite { seed, count, run } => suite(seed, count, &run),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
