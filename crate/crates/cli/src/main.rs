//! Batch front end for the diameter-bound toolkit.
//!
//! Exit codes: 0 = success and every certificate holds; 1 = usage or parse
//! error; 2 = a certificate was violated (the violated inequality is
//! printed). Identical arguments and seed produce byte-identical output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use diambound::abelian_bound;
use diambound::flat_torus::{self, FlatTorus, TorusClass};
use diambound::handle_complex::{self, scenario, Essentiality};
use diambound::hyp3::MargulisConfig;
use diambound::metric_graph;
use diambound::pipeline;
use diambound::presentation;
use diambound::rng::SplitMix64;
use serde_json::{json, Value};
use std::fs;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "diambound", version, about = "Constants audit for a hyperbolic 3-manifold diameter bound", disable_help_subcommand = true)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    /// Seed for every randomized suite.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Margulis constant override for the constant-chain operations.
    #[arg(long, global = true)]
    epsilon: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Triangularize a presentation (literal `<gens | relators>` or @file)
    Triangularize { presentation: String },

    /// Flat-torus lattice operations
    Torus {
        #[command(subcommand)]
        op: TorusOp,
    },

    /// Metric-graph operations on the V/E file format
    Graph {
        #[command(subcommand)]
        op: GraphOp,
    },

    /// Handle-complex operations on the T/H/A/G/S file format
    Complex {
        #[command(subcommand)]
        op: ComplexOp,
    },

    /// Presentation-length lower bound for Z_N
    Znbound {
        n: u64,
        /// Also run the exhaustive matrix oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 2)]
        max_k: u32,
        #[arg(long, default_value_t = 12)]
        max_entry: u32,
    },

    /// Full constant-chain report with the final-inequality certificate
    Constants {
        #[arg(long, default_value_t = 3)]
        ell_min: u64,
    },

    /// Randomized brute-force suites over every module
    Oracle {
        /// Cases per randomized suite.
        #[arg(long, default_value_t = 200)]
        cases: u64,
    },
}

#[derive(Subcommand)]
enum TorusOp {
    /// Systole, short basis, and the short-basis certificate
    ShortBasis(TorusBasisArgs),
    /// Coefficients of a class in the short basis, with the bound
    Coefficients {
        #[command(flatten)]
        torus: TorusBasisArgs,
        /// Class as `a,b`.
        #[arg(long)]
        class: String,
    },
    /// The intersection inequality for three classes
    Inequality {
        #[command(flatten)]
        torus: TorusBasisArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        mu: String,
    },
}

#[derive(Args)]
struct TorusBasisArgs {
    /// First basis vector as `x,y`.
    #[arg(long)]
    u: String,
    /// Second basis vector as `x,y`.
    #[arg(long)]
    v: String,
}

#[derive(Subcommand)]
enum GraphOp {
    Rank { file: String },
    Girth { file: String },
    /// Homology rank certificate under length < N and girth >= eps
    Certificate {
        file: String,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        eps: f64,
    },
    /// Maximal closed subgraph carrying the full first homology
    GoodSubgraph { file: String },
}

#[derive(Subcommand)]
enum ComplexOp {
    Classify { file: String },
    MakeGood { file: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are success; real usage errors exit 1.
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Outcome { output, certificates_ok }) => {
            let rendered = if output.ends_with('\n') { output } else { output + "\n" };
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, rendered) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{rendered}");
            }
            if certificates_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

struct Outcome {
    output: String,
    certificates_ok: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self { output, certificates_ok: true }
    }
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    match &cli.command {
        Command::Triangularize { presentation } => triangularize(cli, presentation),
        Command::Torus { op } => torus(cli, op),
        Command::Graph { op } => graph(cli, op),
        Command::Complex { op } => complex(cli, op),
        Command::Znbound { n, oracle, max_k, max_entry } => {
            znbound(cli, *n, *oracle, *max_k, *max_entry)
        }
        Command::Constants { ell_min } => {
            constants(cli, cli.epsilon.unwrap_or(0.104), *ell_min)
        }
        Command::Oracle { cases } => oracle(cli, *cases),
    }
}

fn read_arg_or_file(arg: &str) -> Result<String, String> {
    if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_pair_f64(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad number in `{s}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad number in `{s}`"))?;
    Ok([a, b])
}

fn parse_class(s: &str) -> Result<TorusClass, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad integer in `{s}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad integer in `{s}`"))?;
    Ok(TorusClass::new(a, b))
}

fn render(cli: &Cli, text: String, value: Value) -> String {
    match cli.format {
        Format::Text => text,
        Format::Structured => {
            serde_json::to_string_pretty(&value).expect("serializable value")
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn triangularize(cli: &Cli, arg: &str) -> Result<Outcome, String> {
    let text = read_arg_or_file(arg)?;
    let p = presentation::parse(&text).map_err(|e| e.to_string())?;
    let ell_before = p.length();
    let t = presentation::triangularize(&p).map_err(|e| e.to_string())?;
    let q = t.as_presentation();
    let printed = presentation::print(q);
    let out_text = format!(
        "{printed}\nlength: {} (input {}, bound {})",
        q.length(),
        ell_before,
        3 * ell_before
    );
    let value = json!({
        "presentation": printed,
        "length": q.length(),
        "input_length": ell_before,
        "bound": 3 * ell_before,
        "generators": q.generator_count(),
        "relators": q.relators.len(),
    });
    Ok(Outcome::ok(render(cli, out_text, value)))
}

fn torus_of(args: &TorusBasisArgs) -> Result<FlatTorus, String> {
    let u = parse_pair_f64(&args.u)?;
    let v = parse_pair_f64(&args.v)?;
    FlatTorus::new(u, v).map_err(|e| e.to_string())
}

fn torus(cli: &Cli, op: &TorusOp) -> Result<Outcome, String> {
    match op {
        TorusOp::ShortBasis(args) => {
            let t = torus_of(args)?;
            let b = flat_torus::short_basis(&t).map_err(|e| e.to_string())?;
            let cert = flat_torus::short_basis_certificate(&t, &b);
            let ok = cert.holds(1e-9);
            let text = format!(
                "systole: {}\nX = {} (length {})\nY = {} (length {})\n\
                 certificate: l(Y) = {} <= 2A/(sqrt3*sys) = {} -> {}",
                b.x_length,
                b.x,
                b.x_length,
                b.y,
                b.y_length,
                cert.lhs,
                cert.rhs,
                if ok { "ok" } else { "VIOLATED" }
            );
            let value = json!({
                "systole": b.x_length,
                "x": [b.x.a, b.x.b],
                "y": [b.y.a, b.y.b],
                "x_length": b.x_length,
                "y_length": b.y_length,
                "certificate": {"lhs": cert.lhs, "rhs": cert.rhs, "holds": ok},
            });
            Ok(Outcome { output: render(cli, text, value), certificates_ok: ok })
        }
        TorusOp::Coefficients { torus, class } => {
            let t = torus_of(torus)?;
            let l = parse_class(class)?;
            let b = flat_torus::short_basis(&t).map_err(|e| e.to_string())?;
            let len = t.class_length(l);
            let c = flat_torus::class_coefficients(&t, &b, len, l).map_err(|e| e.to_string())?;
            let ok = c.bound.holds(1e-9);
            let text = format!(
                "[L] = {}*[X] + {}*[Y]\nbound: max(|a|,|b|) = {} <= {} -> {}",
                c.a,
                c.b,
                c.bound.lhs,
                c.bound.rhs,
                if ok { "ok" } else { "VIOLATED" }
            );
            let value = json!({
                "a": c.a, "b": c.b, "length": len,
                "certificate": {"lhs": c.bound.lhs, "rhs": c.bound.rhs, "holds": ok},
            });
            Ok(Outcome { output: render(cli, text, value), certificates_ok: ok })
        }
        TorusOp::Inequality { torus, a, b, mu } => {
            let t = torus_of(torus)?;
            let a = parse_class(a)?;
            let b = parse_class(b)?;
            let mu = parse_class(mu)?;
            let ineq =
                flat_torus::intersection_inequality(&t, a, b, mu).map_err(|e| e.to_string())?;
            let ok = ineq.holds(1e-9);
            let text = format!(
                "lhs = l(mu)/(2(l(A)+l(B))) = {}\nrhs = max|Delta| = {}\n{}",
                ineq.lhs,
                ineq.rhs,
                if ok { "ok" } else { "VIOLATED" }
            );
            let value = json!({
                "lhs": ineq.lhs, "rhs": ineq.rhs, "holds": ok,
            });
            Ok(Outcome { output: render(cli, text, value), certificates_ok: ok })
        }
    }
}

fn graph(cli: &Cli, op: &GraphOp) -> Result<Outcome, String> {
    let load = |file: &str| -> Result<metric_graph::MetricGraph, String> {
        let text = fs::read_to_string(file).map_err(|e| format!("cannot read {file}: {e}"))?;
        metric_graph::parse(&text).map_err(|e| e.to_string())
    };
    match op {
        GraphOp::Rank { file } => {
            let g = load(file)?;
            let rank = metric_graph::cycle_rank(&g);
            Ok(Outcome::ok(render(cli, format!("rank: {rank}"), json!({"rank": rank}))))
        }
        GraphOp::Girth { file } => {
            let g = load(file)?;
            let girth = metric_graph::girth(&g);
            let text = if girth.is_finite() {
                format!("girth: {girth}")
            } else {
                "girth: infinity".to_string()
            };
            let value = if girth.is_finite() {
                json!({ "girth": girth })
            } else {
                json!({ "girth": "infinity" })
            };
            Ok(Outcome::ok(render(cli, text, value)))
        }
        GraphOp::Certificate { file, n, eps } => {
            let g = load(file)?;
            let cert = metric_graph::rank_bound_certificate(&g, *n, *eps)
                .map_err(|e| e.to_string())?;
            let ok = cert.holds();
            let text = format!(
                "total_length = {} < N = {n}\ngirth = {} >= eps = {eps}\n\
                 rank = {} <= 32N^2/eps^2 = {} -> {}",
                cert.total_length,
                cert.girth,
                cert.rank,
                cert.bound,
                if ok { "ok" } else { "VIOLATED" }
            );
            let value = json!({
                "total_length": cert.total_length,
                "girth": cert.girth,
                "rank": cert.rank,
                "bound": cert.bound,
                "holds": ok,
            });
            Ok(Outcome { output: render(cli, text, value), certificates_ok: ok })
        }
        GraphOp::GoodSubgraph { file } => {
            let g = load(file)?;
            let out = metric_graph::good_subgraph(&g);
            let text = metric_graph::print(&out);
            let value = json!({
                "graph": text,
                "rank": metric_graph::cycle_rank(&out),
                "total_length": out.total_length(),
            });
            Ok(Outcome::ok(render(cli, text, value)))
        }
    }
}

fn complex(cli: &Cli, op: &ComplexOp) -> Result<Outcome, String> {
    let load = |file: &str| -> Result<handle_complex::HandleComplex, String> {
        let text = fs::read_to_string(file).map_err(|e| format!("cannot read {file}: {e}"))?;
        handle_complex::parse(&text).map_err(|e| e.to_string())
    };
    match op {
        ComplexOp::Classify { file } => {
            let c = load(file)?;
            let cls = c.classify().map_err(|e| e.to_string())?;
            let mut text = format!(
                "0-handles: {}\n1-handles: {}\nmonkey-handles: {}\ncomponents: {}\n",
                cls.h0_count,
                cls.h1_count,
                cls.monkey_count,
                cls.components.len()
            );
            for s in &cls.strips {
                let kind = if s.is_mobius() { "mobius" } else { "annulus" };
                let ann = match c.strip_annotations.get(&s.id) {
                    Some(Essentiality::Essential) => "essential",
                    Some(Essentiality::Inessential) => "inessential",
                    None => "unannotated",
                };
                text.push_str(&format!(
                    "strip {}: {} of {} handles, {}\n",
                    s.id,
                    kind,
                    s.handles.len(),
                    ann
                ));
            }
            let strips: Vec<Value> = cls
                .strips
                .iter()
                .map(|s| {
                    json!({
                        "id": s.id,
                        "mobius": s.is_mobius(),
                        "handles": s.handles,
                    })
                })
                .collect();
            let value = json!({
                "h0": cls.h0_count,
                "h1": cls.h1_count,
                "monkey": cls.monkey_count,
                "components": cls.components.len(),
                "strips": strips,
            });
            Ok(Outcome::ok(render(cli, text, value)))
        }
        ComplexOp::MakeGood { file } => {
            let c = load(file)?;
            let (good, cert) = c.make_good().map_err(|e| e.to_string())?;
            let ok = cert.all_ok();
            let text = format!(
                "cuts: {} annuli, {} mobius bands, {} zero-handles\n\
                 boundary: {} -> {} (after annuli) -> {} (after mobius) -> {}\n\
                 doubling bounds: mobius {} | zero-handle {} | chained(4x) {}\n\
                 zero-handle edges: {} <= 3*ellP = {} -> {}\n\
                 spine rank: {}\n{}",
                cert.annuli_cut,
                cert.mobius_cut,
                cert.zero_handles_cut,
                cert.boundary_before,
                cert.boundary_after_annuli,
                cert.boundary_after_mobius,
                cert.boundary_final,
                cert.mobius_doubling_ok,
                cert.zero_handle_doubling_ok,
                cert.chained_bound_ok,
                cert.h0_edges,
                3 * good.ell_p,
                cert.h0_edge_bound_ok,
                cert.spine_rank,
                handle_complex::print(&good)
            );
            let value = json!({
                "annuli_cut": cert.annuli_cut,
                "mobius_cut": cert.mobius_cut,
                "zero_handles_cut": cert.zero_handles_cut,
                "boundary_before": cert.boundary_before.to_string(),
                "boundary_final": cert.boundary_final.to_string(),
                "mobius_doubling_ok": cert.mobius_doubling_ok,
                "zero_handle_doubling_ok": cert.zero_handle_doubling_ok,
                "chained_bound_ok": cert.chained_bound_ok,
                "h0_edges": cert.h0_edges,
                "h0_edge_bound_ok": cert.h0_edge_bound_ok,
                "spine_rank": cert.spine_rank,
                "complex": handle_complex::print(&good),
            });
            Ok(Outcome { output: render(cli, text, value), certificates_ok: ok })
        }
    }
}

fn znbound(cli: &Cli, n: u64, run_oracle: bool, max_k: u32, max_entry: u32) -> Result<Outcome, String> {
    let bound = abelian_bound::zn_length_lower_bound(n).map_err(|e| e.to_string())?;
    let mut text = format!(
        "certified bound: {} (at k = {})\nstated closed form: {}{}",
        bound.primary,
        bound.argmin_k,
        bound.paper_variant,
        if bound.paper_variant_overclaims { " (exceeds the certified bound)" } else { "" }
    );
    let mut ok = true;
    let mut oracle_value: Option<u64> = None;
    if run_oracle {
        let min = abelian_bound::brute_force_min_length(n, max_k, max_entry)
            .map_err(|e| e.to_string())?;
        oracle_value = min;
        match min {
            Some(m) => {
                ok = (m as f64) >= bound.primary - 1e-9;
                text.push_str(&format!(
                    "\noracle minimum (k <= {max_k}, |entries| <= {max_entry}): {m} -> {}",
                    if ok { "ok" } else { "BELOW BOUND" }
                ));
            }
            None => text.push_str("\noracle minimum: none in range"),
        }
    }
    let value = json!({
        "n": n,
        "primary": bound.primary,
        "argmin_k": bound.argmin_k,
        "paper_variant": bound.paper_variant,
        "paper_variant_overclaims": bound.paper_variant_overclaims,
        "oracle": oracle_value,
        "holds": ok,
    });
    Ok(Outcome { output: render(cli, text, value), certificates_ok: ok })
}

fn constants(cli: &Cli, epsilon: f64, ell_min: u64) -> Result<Outcome, String> {
    let cfg = MargulisConfig::new(epsilon).map_err(|e| e.to_string())?;
    let report = pipeline::solve_r(cfg, ell_min).map_err(|e| e.to_string())?;
    let ok = report.certificate.iter().all(|r| r.lhs > r.rhs)
        && report.dominance.margin_ok
        && report.dominance.derivative_ok
        && report.meridian_comparison_ok;
    let output = match cli.format {
        Format::Text => pipeline::to_text(&report),
        Format::Structured => pipeline::to_json(&report),
    };
    Ok(Outcome { output, certificates_ok: ok })
}

// ---------------------------------------------------------------------------
// Oracle suites
// ---------------------------------------------------------------------------

struct Suite {
    name: &'static str,
    cases: u64,
    violations: u64,
    detail: String,
}

fn oracle(cli: &Cli, cases: u64) -> Result<Outcome, String> {
    let suites = vec![
        torus_suite(cli.seed, cases),
        graph_suite(cli.seed ^ 0x617261, cases),
        surgery_suite(cli.seed ^ 0x737572, cases.min(100)),
        kernel_suite(cli.seed ^ 0x6b65, cases),
        zn_suite(),
    ];

    let mut ok = true;
    let mut text = String::new();
    let mut values = Vec::new();
    for s in &suites {
        let pass = s.violations == 0;
        ok &= pass;
        text.push_str(&format!(
            "{:<18} {:>6} cases  {:>3} violations  {}{}\n",
            s.name,
            s.cases,
            s.violations,
            if pass { "ok" } else { "FAILED" },
            if s.detail.is_empty() { String::new() } else { format!("  ({})", s.detail) }
        ));
        values.push(json!({
            "suite": s.name,
            "cases": s.cases,
            "violations": s.violations,
            "pass": pass,
        }));
    }
    Ok(Outcome { output: render(cli, text, Value::Array(values)), certificates_ok: ok })
}

fn torus_suite(seed: u64, cases: u64) -> Suite {
    let mut rng = SplitMix64::new(seed);
    let mut violations = 0;
    let mut done = 0;
    while done < cases {
        let t = flat_torus::random_torus(&mut rng, 50.0);
        let Ok(b) = flat_torus::short_basis(&t) else {
            violations += 1;
            continue;
        };
        if flat_torus::delta(b.x, b.y).abs() != 1
            || !flat_torus::short_basis_certificate(&t, &b).holds(1e-9)
        {
            violations += 1;
        }
        let l = TorusClass::new(rng.range_i64(-9, 9), rng.range_i64(-9, 9));
        if !l.is_zero() {
            let len = t.class_length(l);
            match flat_torus::class_coefficients(&t, &b, len, l) {
                Ok(c) if c.bound.holds(1e-9) => {}
                _ => violations += 1,
            }
        }
        let a = TorusClass::new(rng.range_i64(-9, 9), rng.range_i64(-9, 9));
        let bb = TorusClass::new(rng.range_i64(-9, 9), rng.range_i64(-9, 9));
        let mu = TorusClass::new(rng.range_i64(-9, 9), rng.range_i64(-9, 9));
        if flat_torus::delta(a, bb) != 0 {
            match flat_torus::intersection_inequality(&t, a, bb, mu) {
                Ok(i) if i.holds(1e-9) => {}
                _ => violations += 1,
            }
        }
        done += 1;
    }
    Suite { name: "torus", cases, violations, detail: String::new() }
}

fn graph_suite(seed: u64, cases: u64) -> Suite {
    let mut rng = SplitMix64::new(seed);
    let mut violations = 0;
    for _ in 0..cases {
        let g = metric_graph::random_graph(&mut rng, 7, 10);
        let girth = metric_graph::girth(&g);
        if girth.is_finite() {
            let eps = girth;
            let n = g.total_length() + 0.01;
            match metric_graph::rank_bound_certificate(&g, n, eps) {
                Ok(cert) if cert.holds() => {}
                _ => violations += 1,
            }
        }
        let closed = metric_graph::random_closed_graph(&mut rng);
        let rank = metric_graph::cycle_rank(&closed);
        match metric_graph::coarse_subdivision(&closed) {
            Ok(out)
                if out.edges.len() <= 3 * (rank - 1)
                    && metric_graph::cycle_rank(&out) == rank => {}
            _ => violations += 1,
        }
    }
    Suite { name: "graph", cases, violations, detail: String::new() }
}

fn surgery_suite(seed: u64, cases: u64) -> Suite {
    let mut rng = SplitMix64::new(seed);
    let mut violations = 0;
    for _ in 0..cases {
        let c = scenario::random_complex(&mut rng);
        match c.make_good() {
            Ok((_, cert)) if cert.all_ok() => {}
            _ => violations += 1,
        }
    }
    Suite { name: "surgery", cases, violations, detail: String::new() }
}

fn kernel_suite(seed: u64, cases: u64) -> Suite {
    let mut rng = SplitMix64::new(seed);
    let mut violations = 0;
    let mut done = 0;
    while done < cases {
        let n = rng.below(4) as usize + 3;
        let g = [
            (0..n).map(|_| rng.range_i64(-9, 9)).collect::<Vec<_>>(),
            (0..n).map(|_| rng.range_i64(-9, 9)).collect::<Vec<_>>(),
        ];
        match flat_torus::kernel_basis(&g, 9.0) {
            Err(flat_torus::FlatTorusError::NotRankTwo) => continue,
            Err(_) => violations += 1,
            Ok(k) => {
                let annihilates = k.vectors.iter().all(|s| {
                    g.iter().all(|row| row.iter().zip(s).map(|(a, b)| a * b).sum::<i64>() == 0)
                });
                if !annihilates || !k.bound.holds(0.0) {
                    violations += 1;
                }
            }
        }
        done += 1;
    }
    Suite { name: "kernel", cases, violations, detail: String::new() }
}

fn zn_suite() -> Suite {
    let table = match abelian_bound::brute_force_min_length_table(200, 2, 12, 400_000_000) {
        Ok(t) => t,
        Err(e) => {
            return Suite { name: "znbound", cases: 0, violations: 1, detail: e.to_string() }
        }
    };
    let mut violations = 0;
    let mut cases = 0;
    for (n, min) in table {
        cases += 1;
        let bound = abelian_bound::zn_length_lower_bound(n).expect("n >= 2");
        match min {
            Some(m) if (m as f64) >= bound.primary - 1e-9 => {}
            Some(_) => violations += 1,
            None => violations += 1,
        }
    }
    Suite { name: "znbound", cases, violations, detail: "N in [2,200], k<=2, |entries|<=12".into() }
}
