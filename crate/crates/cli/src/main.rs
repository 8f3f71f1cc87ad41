//! Command-line front end: graph generation, oracle evaluation,
//! compatibility checking, encoder verification, program synthesis, and the
//! impossibility demos, all emitting JSON reports plus one run manifest.
//!
//! Exit codes: 0 = success / compatible-on-sample; 2 = a definitive
//! incompatibility or impossibility witness was produced; 1 = usage or
//! runtime error.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use permcompat::compat::{
    check_feature_only, check_full, check_reduced, check_uniform_invariant, necessary_falsifier,
    CompatReport, Verdict,
};
use permcompat::derive_seed;
use permcompat::engine::{
    check_equivariance, convert_extended_to_gnn, even_layer_mismatch, orbit_equality_demo,
    orbit_equality_demo_with_autos, run_gnn, run_gnn_trace, AggregateOp, EquivarianceReport,
    ExtendedGnnProgram, OrbitDemo, RandomProgramFamily,
};
use permcompat::gen::{generate, FeatureInit, GenSpec};
use permcompat::graph::Graph;
use permcompat::mef::{verify_mef_property, MefEncoder};
use permcompat::perm::{enumerate_sn, Permutation};
use permcompat::sampler::{sample_graphs, SampleConfig};
use permcompat::scalar::{Scalar, ScalarKind, Tolerance, DEFAULT_REL_TOL};
use permcompat::synth::{fit_rho, intermediate_state_audit, synthesize_gnn, BasisFunction};
use permcompat::zoo::{entry, lookup};
use permcompat::Error;

const EXIT_OK: i32 = 0;
const EXIT_ERROR: i32 = 1;
const EXIT_WITNESS: i32 = 2;

#[derive(Parser)]
#[command(
    name = "permcompat",
    version,
    about = "Exact checking and synthesis of relabeling-compatible graph functions"
)]
struct Cli {
    /// Directory for JSON reports and the run manifest
    /// (default: $PERMCOMPAT_OUT_DIR, else the current directory).
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate graphs from a named family and write them as JSON files.
    Gen(GenArgs),
    /// Evaluate a built-in graph function on a graph file.
    Oracle(OracleArgs),
    /// Check a built-in function for relabeling compatibility.
    Check(CheckArgs),
    /// Verify the multiset-encoder sum-equality property.
    MefVerify(MefArgs),
    /// Fit a readout table and synthesize an exact message-passing program.
    Synth(SynthArgs),
    /// Show that symmetric targets are unreachable for index-blind programs.
    DemoImpossible(DemoArgs),
    /// Run a serialized built-in program spec on a graph file.
    RunGnn(RunGnnArgs),
    /// Convert a multiset-aggregation program and verify state agreement.
    ConvertExtended(ConvertArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Graph family: erg, ergs, cg, or lcg (case-insensitive).
    #[arg(long)]
    family: String,
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    /// Edge probability (erg/ergs only).
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Feature dimension.
    #[arg(long, default_value_t = 0)]
    d: usize,
    /// Feature initialization: identical or random.
    #[arg(long, default_value = "random")]
    init: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of graphs to generate.
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Args)]
struct OracleArgs {
    /// Graph JSON file to evaluate on.
    #[arg(long)]
    graph: PathBuf,
    /// Built-in function name (e.g. degree, mincut, sp1).
    #[arg(long = "fn", value_name = "NAME")]
    function: String,
}

#[derive(Args)]
struct CheckArgs {
    /// Built-in function name.
    #[arg(long = "fn", value_name = "NAME")]
    function: String,
    /// Checking mode: full, reduced, feature, uniform, or falsify.
    #[arg(long, default_value = "full")]
    mode: String,
    /// Number of nodes per sampled graph.
    #[arg(long)]
    n: usize,
    /// Feature dimension (default: the function's minimum).
    #[arg(long)]
    d: Option<usize>,
    /// Number of sampled graphs.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scalar mode: rational (exact) or float.
    #[arg(long, default_value = "rational")]
    scalar: String,
    /// Relative tolerance for float mode (absolute floor is rel/1000).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct MefArgs {
    /// Encoder: scalar-power, complex-tensor, or identity.
    #[arg(long, default_value = "scalar-power")]
    encoder: String,
    /// Input vector dimension (complex-tensor and identity only).
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Maximum multiset size the encoder must separate.
    #[arg(long)]
    n: usize,
    /// Randomized trials (engineered collisions are always prepended).
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SynthArgs {
    /// Built-in function name to reproduce.
    #[arg(long = "fn", value_name = "NAME")]
    function: String,
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    /// Feature dimension (default: the function's minimum).
    #[arg(long)]
    d: Option<usize>,
    /// Number of calibration graphs.
    #[arg(long, default_value_t = 25)]
    calib_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Verification after synthesis: oracle, equivariance, audit, or all.
    #[arg(long, default_value = "all")]
    verify: String,
    /// Also write the fitted readout table as JSON.
    #[arg(long)]
    emit_table: bool,
}

#[derive(Args)]
struct DemoArgs {
    /// Graph JSON file (alternative to --family).
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    /// Graph family to generate instead of reading a file.
    #[arg(long)]
    family: Option<String>,
    /// Number of nodes (with --family).
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Edge probability (with --family erg/ergs).
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Feature dimension (with --family).
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Feature initialization (with --family): identical or random.
    #[arg(long, default_value = "random")]
    init: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Source node for the distance targets (default: first twin, else 0).
    #[arg(long)]
    source: Option<usize>,
    /// Number of random programs to sample.
    #[arg(long, default_value_t = 20)]
    programs: usize,
}

#[derive(Args)]
struct RunGnnArgs {
    /// JSON program spec: {"family":"random","d_in":D,"layer_dims":[..],"seed":S}.
    #[arg(long)]
    program: PathBuf,
    /// Graph JSON file to run on.
    #[arg(long)]
    graph: PathBuf,
    /// Emit the full per-layer state trace instead of only final states.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct ConvertArgs {
    /// Comma-separated ops: scaled-sum, shifted-sum, shifted-max, weight-sum.
    #[arg(long)]
    ops: String,
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    /// Feature dimension.
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Number of calibration graphs (also used for the state comparison).
    #[arg(long, default_value_t = 50)]
    calib_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

// --- manifest and output plumbing -----------------------------------------

#[derive(Serialize)]
struct RunManifest {
    subcommand: String,
    args: Vec<String>,
    seed: Option<u64>,
    scalar_mode: Option<String>,
    tool_version: String,
    started_unix: f64,
    finished_unix: f64,
    outputs: Vec<String>,
}

struct OutSink {
    dir: PathBuf,
    files: Vec<String>,
}

impl OutSink {
    fn new(dir: PathBuf) -> Result<Self, String> {
        std::fs::create_dir_all(&dir)
            .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
        Ok(OutSink {
            dir,
            files: Vec::new(),
        })
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), String> {
        let body = serde_json::to_string_pretty(value)
            .map_err(|e| format!("cannot serialize {name}: {e}"))?;
        let path = self.dir.join(name);
        std::fs::write(&path, body + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn write_manifest(&self, manifest: &RunManifest) -> Result<(), String> {
        let body = serde_json::to_string_pretty(manifest)
            .map_err(|e| format!("cannot serialize manifest: {e}"))?;
        let path = self.dir.join("manifest.json");
        std::fs::write(&path, body + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))
    }
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn lib(e: Error) -> String {
    e.to_string()
}

// --- small parsers ----------------------------------------------------------

fn parse_init(s: &str) -> Result<FeatureInit, String> {
    match s.to_ascii_lowercase().as_str() {
        "identical" => Ok(FeatureInit::Identical),
        "random" => Ok(FeatureInit::Random),
        other => Err(format!(
            "unknown feature init {other:?} (expected identical or random)"
        )),
    }
}

fn parse_scalar(s: &str) -> Result<ScalarKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "rational" => Ok(ScalarKind::Rational),
        "float" => Ok(ScalarKind::Float),
        other => Err(format!(
            "unknown scalar mode {other:?} (expected rational or float)"
        )),
    }
}

fn parse_family(s: &str) -> Result<permcompat::gen::Family, String> {
    s.to_ascii_lowercase().parse().map_err(lib)
}

fn parse_ops(s: &str) -> Result<Vec<AggregateOp>, String> {
    s.split(',')
        .map(|raw| match raw.trim().to_ascii_lowercase().as_str() {
            "scaled-sum" => Ok(AggregateOp::SumScaledNeighbors),
            "shifted-sum" => Ok(AggregateOp::SumShiftedNeighbors),
            "shifted-max" => Ok(AggregateOp::MaxShiftedNeighbors),
            "weight-sum" => Ok(AggregateOp::WeightSum),
            other => Err(format!(
                "unknown op {other:?} (expected scaled-sum, shifted-sum, shifted-max, or weight-sum)"
            )),
        })
        .collect()
}

fn read_graph(path: &PathBuf) -> Result<Graph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Graph::from_json_str(&text).map_err(lib)
}

/// Feature dimension to use when the flag is absent: the function's exact
/// requirement if it has one, else its declared minimum.
fn default_d(function: &str, flag: Option<usize>) -> Result<usize, String> {
    if let Some(d) = flag {
        return Ok(d);
    }
    let e = entry(function).map_err(lib)?;
    Ok(e.exact_d.unwrap_or(e.min_d))
}

/// Permutations to verify against: the full group when small enough,
/// otherwise every transposition (which still generates the group).
fn verification_perms(n: usize) -> Result<(Vec<Permutation>, &'static str), String> {
    if n <= 6 {
        Ok((enumerate_sn(n).map_err(lib)?, "all"))
    } else {
        let mut perms = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                perms.push(Permutation::transposition(n, a, b).map_err(lib)?);
            }
        }
        Ok((perms, "transpositions"))
    }
}

// --- subcommand handlers ------------------------------------------------------

fn cmd_gen(a: &GenArgs, sink: &mut OutSink) -> Result<i32, String> {
    let family = parse_family(&a.family)?;
    let features = parse_init(&a.init)?;
    let mut metas = Vec::with_capacity(a.count);
    for k in 0..a.count {
        let spec = GenSpec {
            family,
            n: a.n,
            d: a.d,
            p_edge: a.p,
            features,
            kind: ScalarKind::Rational,
            seed: derive_seed(a.seed, &format!("gen-{k}")),
        };
        let (g, meta) = generate(&spec).map_err(lib)?;
        let name = format!("graph-{k:03}.json");
        let value = g.to_json_value();
        sink.write_json(&name, &value)?;
        metas.push(serde_json::json!({ "file": name, "spec": spec, "meta": meta }));
    }
    sink.write_json("gen-meta.json", &metas)?;
    println!(
        "generated {} {} graph(s) with n={} d={} into {}",
        a.count,
        a.family.to_ascii_lowercase(),
        a.n,
        a.d,
        sink.dir.display()
    );
    Ok(EXIT_OK)
}

fn cmd_oracle(a: &OracleArgs, sink: &mut OutSink) -> Result<i32, String> {
    let g = read_graph(&a.graph)?;
    let f = lookup(&a.function, g.n(), g.d()).map_err(lib)?;
    let outputs = f.eval(&g).map_err(lib)?;
    let report = serde_json::json!({
        "function": a.function,
        "n": g.n(),
        "d": g.d(),
        "out_dim": f.out_dim,
        "outputs": outputs,
    });
    sink.write_json("oracle-output.json", &report)?;
    println!("{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?);
    Ok(EXIT_OK)
}

fn print_check_table(report: &CompatReport) {
    println!(
        "{:<24} {:<18} {:<22} {:>7} {:>10}",
        "function", "method", "verdict", "graphs", "equations"
    );
    let verdict = match report.verdict {
        Verdict::CompatibleOnSample => "compatible-on-sample",
        Verdict::Incompatible => "incompatible",
    };
    println!(
        "{:<24} {:<18} {:<22} {:>7} {:>10}",
        report.function, report.method, verdict, report.graphs_checked, report.constraints_checked
    );
    if let Some(w) = &report.witness {
        println!(
            "witness: node {} of a {}-node graph under relabeling {:?}",
            w.node,
            w.graph.n(),
            w.perm.image()
        );
        let fmt = |v: &[Scalar]| {
            v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
        };
        println!("  relabeled-first evaluation: [{}]", fmt(&w.lhs));
        println!("  evaluate-then-relabel:      [{}]", fmt(&w.rhs));
    }
}

fn cmd_check(a: &CheckArgs, sink: &mut OutSink) -> Result<i32, String> {
    let kind = parse_scalar(&a.scalar)?;
    let d = default_d(&a.function, a.d)?;
    let f = lookup(&a.function, a.n, d).map_err(lib)?;
    let tol = match (kind, a.tol) {
        (ScalarKind::Rational, None) => Tolerance::Exact,
        (ScalarKind::Rational, Some(_)) => {
            return Err("--tol only applies to --scalar float".into());
        }
        (ScalarKind::Float, rel) => {
            let rel = rel.unwrap_or(DEFAULT_REL_TOL);
            Tolerance::Float {
                rel,
                abs_floor: rel / 1000.0,
            }
        }
    };
    let graphs = sample_graphs(&SampleConfig {
        n: a.n,
        d,
        kind,
        seed: derive_seed(a.seed, "check"),
        count: a.samples,
        include_engineered: true,
    })
    .map_err(lib)?;
    let report = match a.mode.to_ascii_lowercase().as_str() {
        "full" => check_full(&f, &graphs, &tol),
        "reduced" => check_reduced(&f, &graphs, 0, &tol),
        "feature" => check_feature_only(&f, &graphs, &tol, derive_seed(a.seed, "feature")),
        "uniform" => check_uniform_invariant(&f, &graphs, &tol),
        "falsify" => necessary_falsifier(&f, &graphs, &tol, 8, derive_seed(a.seed, "falsify")),
        other => {
            return Err(format!(
                "unknown mode {other:?} (expected full, reduced, feature, uniform, or falsify)"
            ));
        }
    }
    .map_err(lib)?;
    sink.write_json("check-report.json", &report)?;
    print_check_table(&report);
    Ok(match report.verdict {
        Verdict::CompatibleOnSample => EXIT_OK,
        Verdict::Incompatible => EXIT_WITNESS,
    })
}

fn cmd_mef(a: &MefArgs, sink: &mut OutSink) -> Result<i32, String> {
    let enc = match a.encoder.to_ascii_lowercase().as_str() {
        "scalar-power" => MefEncoder::scalar_power(a.n),
        "complex-tensor" => MefEncoder::complex_tensor(a.m, a.n),
        "identity" => MefEncoder::identity(a.m, a.n),
        other => {
            return Err(format!(
                "unknown encoder {other:?} (expected scalar-power, complex-tensor, or identity)"
            ));
        }
    }
    .map_err(lib)?;
    let report =
        verify_mef_property(&enc, a.trials, derive_seed(a.seed, "mef-verify")).map_err(lib)?;
    sink.write_json("mef-report.json", &report)?;
    if report.passed {
        println!(
            "encoder {} (m={}, n={}): {} trials, no sum-equality violations",
            a.encoder, report.m, report.n, report.trials
        );
        Ok(EXIT_OK)
    } else {
        println!(
            "encoder {} (m={}, n={}): {} violations in {} trials",
            a.encoder, report.m, report.n, report.violations, report.trials
        );
        Ok(EXIT_WITNESS)
    }
}

/// Serializable mirror of a readout-fitting collision.
#[derive(Serialize)]
struct CollisionReport {
    key: String,
    existing_output: Vec<Scalar>,
    new_output: Vec<Scalar>,
    existing_site: (usize, usize),
    new_site: (usize, usize),
}

#[derive(Serialize)]
struct SynthReport {
    function: String,
    n: usize,
    d: usize,
    calib_count: usize,
    verify: String,
    perms_used: Option<&'static str>,
    table_size: Option<usize>,
    collision: Option<CollisionReport>,
    oracle_matches: Option<bool>,
    equivariance: Option<Vec<EquivarianceReport>>,
    audits_passed: Option<bool>,
    passed: bool,
}

fn cmd_synth(a: &SynthArgs, sink: &mut OutSink) -> Result<i32, String> {
    let d = default_d(&a.function, a.d)?;
    let f = lookup(&a.function, a.n, d).map_err(lib)?;
    let bf = BasisFunction::new(a.n, d).map_err(lib)?;
    let graphs = sample_graphs(&SampleConfig::exact(
        a.n,
        d,
        derive_seed(a.seed, "synth"),
        a.calib_count,
    ))
    .map_err(lib)?;

    let verify = a.verify.to_ascii_lowercase();
    if !matches!(verify.as_str(), "oracle" | "equivariance" | "audit" | "all") {
        return Err(format!(
            "unknown verify mode {verify:?} (expected oracle, equivariance, audit, or all)"
        ));
    }

    let mut report = SynthReport {
        function: a.function.clone(),
        n: a.n,
        d,
        calib_count: a.calib_count,
        verify: verify.clone(),
        perms_used: None,
        table_size: None,
        collision: None,
        oracle_matches: None,
        equivariance: None,
        audits_passed: None,
        passed: false,
    };

    let rho = match fit_rho(&f, &bf, &graphs) {
        Ok(rho) => rho,
        Err(Error::CompatibilityViolation(c)) => {
            report.collision = Some(CollisionReport {
                key: c.key.clone(),
                existing_output: c.existing_output.clone(),
                new_output: c.new_output.clone(),
                existing_site: c.existing_site,
                new_site: c.new_site,
            });
            sink.write_json("synth-report.json", &report)?;
            println!(
                "{}: readout collision — calibration graph {} node {} and graph {} node {} share a summary but need different outputs",
                a.function, c.existing_site.0, c.existing_site.1, c.new_site.0, c.new_site.1
            );
            return Ok(EXIT_WITNESS);
        }
        Err(e) => return Err(lib(e)),
    };
    report.table_size = Some(rho.len());
    let prog = synthesize_gnn(&bf, &rho).map_err(lib)?;
    let (perms, perms_used) = verification_perms(a.n)?;
    report.perms_used = Some(perms_used);

    let mut all_ok = true;
    if matches!(verify.as_str(), "oracle" | "all") {
        let mut ok = true;
        'oracle: for g in &graphs {
            for p in &perms {
                let rg = g.apply_iwfp(p).map_err(lib)?;
                if run_gnn(&prog, &rg).map_err(lib)? != f.eval(&rg).map_err(lib)? {
                    ok = false;
                    break 'oracle;
                }
            }
        }
        report.oracle_matches = Some(ok);
        all_ok &= ok;
    }
    if matches!(verify.as_str(), "equivariance" | "all") {
        let tol = Tolerance::Exact;
        let mut reports = Vec::with_capacity(graphs.len());
        for g in &graphs {
            let r = check_equivariance(&prog, g, &perms, &tol).map_err(lib)?;
            all_ok &= r.passed;
            reports.push(r);
        }
        report.equivariance = Some(reports);
    }
    if matches!(verify.as_str(), "audit" | "all") {
        let mut ok = true;
        for g in &graphs {
            ok &= intermediate_state_audit(&prog, &bf, g).map_err(lib)?.passed();
        }
        report.audits_passed = Some(ok);
        all_ok &= ok;
    }

    report.passed = all_ok;
    sink.write_json("synth-report.json", &report)?;
    if a.emit_table {
        sink.write_json("rho-table.json", &*rho.table())?;
    }
    println!(
        "{} at n={} d={}: table of {} summaries, verification ({}) {}",
        a.function,
        a.n,
        d,
        rho.len(),
        verify,
        if all_ok { "passed" } else { "FAILED" }
    );
    if all_ok {
        Ok(EXIT_OK)
    } else {
        Err("synthesized program failed verification".into())
    }
}

#[derive(Serialize)]
struct DemoProgramRow {
    seed: u64,
    outputs_constant_on_orbits: bool,
    achieved_mismatches: usize,
}

#[derive(Serialize)]
struct DemoReport {
    graph_source: String,
    n: usize,
    d: usize,
    source: usize,
    orbits: Vec<Vec<usize>>,
    targets: Vec<Scalar>,
    forced_mismatches: usize,
    target_reachable: bool,
    programs: Vec<DemoProgramRow>,
    all_programs_forced: bool,
}

fn cmd_demo(a: &DemoArgs, sink: &mut OutSink) -> Result<i32, String> {
    let (g, autos, default_source, graph_source) = if let Some(path) = &a.graph {
        let g = read_graph(path)?;
        (g, None, 0usize, path.display().to_string())
    } else {
        let family_raw = a
            .family
            .as_deref()
            .ok_or("either --graph or --family is required")?;
        let family = parse_family(family_raw)?;
        let spec = GenSpec {
            family,
            n: a.n,
            d: a.d,
            p_edge: a.p,
            features: parse_init(&a.init)?,
            kind: ScalarKind::Rational,
            seed: derive_seed(a.seed, "demo-gen"),
        };
        let (g, meta) = generate(&spec).map_err(lib)?;
        let (autos, source) = match meta.twin_pair {
            Some((t1, t2)) => {
                let swap = Permutation::transposition(g.n(), t1, t2).map_err(lib)?;
                (Some(vec![swap]), t1)
            }
            None => (None, 0),
        };
        (g, autos, source, format!("generated:{}", family_raw.to_ascii_lowercase()))
    };
    let source = a.source.unwrap_or(default_source);
    let d = g.d();
    let family = RandomProgramFamily::default_shape(d);
    let tol = Tolerance::Exact;

    let mut rows = Vec::with_capacity(a.programs);
    let mut shared: Option<OrbitDemo> = None;
    for k in 0..a.programs {
        let prog_seed = derive_seed(a.seed, &format!("demo-prog-{k}"));
        let prog = family.sample(prog_seed);
        let demo = match &autos {
            Some(sw) => orbit_equality_demo_with_autos(&prog, &g, source, &tol, sw).map_err(lib)?,
            None => orbit_equality_demo(&prog, &g, source, &tol).map_err(lib)?,
        };
        rows.push(DemoProgramRow {
            seed: prog_seed,
            outputs_constant_on_orbits: demo.outputs_constant_on_orbits,
            achieved_mismatches: demo.achieved_mismatches,
        });
        shared.get_or_insert(demo);
    }
    let shared = shared.ok_or("--programs must be at least 1")?;
    let all_forced = rows
        .iter()
        .all(|r| r.outputs_constant_on_orbits && r.achieved_mismatches >= shared.forced_mismatches);
    let report = DemoReport {
        graph_source,
        n: g.n(),
        d,
        source,
        orbits: shared.orbits.clone(),
        targets: shared.targets.clone(),
        forced_mismatches: shared.forced_mismatches,
        target_reachable: shared.target_reachable,
        programs: rows,
        all_programs_forced: all_forced,
    };
    sink.write_json("demo-report.json", &report)?;

    println!("distance targets from node {source} on a {}-node graph", g.n());
    println!("orbits under the verified symmetries: {:?}", report.orbits);
    if report.target_reachable {
        println!("targets are constant on every orbit: no obstruction from symmetry");
        return Ok(EXIT_OK);
    }
    println!(
        "targets take distinct values inside an orbit: every index-blind program must miss at least {} node(s)",
        report.forced_mismatches
    );
    println!(
        "{} sampled programs: all orbit-constant, each missed >= {} node(s): {}",
        report.programs.len(),
        report.forced_mismatches,
        if report.all_programs_forced { "confirmed" } else { "NOT confirmed" }
    );
    if !report.all_programs_forced {
        return Err("a sampled program contradicted the orbit argument".into());
    }
    Ok(EXIT_WITNESS)
}

/// On-disk description of a built-in program family instance.
#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ProgramSpec {
    family: String,
    d_in: usize,
    #[serde(default)]
    layer_dims: Option<Vec<usize>>,
    seed: u64,
}

fn cmd_run_gnn(a: &RunGnnArgs, sink: &mut OutSink) -> Result<i32, String> {
    let spec_text = std::fs::read_to_string(&a.program)
        .map_err(|e| format!("cannot read {}: {e}", a.program.display()))?;
    let spec: ProgramSpec = serde_json::from_str(&spec_text)
        .map_err(|e| format!("malformed program spec: {e}"))?;
    if spec.family != "random" {
        return Err(format!(
            "unknown program family {:?} (only \"random\" is serialized)",
            spec.family
        ));
    }
    let g = read_graph(&a.graph)?;
    if g.d() != spec.d_in {
        return Err(format!(
            "program expects d_in={} but the graph has d={}",
            spec.d_in,
            g.d()
        ));
    }
    let family = RandomProgramFamily {
        d_in: spec.d_in,
        layer_dims: spec
            .layer_dims
            .clone()
            .unwrap_or_else(|| RandomProgramFamily::default_shape(spec.d_in).layer_dims),
    };
    let prog = family.sample(spec.seed);
    let report = if a.trace {
        let trace = run_gnn_trace(&prog, &g).map_err(lib)?;
        serde_json::json!({
            "family": spec.family,
            "d_in": family.d_in,
            "layer_dims": family.layer_dims,
            "seed": spec.seed,
            "trace": trace,
        })
    } else {
        let outputs = run_gnn(&prog, &g).map_err(lib)?;
        serde_json::json!({
            "family": spec.family,
            "d_in": family.d_in,
            "layer_dims": family.layer_dims,
            "seed": spec.seed,
            "outputs": outputs,
        })
    };
    sink.write_json("run-gnn-output.json", &report)?;
    println!("{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?);
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ConvertReport {
    ops: Vec<AggregateOp>,
    n: usize,
    d: usize,
    converted_layers: usize,
    graphs_checked: usize,
    mismatch: Option<(usize, usize)>,
}

fn cmd_convert(a: &ConvertArgs, sink: &mut OutSink) -> Result<i32, String> {
    let ops = parse_ops(&a.ops)?;
    if ops.is_empty() {
        return Err("--ops must name at least one op".into());
    }
    let ext = ExtendedGnnProgram {
        d_in: a.d,
        ops: ops.clone(),
    };
    let graphs = sample_graphs(&SampleConfig::exact(
        a.n,
        a.d,
        derive_seed(a.seed, "convert"),
        a.calib_count,
    ))
    .map_err(lib)?;
    let converted = convert_extended_to_gnn(&ext, a.n, &graphs).map_err(lib)?;
    let mut mismatch = None;
    let mut checked = 0usize;
    for g in &graphs {
        if let Some(hit) = even_layer_mismatch(&ext, &converted, g).map_err(lib)? {
            mismatch = Some(hit);
            break;
        }
        checked += 1;
    }
    let report = ConvertReport {
        ops,
        n: a.n,
        d: a.d,
        converted_layers: converted.layers.len(),
        graphs_checked: checked,
        mismatch,
    };
    sink.write_json("convert-report.json", &report)?;
    match mismatch {
        None => {
            println!(
                "converted {} op(s) into {} layers; states agree on all {} calibration graphs",
                report.ops.len(),
                report.converted_layers,
                checked
            );
            Ok(EXIT_OK)
        }
        Some((layer, node)) => {
            println!(
                "state divergence at aggregation step {layer}, node {node} (after {checked} clean graphs)"
            );
            Ok(EXIT_WITNESS)
        }
    }
}

// --- dispatch ------------------------------------------------------------------

fn cmd_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Gen(_) => "gen",
        Cmd::Oracle(_) => "oracle",
        Cmd::Check(_) => "check",
        Cmd::MefVerify(_) => "mef-verify",
        Cmd::Synth(_) => "synth",
        Cmd::DemoImpossible(_) => "demo-impossible",
        Cmd::RunGnn(_) => "run-gnn",
        Cmd::ConvertExtended(_) => "convert-extended",
    }
}

fn cmd_seed_and_scalar(cmd: &Cmd) -> (Option<u64>, Option<String>) {
    match cmd {
        Cmd::Gen(a) => (Some(a.seed), Some("rational".into())),
        Cmd::Oracle(_) => (None, None),
        Cmd::Check(a) => (Some(a.seed), Some(a.scalar.to_ascii_lowercase())),
        Cmd::MefVerify(a) => (Some(a.seed), Some("rational".into())),
        Cmd::Synth(a) => (Some(a.seed), Some("rational".into())),
        Cmd::DemoImpossible(a) => (Some(a.seed), Some("rational".into())),
        Cmd::RunGnn(_) => (None, None),
        Cmd::ConvertExtended(a) => (Some(a.seed), Some("rational".into())),
    }
}

fn dispatch(cmd: &Cmd, sink: &mut OutSink) -> Result<i32, String> {
    match cmd {
        Cmd::Gen(a) => cmd_gen(a, sink),
        Cmd::Oracle(a) => cmd_oracle(a, sink),
        Cmd::Check(a) => cmd_check(a, sink),
        Cmd::MefVerify(a) => cmd_mef(a, sink),
        Cmd::Synth(a) => cmd_synth(a, sink),
        Cmd::DemoImpossible(a) => cmd_demo(a, sink),
        Cmd::RunGnn(a) => cmd_run_gnn(a, sink),
        Cmd::ConvertExtended(a) => cmd_convert(a, sink),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let started = unix_now();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("PERMCOMPAT_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let mut sink = match OutSink::new(out_dir) {
        Ok(sink) => sink,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(EXIT_ERROR);
        }
    };

    let outcome = dispatch(&cli.cmd, &mut sink);

    let (seed, scalar_mode) = cmd_seed_and_scalar(&cli.cmd);
    let manifest = RunManifest {
        subcommand: cmd_name(&cli.cmd).to_string(),
        args,
        seed,
        scalar_mode,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix: started,
        finished_unix: unix_now(),
        outputs: sink.files.clone(),
    };
    if let Err(msg) = sink.write_manifest(&manifest) {
        eprintln!("error: {msg}");
        std::process::exit(EXIT_ERROR);
    }

    match outcome {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(EXIT_ERROR);
        }
    }
}
