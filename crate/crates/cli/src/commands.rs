use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::num::NonZeroU64;
use std::path::Path;

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use tetromino_core::baxter::{entropy_at, entropy_q4_report, finite_size_entropy, QuadratureConfig, Regime};
use tetromino_core::correspondence::{verify_theorem2, CorrespondenceParams, IdentityReport};
use tetromino_core::cycles::{class_partition, cluster_stats, GridGraph};
use tetromino_core::enumerate::{count_tilings_with, enumerate_tilings, EnumerationConfig, Pruning};
use tetromino_core::genfun::{f_eval, WeightSystem, WeightSystemRecord};
use tetromino_core::lattice::DomainSpec;
use tetromino_core::scalar::{parse_ratio, Complex64, Scalar, Value};
use tetromino_core::tutte::{
    tutte_classical, z_auto, z_delcon, z_subset, z_transfer, Graph, GraphRecord, PottsPoint, WeightedGraph,
    MAX_STRIP_WIDTH, MAX_SUBSET_EDGES,
};
use tetromino_core::{Error as CoreError, Mode};

use crate::{
    Cli, Command, CyclesCommand, Engine, EntropyCommand, GenfunCommand, ModeArg, OnOff, TileCommand, TutteCommand,
    VerifyCommand,
};

pub enum Outcome {
    Ok,
    Mismatch,
}

#[derive(Debug)]
pub enum CliError {
    Core(CoreError),
    Io(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::Accuracy(_) | CoreError::Validation(_)) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) | CliError::Usage(e) => f.write_str(e),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    serde_json::from_reader(io::BufReader::new(file)).map_err(|e| io_err(path, e))
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_err(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_line(w: &mut dyn Write, line: &str) -> Result<()> {
    writeln!(w, "{line}").map_err(|e| CliError::Io(e.to_string()))
}

/// Prints either the human text or the JSON document
/// `{command, input, result, provenance}`.
fn emit(cli: &Cli, command: &str, input: Json, result: Json, provenance: Json, human: impl FnOnce() -> String) {
    if cli.json {
        let doc = json!({ "command": command, "input": input, "result": result, "provenance": provenance });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("{}", human());
    }
}

/// Human-readable form: integers without a denominator, complex as `re+imi`.
fn show(v: &Value) -> String {
    match v {
        Value::Exact(r) if r.is_integer() => r.numer().to_string(),
        Value::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
        Value::Complex(c) => format!("{}{:+}i", c.re, c.im),
    }
}

fn domain(m: usize, n: usize) -> Result<DomainSpec> {
    Ok(DomainSpec::new(m, n)?)
}

fn pruning(p: OnOff) -> Pruning {
    match p {
        OnOff::On => Pruning::On,
        OnOff::Off => Pruning::Off,
    }
}

fn mode_of(m: ModeArg) -> Mode {
    match m {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Complex => Mode::Complex,
    }
}

/// Reads `p/q`, an integer, or in complex mode also a decimal or `re,im`.
fn parse_scalar<S: Scalar>(s: &str) -> Result<S> {
    if let Ok(r) = parse_ratio(s) {
        return Ok(S::from_ratio(&r));
    }
    let complex = match s.split_once(',') {
        Some((re, im)) => re.trim().parse::<f64>().and_then(|re| im.trim().parse::<f64>().map(|im| Complex64::new(re, im))),
        None => s.trim().parse::<f64>().map(|re| Complex64::new(re, 0.0)),
    }
    .map_err(|_| CliError::Usage(format!("cannot parse `{s}` as a scalar")))?;
    Ok(S::from_value(&Value::Complex(complex))?)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Tile(c) => tile(cli, c),
        Command::Genfun(GenfunCommand::Eval { dims, weights, mode }) => {
            let (m, n) = dims.get();
            match mode {
                ModeArg::Exact => genfun_eval::<BigRational>(cli, m, n, weights),
                ModeArg::Complex => genfun_eval::<Complex64>(cli, m, n, weights),
            }
        }
        Command::Cycles(CyclesCommand::Classes { dims, out }) => {
            let (m, n) = dims.get();
            cycle_classes(cli, m, n, out.as_deref())
        }
        Command::Tutte(c) => tutte(cli, c),
        Command::Verify(VerifyCommand::Identity { dims, q, x, mode }) => {
            let (m, n) = dims.get();
            verify_identity(cli, m, n, q, x, *mode)
        }
        Command::Entropy(c) => entropy(cli, c),
    }
}

fn tile(cli: &Cli, c: &TileCommand) -> Result<Outcome> {
    match c {
        TileCommand::Count { dims, pruning: p } => {
            let (m, n) = dims.get();
            let d = domain(m, n)?;
            let count = count_tilings_with(&d, pruning(*p));
            emit(
                cli,
                "tile count",
                json!({ "m": m, "n": n, "pruning": format!("{p:?}").to_lowercase() }),
                json!({ "count": count.to_string() }),
                json!({ "engine": "backtracking exact cover", "threads": rayon::current_num_threads() }),
                || count.to_string(),
            );
        }
        TileCommand::Enumerate { dims, pruning: p, limit, out } => {
            let (m, n) = dims.get();
            let d = domain(m, n)?;
            let cfg = EnumerationConfig {
                pruning: pruning(*p),
                limit: limit.and_then(NonZeroU64::new),
                ..Default::default()
            };
            let mut w = sink(out.as_deref())?;
            let mut written = 0u64;
            for t in enumerate_tilings(&d, &cfg) {
                let line = serde_json::to_string(&t.to_record()).expect("serializable");
                write_line(&mut *w, &line)?;
                written += 1;
            }
            w.flush().map_err(|e| CliError::Io(e.to_string()))?;
            drop(w);
            if let Some(path) = out {
                emit(
                    cli,
                    "tile enumerate",
                    json!({ "m": m, "n": n, "pruning": format!("{p:?}").to_lowercase(), "limit": limit }),
                    json!({ "written": written, "out": path.display().to_string() }),
                    json!({ "engine": "backtracking exact cover" }),
                    || format!("wrote {written} tilings to {}", path.display()),
                );
            }
        }
    }
    Ok(Outcome::Ok)
}

fn genfun_eval<S: Scalar>(cli: &Cli, m: usize, n: usize, path: &Path) -> Result<Outcome> {
    let d = domain(m, n)?;
    let record: WeightSystemRecord = read_json(path)?;
    let weights = WeightSystem::<S>::from_record(d, &record)?;
    let f = f_eval(&d, &weights)?.to_value();
    emit(
        cli,
        "genfun eval",
        json!({ "m": m, "n": n, "mode": S::MODE.to_string(), "weights": record }),
        json!({ "f": f }),
        json!({ "engine": "enumeration" }),
        || show(&f),
    );
    Ok(Outcome::Ok)
}

fn cycle_classes(cli: &Cli, m: usize, n: usize, out: Option<&Path>) -> Result<Outcome> {
    let d = domain(m, n)?;
    let g = GridGraph::for_domain(&d);
    let weights = WeightSystem::<BigRational>::ones(d);
    let classes = class_partition(enumerate_tilings(&d, &EnumerationConfig::default()), &weights)?;
    let mut w = sink(out)?;
    let mut tilings = 0;
    for (a, members) in &classes {
        let stats = cluster_stats(&g, a);
        let mut multiset: BTreeMap<i64, usize> = BTreeMap::new();
        for s in members {
            *multiset.entry(s.b1 as i64 - s.b2 as i64).or_default() += 1;
        }
        tilings += members.len();
        let record = json!({
            "A": a.to_string(),
            "k": stats.clusters,
            "l": stats.loops,
            "size": members.len(),
            "b_exponent_multiset": multiset.into_iter().collect::<Vec<_>>(),
        });
        write_line(&mut *w, &serde_json::to_string(&record).expect("serializable"))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    drop(w);
    if let Some(path) = out {
        emit(
            cli,
            "cycles classes",
            json!({ "m": m, "n": n }),
            json!({ "classes": classes.len(), "tilings": tilings, "out": path.display().to_string() }),
            json!({ "engine": "enumeration" }),
            || format!("wrote {} classes covering {tilings} tilings to {}", classes.len(), path.display()),
        );
    }
    Ok(Outcome::Ok)
}

/// Recognises a graph that is exactly `Graph::grid(m, n)` for some `m, n`.
fn grid_shape(g: &Graph) -> Option<(usize, usize)> {
    let v = g.vertex_count();
    (1..=v).filter(|m| v % m == 0).map(|m| (m, v / m)).find(|&(m, n)| Graph::grid(m, n).endpoints() == g.endpoints())
}

fn tutte(cli: &Cli, c: &TutteCommand) -> Result<Outcome> {
    match c {
        TutteCommand::Eval { graph, q, engine, mode } => {
            let record: GraphRecord = read_json(graph)?;
            match mode {
                ModeArg::Exact => tutte_eval::<BigRational>(cli, &record, q, *engine),
                ModeArg::Complex => tutte_eval::<Complex64>(cli, &record, q, *engine),
            }
        }
        TutteCommand::Classical { grid, x, y } => {
            let (m, n) = (grid[0], grid[1]);
            let xs: BigRational = parse_scalar(x)?;
            let ys: BigRational = parse_scalar(y)?;
            let t = tutte_classical(&Graph::grid(m, n), &xs, &ys)?.to_value();
            emit(
                cli,
                "tutte classical",
                json!({ "grid": [m, n], "x": xs.to_value(), "y": ys.to_value() }),
                json!({ "T": t }),
                json!({ "engine": "auto", "max_subset_edges": MAX_SUBSET_EDGES, "max_strip_width": MAX_STRIP_WIDTH }),
                || show(&t),
            );
            Ok(Outcome::Ok)
        }
    }
}

fn tutte_eval<S: Scalar>(cli: &Cli, record: &GraphRecord, q: &str, engine: Engine) -> Result<Outcome> {
    let g = WeightedGraph::<S>::from_record(record)?;
    let qs: S = parse_scalar(q)?;
    let (z, used) = match engine {
        Engine::Subset => (z_subset(&g, &qs)?, "subset"),
        Engine::Delcon => (z_delcon(&g, &qs), "delcon"),
        Engine::Auto => (z_auto(&g, &qs), "auto"),
        Engine::Transfer => {
            let (m, n) = grid_shape(g.graph())
                .ok_or_else(|| CliError::Usage("the transfer engine needs a grid graph in canonical edge order".into()))?;
            (z_transfer(m, n, &PottsPoint::per_edge(qs.clone(), g.weights().to_vec()))?, "transfer")
        }
    };
    let z = z.to_value();
    emit(
        cli,
        "tutte eval",
        json!({ "graph": record, "Q": qs.to_value(), "mode": S::MODE.to_string() }),
        json!({ "Z": z }),
        json!({ "engine": used, "max_subset_edges": MAX_SUBSET_EDGES, "max_strip_width": MAX_STRIP_WIDTH }),
        || show(&z),
    );
    Ok(Outcome::Ok)
}

enum QSpec {
    Exact(BigRational),
    Angle(f64),
}

fn parse_q(s: &str) -> Result<QSpec> {
    match s.strip_prefix("complex:") {
        Some(mu) => mu
            .trim()
            .parse::<f64>()
            .map(QSpec::Angle)
            .map_err(|_| CliError::Usage(format!("cannot parse angle in `{s}`"))),
        None => Ok(QSpec::Exact(parse_ratio(s)?)),
    }
}

fn edge_values<S: Scalar>(spec: &str, edges: usize, seed: u64) -> Result<Vec<S>> {
    if let Some(v) = spec.strip_prefix("uniform:") {
        return Ok(vec![parse_scalar(v)?; edges]);
    }
    if spec == "random" {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..edges)
            .map(|_| {
                let r = BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=9).into());
                S::from_ratio(&r)
            })
            .collect());
    }
    let values: Vec<Value> = read_json(Path::new(spec))?;
    if values.len() != edges {
        return Err(CliError::Usage(format!("{spec}: expected {edges} edge values, found {}", values.len())));
    }
    Ok(values.iter().map(S::from_value).collect::<std::result::Result<_, _>>()?)
}

fn verify_identity(cli: &Cli, m: usize, n: usize, q: &str, x: &str, mode: Option<ModeArg>) -> Result<Outcome> {
    let qspec = parse_q(q)?;
    let mode = match (mode.map(mode_of), &qspec) {
        (Some(Mode::Exact), QSpec::Angle(_)) => {
            return Err(CliError::Usage("complex:MU needs --mode complex".into()));
        }
        (Some(m), _) => m,
        (None, QSpec::Angle(_)) => Mode::Complex,
        (None, QSpec::Exact(_)) => Mode::Exact,
    };
    let g = GridGraph::new(m, n);
    match mode {
        Mode::Exact => {
            let QSpec::Exact(qv) = qspec else { unreachable!() };
            let params = CorrespondenceParams::new(qv, edge_values(x, g.edge_count(), cli.seed)?)?;
            finish_identity(cli, m, n, q, x, &params, verify_theorem2(m, n, &params)?)
        }
        Mode::Complex => {
            let qv = match qspec {
                QSpec::Exact(r) => Complex64::from_ratio(&r),
                QSpec::Angle(mu) => Complex64::from_polar(1.0, mu),
            };
            let params = CorrespondenceParams::new(qv, edge_values(x, g.edge_count(), cli.seed)?)?;
            finish_identity(cli, m, n, q, x, &params, verify_theorem2(m, n, &params)?)
        }
    }
}

fn finish_identity<S: Scalar>(
    cli: &Cli,
    m: usize,
    n: usize,
    q: &str,
    x: &str,
    params: &CorrespondenceParams<S>,
    r: IdentityReport<S>,
) -> Result<Outcome> {
    let (lhs, rhs, f, pq) = (r.lhs.to_value(), r.rhs.to_value(), r.f.to_value(), r.potts_q.to_value());
    let residual = match r.mode {
        Mode::Exact => Json::Null,
        Mode::Complex => json!(r.residual),
    };
    let x_values: Vec<Value> = params.x.iter().map(Scalar::to_value).collect();
    emit(
        cli,
        "verify identity",
        json!({ "m": m, "n": n, "q": q, "x": x, "x_values": x_values, "mode": r.mode.to_string(), "seed": cli.seed }),
        json!({ "lhs": lhs, "f": f, "Q": pq, "rhs": rhs, "rhs_delcon": r.rhs_delcon.to_value(), "equal": r.equal, "residual": residual }),
        json!({ "rhs_engine": r.rhs_engine, "cross_check": "delcon", "max_subset_edges": MAX_SUBSET_EDGES }),
        || {
            let mut s = format!("lhs={}\nrhs={}\nQ={}\nequal={}", show(&lhs), show(&rhs), show(&pq), r.equal);
            if r.mode == Mode::Complex {
                s.push_str(&format!("\nresidual={:e}", r.residual));
            }
            s
        },
    );
    Ok(if r.equal { Outcome::Ok } else { Outcome::Mismatch })
}

fn quadrature(cli: &Cli) -> Result<QuadratureConfig> {
    let mut cfg = QuadratureConfig::default();
    if let Some(t) = cli.tol {
        if !(t > 0.0) {
            return Err(CliError::Usage(format!("--tol {t} must be positive")));
        }
        cfg.tolerance = t;
    }
    Ok(cfg)
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Subcritical => "subcritical",
        Regime::Supercritical => "supercritical",
        Regime::Critical => "critical",
    }
}

fn entropy(cli: &Cli, c: &EntropyCommand) -> Result<Outcome> {
    let cfg = quadrature(cli)?;
    match *c {
        EntropyCommand::Baxter { q } => {
            let p = entropy_at(q, &cfg)?;
            let critical = (q == 4.0).then(|| {
                let r = entropy_q4_report();
                json!({ "bare_ratio_log_s": r.bare_ratio_log_s, "reciprocal_log_s": r.reciprocal_log_s })
            });
            emit(
                cli,
                "entropy baxter",
                json!({ "Q": q, "tol": cfg.tolerance }),
                json!({ "point": p, "S": p.log_s.exp(), "critical_alternatives": critical }),
                json!({ "engine": match p.regime {
                    Regime::Subcritical => "adaptive Simpson + composite Gauss-Legendre",
                    Regime::Supercritical => "series",
                    Regime::Critical => "closed form",
                }}),
                || {
                    format!(
                        "regime={}\nlog_S={:.15}\nS={:.15}\nerror_bound={:e}",
                        regime_name(p.regime),
                        p.log_s,
                        p.log_s.exp(),
                        p.error_bound
                    )
                },
            );
        }
        EntropyCommand::FiniteSize { q, max_size } => {
            let estimates = (1..=max_size as usize)
                .map(|l| finite_size_entropy(l, l, q).map(|s| (l, s)))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let target = entropy_at(q, &cfg)?;
            let target_s = target.log_s.exp();
            emit(
                cli,
                "entropy finite-size",
                json!({ "Q": q, "max_size": max_size }),
                json!({
                    "estimates": estimates.iter().map(|&(l, s)| json!({ "L": l, "S": s })).collect::<Vec<_>>(),
                    "target_S": target_s,
                    "target_log_S": target.log_s,
                }),
                json!({ "engine": "strip transfer matrix", "boundary": "free" }),
                || {
                    let mut s = String::new();
                    for (l, est) in &estimates {
                        s.push_str(&format!("L={l} S={est:.10}\n"));
                    }
                    s.push_str(&format!("target S={target_s:.10}"));
                    s
                },
            );
        }
    }
    Ok(Outcome::Ok)
}
