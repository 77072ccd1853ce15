use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use patchcalc::decomposition::{validate_decomposition, TreeDecomposition};
use patchcalc::extremal::{self, ClassSpec, Relation};
use patchcalc::patch::{power_density_limit_with_horizon, Patch, DEFAULT_POWER_HORIZON};
use patchcalc::patchwork::{validate_embedded_patchwork, validate_stitched, PatchworkJson, Report, StitchSet};
use patchcalc::topo_density::{construct_h_pm_with_cap, controlled_from_pair, density_table, PSI_VERTEX_CAP};
use patchcalc::wall::{build_wall, Wall, WallSpec};
use patchcalc::{fmt_rational, generators, parse_rational, Graph};

#[derive(Parser)]
#[command(name = "patchcalc", version, about = "Patch products, extremal functions and topological density tables")]
struct Cli {
    /// Worker threads; defaults to all cores. Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Replaces the default vertex cap of the command.
    #[arg(long, global = true)]
    cap_override: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ex(n), f(n) = ex(n) − Δn and a period report for Forb(H_1, …).
    Extremal(ExtremalArgs),
    /// Limit density of the powers of a patch read from JSON.
    PatchPower(InOut),
    /// Density table of the greedy Δ-controlled sequence.
    TopoDensity(TopoArgs),
    /// Checks a patchwork or decomposition JSON file.
    Validate(ValidateArgs),
    /// A wall as graph6 with its labels.
    Wall(WallArgs),
    /// Searches for a minor model of PATTERN in HOST.
    Minor(PairArgs),
    /// Searches for a topological embedding of PATTERN in HOST.
    TopoMinor(PairArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    Minor,
    Topo,
}

#[derive(Args)]
struct ExtremalArgs {
    /// Comma-separated forbidden graphs.
    #[arg(long, value_delimiter = ',', required = true)]
    forbid: Vec<String>,
    #[arg(long, value_enum, default_value = "minor")]
    relation: RelationArg,
    #[arg(long)]
    nmax: usize,
    /// Slope used for f; defaults to the last increment of ex.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InOut {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TopoArgs {
    #[arg(long)]
    delta: String,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Host graph, required for decompositions.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WallArgs {
    /// Wall JSON `{"l","h","x0","y0"}`; overrides the dimension flags.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    l: usize,
    #[arg(long, default_value_t = 2)]
    h: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    x0: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    y0: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PairArgs {
    /// graph6 string, file, or named graph.
    host: String,
    pattern: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    Invalid,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Invalid) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Extremal(a) => run_extremal(a, cli.cap_override),
        Command::PatchPower(a) => run_patch_power(a, cli.cap_override),
        Command::TopoDensity(a) => run_topo_density(a, cli.cap_override),
        Command::Validate(a) => run_validate(a),
        Command::Wall(a) => run_wall(a),
        Command::Minor(a) => run_pair(a, false),
        Command::TopoMinor(a) => run_pair(a, true),
    }
}

fn emit(out: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> anyhow::Result<()> {
    emit(out, &format!("{}\n", serde_json::to_string_pretty(v)?))
}

/// Named graph, file holding graph6 or graph JSON, or a literal graph6 string.
fn load_graph(s: &str) -> anyhow::Result<Graph> {
    if let Some(g) = named_graph(s)? {
        return Ok(g);
    }
    let p = Path::new(s);
    if p.is_file() {
        let text = fs::read_to_string(p).with_context(|| format!("reading {s}"))?;
        let text = text.trim();
        return if text.starts_with('{') {
            Ok(Graph::from_json(text)?)
        } else {
            Ok(Graph::from_graph6(text)?)
        };
    }
    Graph::from_graph6(s).map_err(|e| anyhow!("{s:?} is not a named graph, file or graph6 string: {e}"))
}

fn named_graph(s: &str) -> anyhow::Result<Option<Graph>> {
    let num = |t: &str| -> anyhow::Result<usize> { t.parse().with_context(|| format!("bad number in {s:?}")) };
    let parts: Vec<&str> = s.split(':').collect();
    let g = match parts.as_slice() {
        ["K33"] => generators::complete_bipartite(3, 3)?,
        [k] if k.len() > 1 && k.starts_with('K') && k[1..].chars().all(|c| c.is_ascii_digit()) => {
            generators::complete(num(&k[1..])?)?
        }
        ["grid", n, m] => generators::grid(num(n)?, num(m)?)?,
        ["rc", k] => generators::robertson_chain(num(k)?)?,
        ["fan", t] => generators::fan(num(t)?)?,
        _ => return Ok(None),
    };
    Ok(Some(g))
}

fn run_extremal(a: &ExtremalArgs, cap: Option<usize>) -> anyhow::Result<Outcome> {
    let forbidden = a.forbid.iter().map(|s| load_graph(s)).collect::<anyhow::Result<Vec<_>>>()?;
    let relation = match a.relation {
        RelationArg::Minor => Relation::Minor,
        RelationArg::Topo => Relation::Topo,
    };
    let spec = ClassSpec::new(forbidden, relation)?;
    let table = extremal::ex_table_with_cap(&spec, a.nmax, cap.unwrap_or(patchcalc::enumerate::DEFAULT_CAP))?;
    let delta = match &a.delta {
        Some(d) => parse_rational(d)?,
        None => extremal::heuristic_delta(&table).ok_or_else(|| anyhow!("--delta is needed when nmax < 2"))?,
    };
    let f = extremal::f_values(&table, &delta);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "ex", "f_numerator", "f_denominator", "witness_graph6"])?;
    for (row, (_, fv)) in table.rows.iter().zip(&f) {
        w.write_record([
            row.n.to_string(),
            row.ex.to_string(),
            fv.numer().to_string(),
            fv.denom().to_string(),
            row.witness.to_graph6(),
        ])?;
    }
    emit(a.out.as_deref(), &String::from_utf8(w.into_inner()?)?)?;
    match extremal::detect_period(&f, table.rows.len() / 2) {
        Some(p) => {
            let residues: Vec<String> = p.residues.iter().map(fmt_rational).collect();
            eprintln!(
                "period P={} onset={} residues=[{}] delta={} checked n={}..{}",
                p.period,
                p.onset,
                residues.join(","),
                fmt_rational(&delta),
                p.n_min,
                p.n_max
            );
        }
        None => eprintln!("period inconclusive on n={}..{}", 1, a.nmax),
    }
    Ok(Outcome::Ok)
}

fn run_patch_power(a: &InOut, cap: Option<usize>) -> anyhow::Result<Outcome> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let h = Patch::from_json(&text)?;
    let lim = power_density_limit_with_horizon(&h, cap.unwrap_or(DEFAULT_POWER_HORIZON))?;
    emit(a.out.as_deref(), &format!("{}\n", fmt_rational(&lim.limit)))?;
    Ok(Outcome::Ok)
}

fn run_topo_density(a: &TopoArgs, cap: Option<usize>) -> anyhow::Result<Outcome> {
    let delta = parse_rational(&a.delta)?;
    let pair = construct_h_pm_with_cap(&delta, cap.unwrap_or(PSI_VERTEX_CAP))?;
    let seq = controlled_from_pair(pair, a.l)?;
    let rows = density_table(&seq, a.l)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["l", "|V|", "|E|", "d_numerator", "d_denominator", "prefix_psi"])?;
    for r in &rows {
        let (num, den) = r.density_parts();
        w.write_record([
            r.l.to_string(),
            r.vertices.to_string(),
            r.edges.to_string(),
            num.to_string(),
            den.to_string(),
            fmt_rational(&r.prefix_psi),
        ])?;
    }
    emit(a.out.as_deref(), &String::from_utf8(w.into_inner()?)?)?;
    Ok(Outcome::Ok)
}

fn report_json(r: &Report) -> Value {
    Value::Array(
        r.violations
            .iter()
            .map(|v| json!({"tag": v.tag, "detail": v.detail}))
            .collect(),
    )
}

fn run_validate(a: &ValidateArgs) -> anyhow::Result<Outcome> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let raw: Value = serde_json::from_str(&text).context("input is not JSON")?;
    let (valid, report) = if raw.get("tree_edges").is_some() {
        let g = load_graph(a.graph.as_deref().ok_or_else(|| anyhow!("--graph is required for a decomposition"))?)?;
        let d = TreeDecomposition::from_json(&text)?;
        let r = validate_decomposition(&g, &d);
        (
            r.valid,
            json!({
                "kind": "decomposition",
                "valid": r.valid,
                "width": r.width,
                "adhesion": r.adhesion,
                "order": r.order,
                "proper": d.is_proper(),
                "problems": r.problems,
            }),
        )
    } else if raw.get("patches").is_some() {
        validate_patchwork(serde_json::from_value(raw)?, a.graph.as_deref())?
    } else {
        bail!("unrecognised input: expected a patchwork or a decomposition");
    };
    emit_json(a.out.as_deref(), &report)?;
    Ok(if valid { Outcome::Ok } else { Outcome::Invalid })
}

fn validate_patchwork(j: PatchworkJson, graph: Option<&str>) -> anyhow::Result<(bool, Value)> {
    let host: Graph = match (j.host, graph) {
        (_, Some(s)) => load_graph(s)?,
        (Some(h), None) => Graph::try_from(h)?,
        (None, None) => bail!("patchwork has no host; pass --graph"),
    };
    let patches = j
        .patches
        .into_iter()
        .map(Patch::try_from)
        .collect::<Result<Vec<_>, _>>()?;
    if patches.iter().any(|p| p.q() != j.q) {
        bail!("patch arity differs from q = {}", j.q);
    }
    let placements = j.placements.ok_or_else(|| anyhow!("patchwork has no placements"))?;
    let emb = match validate_embedded_patchwork(&host, &patches, &placements) {
        Ok(e) => e,
        Err(r) => {
            return Ok((
                false,
                json!({"kind": "patchwork", "valid": false, "violations": report_json(&r)}),
            ))
        }
    };
    let Some(paths) = j.stitches else {
        return Ok((true, json!({"kind": "patchwork", "valid": true, "violations": []})));
    };
    let r = validate_stitched(&emb, &StitchSet { paths });
    Ok((
        r.is_ok(),
        json!({"kind": "stitched", "valid": r.is_ok(), "violations": report_json(&r)}),
    ))
}

fn run_wall(a: &WallArgs) -> anyhow::Result<Outcome> {
    let w = match &a.input {
        Some(p) => {
            let spec: WallSpec = serde_json::from_str(&fs::read_to_string(p)?)?;
            Wall::from_spec(&spec)?
        }
        None => build_wall(a.l, a.h, a.x0, a.y0)?,
    };
    let v = json!({
        "graph6": w.graph.to_graph6(),
        "spec": w.spec(),
        "coords": w.coords,
        "corners": w.corners,
        "outer_cycle": w.outer_cycle,
        "bottom": w.bottom,
        "top": w.top,
        "left": w.left,
        "right": w.right,
        "pegs_left": w.pegs_left,
        "pegs_right": w.pegs_right,
    });
    emit_json(a.out.as_deref(), &v)?;
    Ok(Outcome::Ok)
}

fn run_pair(a: &PairArgs, topo: bool) -> anyhow::Result<Outcome> {
    let host = load_graph(&a.host)?;
    let pattern = load_graph(&a.pattern)?;
    let v = if topo {
        match patchcalc::topo::try_find_topo_embedding(&host, &pattern, u64::MAX)? {
            Some(e) => json!({"found": true, "embedding": patchcalc::wall::EmbeddingJson::from(&e)}),
            None => json!({"found": false}),
        }
    } else {
        match patchcalc::minor::try_find_minor_model(&host, &pattern)? {
            Some(m) => json!({"found": true, "branch_sets": m.branch_sets}),
            None => json!({"found": false}),
        }
    };
    emit_json(a.out.as_deref(), &v)?;
    Ok(Outcome::Ok)
}
