// SPDX-License-Identifier: Apache-2.0

//! `tpack` command line.
//!
//! Exit status: 0 success, 1 usage or input error, 2 failed precondition or
//! premise, 3 unstabilized or unknown verdict. Results go to standard output
//! (or `--out`), diagnostics to standard error.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::arcs::{assemble_arcs, fitting_radius, mu_estimate, to_dot, verify_arc_system, ArcOptions, PremiseMode};
use crate::ends::{
    check_cut_parity_premise, check_discrete, distances, end_degree_parity, handshake_check, is_inner_eulerian_with_ends,
    lambda_end, HandshakeStatus, Parity, PeriodicPresentation, Presentation, Terminal, TerminalSpec, VertexTerminals,
    DEFAULT_CUT_GUARD, DEFAULT_R_MAX,
};
use crate::error::{ArcError, EndsError, PackError};
use crate::io::{arcs_to_value, packing_to_dot, packing_to_value, parse_input, presentation_to_dot, presentation_to_value, to_pretty};
use crate::tpath::{pack_tpaths_with, twice_bound, verify_packing, PackOptions, TerminalSet};
use crate::zoo;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PREMISE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tpack", version, about = "Edge-disjoint T-paths in finite graphs and T-arcs in graphs with ends")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// zoo entry to load
    #[arg(long, value_name = "NAME")]
    pub zoo: Option<String>,
    /// zoo parameter, repeatable
    #[arg(long = "param", value_name = "K")]
    pub params: Vec<usize>,
    /// graph or periodic description JSON
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// same as --input, given inline
    #[arg(long, value_name = "JSON", conflicts_with = "input")]
    pub input_json: Option<String>,
    /// comma-separated: leaves, ends, all, class:NAME, end:ID, vertex labels
    #[arg(long, value_name = "SPEC")]
    pub terminals: Option<String>,
    #[arg(long, value_name = "R")]
    pub radius: Option<usize>,
    #[arg(long, value_name = "D")]
    pub depth: Option<usize>,
    #[arg(long, value_name = "R", default_value_t = DEFAULT_R_MAX)]
    pub rmax: usize,
    /// also write a Graphviz rendering
    #[arg(long, value_name = "FILE")]
    pub dot: Option<PathBuf>,
    /// write the JSON result here instead of standard output
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// check the premise as degree parity of vertices and ends instead of odd cuts
    #[arg(long)]
    pub via_inner_eulerian: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximum T-path packing of a finite graph
    Pack(Common),
    /// T-arc system of a graph with ends
    Arcs(Common),
    /// λ(t, T \ {t}) for every terminal
    Lambda(Common),
    /// windowed μ for every terminal (near the root when terminals are infinite)
    Mu(Common),
    /// discreteness, cut-parity and inner-Eulerian verdicts
    Check(Common),
    /// end degree parities
    Parity(Common),
    /// sum of odd-degree vertices and ends
    Handshake(Common),
    /// zoo catalogue
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
    /// graph as JSON, or as DOT with --dot
    Export(Common),
}

#[derive(Subcommand, Debug)]
pub enum ZooAction {
    List,
    Show {
        name: String,
        #[arg(long = "param", value_name = "K")]
        params: Vec<usize>,
    },
}

/// A failed run: exit status, message and optional JSON result.
struct Failure {
    code: i32,
    message: String,
    result: Option<Value>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into(), result: None }
    }
}

impl From<EndsError> for Failure {
    fn from(e: EndsError) -> Self {
        let code = match e {
            EndsError::Unstabilized { .. } => EXIT_UNKNOWN,
            EndsError::NotSeparable { .. } | EndsError::WindowTooLarge { .. } => EXIT_PREMISE,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string(), result: None }
    }
}

impl From<crate::error::ZooError> for Failure {
    fn from(e: crate::error::ZooError) -> Self {
        Failure::usage(e.to_string())
    }
}

struct Output {
    value: Value,
    code: i32,
    dot: Option<String>,
}

impl Output {
    fn ok(value: Value) -> Self {
        Output { value, code: EXIT_OK, dot: None }
    }
}

/// Parses `args` and runs; returns the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let common = match &cli.command {
        Command::Zoo { .. } => None,
        Command::Pack(c)
        | Command::Arcs(c)
        | Command::Lambda(c)
        | Command::Mu(c)
        | Command::Check(c)
        | Command::Parity(c)
        | Command::Handshake(c)
        | Command::Export(c) => Some(c.clone()),
    };
    let (value, code, dot) = match execute(&cli.command) {
        Ok(o) => (Some(o.value), o.code, o.dot),
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            (f.result, f.code, None)
        }
    };
    let target = common.as_ref().and_then(|c| c.out.clone());
    if let Some(v) = value {
        let text = to_pretty(&v);
        match &target {
            Some(path) => {
                if let Err(e) = std::fs::write(path, text) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            None => {
                let _ = out.write_all(text.as_bytes());
            }
        }
    }
    if let (Some(text), Some(path)) = (dot, common.and_then(|c| c.dot)) {
        if let Err(e) = std::fs::write(&path, text) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    code
}

fn load(c: &Common) -> Result<PeriodicPresentation, Failure> {
    match (&c.zoo, &c.input, &c.input_json) {
        (Some(name), None, None) => Ok(zoo::build(name, &c.params)?),
        (None, Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            parse_input(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        (None, None, Some(text)) => parse_input(text).map_err(|e| Failure::usage(format!("inline input: {e}"))),
        _ => Err(Failure::usage("give exactly one of --zoo NAME, --input FILE or --input-json TEXT")),
    }
}

fn terminals(c: &Common, p: &PeriodicPresentation) -> Result<TerminalSpec, Failure> {
    let text = match (&c.terminals, &c.zoo) {
        (Some(t), _) => t.clone(),
        (None, Some(name)) => zoo::default_terminals(name, &c.params),
        (None, None) => return Err(Failure::usage("--terminals is required for file input")),
    };
    Ok(TerminalSpec::parse(p, &text)?)
}

fn execute(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Pack(c) => pack(c),
        Command::Arcs(c) => arcs(c),
        Command::Lambda(c) => lambda(c),
        Command::Mu(c) => mu(c),
        Command::Check(c) => check(c),
        Command::Parity(c) => parity(c),
        Command::Handshake(c) => handshake(c),
        Command::Export(c) => export(c),
        Command::Zoo { action } => zoo_cmd(action),
    }
}

fn pack(c: &Common) -> Result<Output, Failure> {
    let p = load(c)?;
    let g = p.finite_graph().ok_or_else(|| Failure::usage("`pack` needs a finite graph; use `arcs` for graphs with ends"))?;
    let spec = terminals(c, &p)?;
    let vs = match (&spec.vertices, spec.ends.is_empty()) {
        (VertexTerminals::Finite(vs), true) => vs.clone(),
        _ => return Err(Failure::usage("`pack` takes vertex terminals only")),
    };
    let t = TerminalSet::new(&g, vs.iter().copied()).map_err(|e| Failure::usage(e.to_string()))?;
    if t.len() < 2 {
        return Err(Failure::usage("at least two terminals are needed"));
    }
    match pack_tpaths_with(&g, &t, PackOptions::default()) {
        Ok(packing) => {
            let violations = verify_packing(&g, &t, &packing.paths, &packing.certificate);
            if !violations.is_empty() {
                return Err(Failure { code: EXIT_USAGE, message: format!("packing failed verification: {violations:?}"), result: None });
            }
            let dot = c.dot.as_ref().map(|_| packing_to_dot(&g, &packing, &vs));
            Ok(Output { value: packing_to_value(&g, &packing), code: EXIT_OK, dot })
        }
        Err(PackError::NotInnerEulerian { witness, label }) => {
            let lambda = crate::tpath::lambda_profile(&g, &t).map_err(|e| Failure::usage(e.to_string()))?;
            let result = json!({
                "status": "not_inner_eulerian",
                "witness": label,
                "witness_degree": g.neighbors(witness).len(),
                "lambda": lambda.iter().map(|(&v, &l)| (g.vertex_label(v), l)).collect::<BTreeMap<_, _>>(),
                "bound": twice_bound(&lambda) as f64 / 2.0,
            });
            Err(Failure { code: EXIT_PREMISE, message: format!("not inner-Eulerian: `{label}` has odd degree"), result: Some(result) })
        }
        Err(e) => Err(Failure::usage(e.to_string())),
    }
}

fn arc_failure(e: ArcError) -> Failure {
    let (code, status) = match &e {
        ArcError::PremiseFailed(_) => (EXIT_PREMISE, "premise_failed"),
        ArcError::NotDiscrete(_) => (EXIT_PREMISE, "not_discrete"),
        ArcError::TruncationNotInnerEulerian(_) => (EXIT_PREMISE, "truncation_not_inner_eulerian"),
        ArcError::PremiseUnverified(_) => (EXIT_UNKNOWN, "premise_unverified"),
        ArcError::Ends(EndsError::Unstabilized { .. }) => (EXIT_UNKNOWN, "unstabilized"),
        ArcError::Ends(EndsError::NotSeparable { .. }) => (EXIT_PREMISE, "not_separable"),
        _ => (EXIT_USAGE, "error"),
    };
    Failure { code, message: e.to_string(), result: Some(json!({ "status": status, "detail": e.to_string() })) }
}

fn arcs(c: &Common) -> Result<Output, Failure> {
    let p = load(c)?;
    let spec = terminals(c, &p)?;
    let opts = ArcOptions {
        premise: if c.via_inner_eulerian { PremiseMode::InnerEulerian } else { PremiseMode::CutParity },
        r_max: c.rmax,
        ..ArcOptions::default()
    };
    let (system, state) =
        assemble_arcs(&p, &spec, c.radius.unwrap_or(10), c.depth.unwrap_or(30), &opts).map_err(arc_failure)?;
    let violations = verify_arc_system(&p, &spec, &system, &state)?;
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::usage(format!("arc system failed verification: {}", list.join("; "))));
    }
    let dot = c.dot.as_ref().map(|_| to_dot(&system, &state));
    Ok(Output { value: arcs_to_value(&p, &system, &state), code: EXIT_OK, dot })
}

fn lambda(c: &Common) -> Result<Output, Failure> {
    let p = load(c)?;
    let spec = terminals(c, &p)?;
    let ts = spec.terminals().ok_or_else(|| Failure::usage("`lambda` needs finitely many vertex terminals"))?;
    let mut out = BTreeMap::new();
    for t in &ts {
        let res = lambda_end(&p, &spec, t, c.rmax)?;
        out.insert(
            t.label(&p),
            json!({
                "value": res.value,
                "radius": res.radius,
                "cut": res.cut.edge_set.iter().map(|&e| p.edge_label(e)).collect::<Vec<_>>(),
                "cut_radius": res.cut_radius,
                "sequence": res.sequence,
            }),
        );
    }
    Ok(Output::ok(json!({ "lambda": out })))
}

/// Terminals reported by `mu`: all of them when finite, otherwise the ends
/// and the vertex terminals adjacent to the root.
fn mu_targets(p: &PeriodicPresentation, spec: &TerminalSpec) -> Vec<Terminal> {
    if let Some(all) = spec.terminals() {
        return all;
    }
    let near: BTreeSet<_> = distances(p, 1).into_keys().filter(|&v| spec.is_vertex_terminal(p, v)).collect();
    near.into_iter().map(Terminal::Vertex).chain(spec.ends.iter().cloned().map(Terminal::End)).collect()
}

fn mu(c: &Common) -> Result<Output, Failure> {
    let p = load(c)?;
    let spec = terminals(c, &p)?;
    let r = c.radius.unwrap_or(8);
    let mut out = BTreeMap::new();
    let mut all_stable = true;
    for t in mu_targets(&p, &spec) {
        let m = mu_estimate(&p, &spec, &t, r)?;
        all_stable &= m.stabilized;
        out.insert(m.terminal.clone(), json!({ "value": m.value, "radius": m.radius, "stabilized": m.stabilized }));
    }
    let code = if all_stable { EXIT_OK } else { EXIT_UNKNOWN };
    Ok(Output { value: json!({ "mu": out }), code, dot: None })
}

fn check(c: &Common) -> Result<Output, Failure> {
    let p = load(c)?;
    let spec = terminals(c, &p)?;
    let discrete = check_discrete(&p, &spec, c.rmax)?;
    let radius = c.radius.unwrap_or(c.rmax);
    let premise = match fitting_radius(&p, radius, DEFAULT_CUT_GUARD)? {
        Some(r) => serde_json::to_value(check_cut_parity_premise(&p, &spec, r, DEFAULT_CUT_GUARD)?).expect("serializable"),
        None => json!({ "holds": null, "reason": "no window fits the enumeration guard" }),
    };
    let ie = is_inner_eulerian_with_ends(&p, &spec, c.rmax)?;
    let code = if ie.holds.is_none() || premise["holds"].is_null() { EXIT_UNKNOWN } else { EXIT_OK };
    Ok(Output {
        value: json!({
            "discreteness": discrete,
            "cut_parity": premise,
            "inner_eulerian": ie,
        }),
        code,
        dot: None,
    })
}

fn parity(c: &Common) -> Result<Output, Failure> {
    let p = load(c)?;
    let mut out = Vec::new();
    let mut code = EXIT_OK;
    for e in p.ends() {
        let res = end_degree_parity(&p, &e, c.rmax)?;
        if res.parity == Parity::Unknown {
            code = EXIT_UNKNOWN;
        }
        out.push(res);
    }
    Ok(Output { value: json!({ "ends": out }), code, dot: None })
}

fn handshake(c: &Common) -> Result<Output, Failure> {
    let p = load(c)?;
    let report = handshake_check(&p, c.rmax)?;
    let code = match report.status {
        HandshakeStatus::Even | HandshakeStatus::PotentiallyInfinite => EXIT_OK,
        HandshakeStatus::Odd => EXIT_PREMISE,
        HandshakeStatus::Unknown => EXIT_UNKNOWN,
    };
    Ok(Output { value: serde_json::to_value(report).expect("serializable"), code, dot: None })
}

fn export(c: &Common) -> Result<Output, Failure> {
    let p = load(c)?;
    let dot = match &c.dot {
        Some(_) => {
            let r = c.radius.or(p.conclusive_radius().filter(|_| p.is_finite())).unwrap_or(6);
            Some(presentation_to_dot(&p, r)?)
        }
        None => None,
    };
    Ok(Output { value: presentation_to_value(&p), code: EXIT_OK, dot })
}

fn zoo_cmd(action: &ZooAction) -> Result<Output, Failure> {
    match action {
        ZooAction::List => {
            let list: Vec<Value> = zoo::ENTRIES
                .iter()
                .map(|e| json!({ "name": e.name, "params": e.params, "summary": e.summary, "infinite": e.infinite }))
                .collect();
            Ok(Output::ok(json!({ "entries": list })))
        }
        ZooAction::Show { name, params } => {
            let entry = zoo::entry(name).ok_or_else(|| Failure::usage(format!("unknown zoo entry `{name}`; try `zoo list`")))?;
            let p = zoo::build(name, params)?;
            Ok(Output::ok(json!({
                "name": entry.name,
                "params": entry.params,
                "summary": entry.summary,
                "infinite": entry.infinite,
                "ends": p.ends().into_iter().map(|e| e.0).collect::<Vec<_>>(),
                "default_terminals": zoo::default_terminals(name, params),
                "presentation": presentation_to_value(&p),
            })))
        }
    }
}
