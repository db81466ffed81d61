// SPDX-License-Identifier: Apache-2.0

//! wasm-bindgen entry points. Each returns a JSON envelope
//! `{"exit_code", "result", "diagnostics"}` produced by the same code path as
//! the `tpack` binary.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Where the graph comes from: a zoo name, or inline JSON in either input format.
enum Source<'a> {
    Zoo { name: &'a str, params: &'a str },
    Inline(&'a str),
}

fn source<'a>(zoo: &'a str, params: &'a str, json_text: &'a str) -> Source<'a> {
    if json_text.trim().is_empty() {
        Source::Zoo { name: zoo, params }
    } else {
        Source::Inline(json_text)
    }
}

fn run(command: &str, src: Source<'_>, extra: &[(&str, String)]) -> String {
    let mut args: Vec<String> = vec!["tpack".into(), command.into()];
    match src {
        Source::Zoo { name, params } => {
            args.extend(["--zoo".into(), name.into()]);
            for p in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                args.extend(["--param".into(), p.into()]);
            }
        }
        Source::Inline(text) => args.extend(["--input-json".into(), text.into()]),
    }
    for (flag, value) in extra {
        if !value.trim().is_empty() {
            args.extend([(*flag).into(), value.trim().into()]);
        }
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = tpack::cli::run(args, &mut out, &mut err);
    let result: Value = serde_json::from_slice(&out).unwrap_or(Value::Null);
    let envelope = json!({
        "exit_code": code,
        "result": result,
        "diagnostics": String::from_utf8_lossy(&err),
    });
    serde_json::to_string_pretty(&envelope).expect("serializable")
}

/// Maximum edge-disjoint T-path packing on a finite graph.
#[wasm_bindgen]
pub fn pack(zoo: &str, params: &str, json_text: &str, terminals: &str) -> String {
    run("pack", source(zoo, params, json_text), &[("--terminals", terminals.into())])
}

/// T-arc system on a periodic graph, with arcs materialized to `depth`.
#[wasm_bindgen]
pub fn arcs(zoo: &str, params: &str, json_text: &str, terminals: &str, radius: u32, depth: u32) -> String {
    run(
        "arcs",
        source(zoo, params, json_text),
        &[("--terminals", terminals.into()), ("--radius", radius.to_string()), ("--depth", depth.to_string())],
    )
}

/// Connectivity λ and splitting estimate μ for every terminal.
#[wasm_bindgen]
pub fn mu(zoo: &str, params: &str, json_text: &str, terminals: &str, radius: u32) -> String {
    run("mu", source(zoo, params, json_text), &[("--terminals", terminals.into()), ("--radius", radius.to_string())])
}

/// Zoo listing for the page's picker.
#[wasm_bindgen]
pub fn zoo_list() -> String {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    tpack::cli::run(["tpack", "zoo", "list"], &mut out, &mut err);
    String::from_utf8_lossy(&out).into_owned()
}
