// Built with: cargo build -p tpack-demo --target wasm32-unknown-unknown --release && wasm-bindgen --target web --out-dir crates/demo/www/pkg target/wasm32-unknown-unknown/release/tpack_demo.wasm
import init, { pack, arcs, mu, zoo_list } from "./pkg/tpack_demo.js";

const $ = (id) => document.getElementById(id);

function show(text) {
  const env = JSON.parse(text);
  const status = $("status");
  status.textContent = `exit ${env.exit_code}` + (env.diagnostics ? `: ${env.diagnostics.trim()}` : "");
  status.className = env.exit_code === 0 ? "" : "bad";
  $("output").textContent = JSON.stringify(env.result, null, 2);
}

function inputs() {
  return [$("zoo").value, $("params").value, $("json").value, $("terminals").value];
}

await init();

for (const entry of JSON.parse(zoo_list()).entries) {
  const opt = document.createElement("option");
  opt.value = opt.textContent = entry.name;
  $("zoo").append(opt);
}

$("pack").onclick = () => show(pack(...inputs()));
$("arcs").onclick = () => show(arcs(...inputs(), +$("radius").value, +$("depth").value));
$("mu").onclick = () => show(mu(...inputs(), Math.min(+$("radius").value, 12)));
