// Built with: wasm-pack build crates/demo --target web --out-dir www/pkg
import init, { toy_info, compare, generate, sweep } from "./pkg/spellvar_demo.js";

const $ = (id) => document.getElementById(id);
const fmt = (x) => (typeof x === "number" ? x.toFixed(3) : String(x));

function table(headers, rows, rowClass = () => "") {
  const head = "<tr>" + headers.map((h) => `<th>${h}</th>`).join("") + "</tr>";
  const body = rows
    .map((r, i) => `<tr class="${rowClass(i)}">` + r.map((c) => `<td>${fmt(c)}</td>`).join("") + "</tr>")
    .join("");
  return `<table>${head}${body}</table>`;
}

function call(fn, out, render) {
  const result = JSON.parse(fn());
  if (result.error) {
    out.innerHTML = `<p class="error">${result.error}</p>`;
  } else {
    out.innerHTML = render(result);
  }
}

function runCompare() {
  const a = $("cmp-a").value.trim();
  const b = $("cmp-b").value.trim();
  call(() => compare(a, b, $("profile").value), $("cmp-out"), (r) =>
    table(
      ["measure", "value"],
      [
        ["edit distance (substitution 1)", r.distance_unit],
        ["edit distance (substitution 2)", r.distance_ratio],
        ["ratio", r.ratio],
        ["ratio, max-length", r.ratio_max],
        ["weighted ratio", r.weighted],
      ],
    ) +
      `<p>Windows of ${r.window} characters:</p>` +
      table(
        ["window", "bucket", "weight", "ratio"],
        r.windows.map((w) => [`${w.left} / ${w.right}`, w.bucket, w.weight, w.ratio]),
      ),
  );
}

function runGenerate() {
  const seed = $("gen-seed").value.trim();
  const lt = parseFloat($("gen-lt").value);
  const ssl = parseInt($("gen-ssl").value, 10);
  call(() => generate(seed, lt, ssl, $("gen-weighted").checked, $("profile").value), $("gen-out"), (r) => {
    if (r.variants.length === 0) return "<p>No variants at this threshold.</p>";
    const rows = r.variants.map((v) => [v.token, v.ratio, v.cosine, v.gold === null ? "" : v.gold ? "yes" : "no"]);
    const trace = r.trace
      .map((e) => `${e.term} -> ${e.discovered.length ? e.discovered.join(", ") : "(nothing new)"}`)
      .join("\n");
    return (
      table(["variant", "ratio", "cosine", "in gold"], rows, (i) => (r.variants[i].gold ? "gold" : "")) +
      `<p>Expansion order:</p><pre>${trace}</pre>`
    );
  });
}

function runSweep() {
  const ssl = parseInt($("sw-ssl").value, 10);
  call(() => sweep(ssl, $("sw-weighted").checked, $("profile").value), $("sw-out"), (r) =>
    table(
      ["lt", "tp", "fp", "fn", "precision", "recall", "F1", "F1/4"],
      r.rows.map((row) => [
        row.lt.toFixed(2), row.tp, row.fp, row.fn, row.precision, row.recall,
        row.f_scores[0].value, row.f_scores[1].value,
      ]),
    ),
  );
}

await init();
const info = JSON.parse(toy_info());
$("info").textContent =
  `Toy model: ${info.vocab_size} tokens, ${info.dim} dimensions. Gold keywords: ${info.keywords.join(", ")}.`;
$("profile").value = info.profile;
$("keywords").innerHTML = info.keywords.map((k) => `<option value="${k}">`).join("");

$("cmp-run").addEventListener("click", runCompare);
$("gen-run").addEventListener("click", runGenerate);
$("sw-run").addEventListener("click", runSweep);
for (const id of ["cmp-a", "cmp-b", "gen-seed"]) {
  $(id).addEventListener("keydown", (e) => {
    if (e.key === "Enter") (id === "gen-seed" ? runGenerate : runCompare)();
  });
}
runCompare();
runGenerate();
