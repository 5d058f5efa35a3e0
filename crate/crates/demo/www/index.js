import init, { generate, layer_snapshots, scaling_sweep, solve_instance } from "./pkg/matroid_demo.js";

const FAMILIES = ["bipartite-matching", "partition-pair", "graphic-vs-partition", "gf2-pair", "uniform-pair"];
const $ = (id) => document.getElementById(id);

function call(fn, ...args) {
  const out = JSON.parse(fn(...args));
  if (out.error) throw new Error(out.error);
  return out;
}

function showError(target, err) {
  target.innerHTML = `<p class="error">${err.message}</p>`;
}

function table(rows, cols) {
  const head = cols.map(([label]) => `<th>${label}</th>`).join("");
  const body = rows.map((r) => `<tr>${cols.map(([, f]) => `<td>${f(r)}</td>`).join("")}</tr>`).join("");
  return `<table><tr>${head}</tr>${body}</table>`;
}

function clear(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.font = "12px system-ui";
  return ctx;
}

function bars(canvas, values, labels, color) {
  const ctx = clear(canvas);
  const max = Math.max(1, ...values);
  const w = canvas.width / Math.max(1, values.length);
  values.forEach((v, i) => {
    const h = (v / max) * (canvas.height - 40);
    ctx.fillStyle = color[i] ?? color;
    ctx.fillRect(i * w + 4, canvas.height - 20 - h, w - 8, h);
    ctx.fillStyle = "#333";
    ctx.fillText(labels[i], i * w + 6, canvas.height - 6);
    ctx.fillText(String(v), i * w + 6, canvas.height - 24 - h);
  });
}

const STAGE_COLORS = { greedy: "#999", approx: "#27c", "distance-threshold": "#8a2", "long-path": "#c63", cunningham: "#e80" };

function distanceText(d) {
  if (d.value === null) return "∞";
  return d.exact ? String(d.value) : `≥${d.value}`;
}

function solve() {
  const out = $("solve-summary");
  try {
    const res = call(solve_instance, $("text").value, $("solver").value, Number($("solve-eps").value));
    out.innerHTML = `size <b>${res.size}</b>, queries <b>${res.queries_total}</b> (m1 ${res.queries_m1}, m2 ${res.queries_m2}), ` +
      `verified ${res.verified}, ${res.phases.length} trace entries`;
    bars($("solve-chart"), res.phases.map((p) => p.queries), res.phases.map((p) => `d ${distanceText(p.distance)}`),
      res.phases.map((p) => STAGE_COLORS[p.stage] ?? "#555"));
    $("solve-table").innerHTML = table(res.phases, [
      ["stage", (p) => p.stage], ["distance", (p) => distanceText(p.distance)], ["|S| before", (p) => p.size_before],
      ["|S| after", (p) => p.size_after], ["p", (p) => p.p ?? ""], ["passes", (p) => p.passes],
      ["path steps", (p) => p.paths], ["queries", (p) => p.queries],
    ]);
  } catch (e) {
    showError(out, e);
  }
}

let snaps = [];

function drawSnapshot() {
  const s = snaps[Number($("snap-step").value)];
  if (!s) return;
  $("snap-label").textContent = `phase ${s.phase}, ${s.step}, distance ${s.distance}, p = ${s.p}, queries so far ${s.queries}`;
  const canvas = $("snap-chart");
  const ctx = clear(canvas);
  const max = Math.max(1, ...s.layers.map((l) => l.size));
  const w = canvas.width / s.layers.length;
  s.layers.forEach((l, i) => {
    let y = canvas.height - 20;
    for (const [count, color] of [[l.selected, "#2a7"], [l.removed, "#c44"], [l.fresh, "#bbb"]]) {
      const h = (count / max) * (canvas.height - 40);
      ctx.fillStyle = color;
      ctx.fillRect(i * w + 4, y - h, w - 8, h);
      y -= h;
    }
    ctx.fillStyle = "#333";
    ctx.fillText(`D${i + 1} (${l.selected}/${l.size})`, i * w + 6, canvas.height - 6);
  });
}

function runSnapshots() {
  try {
    const res = call(layer_snapshots, $("text").value, Number($("snap-eps").value));
    snaps = res.snapshots;
    $("snap-step").max = Math.max(0, snaps.length - 1);
    $("snap-step").value = 0;
    drawSnapshot();
    if (res.truncated) $("snap-label").textContent += " (snapshots truncated)";
  } catch (e) {
    $("snap-label").textContent = e.message;
  }
}

function lines(canvas, xs, series) {
  const ctx = clear(canvas);
  const all = series.flatMap((s) => s.values);
  const max = Math.max(1e-9, ...all) * 1.1;
  const pad = 40;
  const x = (i) => pad + (i / Math.max(1, xs.length - 1)) * (canvas.width - 2 * pad);
  const y = (v) => canvas.height - pad - (v / max) * (canvas.height - 2 * pad);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.fillStyle = s.color;
    ctx.beginPath();
    s.values.forEach((v, i) => (i ? ctx.lineTo(x(i), y(v)) : ctx.moveTo(x(i), y(v))));
    ctx.stroke();
    s.values.forEach((v, i) => ctx.fillText(v.toFixed(2), x(i) + 4, y(v) - 4));
  }
  ctx.fillStyle = "#333";
  xs.forEach((r, i) => ctx.fillText(`r=${r}`, x(i) - 10, canvas.height - 12));
}

function sweep() {
  const out = $("sweep-table");
  try {
    const res = call(scaling_sweep, $("sweep-family").value, $("sweep-ranks").value, Number($("sweep-eps").value), 0n);
    lines($("sweep-chart"), res.rows.map((r) => r.r), [
      { color: "#27c", values: res.rows.map((r) => r.approx_normalized) },
      { color: "#e80", values: res.rows.map((r) => r.cunningham_normalized) },
    ]);
    out.innerHTML = table(res.rows, [
      ["r", (r) => r.r], ["n", (r) => r.n], ["optimum", (r) => r.optimum], ["approx size", (r) => r.approx_size],
      ["approx queries", (r) => r.approx_queries], ["baseline queries", (r) => r.cunningham_queries],
    ]);
  } catch (e) {
    showError(out, e);
  }
}

function fill() {
  const text = generate($("family").value, Number($("gen-r").value), BigInt($("gen-seed").value || 0));
  if (text.startsWith("{")) {
    $("status").textContent = JSON.parse(text).error;
    return;
  }
  $("text").value = text;
}

async function main() {
  await init();
  for (const id of ["family", "sweep-family"]) {
    $(id).innerHTML = FAMILIES.map((f) => `<option>${f}</option>`).join("");
  }
  $("gen").onclick = fill;
  $("solve").onclick = solve;
  $("snap").onclick = runSnapshots;
  $("snap-step").oninput = drawSnapshot;
  $("sweep").onclick = sweep;
  fill();
  $("status").textContent = "Ready. Generate an instance or paste one in the stanza format.";
}

main().catch((e) => {
  $("status").textContent = `Failed to load: ${e.message}. Build with wasm-pack first (see README).`;
});
