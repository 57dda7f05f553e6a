import init, { abs_extreme_curves, classify_chain, density_gap_map, gallery_ids } from "./pkg/stochex_web.js";

const $ = (id) => document.getElementById(id);
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const EXACT_PRESETS = ["axes:4", "sci-not-re", "remark-asym", "draws-2:-2,-1,1,2", "draws-n:-3,-2,-1,1,2,3,3",
  "alt-signs:4", "iid-sym:pm1,3", "indep-sym-step", "indep-sym-ladder:4"];
const GAP_SIDE = 121;
const GAP_EXTENT = 4;

function call(f, errorBox) {
  try {
    const out = JSON.parse(f());
    errorBox.textContent = "";
    return out;
  } catch (e) {
    errorBox.textContent = String(e);
    return null;
  }
}

function table(el, header, rows) {
  el.innerHTML = "";
  const tr = el.insertRow();
  header.forEach((h) => { const th = document.createElement("th"); th.textContent = h; tr.appendChild(th); });
  rows.forEach((r) => { const row = el.insertRow(); r.forEach((c) => { row.insertCell().textContent = c; }); });
}

function drawCurves() {
  const stat = document.querySelector("input[name=stat]:checked").value;
  const res = call(() => abs_extreme_curves($("source").value, stat), $("law-error"));
  const ctx = $("curves").getContext("2d");
  const { width: w, height: h } = ctx.canvas;
  ctx.clearRect(0, 0, w, h);
  if (!res) return;
  $("curve-label").textContent = res.label ?? "none";

  const xs = res.curves.flatMap((c) => c.points.map((p) => p[0]));
  const xmax = Math.max(1, ...xs) * 1.15;
  const pad = 36;
  const px = (x) => pad + (x / xmax) * (w - 2 * pad);
  const py = (f) => h - pad - f * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, py(0)); ctx.lineTo(w - pad, py(0));
  ctx.moveTo(pad, py(0)); ctx.lineTo(pad, py(1));
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.fillText("1", pad - 14, py(1) + 4);
  ctx.fillText("0", pad - 14, py(0) + 4);

  res.curves.forEach((c, i) => {
    const color = PALETTE[i % PALETTE.length];
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    let f = 0;
    ctx.moveTo(px(0), py(0));
    for (const [x, fx] of c.points) {
      ctx.lineTo(px(x), py(f));
      ctx.lineTo(px(x), py(fx));
      f = fx;
    }
    ctx.lineTo(w - pad, py(f));
    ctx.stroke();
    ctx.fillStyle = color;
    ctx.fillText(`L=${c.prefix}`, w - pad - 40, pad + 14 * i);
  });
  ctx.fillStyle = "#555";
  res.curves[0].points.forEach(([x]) => ctx.fillText(String(x), px(x) - 3, h - pad + 14));

  table($("curve-steps"), ["L-1 vs L", "relation", "witness"],
    res.steps.map((s) => [`${s.l - 1} vs ${s.l}`, s.relation, s.witnesses.join(", ")]));
}

function classify() {
  const res = call(() => classify_chain($("source").value), $("law-error"));
  if (!res) { $("classification").innerHTML = ""; return; }
  const rows = [
    ["dimension", String(res.dim)],
    ["atoms", String(res.atoms)],
    ["|max| chain", res.label_max ?? "none"],
    ["|min| chain", res.label_min ?? "none"],
    ...res.symmetries.map((s) => [s.condition, (s.holds ? "holds" : "fails") + (s.pair ? ` at (${s.pair})` : "")]),
  ];
  table($("classification"), ["property", "value"], rows);
}

function drawGap() {
  const v = (id) => parseFloat($(id).value);
  document.querySelectorAll("label.slider").forEach((l) => { l.querySelector("output").textContent = l.querySelector("input").value; });
  const res = call(() => density_gap_map($("gen").value, v("mu"), v("nu"), v("sigma"), v("tau"), v("rho"), GAP_EXTENT, GAP_SIDE), $("gap-flags"));
  if (!res) return;
  const ctx = $("gap").getContext("2d");
  const img = ctx.createImageData(res.side, res.side);
  const scale = res.max_abs > 0 ? res.max_abs : 1;
  for (let j = 0; j < res.side; j++) {
    for (let i = 0; i < res.side; i++) {
      const t = res.values[j * res.side + i] / scale;
      // canvas rows go down, y goes up
      const k = 4 * ((res.side - 1 - j) * res.side + i);
      img.data[k] = t < 0 ? 255 : 255 * (1 - t);
      img.data[k + 1] = 255 * (1 - Math.abs(t));
      img.data[k + 2] = t > 0 ? 255 : 255 * (1 + t);
      img.data[k + 3] = 255;
    }
  }
  const tmp = new OffscreenCanvas(res.side, res.side);
  tmp.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(tmp, 0, 0, ctx.canvas.width, ctx.canvas.height);
  const { width: w, height: h } = ctx.canvas;
  ctx.strokeStyle = "#333";
  ctx.beginPath();
  ctx.moveTo(0, h); ctx.lineTo(w, 0);
  ctx.moveTo(0, 0); ctx.lineTo(w, h);
  ctx.stroke();
  const yes = (b) => (b ? "yes" : "no");
  $("gap-flags").textContent =
    `blue: f(x,y) > f(-y,-x), red: below. max |gap| = ${res.max_abs.toExponential(3)}. ` +
    `UR_E ${yes(res.ur_sub)}, LR_E ${yes(res.lr_sub)}, UR^E ${yes(res.ur_sup)}, LR^E ${yes(res.lr_sup)}`;
}

await init();
const presets = new Set(EXACT_PRESETS);
for (const { id } of JSON.parse(gallery_ids())) {
  if (!id.includes(":")) presets.add(id);
}
for (const id of presets) {
  const o = document.createElement("option");
  o.value = o.textContent = id;
  $("preset").appendChild(o);
}
$("load-preset").onclick = () => { $("source").value = $("preset").value; drawCurves(); classify(); };
$("draw-curves").onclick = drawCurves;
document.querySelectorAll("input[name=stat]").forEach((r) => { r.onchange = drawCurves; });
$("classify").onclick = classify;
["gen", "mu", "nu", "sigma", "tau", "rho"].forEach((id) => { $(id).oninput = drawGap; });
drawCurves();
classify();
drawGap();
