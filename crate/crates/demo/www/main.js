import init, { predict_json, sweep_json, theta_curve_json } from "./pkg/hk_demo.js";

const $ = (id) => document.getElementById(id);

function fail(el, err) {
  el.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err);
  el.appendChild(p);
}

function predict() {
  const out = $("p-out");
  try {
    const p = JSON.parse(predict_json($("p-variety").value, $("p-bundle").value, $("p-region").value));
    out.className = "";
    out.textContent =
      `N(B) ~ ${p.summary}\n` +
      `C = ${p.constant.toFixed(8)}, a = ${p.exponent}, log power = ${p.log_power}` +
      (p.case ? `\ncase: ${p.case}` : "");
  } catch (e) {
    out.className = "error";
    out.textContent = String(e);
  }
}

function sweep() {
  const out = $("s-out");
  let rows;
  try {
    rows = JSON.parse(sweep_json($("s-variety").value, $("s-bundle").value, $("s-region").value, $("s-bounds").value));
  } catch (e) {
    fail(out, e);
    return;
  }
  const table = document.createElement("table");
  table.innerHTML = "<tr><th>B</th><th>count</th><th>predicted</th><th>ratio</th></tr>";
  for (const r of rows) {
    const tr = document.createElement("tr");
    const cells = [r.bound, r.count, r.predicted == null ? "" : r.predicted.toFixed(2), r.ratio == null ? "" : r.ratio.toFixed(5)];
    for (const c of cells) {
      const td = document.createElement("td");
      td.textContent = c;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  out.innerHTML = "";
  out.appendChild(table);
}

function plot() {
  const canvas = $("t-plot");
  const ctx = canvas.getContext("2d");
  let pts;
  try {
    pts = JSON.parse(theta_curve_json(Number($("t-from").value), Number($("t-to").value), 400));
    $("t-out").textContent = "";
  } catch (e) {
    fail($("t-out"), e);
    return;
  }
  const xs = pts.map((p) => p.x);
  const ys = pts.map((p) => p.h0);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(0, ...ys), Math.max(...ys, x1)];
  const sx = (x) => ((x - x0) / (x1 - x0)) * (canvas.width - 20) + 10;
  const sy = (y) => canvas.height - 10 - ((y - y0) / (y1 - y0 || 1)) * (canvas.height - 20);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const line = (f, colour) => {
    ctx.strokeStyle = colour;
    ctx.beginPath();
    pts.forEach((p, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, sx(p.x), sy(f(p))));
    ctx.stroke();
  };
  line((p) => Math.max(p.x, 0), "#999");
  line((p) => p.h0, "#1f5fbf");
}

await init();
$("p-run").addEventListener("click", predict);
$("s-run").addEventListener("click", sweep);
$("t-run").addEventListener("click", plot);
predict();
sweep();
plot();
