import init, {
  fixed_point_curve,
  fixed_point_optimum,
  sphere_curve,
  estimate_json,
} from "./pkg/obtuse_web.js";

const $ = (id) => document.getElementById(id);

function pairs(flat, width) {
  const out = [];
  for (let i = 0; i < flat.length; i += width) out.push(Array.from(flat.slice(i, i + width)));
  return out;
}

// series: [{ pts: [[x, y]], dash, color }]
function plot(canvas, series, { logY = false, xLabel = "", yLabel = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 44;
  ctx.clearRect(0, 0, w, h);
  const ty = (y) => (logY ? Math.log10(y) : y);
  const all = series.flatMap((s) => s.pts).filter(([, y]) => !logY || y > 0);
  const xs = all.map(([x]) => x), ys = all.map(([, y]) => ty(y));
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((ty(y) - y0) / (y1 - y0 || 1)) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 16);
  ctx.fillText(x1.toPrecision(3), w - pad - 30, h - pad + 16);
  const fmtY = (v) => (logY ? "1e" + v.toFixed(1) : v.toPrecision(3));
  ctx.fillText(fmtY(y1), 2, pad + 4);
  ctx.fillText(fmtY(y0), 2, h - pad);
  ctx.fillText(xLabel, w / 2, h - 8);
  ctx.fillText(yLabel, pad, pad - 10);

  for (const s of series) {
    ctx.beginPath();
    ctx.setLineDash(s.dash ? [6, 4] : []);
    ctx.strokeStyle = s.color || "#1f5fa8";
    ctx.lineWidth = 2;
    let first = true;
    for (const [x, y] of s.pts) {
      if (logY && y <= 0) continue;
      if (first) ctx.moveTo(sx(x), sy(y));
      else ctx.lineTo(sx(x), sy(y));
      first = false;
    }
    ctx.stroke();
    if (s.marker) {
      const [mx, my] = s.marker;
      ctx.fillStyle = "#c0392b";
      ctx.beginPath();
      ctx.arc(sx(mx), sy(my), 4, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
  ctx.setLineDash([]);
}

function guard(fn, out) {
  return () => {
    try {
      fn();
    } catch (e) {
      out.textContent = "error: " + (e.message || e);
    }
  };
}

function runFixedPoint() {
  const steps = Number($("fp-steps").value);
  const pts = pairs(fixed_point_curve(steps), 2);
  const [p, acute, obtuse] = fixed_point_optimum();
  $("fp-out").textContent =
    `max at p = ${p.toFixed(12)}: acute ${acute.toFixed(12)}, obtuse ${obtuse.toFixed(12)}`;
  plot($("fp-plot"), [{ pts, marker: [p, acute] }], { xLabel: "p", yLabel: "acute probability" });
}

function runSphere() {
  const rows = pairs(sphere_curve(Number($("sp-dmax").value)), 3);
  plot(
    $("sp-plot"),
    [
      { pts: rows.map(([d, q]) => [d, q]) },
      { pts: rows.map(([d, , a]) => [d, a]), dash: true, color: "#888" },
    ],
    { logY: true, xLabel: "dimension", yLabel: "obtuse probability" },
  );
}

function runMc() {
  const t0 = performance.now();
  const est = JSON.parse(
    estimate_json($("mc-spec").value, Number($("mc-samples").value), Number($("mc-seed").value)),
  );
  const ms = (performance.now() - t0).toFixed(0);
  const c = est.counts;
  $("mc-out").textContent =
    `obtuse ${est.p_hat.toFixed(5)}  95% [${est.ci95[0].toFixed(5)}, ${est.ci95[1].toFixed(5)}]\n` +
    `acute ${c.acute}  right ${c.right}  obtuse ${c.obtuse}  degenerate ${c.degenerate}  (${ms} ms)`;
}

await init();
$("status").textContent = "";
$("fp-run").onclick = guard(runFixedPoint, $("fp-out"));
$("sp-run").onclick = guard(runSphere, $("status"));
$("mc-run").onclick = guard(runMc, $("mc-out"));
runFixedPoint();
runSphere();
