// Expects the wasm-bindgen `--target web` output in ./pkg (see the README).
import init, { sequence, paths, evenMotzkinTable } from "./pkg/pathweight_wasm.js";

const $ = (id) => document.getElementById(id);

function fields(form) {
  return Object.fromEntries(new FormData(form).entries());
}

function showError(el, e) {
  el.classList.add("err");
  el.textContent = e instanceof Error ? e.message : String(e);
}

function pathSvg(points) {
  const scale = 14;
  const maxX = Math.max(1, ...points.map(([x]) => x));
  const maxY = Math.max(1, ...points.map(([, y]) => y));
  const w = maxX * scale + 8;
  const h = maxY * scale + 8;
  const ns = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(ns, "svg");
  svg.setAttribute("width", w);
  svg.setAttribute("height", h);
  const axis = document.createElementNS(ns, "line");
  axis.setAttribute("x1", 4);
  axis.setAttribute("x2", w - 4);
  axis.setAttribute("y1", h - 4);
  axis.setAttribute("y2", h - 4);
  axis.setAttribute("stroke", "#bbb");
  svg.appendChild(axis);
  const line = document.createElementNS(ns, "polyline");
  line.setAttribute("points", points.map(([x, y]) => `${4 + x * scale},${h - 4 - y * scale}`).join(" "));
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", "#2a5db0");
  line.setAttribute("stroke-width", 2);
  svg.appendChild(line);
  return svg;
}

function onSequence(event) {
  event.preventDefault();
  const f = fields(event.target);
  const out = $("seq-out");
  out.classList.remove("err");
  $("seq-note").textContent = "";
  try {
    const r = JSON.parse(sequence(f.family, Number(f.k), f.weight, f.mode, f.engine, Number(f.n)));
    $("seq-note").textContent = `engine: ${r.engine}` + (r.note ? ` (${r.note})` : "");
    out.textContent = r.terms.join(", ");
  } catch (e) {
    showError(out, e);
  }
}

function onPaths(event) {
  event.preventDefault();
  const f = fields(event.target);
  const summary = $("paths-summary");
  const list = $("paths-out");
  summary.classList.remove("err");
  list.replaceChildren();
  try {
    const r = JSON.parse(paths(f.family, Number(f.k), Number(f.n), f.weight, f.mode, Number(f.limit)));
    summary.textContent = `width ${r.width}: ${r.total} paths, weighted sum ${r.sum}` +
      (r.paths.length < r.total ? ` (showing ${r.paths.length})` : "");
    for (const p of r.paths) {
      const fig = document.createElement("figure");
      fig.appendChild(pathSvg(p.points));
      const cap = document.createElement("figcaption");
      cap.textContent = `${p.word} ${p.ascents} w=${p.weight}`;
      fig.appendChild(cap);
      list.appendChild(fig);
    }
  } catch (e) {
    showError(summary, e);
  }
}

function onTable(event) {
  event.preventDefault();
  const n = Number(fields(event.target).n);
  const out = $("table-out");
  out.classList.remove("err");
  try {
    const rows = JSON.parse(evenMotzkinTable(n));
    const table = document.createElement("table");
    const head = table.insertRow();
    for (const label of ["k", ...Array.from({ length: n + 1 }, (_, i) => `n=${i}`)]) {
      const th = document.createElement("th");
      th.textContent = label;
      head.appendChild(th);
    }
    for (const row of rows) {
      const tr = table.insertRow();
      for (const v of [row.k, ...row.terms]) tr.insertCell().textContent = v;
    }
    out.replaceChildren(table);
  } catch (e) {
    showError(out, e);
  }
}

await init();
$("seq-form").addEventListener("submit", onSequence);
$("paths-form").addEventListener("submit", onPaths);
$("table-form").addEventListener("submit", onTable);
