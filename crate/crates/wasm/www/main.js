// Demo page wiring. Build the module first:
//   wasm-pack build crates/wasm --target web --out-dir www/pkg
// then serve crates/wasm/www/ from any static file server.

import init, {
  catalog_graphs,
  build_summary,
  normal_order,
  verify_instance,
  gm_homology,
} from "./pkg/tstar_wasm.js";

const $ = (id) => document.getElementById(id);
const out = $("output");

function esc(s) {
  return String(s).replace(/[&<>]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;" }[c]));
}

function table(title, rows, headers) {
  let html = `<h3>${esc(title)}</h3><table><tr>`;
  for (const h of headers) html += `<th>${esc(h)}</th>`;
  html += "</tr>";
  for (const r of rows) {
    html += "<tr>" + r.map((c, i) => `<td class="${i === 0 ? "k" : ""}">${c}</td>`).join("") + "</tr>";
  }
  return html + "</table>";
}

function drawGraph(g) {
  const W = 300, H = 150, R = 52;
  const cx = W / 2, cy = H / 2;
  const pos = {};
  g.vertices.forEach((v, i) => {
    const a = (2 * Math.PI * i) / Math.max(g.vertices.length, 1) - Math.PI / 2;
    pos[v] = [cx + R * Math.cos(a), cy + R * Math.sin(a)];
  });
  let svg = `<svg viewBox="0 0 ${W} ${H}">`;
  svg += `<defs><marker id="arr" markerWidth="8" markerHeight="8" refX="7" refY="3" orient="auto">
          <path d="M0,0 L7,3 L0,6 z" fill="#64d7b4"/></marker></defs>`;
  const seen = {};
  for (const e of g.edges) {
    const [x1, y1] = pos[e.src], [x2, y2] = pos[e.tgt];
    const key = e.src + "|" + e.tgt;
    seen[key] = (seen[key] || 0) + 1;
    const bend = (seen[key] - 1) * 18;
    if (e.src === e.tgt) {
      svg += `<path d="M${x1 - 6},${y1 - 8} C ${x1 - 34 - bend},${y1 - 40 - bend} ${x1 + 26 + bend},${y1 - 42 - bend} ${x1 + 7},${y1 - 9}"
              fill="none" stroke="#64d7b4" stroke-width="1.4" marker-end="url(#arr)"/>`;
    } else {
      const mx = (x1 + x2) / 2 + bend, my = (y1 + y2) / 2 - bend;
      svg += `<path d="M${x1},${y1} Q ${mx},${my} ${x2},${y2}" fill="none" stroke="#64d7b4"
              stroke-width="1.4" marker-end="url(#arr)"/>`;
    }
  }
  for (const v of g.vertices) {
    const [x, y] = pos[v];
    svg += `<circle cx="${x}" cy="${y}" r="4.5" fill="#e6ebf4"/>
            <text x="${x + 8}" y="${y + 4}" fill="#8fa1bd" font-size="11">${esc(v)}</text>`;
  }
  $("graphbox").innerHTML = svg + "</svg>";
}

let graphs = [];
function currentGraph() {
  return JSON.stringify(graphs[$("graph").selectedIndex].graph);
}

function showError(doc) {
  if (doc && doc.error) {
    out.innerHTML = `<h2>Output</h2><p class="fail">${esc(doc.error)}</p>`;
    return true;
  }
  return false;
}

function renderSummary(doc) {
  let html = `<h2>Output — ${esc(doc.group)} on ${doc.graph.vertices.length} vertices, ${doc.graph.edges.length} edges</h2>`;
  for (const lvl of doc.levels) {
    html += `<h3>level ${lvl.level}: ${lvl.generators.length} generators</h3>`;
    html += table(
      `generators`,
      lvl.generators.map((g) => [esc(g.name), g.cochain, g.chain, g.cochain - g.chain]),
      ["name", "cochain", "chain", "total"]
    );
    const dt = (t, label) => {
      const rows = Object.entries(t).map(([k, v]) => [esc(label + "(" + k + ")"), esc(v.text)]);
      return rows.length ? table(label + " (nonzero entries)", rows, [label, "value"]) : "";
    };
    html += dt(lvl.del, "∂");
    html += dt(lvl.delta, "δ");
    const prows = Object.entries(lvl.poisson).map(([k, v]) => [esc(k), esc(v.text)]);
    if (prows.length) html += table("Poisson bracket (nonzero generator pairs)", prows, ["pair", "value"]);
  }
  out.innerHTML = html;
}

async function main() {
  await init();
  graphs = JSON.parse(catalog_graphs());
  $("graph").innerHTML = graphs
    .map((g, i) => `<option value="${i}" ${g.name === "edge" ? "selected" : ""}>${esc(g.name)}</option>`)
    .join("");
  drawGraph(graphs[$("graph").selectedIndex].graph);
  $("graph").onchange = () => drawGraph(graphs[$("graph").selectedIndex].graph);
  $("level").oninput = () => ($("levelv").textContent = $("level").value);

  $("build").onclick = () => {
    out.innerHTML = "<h2>Output</h2><p class='hint'>building…</p>";
    setTimeout(() => {
      const doc = JSON.parse(build_summary(currentGraph(), $("group").value, +$("level").value));
      if (!showError(doc)) renderSummary(doc);
    }, 20);
  };

  $("verify").onclick = () => {
    out.innerHTML = "<h2>Output</h2><p class='hint'>running exact checks…</p>";
    setTimeout(() => {
      const doc = JSON.parse(verify_instance(currentGraph(), $("group").value, +$("level").value));
      if (showError(doc)) return;
      out.innerHTML =
        "<h2>Output — verification</h2>" +
        table(
          "suites (exact identities on generators: square-zero, cosimplicial, Jacobi, confluence, correspondence)",
          doc.map((r) => [
            esc(r.suite),
            `<span class="${r.status === "pass" ? "pass" : "fail"}">${r.status}</span>`,
            esc(r.witness || ""),
          ]),
          ["suite", "status", "witness"]
        );
    }, 20);
  };

  $("order").onclick = () => {
    const doc = JSON.parse(
      normal_order(currentGraph(), $("group").value, +$("level").value, $("word").value)
    );
    if (showError(doc)) return;
    out.innerHTML =
      "<h2>Output — normal ordering</h2>" +
      table(
        "word reduced to ghost · coordinate · momentum · antighost order",
        [
          ["input", esc(doc.word.join(" · "))],
          ["normal form", esc(doc.normal_form.text)],
          ["classical limit (ħ → 0, hats off)", esc(doc.classical_limit)],
        ],
        ["", "value"]
      );
  };

  $("homology").onclick = () => {
    const doc = JSON.parse(gm_homology($("weights").value));
    if (showError(doc)) return;
    out.innerHTML =
      "<h2>Output — endomorphism homology over ℚ[ħ]</h2>" +
      table(
        "weight objects over the point with rank-1 torus gauge group",
        doc.map((r) => [
          esc(r.weight),
          `<span class="${r.valid ? "pass" : "fail"}">${r.valid ? "valid" : "invalid"}</span>`,
          r.homology
            .map((h) =>
              h.free_rank || h.torsion.length
                ? `H<sup>${h.degree}</sup> = ` +
                  [
                    h.free_rank ? `ℚ[ħ]<sup>${h.free_rank}</sup>` : "",
                    ...h.torsion.map((t) => `ℚ[ħ]/(${esc(t)})`),
                  ]
                    .filter(Boolean)
                    .join(" ⊕ ")
                : ""
            )
            .filter(Boolean)
            .join(", &nbsp;") || "0",
        ]),
        ["weight", "triple", "homology"]
      );
  };
}

main();
