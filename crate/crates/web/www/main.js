import init, { filtrationTable, nicholsDims, weightStats } from "./pkg/qshuffle_web.js";

const S3 = '{"perm_generators":[[2,1,3],[1,3,2]]}';
const presets = {
  s3m: `{"type":"group_class","group":${S3},"class_reps":["(12)"],"cocycle":-1}`,
  s3p: `{"type":"group_class","group":${S3},"class_reps":["(12)"],"cocycle":1}`,
  z3: '{"type":"diagonal","q":[[{"zeta":1}]],"field":{"field":"cyclotomic","order":3}}',
  t3: '{"type":"trivial","dim":3}',
};

const $ = (id) => document.getElementById(id);
const out = $("out");

function tsvTable(tsv) {
  const rows = tsv.trimEnd().split("\n").map((r) => r.split("\t"));
  const t = document.createElement("table");
  rows.forEach((cells, i) => {
    const tr = t.insertRow();
    cells.forEach((c, j) => {
      const cell = document.createElement(i === 0 || j === 0 ? "th" : "td");
      cell.textContent = c;
      tr.appendChild(cell);
    });
  });
  return t;
}

function run(f) {
  $("error").textContent = "";
  out.replaceChildren();
  try {
    f();
  } catch (e) {
    $("error").textContent = e.message ?? String(e);
  }
}

function checkFailures(check) {
  return check.checks.filter((c) => !c.pass).map((c) => `${c.name}: ${c.detail ?? "failed"}`).join("\n");
}

await init();

$("preset").onchange = () => { $("spec").value = presets[$("preset").value]; };
$("spec").value = presets.s3m;

$("table").onclick = () => run(() => {
  const r = JSON.parse(filtrationTable($("spec").value, $("filtration").value, Number($("nmax").value)));
  if (!r.check.pass) throw new Error(checkFailures(r.check));
  out.appendChild(tsvTable(r.tsv));
});

$("nichols").onclick = () => run(() => {
  const p = JSON.parse(nicholsDims($("spec").value, Number($("nmax").value)));
  const tsv = "n\tdim\n" + p.dims.map((d, n) => `${n}\t${d}`).join("\n");
  out.appendChild(tsvTable(tsv));
  const note = document.createElement("p");
  note.textContent = p.max_degree === null
    ? `nonzero through degree ${p.dims.length - 1}`
    : `top degree ${p.max_degree}, total dimension ${p.total}`;
  out.appendChild(note);
});

$("stats").onclick = () => run(() => {
  const s = JSON.parse(weightStats($("spec").value, Number($("nmax").value)));
  const tsv = "n\ta(n)\ta(n)/n\tdecimal\n" +
    s.rows.map((r) => `${r.n}\t${r.a}\t${r.a_over_n}\t${r.decimal.toFixed(6)}`).join("\n");
  out.appendChild(tsvTable(tsv));
  const note = document.createElement("pre");
  note.textContent = `monotone: ${s.monotone_ok}\nsuperadditive: ${s.superadditive_ok}\nc estimate: ${s.c_estimate}`;
  out.appendChild(note);
});
