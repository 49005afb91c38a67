#!/usr/bin/env node
// UMAP over the embedding interchange format.
//
//   node umap_tool.js --in <emb> --out <emb> --dim <d> [--seed <s>]
//                     [--init <emb>] [--n-neighbors <k>] [--min-dist <x>]
//
// With --init, optimization starts from the given coordinates (matched by
// node label, rescaled so the largest coordinate is 10) instead of the
// library's random layout.

"use strict";

const fs = require("fs");

function fail(message) {
  process.stderr.write(`error: ${message}\n`);
  process.exit(2);
}

function parseFlags(argv) {
  const flags = new Map();
  for (let i = 0; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || argv[i + 1] === undefined) {
      fail(`malformed flag pair near '${argv[i]}'`);
    }
    flags.set(argv[i].slice(2), argv[i + 1]);
  }
  return flags;
}

function readEmbedding(path) {
  const lines = fs.readFileSync(path, "utf-8").split("\n");
  const header = (lines[0] || "").trim().split(/\s+/);
  if (header.length !== 4 || header[0] !== "COVE-EMB") {
    fail(`${path}: expected 'COVE-EMB <n> <d> <kind>' header`);
  }
  const n = Number(header[1]);
  const d = Number(header[2]);
  const labels = [];
  const values = [];
  for (let i = 0; i < n; i++) {
    const line = lines[i + 1];
    if (line === undefined || line.trim() === "") {
      fail(`${path}: expected ${n} rows, ended at line ${i + 2}`);
    }
    const tokens = line.trim().split(/\s+/);
    if (tokens.length !== d + 1) {
      fail(`${path}: line ${i + 2} has ${tokens.length} tokens, expected ${d + 1}`);
    }
    labels.push(tokens[0]);
    const row = tokens.slice(1).map(Number);
    if (row.some(Number.isNaN)) fail(`${path}: non-numeric value on line ${i + 2}`);
    values.push(row);
  }
  return { labels, values, kind: header[3] };
}

function formatG17(x) {
  if (Number.isInteger(x) && Math.abs(x) < 1e17) return String(x);
  let s = x.toPrecision(17);
  if (s.includes(".") && !s.includes("e") && !s.includes("E")) {
    s = s.replace(/0+$/, "").replace(/\.$/, "");
  }
  return s;
}

function writeEmbedding(path, emb) {
  const d = emb.values[0] ? emb.values[0].length : 0;
  const out = [`COVE-EMB ${emb.labels.length} ${d} euclidean`];
  for (let i = 0; i < emb.labels.length; i++) {
    out.push(`${emb.labels[i]} ${emb.values[i].map(formatG17).join(" ")}`);
  }
  fs.writeFileSync(path, out.join("\n") + "\n");
}

// deterministic PRNG so a fixed seed reproduces the embedding exactly
function mulberry32(seed) {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function alignedInit(initFile, labels, dim) {
  const init = readEmbedding(initFile);
  const width = init.values[0] ? init.values[0].length : 0;
  if (width !== dim) {
    fail(`init file has dimension ${width}, expected ${dim}`);
  }
  const byLabel = new Map(init.labels.map((lab, i) => [lab, i]));
  const rows = [];
  for (const lab of labels) {
    const idx = byLabel.get(lab);
    if (idx === undefined) {
      fail(`init file is missing node '${lab}'`);
    }
    rows.push(init.values[idx].slice());
  }
  let maxAbs = 0;
  for (const row of rows) for (const v of row) maxAbs = Math.max(maxAbs, Math.abs(v));
  const scale = maxAbs > 0 ? 10 / maxAbs : 1;
  return rows.map((row) => row.map((v) => v * scale));
}

function main() {
  const flags = parseFlags(process.argv.slice(2));
  for (const name of ["in", "out", "dim"]) {
    if (!flags.has(name)) fail(`missing --${name}`);
  }
  const dim = Number(flags.get("dim"));
  const seed = Number(flags.get("seed") || "0");
  const nNeighbors = Number(flags.get("n-neighbors") || "15");
  const minDist = Number(flags.get("min-dist") || "0.1");

  const input = readEmbedding(flags.get("in"));
  if (input.kind === "distribution") {
    fail("input must be hellinger or euclidean rows, not raw distributions");
  }
  if (input.labels.length <= nNeighbors) {
    fail(`input has ${input.labels.length} nodes, too few for nNeighbors=${nNeighbors}`);
  }
  const init = flags.has("init")
    ? alignedInit(flags.get("init"), input.labels, dim)
    : null;

  let UMAP;
  try {
    UMAP = require("umap-js").UMAP;
  } catch {
    fail("umap-js is not installed: run 'npm install' in this directory");
  }
  process.stderr.write(
    `umap config: dim=${dim} nNeighbors=${nNeighbors} minDist=${minDist} ` +
      `seed=${seed} init=${init ? "file" : "default"}\n`
  );
  const umap = new UMAP({
    nComponents: dim,
    nNeighbors,
    minDist,
    random: mulberry32(seed),
  });
  const nEpochs = umap.initializeFit(input.values);
  if (init) {
    const embedding = umap.getEmbedding();
    for (let i = 0; i < embedding.length; i++) {
      for (let j = 0; j < dim; j++) embedding[i][j] = init[i][j];
    }
  }
  for (let epoch = 0; epoch < nEpochs; epoch++) umap.step();

  writeEmbedding(flags.get("out"), {
    labels: input.labels,
    values: umap.getEmbedding(),
  });
  process.stdout.write(`${input.labels.length}\t${dim}\teuclidean\n`);
}

main();
