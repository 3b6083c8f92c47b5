import assert from "node:assert/strict";
import { test } from "node:test";

import { LoadError, parseBundle, renderValue } from "../src/bundle.js";
import { loadBundle } from "../src/state.js";
import { bundleOf } from "./support.js";

test("golden bundle parses and opens on its top-ranked view", () => {
  const bundle = bundleOf("golden");
  const state = loadBundle(bundle);
  assert.equal(state.activeView, bundle.recommendations[0]!.view);
  assert.equal(state.selected, null);
  assert.equal(state.sliceOverlay, "none");
  assert.equal(state.metricOverlay, "none");
});

test("version mismatch is a load error", () => {
  const bundle = bundleOf("golden") as { format_version: number };
  bundle.format_version = 2;
  assert.throws(() => parseBundle(bundle), LoadError);
});

test("dangling edge id is a load error", () => {
  const bundle = bundleOf("golden");
  bundle.edges[0]!.targets.push("Sheet1!Z99");
  assert.throws(() => parseBundle(bundle), LoadError);
});

test("dangling sink id is a load error", () => {
  const bundle = bundleOf("golden");
  bundle.report.sinks.push("Nowhere!A1");
  assert.throws(() => parseBundle(bundle), LoadError);
});

test("empty workbook bundle falls back to the dependency graph view", () => {
  const state = loadBundle(bundleOf("empty"));
  assert.equal(state.activeView, "DependencyGraph");
});

test("value rendering matches the analyzer's display strings", () => {
  assert.equal(renderValue({ t: "number", v: 9 }), "9");
  assert.equal(renderValue({ t: "number", v: 1.5 }), "1.5");
  assert.equal(renderValue({ t: "boolean", v: false }), "FALSE");
  assert.equal(renderValue({ t: "undefined" }), "");
  assert.equal(renderValue({ t: "error", v: "Cycle", display: "#CYCLE!" }), "#CYCLE!");
});
