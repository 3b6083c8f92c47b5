import { readFileSync } from "node:fs";

import { loadBundle, type ViewState } from "../src/state.js";
import type { Bundle } from "../src/types.js";

const FIXTURES = new URL("../../test/fixtures/", import.meta.url);

export function fixtureJson(name: string): unknown {
  return JSON.parse(readFileSync(new URL(name, FIXTURES), "utf-8"));
}

export function bundleOf(stem: string): Bundle {
  return fixtureJson(`${stem}.bundle.json`) as Bundle;
}

export function stateOf(stem: string): ViewState {
  return loadBundle(bundleOf(stem));
}

export interface SliceGoldens {
  [fixture: string]: {
    [cell: string]: { visibility: string; scope: string };
  };
}

export function sliceGoldens(): SliceGoldens {
  return fixtureJson("slices.golden.json") as SliceGoldens;
}
