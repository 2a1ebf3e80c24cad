// Explorer state and its update function. All slider math lives here so it can
// be property-tested: no event sequence may ever leave b + r > 1 (or the primed
// pair). The rule is that the slider being moved wins and its partner yields.

import type { DensityScale, FamilyName, SchemeName } from "./types.js";

export const INTERACTIVE_BURN = 100_000;
export const FULL_QUALITY_BURN = 1_000_000;
export const DEFAULT_PLOT = 100_000;

export interface ExplorerState {
  scheme: SchemeName;
  fx: FamilyName;
  gy: FamilyName;
  b: number;
  r: number;
  bp: number;
  rp: number;
  burn: number;
  plot: number;
  seed: number;
  size: number; // raster is size x size
  scale: DensityScale;
}

export type ExplorerEvent =
  | { kind: "set-b"; value: number }
  | { kind: "set-r"; value: number }
  | { kind: "set-bp"; value: number }
  | { kind: "set-rp"; value: number }
  | { kind: "set-scheme"; value: SchemeName }
  | { kind: "set-fx"; value: FamilyName }
  | { kind: "set-gy"; value: FamilyName }
  | { kind: "set-burn"; value: number }
  | { kind: "set-plot"; value: number }
  | { kind: "set-seed"; value: number }
  | { kind: "set-size"; value: number }
  | { kind: "set-scale"; value: DensityScale }
  | { kind: "load-params"; b: number; r: number; bp: number; rp: number };

export function initialState(): ExplorerState {
  return {
    scheme: "simultaneous",
    fx: "logistic",
    gy: "logistic",
    b: 0.4,
    r: 0.6,
    bp: 0.4,
    rp: 0.6,
    burn: INTERACTIVE_BURN,
    plot: DEFAULT_PLOT,
    seed: 0,
    size: 400,
    scale: "log",
  };
}

function clamp01(v: number): number {
  if (!Number.isFinite(v)) return 0;
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

/** Jointly clamp a coupler pair; the component named by `moved` wins. */
export function clampPair(
  base: number,
  rate: number,
  moved: "base" | "rate",
): { base: number; rate: number } {
  let b = clamp01(base);
  let r = clamp01(rate);
  if (b + r > 1) {
    if (moved === "base") r = 1 - b;
    else b = 1 - r;
  }
  return { base: b, rate: r };
}

export function update(state: ExplorerState, event: ExplorerEvent): ExplorerState {
  switch (event.kind) {
    case "set-b": {
      const { base, rate } = clampPair(event.value, state.r, "base");
      return { ...state, b: base, r: rate };
    }
    case "set-r": {
      const { base, rate } = clampPair(state.b, event.value, "rate");
      return { ...state, b: base, r: rate };
    }
    case "set-bp": {
      const { base, rate } = clampPair(event.value, state.rp, "base");
      return { ...state, bp: base, rp: rate };
    }
    case "set-rp": {
      const { base, rate } = clampPair(state.bp, event.value, "rate");
      return { ...state, bp: base, rp: rate };
    }
    case "set-scheme":
      return { ...state, scheme: event.value };
    case "set-fx":
      return { ...state, fx: event.value };
    case "set-gy":
      return { ...state, gy: event.value };
    case "set-burn":
      return { ...state, burn: sanePositiveInt(event.value, state.burn) };
    case "set-plot":
      return { ...state, plot: sanePositiveInt(event.value, state.plot) };
    case "set-seed":
      return { ...state, seed: sanePositiveInt(event.value, state.seed, 0) };
    case "set-size":
      return { ...state, size: sanePositiveInt(event.value, state.size, 1) };
    case "set-scale":
      return { ...state, scale: event.value };
    case "load-params": {
      // applied pairwise through the same clamp so a manifest with bad values
      // cannot smuggle an invalid pair into the sliders
      const c = clampPair(event.b, event.r, "base");
      const d = clampPair(event.bp, event.rp, "base");
      return { ...state, b: c.base, r: c.rate, bp: d.base, rp: d.rate };
    }
  }
}

function sanePositiveInt(v: number, fallback: number, min = 0): number {
  if (!Number.isFinite(v)) return fallback;
  const n = Math.floor(v);
  return n < min ? min : n;
}

export function constraintsHold(state: ExplorerState): boolean {
  const ok = (b: number, r: number) => b >= 0 && r >= 0 && b + r <= 1;
  return ok(state.b, state.r) && ok(state.bp, state.rp);
}

export function renderRequestOf(state: ExplorerState) {
  return {
    scheme: state.scheme,
    fx: state.fx,
    gy: state.gy,
    b: state.b,
    r: state.r,
    bp: state.bp,
    rp: state.rp,
    burn: state.burn,
    plot: state.plot,
    seed: state.seed,
    width: state.size,
    height: state.size,
    scale: state.scale,
  };
}
