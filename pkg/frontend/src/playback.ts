// Sweep playback logic, kept free of DOM and timers so it is testable:
// the UI calls tick() from an interval and renders whatever state says.

import type { Manifest, ManifestFrame } from "./types.js";

export interface PlaybackState {
  manifest: Manifest | null;
  frame: number;
  playing: boolean;
  speed: number; // frames per second; 0 shows a still frame
}

export function emptyPlayback(): PlaybackState {
  return { manifest: null, frame: 0, playing: false, speed: 8 };
}

export function loadManifest(state: PlaybackState, manifest: Manifest): PlaybackState {
  return { ...state, manifest, frame: 0, playing: false };
}

export function frameCount(state: PlaybackState): number {
  return state.manifest ? state.manifest.frames.length : 0;
}

export function currentFrame(state: PlaybackState): ManifestFrame | null {
  if (!state.manifest || state.manifest.frames.length === 0) return null;
  return state.manifest.frames[state.frame];
}

export function scrubTo(state: PlaybackState, index: number): PlaybackState {
  const count = frameCount(state);
  if (count === 0) return state;
  const clamped = Math.min(Math.max(Math.floor(index), 0), count - 1);
  return { ...state, frame: clamped };
}

export function tick(state: PlaybackState): PlaybackState {
  if (!state.playing || state.speed <= 0) return state;
  const count = frameCount(state);
  if (count === 0) return state;
  return { ...state, frame: (state.frame + 1) % count };
}

export function togglePlay(state: PlaybackState): PlaybackState {
  if (frameCount(state) === 0) return state;
  return { ...state, playing: !state.playing };
}

export function setSpeed(state: PlaybackState, speed: number): PlaybackState {
  if (!Number.isFinite(speed) || speed < 0) return state;
  return { ...state, speed };
}

/** Caption in the figure-panel convention, e.g. "b=0.40  r=0.60". */
export function frameCaption(frame: ManifestFrame): string {
  return `b=${frame.params.b.toFixed(2)}  r=${frame.params.r.toFixed(2)}`;
}
