// DOM wiring for the explorer. Every pixel shown comes from the engine
// service; this file only moves state around and draws returned buffers.

import { EngineClient, EngineError, RenderScheduler } from "./api.js";
import { decodeBase64, grayToRGBA, parsePGM } from "./pgm.js";
import {
  FULL_QUALITY_BURN,
  INTERACTIVE_BURN,
  type ExplorerState,
  initialState,
  renderRequestOf,
  update,
} from "./state.js";
import {
  type PlaybackState,
  currentFrame,
  emptyPlayback,
  frameCaption,
  frameCount,
  loadManifest,
  scrubTo,
  setSpeed,
  tick,
  togglePlay,
} from "./playback.js";
import type { RenderRequest, RenderResponse } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const engineUrl =
  new URLSearchParams(window.location.search).get("engine") ?? "http://127.0.0.1:8787";
let client = new EngineClient(engineUrl);

let state: ExplorerState = initialState();
let playback: PlaybackState = emptyPlayback();
let lastDisplayed: Uint8Array | null = null; // exact bytes currently on the canvas
let diagnosticsAbort: AbortController | null = null;

// --- canvas -------------------------------------------------------------------

const canvas = $<HTMLCanvasElement>("view");
const frameCanvas = $<HTMLCanvasElement>("frame-view");

function drawGray(target: HTMLCanvasElement, width: number, height: number, pixels: Uint8Array): void {
  target.width = width;
  target.height = height;
  const ctx = target.getContext("2d");
  if (!ctx) return;
  ctx.putImageData(new ImageData(grayToRGBA(pixels), width, height), 0, 0);
}

// --- status / params panels -----------------------------------------------------

function setStatus(text: string, isError = false): void {
  const el = $("status");
  el.textContent = text;
  el.className = isError ? "status error" : "status";
}

function showResolvedParams(params: Record<string, unknown>): void {
  $("resolved").textContent = JSON.stringify(params, null, 1);
}

// --- render loop -----------------------------------------------------------------

const scheduler = new RenderScheduler<RenderRequest, RenderResponse>(
  (request) => client.render(request),
  (response) => {
    lastDisplayed = decodeBase64(response.pixels);
    (window as unknown as { __explorer: object }).__explorer = {
      displayedBuffer: () => lastDisplayed,
      state: () => state,
    };
    drawGray(canvas, response.width, response.height, lastDisplayed);
    showResolvedParams(response.params);
    setStatus(
      response.cycle
        ? `rendered; finite cycle, period ${response.cycle.period}`
        : "rendered",
    );
  },
  (error) => {
    if (error instanceof EngineError && error.violations.length) {
      setStatus(`engine rejected: ${error.violations.join("; ")}`, true);
    } else if (!(error instanceof DOMException && error.name === "AbortError")) {
      setStatus(`engine unreachable: ${String(error)}`, true);
    }
  },
);

function requestRender(): void {
  setStatus("rendering…");
  scheduler.request(renderRequestOf(state));
}

// --- parameter controls -----------------------------------------------------------

function syncControls(): void {
  ($("b") as HTMLInputElement).value = String(state.b);
  ($("r") as HTMLInputElement).value = String(state.r);
  ($("bp") as HTMLInputElement).value = String(state.bp);
  ($("rp") as HTMLInputElement).value = String(state.rp);
  $("b-val").textContent = state.b.toFixed(3);
  $("r-val").textContent = state.r.toFixed(3);
  $("bp-val").textContent = state.bp.toFixed(3);
  $("rp-val").textContent = state.rp.toFixed(3);
  ($("scheme") as HTMLSelectElement).value = state.scheme;
  ($("fx") as HTMLSelectElement).value = state.fx;
  ($("gy") as HTMLSelectElement).value = state.gy;
  ($("plot") as HTMLInputElement).value = String(state.plot);
  ($("seed") as HTMLInputElement).value = String(state.seed);
  ($("size") as HTMLSelectElement).value = String(state.size);
  ($("scale") as HTMLSelectElement).value = state.scale;
  $("burn-val").textContent = state.burn.toLocaleString();
}

function apply(event: Parameters<typeof update>[1]): void {
  state = update(state, event);
  syncControls();
  requestRender();
}

function bindSlider(id: "b" | "r" | "bp" | "rp"): void {
  $<HTMLInputElement>(id).addEventListener("input", (e) => {
    const value = parseFloat((e.target as HTMLInputElement).value);
    apply({ kind: `set-${id}` as const, value } as Parameters<typeof update>[1]);
  });
}

bindSlider("b");
bindSlider("r");
bindSlider("bp");
bindSlider("rp");

$<HTMLSelectElement>("scheme").addEventListener("change", (e) =>
  apply({ kind: "set-scheme", value: (e.target as HTMLSelectElement).value as ExplorerState["scheme"] }),
);
$<HTMLSelectElement>("fx").addEventListener("change", (e) =>
  apply({ kind: "set-fx", value: (e.target as HTMLSelectElement).value as ExplorerState["fx"] }),
);
$<HTMLSelectElement>("gy").addEventListener("change", (e) =>
  apply({ kind: "set-gy", value: (e.target as HTMLSelectElement).value as ExplorerState["gy"] }),
);
$<HTMLInputElement>("plot").addEventListener("change", (e) =>
  apply({ kind: "set-plot", value: parseInt((e.target as HTMLInputElement).value, 10) }),
);
$<HTMLInputElement>("seed").addEventListener("change", (e) =>
  apply({ kind: "set-seed", value: parseInt((e.target as HTMLInputElement).value, 10) }),
);
$<HTMLSelectElement>("size").addEventListener("change", (e) =>
  apply({ kind: "set-size", value: parseInt((e.target as HTMLSelectElement).value, 10) }),
);
$<HTMLSelectElement>("scale").addEventListener("change", (e) =>
  apply({ kind: "set-scale", value: (e.target as HTMLSelectElement).value as ExplorerState["scale"] }),
);
$("interactive").addEventListener("click", () => apply({ kind: "set-burn", value: INTERACTIVE_BURN }));
$("full-quality").addEventListener("click", () => apply({ kind: "set-burn", value: FULL_QUALITY_BURN }));

// --- diagnostics ------------------------------------------------------------------

$("detect-cycle").addEventListener("click", () => {
  diagnosticsAbort?.abort();
  diagnosticsAbort = new AbortController();
  $("diag").textContent = "detecting cycle…";
  client
    .cycle(renderRequestOf(state), diagnosticsAbort.signal)
    .then((response) => {
      if (!response.found || !response.cycle) {
        $("diag").textContent = "no finite cycle within the period bound";
        return;
      }
      const pts = response.cycle.points
        .map(([x, y]) => `(${x.toFixed(6)}, ${y.toFixed(6)})`)
        .join(" ");
      $("diag").textContent = `period ${response.cycle.period}: ${pts}`;
    })
    .catch((error) => {
      if (error instanceof DOMException && error.name === "AbortError") return; // keep prior panel
      $("diag").textContent = `cycle check failed: ${String(error)}`;
    });
});

$("check-stability").addEventListener("click", () => {
  diagnosticsAbort?.abort();
  diagnosticsAbort = new AbortController();
  $("diag").textContent = "running stability check…";
  client
    .stability(
      { ...renderRequestOf(state), trials: 5, dilation: 1, threshold: 0.95 },
      diagnosticsAbort.signal,
    )
    .then((response) => {
      const scores = response.pairs.map((p) => p.dilated_jaccard.toFixed(4)).join(", ");
      $("diag").textContent = `${response.verdict} (pairwise dilated-jaccard: ${scores})`;
    })
    .catch((error) => {
      if (error instanceof DOMException && error.name === "AbortError") return;
      $("diag").textContent = `stability check failed: ${String(error)}`;
    });
});

$("cancel-diag").addEventListener("click", () => {
  diagnosticsAbort?.abort();
  diagnosticsAbort = null;
});

// --- sweep playback ----------------------------------------------------------------

let playTimer: number | null = null;

function restartTimer(): void {
  if (playTimer !== null) window.clearInterval(playTimer);
  playTimer = null;
  if (playback.playing && playback.speed > 0) {
    playTimer = window.setInterval(() => {
      playback = tick(playback);
      void showCurrentFrame();
    }, 1000 / playback.speed);
  }
}

async function showCurrentFrame(): Promise<void> {
  const frame = currentFrame(playback);
  if (!frame) return;
  const scrub = $<HTMLInputElement>("scrub");
  scrub.max = String(Math.max(frameCount(playback) - 1, 0));
  scrub.value = String(playback.frame);
  $("caption").textContent = frameCaption(frame);
  if (frame.error || !frame.image) {
    $("frame-status").textContent = `frame ${frame.index}: failed in sweep (${frame.error ?? "no image"})`;
    return;
  }
  const dir = ($<HTMLInputElement>("sweep-dir").value || ".").replace(/\/+$/, "");
  try {
    const image = parsePGM(await client.fetchFrame(`${dir}/${frame.image}`));
    drawGray(frameCanvas, image.width, image.height, image.pixels);
    $("frame-status").textContent = frame.cycle
      ? `frame ${frame.index}: finite cycle, period ${frame.cycle.period}`
      : `frame ${frame.index}`;
  } catch (error) {
    $("frame-status").textContent = `frame ${frame.index}: missing (${String(error)})`;
  }
}

$("load-manifest").addEventListener("click", () => {
  const dir = ($<HTMLInputElement>("sweep-dir").value || ".").replace(/\/+$/, "");
  client
    .fetchManifest(`${dir}/manifest.json`)
    .then((manifest) => {
      playback = loadManifest(playback, manifest);
      $("frame-status").textContent = `loaded ${manifest.frames.length} frames`;
      restartTimer();
      void showCurrentFrame();
    })
    .catch((error) => {
      $("frame-status").textContent = String(error);
    });
});

$("play-pause").addEventListener("click", () => {
  const wasPlaying = playback.playing;
  playback = togglePlay(playback);
  restartTimer();
  if (wasPlaying && !playback.playing) {
    // pausing hands the frame's parameters to the sliders for manual exploration
    const frame = currentFrame(playback);
    if (frame) {
      apply({
        kind: "load-params",
        b: frame.params.b,
        r: frame.params.r,
        bp: frame.params.b_prime,
        rp: frame.params.r_prime,
      });
    }
  }
});

$<HTMLInputElement>("scrub").addEventListener("input", (e) => {
  playback = scrubTo(playback, parseInt((e.target as HTMLInputElement).value, 10));
  void showCurrentFrame();
});

$<HTMLInputElement>("speed").addEventListener("change", (e) => {
  playback = setSpeed(playback, parseFloat((e.target as HTMLInputElement).value));
  restartTimer();
});

// --- boot --------------------------------------------------------------------------

$("engine-url").textContent = engineUrl;
syncControls();
requestRender();
