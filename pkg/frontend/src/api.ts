// HTTP client for the engine service plus the render scheduler that enforces
// "one in-flight render, latest state wins".

import type {
  CycleResponse,
  Manifest,
  RenderRequest,
  RenderResponse,
  StabilityResponse,
} from "./types.js";

export class EngineError extends Error {
  constructor(message: string, readonly violations: string[] = []) {
    super(message);
  }
}

async function post<T>(url: string, body: unknown, signal?: AbortSignal): Promise<T> {
  const response = await fetch(url, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
    signal,
  });
  if (!response.ok) {
    let detail: unknown;
    try {
      detail = (await response.json()).detail;
    } catch {
      detail = await response.text();
    }
    if (detail && typeof detail === "object" && "violations" in (detail as object)) {
      const d = detail as { message: string; violations: string[] };
      throw new EngineError(d.message, d.violations);
    }
    throw new EngineError(`engine returned ${response.status}: ${JSON.stringify(detail)}`);
  }
  return (await response.json()) as T;
}

export class EngineClient {
  constructor(readonly baseUrl: string) {}

  render(request: RenderRequest, signal?: AbortSignal): Promise<RenderResponse> {
    return post(`${this.baseUrl}/render`, request, signal);
  }

  cycle(request: RenderRequest, signal?: AbortSignal): Promise<CycleResponse> {
    const { scale: _scale, ...rest } = request;
    return post(`${this.baseUrl}/cycle`, rest, signal);
  }

  stability(
    request: RenderRequest & { trials: number; dilation: number; threshold: number },
    signal?: AbortSignal,
  ): Promise<StabilityResponse> {
    const { scale: _scale, ...rest } = request;
    return post(`${this.baseUrl}/stability`, rest, signal);
  }

  async fetchManifest(path: string): Promise<Manifest> {
    const response = await fetch(`${this.baseUrl}/frames/${path}`);
    if (!response.ok) throw new EngineError(`cannot load manifest ${path}: ${response.status}`);
    return (await response.json()) as Manifest;
  }

  async fetchFrame(path: string): Promise<Uint8Array> {
    const response = await fetch(`${this.baseUrl}/frames/${path}`);
    if (!response.ok) throw new EngineError(`cannot load frame ${path}: ${response.status}`);
    return new Uint8Array(await response.arrayBuffer());
  }
}

/** Serializes render traffic: at most one request in flight; while busy, only
 * the most recent request is remembered; stale responses are dropped. */
export class RenderScheduler<Req, Res> {
  private inFlight = false;
  private pending: Req | null = null;
  private latest = 0;

  constructor(
    private readonly send: (request: Req) => Promise<Res>,
    private readonly apply: (response: Res) => void,
    private readonly fail: (error: unknown) => void = () => undefined,
  ) {}

  request(request: Req): void {
    this.latest++;
    if (this.inFlight) {
      this.pending = request; // latest state wins
      return;
    }
    void this.dispatch(request, this.latest);
  }

  private async dispatch(request: Req, id: number): Promise<void> {
    this.inFlight = true;
    try {
      const response = await this.send(request);
      if (id === this.latest) this.apply(response);
    } catch (error) {
      if (id === this.latest) this.fail(error);
    } finally {
      this.inFlight = false;
      if (this.pending !== null) {
        const next = this.pending;
        this.pending = null;
        void this.dispatch(next, this.latest);
      }
    }
  }
}
