// Wire types for the engine service. These mirror the HTTP request/response
// models exactly; the explorer never computes dynamics itself.

export type SchemeName = "simultaneous" | "sequential";
export type FamilyName = "logistic" | "tent";
export type DensityScale = "log" | "linear";

export interface RenderRequest {
  scheme: SchemeName;
  fx: FamilyName;
  gy: FamilyName;
  b: number;
  r: number;
  bp: number;
  rp: number;
  burn: number;
  plot: number;
  seed?: number;
  x0?: number;
  y0?: number;
  width: number;
  height: number;
  scale?: DensityScale;
}

export interface CyclePayload {
  period: number;
  points: [number, number][];
  epsilon: number;
  confirmed_loops: number;
}

export interface RenderResponse {
  width: number;
  height: number;
  pixels: string; // base64 of width*height raw grayscale bytes, row 0 = top
  params: Record<string, unknown>;
  cycle: CyclePayload | null;
}

export interface CycleResponse {
  found: boolean;
  cycle: CyclePayload | null;
  params: Record<string, unknown>;
}

export interface StabilityRequest extends RenderRequest {
  trials: number;
  dilation: number;
  threshold: number;
}

export interface StabilityPair {
  first: number;
  second: number;
  jaccard: number;
  dilated_jaccard: number;
  pixel_hausdorff: number;
}

export interface StabilityResponse {
  verdict: "stable" | "unstable";
  threshold: number;
  dilation: number;
  runs: { seed: number; n_burn: number; population: number }[];
  pairs: StabilityPair[];
  params: Record<string, unknown>;
}

export interface ManifestFrame {
  index: number;
  s: number;
  params: { b: number; r: number; b_prime: number; r_prime: number };
  image: string | null;
  density_image: string | null;
  cycle: CyclePayload | null;
  stability: string | null;
  error: string | null;
}

export interface Manifest {
  sweep: Record<string, unknown>;
  frames: ManifestFrame[];
}
