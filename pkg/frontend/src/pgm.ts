// Minimal binary PGM (P5, maxval 255) reader for sweep frame files.

export interface GrayImage {
  width: number;
  height: number;
  pixels: Uint8Array; // row-major, row 0 = top
}

export function parsePGM(bytes: Uint8Array): GrayImage {
  let pos = 0;
  const token = (): string => {
    while (pos < bytes.length && isSpace(bytes[pos])) pos++;
    const start = pos;
    while (pos < bytes.length && !isSpace(bytes[pos])) pos++;
    if (start === pos) throw new Error("pgm: truncated header");
    return String.fromCharCode(...bytes.subarray(start, pos));
  };
  if (token() !== "P5") throw new Error("pgm: not a P5 file");
  const width = parseInt(token(), 10);
  const height = parseInt(token(), 10);
  const maxval = parseInt(token(), 10);
  if (!(width >= 1) || !(height >= 1)) throw new Error("pgm: bad dimensions");
  if (maxval !== 255) throw new Error(`pgm: unsupported maxval ${maxval}`);
  pos++; // single whitespace byte after maxval
  const pixels = bytes.subarray(pos, pos + width * height);
  if (pixels.length !== width * height) {
    throw new Error(`pgm: expected ${width * height} pixel bytes, found ${pixels.length}`);
  }
  return { width, height, pixels };
}

function isSpace(byte: number): boolean {
  return byte === 0x20 || byte === 0x0a || byte === 0x0d || byte === 0x09;
}

/** Expand one gray byte per pixel into RGBA for a canvas ImageData buffer.
 * Byte-preserving: channel R (and G, B) of pixel i equals pixels[i]. */
export function grayToRGBA(pixels: Uint8Array): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(pixels.length * 4);
  for (let i = 0; i < pixels.length; i++) {
    const g = pixels[i];
    out[i * 4] = g;
    out[i * 4 + 1] = g;
    out[i * 4 + 2] = g;
    out[i * 4 + 3] = 255;
  }
  return out;
}

export function decodeBase64(data: string): Uint8Array {
  const binary = atob(data);
  const out = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) out[i] = binary.charCodeAt(i);
  return out;
}
