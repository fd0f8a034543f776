// Challenge payload parsing: JSON star records or the packed binary form
// (24-byte header + six little-endian float32 values per star).

import type { Star } from "./trajectory.js";

export interface ClientChallenge {
  id: string;
  stars: Star[];
}

const BINARY_MAGIC = "SD01";
const HEADER_SIZE = 24;
const STAR_RECORD_SIZE = 24;

export function parseChallenge(body: unknown): ClientChallenge {
  if (typeof body !== "object" || body === null) {
    throw new Error("challenge payload is not an object");
  }
  const obj = body as Record<string, unknown>;
  if (typeof obj.id !== "string") {
    throw new Error("challenge payload has no id");
  }
  if (Array.isArray(obj.stars)) {
    return { id: obj.id, stars: obj.stars.map(parseStarRecord) };
  }
  if (typeof obj.stars_b64 === "string") {
    return parseBinary(base64ToBytes(obj.stars_b64));
  }
  throw new Error("challenge payload has neither stars nor stars_b64");
}

function parseStarRecord(rec: unknown): Star {
  const r = rec as Record<string, unknown>;
  const fields = ["m_xx", "m_xy", "c_x", "m_yx", "m_yy", "c_y"] as const;
  const out: Partial<Record<(typeof fields)[number], number>> = {};
  for (const f of fields) {
    const v = r[f];
    if (typeof v !== "number" || !isFinite(v)) {
      throw new Error(`star record field ${f} missing or not a number`);
    }
    out[f] = v;
  }
  return out as Star;
}

export function parseBinary(bytes: Uint8Array): ClientChallenge {
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  const magic = String.fromCharCode(bytes[0], bytes[1], bytes[2], bytes[3]);
  if (magic !== BINARY_MAGIC) {
    throw new Error("bad magic in binary challenge payload");
  }
  let id = "";
  for (let i = 4; i < 20; i++) {
    id += bytes[i].toString(16).padStart(2, "0");
  }
  const count = view.getUint32(20, true);
  if (bytes.byteLength !== HEADER_SIZE + count * STAR_RECORD_SIZE) {
    throw new Error("binary challenge payload has the wrong length");
  }
  const stars: Star[] = [];
  for (let i = 0; i < count; i++) {
    const base = HEADER_SIZE + i * STAR_RECORD_SIZE;
    stars.push({
      m_xx: view.getFloat32(base, true),
      m_xy: view.getFloat32(base + 4, true),
      c_x: view.getFloat32(base + 8, true),
      m_yx: view.getFloat32(base + 12, true),
      m_yy: view.getFloat32(base + 16, true),
      c_y: view.getFloat32(base + 20, true),
    });
  }
  return { id, stars };
}

export function base64ToBytes(b64: string): Uint8Array {
  if (typeof atob === "function") {
    const raw = atob(b64);
    const out = new Uint8Array(raw.length);
    for (let i = 0; i < raw.length; i++) out[i] = raw.charCodeAt(i);
    return out;
  }
  // Node (tests)
  return new Uint8Array(Buffer.from(b64, "base64"));
}
