// Thin API client for the challenge/verify endpoints.

import { ClientChallenge, parseChallenge } from "./wire.js";

export interface VerifyResult {
  status: "pass" | "fail" | "gone" | "error";
  remaining: number;
}

export async function fetchChallenge(baseUrl = ""): Promise<ClientChallenge> {
  const resp = await fetch(`${baseUrl}/api/challenge`, { method: "POST" });
  if (!resp.ok) {
    throw new Error(`challenge request failed: HTTP ${resp.status}`);
  }
  return parseChallenge(await resp.json());
}

export async function verifyAnswer(
  id: string,
  x: number,
  y: number,
  baseUrl = "",
): Promise<VerifyResult> {
  const resp = await fetch(
    `${baseUrl}/api/verify?id=${encodeURIComponent(id)}&x=${Math.round(x)}&y=${Math.round(y)}`,
  );
  if (resp.status === 410) {
    return { status: "gone", remaining: 0 };
  }
  if (!resp.ok) {
    return { status: "error", remaining: 0 };
  }
  const body = (await resp.json()) as { result: string; remaining: number };
  return {
    status: body.result === "pass" ? "pass" : "fail",
    remaining: body.remaining ?? 0,
  };
}
