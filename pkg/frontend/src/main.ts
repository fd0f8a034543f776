// Page bootstrap: wire the canvas, cursor handling, and submit flow.

import { fetchChallenge, verifyAnswer } from "./client.js";
import { CursorState } from "./cursor.js";
import { drawFrame } from "./render.js";
import { Point } from "./trajectory.js";
import type { ClientChallenge } from "./wire.js";

const canvas = document.getElementById("field") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const banner = document.getElementById("banner")!;
const checkButton = document.getElementById("check") as HTMLButtonElement;
const retryButton = document.getElementById("retry") as HTMLButtonElement;

let challenge: ClientChallenge | null = null;
let cursor = new CursorState("pointer");
let frameQueued = false;
let submitting = false;

function queueFrame(): void {
  if (frameQueued) return;
  frameQueued = true;
  requestAnimationFrame(() => {
    frameQueued = false;
    if (challenge) {
      drawFrame(ctx, challenge.stars, cursor.position, cursor.mode === "touch");
    }
  });
}

function setBanner(text: string, cls: string): void {
  banner.textContent = text;
  banner.className = cls;
}

async function loadChallenge(): Promise<void> {
  setBanner("loading challenge…", "info");
  retryButton.hidden = true;
  try {
    challenge = await fetchChallenge();
  } catch (err) {
    challenge = null;
    setBanner("could not load a challenge — check the service and retry", "error");
    retryButton.hidden = false;
    return;
  }
  cursor = new CursorState(cursor.mode, { x: 150, y: 150 });
  setBanner(
    "move until the stars form a picture, then " +
      (cursor.mode === "touch" ? "tap CHECK" : "click"),
    "info",
  );
  queueFrame();
}

function surfacePoint(e: { clientX: number; clientY: number }): Point {
  const rect = canvas.getBoundingClientRect();
  return { x: e.clientX - rect.left, y: e.clientY - rect.top };
}

async function submit(): Promise<void> {
  if (!challenge || submitting) return;
  submitting = true;
  try {
    const { x, y } = cursor.position;
    const result = await verifyAnswer(challenge.id, x, y);
    if (result.status === "pass" && result.remaining > 0) {
      setBanner(`correct — ${result.remaining} more shape(s) to find`, "pass");
    } else if (result.status === "pass") {
      setBanner("passed — you are human", "pass");
      challenge = null;
    } else if (result.status === "fail") {
      setBanner("failed — loading a fresh challenge", "fail");
      challenge = null;
      setTimeout(loadChallenge, 1200);
    } else {
      setBanner("challenge expired — loading a fresh one", "info");
      challenge = null;
      setTimeout(loadChallenge, 400);
    }
  } finally {
    submitting = false;
  }
}

canvas.addEventListener("pointermove", (e) => {
  if (e.pointerType === "touch") return;
  cursor.mode = "pointer";
  cursor.pointerMove(surfacePoint(e));
  queueFrame();
});

canvas.addEventListener("click", (e) => {
  if (cursor.mode === "pointer" && challenge) {
    cursor.pointerMove(surfacePoint(e));
    void submit();
  }
});

canvas.addEventListener(
  "touchstart",
  (e) => {
    cursor.mode = "touch";
    const t = e.touches[0];
    if (t && cursor.touchStart(surfacePoint(t))) {
      e.preventDefault();
    }
    queueFrame();
  },
  { passive: false },
);

canvas.addEventListener(
  "touchmove",
  (e) => {
    const t = e.touches[0];
    if (t && cursor.swipeActive) {
      cursor.touchMove(surfacePoint(t));
      e.preventDefault();
      queueFrame();
    }
  },
  { passive: false },
);

canvas.addEventListener("touchend", () => {
  cursor.touchEnd();
  queueFrame();
});

checkButton.addEventListener("click", () => void submit());
retryButton.addEventListener("click", () => void loadChallenge());

void loadChallenge();
