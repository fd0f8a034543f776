// Star field rendering: 3 px white squares on black, matching the server
// rasterizer, plus a red arrow marking the virtual cursor in touch mode.
// Layout math is kept separate from canvas calls so tests can run it
// headless.

import {
  Point,
  roundHalfAway,
  SPACE_SIDE,
  Star,
  STAR_SIDE,
  starPosition,
} from "./trajectory.js";

export interface Stamp {
  x: number; // top-left pixel of the star square
  y: number;
}

export function layoutStars(stars: Star[], cursor: Point): Stamp[] {
  const half = Math.floor(STAR_SIDE / 2);
  const out: Stamp[] = [];
  for (const s of stars) {
    const p = starPosition(s, cursor);
    const ix = roundHalfAway(p.x) - half;
    const iy = roundHalfAway(p.y) - half;
    if (ix + STAR_SIDE <= 0 || ix >= SPACE_SIDE || iy + STAR_SIDE <= 0 || iy >= SPACE_SIDE) {
      continue; // fully off-screen
    }
    out.push({ x: ix, y: iy });
  }
  return out;
}

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  stars: Star[],
  cursor: Point,
  showArrow: boolean,
): void {
  ctx.fillStyle = "#000";
  ctx.fillRect(0, 0, SPACE_SIDE, SPACE_SIDE);
  ctx.fillStyle = "#fff";
  for (const stamp of layoutStars(stars, cursor)) {
    ctx.fillRect(stamp.x, stamp.y, STAR_SIDE, STAR_SIDE);
  }
  if (showArrow) {
    drawArrow(ctx, cursor);
  }
}

// Red arrow with its tip exactly on the cursor coordinate.
function drawArrow(ctx: CanvasRenderingContext2D, tip: Point): void {
  ctx.fillStyle = "#e22";
  ctx.beginPath();
  ctx.moveTo(tip.x, tip.y);
  ctx.lineTo(tip.x + 9, tip.y + 4);
  ctx.lineTo(tip.x + 5, tip.y + 8);
  ctx.closePath();
  ctx.fill();
}
