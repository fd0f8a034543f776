// Star motion model. Must match the server's reference kinematics exactly:
// each star is a linear function of the cursor.

export interface Star {
  m_xx: number;
  m_xy: number;
  c_x: number;
  m_yx: number;
  m_yy: number;
  c_y: number;
}

export interface Point {
  x: number;
  y: number;
}

export const SPACE_SIDE = 300;
export const STAR_SIDE = 3;

export function starPosition(star: Star, cursor: Point): Point {
  return {
    x: star.m_xy * cursor.y + star.m_xx * cursor.x + star.c_x,
    y: star.m_yx * cursor.x + star.m_yy * cursor.y + star.c_y,
  };
}

export function positionsAt(stars: Star[], cursor: Point): Point[] {
  return stars.map((s) => starPosition(s, cursor));
}

// Round half away from zero, matching the server's rasterizer.
export function roundHalfAway(v: number): number {
  return v >= 0 ? Math.floor(v + 0.5) : Math.ceil(v - 0.5);
}

export function clamp(v: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, v));
}
