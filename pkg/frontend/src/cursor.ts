// Cursor state for the two interaction models.
//
// Pointer mode: the cursor is the mouse position inside the surface.
// Touch mode: the cursor is a virtual point moved by swipe deltas; the
// swipe's path maps onto the cursor's path no matter where the swipe
// starts, the cursor persists between swipes, and only swipes that START
// inside the drawable area count.

import { clamp, Point, SPACE_SIDE } from "./trajectory.js";

export type CursorMode = "pointer" | "touch";

export class CursorState {
  position: Point;
  mode: CursorMode;
  private touchAnchor: Point | null = null;

  constructor(mode: CursorMode = "pointer", start: Point = { x: 150, y: 150 }) {
    this.mode = mode;
    this.position = { ...start };
  }

  pointerMove(p: Point): Point {
    if (this.mode !== "pointer") return this.position;
    this.position = {
      x: clamp(p.x, 0, SPACE_SIDE),
      y: clamp(p.y, 0, SPACE_SIDE),
    };
    return this.position;
  }

  touchStart(p: Point): boolean {
    if (p.x < 0 || p.x > SPACE_SIDE || p.y < 0 || p.y > SPACE_SIDE) {
      this.touchAnchor = null; // swipe must start inside the drawable area
      return false;
    }
    this.touchAnchor = { ...p };
    return true;
  }

  touchMove(p: Point): Point {
    if (this.touchAnchor === null) return this.position; // ignored swipe
    const dx = p.x - this.touchAnchor.x;
    const dy = p.y - this.touchAnchor.y;
    this.touchAnchor = { ...p };
    this.position = {
      x: clamp(this.position.x + dx, 0, SPACE_SIDE),
      y: clamp(this.position.y + dy, 0, SPACE_SIDE),
    };
    return this.position;
  }

  touchEnd(): Point {
    // the cursor stays where the swipe left it
    this.touchAnchor = null;
    return this.position;
  }

  get swipeActive(): boolean {
    return this.touchAnchor !== null;
  }
}
