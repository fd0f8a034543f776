// Touch interaction contract: relative swipe mapping, persistence across
// swipes, inside-start requirement, and clamping.

import { describe, expect, it } from "vitest";

import { CursorState } from "../src/cursor.js";

describe("touch cursor", () => {
  it("maps the swipe path onto the cursor path regardless of start point", () => {
    const c = new CursorState("touch", { x: 100, y: 100 });
    c.touchStart({ x: 20, y: 250 }); // far from the cursor
    c.touchMove({ x: 40, y: 240 }); // delta +20, -10
    expect(c.position).toEqual({ x: 120, y: 90 });
  });

  it("keeps the cursor where the swipe ends", () => {
    const c = new CursorState("touch", { x: 100, y: 100 });
    c.touchStart({ x: 10, y: 10 });
    c.touchMove({ x: 30, y: 20 });
    c.touchEnd();
    expect(c.position).toEqual({ x: 120, y: 110 });
    // the next swipe continues from there
    c.touchStart({ x: 200, y: 200 });
    c.touchMove({ x: 210, y: 195 });
    expect(c.position).toEqual({ x: 130, y: 105 });
  });

  it("composes sequential swipe displacements", () => {
    const c = new CursorState("touch", { x: 50, y: 50 });
    for (const [dx, dy] of [[10, 5], [15, -10], [-5, 20]]) {
      c.touchStart({ x: 150, y: 150 });
      c.touchMove({ x: 150 + dx, y: 150 + dy });
      c.touchEnd();
    }
    expect(c.position).toEqual({ x: 70, y: 65 });
  });

  it("ignores swipes that start outside the drawable area", () => {
    const c = new CursorState("touch", { x: 100, y: 100 });
    expect(c.touchStart({ x: 320, y: 50 })).toBe(false);
    c.touchMove({ x: 200, y: 50 });
    expect(c.position).toEqual({ x: 100, y: 100 });
  });

  it("accepts swipes that start inside and leave the area", () => {
    const c = new CursorState("touch", { x: 100, y: 100 });
    expect(c.touchStart({ x: 290, y: 150 })).toBe(true);
    c.touchMove({ x: 340, y: 150 }); // finger leaves; delta still applies
    expect(c.position.x).toBe(150);
  });

  it("clamps the cursor to the surface", () => {
    const c = new CursorState("touch", { x: 290, y: 10 });
    c.touchStart({ x: 100, y: 100 });
    c.touchMove({ x: 200, y: 50 }); // +100, -50
    expect(c.position).toEqual({ x: 300, y: 0 });
  });

  it("tracks incremental moves within one swipe", () => {
    const c = new CursorState("touch", { x: 0, y: 0 });
    c.touchStart({ x: 100, y: 100 });
    c.touchMove({ x: 110, y: 100 });
    c.touchMove({ x: 120, y: 100 });
    c.touchMove({ x: 120, y: 140 });
    expect(c.position).toEqual({ x: 20, y: 40 });
  });
});

describe("pointer cursor", () => {
  it("follows and clamps pointer positions", () => {
    const c = new CursorState("pointer");
    c.pointerMove({ x: 50, y: 60 });
    expect(c.position).toEqual({ x: 50, y: 60 });
    c.pointerMove({ x: -10, y: 400 });
    expect(c.position).toEqual({ x: 0, y: 300 });
  });

  it("ignores touch deltas while in pointer mode without a start", () => {
    const c = new CursorState("pointer", { x: 10, y: 10 });
    c.touchMove({ x: 100, y: 100 });
    expect(c.position).toEqual({ x: 10, y: 10 });
  });
});
