"""JIT-compiled scoring kernels for the brute-force cursor-grid attacks.

Each kernel evaluates one dispersion score at every grid position from the
trajectory coefficient arrays. They exist purely for speed: the scalar
functions in ``heuristics`` define the formulas, and the reduced-grid
oracle tests pin the two paths together.

The solver scores snapshots, i.e. what a screenshot of the state would
show: position-based kernels only see stars inside the drawable window,
and states with fewer than two visible stars score +inf (an empty frame is
never a credible shape).
"""

from __future__ import annotations

import numpy as np
from numba import njit

SIDE = 300
MIN_VISIBLE = 2
DIST_TILE = 25  # MinDistribution tile side
TILES_PER_ROW = SIDE // DIST_TILE
N_TILES = TILES_PER_ROW * TILES_PER_ROW
FULL_TILE_SCORE = float(DIST_TILE * DIST_TILE)  # |2*0 - 625| for an all-black tile


@njit(cache=True, fastmath=True)
def minsize_scores(mxx, mxy, cx0, myx, myy, cy0, gx, gy):
    npos = gx.size
    n = mxx.size
    scores = np.empty(npos, np.float64)
    for p in range(npos):
        cx = gx[p]
        cy = gy[p]
        xmin = np.inf
        xmax = -np.inf
        ymin = np.inf
        ymax = -np.inf
        visible = 0
        for s in range(n):
            x = mxy[s] * cy + mxx[s] * cx + cx0[s]
            y = myx[s] * cx + myy[s] * cy + cy0[s]
            if 0.0 <= x < SIDE and 0.0 <= y < SIDE:
                visible += 1
                xmin = min(xmin, x)
                xmax = max(xmax, x)
                ymin = min(ymin, y)
                ymax = max(ymax, y)
        if visible < MIN_VISIBLE:
            scores[p] = np.inf
        else:
            scores[p] = (xmax - xmin) + (ymax - ymin)
    return scores


@njit(cache=True, fastmath=True)
def pairwise_scores(mxx, mxy, cx0, myx, myy, cy0, gx, gy):
    """MinSumDist and AllSumDist in one pass over visible star pairs."""
    npos = gx.size
    n = mxx.size
    minsum = np.empty(npos, np.float64)
    allsum = np.empty(npos, np.float64)
    px = np.empty(n, np.float64)
    py = np.empty(n, np.float64)
    nearest = np.empty(n, np.float64)
    for p in range(npos):
        cx = gx[p]
        cy = gy[p]
        m = 0
        for s in range(n):
            x = mxy[s] * cy + mxx[s] * cx + cx0[s]
            y = myx[s] * cx + myy[s] * cy + cy0[s]
            if 0.0 <= x < SIDE and 0.0 <= y < SIDE:
                px[m] = x
                py[m] = y
                nearest[m] = np.inf
                m += 1
        if m < MIN_VISIBLE:
            minsum[p] = np.inf
            allsum[p] = np.inf
            continue
        total = 0.0
        for i in range(m):
            xi = px[i]
            yi = py[i]
            ni = nearest[i]
            for j in range(i + 1, m):
                dx = xi - px[j]
                dy = yi - py[j]
                d = np.sqrt(dx * dx + dy * dy)
                total += d
                ni = min(ni, d)
                nearest[j] = min(nearest[j], d)
            nearest[i] = ni
        ms = 0.0
        for i in range(m):
            ms += nearest[i]
        minsum[p] = ms
        allsum[p] = 2.0 * total  # ordered pairs: each unordered pair counts twice
    return minsum, allsum


@njit(cache=True)
def mindistr_scores(mxx, mxy, cx0, myx, myy, cy0, gx, gy, star_side):
    """Tile-dispersion score via incremental stamping.

    Renders each state into a scratch raster exactly like render_state
    (rounding half away from zero, clipping at the border, white squares
    OR-ed together), tracking per-tile white counts through touched-pixel
    lists so the raster never needs a full clear between states.
    """
    npos = gx.size
    n = mxx.size
    scores = np.empty(npos, np.float64)
    buf = np.zeros(SIDE * SIDE, np.uint8)
    tile_w = np.zeros(N_TILES, np.int32)
    touched_px = np.empty(max(1, n * star_side * star_side), np.int64)
    touched_tiles = np.empty(N_TILES, np.int64)
    half = star_side // 2
    for p in range(npos):
        cx = gx[p]
        cy = gy[p]
        ntouch = 0
        ntt = 0
        for s in range(n):
            x = mxy[s] * cy + mxx[s] * cx + cx0[s]
            y = myx[s] * cx + myy[s] * cy + cy0[s]
            if x >= 0.0:
                ix = int(np.floor(x + 0.5))
            else:
                ix = int(np.ceil(x - 0.5))
            if y >= 0.0:
                iy = int(np.floor(y + 0.5))
            else:
                iy = int(np.ceil(y - 0.5))
            for dy in range(-half, star_side - half):
                yy = iy + dy
                if yy < 0 or yy >= SIDE:
                    continue
                for dx in range(-half, star_side - half):
                    xx = ix + dx
                    if xx < 0 or xx >= SIDE:
                        continue
                    idx = yy * SIDE + xx
                    if buf[idx] == 0:
                        buf[idx] = 1
                        touched_px[ntouch] = idx
                        ntouch += 1
                        t = (yy // DIST_TILE) * TILES_PER_ROW + xx // DIST_TILE
                        if tile_w[t] == 0:
                            touched_tiles[ntt] = t
                            ntt += 1
                        tile_w[t] += 1
        score = N_TILES * FULL_TILE_SCORE
        for i in range(ntt):
            w = tile_w[touched_tiles[i]]
            score += abs(2.0 * w - FULL_TILE_SCORE) - FULL_TILE_SCORE
        scores[p] = score
        for i in range(ntouch):
            buf[touched_px[i]] = 0
        for i in range(ntt):
            tile_w[touched_tiles[i]] = 0
    return scores
