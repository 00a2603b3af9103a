"""Batch point-in-polygon assignment over a packed ring soup.

Polygons are flattened into concatenated closed rings (exterior rings and
holes alike; even-odd parity makes holes subtract).  Each point scans
candidate polygons in ascending index order and takes the first hit, which
is how boundary ties between adjacent polygons resolve to the lower id.
A point exactly on any ring edge counts as inside.
"""

from __future__ import annotations

from . import active, compile_kernel, prange


def _assign_points(px, py, vx, vy, ring_ptr, poly_ring_ptr, poly_bbox, out):
    npts = px.shape[0]
    npoly = poly_ring_ptr.shape[0] - 1
    for i in prange(npts):
        x = px[i]
        y = py[i]
        out[i] = -1
        for p in range(npoly):
            if (
                x < poly_bbox[p, 0]
                or x > poly_bbox[p, 2]
                or y < poly_bbox[p, 1]
                or y > poly_bbox[p, 3]
            ):
                continue
            parity = False
            on_edge = False
            for r in range(poly_ring_ptr[p], poly_ring_ptr[p + 1]):
                for v in range(ring_ptr[r], ring_ptr[r + 1] - 1):
                    x1 = vx[v]
                    y1 = vy[v]
                    x2 = vx[v + 1]
                    y2 = vy[v + 1]
                    cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)
                    if cross == 0.0:
                        lo = x1 if x1 < x2 else x2
                        hi = x1 if x1 > x2 else x2
                        if lo <= x and x <= hi:
                            lo = y1 if y1 < y2 else y2
                            hi = y1 if y1 > y2 else y2
                            if lo <= y and y <= hi:
                                on_edge = True
                                break
                    if (y1 > y) != (y2 > y):
                        xint = x1 + (x2 - x1) * (y - y1) / (y2 - y1)
                        if x < xint:
                            parity = not parity
                if on_edge:
                    break
            if on_edge or parity:
                out[i] = p
                break


assign_points_py = _assign_points
assign_points_jit = compile_kernel(_assign_points, parallel=True)
assign_points = active(assign_points_py, assign_points_jit)
