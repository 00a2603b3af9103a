"""Array-encoded balanced 2-d tree and exact k-nearest-neighbor queries.

The tree is built once in NumPy (median split on alternating axes, ties
ordered by point id so the structure is independent of input order) and
queried by a loop kernel that keeps a bounded max-heap keyed by
``(squared distance, point id)``.  Queries are exact: a subtree is pruned
only when its slab distance strictly exceeds the current worst candidate,
so equal-distance ties are always resolved by ascending id.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import active, compile_kernel, prange

LEAF_SIZE = 16


@dataclass
class KDTreeArrays:
    """Flat node storage; ``perm`` maps leaf slots to point positions."""

    axis: np.ndarray  # int8, -1 for leaves
    split: np.ndarray  # float64 split coordinate
    left: np.ndarray  # int32 child node index
    right: np.ndarray  # int32 child node index
    start: np.ndarray  # int32 leaf slice start into perm
    end: np.ndarray  # int32 leaf slice end
    perm: np.ndarray  # int64 point positions

    @property
    def n_nodes(self) -> int:
        return self.axis.shape[0]


def build_kdtree(xs: np.ndarray, ys: np.ndarray, ids: np.ndarray, leaf_size: int = LEAF_SIZE) -> KDTreeArrays:
    n = xs.shape[0]
    if n == 0:
        raise ValueError("cannot build an index over zero points")
    perm = np.arange(n, dtype=np.int64)
    coords = (xs, ys)
    axis, split, left, right, start, end = [], [], [], [], [], []

    def new_node() -> int:
        axis.append(-1)
        split.append(0.0)
        left.append(-1)
        right.append(-1)
        start.append(0)
        end.append(0)
        return len(axis) - 1

    stack = [(new_node(), 0, n, 0)]
    while stack:
        node, lo, hi, depth = stack.pop()
        if hi - lo <= leaf_size:
            start[node] = lo
            end[node] = hi
            continue
        ax = depth % 2
        idx = perm[lo:hi]
        order = np.lexsort((ids[idx], coords[ax][idx]))
        perm[lo:hi] = idx[order]
        mid = (lo + hi) // 2
        axis[node] = ax
        split[node] = coords[ax][perm[mid]]
        left[node] = new_node()
        right[node] = new_node()
        stack.append((left[node], lo, mid, depth + 1))
        stack.append((right[node], mid, hi, depth + 1))

    return KDTreeArrays(
        axis=np.asarray(axis, dtype=np.int8),
        split=np.asarray(split, dtype=np.float64),
        left=np.asarray(left, dtype=np.int32),
        right=np.asarray(right, dtype=np.int32),
        start=np.asarray(start, dtype=np.int32),
        end=np.asarray(end, dtype=np.int32),
        perm=perm,
    )


def _knn_batch(
    qx,
    qy,
    k,
    xs,
    ys,
    pid,
    node_axis,
    node_split,
    node_left,
    node_right,
    node_start,
    node_end,
    perm,
    out_pos,
    out_id,
    out_d2,
):
    nq = qx.shape[0]
    for q in prange(nq):
        px = qx[q]
        py = qy[q]
        heap_d = np.empty(k, np.float64)
        heap_i = np.empty(k, np.int64)
        heap_p = np.empty(k, np.int64)
        heap_n = 0
        stack = np.empty(128, np.int64)
        stack[0] = 0
        sp = 1
        while sp > 0:
            sp -= 1
            node = stack[sp]
            ax = node_axis[node]
            if ax < 0:
                for t in range(node_start[node], node_end[node]):
                    j = perm[t]
                    dx = xs[j] - px
                    dy = ys[j] - py
                    d2 = dx * dx + dy * dy
                    jid = pid[j]
                    if heap_n < k:
                        c = heap_n
                        heap_d[c] = d2
                        heap_i[c] = jid
                        heap_p[c] = j
                        heap_n += 1
                        while c > 0:
                            par = (c - 1) // 2
                            if heap_d[par] < heap_d[c] or (
                                heap_d[par] == heap_d[c] and heap_i[par] < heap_i[c]
                            ):
                                heap_d[par], heap_d[c] = heap_d[c], heap_d[par]
                                heap_i[par], heap_i[c] = heap_i[c], heap_i[par]
                                heap_p[par], heap_p[c] = heap_p[c], heap_p[par]
                                c = par
                            else:
                                break
                    elif d2 < heap_d[0] or (d2 == heap_d[0] and jid < heap_i[0]):
                        heap_d[0] = d2
                        heap_i[0] = jid
                        heap_p[0] = j
                        c = 0
                        while True:
                            l = 2 * c + 1
                            r = l + 1
                            big = c
                            if l < k and (
                                heap_d[l] > heap_d[big]
                                or (heap_d[l] == heap_d[big] and heap_i[l] > heap_i[big])
                            ):
                                big = l
                            if r < k and (
                                heap_d[r] > heap_d[big]
                                or (heap_d[r] == heap_d[big] and heap_i[r] > heap_i[big])
                            ):
                                big = r
                            if big == c:
                                break
                            heap_d[big], heap_d[c] = heap_d[c], heap_d[big]
                            heap_i[big], heap_i[c] = heap_i[c], heap_i[big]
                            heap_p[big], heap_p[c] = heap_p[c], heap_p[big]
                            c = big
            else:
                coord = px if ax == 0 else py
                delta = coord - node_split[node]
                if delta < 0.0:
                    near = node_left[node]
                    far = node_right[node]
                else:
                    near = node_right[node]
                    far = node_left[node]
                if heap_n < k or delta * delta <= heap_d[0]:
                    stack[sp] = far
                    sp += 1
                stack[sp] = near
                sp += 1
        # heap-sort in place: ascending (d2, id)
        for endpos in range(heap_n - 1, 0, -1):
            heap_d[0], heap_d[endpos] = heap_d[endpos], heap_d[0]
            heap_i[0], heap_i[endpos] = heap_i[endpos], heap_i[0]
            heap_p[0], heap_p[endpos] = heap_p[endpos], heap_p[0]
            c = 0
            while True:
                l = 2 * c + 1
                r = l + 1
                big = c
                if l < endpos and (
                    heap_d[l] > heap_d[big]
                    or (heap_d[l] == heap_d[big] and heap_i[l] > heap_i[big])
                ):
                    big = l
                if r < endpos and (
                    heap_d[r] > heap_d[big]
                    or (heap_d[r] == heap_d[big] and heap_i[r] > heap_i[big])
                ):
                    big = r
                if big == c:
                    break
                heap_d[big], heap_d[c] = heap_d[c], heap_d[big]
                heap_i[big], heap_i[c] = heap_i[c], heap_i[big]
                heap_p[big], heap_p[c] = heap_p[c], heap_p[big]
                c = big
        for t in range(heap_n):
            out_pos[q, t] = heap_p[t]
            out_id[q, t] = heap_i[t]
            out_d2[q, t] = heap_d[t]


knn_batch_py = _knn_batch
knn_batch_jit = compile_kernel(_knn_batch, parallel=True)
knn_batch = active(knn_batch_py, knn_batch_jit)
