from __future__ import annotations

import numpy as np
import pytest

from qscape.geometry import Polygon, voronoi
from qscape.weights import (
    WeightsError,
    queen_contiguity,
    read_gal,
    row_standardize,
    write_gal,
)

from . import oracles
from .conftest import square


def grid_cells(rows, cols):
    return [square(float(c), float(r)) for r in range(rows) for c in range(cols)]


class TestQueenContiguity:
    def test_2x2_grid_all_neighbors(self):
        w = queen_contiguity(grid_cells(2, 2))
        assert w.cardinalities().tolist() == [3, 3, 3, 3]

    def test_1x3_strip(self):
        w = queen_contiguity(grid_cells(1, 3))
        assert w.cardinalities().tolist() == [1, 2, 1]

    def test_3x3_center_has_eight(self):
        w = queen_contiguity(grid_cells(3, 3))
        assert w.cardinalities()[4] == 8
        assert w.cardinalities().tolist() == [3, 5, 3, 5, 8, 5, 3, 5, 3]

    def test_corner_touch_counts(self):
        # two squares sharing exactly one vertex
        w = queen_contiguity([square(0, 0), square(1, 1)])
        assert w.cardinalities().tolist() == [1, 1]

    def test_disjoint_polygons_are_isolates(self):
        w = queen_contiguity([square(0, 0), square(5, 5)])
        assert w.cardinalities().tolist() == [0, 0]
        assert w.isolates() == [0, 1]

    def test_fewer_than_two_rejected(self):
        with pytest.raises(WeightsError):
            queen_contiguity([square(0, 0)])

    def test_voronoi_cells_match_bruteforce(self):
        rng = np.random.default_rng(50)
        sites = rng.uniform(0, 1000, size=(50, 2))
        cells = voronoi(sites)
        geoms = [c.geometry for c in cells]
        tol = 1e-6
        w = queen_contiguity(geoms, snap_tol=tol)
        got = {(i, int(j)) for i, nb in enumerate(w.neighbors) for j in nb if i < j}
        want = oracles.queen_pairs_bruteforce(geoms, tol)
        assert got == want

    def test_vertex_order_reversal_invariance(self):
        rng = np.random.default_rng(51)
        sites = rng.uniform(0, 100, size=(20, 2))
        cells = voronoi(sites)
        geoms = [c.geometry for c in cells]
        reversed_geoms = [Polygon(exterior=g.exterior[::-1].copy()) for g in geoms]
        a = queen_contiguity(geoms)
        b = queen_contiguity(reversed_geoms)
        assert all(np.array_equal(x, y) for x, y in zip(a.neighbors, b.neighbors))

    def test_snap_tol_zero_on_exact_grid(self):
        # integer-coordinate grid shares vertices exactly
        a = queen_contiguity(grid_cells(3, 4), snap_tol=0.0)
        b = queen_contiguity(grid_cells(3, 4), snap_tol=1e-6)
        assert all(np.array_equal(x, y) for x, y in zip(a.neighbors, b.neighbors))

    def test_jittered_vertices_within_tol(self):
        base = square(0, 0)
        moved = Polygon(exterior=square(1, 0).exterior + np.array([4e-7, -3e-7]))
        w = queen_contiguity([base, moved], snap_tol=1e-6)
        assert w.cardinalities().tolist() == [1, 1]
        w0 = queen_contiguity([base, moved], snap_tol=1e-9)
        assert w0.cardinalities().tolist() == [0, 0]

    def test_symmetry(self):
        rng = np.random.default_rng(52)
        sites = rng.uniform(0, 100, size=(30, 2))
        cells = voronoi(sites)
        w = queen_contiguity([c.geometry for c in cells])
        for i, nb in enumerate(w.neighbors):
            for j in nb:
                assert i in w.neighbors[int(j)]
                assert int(j) != i


class TestRowStandardize:
    def test_three_neighbors_get_thirds(self):
        w = queen_contiguity(grid_cells(2, 2))
        ws = row_standardize(w)
        assert np.allclose(ws.weights[0], [1 / 3] * 3)
        assert ws.standardized

    def test_isolate_row_stays_empty(self):
        w = queen_contiguity([square(0, 0), square(1, 0), square(9, 9)])
        ws = row_standardize(w)
        assert len(ws.weights[2]) == 0

    def test_row_sums_one(self):
        rng = np.random.default_rng(53)
        sites = rng.uniform(0, 100, size=(40, 2))
        cells = voronoi(sites)
        w = queen_contiguity([c.geometry for c in cells])
        # non-binary weights still standardize to unit rows
        for row in w.weights:
            row *= rng.uniform(0.5, 2.0, size=row.shape)
        ws = row_standardize(w)
        for row in ws.weights:
            if len(row):
                assert abs(row.sum() - 1.0) < 1e-12

    def test_neighbor_sets_preserved(self):
        w = queen_contiguity(grid_cells(3, 3))
        ws = row_standardize(w)
        assert all(np.array_equal(a, b) for a, b in zip(w.neighbors, ws.neighbors))

    def test_double_standardize_rejected(self):
        w = queen_contiguity(grid_cells(2, 2))
        ws = row_standardize(w)
        with pytest.raises(WeightsError):
            row_standardize(ws)


class TestGalRoundtrip:
    def test_roundtrip(self, tmp_path):
        w = queen_contiguity(grid_cells(3, 3))
        path = tmp_path / "w.gal"
        write_gal(w, path)
        back = read_gal(path)
        assert back.n == w.n
        assert all(np.array_equal(a, b) for a, b in zip(w.neighbors, back.neighbors))

    def test_header_is_n(self, tmp_path):
        w = queen_contiguity(grid_cells(1, 3))
        path = tmp_path / "w.gal"
        write_gal(w, path)
        assert path.read_text().splitlines()[0] == "3"

    def test_malformed_rejected(self, tmp_path):
        path = tmp_path / "bad.gal"
        path.write_text("2\n0 2\n1\n1 1\n0\n")
        with pytest.raises(WeightsError):
            read_gal(path)

    def test_asymmetric_rejected(self, tmp_path):
        path = tmp_path / "asym.gal"
        path.write_text("2\n0 1\n1\n1 0\n\n")
        with pytest.raises(WeightsError):
            read_gal(path)
