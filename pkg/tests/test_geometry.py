from __future__ import annotations

import numpy as np
import pytest

from qscape.geometry import (
    GeometryError,
    MultiPolygon,
    Polygon,
    area,
    centroid,
    point_in_polygon,
    validate_ring,
    voronoi,
)

from .conftest import square
from . import oracles


class TestCentroid:
    def test_unit_square(self):
        cx, cy = centroid(square(0, 0))
        assert (cx, cy) == (0.5, 0.5)

    def test_translation_equivariance(self):
        rng = np.random.default_rng(5)
        base = square(0, 0, 2.0)
        for _ in range(20):
            dx, dy = rng.uniform(-50, 50, size=2)
            moved = Polygon(exterior=base.exterior + np.array([dx, dy]))
            cx, cy = centroid(moved)
            assert cx == pytest.approx(1.0 + dx, abs=1e-9)
            assert cy == pytest.approx(1.0 + dy, abs=1e-9)

    def test_small_ring_far_from_origin(self):
        # shoelace must survive a tiny ring at a large offset
        poly = Polygon(exterior=square(0, 0, 1e-4).exterior + np.array([-73.95, 40.72]))
        cx, cy = centroid(poly)
        assert cx == pytest.approx(-73.95 + 5e-5, abs=1e-12)
        assert cy == pytest.approx(40.72 + 5e-5, abs=1e-12)

    def test_l_shape_matches_grid_sampling(self):
        # L-hexomino: 2x3 block minus a 1x2 corner
        ring = np.array(
            [[0.0, 0.0], [2.0, 0.0], [2.0, 3.0], [1.0, 3.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]
        )
        poly = Polygon(exterior=ring)
        gx, gy = oracles.grid_centroid(poly, step=0.0125)
        cx, cy = centroid(poly)
        assert cx == pytest.approx(gx, abs=1e-3)
        assert cy == pytest.approx(gy, abs=1e-3)

    def test_convex_centroid_inside(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            pts = rng.normal(size=(12, 2)) * 10
            # convex hull by angle sort around the mean
            mean = pts.mean(axis=0)
            hull_order = np.argsort(np.arctan2(*(pts - mean).T[::-1]))
            ring = np.vstack([pts[hull_order], pts[hull_order][:1]])
            poly = Polygon(exterior=ring)
            if abs(area(poly)) < 1e-9:
                continue
            cx, cy = centroid(poly)
            assert oracles.polygon_inside(cx, cy, poly)

    def test_multipolygon_weighted(self):
        # two squares of area 1 and 4: centroid weighted 1:4
        multi = MultiPolygon([square(0, 0, 1.0), square(10, 0, 2.0)])
        cx, cy = centroid(multi)
        assert cx == pytest.approx((0.5 * 1 + 11.0 * 4) / 5)
        assert cy == pytest.approx((0.5 * 1 + 1.0 * 4) / 5)

    def test_hole_subtracts(self):
        outer = square(0, 0, 4.0).exterior
        inner = square(2.5, 1.5, 1.0).exterior
        poly = Polygon(exterior=outer, holes=[inner])
        cx, cy = centroid(poly)
        # 16 * (2,2) - 1 * (3,2) over 15
        assert cx == pytest.approx((16 * 2 - 3) / 15)
        assert cy == pytest.approx(2.0)

    def test_zero_area_error(self):
        flat = Polygon(exterior=np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 0.0]]))
        with pytest.raises(GeometryError):
            centroid(flat)


class TestValidateRing:
    def test_open_ring_rejected(self):
        with pytest.raises(GeometryError, match="closed"):
            validate_ring(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))

    def test_too_few_vertices(self):
        with pytest.raises(GeometryError, match="4 vertices"):
            validate_ring(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]))

    def test_bowtie_rejected(self):
        bowtie = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(GeometryError, match="self-intersecting"):
            validate_ring(bowtie)

    def test_valid_square_passes(self):
        validate_ring(square(3, 4).exterior)


class TestPointInPolygon:
    def test_inside_unit_square(self):
        assert point_in_polygon((0.5, 0.5), square(0, 0))

    def test_outside_unit_square(self):
        assert not point_in_polygon((2.0, 2.0), square(0, 0))

    def test_edge_and_vertex_inside(self):
        sq = square(0, 0)
        assert point_in_polygon((0.0, 0.5), sq)
        assert point_in_polygon((0.5, 1.0), sq)
        assert point_in_polygon((0.0, 0.0), sq)

    def test_hole_excludes_interior_point(self):
        poly = Polygon(exterior=square(0, 0, 4.0).exterior, holes=[square(1, 1, 1.0).exterior])
        assert not point_in_polygon((1.5, 1.5), poly)
        assert point_in_polygon((3.5, 3.5), poly)
        # hole boundary itself counts as inside
        assert point_in_polygon((1.0, 1.5), poly)

    def test_agrees_with_winding_oracle(self, concave_polygon):
        rng = np.random.default_rng(17)
        pts = rng.uniform(-0.5, 4.5, size=(10_000, 2))
        for x, y in pts:
            assert point_in_polygon((x, y), concave_polygon) == oracles.polygon_inside(
                x, y, concave_polygon
            )

    def test_reversal_consistency(self, concave_polygon):
        reversed_poly = Polygon(exterior=concave_polygon.exterior[::-1].copy())
        rng = np.random.default_rng(23)
        pts = rng.uniform(-0.5, 4.5, size=(2000, 2))
        for x, y in pts:
            assert point_in_polygon((x, y), concave_polygon) == point_in_polygon(
                (x, y), reversed_poly
            )


class TestVoronoi:
    def test_single_site_fills_clip(self):
        cells = voronoi(np.array([[1.0, 1.0]]), clip=(0.0, 0.0, 4.0, 3.0))
        assert len(cells) == 1
        assert area(cells[0].geometry) == pytest.approx(12.0)

    def test_two_sites_bisector(self):
        cells = voronoi(np.array([[0.0, 0.0], [2.0, 0.0]]), clip=(-1.0, -1.0, 3.0, 1.0))
        ring = cells[0].geometry.exterior
        assert ring[:, 0].max() == pytest.approx(1.0)
        assert oracles.polygon_inside(0.5, 0.0, cells[0].geometry)
        assert not oracles.polygon_inside(1.5, 0.0, cells[0].geometry)

    def test_duplicate_sites_rejected(self):
        with pytest.raises(GeometryError, match="duplicate"):
            voronoi(np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]]))

    def test_site_outside_clip_rejected(self):
        with pytest.raises(GeometryError, match="outside"):
            voronoi(np.array([[0.0, 0.0], [5.0, 5.0]]), clip=(-1.0, -1.0, 1.0, 1.0))

    def test_nearest_site_property(self):
        rng = np.random.default_rng(42)
        sites = rng.uniform(0, 100, size=(20, 2))
        clip = (-2.0, -2.0, 102.0, 102.0)
        cells = voronoi(sites, clip=clip)
        samples = rng.uniform(clip[0], clip[2], size=(1000, 2))
        for x, y in samples:
            nearest = int(np.argmin((sites[:, 0] - x) ** 2 + (sites[:, 1] - y) ** 2))
            assert oracles.polygon_inside(x, y, cells[nearest].geometry)

    def test_cell_areas_sum_to_clip(self):
        rng = np.random.default_rng(7)
        sites = rng.uniform(0, 50, size=(40, 2))
        clip = (-5.0, -5.0, 55.0, 55.0)
        cells = voronoi(sites, clip=clip)
        total = sum(area(c.geometry) for c in cells)
        assert total == pytest.approx(60.0 * 60.0, rel=1e-6)

    def test_cells_contain_their_sites(self):
        rng = np.random.default_rng(3)
        sites = rng.uniform(0, 10, size=(30, 2))
        cells = voronoi(sites)
        for i, cell in enumerate(cells):
            assert oracles.polygon_inside(sites[i, 0], sites[i, 1], cell.geometry)
