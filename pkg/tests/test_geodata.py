from __future__ import annotations

import json
import math

import numpy as np
import pytest

from qscape import geodata
from qscape.geodata import (
    GeodataError,
    generate_synthetic,
    load_points,
    load_polygons,
    planted_blocks,
    project,
    zone_grid,
)

from . import oracles


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadPoints:
    def test_basic_row(self, tmp_path):
        p = write(tmp_path / "pts.csv", "lon,lat,qscore\n-73.96,40.78,6.2\n")
        points, stats = load_points(p)
        assert len(points) == 1
        sp = points[0]
        assert (sp.id, sp.lon, sp.lat, sp.qscore) == (0, -73.96, 40.78, 6.2)
        assert stats.n_loaded == 1

    def test_header_only_is_fatal(self, tmp_path):
        p = write(tmp_path / "pts.csv", "lon,lat,qscore\n")
        with pytest.raises(GeodataError, match="no records"):
            load_points(p)

    def test_empty_file_is_fatal(self, tmp_path):
        p = write(tmp_path / "pts.csv", "")
        with pytest.raises(GeodataError, match="empty"):
            load_points(p)

    def test_bad_header_is_fatal(self, tmp_path):
        p = write(tmp_path / "pts.csv", "x,y,z\n1,2,3\n")
        with pytest.raises(GeodataError, match="header"):
            load_points(p)

    def test_count_matches_line_count(self, tmp_path):
        rng = np.random.default_rng(1)
        lines = ["lon,lat,qscore"]
        for _ in range(1000):
            lines.append(f"{rng.uniform(-74, -73)},{rng.uniform(40, 41)},{rng.normal()}")
        p = write(tmp_path / "pts.csv", "\n".join(lines) + "\n")
        n_lines = p.read_text().count("\n") - 1  # independent line counter
        points, _ = load_points(p)
        assert len(points) == n_lines == 1000
        assert [sp.id for sp in points] == list(range(1000))

    def test_bad_rows_reported_with_row_number(self, tmp_path):
        p = write(tmp_path / "pts.csv", "lon,lat,qscore\n1,2,3\nnope,2,3\n4,5,6\n")
        points, stats = load_points(p)
        assert len(points) == 2
        assert stats.n_skipped == 1
        assert any("row 3" in msg for msg in stats.issues)

    def test_out_of_range_lonlat_skipped(self, tmp_path):
        p = write(tmp_path / "pts.csv", "lon,lat,qscore\n200,10,1\n10,95,1\n10,10,1\n")
        points, stats = load_points(p)
        assert len(points) == 1
        assert stats.n_skipped == 2

    def test_loading_is_pure(self, tmp_path):
        p = write(tmp_path / "pts.csv", "lon,lat,qscore\n-73.9,40.7,1.5\n-73.8,40.6,2.5\n")
        a, _ = load_points(p)
        b, _ = load_points(p)
        assert a == b


def feature(geom_type, coords, props):
    return {"type": "Feature", "geometry": {"type": geom_type, "coordinates": coords}, "properties": props}


def fc(features):
    return json.dumps({"type": "FeatureCollection", "features": features})


UNIT_SQ = [[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]]


class TestLoadPolygons:
    def test_building_square(self, tmp_path):
        p = write(tmp_path / "b.geojson", fc([feature("Polygon", UNIT_SQ, {"floors": 5})]))
        records, stats = load_polygons(p, "buildings")
        assert len(records) == 1
        assert records[0].floors == 5
        assert stats.n_excluded == 0

    def test_floors_zero_excluded_and_counted(self, tmp_path):
        p = write(
            tmp_path / "b.geojson",
            fc([feature("Polygon", UNIT_SQ, {"floors": 0}), feature("Polygon", UNIT_SQ, {"floors": 2})]),
        )
        records, stats = load_polygons(p, "buildings")
        assert len(records) == 1
        assert stats.n_excluded == 1

    def test_missing_floors_excluded(self, tmp_path):
        p = write(tmp_path / "b.geojson", fc([feature("Polygon", UNIT_SQ, {})]))
        with pytest.raises(GeodataError, match="no buildings"):
            load_polygons(p, "buildings")

    def test_non_polygonal_skipped_with_warning(self, tmp_path):
        p = write(
            tmp_path / "b.geojson",
            fc(
                [
                    feature("LineString", [[0, 0], [1, 1]], {"floors": 3}),
                    feature("Polygon", UNIT_SQ, {"floors": 3}),
                ]
            ),
        )
        records, stats = load_polygons(p, "buildings")
        assert len(records) == 1
        assert stats.n_skipped == 1
        assert any("non-polygonal" in msg for msg in stats.issues)

    def test_malformed_json_fatal(self, tmp_path):
        p = write(tmp_path / "b.geojson", "{not json")
        with pytest.raises(GeodataError, match="malformed JSON"):
            load_polygons(p, "buildings")

    def test_195_neighborhoods(self, tmp_path):
        features = []
        for i in range(195):
            x = float(i % 15)
            y = float(i // 15)
            ring = [[x, y], [x + 1, y], [x + 1, y + 1], [x, y + 1], [x, y]]
            features.append(feature("MultiPolygon", [[ring]], {"name": f"area {i}"}))
        p = write(tmp_path / "n.geojson", fc(features))
        records, stats = load_polygons(p, "neighborhoods")
        assert len(records) == 195
        assert records[42].name == "area 42"

    def test_neighborhood_missing_name_skipped(self, tmp_path):
        p = write(
            tmp_path / "n.geojson",
            fc([feature("Polygon", UNIT_SQ, {}), feature("Polygon", UNIT_SQ, {"name": "a"})]),
        )
        records, stats = load_polygons(p, "neighborhoods")
        assert len(records) == 1
        assert stats.n_skipped == 1


class TestProjection:
    ORIGIN = (-73.95, 40.7)

    def test_origin_maps_to_zero(self):
        assert project(*self.ORIGIN, self.ORIGIN) == (0.0, 0.0)

    def test_lat_offset_formula(self):
        pt = project(self.ORIGIN[0], self.ORIGIN[1] + 0.001, self.ORIGIN)
        assert pt.x == 0.0
        assert pt.y == pytest.approx(111.19492664, abs=1e-6)

    def test_preserves_order_of_distances_vs_haversine(self):
        # random pairs within the city extent; near-ties below the projection's
        # distortion (<0.5%) are skipped since no planar map can order them
        rng = np.random.default_rng(99)
        for _ in range(400):
            lons = rng.uniform(-74.2, -73.7, size=4)
            lats = rng.uniform(40.5, 41.0, size=4)
            h1 = oracles.haversine_m(lons[0], lats[0], lons[1], lats[1])
            h2 = oracles.haversine_m(lons[2], lats[2], lons[3], lats[3])
            if abs(h1 - h2) <= 0.02 * max(h1, h2):
                continue
            p = [project(lon, lat, self.ORIGIN) for lon, lat in zip(lons, lats)]
            d1 = math.hypot(p[0].x - p[1].x, p[0].y - p[1].y)
            d2 = math.hypot(p[2].x - p[3].x, p[2].y - p[3].y)
            assert (d1 < d2) == (h1 < h2)

    def test_planar_distance_close_to_haversine(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            lon1, lon2 = rng.uniform(-74.2, -73.7, size=2)
            lat1, lat2 = rng.uniform(40.5, 41.0, size=2)
            h = oracles.haversine_m(lon1, lat1, lon2, lat2)
            p1 = project(lon1, lat1, self.ORIGIN)
            p2 = project(lon2, lat2, self.ORIGIN)
            d = math.hypot(p1.x - p2.x, p1.y - p2.y)
            assert d == pytest.approx(h, rel=5e-3)

    def test_injective_at_city_scale(self):
        rng = np.random.default_rng(31)
        seen = {}
        for _ in range(20000):
            lon = rng.uniform(-74.2, -73.7)
            lat = rng.uniform(40.5, 41.0)
            pt = project(lon, lat, self.ORIGIN)
            key = (pt.x, pt.y)
            assert key not in seen or seen[key] == (lon, lat)
            seen[key] = (lon, lat)

    def test_unproject_roundtrip(self):
        pt = project(-73.8123, 40.8456, self.ORIGIN)
        lon, lat = geodata.unproject(pt.x, pt.y, self.ORIGIN)
        assert lon == pytest.approx(-73.8123, abs=1e-12)
        assert lat == pytest.approx(40.8456, abs=1e-12)


class TestSynthetic:
    def test_deterministic(self):
        a = generate_synthetic(3, 500, 200, 25)
        b = generate_synthetic(3, 500, 200, 25)
        assert [(p.lon, p.lat, p.qscore) for p in a.points] == [
            (p.lon, p.lat, p.qscore) for p in b.points
        ]
        assert [bb.floors for bb in a.buildings] == [bb.floors for bb in b.buildings]
        assert a.projection_origin == b.projection_origin

    def test_sizes(self, small_dataset):
        assert len(small_dataset.points) == 2500
        assert len(small_dataset.buildings) == 800
        assert len(small_dataset.neighborhoods) == 25

    def test_floor_histogram(self):
        ds = generate_synthetic(8, 100, 4000, 16)
        low = sum(1 for b in ds.buildings if b.floors < 8)
        assert low / len(ds.buildings) >= 0.85

    def test_planted_block_statistics(self):
        ds = generate_synthetic(21, 6000, 1500, 100)
        hh, ll = planted_blocks(100)
        rows, cols = zone_grid(100)
        q = np.asarray([p.qscore for p in ds.points])
        mean, std = q.mean(), q.std()
        # locate each point's zone from the generator's layout
        lon_w = geodata.ANCHOR[0] - cols * geodata.ZONE_DLON / 2
        lat_s = geodata.ANCHOR[1] - rows * geodata.ZONE_DLAT / 2
        zc = np.clip(((np.asarray([p.lon for p in ds.points]) - lon_w) // geodata.ZONE_DLON), 0, cols - 1)
        zr = np.clip(((np.asarray([p.lat for p in ds.points]) - lat_s) // geodata.ZONE_DLAT), 0, rows - 1)
        zid = (zr * cols + zc).astype(int)
        hh_mask = np.isin(zid, list(hh))
        assert q[hh_mask].mean() > mean + std

    def test_zone_grid_tiles_exactly(self):
        for n in (1, 7, 16, 100, 195):
            rows, cols = zone_grid(n)
            assert rows * cols == n

    def test_roundtrip_serialize_reload(self, tmp_path):
        ds = generate_synthetic(13, 300, 120, 9)
        geodata.write_points_csv(ds.points, tmp_path / "p.csv")
        geodata.write_buildings_geojson(ds.buildings, tmp_path / "b.geojson")
        geodata.write_neighborhoods_geojson(ds.neighborhoods, tmp_path / "n.geojson")
        points, _ = load_points(tmp_path / "p.csv")
        buildings, bstats = load_polygons(tmp_path / "b.geojson", "buildings")
        neighborhoods, _ = load_polygons(tmp_path / "n.geojson", "neighborhoods")
        assert points == ds.points
        assert bstats.n_excluded == 0
        assert len(buildings) == len(ds.buildings)
        for got, want in zip(buildings, ds.buildings):
            assert got.floors == want.floors
            assert np.array_equal(got.geometry.exterior, want.geometry.exterior)
        assert [n.name for n in neighborhoods] == [n.name for n in ds.neighborhoods]
        for got, want in zip(neighborhoods, ds.neighborhoods):
            assert np.array_equal(got.geometry.parts[0].exterior, want.geometry.parts[0].exterior)

    def test_centroid_inside_bbox_invariant(self, small_dataset):
        for b in small_dataset.buildings:
            assert b.centroid is not None

    def test_bad_sizes_rejected(self):
        with pytest.raises(ValueError):
            generate_synthetic(1, 0, 10, 4)
