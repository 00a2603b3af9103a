"""End-to-end orchestration: config, staged run, artifact persistence.

A run executes the fixed stage order ingest -> interpolate -> aggregate ->
voronoi -> weights -> lisa -> regress, writing every artifact as a file
(GeoJSON, delimited text, GAL adjacency, one JSON manifest with content
hashes).  Runs are deterministic: identical config gives byte-identical
artifacts, independent of thread count.  A stage failure aborts with the
stage name and removes everything written so far.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import geodata, geometry, interpolate, lisa as lisa_mod, regress, weights as weights_mod
from .geodata import Dataset
from .geometry import VoronoiCell
from .lisa import LisaResult
from .weights import SpatialWeights

STAGES = ("ingest", "interpolate", "aggregate", "voronoi", "weights", "lisa", "regress")


class ConfigError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    points: str | None = None
    buildings: str | None = None
    neighborhoods: str | None = None
    synthetic: bool = False
    n_points: int = 30000
    n_buildings: int = 8000
    n_zones: int = 100
    k: int = 30
    idw_power: float = 2.0
    floor_threshold: int = 8
    n_perm: int = 999
    alpha: float = 0.05
    lowess_frac: float = 0.3
    lowess_iterations: int = 3
    seed: int = 0
    output_dir: str = "esda-run"

    def validate(self) -> None:
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must be in (0, 1)")
        if self.n_perm < 1:
            raise ConfigError("n_perm must be >= 1")
        if self.idw_power <= 0:
            raise ConfigError("idw_power must be positive")
        if self.floor_threshold < 2:
            raise ConfigError("floor_threshold must be >= 2")
        if not 0.0 < self.lowess_frac <= 1.0:
            raise ConfigError("lowess_frac must be in (0, 1]")
        if self.lowess_iterations < 0:
            raise ConfigError("lowess_iterations must be >= 0")
        if self.synthetic:
            if min(self.n_points, self.n_buildings, self.n_zones) < 1:
                raise ConfigError("synthetic sizes must be >= 1")
        else:
            missing = [k for k in ("points", "buildings", "neighborhoods") if getattr(self, k) is None]
            if missing:
                raise ConfigError(
                    f"missing input paths {missing}; give all three or set synthetic=true"
                )

    def to_dict(self) -> dict:
        return asdict(self)


_BOOL_VALUES = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def _coerce(name: str, kind: type, raw: str):
    raw = raw.strip()
    try:
        if kind is bool:
            return _BOOL_VALUES[raw.lower()]
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"config key {name!r}: cannot parse {raw!r} as {kind.__name__}") from exc
    return raw


_FIELD_TYPES = {"points": str, "buildings": str, "neighborhoods": str, "output_dir": str}
for f in fields(PipelineConfig):
    if f.name not in _FIELD_TYPES:
        _FIELD_TYPES[f.name] = type(f.default)


def load_config(path) -> PipelineConfig:
    """Flat key=value file; '#' starts a comment; unknown keys are fatal."""
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in _FIELD_TYPES:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = _coerce(key, _FIELD_TYPES[key], raw)
    return PipelineConfig(**values)


def apply_overrides(config: PipelineConfig, overrides: dict) -> PipelineConfig:
    """Non-None overrides (CLI flags) win over the file values."""
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        setattr(config, key, value)
    return config


@dataclass
class RunArtifacts:
    config: PipelineConfig
    dataset: Dataset | None = None
    included_ids: list[int] = field(default_factory=list)
    cells: list[VoronoiCell] | None = None
    weights: SpatialWeights | None = None
    lisa_results: list[LisaResult] | None = None
    regression: dict | None = None
    counts: dict = field(default_factory=dict)
    stages_run: list[str] = field(default_factory=list)
    files: dict[str, Path] = field(default_factory=dict)
    manifest: dict = field(default_factory=dict)

    @property
    def manifest_path(self) -> Path:
        return Path(self.config.output_dir) / "manifest.json"


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_json(doc: dict, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def _fit_dict(fit: regress.RegressionFit) -> dict:
    return {"slope": fit.slope, "intercept": fit.intercept, "r2": fit.r2, "n": fit.n}


def _curve_dict(curve: regress.LowessCurve) -> dict:
    return {
        "frac": curve.frac,
        "iterations": curve.iterations,
        "x": [float(v) for v in curve.x],
        "y": [float(v) for v in curve.y],
    }


class _Run:
    """Single pipeline execution; tracks written files for abort cleanup."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.out = Path(config.output_dir)
        self.art = RunArtifacts(config=config)

    # -- file helpers -------------------------------------------------

    def _register(self, name: str, path: Path) -> Path:
        self.art.files[name] = path
        return path

    def _cleanup(self) -> None:
        for path in self.art.files.values():
            try:
                path.unlink(missing_ok=True)
            except OSError:
                pass
        if self.art.manifest_path.exists():
            self.art.manifest_path.unlink()

    # -- stages --------------------------------------------------------

    def ingest(self) -> None:
        cfg = self.config
        if cfg.synthetic:
            ds = geodata.generate_synthetic(cfg.seed, cfg.n_points, cfg.n_buildings, cfg.n_zones)
            sdir = self.out / "synthetic"
            sdir.mkdir(parents=True, exist_ok=True)
            ppath = self._register("synthetic_points", sdir / "points.csv")
            bpath = self._register("synthetic_buildings", sdir / "buildings.geojson")
            npath = self._register("synthetic_neighborhoods", sdir / "neighborhoods.geojson")
            geodata.write_points_csv(ds.points, ppath)
            geodata.write_buildings_geojson(ds.buildings, bpath)
            geodata.write_neighborhoods_geojson(ds.neighborhoods, npath)
        else:
            ppath, bpath, npath = cfg.points, cfg.buildings, cfg.neighborhoods
        points, pstats = geodata.load_points(ppath)
        buildings, bstats = geodata.load_polygons(bpath, "buildings")
        neighborhoods, nstats = geodata.load_polygons(npath, "neighborhoods")
        self.art.dataset = geodata.assemble(points, buildings, neighborhoods)
        self.art.counts.update(
            points_loaded=pstats.n_loaded,
            points_skipped=pstats.n_skipped,
            buildings_loaded=bstats.n_loaded,
            buildings_excluded=bstats.n_excluded,
            buildings_skipped=bstats.n_skipped,
            neighborhoods_loaded=nstats.n_loaded,
            neighborhoods_skipped=nstats.n_skipped,
        )

    def interpolate(self) -> None:
        cfg = self.config
        ds = self.art.dataset
        interpolate.interpolate_buildings(ds, k=cfg.k, power=cfg.idw_power)
        gpath = self._register("buildings_scored_geojson", self.out / "buildings_scored.geojson")
        features = [
            {
                "type": "Feature",
                "geometry": {
                    "type": "Polygon",
                    "coordinates": geodata.polygon_coordinates(b.geometry),
                },
                "properties": {"id": b.id, "floors": b.floors, "qscore_interp": b.qscore_interp},
            }
            for b in ds.buildings
        ]
        geodata.dump_geojson(features, gpath)
        cpath = self._register("buildings_scored_csv", self.out / "buildings_scored.csv")
        with open(cpath, "w", encoding="utf-8") as fh:
            fh.write("id,floors,qscore_interp\n")
            for b in ds.buildings:
                fh.write(f"{b.id},{b.floors},{b.qscore_interp!r}\n")

    def aggregate(self) -> None:
        ds = self.art.dataset
        stats = regress.aggregate_neighborhoods(ds)
        self.art.counts.update(
            buildings_assigned=stats.assigned,
            buildings_spilled=stats.spilled,
            empty_neighborhoods=len(stats.empty_neighborhood_ids),
        )
        self.art.included_ids = [nb.id for nb in ds.neighborhoods if nb.building_count > 0]
        gpath = self._register("neighborhoods_scored", self.out / "neighborhoods_scored.geojson")
        features = [
            {
                "type": "Feature",
                "geometry": {
                    "type": "MultiPolygon",
                    "coordinates": geodata.multipolygon_coordinates(nb.geometry),
                },
                "properties": {
                    "id": nb.id,
                    "name": nb.name,
                    "mean_qscore": nb.mean_qscore,
                    "mean_floors": nb.mean_floors,
                    "building_count": nb.building_count,
                },
            }
            for nb in ds.neighborhoods
        ]
        geodata.dump_geojson(features, gpath)

    def _included(self):
        ds = self.art.dataset
        by_id = {nb.id: nb for nb in ds.neighborhoods}
        return [by_id[i] for i in self.art.included_ids]

    def voronoi(self) -> None:
        included = self._included()
        sites = np.asarray([[nb.centroid.x, nb.centroid.y] for nb in included])
        self.art.cells = geometry.voronoi(sites)
        origin = self.art.dataset.projection_origin
        vpath = self._register("voronoi", self.out / "voronoi.geojson")
        geodata.dump_geojson(
            [self._cell_feature(cell, {"site_id": included[cell.site_id].id}, origin) for cell in self.art.cells],
            vpath,
        )

    @staticmethod
    def _cell_feature(cell: VoronoiCell, props: dict, origin) -> dict:
        ring = cell.geometry.exterior
        lonlat = [list(geodata.unproject(float(x), float(y), origin)) for x, y in ring]
        return {
            "type": "Feature",
            "geometry": {"type": "Polygon", "coordinates": [lonlat]},
            "properties": props,
        }

    def weights(self) -> None:
        cells = self.art.cells
        w = weights_mod.queen_contiguity([c.geometry for c in cells])
        self.art.weights = weights_mod.row_standardize(w)
        wpath = self._register("weights_gal", self.out / "weights.gal")
        weights_mod.write_gal(w, wpath)

    def lisa(self) -> None:
        cfg = self.config
        included = self._included()
        values = [nb.mean_qscore for nb in included]
        results = lisa_mod.run_lisa(
            values, self.art.weights, n_perm=cfg.n_perm, alpha=cfg.alpha, seed=cfg.seed
        )
        self.art.lisa_results = results
        origin = self.art.dataset.projection_origin
        features = []
        for res, cell, nb in zip(results, self.art.cells, included):
            features.append(
                self._cell_feature(
                    cell,
                    {
                        "site_id": nb.id,
                        "name": nb.name,
                        "mean_qscore": nb.mean_qscore,
                        "z": res.z,
                        "lag": res.lag,
                        "local_i": res.local_i,
                        "expected_i": res.expected_i,
                        "pseudo_p": res.pseudo_p,
                        "cluster": res.cluster,
                    },
                    origin,
                )
            )
        gpath = self._register("lisa_geojson", self.out / "lisa.geojson")
        geodata.dump_geojson(features, gpath)
        cpath = self._register("lisa_csv", self.out / "lisa.csv")
        with open(cpath, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["observation_id", "neighborhood_id", "name", "z", "lag", "local_i", "expected_i", "pseudo_p", "cluster"]
            )
            for res, nb in zip(results, included):
                writer.writerow(
                    [res.observation_id, nb.id, nb.name, repr(res.z), repr(res.lag),
                     repr(res.local_i), repr(res.expected_i), repr(res.pseudo_p), res.cluster]
                )

    def regress(self) -> None:
        cfg = self.config
        ds = self.art.dataset
        floors = np.asarray([b.floors for b in ds.buildings], dtype=np.float64)
        scores = np.asarray([b.qscore_interp for b in ds.buildings], dtype=np.float64)
        b_overall = regress.ols(floors, scores)
        b_split = regress.split_regression(
            [b.floors for b in ds.buildings], scores, threshold=cfg.floor_threshold
        )
        b_curve = regress.lowess(floors, scores, frac=cfg.lowess_frac, iterations=cfg.lowess_iterations)

        included = self._included()
        report: dict = {
            "building": {
                "n": int(floors.shape[0]),
                "overall": _fit_dict(b_overall),
                "split": {
                    "threshold": b_split.threshold,
                    "low_share": b_split.low_share,
                    "low": _fit_dict(b_split.low),
                    "high": _fit_dict(b_split.high),
                },
                "lowess": _curve_dict(b_curve),
            }
        }
        n_curve = None
        if len(included) >= 3:
            nx = np.asarray([nb.mean_floors for nb in included])
            ny = np.asarray([nb.mean_qscore for nb in included])
            n_overall = regress.ols(nx, ny)
            n_curve = regress.lowess(nx, ny, frac=cfg.lowess_frac, iterations=cfg.lowess_iterations)
            report["neighborhood"] = {
                "n": int(nx.shape[0]),
                "overall": _fit_dict(n_overall),
                "lowess": _curve_dict(n_curve),
            }
        self.art.regression = report
        _write_json(report, self._register("regression", self.out / "regression.json"))
        bpath = self._register("lowess_building", self.out / "lowess_building.csv")
        with open(bpath, "w", encoding="utf-8") as fh:
            fh.write("x,y_smooth\n")
            for x, y in zip(b_curve.x, b_curve.y):
                fh.write(f"{float(x)!r},{float(y)!r}\n")
        if n_curve is not None:
            npath = self._register("lowess_neighborhood", self.out / "lowess_neighborhood.csv")
            with open(npath, "w", encoding="utf-8") as fh:
                fh.write("x,y_smooth\n")
                for x, y in zip(n_curve.x, n_curve.y):
                    fh.write(f"{float(x)!r},{float(y)!r}\n")

    # -- driver ---------------------------------------------------------

    def execute(self, stages: tuple[str, ...]) -> RunArtifacts:
        self.out.mkdir(parents=True, exist_ok=True)
        handlers = {
            "ingest": self.ingest,
            "interpolate": self.interpolate,
            "aggregate": self.aggregate,
            "voronoi": self.voronoi,
            "weights": self.weights,
            "lisa": self.lisa,
            "regress": self.regress,
        }
        try:
            for stage in STAGES:
                if stage not in stages:
                    continue
                try:
                    handlers[stage]()
                except StageError:
                    raise
                except Exception as exc:
                    raise StageError(stage, exc) from exc
                self.art.stages_run.append(stage)
            self._write_manifest()
        except Exception:
            self._cleanup()
            raise
        return self.art

    def _write_manifest(self) -> None:
        manifest = {
            "config": self.config.to_dict(),
            "stages": self.art.stages_run,
            "counts": self.art.counts,
            "included_neighborhood_ids": self.art.included_ids,
            "artifacts": {
                name: {
                    "path": str(path.relative_to(self.out)),
                    "sha256": _sha256(path),
                }
                for name, path in sorted(self.art.files.items())
            },
        }
        self.art.manifest = manifest
        _write_json(manifest, self.art.manifest_path)


def stages_until(last: str) -> tuple[str, ...]:
    if last not in STAGES:
        raise ValueError(f"unknown stage {last!r}")
    return STAGES[: STAGES.index(last) + 1]


def run_pipeline(config: PipelineConfig, stages: tuple[str, ...] | None = None) -> RunArtifacts:
    """Run the requested stages (default: all) in the fixed order."""
    config.validate()
    run = _Run(config)
    return run.execute(tuple(stages) if stages else STAGES)
