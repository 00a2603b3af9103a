"""Read-only HTTP service over a finished run's artifacts.

Every endpoint is a pure projection of the persisted files (loaded once at
startup, never recomputed) so concurrent reads are trivially safe.  The
linked-brushing viewer consumes exactly these routes; when a built UI
directory is supplied it is mounted at the web root.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

DEFAULT_PORT = 8765


class ArtifactsMissing(RuntimeError):
    pass


def _read_json(path: Path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_artifacts(artifact_dir) -> dict:
    """Pull the artifact set into memory; missing pieces are fatal."""
    root = Path(artifact_dir)
    manifest_path = root / "manifest.json"
    if not manifest_path.exists():
        raise ArtifactsMissing(f"{root}: no manifest.json; run the pipeline first")
    manifest = _read_json(manifest_path)
    required = {
        "buildings_scored_geojson": "buildings_scored.geojson",
        "buildings_scored_csv": "buildings_scored.csv",
        "neighborhoods_scored": "neighborhoods_scored.geojson",
        "lisa_geojson": "lisa.geojson",
        "regression": "regression.json",
    }
    data: dict = {"manifest": manifest}
    for key, fallback in required.items():
        rel = manifest.get("artifacts", {}).get(key, {}).get("path", fallback)
        path = root / rel
        if not path.exists():
            raise ArtifactsMissing(f"{root}: missing artifact {rel}")
        data[key] = path
    data["buildings_geojson"] = _read_json(data["buildings_scored_geojson"])
    data["neighborhoods_geojson"] = _read_json(data["neighborhoods_scored"])
    data["lisa"] = _read_json(data["lisa_geojson"])
    data["regression_report"] = _read_json(data["regression"])
    scatter_building = []
    with open(data["buildings_scored_csv"], newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            scatter_building.append(
                {
                    "id": int(row["id"]),
                    "floors": int(row["floors"]),
                    "qscore_interp": float(row["qscore_interp"]),
                }
            )
    data["scatter_building"] = scatter_building
    scatter_neighborhood = []
    for feature in data["neighborhoods_geojson"]["features"]:
        props = feature["properties"]
        if props.get("mean_qscore") is None:
            continue
        scatter_neighborhood.append(
            {
                "id": props["id"],
                "name": props["name"],
                "mean_floors": props["mean_floors"],
                "mean_qscore": props["mean_qscore"],
            }
        )
    data["scatter_neighborhood"] = scatter_neighborhood
    return data


def create_app(artifact_dir, ui_dir=None) -> FastAPI:
    data = load_artifacts(artifact_dir)
    app = FastAPI(title="qscape artifact service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/scatter")
    def scatter(granularity: str = "building"):
        if granularity == "building":
            return data["scatter_building"]
        if granularity == "neighborhood":
            return data["scatter_neighborhood"]
        raise HTTPException(status_code=400, detail=f"unknown granularity {granularity!r}")

    @app.get("/api/map/buildings")
    def map_buildings():
        return data["buildings_geojson"]

    @app.get("/api/map/neighborhoods")
    def map_neighborhoods():
        return data["neighborhoods_geojson"]

    @app.get("/api/lisa")
    def lisa_layer():
        return data["lisa"]

    @app.get("/api/regression")
    def regression():
        return data["regression_report"]

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app


def serve(artifact_dir, port: int = DEFAULT_PORT, host: str = "127.0.0.1", ui_dir=None) -> None:
    import uvicorn

    app = create_app(artifact_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
