"""Command line interface.

Verbs: ``run`` (full pipeline), ``synth`` (write synthetic input files),
``interpolate`` / ``lisa`` / ``regress`` (partial pipelines through the
named stage), and ``serve`` (HTTP service over a finished run).  Options
given as flags override the config file.  Exit codes: 0 success, 1 config
error, 2 stage failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import geodata
from .pipeline import (
    ConfigError,
    PipelineConfig,
    StageError,
    apply_overrides,
    load_config,
    run_pipeline,
    stages_until,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_STAGE = 2

log = logging.getLogger("qscape")


def _add_config_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--points", help="score points CSV (lon,lat,qscore)")
    p.add_argument("--buildings", help="building footprints GeoJSON")
    p.add_argument("--neighborhoods", help="neighborhood areas GeoJSON")
    p.add_argument("--synthetic", action="store_const", const=True, default=None,
                   help="generate the bundled synthetic dataset instead of reading files")
    p.add_argument("--n-points", type=int, dest="n_points")
    p.add_argument("--n-buildings", type=int, dest="n_buildings")
    p.add_argument("--n-zones", type=int, dest="n_zones")
    p.add_argument("--k", type=int, help="neighbors per interpolation query (default 30)")
    p.add_argument("--idw-power", type=float, dest="idw_power")
    p.add_argument("--floor-threshold", type=int, dest="floor_threshold")
    p.add_argument("--n-perm", type=int, dest="n_perm")
    p.add_argument("--alpha", type=float)
    p.add_argument("--lowess-frac", type=float, dest="lowess_frac")
    p.add_argument("--lowess-iterations", type=int, dest="lowess_iterations")
    p.add_argument("--seed", type=int)
    p.add_argument("--output-dir", dest="output_dir")


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    config = load_config(args.config) if args.config else PipelineConfig()
    overrides = {
        key: getattr(args, key, None)
        for key in (
            "points", "buildings", "neighborhoods", "synthetic",
            "n_points", "n_buildings", "n_zones", "k", "idw_power",
            "floor_threshold", "n_perm", "alpha", "lowess_frac",
            "lowess_iterations", "seed", "output_dir",
        )
    }
    return apply_overrides(config, overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esda",
        description="Interpolate safety scores onto buildings, cluster neighborhoods, "
        "and fit height-score regressions.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for verb, help_text in (
        ("run", "full pipeline: ingest through regressions"),
        ("interpolate", "stop after scoring buildings"),
        ("lisa", "stop after the cluster stage"),
        ("regress", "interpolate, aggregate, and fit regressions"),
    ):
        p = sub.add_parser(verb, help=help_text)
        _add_config_options(p)

    p = sub.add_parser("synth", help="write synthetic input files and exit")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-points", type=int, dest="n_points", default=30000)
    p.add_argument("--n-buildings", type=int, dest="n_buildings", default=8000)
    p.add_argument("--n-zones", type=int, dest="n_zones", default=100)
    p.add_argument("--output-dir", dest="output_dir", default="synthetic-data")

    p = sub.add_parser("serve", help="serve artifacts over HTTP")
    p.add_argument("--artifacts", default="esda-run", help="output_dir of a finished run")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", help="built frontend directory to mount at /")
    return parser


_VERB_STAGE = {"interpolate": "interpolate", "lisa": "lisa", "regress": "regress"}


def _cmd_pipeline(args: argparse.Namespace) -> int:
    config = _build_config(args)
    if args.command == "run":
        stages = None
    elif args.command == "regress":
        stages = ("ingest", "interpolate", "aggregate", "regress")
    else:
        stages = stages_until(_VERB_STAGE[args.command])
    artifacts = run_pipeline(config, stages=stages)
    counts = artifacts.counts
    log.info("stages: %s", " -> ".join(artifacts.stages_run))
    for key in sorted(counts):
        log.info("%s: %s", key, counts[key])
    print(f"wrote {len(artifacts.files)} artifacts + manifest to {config.output_dir}")
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace) -> int:
    ds = geodata.generate_synthetic(args.seed, args.n_points, args.n_buildings, args.n_zones)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    geodata.write_points_csv(ds.points, out / "points.csv")
    geodata.write_buildings_geojson(ds.buildings, out / "buildings.geojson")
    geodata.write_neighborhoods_geojson(ds.neighborhoods, out / "neighborhoods.geojson")
    print(f"wrote points.csv, buildings.geojson, neighborhoods.geojson to {out}")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve

    serve(args.artifacts, port=args.port, host=args.host, ui_dir=args.ui)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "serve":
            return _cmd_serve(args)
        return _cmd_pipeline(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except ValueError as exc:  # bad values reaching library code directly
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # unexpected: treat as stage-level failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
