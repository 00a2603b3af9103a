from __future__ import annotations

import numpy as np
import pytest

from qscape.geometry import Polygon


def square(x: float, y: float, side: float = 1.0) -> Polygon:
    ring = np.array(
        [[x, y], [x + side, y], [x + side, y + side], [x, y + side], [x, y]],
        dtype=np.float64,
    )
    return Polygon(exterior=ring)


@pytest.fixture(scope="session")
def concave_polygon() -> Polygon:
    # non-convex test shape: an L with a notch
    ring = np.array(
        [
            [0.0, 0.0],
            [4.0, 0.0],
            [4.0, 1.0],
            [2.0, 1.0],
            [2.0, 2.0],
            [3.0, 2.0],
            [3.0, 3.0],
            [0.0, 3.0],
            [0.0, 0.0],
        ]
    )
    return Polygon(exterior=ring)


@pytest.fixture(scope="session")
def small_dataset():
    from qscape.geodata import generate_synthetic

    return generate_synthetic(seed=11, n_points=2500, n_buildings=800, n_zones=25)
