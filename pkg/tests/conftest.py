import math

import numpy as np
import pytest

from core.geometry.clipping import HalfPlane
from core.geometry.constant_width import reuleaux_polygon
from core.geometry.curves import DiskCurve, PointCurve, PolygonCurve
from core.geometry.partition import FaceLabel, build_partition
from core.geometry.quadrature import QuadratureSpec

SQRT2 = math.sqrt(2.0)


def x_at_most(x: float) -> HalfPlane:
    return HalfPlane.left_of((x, 0.0), (x, 1.0))


def x_at_least(x: float) -> HalfPlane:
    return HalfPlane.left_of((x, 1.0), (x, 0.0))


def y_at_most(y: float) -> HalfPlane:
    return HalfPlane.left_of((1.0, y), (0.0, y))


def y_at_least(y: float) -> HalfPlane:
    return HalfPlane.left_of((0.0, y), (1.0, y))


@pytest.fixture
def unit_square():
    return PolygonCurve([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def unit_disk():
    return DiskCurve((0.0, 0.0), 1.0)


@pytest.fixture
def origin():
    return PointCurve((0.0, 0.0))


@pytest.fixture
def reuleaux_triangle():
    return reuleaux_polygon(3, 1.0)


@pytest.fixture
def exact():
    return QuadratureSpec(method='exact')


@pytest.fixture
def square_split(unit_square):
    """Unit square cut by x = 0.5."""
    return build_partition(unit_square, [([x_at_most(0.5)], FaceLabel.BODY),
                                         ([x_at_least(0.5)], FaceLabel.BODY)])


@pytest.fixture
def grid_partition():
    """[0, 2]^2 cut into four unit squares meeting at (1, 1)."""
    square = PolygonCurve([(0, 0), (2, 0), (2, 2), (0, 2)])
    regions = [([x_at_most(1.0), y_at_most(1.0)], FaceLabel.BODY),
               ([x_at_least(1.0), y_at_most(1.0)], FaceLabel.BODY),
               ([x_at_least(1.0), y_at_least(1.0)], FaceLabel.BODY),
               ([x_at_most(1.0), y_at_least(1.0)], FaceLabel.BODY)]
    return build_partition(square, regions)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
