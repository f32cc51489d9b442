"""Unit rhombus geometry and lattice placement of the four endpoint cases.

The canonical lattice uses the side vectors a = (1, 0) and
b = (1/2, sqrt(3)/2), so four rhombuses at offsets (0,0), (1,0), (0,1),
(1,1) tile a rhombus of side 2 with the same orientation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

SQRT3 = math.sqrt(3.0)
THETA = math.pi / 3.0


class AdjacencyCase(enum.Enum):
    """Where the two endpoints live relative to each other."""

    WITHIN = "within"
    PARALLEL = "parallel"
    LONGDIAG = "longdiag"
    SHORTDIAG = "shortdiag"

    @classmethod
    def parse(cls, name: str | AdjacencyCase) -> AdjacencyCase:
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "").replace("_", "")
        for case in cls:
            if case.value == key:
                return case
        raise ValueError(f"unknown adjacency case: {name!r}")


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("point coordinates must be finite")

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> Point2:
        return Point2(k * self.x, k * self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


BASIS_A = Point2(1.0, 0.0)
BASIS_B = Point2(0.5, SQRT3 / 2.0)


@dataclass(frozen=True)
class RhombusPose:
    """A rhombus ``origin + side * (u*basis_a + v*basis_b)``, u, v in [0, 1]."""

    origin: Point2
    basis_a: Point2 = BASIS_A
    basis_b: Point2 = BASIS_B
    side: float = 1.0

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError(f"side length must be positive, got {self.side}")
        if abs(self.basis_a.norm() - 1.0) > 1e-12 or abs(self.basis_b.norm() - 1.0) > 1e-12:
            raise ValueError("basis vectors must have unit length")
        cos_angle = self.basis_a.x * self.basis_b.x + self.basis_a.y * self.basis_b.y
        if abs(math.acos(max(-1.0, min(1.0, cos_angle))) - THETA) > 1e-12:
            raise ValueError("basis vectors must meet at an angle of pi/3")

    def vertices(self) -> list[Point2]:
        """Corners in counter-clockwise order starting at the origin."""
        a = self.basis_a.scaled(self.side)
        b = self.basis_b.scaled(self.side)
        o = self.origin
        return [o, o + a, o + a + b, o + b]

    @property
    def area(self) -> float:
        return self.side ** 2 * math.sin(THETA)


# lattice offsets (in units of a, b) of the two rhombuses holding the endpoints
_OFFSETS = {
    AdjacencyCase.WITHIN: ((0, 0), (0, 0)),
    AdjacencyCase.PARALLEL: ((0, 0), (1, 0)),
    AdjacencyCase.LONGDIAG: ((0, 0), (1, 1)),
    AdjacencyCase.SHORTDIAG: ((1, 0), (0, 1)),
}


def _pose_at(i: int, j: int, s: float) -> RhombusPose:
    origin = BASIS_A.scaled(i * s) + BASIS_B.scaled(j * s)
    return RhombusPose(origin=origin, side=s)


def lattice_poses(case: AdjacencyCase | str, s: float = 1.0) -> tuple[RhombusPose, RhombusPose]:
    """Poses of the two rhombuses that hold the endpoints for ``case``."""
    case = AdjacencyCase.parse(case)
    if not s > 0:
        raise ValueError(f"side length must be positive, got {s}")
    (i1, j1), (i2, j2) = _OFFSETS[case]
    return _pose_at(i1, j1, s), _pose_at(i2, j2, s)


def translated_pose(pose: RhombusPose, offset: Point2) -> RhombusPose:
    return RhombusPose(pose.origin + offset, pose.basis_a, pose.basis_b, pose.side)


def sample_point(pose: RhombusPose, u: float, v: float) -> Point2:
    """Map (u, v) in the unit square affinely onto the rhombus.

    Independent uniform u, v give a uniform point in the rhombus.
    """
    if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
        raise ValueError(f"u and v must lie in [0, 1], got ({u}, {v})")
    s = pose.side
    return Point2(
        pose.origin.x + s * (u * pose.basis_a.x + v * pose.basis_b.x),
        pose.origin.y + s * (u * pose.basis_a.y + v * pose.basis_b.y),
    )


def sample_points(pose: RhombusPose, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized :func:`sample_point`; returns an ``(n, 2)`` array."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.size and (u.min() < 0 or u.max() > 1 or v.min() < 0 or v.max() > 1):
        raise ValueError("u and v must lie in [0, 1]")
    s = pose.side
    x = pose.origin.x + s * (u * pose.basis_a.x + v * pose.basis_b.x)
    y = pose.origin.y + s * (u * pose.basis_a.y + v * pose.basis_b.y)
    return np.stack([x, y], axis=-1)


def boundary_points(pose: RhombusPose, per_side: int) -> np.ndarray:
    """Points evenly spaced along the rhombus boundary, corners included."""
    verts = pose.vertices()
    t = np.linspace(0.0, 1.0, per_side, endpoint=False)
    pieces = []
    for k in range(4):
        p, q = verts[k], verts[(k + 1) % 4]
        pieces.append(np.stack([p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)], axis=-1))
    return np.concatenate(pieces)


def max_separation(first: RhombusPose, second: RhombusPose, per_side: int = 200) -> float:
    """Largest distance between a point of ``first`` and a point of ``second``.

    Distance is convex, so the maximum is attained on the boundaries.
    """
    p = boundary_points(first, per_side)
    q = boundary_points(second, per_side)
    diff = p[:, None, :] - q[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=-1)).max())
