"""Observation windows and finite point configurations."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Shape", "Window", "PointConfiguration", "write_points_csv", "read_points_csv"]


class Shape(str, enum.Enum):
    INTERVAL = "interval"
    RECT = "rect"
    DISK = "disk"


@dataclass(frozen=True)
class Window:
    """Interval ``(a, b)``, rectangle ``(ax, bx, ay, by)`` or disk ``(cx, cy, radius)``.

    Degenerate (zero-volume) windows can be constructed; samplers that need
    positive volume reject them.
    """

    shape: Shape
    params: tuple[float, ...]

    def __post_init__(self):
        shape = Shape(self.shape)
        object.__setattr__(self, "shape", shape)
        params = tuple(float(v) for v in self.params)
        object.__setattr__(self, "params", params)
        expected = {Shape.INTERVAL: 2, Shape.RECT: 4, Shape.DISK: 3}[shape]
        if len(params) != expected:
            raise ValueError(f"{shape.value} window takes {expected} parameters, got {len(params)}")
        if not all(math.isfinite(v) for v in params):
            raise ValueError("window parameters must be finite")
        if shape is Shape.INTERVAL and params[1] < params[0]:
            raise ValueError("interval needs a <= b")
        if shape is Shape.RECT and (params[1] < params[0] or params[3] < params[2]):
            raise ValueError("rectangle needs ax <= bx and ay <= by")
        if shape is Shape.DISK and params[2] < 0:
            raise ValueError("disk radius must be non-negative")

    @classmethod
    def interval(cls, a: float, b: float) -> "Window":
        return cls(Shape.INTERVAL, (a, b))

    @classmethod
    def rect(cls, ax: float, bx: float, ay: float, by: float) -> "Window":
        return cls(Shape.RECT, (ax, bx, ay, by))

    @classmethod
    def disk(cls, radius: float, center=(0.0, 0.0)) -> "Window":
        return cls(Shape.DISK, (center[0], center[1], radius))

    @classmethod
    def parse(cls, text: str) -> "Window":
        """``interval:a,b``, ``rect:ax,bx,ay,by`` or ``disk:r[,cx,cy]``."""
        kind, _, rest = text.partition(":")
        values = [float(v) for v in rest.split(",") if v.strip()]
        kind = kind.strip().lower()
        if kind == "disk":
            if len(values) == 1:
                return cls.disk(values[0])
            if len(values) == 3:
                return cls.disk(values[0], (values[1], values[2]))
            raise ValueError("disk window is 'disk:r' or 'disk:r,cx,cy'")
        return cls(Shape(kind), tuple(values))

    def describe(self) -> str:
        if self.shape is Shape.DISK:
            cx, cy, r = self.params
            return f"disk:{r:.17g},{cx:.17g},{cy:.17g}"
        return f"{self.shape.value}:" + ",".join(f"{v:.17g}" for v in self.params)

    @property
    def dimension(self) -> int:
        return 1 if self.shape is Shape.INTERVAL else 2

    @property
    def volume(self) -> float:
        p = self.params
        if self.shape is Shape.INTERVAL:
            return p[1] - p[0]
        if self.shape is Shape.RECT:
            return (p[1] - p[0]) * (p[3] - p[2])
        return math.pi * p[2] ** 2

    @property
    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower corner and side lengths of the smallest enclosing box."""
        p = self.params
        if self.shape is Shape.INTERVAL:
            return np.array([p[0]]), np.array([p[1] - p[0]])
        if self.shape is Shape.RECT:
            return np.array([p[0], p[2]]), np.array([p[1] - p[0], p[3] - p[2]])
        return np.array([p[0] - p[2], p[1] - p[2]]), np.array([2.0 * p[2], 2.0 * p[2]])

    @property
    def diameter(self) -> float:
        _, sides = self.bounding_box
        if self.shape is Shape.DISK:
            return 2.0 * self.params[2]
        return float(np.sqrt(np.sum(sides**2)))

    @property
    def inradius(self) -> float:
        _, sides = self.bounding_box
        return float(np.min(sides)) / 2.0

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, self.dimension)
        p = self.params
        if self.shape is Shape.INTERVAL:
            return (pts[:, 0] >= p[0]) & (pts[:, 0] <= p[1])
        if self.shape is Shape.RECT:
            return (pts[:, 0] >= p[0]) & (pts[:, 0] <= p[1]) & (pts[:, 1] >= p[2]) & (pts[:, 1] <= p[3])
        return (pts[:, 0] - p[0]) ** 2 + (pts[:, 1] - p[1]) ** 2 <= p[2] ** 2

    def set_covariance(self, h) -> np.ndarray:
        """``|W ∩ (W + h)|`` for displacement vectors ``h`` of shape (..., d)."""
        h = np.abs(np.asarray(h, dtype=float))
        _, sides = self.bounding_box
        if self.shape is Shape.DISK:
            r = np.sqrt(np.sum(h * h, axis=-1)) if h.ndim and h.shape[-1] == 2 else h
            radius = self.params[2]
            r = np.minimum(r, 2.0 * radius)
            return 2.0 * radius**2 * np.arccos(r / (2.0 * radius)) - 0.5 * r * np.sqrt(4.0 * radius**2 - r * r)
        if self.dimension == 1:
            h = h[..., 0] if h.ndim and h.shape[-1] == 1 else h
            return np.maximum(sides[0] - h, 0.0)
        return np.prod(np.maximum(sides - h, 0.0), axis=-1)

    def uniform(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """``count`` i.i.d. uniform points in the window."""
        if self.shape is Shape.DISK:
            cx, cy, radius = self.params
            rad = radius * np.sqrt(rng.random(count))
            ang = 2.0 * np.pi * rng.random(count)
            return np.column_stack([cx + rad * np.cos(ang), cy + rad * np.sin(ang)])
        lower, sides = self.bounding_box
        return lower + sides * rng.random((count, self.dimension))


@dataclass(frozen=True)
class PointConfiguration:
    dimension: int
    window: Window
    points: np.ndarray = field(repr=False)
    seed: int
    process_label: str

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, self.dimension)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.window.dimension != self.dimension:
            raise ValueError("window dimension does not match the configuration")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def count(self) -> int:
        return len(self.points)

    def is_simple(self, tol: float = 1e-12) -> bool:
        if len(self.points) < 2:
            return True
        if self.dimension == 1:
            return bool(np.min(np.diff(np.sort(self.points[:, 0]))) > tol)
        from scipy.spatial import cKDTree

        return not cKDTree(self.points).query_pairs(tol)

    def header(self) -> str:
        return f"# process={self.process_label} seed={self.seed} window={self.window.describe()}"


def write_points_csv(config: PointConfiguration, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(config.header() + "\n")
        fh.write("x\n" if config.dimension == 1 else "x,y\n")
        for row in config.points:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_points_csv(path) -> PointConfiguration:
    with open(path, encoding="ascii") as fh:
        header = fh.readline().strip()
        columns = fh.readline().strip().split(",")
        rows = [[float(v) for v in line.split(",")] for line in fh if line.strip()]
    meta = dict(item.split("=", 1) for item in header.lstrip("# ").split(" "))
    d = len(columns)
    return PointConfiguration(
        dimension=d,
        window=Window.parse(meta["window"]),
        points=np.asarray(rows, dtype=float).reshape(-1, d),
        seed=int(meta["seed"]),
        process_label=meta["process"],
    )
