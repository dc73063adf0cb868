"""Landmark time series: loading, first-extremum search, initial frame, distances.

Landmark files are JSON::

    {"topology": "body33" | "hand21", "fps": 25, "width": 640, "height": 480,
     "frames": [{"i": 0, "p": [[x, y, z, visibility], ...]}, ...]}

``x`` and ``y`` are normalized image coordinates; they are scaled to pixels
only when distances are computed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    FrameOutOfRange,
    LandmarkNotVisible,
    NoExtremumFound,
    RoleUnresolved,
    SchemaError,
    TooShort,
    TopologyMismatch,
)

TOPOLOGY_SIZES = {"body33": 33, "hand21": 21}

HAND_LANDMARKS = ("wrist", "thumb_cmc", "thumb_mcp")
AXES = ("x", "y")


class Hand(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class Norm(str, Enum):
    L1 = "L1"
    L2 = "L2"


@dataclass(frozen=True)
class LandmarkSeries:
    """Per-video landmark track.

    ``frame_index`` has shape (n,); ``points`` has shape (n, k, 4) holding
    x, y, z and visibility for each of the k landmarks.
    """

    topology: str
    fps: float
    width: int
    height: int
    frame_index: np.ndarray
    points: np.ndarray

    @property
    def n_frames(self) -> int:
        return len(self.frame_index)

    @property
    def n_points(self) -> int:
        return self.points.shape[1]

    def position(self, frame: int) -> int:
        """Array row holding frame number ``frame``."""
        pos = int(np.searchsorted(self.frame_index, frame))
        if pos >= len(self.frame_index) or self.frame_index[pos] != frame:
            raise FrameOutOfRange(f"frame {frame} not in series "
                                  f"({self.frame_index[0] if self.n_frames else '-'}"
                                  f"..{self.frame_index[-1] if self.n_frames else '-'})")
        return pos

    def to_json(self) -> dict:
        return {
            "topology": self.topology,
            "fps": self.fps,
            "width": self.width,
            "height": self.height,
            "frames": [
                {"i": int(i), "p": [[float(v) for v in pt] for pt in pts]}
                for i, pts in zip(self.frame_index, self.points)
            ],
        }


def _number(value, what: str, frame=None) -> float:
    where = f" (frame {frame})" if frame is not None else ""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{what}{where} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise SchemaError(f"{what}{where} must be finite")
    return float(value)


def series_from_json(data: dict) -> LandmarkSeries:
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object")
    for key in ("topology", "fps", "width", "height", "frames"):
        if key not in data:
            raise SchemaError(f"missing field {key!r}")
    topology = data["topology"]
    if topology not in TOPOLOGY_SIZES:
        raise SchemaError(f"topology must be one of {sorted(TOPOLOGY_SIZES)}, got {topology!r}")
    n_points = TOPOLOGY_SIZES[topology]
    fps = _number(data["fps"], "fps")
    width = _number(data["width"], "width")
    height = _number(data["height"], "height")
    if fps <= 0 or width <= 0 or height <= 0:
        raise SchemaError("fps, width and height must be positive")
    frames = data["frames"]
    if not isinstance(frames, list):
        raise SchemaError("'frames' must be a list")

    index = np.empty(len(frames), dtype=np.int64)
    points = np.empty((len(frames), n_points, 4), dtype=np.float64)
    prev = None
    for row, frame in enumerate(frames):
        if not isinstance(frame, dict) or "i" not in frame or "p" not in frame:
            raise SchemaError(f"frame #{row} needs fields 'i' and 'p'")
        i = frame["i"]
        if isinstance(i, bool) or not isinstance(i, int):
            raise SchemaError(f"field 'i' of frame #{row} must be an integer")
        if prev is not None and i <= prev:
            raise SchemaError(f"field 'i' not strictly increasing at frame {i} (after {prev})")
        prev = i
        pts = frame["p"]
        if not isinstance(pts, list):
            raise SchemaError(f"field 'p' of frame {i} must be a list")
        if len(pts) != n_points:
            raise TopologyMismatch(f"frame {i} has {len(pts)} points, {topology} needs {n_points}")
        for k, pt in enumerate(pts):
            if not isinstance(pt, list) or len(pt) != 4:
                raise SchemaError(f"field 'p[{k}]' of frame {i} must be [x, y, z, visibility]")
            points[row, k] = [_number(v, f"p[{k}]", i) for v in pt]
        index[row] = i
    vis = points[:, :, 3]
    if vis.size and (vis.min() < 0 or vis.max() > 1):
        raise SchemaError("visibility must lie in [0, 1]")
    return LandmarkSeries(topology, fps, int(width), int(height), index, points)


def load_landmark_series(path) -> LandmarkSeries:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None
    return series_from_json(data)


def save_landmark_series(series: LandmarkSeries, path) -> None:
    Path(path).write_text(json.dumps(series.to_json()), encoding="utf-8")


# -- configuration -----------------------------------------------------------

ROLES = (
    "nose",
    "left_wrist", "right_wrist",
    "left_thumb_cmc", "right_thumb_cmc",
    "left_thumb_mcp", "right_thumb_mcp",
)


@dataclass(frozen=True)
class TopologyConfig:
    """Landmark roles and detector parameters.

    A role mapped to ``None`` is unavailable in the topology.
    """

    topology: str
    roles: dict[str, int | None]
    v_min: float = 0.5
    window: int = 1
    #: landmark standing for the hand's position in distance measurements
    hand_point: str = "wrist"

    def __post_init__(self):
        if self.topology not in TOPOLOGY_SIZES:
            raise ValueError(f"unknown topology {self.topology!r}")
        if not 0 <= self.v_min <= 1:
            raise ValueError("v_min must lie in [0, 1]")
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError("smoothing window must be a positive odd integer")
        if self.hand_point not in HAND_LANDMARKS:
            raise ValueError(f"hand_point must be one of {HAND_LANDMARKS}")
        size = TOPOLOGY_SIZES[self.topology]
        for role, idx in self.roles.items():
            if role not in ROLES:
                raise ValueError(f"unknown role {role!r}")
            if idx is not None and not 0 <= idx < size:
                raise ValueError(f"role {role} index {idx} outside 0..{size - 1}")

    def index(self, role: str) -> int:
        idx = self.roles.get(role)
        if idx is None:
            raise RoleUnresolved(f"role {role!r} is not mapped for {self.topology}")
        return idx

    def with_params(self, v_min: float | None = None, window: int | None = None) -> "TopologyConfig":
        return replace(self,
                       v_min=self.v_min if v_min is None else v_min,
                       window=self.window if window is None else window)

    @classmethod
    def default(cls, topology: str = "body33") -> "TopologyConfig":
        return cls(topology, dict(DEFAULT_ROLES[topology]))

    @classmethod
    def from_json(cls, data: dict) -> "TopologyConfig":
        topology = data.get("topology", "body33")
        roles = dict(DEFAULT_ROLES.get(topology, {}))
        roles.update(data.get("roles", {}))
        return cls(topology, roles, float(data.get("v_min", 0.5)), int(data.get("window", 1)),
                   data.get("hand_point", "wrist"))

    @classmethod
    def load(cls, path) -> "TopologyConfig":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


# Body33 has a single thumb point per hand; it stands in for the CMC joint.
DEFAULT_ROLES = {
    "body33": {
        "nose": 0,
        "left_wrist": 15, "right_wrist": 16,
        "left_thumb_cmc": 21, "right_thumb_cmc": 22,
        "left_thumb_mcp": None, "right_thumb_mcp": None,
    },
    "hand21": {
        "nose": None,
        "left_wrist": 0, "right_wrist": 0,
        "left_thumb_cmc": 1, "right_thumb_cmc": 1,
        "left_thumb_mcp": 2, "right_thumb_mcp": 2,
    },
}


def config_for(series: LandmarkSeries, cfg: TopologyConfig | None) -> TopologyConfig:
    """``cfg`` if it matches the series topology, else that topology's defaults."""
    if cfg is not None and cfg.topology == series.topology:
        return cfg
    base = TopologyConfig.default(series.topology)
    if cfg is None:
        return base
    return replace(base, v_min=cfg.v_min, window=cfg.window, hand_point=cfg.hand_point)


# -- extrema -----------------------------------------------------------------

def smooth(values: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average; edges are padded with the end values."""
    values = np.asarray(values, dtype=float)
    if window == 1:
        return values.copy()
    half = window // 2
    padded = np.pad(values, half, mode="edge")
    return np.convolve(padded, np.ones(window) / window, mode="valid")


def _first_extrema(values: np.ndarray) -> tuple[int | None, int | None]:
    """Positions of the first interior local maximum and minimum.

    Runs of equal values count as one sample located at the run start.
    """
    n = len(values)
    if n < 3:
        return None, None
    change = np.flatnonzero(values[1:] != values[:-1]) + 1
    starts = np.concatenate(([0], change))
    run_vals = values[starts]
    if len(run_vals) < 3:
        return None, None
    left, mid, right = run_vals[:-2], run_vals[1:-1], run_vals[2:]
    maxima = np.flatnonzero((mid > left) & (mid > right))
    minima = np.flatnonzero((mid < left) & (mid < right))
    first_max = int(starts[maxima[0] + 1]) if len(maxima) else None
    first_min = int(starts[minima[0] + 1]) if len(minima) else None
    return first_max, first_min


def _as_signal(signal) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(signal, dtype=float)
    if arr.ndim == 1:
        return np.arange(len(arr)), arr
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("signal must be a sequence of values or of (frame, value) pairs")
    return arr[:, 0].astype(np.int64), arr[:, 1]


def first_local_extremum(signal, window: int = 1) -> int | None:
    """Frame of the earliest interior local extremum (maximum or minimum).

    Parameters
    ----------
    signal : sequence of (frame, value) pairs, or of plain values
        Samples in frame order; plain values are numbered from 0.
    window : int
        Width of the centered moving average applied first (odd, 1 = none).

    Returns
    -------
    int or None
        Frame of the extremum, or None if the signal has none.
    """
    frames, values = _as_signal(signal)
    if len(values) < 3:
        raise TooShort(f"need at least 3 samples, got {len(values)}")
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be a positive odd integer")
    first_max, first_min = _first_extrema(smooth(values, window))
    found = [p for p in (first_max, first_min) if p is not None]
    return int(frames[min(found)]) if found else None


def first_local_maximum_and_minimum(signal, window: int = 1) -> tuple[int | None, int | None]:
    """Frames of the first local maximum and of the first local minimum."""
    frames, values = _as_signal(signal)
    if len(values) < 3:
        raise TooShort(f"need at least 3 samples, got {len(values)}")
    first_max, first_min = _first_extrema(smooth(values, window))
    return (None if first_max is None else int(frames[first_max]),
            None if first_min is None else int(frames[first_min]))


def lower_median(values: Sequence[int]) -> int:
    """Element ``ceil(n/2) - 1`` of the sorted values."""
    if not values:
        raise ValueError("lower_median of empty sequence")
    ordered = sorted(values)
    return ordered[(len(ordered) + 1) // 2 - 1]


@dataclass(frozen=True)
class Candidate:
    landmark: str
    axis: str
    kind: str  # "max" or "min"
    frame: int


@dataclass(frozen=True)
class InitialFrameResult:
    hand: Hand
    chosen: int
    candidates: tuple[Candidate, ...]
    diagnostics: tuple[str, ...] = ()
    interpretation: str = field(
        default="first local maximum and first local minimum of x and y per landmark"
    )

    @property
    def frames(self) -> list[int]:
        return sorted(c.frame for c in self.candidates)


def detect_initial_frame(series: LandmarkSeries, cfg: TopologyConfig | None = None,
                         hand: Hand | str = Hand.RIGHT) -> InitialFrameResult:
    """Pick the frame of the signer's initial configuration for one hand.

    For the wrist, thumb CMC and thumb MCP of ``hand`` the x and y
    trajectories are searched (after dropping samples with visibility below
    ``cfg.v_min``) for their first local maximum and first local minimum.
    The chosen frame is the lower median of all candidates found.
    """
    hand = Hand(hand)
    cfg = config_for(series, cfg)
    diagnostics: list[str] = []
    landmarks = []
    for name in HAND_LANDMARKS:
        role = f"{hand.value}_{name}"
        idx = cfg.roles.get(role)
        if idx is None:
            if name == "wrist":
                raise RoleUnresolved(f"role {role!r} is not mapped for {cfg.topology}")
            diagnostics.append(f"RoleUnmapped {role}")
            continue
        landmarks.append((name, idx))

    candidates: list[Candidate] = []
    for name, idx in landmarks:
        visible = series.points[:, idx, 3] >= cfg.v_min
        frames = series.frame_index[visible]
        for axis_no, axis in enumerate(AXES):
            values = series.points[visible, idx, axis_no]
            if len(values) < 3:
                diagnostics.append(f"TooShort {hand.value}_{name}.{axis} ({len(values)} visible samples)")
                continue
            first_max, first_min = _first_extrema(smooth(values, cfg.window))
            if first_max is None and first_min is None:
                diagnostics.append(f"NoExtremum {hand.value}_{name}.{axis}")
            if first_max is not None:
                candidates.append(Candidate(name, axis, "max", int(frames[first_max])))
            if first_min is not None:
                candidates.append(Candidate(name, axis, "min", int(frames[first_min])))

    if not candidates:
        raise NoExtremumFound(f"no local extremum in any {hand.value}-hand trajectory")
    chosen = lower_median([c.frame for c in candidates])
    return InitialFrameResult(hand, chosen, tuple(candidates), tuple(diagnostics))


# -- distances ---------------------------------------------------------------

def pixel_distance(a, b, norm: Norm | str = Norm.L2) -> float:
    dx = float(b[0]) - float(a[0])
    dy = float(b[1]) - float(a[1])
    if Norm(norm) is Norm.L1:
        return abs(dx) + abs(dy)
    return math.hypot(dx, dy)


def pixel_position(series: LandmarkSeries, frame: int, role: str,
                   cfg: TopologyConfig | None = None) -> tuple[float, float]:
    cfg = config_for(series, cfg)
    pos = series.position(frame)
    idx = cfg.index(role)
    x, y, _z, vis = series.points[pos, idx]
    if vis < cfg.v_min:
        raise LandmarkNotVisible(role, frame)
    return x * series.width, y * series.height


def pairwise_distance(series: LandmarkSeries, frame: int, a: str, b: str,
                      norm: Norm | str = Norm.L2, cfg: TopologyConfig | None = None) -> float:
    """Image-plane distance in pixels between two landmark roles at ``frame``."""
    pa = pixel_position(series, frame, a, cfg)
    pb = pixel_position(series, frame, b, cfg)
    return pixel_distance(pa, pb, norm)
