"""Motion-capture sequences: CSV parsing, feature normalization and reports.

The canonical on-disk format is a small CSV dialect::

    #frame_rate=120
    head_x,head_y,head_z,...
    0.1325,1.6021,0.0483,...
    ...

one frame per line.  Throughput reports are written as JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import DegenerateError, ParseError

if TYPE_CHECKING:
    from .infomeasure import ChannelEstimate

ALIGNMENT_METHODS = ("none", "dtw", "ctw")
DEFAULT_VARIANCE_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class MotionSequence:
    """A ``T x p`` matrix of features sampled at ``frame_rate`` frames/s.

    ``frames`` is stored as a read-only float64 copy, so instances can be
    shared freely.
    """

    frame_rate: float
    labels: tuple[str, ...]
    frames: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        frames = np.array(self.frames, dtype=np.float64)
        if frames.ndim == 1:
            frames = frames[:, None]
        if frames.ndim != 2:
            raise ValueError(f"frames must be 2-D, got shape {frames.shape}")
        labels = tuple(str(label) for label in self.labels)
        T, p = frames.shape
        if p < 1:
            raise ValueError("at least one feature is required")
        if T < 3:
            raise ValueError(f"at least 3 frames are required, got {T}")
        if len(labels) != p:
            raise ValueError(f"{len(labels)} labels for {p} feature columns")
        if not np.isfinite(frames).all():
            raise ValueError("frames contain non-finite values")
        rate = float(self.frame_rate)
        if not (rate > 0 and math.isfinite(rate)):
            raise ValueError(f"frame_rate must be positive, got {self.frame_rate!r}")
        frames.setflags(write=False)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "frame_rate", rate)
        object.__setattr__(self, "normalized", bool(self.normalized))

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def n_features(self) -> int:
        return self.frames.shape[1]

    def select(self, columns: Sequence[int]) -> MotionSequence:
        """Return a copy keeping only ``columns`` (in the given order)."""
        columns = list(columns)
        return MotionSequence(
            self.frame_rate,
            [self.labels[c] for c in columns],
            self.frames[:, columns],
            self.normalized,
        )

    def __eq__(self, other):
        if not isinstance(other, MotionSequence):
            return NotImplemented
        return (
            self.frame_rate == other.frame_rate
            and self.labels == other.labels
            and self.normalized == other.normalized
            and self.frames.shape == other.frames.shape
            and np.array_equal(self.frames, other.frames)
        )

    __hash__ = None


def parse_csv(data: bytes | str) -> MotionSequence:
    """Parse the canonical CSV format into a :class:`MotionSequence`.

    Raises
    ------
    ParseError
        On a malformed header, ragged or non-numeric rows, non-finite values
        or fewer than three frames.  The message names the offending line.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("input is not valid UTF-8") from exc
    lines = data.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()

    if not lines or not lines[0].startswith("#"):
        raise ParseError("missing frame_rate header", line=1)
    key, sep, value = lines[0][1:].partition("=")
    if key.strip() != "frame_rate" or not sep:
        raise ParseError("missing frame_rate header", line=1)
    try:
        frame_rate = float(value)
    except ValueError:
        raise ParseError(f"invalid frame_rate {value.strip()!r}", line=1) from None
    if not (frame_rate > 0 and math.isfinite(frame_rate)):
        raise ParseError(f"frame_rate must be positive, got {value.strip()!r}", line=1)

    if len(lines) < 2 or not lines[1].strip():
        raise ParseError("missing label row", line=2)
    labels = [label.strip() for label in next(csv.reader([lines[1]]))]
    if any(not label for label in labels):
        raise ParseError("empty feature label", line=2)
    p = len(labels)

    rows = []
    for lineno, line in enumerate(lines[2:], start=3):
        cells = line.split(",")
        if len(cells) != p:
            raise ParseError("ragged row", line=lineno)
        try:
            row = [float(cell) for cell in cells]
        except ValueError:
            raise ParseError("non-numeric cell", line=lineno) from None
        if not all(math.isfinite(v) for v in row):
            raise ParseError("non-finite value", line=lineno)
        rows.append(row)

    if len(rows) < 3:
        raise ParseError(f"need at least 3 frames, found {len(rows)}", line=len(lines))
    return MotionSequence(frame_rate, labels, np.array(rows, dtype=np.float64))


def serialize_csv(seq: MotionSequence) -> bytes:
    """Inverse of :func:`parse_csv`; floats are written in shortest round-trip form."""
    out = io.StringIO()
    out.write(f"#frame_rate={seq.frame_rate!r}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(seq.labels)
    for row in seq.frames.tolist():
        out.write(",".join(repr(v) for v in row))
        out.write("\n")
    return out.getvalue().encode("utf-8")


def read_csv(path) -> MotionSequence:
    return parse_csv(Path(path).read_bytes())


def write_csv(path, seq: MotionSequence) -> None:
    Path(path).write_bytes(serialize_csv(seq))


def normalize(seq: MotionSequence, variance_floor: float = DEFAULT_VARIANCE_FLOOR):
    """Standardize every feature to mean 0 and population variance 1.

    Features whose population variance is below ``variance_floor`` are
    dropped instead of scaled.

    Returns
    -------
    (MotionSequence, list of int)
        The normalized sequence and the dropped feature indices, counted in
        the original column order.
    """
    frames = seq.frames
    mean = frames.mean(axis=0)
    centered = frames - mean
    var = np.mean(centered**2, axis=0)
    keep = var >= variance_floor
    dropped = [int(i) for i in np.flatnonzero(~keep)]
    if not keep.any():
        raise DegenerateError("no informative features")
    scaled = centered[:, keep] / np.sqrt(var[keep])
    labels = [label for label, k in zip(seq.labels, keep) if k]
    return MotionSequence(seq.frame_rate, labels, scaled, normalized=True), dropped


@dataclass(frozen=True)
class ThroughputReport:
    """Throughput of one sequence conditioned on another, summed over components.

    ``config`` carries the numeric settings used to produce the report.
    """

    total_tp: float
    components: tuple[ChannelEstimate, ...]
    retained_components: int
    variance_covered: float
    n_eff: int
    frame_rate: float
    alignment_method: str
    degenerate_components: tuple[int, ...] = ()
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(
            self, "degenerate_components", tuple(int(i) for i in self.degenerate_components)
        )
        if self.alignment_method not in ALIGNMENT_METHODS:
            raise ValueError(f"unknown alignment method {self.alignment_method!r}")
        if not 0.0 <= self.variance_covered <= 1.0 + 1e-12:
            raise ValueError(f"variance_covered out of range: {self.variance_covered}")
        retention = self.config.get("retention")
        if retention is not None and self.variance_covered < retention - 1e-12:
            raise ValueError("variance_covered is below the retention threshold")
        total = math.fsum(c.tp_bps for c in self.components)
        if abs(total - self.total_tp) > 1e-9 * max(1.0, abs(total)):
            raise ValueError(f"total_tp {self.total_tp} != component sum {total}")

    def to_dict(self) -> dict:
        return {
            "total_tp_bps": self.total_tp,
            "frame_rate": self.frame_rate,
            "n_eff": self.n_eff,
            "alignment_method": self.alignment_method,
            "retained_components": self.retained_components,
            "variance_covered": self.variance_covered,
            "components": [
                {
                    "index": c.component_index,
                    "rho_hat": c.rho_hat,
                    "mi_bits": c.mi_bits,
                    "tp_bps": c.tp_bps,
                }
                for c in self.components
            ],
            "degenerate_components": list(self.degenerate_components),
            "config": dict(self.config),
        }


def write_report(report: ThroughputReport) -> bytes:
    return (json.dumps(report.to_dict(), indent=2) + "\n").encode("utf-8")


def read_report(data: bytes | str) -> ThroughputReport:
    from .infomeasure import ChannelEstimate

    obj = json.loads(data)
    n_eff = int(obj["n_eff"])
    components = [
        ChannelEstimate(
            component_index=int(c["index"]),
            rho_hat=float(c["rho_hat"]),
            n_eff=n_eff,
            mi_bits=float(c["mi_bits"]),
            tp_bps=float(c["tp_bps"]),
        )
        for c in obj["components"]
    ]
    return ThroughputReport(
        total_tp=float(obj["total_tp_bps"]),
        components=components,
        retained_components=int(obj["retained_components"]),
        variance_covered=float(obj["variance_covered"]),
        n_eff=n_eff,
        frame_rate=float(obj["frame_rate"]),
        alignment_method=obj["alignment_method"],
        degenerate_components=obj.get("degenerate_components", []),
        config=obj.get("config", {}),
    )
