"""Ball centroid recovery from low-resolution grayscale grids.

Either a precomputed per-frame track is passed through, or the track is
recovered by three-frame differencing: threshold the absolute differences
of both consecutive frame pairs, intersect the binary masks, and take the
centroid of the largest 4-connected blob. Differencing is insensitive to
global brightness, which suits outdoor recordings.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, MalformedFile

GRID_MAGIC = "<HHI"  # width u16, height u16, frame_count u32, little-endian


@dataclass
class FrameGrid:
    """One grayscale frame downsampled to a coarse cell grid."""

    width: int
    height: int
    values: np.ndarray  # (height, width) uint8

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.uint8)
        if self.values.shape != (self.height, self.width):
            raise DimensionMismatch(
                f"grid values shape {self.values.shape} != (height={self.height}, width={self.width})"
            )


@dataclass
class BallTrack:
    """Per-frame optional ball centroid in the owning view's pixel coordinates."""

    samples: dict[int, tuple[float, float] | None] = field(default_factory=dict)

    def frames(self) -> list[int]:
        return sorted(f for f, p in self.samples.items() if p is not None)

    def first_sample(self) -> tuple[int, tuple[float, float]] | None:
        frames = self.frames()
        if not frames:
            return None
        return frames[0], self.samples[frames[0]]

    def in_range(self, start: int, end: int) -> list[tuple[int, tuple[float, float]]]:
        """(frame, point) pairs with start <= frame <= end, frame-ordered."""
        return [(f, self.samples[f]) for f in self.frames() if start <= f <= end]


@dataclass
class Precomputed:
    track: BallTrack


@dataclass
class GridSource:
    """Frame grids aligned to trajectory frames plus the grid->view transform.

    Cell (cx, cy) maps to view pixels origin + cell_size * (cx, cy).
    """

    grids: list[FrameGrid]
    frame_indices: np.ndarray | None = None
    origin: tuple[float, float] = (0.0, 0.0)
    cell_size: float = 1.0


BallSource = Precomputed | GridSource


def three_frame_diff(
    f_prev: FrameGrid,
    f_cur: FrameGrid,
    f_next: FrameGrid,
    threshold: int = 25,
    min_area: int = 4,
) -> tuple[float, float] | None:
    """Centroid (cell coordinates) of the dominant moving blob, or None.

    threshold applies to both |cur-prev| and |next-cur|; only cells active
    in both masks survive. Blobs smaller than min_area cells are ignored;
    ties go to the blob whose bounding box starts closer to the top-left.
    """
    if not (f_prev.values.shape == f_cur.values.shape == f_next.values.shape):
        raise DimensionMismatch("frame grids differ in size")
    if not (0 < threshold < 255):
        raise ValueError("threshold must lie in (0, 255)")
    if min_area < 1:
        raise ValueError("min_area must be >= 1")
    hit = _kernels.diff_centroid(f_prev.values, f_cur.values, f_next.values, threshold, min_area)
    if hit is None:
        return None
    cx, cy, _area = hit
    return (float(cx), float(cy))


def extract_ball_track(
    src: BallSource,
    threshold: int = 25,
    min_area: int = 4,
) -> BallTrack:
    """Build a per-frame track from a ball source.

    Precomputed tracks pass through unchanged. Grid sources yield a
    detection per interior frame (first and last have no triple); isolated
    one-frame gaps between detections are filled by linear interpolation.
    """
    if isinstance(src, Precomputed):
        return BallTrack(samples=dict(src.track.samples))

    grids = src.grids
    n = len(grids)
    if src.frame_indices is not None:
        idx = np.asarray(src.frame_indices, dtype=np.int64)
        if len(idx) != n:
            raise DimensionMismatch("frame_indices length != grid count")
    else:
        idx = np.arange(n, dtype=np.int64)

    ox, oy = src.origin
    s = src.cell_size
    samples: dict[int, tuple[float, float] | None] = {}
    for i in range(1, n - 1):
        hit = three_frame_diff(grids[i - 1], grids[i], grids[i + 1], threshold, min_area)
        samples[int(idx[i])] = None if hit is None else (ox + s * hit[0], oy + s * hit[1])

    # fill isolated single-frame dropouts
    for i in range(2, n - 2):
        f = int(idx[i])
        if samples.get(f) is None:
            before = samples.get(int(idx[i - 1]))
            after = samples.get(int(idx[i + 1]))
            if before is not None and after is not None:
                w = (idx[i] - idx[i - 1]) / (idx[i + 1] - idx[i - 1])
                samples[f] = (
                    before[0] + w * (after[0] - before[0]),
                    before[1] + w * (after[1] - before[1]),
                )
    return BallTrack(samples=samples)


# --- file formats ---

def write_grids(grids: list[FrameGrid]) -> bytes:
    if not grids:
        return struct.pack(GRID_MAGIC, 0, 0, 0)
    w, h = grids[0].width, grids[0].height
    out = [struct.pack(GRID_MAGIC, w, h, len(grids))]
    for g in grids:
        if (g.width, g.height) != (w, h):
            raise DimensionMismatch("all grids in a file must share dimensions")
        out.append(g.values.tobytes())
    return b"".join(out)


def parse_grids(data: bytes) -> list[FrameGrid]:
    header = struct.calcsize(GRID_MAGIC)
    if len(data) < header:
        raise MalformedFile("grid file shorter than header")
    w, h, count = struct.unpack_from(GRID_MAGIC, data)
    expected = header + w * h * count
    if len(data) != expected:
        raise MalformedFile(f"grid file length {len(data)} != expected {expected}")
    grids = []
    for i in range(count):
        off = header + i * w * h
        arr = np.frombuffer(data[off:off + w * h], dtype=np.uint8).reshape(h, w)
        grids.append(FrameGrid(width=w, height=h, values=arr.copy()))
    return grids


def write_track(track: BallTrack) -> bytes:
    obj = {
        "frames": {
            str(f): (list(p) if p is not None else None)
            for f, p in sorted(track.samples.items())
        }
    }
    return json.dumps(obj, indent=2).encode("utf-8")


def parse_track(data: bytes | str) -> BallTrack:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
        samples = {
            int(f): (None if p is None else (float(p[0]), float(p[1])))
            for f, p in obj["frames"].items()
        }
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MalformedFile(f"bad track file: {exc}") from exc
    return BallTrack(samples=samples)
