"""Frame-index synchronization barrier for per-camera track streams.

Cameras deliver updates tagged with a discrete frame index; the barrier
re-assembles them into per-frame snapshots so the engine always sees one
consistent instant. In strict mode a frame is released only once every
camera has either delivered it or moved past it. With ``max_lag`` set, a
camera trailing more than that many frames behind the fastest stream stops
blocking: the frame is released with an empty track list for it and the
camera is flagged in the snapshot metadata.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import CausalityError, ConfigError, MalformedInputError
from .tracks import TrackState


@dataclass(frozen=True)
class StreamUpdate:
    """Everything one camera saw at one frame."""

    camera_id: int
    frame_index: int
    t: float
    tracks: tuple[TrackState, ...] = ()
    arrival_seq: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "tracks", tuple(self.tracks))
        for ts in self.tracks:
            if ts.camera_id != self.camera_id:
                raise MalformedInputError(
                    f"track camera {ts.camera_id} inside update for camera {self.camera_id}"
                )
            if ts.t != self.t:
                raise MalformedInputError(
                    f"track time {ts.t} differs from update time {self.t}"
                )


@dataclass(frozen=True)
class Snapshot:
    """One released frame: every registered camera maps to its track list."""

    frame_index: int
    t: float
    per_camera: Mapping[int, tuple[TrackState, ...]]
    stalled: frozenset[int] = frozenset()


@dataclass(frozen=True)
class BarrierConfig:
    camera_ids: frozenset[int]
    max_lag: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "camera_ids", frozenset(self.camera_ids))
        if not self.camera_ids:
            raise ConfigError("barrier needs at least one camera")
        if self.max_lag is not None and self.max_lag < 0:
            raise ConfigError(f"max_lag must be >= 0, got {self.max_lag}")


@dataclass
class BarrierStats:
    ingested: int = 0
    released: int = 0
    dropped_late: int = 0
    peak_pending: int = 0


class SyncBarrier:
    """Reorders per-camera updates into monotonically increasing snapshots.

    ``ingest`` may be called from multiple producer threads; calls are
    serialized internally. ``try_release`` returns at most one snapshot per
    call and None when nothing is releasable yet.
    """

    def __init__(self, cfg: BarrierConfig) -> None:
        self.cfg = cfg
        self._lock = threading.Lock()
        self._pending: dict[int, dict[int, StreamUpdate]] = {c: {} for c in cfg.camera_ids}
        self._last_ingested: dict[int, int] = {c: -1 for c in cfg.camera_ids}
        self._frames: set[int] = set()
        self._released_frame = -1
        self.stats = BarrierStats()

    def ingest(self, update: StreamUpdate) -> None:
        with self._lock:
            cam = update.camera_id
            if cam not in self.cfg.camera_ids:
                raise ConfigError(f"camera {cam} is not registered with the barrier")
            if update.frame_index < 0:
                raise MalformedInputError(f"negative frame index {update.frame_index}")
            if update.frame_index <= self._last_ingested[cam]:
                raise CausalityError(
                    f"camera {cam} delivered frame {update.frame_index} after "
                    f"frame {self._last_ingested[cam]}"
                )
            self._last_ingested[cam] = update.frame_index
            if update.frame_index <= self._released_frame:
                # Only reachable when max_lag already forced the frame out.
                self.stats.dropped_late += 1
                return
            self._pending[cam][update.frame_index] = update
            self._frames.add(update.frame_index)
            self.stats.ingested += 1
            pending_total = sum(len(d) for d in self._pending.values())
            if pending_total > self.stats.peak_pending:
                self.stats.peak_pending = pending_total

    def try_release(self) -> Optional[Snapshot]:
        with self._lock:
            if not self._frames:
                return None
            frame = min(self._frames)
            fastest = max(self._last_ingested.values())
            per_camera: dict[int, tuple[TrackState, ...]] = {}
            stalled: set[int] = set()
            t_val: Optional[float] = None
            for cam in sorted(self.cfg.camera_ids):
                upd = self._pending[cam].get(frame)
                if upd is not None:
                    per_camera[cam] = upd.tracks
                    if t_val is None:
                        t_val = upd.t
                    elif upd.t != t_val:
                        raise MalformedInputError(
                            f"frame {frame}: cameras disagree on time ({upd.t} vs {t_val})"
                        )
                elif self._last_ingested[cam] > frame:
                    per_camera[cam] = ()
                elif self.cfg.max_lag is not None and fastest - frame > self.cfg.max_lag:
                    per_camera[cam] = ()
                    stalled.add(cam)
                else:
                    return None
            assert t_val is not None  # at least one camera delivered this frame
            for cam in self.cfg.camera_ids:
                self._pending[cam].pop(frame, None)
            self._frames.discard(frame)
            self._released_frame = frame
            self.stats.released += 1
            return Snapshot(
                frame_index=frame,
                t=t_val,
                per_camera=per_camera,
                stalled=frozenset(stalled),
            )

    def drain(self) -> list[Snapshot]:
        """Release everything currently releasable, in order."""
        out = []
        while True:
            snap = self.try_release()
            if snap is None:
                return out
            out.append(snap)

    @property
    def pending_count(self) -> int:
        with self._lock:
            return sum(len(d) for d in self._pending.values())
