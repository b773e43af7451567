"""Track-level data carriers shared by the barrier, engine, and writers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .geometry import Point2
from .kinematics import KinematicState


@dataclass(frozen=True)
class TrackState:
    """One observation of one per-camera track.

    ``pos`` is the metric ground-plane position, ``pos_px`` the same point in
    the camera's pixel frame. ``kin`` and ``global_id`` start empty and are
    filled by the handover engine.
    """

    t: float
    camera_id: int
    local_id: int
    pos: Point2
    pos_px: Point2
    kin: Optional[KinematicState] = None
    global_id: Optional[int] = None


@dataclass
class LocalTracklet:
    """A single camera's contiguous track: time-ordered states, one local id."""

    camera_id: int
    local_id: int
    states: list[TrackState] = field(default_factory=list)

    def append(self, state: TrackState) -> None:
        if state.camera_id != self.camera_id or state.local_id != self.local_id:
            raise ValueError(
                f"state ({state.camera_id}, {state.local_id}) does not belong to "
                f"tracklet ({self.camera_id}, {self.local_id})"
            )
        if self.states and state.t <= self.states[-1].t:
            raise ValueError("tracklet states must be strictly time-ordered")
        self.states.append(state)

    @property
    def t_start(self) -> float:
        return self.states[0].t

    @property
    def t_end(self) -> float:
        return self.states[-1].t


@dataclass
class GlobalTrajectory:
    """All states stitched under one global identity, across cameras.

    Time-ordered; inside an overlap two cameras may report the same instant,
    so ties are broken by camera id.
    """

    global_id: int
    states: list[TrackState] = field(default_factory=list)

    def sort(self) -> None:
        self.states.sort(key=lambda s: (s.t, s.camera_id, s.local_id))

    @property
    def cameras(self) -> tuple[int, ...]:
        seen: dict[int, None] = {}
        for s in self.states:
            seen.setdefault(s.camera_id, None)
        return tuple(seen)
