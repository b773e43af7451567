"""Cross-camera identity handover via directional per-edge buffers.

Every topology edge owns two FIFO buffers, one per traffic zone. While a
globally-identified track sits inside an edge's trigger region and is headed
off its camera across that edge, its metadata (normalized lateral offset,
exit time, heading) is pushed to the matching buffer; a re-push for the same
global id replaces the earlier entry. When a camera births a track inside a
trigger region, the buffers feeding that camera are queried: the winning
entry is consumed and its global id inherited, otherwise a fresh id is
minted. Entries that outlive the timeout are swept and reported expired.

Matching strategies:

* ``LATERAL_AWARE`` picks the in-window entry whose stored lateral offset is
  nearest the querying track's, rejecting the match when even the best
  disagreement is at or above ``eps_lat``;
* ``STRICT_FIFO`` (baseline) pops the oldest in-window entry regardless of
  lateral agreement.

Both honor the same recency window (``age < dt_window``), the optional
position/direction gates, and never hand an id to a camera that already
carries it on a live track.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional

from .errors import CausalityError, ConfigError, MalformedInputError
from .geometry import Point2, RoadFrame, Zone, get_zone, lateral_norm, point_in_polygon
from .kinematics import (
    DEFAULT_SPEED_WINDOW,
    DEFAULT_STOP_SPEED_KMH,
    DEFAULT_STOP_THRESHOLD_M,
    KinematicState,
    MotionStatus,
    estimate_heading,
    estimate_speed,
    motion_status,
)
from .sync import Snapshot
from .topology import EdgeKey, TopologyGraph, edge_is_entry, edge_is_exit
from .tracks import GlobalTrajectory, TrackState

# Heading projections smaller than this cannot pick a travel direction and
# the lateral-position rule decides the zone instead.
_PROJECTION_EPS = 1e-12


class MatchStrategy(Enum):
    LATERAL_AWARE = "lateral-aware"
    STRICT_FIFO = "strict-fifo"


@dataclass(frozen=True)
class MatcherConfig:
    """Gates and windows for buffer queries.

    ``dt_window`` bounds how stale an entry may be and still match;
    ``eps_time`` is the buffer timeout and can never undercut the window.
    ``eps_dist`` (meters) and ``gamma_dir`` (cosine floor) are off until set.
    """

    dt_window: float = 4.0
    eps_lat: float = 0.12
    eps_time: float = 30.0
    eps_dist: Optional[float] = None
    gamma_dir: Optional[float] = None
    strategy: MatchStrategy = MatchStrategy.LATERAL_AWARE

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt_window) and self.dt_window > 0.0):
            raise ConfigError(f"dt_window must be > 0, got {self.dt_window}")
        if not (math.isfinite(self.eps_lat) and self.eps_lat > 0.0):
            raise ConfigError(f"eps_lat must be > 0, got {self.eps_lat}")
        if not (math.isfinite(self.eps_time) and self.eps_time >= self.dt_window):
            raise ConfigError(
                f"eps_time ({self.eps_time}) must be >= dt_window ({self.dt_window})"
            )
        if self.eps_dist is not None and not (
            math.isfinite(self.eps_dist) and self.eps_dist > 0.0
        ):
            raise ConfigError(f"eps_dist must be > 0 when set, got {self.eps_dist}")
        if self.gamma_dir is not None and not (-1.0 <= self.gamma_dir <= 1.0):
            raise ConfigError(f"gamma_dir must lie in [-1, 1], got {self.gamma_dir}")


@dataclass(frozen=True)
class KinematicsConfig:
    speed_window: int = DEFAULT_SPEED_WINDOW
    stop_speed_kmh: float = DEFAULT_STOP_SPEED_KMH
    stop_threshold_m: float = DEFAULT_STOP_THRESHOLD_M

    def __post_init__(self) -> None:
        if self.speed_window < 1:
            raise ConfigError(f"speed_window must be >= 1, got {self.speed_window}")
        if self.stop_speed_kmh < 0.0 or self.stop_threshold_m < 0.0:
            raise ConfigError("stop thresholds must be >= 0")


@dataclass(frozen=True)
class BufferEntry:
    """One parked identity awaiting pickup on the far side of an edge."""

    global_id: int
    camera_id: int
    local_id: int
    t_exit: float
    y_rel: float
    seq: int
    heading: Optional[float] = None
    pos: Optional[Point2] = None


class EventKind(Enum):
    PUSHED = "pushed"
    MATCHED = "matched"
    NEW_IDENTITY = "new_identity"
    EXPIRED = "expired"


@dataclass(frozen=True)
class HandoverEvent:
    kind: EventKind
    frame_index: int
    t: float
    camera_id: int
    local_id: int
    global_id: int
    edge: Optional[EdgeKey] = None
    zone: Optional[Zone] = None
    y_rel: Optional[float] = None
    age: Optional[float] = None
    residual: Optional[float] = None


class DirectionalBuffer:
    """FIFO of parked identities for one (edge, zone) lane of travel."""

    def __init__(self, edge_key: EdgeKey, zone: Zone) -> None:
        self.edge_key = edge_key
        self.zone = zone
        self._entries: list[BufferEntry] = []

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> tuple[BufferEntry, ...]:
        return tuple(self._entries)

    def push(self, entry: BufferEntry) -> None:
        # a re-push supersedes the previous parking of the same id
        self._entries = [e for e in self._entries if e.global_id != entry.global_id]
        self._entries.append(entry)

    def remove(self, entry: BufferEntry) -> None:
        self._entries.remove(entry)

    def sweep_expired(self, now: float, ttl: float) -> list[BufferEntry]:
        """Drop and return entries whose age reached the timeout."""
        expired = [e for e in self._entries if now - e.t_exit >= ttl]
        if expired:
            gone = {e.seq for e in expired}
            self._entries = [e for e in self._entries if e.seq not in gone]
        return expired


@dataclass
class _TrackRecord:
    """Mutable per-(camera, local id) bookkeeping inside the engine."""

    global_id: Optional[int] = None
    last_t: float = 0.0
    last_frame: Optional[int] = None
    last_pos: Optional[Point2] = None
    heading: Optional[float] = None
    kin: Optional[KinematicState] = None
    px_hist: deque = field(default_factory=deque)


class HandoverEngine:
    """Stitches per-camera tracks into global trajectories, one snapshot at a time.

    Each snapshot is handled in a fixed order so replays are bit-stable:
    kinematics for every visible track, then buffer pushes for identified
    tracks leaving across an edge, then queries for unidentified tracks,
    then the timeout sweep, cameras and local ids ascending throughout.
    """

    def __init__(
        self,
        topology: TopologyGraph,
        matcher: MatcherConfig | None = None,
        kinematics: KinematicsConfig | None = None,
    ) -> None:
        self.topology = topology
        self.matcher = matcher if matcher is not None else MatcherConfig()
        self.kinematics = kinematics if kinematics is not None else KinematicsConfig()
        self._buffers: dict[tuple[EdgeKey, Zone], DirectionalBuffer] = {}
        for e in topology.edges:
            for z in (Zone.UPPER, Zone.LOWER):
                self._buffers[(e.key, z)] = DirectionalBuffer(e.key, z)
        self._records: dict[tuple[int, int], _TrackRecord] = {}
        self._next_gid = 0
        self._next_seq = 0
        self._last_frame: Optional[int] = None
        self.trajectories: dict[int, GlobalTrajectory] = {}
        self.events: list[HandoverEvent] = []
        self.counts: Counter = Counter()

    # -- id and sequence counters ------------------------------------------

    def _mint_gid(self) -> int:
        self._next_gid += 1
        return self._next_gid

    def _take_seq(self) -> int:
        self._next_seq += 1
        return self._next_seq

    @property
    def gids_minted(self) -> int:
        return self._next_gid

    def buffer(self, edge_key: EdgeKey, zone: Zone) -> DirectionalBuffer:
        try:
            return self._buffers[(edge_key, zone)]
        except KeyError:
            raise ConfigError(f"no buffer for edge {edge_key} zone {zone.value}") from None

    def buffer_sizes(self) -> dict[str, int]:
        return {
            f"{k[0][0]}->{k[0][1]}/{k[1].value}": len(b)
            for k, b in self._buffers.items()
        }

    def total_buffered(self) -> int:
        return sum(len(b) for b in self._buffers.values())

    # -- zone inference ----------------------------------------------------

    def _zone_for(
        self,
        pos: Point2,
        heading: Optional[float],
        status: Optional[MotionStatus],
        frame: RoadFrame,
    ) -> Zone:
        """Travel direction decides the zone; lateral position breaks ties.

        A stopped vehicle's held heading is stale, so it also falls back to
        the lateral rule.
        """
        if heading is not None and status is not MotionStatus.STOPPED:
            p = math.cos(heading) * frame.axis.x + math.sin(heading) * frame.axis.y
            if p > _PROJECTION_EPS:
                return Zone.UPPER
            if p < -_PROJECTION_EPS:
                return Zone.LOWER
        return get_zone(pos, frame)

    # -- matching ----------------------------------------------------------

    def _scan(
        self,
        buf: DirectionalBuffer,
        t: float,
        y_rel: float,
        pos: Optional[Point2],
        heading: Optional[float],
        exclude_gids: Iterable[int],
    ) -> Optional[tuple[tuple, BufferEntry, float, float]]:
        """Best eligible entry of one buffer, or None.

        Returns (ranking key, entry, age, lateral residual); the key is
        comparable across buffers so multi-edge queries can take a global
        minimum.
        """
        m = self.matcher
        excluded = set(exclude_gids)
        best: Optional[tuple[tuple, BufferEntry, float, float]] = None
        for e in buf.entries:
            age = t - e.t_exit
            if not (0.0 <= age < m.dt_window):
                continue
            if e.global_id in excluded:
                continue
            if m.eps_dist is not None:
                if pos is None or e.pos is None:
                    continue
                if math.hypot(pos.x - e.pos.x, pos.y - e.pos.y) >= m.eps_dist:
                    continue
            if m.gamma_dir is not None:
                if heading is None or e.heading is None:
                    continue
                if math.cos(heading - e.heading) <= m.gamma_dir:
                    continue
            residual = abs(y_rel - e.y_rel)
            if m.strategy is MatchStrategy.LATERAL_AWARE:
                if residual >= m.eps_lat:
                    continue
                key = (residual, e.t_exit, e.seq)
            else:
                key = (e.t_exit, e.seq)
            if best is None or key < best[0]:
                best = (key, e, age, residual)
        return best

    def query_match(
        self,
        edge_key: EdgeKey,
        zone: Zone,
        t: float,
        y_rel: float,
        pos: Optional[Point2] = None,
        heading: Optional[float] = None,
        exclude_gids: Iterable[int] = (),
    ) -> Optional[BufferEntry]:
        """Consume and return the best parked identity for one buffer."""
        buf = self.buffer(edge_key, zone)
        found = self._scan(buf, t, y_rel, pos, heading, exclude_gids)
        if found is None:
            return None
        buf.remove(found[1])
        return found[1]

    # -- timeout sweep -------------------------------------------------------

    def _sweep_buffers(self, now: float, frame_index: int) -> list[HandoverEvent]:
        out: list[HandoverEvent] = []
        for e in self.topology.edges:
            for z in (Zone.UPPER, Zone.LOWER):
                buf = self._buffers[(e.key, z)]
                for entry in buf.sweep_expired(now, self.matcher.eps_time):
                    out.append(
                        HandoverEvent(
                            kind=EventKind.EXPIRED,
                            frame_index=frame_index,
                            t=now,
                            camera_id=entry.camera_id,
                            local_id=entry.local_id,
                            global_id=entry.global_id,
                            edge=e.key,
                            zone=z,
                            y_rel=entry.y_rel,
                            age=now - entry.t_exit,
                        )
                    )
        return out

    def expire(self, now: float, frame_index: Optional[int] = None) -> list[HandoverEvent]:
        """Drop every buffered identity whose age reached the timeout.

        Runs automatically at the end of each snapshot; callable on its own
        to flush buffers at a chosen time, e.g. after the final update.
        """
        if frame_index is None:
            frame_index = self._last_frame if self._last_frame is not None else 0
        out = self._sweep_buffers(now, frame_index)
        for ev in out:
            self.counts[ev.kind.value] += 1
        self.events.extend(out)
        return out

    # -- snapshot processing -------------------------------------------------

    def process_snapshot(self, snap: Snapshot) -> list[HandoverEvent]:
        if self._last_frame is not None and snap.frame_index <= self._last_frame:
            raise CausalityError(
                f"snapshot frame {snap.frame_index} is not after {self._last_frame}"
            )
        self._last_frame = snap.frame_index
        out: list[HandoverEvent] = []
        cams = sorted(snap.per_camera)
        ordered: list[tuple[int, TrackState]] = []
        for cam in cams:
            seen: set[int] = set()
            for st in sorted(snap.per_camera[cam], key=lambda s: s.local_id):
                if st.local_id in seen:
                    raise MalformedInputError(
                        f"camera {cam} reports local id {st.local_id} twice "
                        f"in frame {snap.frame_index}"
                    )
                seen.add(st.local_id)
                ordered.append((cam, st))

        # kinematics first: every visible track gets an updated estimate
        for cam, st in ordered:
            key = (cam, st.local_id)
            rec = self._records.get(key)
            if rec is None:
                rec = _TrackRecord()
                self._records[key] = rec
            elif rec.last_frame is not None and snap.frame_index != rec.last_frame + 1:
                rec.px_hist.clear()  # a gap breaks the uniform-step speed window
                rec.last_pos = None
            rec.px_hist.append(st.pos_px)
            k = self.kinematics.speed_window
            while len(rec.px_hist) > k + 1:
                rec.px_hist.popleft()
            cal = self.topology.node(cam).calibration
            speed = None
            if len(rec.px_hist) >= k + 1:
                speed = estimate_speed(list(rec.px_hist), cal, k)
            if rec.last_pos is not None:
                heading = estimate_heading(
                    rec.last_pos, st.pos, rec.heading, self.kinematics.stop_threshold_m
                )
            else:
                heading = rec.heading
            status = None
            if speed is not None:
                status = motion_status(speed, self.kinematics.stop_speed_kmh)
            rec.kin = KinematicState(speed, heading, status)
            rec.heading = heading
            rec.last_pos = st.pos
            rec.last_t = snap.t
            rec.last_frame = snap.frame_index

        live: dict[int, set[int]] = {cam: set() for cam in cams}
        for cam, st in ordered:
            gid = self._records[(cam, st.local_id)].global_id
            if gid is not None:
                live[cam].add(gid)

        # identified tracks inside a trigger region park their id downstream
        for cam, st in ordered:
            rec = self._records[(cam, st.local_id)]
            if rec.global_id is None:
                continue
            kin = rec.kin
            for edge in self.topology.edges_at(cam):
                zone = self._zone_for(st.pos, kin.heading_rad, kin.status, edge.frame)
                if not edge_is_exit(edge, cam, zone):
                    continue
                if not point_in_polygon(st.pos, edge.overlap):
                    continue
                y_rel = lateral_norm(st.pos, edge.frame)
                self._buffers[(edge.key, zone)].push(
                    BufferEntry(
                        global_id=rec.global_id,
                        camera_id=cam,
                        local_id=st.local_id,
                        t_exit=snap.t,
                        y_rel=y_rel,
                        seq=self._take_seq(),
                        heading=kin.heading_rad,
                        pos=st.pos,
                    )
                )
                out.append(
                    HandoverEvent(
                        kind=EventKind.PUSHED,
                        frame_index=snap.frame_index,
                        t=snap.t,
                        camera_id=cam,
                        local_id=st.local_id,
                        global_id=rec.global_id,
                        edge=edge.key,
                        zone=zone,
                        y_rel=y_rel,
                    )
                )

        # unidentified tracks inherit a parked id or mint a fresh one
        for cam, st in ordered:
            rec = self._records[(cam, st.local_id)]
            if rec.global_id is not None:
                continue
            kin = rec.kin
            best = None
            best_ctx = None
            for edge in self.topology.edges_at(cam):
                zone = self._zone_for(st.pos, kin.heading_rad, kin.status, edge.frame)
                if not edge_is_entry(edge, cam, zone):
                    continue
                if not point_in_polygon(st.pos, edge.overlap):
                    continue
                y_rel = lateral_norm(st.pos, edge.frame)
                found = self._scan(
                    self._buffers[(edge.key, zone)],
                    snap.t,
                    y_rel,
                    st.pos,
                    kin.heading_rad,
                    live[cam],
                )
                if found is not None and (best is None or found[0] < best[0]):
                    best = found
                    best_ctx = (edge, zone, y_rel)
            if best is not None:
                edge, zone, y_rel = best_ctx
                entry = best[1]
                self._buffers[(edge.key, zone)].remove(entry)
                rec.global_id = entry.global_id
                out.append(
                    HandoverEvent(
                        kind=EventKind.MATCHED,
                        frame_index=snap.frame_index,
                        t=snap.t,
                        camera_id=cam,
                        local_id=st.local_id,
                        global_id=entry.global_id,
                        edge=edge.key,
                        zone=zone,
                        y_rel=y_rel,
                        age=best[2],
                        residual=best[3],
                    )
                )
            else:
                rec.global_id = self._mint_gid()
                out.append(
                    HandoverEvent(
                        kind=EventKind.NEW_IDENTITY,
                        frame_index=snap.frame_index,
                        t=snap.t,
                        camera_id=cam,
                        local_id=st.local_id,
                        global_id=rec.global_id,
                    )
                )
            live[cam].add(rec.global_id)

        # timeout sweep
        out.extend(self._sweep_buffers(snap.t, snap.frame_index))

        # grow trajectories with the enriched states
        for cam, st in ordered:
            rec = self._records[(cam, st.local_id)]
            traj = self.trajectories.get(rec.global_id)
            if traj is None:
                traj = GlobalTrajectory(global_id=rec.global_id)
                self.trajectories[rec.global_id] = traj
            traj.states.append(replace(st, kin=rec.kin, global_id=rec.global_id))

        # forget tracks gone long enough that their id can never resurface
        horizon = 2.0 * self.matcher.eps_time
        stale = [k for k, r in self._records.items() if snap.t - r.last_t > horizon]
        for k in stale:
            del self._records[k]

        for ev in out:
            self.counts[ev.kind.value] += 1
        self.events.extend(out)
        return out
