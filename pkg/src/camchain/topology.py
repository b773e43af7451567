"""Camera chain topology: nodes, directed edges, and traffic-direction rules.

An edge connects two cameras whose coverage is bridged by a shared trigger
region (the ``overlap`` polygon). A single edge serves both traffic
directions through its two zones:

* ``Zone.UPPER`` traffic travels along the edge frame's axis, i.e. from
  ``upstream`` to ``downstream``;
* ``Zone.LOWER`` traffic travels against it, from ``downstream`` to
  ``upstream``.

Edge road frames must therefore be authored with the axis pointing from the
upstream to the downstream camera. A three-camera chain needs only two
edges to carry both directions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .geometry import Polygon, RoadFrame, Zone, polygons_intersect
from .kinematics import Calibration

EdgeKey = tuple[int, int]


@dataclass(frozen=True)
class CameraNode:
    id: int
    fov: Polygon
    calibration: Calibration
    frame: RoadFrame


@dataclass(frozen=True)
class EdgeDef:
    upstream: int
    downstream: int
    overlap: Polygon
    frame: RoadFrame

    @property
    def key(self) -> EdgeKey:
        return (self.upstream, self.downstream)

    @property
    def label(self) -> str:
        return f"{self.upstream}->{self.downstream}"


def edge_is_exit(edge: EdgeDef, camera_id: int, zone: Zone) -> bool:
    """Does a track at this camera, in this zone, exit into this edge?"""
    if zone is Zone.UPPER:
        return edge.upstream == camera_id
    return edge.downstream == camera_id


def edge_is_entry(edge: EdgeDef, camera_id: int, zone: Zone) -> bool:
    """Does a new track at this camera, in this zone, arrive from this edge?"""
    if zone is Zone.UPPER:
        return edge.downstream == camera_id
    return edge.upstream == camera_id


@dataclass(frozen=True)
class TopologyGraph:
    nodes: tuple[CameraNode, ...]
    edges: tuple[EdgeDef, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"duplicate camera ids in topology: {sorted(ids)}")
        by_id = {n.id: n for n in self.nodes}
        seen_keys: set[EdgeKey] = set()
        for e in self.edges:
            if e.upstream == e.downstream:
                raise ConfigError(f"edge {e.label}: self-edges are not allowed")
            if e.key in seen_keys:
                raise ConfigError(f"duplicate edge {e.label}")
            seen_keys.add(e.key)
            for end in (e.upstream, e.downstream):
                if end not in by_id:
                    raise ConfigError(f"edge {e.label} references unknown camera {end}")
            # Adjacent cameras must share coverage with the trigger region,
            # otherwise nothing can ever hand over across this edge.
            if not polygons_intersect(e.overlap, by_id[e.upstream].fov):
                raise ConfigError(
                    f"edge {e.label}: overlap region does not touch the "
                    f"upstream camera footprint"
                )
            if not polygons_intersect(e.overlap, by_id[e.downstream].fov):
                raise ConfigError(
                    f"edge {e.label}: overlap region does not touch the "
                    f"downstream camera footprint"
                )
        object.__setattr__(self, "_by_id", by_id)
        incident: dict[int, tuple[EdgeDef, ...]] = {n.id: () for n in self.nodes}
        for e in self.edges:
            incident[e.upstream] = incident[e.upstream] + (e,)
            incident[e.downstream] = incident[e.downstream] + (e,)
        object.__setattr__(self, "_incident", incident)

    def node(self, camera_id: int) -> CameraNode:
        try:
            return self._by_id[camera_id]  # type: ignore[attr-defined]
        except KeyError:
            raise ConfigError(f"unknown camera id {camera_id}") from None

    @property
    def camera_ids(self) -> frozenset[int]:
        return frozenset(n.id for n in self.nodes)

    def edges_at(self, camera_id: int) -> tuple[EdgeDef, ...]:
        """Edges incident to a camera, in authored order."""
        return self._incident[camera_id]  # type: ignore[attr-defined]
