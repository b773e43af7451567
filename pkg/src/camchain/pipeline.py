"""End-to-end orchestration: simulate, stitch, evaluate, bench.

The in-memory path (``run_scenario``) and the file path (``simulate`` then
``stitch`` then ``evaluate`` over an output directory) produce identical
artifacts byte for byte: the frame barrier makes snapshot content
independent of delivery order, and the engine is deterministic given
snapshots. ``report.json`` carries no wall-clock numbers; timing lives only
in ``bench_report.json``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .formats import (
    TrajRow,
    dump_json,
    load_json,
    meta_from_dict,
    read_events,
    read_observations,
    read_trajectories,
    parse_topology,
    read_truth_handovers,
    read_truth_obs,
    scenario_from_dict,
    scenario_to_dict,
    topology_to_dict,
    updates_from_rows,
    write_events,
    write_observations,
    write_trajectories,
    write_truth_handovers,
    write_truth_obs,
    write_truth_tracks,
)
from .handover import HandoverEngine, HandoverEvent, KinematicsConfig, MatcherConfig
from .metrics import (
    ObsKey,
    compute_hosr,
    compute_idf1,
    count_id_switches,
    gid_index,
    summarize_throughput,
)
from .simulator import ScenarioConfig, SimResult, TrueHandover, TruthObs, run_sim
from .sync import BarrierConfig, StreamUpdate, SyncBarrier
from .topology import TopologyGraph

OBSERVATIONS = "observations.csv"
TRAJECTORIES = "trajectories.csv"
EVENTS = "events.csv"
TRUTH_OBS = "truth_observations.csv"
TRUTH_TRACKS = "truth_tracks.csv"
TRUTH_HANDOVERS = "truth_handovers.csv"
TOPOLOGY = "topology.json"
SCENARIO = "scenario.json"
META = "meta.json"
REPORT = "report.json"
BENCH_REPORT = "bench_report.json"


@dataclass
class StitchResult:
    engine: HandoverEngine
    snapshots: int
    barrier_stats: dict
    snapshot_seconds: list[float] = field(default_factory=list)
    occupancy: list[int] = field(default_factory=list)

    @property
    def events(self) -> list[HandoverEvent]:
        return self.engine.events

    def trajectory_rows(self, frame_rate: float) -> list[TrajRow]:
        rows = []
        for gid in sorted(self.engine.trajectories):
            traj = self.engine.trajectories[gid]
            for st in traj.states:
                kin = st.kin
                rows.append(
                    TrajRow(
                        global_id=gid,
                        frame_index=int(round(st.t * frame_rate)),
                        camera_id=st.camera_id,
                        local_id=st.local_id,
                        t=st.t,
                        x_m=st.pos.x,
                        y_m=st.pos.y,
                        speed_kmh=kin.speed_kmh if kin else None,
                        heading_rad=kin.heading_rad if kin else None,
                        status=kin.status.value if kin and kin.status else None,
                    )
                )
        return rows


def stitch_updates(
    topology: TopologyGraph,
    updates: Iterable[StreamUpdate],
    matcher: Optional[MatcherConfig] = None,
    kinematics: Optional[KinematicsConfig] = None,
    max_lag: Optional[int] = None,
    timing: bool = False,
) -> StitchResult:
    """Feed per-camera updates through the frame barrier into the engine."""
    barrier = SyncBarrier(BarrierConfig(camera_ids=topology.camera_ids, max_lag=max_lag))
    engine = HandoverEngine(topology, matcher, kinematics)
    result = StitchResult(engine=engine, snapshots=0, barrier_stats={})

    def consume(snap) -> None:
        if timing:
            t0 = time.perf_counter()
            engine.process_snapshot(snap)
            result.snapshot_seconds.append(time.perf_counter() - t0)
        else:
            engine.process_snapshot(snap)
        result.occupancy.append(engine.total_buffered())
        result.snapshots += 1

    for u in updates:
        barrier.ingest(u)
        while True:
            snap = barrier.try_release()
            if snap is None:
                break
            consume(snap)
    for snap in barrier.drain():
        consume(snap)
    s = barrier.stats
    result.barrier_stats = {
        "ingested": s.ingested,
        "released": s.released,
        "dropped_late": s.dropped_late,
        "peak_pending": s.peak_pending,
    }
    return result


def evaluate_stitch(
    truth_handovers: list[TrueHandover],
    truth_obs: list[TruthObs],
    gids: dict[ObsKey, int],
    event_counts: dict[str, int],
    gids_minted: Optional[int] = None,
) -> dict:
    hosr = compute_hosr(truth_handovers, truth_obs, gids)
    ids = compute_idf1(truth_obs, gids)
    switches = count_id_switches(truth_obs, gids)
    return {
        "hosr": {"total": hosr.total, "matched": hosr.matched, "value": hosr.value},
        "idf1": {
            "idtp": ids.idtp, "idfp": ids.idfp, "idfn": ids.idfn, "value": ids.idf1,
        },
        "id_switches": switches,
        "events": dict(sorted(event_counts.items())),
        "identities": {
            "minted": gids_minted,
            "true_vehicles": len({o.vehicle_id for o in truth_obs}),
        },
        "observations": len(truth_obs),
    }


def run_scenario(
    cfg: ScenarioConfig,
    seed: int,
    matcher: Optional[MatcherConfig] = None,
    kinematics: Optional[KinematicsConfig] = None,
    max_lag: Optional[int] = None,
    timing: bool = False,
) -> tuple[SimResult, StitchResult, dict]:
    """Simulate, stitch, and score one scenario in memory."""
    sim = run_sim(cfg, seed)
    stitch = stitch_updates(
        sim.topology, sim.updates, matcher, kinematics, max_lag, timing
    )
    gids = gid_index(stitch.engine.trajectories.values(), cfg.frame_rate)
    report = evaluate_stitch(
        sim.truth_handovers,
        sim.truth_obs,
        gids,
        dict(stitch.engine.counts),
        stitch.engine.gids_minted,
    )
    return sim, stitch, report


# -- file-level commands --------------------------------------------------------


def write_simulation(
    sim: SimResult, out_dir: str | Path, matcher: Optional[MatcherConfig] = None
) -> None:
    """Dump a simulation; with a matcher the topology file is self-describing."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dump_json(out / SCENARIO, scenario_to_dict(sim.config))
    dump_json(out / TOPOLOGY, topology_to_dict(sim.topology, matcher))
    dump_json(out / META, sim.meta)
    write_observations(out / OBSERVATIONS, sim.updates)
    write_truth_obs(out / TRUTH_OBS, sim.truth_obs)
    write_truth_tracks(out / TRUTH_TRACKS, sim.truth_tracks)
    write_truth_handovers(out / TRUTH_HANDOVERS, sim.truth_handovers)


def simulate_to_dir(cfg: ScenarioConfig, seed: int, out_dir: str | Path) -> SimResult:
    sim = run_sim(cfg, seed)
    write_simulation(sim, out_dir)
    return sim


def stitch_dir(
    in_dir: str | Path,
    out_dir: Optional[str | Path] = None,
    matcher: Optional[MatcherConfig] = None,
    kinematics: Optional[KinematicsConfig] = None,
    max_lag: Optional[int] = None,
    topology_path: Optional[str | Path] = None,
) -> StitchResult:
    """Stitch observations.csv (plus topology and meta) from a directory.

    With ``matcher=None`` the topology file's matcher section applies
    (package defaults when the file has none).
    """
    src = Path(in_dir)
    out = Path(out_dir) if out_dir is not None else src
    topology, file_matcher = parse_topology(
        topology_path if topology_path is not None else src / TOPOLOGY
    )
    if matcher is None:
        matcher = file_matcher
    meta = meta_from_dict(load_json(src / META))
    rows = read_observations(src / OBSERVATIONS)
    updates = updates_from_rows(
        rows, topology.camera_ids, meta["frame_count"], meta["frame_rate"]
    )
    stitch = stitch_updates(topology, updates, matcher, kinematics, max_lag)
    out.mkdir(parents=True, exist_ok=True)
    write_trajectories(out / TRAJECTORIES, stitch.trajectory_rows(meta["frame_rate"]))
    write_events(out / EVENTS, stitch.events)
    return stitch


def evaluate_dir(in_dir: str | Path, out_dir: Optional[str | Path] = None) -> dict:
    """Score trajectories.csv in a directory against its truth tables."""
    src = Path(in_dir)
    out = Path(out_dir) if out_dir is not None else src
    truth_obs = read_truth_obs(src / TRUTH_OBS)
    truth_handovers = read_truth_handovers(src / TRUTH_HANDOVERS)
    traj_rows = read_trajectories(src / TRAJECTORIES)
    gids: dict[ObsKey, int] = {}
    minted = set()
    for r in traj_rows:
        gids[(r.frame_index, r.camera_id, r.local_id)] = r.global_id
        minted.add(r.global_id)
    counts: dict[str, int] = {}
    events_path = src / EVENTS
    if events_path.exists():
        for ev in read_events(events_path):
            counts[ev.kind] = counts.get(ev.kind, 0) + 1
    report = evaluate_stitch(truth_handovers, truth_obs, gids, counts, len(minted))
    out.mkdir(parents=True, exist_ok=True)
    dump_json(out / REPORT, report)
    return report


def run_to_dir(
    cfg: ScenarioConfig,
    seed: int,
    out_dir: str | Path,
    matcher: Optional[MatcherConfig] = None,
    kinematics: Optional[KinematicsConfig] = None,
    max_lag: Optional[int] = None,
) -> dict:
    """simulate + stitch + evaluate into one directory, all in memory."""
    sim, stitch, report = run_scenario(cfg, seed, matcher, kinematics, max_lag)
    out = Path(out_dir)
    write_simulation(sim, out, matcher if matcher is not None else MatcherConfig())
    write_trajectories(out / TRAJECTORIES, stitch.trajectory_rows(cfg.frame_rate))
    write_events(out / EVENTS, stitch.events)
    dump_json(out / REPORT, report)
    return report


def bench_scenario(
    cfg: ScenarioConfig,
    seed: int,
    matcher: Optional[MatcherConfig] = None,
    kinematics: Optional[KinematicsConfig] = None,
    out_dir: Optional[str | Path] = None,
) -> dict:
    """Timed stitching run; the only artifact with wall-clock numbers."""
    sim = run_sim(cfg, seed)
    stitch = stitch_updates(
        sim.topology, sim.updates, matcher, kinematics, timing=True
    )
    bench = {
        "scenario": cfg.name,
        "seed": seed,
        "regime": cfg.regime.value,
        "frame_rate": cfg.frame_rate,
        "cameras": cfg.n_cameras,
        "vehicles": len(sim.truth_tracks),
        "observations": len(sim.truth_obs),
        "throughput": summarize_throughput(
            stitch.snapshot_seconds, cfg.frame_rate, stitch.occupancy
        ),
        "barrier": stitch.barrier_stats,
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        dump_json(out / BENCH_REPORT, bench)
    return bench
