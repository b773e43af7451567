from pathlib import Path

import pytest
from hypothesis import settings

from camchain import ScenarioConfig, ScriptedVehicle, run_to_dir

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def single_vehicle_cfg() -> ScenarioConfig:
    """One scripted car crossing all three default cameras; done by t=40."""
    return ScenarioConfig(
        name="one-car",
        duration_s=40.0,
        scripted_vehicles=(ScriptedVehicle(spawn_t=0.0, speed_kmh=54.0),),
    )


@pytest.fixture(scope="session")
def single_vehicle_run(single_vehicle_cfg, tmp_path_factory):
    """That run written to disk once, shared by read-only file tests."""
    out = tmp_path_factory.mktemp("one_car_run")
    report = run_to_dir(single_vehicle_cfg, 7, out)
    return out, single_vehicle_cfg, report
