import json
from pathlib import Path

import pytest

from geognss import engine
from geognss.scenario import load_scenario

REPO = Path(__file__).resolve().parent.parent
SCENARIOS = REPO / "scenarios"

SMALL_SCENARIO = """\
name = "small"
start = "2008-03-22T00:00:00"
duration_s = 7200.0
step_s = 300.0

receiver_name = "geo-rx"
receiver_semi_major_axis_km = 42166.892
receiver_inclination_deg = 1.02
receiver_raan_deg = 209.006

[[constellation]]
name = "gps"
band = "L1"
source = "walker"
walker_total = 12
walker_planes = 3
walker_phasing = 1
walker_semi_major_axis_km = 26560.0
walker_inclination_deg = 55.0

[[constellation]]
name = "galileo"
band = "E1"
source = "walker"
walker_total = 9
walker_planes = 3
walker_phasing = 1
walker_semi_major_axis_km = 29600.318
walker_inclination_deg = 56.0
"""


@pytest.fixture()
def small_scenario_file(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(SMALL_SCENARIO)
    return path


@pytest.fixture(scope="session")
def reference_run(tmp_path_factory):
    """One full run of the 48 h reference scenario, shared by acceptance tests."""
    out = tmp_path_factory.mktemp("reference_out")
    config = load_scenario(SCENARIOS / "meteosat9.toml")
    report = engine.run(config, out_dir=out)
    return {"config": config, "report": report, "out": out}


@pytest.fixture(scope="session")
def reference_links(reference_run):
    """links.csv parsed into per-column lists."""
    rows = (reference_run["out"] / "links.csv").read_text().splitlines()
    header = rows[0].split(",")
    cols = {name: [] for name in header}
    for line in rows[1:]:
        for name, cell in zip(header, line.split(",")):
            cols[name].append(cell)
    return cols


def load_report(out_dir):
    return json.loads((Path(out_dir) / "run_report.json").read_text())
