import json
import math

import numpy as np
import pytest

from cnoidal_lab._io import fmt, write_csv, write_json
from cnoidal_lab.config import DEFAULTS, RunConfig


def test_defaults():
    assert DEFAULTS.grid_m == 256 and DEFAULTS.kernel_tol == 1e-7
    assert DEFAULTS.identity_tol == 1e-6 and DEFAULTS.dt == 1e-3


@pytest.mark.parametrize(
    "changes", [{"grid_m": 63}, {"grid_m": 32}, {"kernel_tol": 0.0}, {"identity_tol": -1.0}, {"dt": 0.0}]
)
def test_invalid_configs(changes):
    with pytest.raises(ValueError):
        RunConfig(**changes)


def test_digest_tracks_numerics_only():
    a = RunConfig()
    assert a.digest() == RunConfig(out_dir="/elsewhere").digest()
    assert a.digest() != a.with_(seed=1).digest()
    assert len(a.digest()) == 16


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, 1e-300, -2.5e10, math.pi):
        assert float(fmt(x)) == x
    assert fmt("tag") == "tag" and fmt(7) == "7" and fmt(True) == "pass"


def test_csv_and_json(tmp_path):
    p = write_csv(tmp_path / "sub" / "a.csv", ["x", "y"], [[0.1, 2], [np.float64(3.0), 4]], {"z": 1, "a": "b"})
    lines = p.read_text().splitlines()
    assert lines[0] == "x,y"
    assert lines[1] == "0.10000000000000001,2"
    assert lines[-1] == "# a=b z=1"
    q = write_json(tmp_path / "r.json", {"b": np.float64(0.5), "a": [np.int64(2), np.bool_(True)]})
    assert json.loads(q.read_text()) == {"a": [2, True], "b": 0.5}
