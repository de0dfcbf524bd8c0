import json

import pytest

from moonframe.catalog import (
    CheckResult,
    builtin_frame,
    emit_report,
    frame_fixture,
    frame_fixture_meta,
    golay_fixture,
    golay_dodecad_pair,
    hadamard12,
    report_passed,
    store_discovery,
)
from moonframe.errors import FixtureError
from moonframe.lattice import Frame
from moonframe.zkcode import BinaryCode, ZkCode


def test_golay_fixture_verifies(golay):
    assert golay.dim == 12
    assert golay.dual() == golay
    assert golay.min_weight() == 8
    dist = golay.weight_distribution()
    assert sum(dist) == 4096
    assert dist[8] == 759
    assert dist[12] == 2576
    assert dist[0] == dist[24] == 1


def test_corrupt_golay_rejected(tmp_path, monkeypatch):
    import moonframe.catalog as cat
    bad = "\n".join("0" * 24 for _ in range(12))
    monkeypatch.setattr(cat, "_fixture_text", lambda name: bad)
    with pytest.raises(FixtureError):
        cat.golay_fixture()


def test_hadamard12():
    h = hadamard12()
    for i in range(12):
        assert sum(x * x for x in h[i]) == 12
        for j in range(i + 1, 12):
            assert sum(x * y for x, y in zip(h[i], h[j])) == 0


def test_dodecad_pair(golay):
    s, t = golay_dodecad_pair(golay)
    assert len(s) == len(t) == 12
    assert sorted(s + t) == list(range(24))
    mask = sum(1 << i for i in s)
    assert golay.contains(mask)


def test_builtin_frames_verify(leech):
    for k in (2, 3, 4):
        builtin_frame(k).verify(leech)
    with pytest.raises(ValueError):
        builtin_frame(5)


def test_shipped_frame_fixtures(leech):
    for name in ("leech_k2_seed0", "leech_k3_seed0"):
        frame = frame_fixture(name, leech)
        meta = frame_fixture_meta(name)
        assert meta["kind"] == "frame"
        assert meta["seed"] is not None
        assert frame.k == meta["k"]


def test_store_and_reload_frame(tmp_path, leech):
    frame = builtin_frame(2)
    path = store_discovery(frame, tmp_path, "f2", seed=7, budget_used=0.5,
                           lattice=leech)
    again = Frame.from_file(path)
    assert again == frame
    meta = json.loads((tmp_path / "frames" / "f2.meta.json").read_text())
    assert meta["seed"] == 7
    # byte-stable roundtrip of the payload
    path2 = store_discovery(again, tmp_path, "f2b", lattice=leech)
    assert path.read_text() == path2.read_text()


def test_store_rejects_truncated_frame(tmp_path, leech):
    frame = builtin_frame(2)
    clipped = Frame(frame.vectors[:23], 2)
    with pytest.raises(Exception):
        store_discovery(clipped, tmp_path, "bad", lattice=leech)


def test_store_code(tmp_path, code_k2):
    path = store_discovery(code_k2, tmp_path, "k2code")
    assert ZkCode.from_file(path) == code_k2


def test_store_rejects_non_type_ii(tmp_path):
    code = ZkCode([[1, 1, 1, 1], [0, 2, 0, 2], [0, 0, 2, 2]], 4)
    with pytest.raises(ValueError):
        store_discovery(code, tmp_path, "bad")


def test_emit_report_schema():
    rep = emit_report([])
    assert rep == {"schema": 1, "checks": []}
    rep = emit_report([
        CheckResult.ok("character_coeff_q2", value=196884),
        CheckResult.fail("identity", first_mismatch_exponent="3/2",
                         lhs=2, rhs=3),
    ])
    assert rep["checks"][0]["status"] == "pass"
    assert rep["checks"][0]["witness"]["value"] == "196884"
    assert rep["checks"][1]["witness"]["lhs"] == "2"
    assert not report_passed(rep)
    json.dumps(rep)  # must be serializable as-is
