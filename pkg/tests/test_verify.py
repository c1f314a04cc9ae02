import csv
import io

import pytest

from quditent import verify
from quditent.errors import ArgumentError
from quditent.states import BipartiteDims


def test_parse_dims():
    assert [str(d) for d in verify.parse_dims("2..4")] == ["2x2", "3x3", "4x4"]
    assert [str(d) for d in verify.parse_dims("2,2x3")] == ["2x2", "2x3"]
    for bad in ("", "a", "4..2", "2x", "0"):
        with pytest.raises(ArgumentError):
            verify.parse_dims(bad)


def test_check_names_are_closed():
    assert list(verify.CHECKS) == [
        "qubit-equality",
        "tracenorm-vs-schmidt",
        "operator-vs-schmidt",
        "chen",
        "qutrit-identity",
        "quadrit-corrected",
        "quadrit-paper-printed",
        "lu-invariance",
        "max-values",
        "peres-consistency",
    ]
    with pytest.raises(ArgumentError):
        verify.run_campaign(["bogus"])


def test_dimension_constraints():
    for check, dims in [
        ("qutrit-identity", "4"),
        ("quadrit-corrected", "3"),
        ("qubit-equality", "3"),
        ("chen", "2x3"),
        ("chen", "1"),
    ]:
        with pytest.raises(ArgumentError):
            verify.run_campaign([check], dims, samples=1)
    with pytest.raises(ArgumentError):
        verify.run_check("chen", BipartiteDims(3, 3), 0, 0)


@pytest.mark.parametrize("check", list(verify.CHECKS))
def test_every_check_runs_and_replays(check):
    report = verify.run_campaign([check], samples=300, seed=11)
    for r in report.results:
        entry = r.to_dict()
        replay = verify.reevaluate(check, entry)
        assert abs(replay - entry["worst_value"]) <= 1e-12
        assert entry["max_residual"] == verify.score(check, entry["worst_value"])
        if isinstance(entry["worst_case"], int):
            item = verify.sample_input(check, r.dims, 11, entry["worst_case"])
            assert verify.evaluate(check, item) == entry["worst_value"]
        expected = check != "quadrit-paper-printed"
        assert r.passed is expected


def test_paper_printed_quadrit_fails_at_uniform():
    report = verify.run_campaign(["quadrit-paper-printed"], samples=50, seed=0)
    (r,) = report.results
    assert r.worst_case == "anchor:uniform"
    assert r.worst_value == pytest.approx(-45 / 8, abs=1e-12)
    assert not report.passed


def test_worst_case_independent_of_workers_and_blocks():
    args = (["chen", "lu-invariance"], "2..3", 2 * verify.BLOCK + 17, 5)
    one = verify.run_campaign(*args, workers=1).to_dict()
    four = verify.run_campaign(*args, workers=4).to_dict()
    assert one == four


def test_threads_env(monkeypatch):
    monkeypatch.setenv(verify.THREADS_ENV, "3")
    assert verify.default_workers() == 3
    monkeypatch.setenv(verify.THREADS_ENV, "zero")
    with pytest.raises(ArgumentError):
        verify.default_workers()
    monkeypatch.delenv(verify.THREADS_ENV)
    assert verify.default_workers() == 1


def test_tolerance_override_and_csv():
    report = verify.run_campaign(["operator-vs-schmidt"], "2,3", samples=10, seed=1, tolerance=-1.0)
    assert not report.passed
    rows = list(csv.reader(io.StringIO(report.to_csv())))
    assert rows[0] == ["check", "d", "samples", "max_residual", "tolerance", "pass"]
    assert [r[1] for r in rows[1:]] == ["2", "3"]
    assert all(r[-1] == "false" for r in rows[1:])


def test_campaign_id_depends_on_arguments():
    a = verify.campaign_id(["chen"], "2..8", 10, 1, None)
    assert a == verify.campaign_id(["chen"], "2..8", 10, 1, None)
    assert a != verify.campaign_id(["chen"], "2..8", 10, 2, None)
