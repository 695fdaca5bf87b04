"""End-to-end runs of all gates on the shipped jobs.

Passing jobs must clear every gate; the broken jobs must fail at exactly
the gate their defect targets, with everything downstream skipped.
"""

import pytest

from conftest import load_job

from cstrict import (
    CSystem,
    CSystemHom,
    GateFailure,
    MalformedInputError,
    StrictifyJob,
    strictify,
    verify_theorem,
)

GATE_ORDER = [
    "source-axioms",
    "ambient-fragment",
    "injective-on-morphisms",
    "image-csystem",
    "restricted-hom",
    "comma-filtered",
    "universe-preservation",
    "point-image-final",
    "representable-comparison",
    "generated-source",
    "rep-chain",
    "universe-hom",
    "generated-target",
    "lifted-hom",
    "tau-chain",
    "final-iso",
    "stabilization",
]


def _verdicts(report):
    return {g.name: g.verdict for g in report.gates}


def test_gate_order_is_stable():
    report = verify_theorem(load_job("unit-identity.json"))
    assert [g.name for g in report.gates] == GATE_ORDER


def test_identity_job_passes():
    report = verify_theorem(load_job("unit-identity.json"))
    assert report.passed
    assert report.objects_checked > 0
    assert report.squares_checked > 0
    assert report.bounds == {"fragment": 3, "probe": 3, "truncation": 3}


def test_cone_job_passes():
    report = verify_theorem(load_job("unit-cone.json"))
    assert report.passed
    assert _verdicts(report)["final-iso"] == "pass"


def test_onetype_job_passes():
    report = verify_theorem(load_job("onetype-identity.json"))
    assert report.passed
    assert report.bounds == {"fragment": 2, "probe": 2, "truncation": 2}


def test_disconnected_job_fails_at_preservation():
    report = verify_theorem(load_job("unit-disconnected.json"))
    assert not report.passed
    verdicts = _verdicts(report)
    assert verdicts["universe-preservation"] == "fail"
    gate = next(g for g in report.gates if g.name == "universe-preservation")
    assert "at v" in gate.witness
    # everything the construction needs beforehand still passed
    for name in GATE_ORDER[: GATE_ORDER.index("comma-filtered")]:
        assert verdicts[name] == "pass"
    # everything afterwards was skipped, not attempted
    for name in GATE_ORDER[GATE_ORDER.index("point-image-final") :]:
        assert verdicts[name] == "skipped"


def test_noninjective_job_fails_at_injectivity():
    report = verify_theorem(load_job("unit-noninjective.json"))
    assert not report.passed
    verdicts = _verdicts(report)
    assert verdicts["injective-on-morphisms"] == "fail"
    gate = next(g for g in report.gates if g.name == "injective-on-morphisms")
    assert "collide" in gate.witness
    assert verdicts["image-csystem"] == "skipped"


def test_informational_gate_never_blocks():
    report = verify_theorem(load_job("unit-identity.json"))
    cf = next(g for g in report.gates if g.name == "comma-filtered")
    assert cf.informational
    required = [g for g in report.gates if not g.informational]
    assert all(g.verdict == "pass" for g in required)


def test_report_is_deterministic():
    first = verify_theorem(load_job("unit-identity.json")).to_json()
    second = verify_theorem(load_job("unit-identity.json")).to_json()
    assert first == second


def test_report_json_shape():
    data = verify_theorem(load_job("unit-identity.json")).to_json_dict()
    assert set(data) == {"gates", "theorem", "bounds"}
    assert set(data["theorem"]) == {"objects_checked", "squares_checked", "verdict"}
    assert data["theorem"]["verdict"] == "pass"
    for gate in data["gates"]:
        assert set(gate) <= {"name", "verdict", "witness"}
        assert gate["verdict"] in {"pass", "fail", "skipped"}


def test_figure_data_populated():
    report = verify_theorem(load_job("unit-identity.json"))
    assert report.figure_data["stabilization"]
    assert report.figure_data["sigma_sizes"]
    for pair in report.figure_data["stabilization"].values():
        assert pair[0] == pair[1]  # every value stable on a passing job


def test_strictify_returns_construction():
    target, hom = strictify(load_job("unit-identity.json"))
    assert isinstance(target, CSystem)
    assert isinstance(hom, CSystemHom)
    assert hom.name == "strictified"
    assert hom.target is target
    image_of_two = hom.functor.on_obj(2)
    assert target.l(image_of_two) == 2


def test_strictify_raises_on_broken_precondition():
    with pytest.raises(GateFailure) as exc_info:
        strictify(load_job("unit-noninjective.json"))
    assert exc_info.value.gate == "injective-on-morphisms"


def test_bound_zero_job_is_vacuous():
    job = StrictifyJob.from_json({"csystem": "unit", "bound": 0}, name="tiny")
    report = verify_theorem(job)
    assert report.passed
    assert report.bounds == {"fragment": 0, "probe": 0, "truncation": 0}


def test_job_defaults_fill_bounds():
    job = StrictifyJob.from_json({"csystem": "unit", "bound": 2})
    assert job.probe_bound == 2 and job.truncation == 2


@pytest.mark.parametrize(
    "record",
    [
        {},
        {"bound": 3},
        {"csystem": "unit"},
        {"csystem": "unit", "bound": -1},
        {"csystem": "unit", "bound": 2, "truncation": -2},
        {"csystem": "unit", "bound": "three"},
        {"csystem": "unit", "bound": 2, "ambient_patch": {"objects": [{"grade": 1}]}},
    ],
)
def test_malformed_jobs_rejected(record):
    with pytest.raises(MalformedInputError):
        StrictifyJob.from_json(record)
