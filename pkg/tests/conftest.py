import json
from pathlib import Path

import pytest

from cstrict import (
    FiniteAsComputable,
    FiniteCategory,
    FunctorData,
    Presheaf,
    StrictifyJob,
)

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def load_job(name: str) -> StrictifyJob:
    with open(JOBS / name) as fh:
        return StrictifyJob.from_json(json.load(fh), name=name)


@pytest.fixture
def interval() -> FiniteCategory:
    """The category 0 -> 1."""
    return FiniteCategory(
        objects=("0", "1"),
        morphisms={"id0": ("0", "0"), "id1": ("1", "1"), "a": ("0", "1")},
        identities={"0": "id0", "1": "id1"},
        composition={
            ("id0", "id0"): "id0",
            ("id1", "id1"): "id1",
            ("id0", "a"): "a",
            ("a", "id1"): "a",
        },
        name="interval",
    )


@pytest.fixture
def point_into_interval(interval):
    """Inclusion of the single object 0 into the interval, with a two-element
    presheaf over the point: the smallest extension example."""
    sub = FiniteCategory(
        objects=("0",),
        morphisms={"id0": ("0", "0")},
        identities={"0": "id0"},
        composition={("id0", "id0"): "id0"},
        name="point",
    )
    source = FiniteAsComputable(sub)
    target = FiniteAsComputable(interval, {"0": 0, "1": 1})
    i = FunctorData(source, target, lambda x: x, lambda f: f, name="i")
    P = Presheaf(source, lambda y: ("s1", "s2"), lambda f, e: e, label="S")
    return i, P
