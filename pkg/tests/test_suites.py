import pytest

from almostcx.fixtures import (
    broken_d_squared, kodaira_thurston, kodaira_thurston_integrable, torus,
)
from almostcx.manifest import manifest_for
from almostcx.report import run_suite
from almostcx.suites import INVARIANTS, REGISTRY, SUITES, checks_for


def test_every_invariant_names_a_registered_check():
    for module, items in INVARIANTS.items():
        for desc, names in items:
            for name in names:
                assert name in REGISTRY, (module, desc, name)


def test_every_check_covers_an_invariant():
    covered = {n for items in INVARIANTS.values() for _, names in items for n in names}
    validate_only = {"validate.d_is_sum_of_parts"}
    assert set(REGISTRY) - covered <= validate_only


def test_suites_partition_registry():
    names = [c.name for s in SUITES for c in checks_for(s)]
    assert sorted(names) == sorted(REGISTRY)
    with pytest.raises(ValueError):
        checks_for("nope")


@pytest.mark.parametrize("spec", [torus(2), kodaira_thurston(), kodaira_thurston_integrable()],
                         ids=lambda s: s.name)
def test_all_suites_on_four_dimensional_frames(spec):
    rep = run_suite(manifest_for(spec), "all", seed=3)
    assert rep.passed, [r for r in rep.records if r.status == "fail"]
    allowed = {"frame is not integrable", "frame is not abelian",
               "no (n,0)-form defines a Dolbeault class on this frame"}
    for r in rep.records:
        if r.status == "skip":
            assert r.reason in allowed or r.name.startswith("input."), r


def test_broken_frame_fails_only_structure_checks():
    rep = run_suite(manifest_for(broken_d_squared()), "validate", seed=0)
    failed = {r.name for r in rep.records if r.status == "fail"}
    assert {"validate.d_squared", "validate.d_squared_split"} <= failed


def test_identity_suite_is_prefixed_by_structure_check():
    rep = run_suite(manifest_for(torus(2)), "bracket", seed=0)
    assert rep.records[0].name == "validate.d_squared"
