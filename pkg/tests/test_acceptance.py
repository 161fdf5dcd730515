"""Acceptance criteria 1-10, one PASS/FAIL line each."""
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from almostcx import Form, Scalar, VectorForm, nijenhuis, validate_frame
from almostcx.algebra import OFFSET, antihol, basis_masks, hol
from almostcx.cohomology import (
    dolbeault_cohomology, mu_bar_cohomology, n0_closedness_predicate, native_dbar,
    torus_dimension,
)
from almostcx.contraction import contract, contract_general
from almostcx.deformation import deform_structure
from almostcx.fixtures import (
    f2, f3, kodaira_thurston, phi_t, top_form, torus, valid_frames,
)
from almostcx.frame import FrameSpec, basis_sweep, d_squared_split, mu_bar
from almostcx.manifest import manifest_for
from almostcx.report import run_suite
from almostcx.suites import Context, checks_for

ROOT = Path(__file__).resolve().parent.parent
SEED = 2024
N_RANDOM = 20


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number: int, title: str):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as e:
            with capsys.disabled():
                print(f"\ncriterion {number:>2} FAIL  {title}: {e}")
            raise
        with capsys.disabled():
            print(f"\ncriterion {number:>2} PASS  {title} ({time.perf_counter() - t0:.2f}s)")
    return run


def _suite_over(suite, frames, max_degree=None):
    """Run one suite per frame and collect (frame name, record) pairs."""
    records = []
    for spec in frames:
        rep = run_suite(manifest_for(spec), suite, seed=SEED, max_degree=max_degree,
                        n_random=N_RANDOM)
        records += [(spec.name, r) for r in rep.records]
    return records


def _assert_all_pass(records, suite):
    failed = [(f, r.name, r.witness) for f, r in records if r.status == "fail"]
    assert not failed, failed
    names = {c.name for c in checks_for(suite)}
    ran = {r.name for _, r in records if r.status == "pass"}
    assert names <= ran, names - ran


def test_criterion_01_frame_integrity(criterion):
    with criterion(1, "frame integrity on F0, F2 and a nilmanifold frame"):
        t0 = time.perf_counter()
        frames = [FrameSpec(s.n, s.dtheta, s.name) for s in (torus(2), f2(), kodaira_thurston())]
        for spec in frames:
            assert validate_frame(spec).passed
            for a in basis_sweep(spec):
                split = d_squared_split(spec, a)
                assert len(split) == 7 and not any(split.values()), (spec.name, a)
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0, f"{elapsed:.2f}s"


def test_criterion_02_nijenhuis(criterion):
    with criterion(2, "mu_bar equals a quarter of the Nijenhuis tensor"):
        for spec in valid_frames():
            N = nijenhuis(spec)
            for g in range(1, spec.n + 1):
                want = N.component(hol(g)).project(0, 2).scale(Scalar(1) / 4)
                assert mu_bar(spec, Form.coframe(g)) == want, spec.name
        # derived oracle: [e_2bar, e_3bar] = -e_1 on F2, so N(e_2bar, e_3bar) = 4 e_1
        N = nijenhuis(f2())
        assert N.component(hol(1)).coeff(antihol(2), antihol(3)) == Scalar(4)


def test_criterion_03_contraction_coherence(criterion):
    with criterion(3, "contract equals contract_general on the exhaustive n=3 sweep"):
        n = 3
        positions = list(range(n)) + [OFFSET + k for k in range(n)]
        words = [m for m in basis_masks(n) if bin(m).count("1") <= 2]
        targets = [Form.basis(m) for m in basis_masks(n)]
        checked = mismatches = 0
        for m in words:
            for p in positions:
                rho = VectorForm._wrap({(m, p): Scalar(1)})
                for a in targets:
                    checked += 1
                    mismatches += contract(rho, a) != contract_general(rho, a)
        assert checked == len(words) * 6 * 64
        assert mismatches == 0


def test_criterion_04_bracket_suite(criterion):
    with criterion(4, "bracket identities over fixtures and 20 seeded inputs"):
        t0 = time.perf_counter()
        records = _suite_over("bracket", [torus(2), torus(3), f2(), f3(), kodaira_thurston()])
        elapsed = time.perf_counter() - t0
        _assert_all_pass(records, "bracket")
        assert elapsed < 10.0, f"{elapsed:.2f}s"


def test_criterion_05_extension_suite(criterion):
    with criterion(5, "extension formulas at n=3, all bidegrees, 20 Beltrami matrices"):
        for spec in (torus(3), f2(), f3()):
            ctx = Context(manifest_for(spec), SEED, None, N_RANDOM)
            assert len(ctx.beltramis) >= 20
            assert {a.bidegree() for a in ctx.basis} == {
                (p, q) for p in range(4) for q in range(4)}
        t0 = time.perf_counter()
        records = _suite_over("extension", [torus(3), f2(), f3()])
        elapsed = time.perf_counter() - t0
        _assert_all_pass(records, "extension")
        assert elapsed < 60.0, f"{elapsed:.2f}s"


def test_criterion_06_extended_operator(criterion):
    with criterion(6, "extended operator identities, bijectivity, reality, basis independence"):
        records = _suite_over("decomposition", [f2(), f3(), kodaira_thurston()])
        _assert_all_pass(records, "decomposition")


def test_criterion_07_o_chain(criterion):
    with criterion(7, "d of the extended operator and its four type parts"):
        records = _suite_over("ochain", [torus(3), f2(), f3()])
        _assert_all_pass(records, "ochain")


def test_criterion_08_applications(criterion):
    with criterion(8, "deformation criteria agree with native evaluation"):
        records = _suite_over("applications", valid_frames())
        failed = [(f, r.name, r.residual) for f, r in records if r.status == "fail"]
        assert not failed, failed
        evaluated = {}
        for _, r in records:
            evaluated[r.name] = evaluated.get(r.name, 0) + r.evaluated
        for name in ("applications.n0_closedness", "applications.n0_class",
                     "applications.nq_closedness"):
            assert evaluated[name] > 0, name
        ds = deform_structure(f2(), phi_t())
        assert n0_closedness_predicate(ds, top_form(3)) is True
        assert not native_dbar(ds, top_form(3))


def test_criterion_09_cohomology_anchor(criterion):
    with criterion(9, "torus Dolbeault dimensions and the F2 top-degree class"):
        for n in (2, 3):
            for p in range(n + 1):
                for q in range(n + 1):
                    assert dolbeault_cohomology(torus(n), p, q).dim == torus_dimension(n, p, q)
        assert mu_bar_cohomology(f2(), 3, 0).dim == 0


def _cli_report(manifest, *extra):
    cmd = [sys.executable, "-m", "almostcx.cli", "--manifest", str(manifest), "--seed", "7",
           *extra, "check", "--suite", "all", "--format", "json"]
    res = subprocess.run(cmd, capture_output=True)
    assert res.returncode == 0, res.stderr.decode()
    return res.stdout


def test_criterion_10_determinism(criterion):
    with criterion(10, "repeated check --suite all runs are byte-identical"):
        for manifest, extra in ((ROOT / "manifests" / "KT.json", ()),
                                (ROOT / "manifests" / "F2.json", ("--max-degree", "2"))):
            first = _cli_report(manifest, *extra)
            assert first
            assert _cli_report(manifest, *extra) == first
