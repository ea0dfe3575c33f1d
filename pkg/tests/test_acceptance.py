"""Acceptance criteria, one test each, with a pass/fail line in the summary."""

import contextlib
import io
import math
import time

import numpy as np

from freeelastica import cli, verify
from freeelastica.elastica import THETA_STAR, elastica_angle, elastica_position
from freeelastica.elliptic import SQRT2, complete_K, paper_constants
from freeelastica.obstacle import Classification, assemble_solution
from freeelastica.oracle import compare


@contextlib.contextmanager
def criterion(log, number, title, budget):
    """Time the body, which must set ``state["ok"]`` and ``state["detail"]``."""
    state = {"ok": False, "detail": ""}
    t0 = time.perf_counter()
    try:
        yield state
    finally:
        elapsed = time.perf_counter() - t0
        ok = state["ok"] and elapsed < budget
        log.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {state['detail']} "
                   f"({elapsed:.2f} s, budget {budget:g} s)")
    assert state["ok"], state["detail"]
    assert elapsed < budget, f"runtime {elapsed:.2f} s exceeds {budget} s"


def _suite_summary(results):
    worst = max(results, key=lambda r: (not r.passed, r.metric))
    bad = [r.name for r in results if not r.passed]
    return not bad, f"{len(results) - len(bad)}/{len(results)} checks pass" + (
        f", failing: {', '.join(bad)}" if bad else f", largest metric {worst.metric:.3e}")


def test_01_constants(acceptance_log):
    with criterion(acceptance_log, 1, "constants", 1.0) as st:
        c = paper_constants()
        dh = abs(c.h_star - 1.66925368)
        dt = abs(c.theta_star - 1.03106)
        st["ok"] = dh < 1e-8 and dt < 1e-5
        st["detail"] = f"|h* - 1.66925368| = {dh:.2e}, |theta* - 1.03106| = {dt:.2e}"


def test_02_quarter_period(acceptance_log):
    with criterion(acceptance_log, 2, "quarter-period identities", 1.0) as st:
        K = complete_K(1 / SQRT2)
        c = paper_constants()
        da = abs(elastica_angle(K) - math.pi / 2)
        dp = float(np.max(np.abs(elastica_position(K) - (c.c_star / SQRT2, SQRT2))))
        st["ok"] = da < 1e-10 and dp < 1e-8
        st["detail"] = f"angle error {da:.2e}, endpoint error {dp:.2e}"


def test_03_derivative_identity(acceptance_log):
    with criterion(acceptance_log, 3, "derivative identity (10 curves)", 10.0) as st:
        results = verify.derivative_identity_suite(0)
        st["ok"], st["detail"] = _suite_summary(results)
        st["ok"] = st["ok"] and len(results) == 10


def test_04_sign_characterization(acceptance_log):
    with criterion(acceptance_log, 4, "sign characterization", 10.0) as st:
        results = verify.sign_suite(0)
        ok, detail = _suite_summary(results)
        nodes = sum(int(r.detail.split()[0]) for r in results)
        st["ok"], st["detail"] = ok, f"{detail}, {nodes} nodes"


def test_05_tait_kneser(acceptance_log):
    with criterion(acceptance_log, 5, "Tait-Kneser nesting", 5.0) as st:
        r = verify.tait_kneser_suite(200)[0]
        st["ok"] = r.passed and r.name == "tait_kneser[canonical_branch]"
        st["detail"] = f"{r.detail}, min margin {r.metric:.3e}"


def test_06_omega_star(acceptance_log):
    with criterion(acceptance_log, 6, "monotone omega*", 5.0) as st:
        results = verify.omega_star_suite(2048)
        st["ok"], st["detail"] = _suite_summary(results)
        rng = next(r for r in results if r.name == "omega_star_range")
        st["detail"] += f"; endpoint gap {rng.metric:.2e} (theta* = {THETA_STAR:.8f})"


def test_07_trichotomy(acceptance_log):
    with criterion(acceptance_log, 7, "trichotomy and invariants", 10.0) as st:
        h_star = paper_constants().h_star
        wrong = []
        for h in (0.1, 0.5, 1.0, 1.5, 1.66):
            v = assemble_solution(h)  # raises if any invariant fails
            if v.classification is not Classification.UNIQUE_SYMMETRIC or \
                    v.solution.residuals["ode"] >= 1e-6:
                wrong.append(h)
        for h in (h_star, 1.7, 2.0, 10.0):
            if assemble_solution(h).classification is not Classification.NO_MINIMIZER:
                wrong.append(h)
        st["ok"] = not wrong
        st["detail"] = "9/9 heights classified" if not wrong else f"misclassified {wrong}"


def test_08_oracle_agreement(acceptance_log):
    with criterion(acceptance_log, 8, "oracle agreement", 300.0) as st:
        parts, ok = [], True
        for h in (0.5, 1.0, 1.5):
            rep = compare(h)
            g801 = next(g for g in rep["grids"] if g["n"] == 801)
            good = (rep["rel_gap"] < 5e-3 and g801["shape_sup_gap"] < 1e-2
                    and g801["converged"] and g801["active_set"] == [400])
            ok = ok and good
            parts.append(f"h={h}: rel {rep['rel_gap']:.1e}, shape {g801['shape_sup_gap']:.1e}")
        st["ok"], st["detail"] = ok, "; ".join(parts)


def test_09_jacobi(acceptance_log):
    with criterion(acceptance_log, 9, "Jacobi identities", 2.0) as st:
        st["ok"], st["detail"] = _suite_summary(verify.jacobi_suite(0, 1000))


def _cli_outputs(directory, args):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main([*args, "--out", str(directory)])
    files = {p.name: p.read_bytes() for p in sorted(directory.iterdir())}
    return code, buf.getvalue(), files


def test_10_determinism(acceptance_log, tmp_path):
    with criterion(acceptance_log, 10, "determinism", 60.0) as st:
        same = []
        for args in (["verify"], ["solve", "--h", "1.0"]):
            runs = []
            for k in (1, 2):
                d = tmp_path / f"{args[0]}_{k}"
                d.mkdir()
                runs.append(_cli_outputs(d, args))
            same.append(runs[0] == runs[1] and runs[0][0] == 0 and runs[0][2])
        st["ok"] = all(same)
        st["detail"] = "verify and solve --h 1.0 byte-identical" if st["ok"] else \
            f"identical: verify={same[0]}, solve={same[1]}"
