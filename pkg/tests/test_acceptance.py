"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` (the summary lines are printed
at the end of the session) or directly with ``python tests/test_acceptance.py``.
"""

import contextlib
import io
import random
import sys
import time

import pytest

from dkcalc import cli
from dkcalc import dkengine as dk
from dkcalc.opcalc import verify_dichotomy, verify_presentations, verify_push_through
from dkcalc.orders import INCL, LP, SIMPLICIAL, SYMMETRIC, is_order_reflecting, linear_extensions, random_total_order
from dkcalc.sgroup import (
    cyclic_complexes,
    make_instance,
    moore_roundtrip,
    verify_symmetric_chain_condition,
    verify_symmetric_invariance,
)

SEED = 20240601
RESULTS: dict[int, tuple[str, bool, str]] = {}


def record(number: int, title: str, ok: bool, detail: str) -> bool:
    RESULTS[number] = (title, ok, detail)
    return ok


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    write = reporter.write_line if reporter else print
    write("")
    for line in summary_lines():
        write(line)


def line_for(number: int) -> str:
    title, ok, detail = RESULTS[number]
    return f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}"


def summary_lines() -> list[str]:
    return [line_for(n) for n in sorted(RESULTS)]


# -- criteria -------------------------------------------------------------------------


def criterion_presentations():
    start = time.perf_counter()
    rep = verify_presentations(4)
    elapsed = time.perf_counter() - start
    ok = rep.ok and elapsed < 10
    return record(1, "presentation tables, n_max=4", ok,
                  f"{sum(r['checked'] for r in rep.rows)} instantiations, "
                  f"{sum(r['failed'] for r in rep.rows)} failures, {elapsed:.1f}s")


def criterion_push_through():
    start = time.perf_counter()
    rep = verify_push_through(6)
    elapsed = time.perf_counter() - start
    return record(2, "push-through equals composite, n<=6", rep.ok and elapsed < 30,
                  f"{rep.passed} checks, {rep.failed} failures, {elapsed:.1f}s")


def criterion_dichotomy():
    rep = verify_dichotomy(5)
    return record(3, "pure-normal-form dichotomy, n<=5", rep.ok, f"{rep.passed} pairs, {rep.failed} exceptions")


def criterion_gamma_roundtrip():
    failures = complexes = 0
    for C in cyclic_complexes(max_order=4, max_length=3):
        complexes += 1
        failures += not moore_roundtrip(C).ok
    return record(4, "Moore complex of Gamma(C) recovers C", failures == 0,
                  f"{complexes} complexes, {failures} failures")


def criterion_sdp():
    start = time.perf_counter()
    inst = make_instance("exponential:3:S3")
    orders = list(linear_extensions(3, SIMPLICIAL, LP)) + list(linear_extensions(3, SYMMETRIC, INCL))
    failures = 0
    for i, order in enumerate(orders):
        uf = dk.verify_unique_factorization(inst, 3, order, trials=100, seed=SEED + i)
        kc = dk.verify_kernel_characterization(inst, 3, order, trials=100, seed=SEED + i)
        failures += uf.failed + kc.failed
    elapsed = time.perf_counter() - start
    lp = sum(o.variant == SIMPLICIAL for o in orders)
    return record(5, "SDP checks on every extension, exponential:3:S3", failures == 0 and elapsed < 600,
                  f"{lp} lp + {len(orders) - lp} incl orders x 100 trials, {failures} failures, {elapsed:.0f}s")


def criterion_closed_forms():
    failures = checks = 0
    for spec in ("gamma", "exponential:3:S3"):
        inst = make_instance(spec)
        for n in range(4):
            rep = dk.verify_closed_forms(inst, n, trials=200, seed=SEED + n)
            failures += rep.failed
            checks += rep.passed + rep.failed
    return record(6, "closed-form components match the recursion", failures == 0,
                  f"{checks} comparisons, {failures} mismatches")


def criterion_abelian():
    inst = make_instance("gamma")
    rng = random.Random(SEED)
    failures = non_extending = 0
    for i in range(500):
        order = random_total_order(3, SIMPLICIAL, rng)
        non_extending += not is_order_reflecting(order)
        rep = dk.verify_unique_factorization(inst, 3, order, trials=10, seed=SEED + i, force=True)
        failures += not rep.ok
    return record(7, "abelian instance factors along any order", failures == 0,
                  f"500 orders ({non_extending} non-extending), {failures} failing")


def criterion_symmetric():
    inst = make_instance("exponential:2:S3")
    failures = checks = 0
    for n in range(4):
        for rep in (verify_symmetric_invariance(inst, n, 200, SEED + n),
                    verify_symmetric_chain_condition(inst, n, 200, SEED + n)):
            failures += rep.failed
            checks += rep.passed + rep.failed
    return record(8, "symmetric invariance and chain condition", failures == 0,
                  f"{checks} checks, {failures} failures")


def _run_cli(argv) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


def criterion_determinism():
    commands = [
        ["verify", "sdp", "--n", "2", "--trials", "5", "--seed", "7"],
        ["verify", "closed-forms", "--n", "2", "--trials", "5", "--seed", "7"],
        ["search", "--n", "2", "--mode", "exhaustive", "--trials", "2", "--seed", "7"],
        ["search", "--n", "3", "--mode", "sample", "--limit", "3", "--trials", "2", "--seed", "7"],
    ]
    identical = 0
    for argv in commands:
        first, second = _run_cli(argv), _run_cli(argv)
        identical += first == second and first[1] != ""
    search = commands[2]
    jobs_ok = _run_cli(search + ["--jobs", "2"]) == _run_cli(search)
    ok = identical == len(commands) and jobs_ok
    return record(9, "repeated commands are byte-identical", ok,
                  f"{identical}/{len(commands)} commands identical, jobs-independent: {jobs_ok}")


CRITERIA = [
    criterion_presentations,
    criterion_push_through,
    criterion_dichotomy,
    criterion_gamma_roundtrip,
    criterion_sdp,
    criterion_closed_forms,
    criterion_abelian,
    criterion_symmetric,
    criterion_determinism,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"{i}-{c.__name__[10:]}" for i, c in enumerate(CRITERIA, 1)])
def test_criterion(criterion):
    assert criterion(), line_for(CRITERIA.index(criterion) + 1)


if __name__ == "__main__":
    for number, criterion in enumerate(CRITERIA, 1):
        criterion()
        print(line_for(number), flush=True)
    sys.exit(0 if all(ok for _, ok, _ in RESULTS.values()) else 1)
