"""Search over total orders of multi-indices for semidirect-product decompositions.

Each order gets a verdict:

* ``ProvedPass``    -- the order extends the partial order, so it is known to
  work; the checks are still run and a failure is an implementation bug.
* ``EmpiricalPass`` -- the order does not extend the partial order but no
  check failed on the sampled elements.  This is evidence, not a proof.
* ``Failed``        -- some check failed; the witness can be replayed.  The
  witness is ``decisive`` when it certifies that the order gives no
  decomposition of that level (two factorizations of one element, or a
  partial product that is not normal); otherwise it only shows that the
  factorization algorithm could not handle the element.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import dkengine as dk
from .orders import (
    EXHAUSTIVE_MAX_N,
    OrderError,
    TotalOrder,
    all_total_orders,
    is_order_reflecting,
    random_total_order,
)
from .report import Report
from .sgroup import make_instance

PROVED_PASS = "ProvedPass"
EMPIRICAL_PASS = "EmpiricalPass"
FAILED = "Failed"
STATUSES = (PROVED_PASS, EMPIRICAL_PASS, FAILED)

EXHAUSTIVE = "exhaustive"
SAMPLE = "sample"

CHECKS = ("roundtrip_components", "reconstruct", "stability", "subgroup_kernel", "normality")


class ImplementationContradiction(RuntimeError):
    """An order extending the partial order failed a check."""


class WitnessError(ValueError):
    pass


@dataclass
class OrderVerdict:
    index: int
    order: TotalOrder
    status: str
    trials: int
    seed: int
    instances: tuple[str, ...]
    witness: Optional[dict] = None
    checks_run: int = 0

    @property
    def extends(self) -> bool:
        return self.status == PROVED_PASS

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "order": self.order.to_json(),
            "status": self.status,
            "extends": self.extends,
            "instances": list(self.instances),
            "trials": self.trials,
            "seed": self.seed,
            "checks_run": self.checks_run,
            "witness": self.witness,
        }


def order_rng(seed: int, order_index: int, instance_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, order_index, instance_index]))


def _order_checks(inst, order: TotalOrder, rng: np.random.Generator, trials: int):
    n = order.n
    for t in range(trials):
        yield from dk.unique_factorization_trial(inst, n, order, rng, t)
        for k in range(len(order)):
            yield from dk.kernel_trial(inst, n, order, k, rng, t)


def classify_order(order: TotalOrder, instances: Sequence[str], trials: int = 10, seed: int = 0,
                   index: int = 0) -> OrderVerdict:
    """Run all checks on one order; stop at the first decisive witness."""
    extends = is_order_reflecting(order)
    witness = None
    runs = 0
    for inst_idx, spec in enumerate(instances):
        inst = make_instance(spec)
        rng = order_rng(seed, index, inst_idx)
        for check, ok, w in _order_checks(inst, order, rng, trials):
            runs += 1
            if ok:
                continue
            if extends:
                raise ImplementationContradiction(
                    f"extending order #{index} failed {check} on {spec}: {w}"
                )
            if witness is None or (w["decisive"] and not witness["decisive"]):
                witness = w
            if witness["decisive"]:
                break
        if witness is not None and witness["decisive"]:
            break
    if extends:
        status = PROVED_PASS
    else:
        status = FAILED if witness is not None else EMPIRICAL_PASS
    return OrderVerdict(index, order, status, trials, seed, tuple(instances), witness, runs)


def _candidate_orders(n: int, variant: str, mode: str, limit: Optional[int], seed: int) -> Iterable[TotalOrder]:
    if mode == EXHAUSTIVE:
        if n > EXHAUSTIVE_MAX_N:
            raise OrderError(f"exhaustive search is limited to n <= {EXHAUSTIVE_MAX_N}")
        orders = all_total_orders(n, variant)
        return orders if limit is None else itertools.islice(orders, limit)
    if mode == SAMPLE:
        rng = random.Random(seed)
        return (random_total_order(n, variant, rng) for _ in range(100 if limit is None else limit))
    raise OrderError(f"unknown search mode {mode!r}")


def _classify_job(args):
    order, instances, trials, seed, index = args
    return classify_order(order, instances, trials, seed, index)


def search_orders(instances: Sequence[str], n: int, variant: str, mode: str = SAMPLE, trials: int = 10,
                  seed: int = 0, limit: Optional[int] = None, jobs: int = 1,
                  orders: Optional[Iterable[TotalOrder]] = None):
    """Yield one verdict per order, in order index, whatever the job count.

    ``orders`` overrides the candidates chosen by ``mode``.
    """
    if not instances:
        raise OrderError("search needs at least one instance")
    candidates = orders if orders is not None else _candidate_orders(n, variant, mode, limit, seed)
    work = ((o, tuple(instances), trials, seed, i) for i, o in enumerate(candidates))
    if jobs <= 1:
        for item in work:
            yield _classify_job(item)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_classify_job, work, chunksize=8)


@dataclass
class SearchSummary:
    counts: dict = field(default_factory=lambda: {s: 0 for s in STATUSES})
    decisive_failures: int = 0
    orders: int = 0

    def add(self, verdict: OrderVerdict):
        self.orders += 1
        self.counts[verdict.status] += 1
        if verdict.status == FAILED and verdict.witness["decisive"]:
            self.decisive_failures += 1

    def to_json(self) -> dict:
        return {"orders": self.orders, "counts": dict(self.counts), "decisive_failures": self.decisive_failures}


# -- replay ----------------------------------------------------------------------


def _decode_list(inst, n: int, items) -> list:
    out = []
    for item in items:
        m, x = inst.decode(item)
        if m != n:
            raise WitnessError(f"element at level {m}, expected {n}")
        out.append(x)
    return out


def _rerun(witness: dict):
    try:
        inst = make_instance(witness["instance"])
        n = int(witness["n"])
        order = TotalOrder.from_json(witness["order"])
        check = witness["check"]
        inputs = witness["inputs"]
        if order.n != n:
            raise WitnessError("order and element levels differ")
        if check == "roundtrip_components":
            return dk.check_roundtrip(inst, n, order, _decode_list(inst, n, inputs["components"]))
        if check in ("reconstruct", "stability"):
            m, g = inst.decode(inputs["element"])
            if m != n:
                raise WitnessError(f"element at level {m}, expected {n}")
            fn = dk.check_reconstruct if check == "reconstruct" else dk.check_stability
            return fn(inst, n, order, g)
        k = int(inputs["k"])
        comps = _decode_list(inst, n, inputs["components"])
        if check == "subgroup_kernel":
            return dk.check_kernel(inst, n, order, k, comps)
        if check == "normality":
            m, h = inst.decode(inputs["conjugator"])
            if m != n:
                raise WitnessError(f"conjugator at level {m}, expected {n}")
            return dk.check_normality(inst, n, order, k, comps, h)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, WitnessError):
            raise
        raise WitnessError(f"malformed witness: {exc}") from exc
    raise WitnessError(f"unknown check {witness.get('check')!r}")


def replay_witness(witnesses) -> Report:
    """Re-run each recorded check.

    Per witness, ``reproduced`` passes when the check fails again with the
    recorded result; ``check_passes`` records whether the check itself passes
    now (a witness whose input was corrected shows up there).
    """
    if isinstance(witnesses, dict):
        witnesses = [witnesses]
    report = Report("replay")
    for i, w in enumerate(witnesses):
        if not isinstance(w, dict):
            raise WitnessError(f"witness #{i} is not an object")
        ok, detail = _rerun(w)
        report.record("check_passes", ok, {"witness": i, "check": w["check"]})
        if not ok:
            same = detail["got"] == w.get("got") and detail["decisive"] == w.get("decisive")
            report.record("reproduced", same, {"witness": i, "check": w["check"]})
    return report
