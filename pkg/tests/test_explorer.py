import copy
import json

import pytest

from dkcalc import explorer as ex
from dkcalc.orders import (
    SIMPLICIAL,
    SYMMETRIC,
    OrderError,
    all_total_orders,
    binary_order,
    is_order_reflecting,
)
from dkcalc.sgroup import make_instance

EXPO = "exponential:3:S3"


@pytest.fixture(scope="module")
def n2_expo_verdicts():
    return list(ex.search_orders([EXPO], 2, SIMPLICIAL, mode=ex.EXHAUSTIVE, trials=3, seed=11))


def test_every_n2_order_gets_one_verdict(n2_expo_verdicts):
    assert [v.index for v in n2_expo_verdicts] == list(range(24))
    assert all(v.status in ex.STATUSES for v in n2_expo_verdicts)


def test_extending_orders_are_proved(n2_expo_verdicts):
    for v in n2_expo_verdicts:
        assert (v.status == ex.PROVED_PASS) == is_order_reflecting(v.order)
        if v.status == ex.PROVED_PASS:
            assert v.witness is None and v.extends


def test_failed_verdicts_carry_witnesses(n2_expo_verdicts):
    failed = [v for v in n2_expo_verdicts if v.status == ex.FAILED]
    assert failed
    assert any(v.witness["decisive"] for v in failed)
    for v in failed:
        assert v.witness["check"] in ex.CHECKS
        assert v.witness["instance"] == EXPO


def test_failed_witnesses_replay(n2_expo_verdicts):
    witnesses = [v.witness for v in n2_expo_verdicts if v.status == ex.FAILED]
    report = ex.replay_witness(json.loads(json.dumps(witnesses)))
    assert report.counts["check_passes"] == [0, len(witnesses)]
    assert report.counts["reproduced"] == [len(witnesses), 0]


def test_search_is_deterministic():
    a = [v.to_json() for v in ex.search_orders([EXPO], 2, SIMPLICIAL, limit=6, trials=2, seed=4)]
    b = [v.to_json() for v in ex.search_orders([EXPO], 2, SIMPLICIAL, limit=6, trials=2, seed=4)]
    assert json.dumps(a) == json.dumps(b)


def test_job_count_does_not_change_verdicts():
    kwargs = dict(mode=ex.SAMPLE, limit=10, trials=2, seed=5)
    one = [v.to_json() for v in ex.search_orders([EXPO], 2, SIMPLICIAL, jobs=1, **kwargs)]
    many = [v.to_json() for v in ex.search_orders([EXPO], 2, SIMPLICIAL, jobs=3, **kwargs)]
    assert one == many


def test_abelian_instance_passes_every_order():
    verdicts = list(ex.search_orders(["gamma"], 2, SIMPLICIAL, mode=ex.EXHAUSTIVE, trials=5, seed=0))
    assert len(verdicts) == 24
    assert all(v.status in (ex.PROVED_PASS, ex.EMPIRICAL_PASS) for v in verdicts)


def test_abelian_instance_sampled_n3_orders():
    verdicts = list(ex.search_orders(["gamma"], 3, SIMPLICIAL, mode=ex.SAMPLE, limit=10, trials=3, seed=1))
    assert all(v.status != ex.FAILED for v in verdicts)


def test_symmetric_extending_orders():
    orders = [o for o in all_total_orders(2, SYMMETRIC) if is_order_reflecting(o)]
    verdicts = list(ex.search_orders([EXPO], 2, SYMMETRIC, trials=2, orders=orders))
    assert verdicts and all(v.status == ex.PROVED_PASS for v in verdicts)


def test_contradiction_on_an_extending_order(monkeypatch):
    def broken(inst, n, order, rng, trial=0):
        yield "roundtrip_components", False, {"decisive": True}

    monkeypatch.setattr(ex.dk, "unique_factorization_trial", broken)
    with pytest.raises(ex.ImplementationContradiction):
        ex.classify_order(binary_order(2), ["gamma"], trials=1)


def test_search_argument_errors():
    with pytest.raises(OrderError):
        list(ex.search_orders([], 2, SIMPLICIAL))
    with pytest.raises(OrderError):
        list(ex.search_orders(["gamma"], 4, SIMPLICIAL, mode=ex.EXHAUSTIVE))
    with pytest.raises(OrderError):
        list(ex.search_orders(["gamma"], 2, SIMPLICIAL, mode="greedy"))


def test_summary_counts(n2_expo_verdicts):
    summary = ex.SearchSummary()
    for v in n2_expo_verdicts:
        summary.add(v)
    data = summary.to_json()
    assert data["orders"] == 24 and sum(data["counts"].values()) == 24
    assert data["counts"][ex.PROVED_PASS] == 1
    assert data["decisive_failures"] == sum(
        1 for v in n2_expo_verdicts if v.status == ex.FAILED and v.witness["decisive"])


# -- replay -----------------------------------------------------------------------------


def test_empty_replay():
    report = ex.replay_witness([])
    assert report.ok and report.passed == 0


def test_corrected_witness_passes(n2_expo_verdicts):
    witness = next(v.witness for v in n2_expo_verdicts if v.status == ex.FAILED)
    inst = make_instance(witness["instance"])
    identity = inst.encode(2, inst.identity(2))
    fixed = copy.deepcopy(witness)
    for key, value in fixed["inputs"].items():
        if isinstance(value, list):
            fixed["inputs"][key] = [identity] * len(value)
        elif isinstance(value, dict):
            fixed["inputs"][key] = identity
    report = ex.replay_witness([fixed])
    assert report.ok
    assert report.counts["check_passes"] == [1, 0]


@pytest.mark.parametrize("mutate", [
    lambda w: w.pop("inputs"),
    lambda w: w.update(check="telepathy"),
    lambda w: w.update(n=3),
    lambda w: w.update(instance="nonsense"),
    lambda w: w["inputs"].update(k="x") if "k" in w["inputs"] else w["inputs"].clear(),
])
def test_malformed_witness(n2_expo_verdicts, mutate):
    witness = copy.deepcopy(next(v.witness for v in n2_expo_verdicts if v.status == ex.FAILED))
    mutate(witness)
    with pytest.raises(ex.WitnessError):
        ex.replay_witness([witness])


def test_non_object_witness():
    with pytest.raises(ex.WitnessError):
        ex.replay_witness(["not a witness"])
