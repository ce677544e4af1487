"""Ordered semidirect-product decompositions of a level ``G_n``.

For a total order ``alpha(0), ..., alpha(2^n - 1)`` on multi-indices that
extends the partial order, components are stripped off from the top
position down::

    g_top = g
    g_{k-1} = g_k * pi_k(g_k)^-1

where ``pi_alpha = s_alpha d+_alpha`` (simplicial flavor) or
``pi_alpha = u_alpha d_alpha`` (symmetric flavor).  Then
``g = pi_0(g_0) * pi_1(g_1) * ... * pi_top(g_top)`` with the factors kept in
position order, and ``pi_k(g_k)`` lies in ``H_k``, the image of the Moore
chains under the (quasi)degeneracy of ``alpha(k)``.

Orders that do not extend the partial order are only accepted with
``force=True``.  For them ``pi_k`` no longer isolates ``H_k`` (already for an
abelian group, ``pi_{empty} = id`` swallows everything once the empty index is
not at the bottom), so forced decompositions *peel* instead: the component at
position ``k`` is the ``H_{alpha(k)}`` coordinate of ``g_k`` in the binary
decomposition.  Peeling always yields components inside the right subgroups,
recovers every factorization of an abelian level in any order, and agrees
with the recursion on extending orders; if it leaves a nontrivial remainder
the element was not factored.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .opcalc import D_ALPHA, D_ALPHA_PLUS, S_ALPHA, U_ALPHA, FinMap, Generator, OperatorWord, multi_operator, word_to_map
from .orders import (
    SIMPLICIAL,
    SYMMETRIC,
    MultiIndex,
    TotalOrder,
    binary_order,
    is_order_reflecting,
)
from .report import Report
from .sgroup import SGroup, moore_membership

RECURSION = "recursion"
PEELING = "peeling"


class DecompositionError(ValueError):
    pass


@functools.lru_cache(maxsize=None)
def projection_maps(alpha: MultiIndex) -> tuple[FinMap, FinMap]:
    """``(down, up)``: maps of ``d+_alpha`` and ``s_alpha`` (or ``d_alpha`` and ``u_alpha``)."""
    if alpha.variant == SIMPLICIAL:
        return word_to_map(multi_operator(alpha, D_ALPHA_PLUS)), word_to_map(multi_operator(alpha, S_ALPHA))
    return word_to_map(multi_operator(alpha, D_ALPHA)), word_to_map(multi_operator(alpha, U_ALPHA))


def pull_back(inst: SGroup, alpha: MultiIndex, g):
    return inst.act_map(projection_maps(alpha)[0], g)


def push_up(inst: SGroup, alpha: MultiIndex, x):
    return inst.act_map(projection_maps(alpha)[1], x)


def project(inst: SGroup, alpha: MultiIndex, g):
    """``pi_alpha(g)``."""
    down, up = projection_maps(alpha)
    return inst.act_map(up, inst.act_map(down, g))


def in_subgroup(inst: SGroup, alpha: MultiIndex, g) -> bool:
    """Exact membership in ``H_alpha``: ``g`` is fixed by ``pi_alpha`` and pulls back to a Moore chain."""
    n = alpha.n
    return inst.eq(n, project(inst, alpha, g), g) and moore_membership(inst, n - len(alpha), pull_back(inst, alpha, g))


@dataclass(frozen=True)
class Decomposition:
    n: int
    order: TotalOrder
    components: tuple
    remainder: object = None
    method: str = RECURSION

    @property
    def flavor(self) -> str:
        return self.order.variant

    def __iter__(self):
        return iter(zip(self.order.positions, self.components))

    def complete(self, inst: SGroup) -> bool:
        """True when the components multiply back to the decomposed element."""
        return self.remainder is None or inst.is_identity(self.n, self.remainder)

    def to_json(self, inst: SGroup) -> dict:
        return {
            "n": self.n,
            "instance": inst.spec,
            "method": self.method,
            "complete": self.complete(inst),
            "order": self.order.to_json(),
            "components": [
                {"alpha": list(a.indices), "element": inst.encode(self.n, c)} for a, c in self
            ],
        }

    @classmethod
    def from_json(cls, inst: SGroup, data: dict) -> Decomposition:
        order = TotalOrder.from_json(data["order"])
        if len(data["components"]) != len(order):
            raise DecompositionError(f"expected {len(order)} components, got {len(data['components'])}")
        comps = []
        for pos, entry in zip(order.positions, data["components"]):
            if list(entry["alpha"]) != list(pos.indices):
                raise DecompositionError("component multi-indices do not follow the order")
            n, x = inst.decode(entry["element"])
            if n != order.n:
                raise DecompositionError("component lives at the wrong level")
            comps.append(x)
        return cls(order.n, order, tuple(comps), method=data.get("method", RECURSION))


def _check_order(inst: SGroup, n: int, order: TotalOrder, flavor: Optional[str], force: bool) -> str:
    flavor = flavor or order.variant
    if flavor not in (SIMPLICIAL, SYMMETRIC):
        raise DecompositionError(f"unknown flavor {flavor!r}")
    if order.variant != flavor:
        raise DecompositionError(f"a {flavor} decomposition needs a {flavor} order")
    if order.n != n:
        raise DecompositionError(f"order is for level {order.n}, element for level {n}")
    if flavor == SYMMETRIC and not inst.is_symmetric:
        raise DecompositionError(f"{inst.spec} is not symmetric")
    if not force and not is_order_reflecting(order):
        raise DecompositionError("order does not extend the partial order; pass force=True (--force) to use it anyway")
    return flavor


def _recursion(inst: SGroup, n: int, g, order: TotalOrder, trace: Optional[list]) -> Decomposition:
    comps = [None] * len(order)
    state = g
    for k in range(len(order) - 1, -1, -1):
        if trace is not None:
            trace.append(state)
        comps[k] = project(inst, order[k], state)
        state = inst.sub(n, state, comps[k])
    return Decomposition(n, order, tuple(comps), state, RECURSION)


def _peeling(inst: SGroup, n: int, g, order: TotalOrder, trace: Optional[list]) -> Decomposition:
    ref = binary_order(n, order.variant)
    comps = [None] * len(order)
    state = g
    for k in range(len(order) - 1, -1, -1):
        if trace is not None:
            trace.append(state)
        comps[k] = _recursion(inst, n, state, ref, None).components[order[k].bits]
        state = inst.sub(n, state, comps[k])
    return Decomposition(n, order, tuple(comps), state, PEELING)


def decompose(inst: SGroup, n: int, g, order: TotalOrder, flavor: Optional[str] = None,
              force: bool = False, trace: Optional[list] = None) -> Decomposition:
    """Decompose ``g`` along ``order``; ``trace`` receives the states ``g_k``, top first."""
    _check_order(inst, n, order, flavor, force)
    if is_order_reflecting(order):
        return _recursion(inst, n, g, order, trace)
    return _peeling(inst, n, g, order, trace)


def reconstruct(inst: SGroup, dec: Decomposition):
    return inst.product(dec.n, dec.components)


def random_components(inst: SGroup, order: TotalOrder, rng: np.random.Generator, upto: Optional[int] = None):
    """Degenerate images of random Moore chains, one per position (identity past ``upto``)."""
    n = order.n
    out = []
    for k, alpha in enumerate(order.positions):
        if upto is not None and k > upto:
            out.append(inst.identity(n))
            continue
        out.append(push_up(inst, alpha, inst.sample_moore(n - len(alpha), rng)))
    return out


# -- single replayable checks --------------------------------------------------
#
# Each check returns ``(ok, detail)``.  ``detail`` carries the recomputed
# ``got`` value and ``decisive``: whether a failure certifies that the order
# does not give a semidirect-product decomposition of this level (rather than
# only that the factorization algorithm could not handle the element).


def _enc_list(inst: SGroup, n: int, xs) -> list:
    return [inst.encode(n, x) for x in xs]


def _same(inst: SGroup, n: int, xs, ys) -> bool:
    return len(xs) == len(ys) and all(inst.eq(n, x, y) for x, y in zip(xs, ys))


def check_roundtrip(inst: SGroup, n: int, order: TotalOrder, comps) -> tuple[bool, dict]:
    """Decomposing the ordered product of subgroup elements returns them."""
    dec = decompose(inst, n, inst.product(n, comps), order, force=True)
    ok = _same(inst, n, dec.components, comps)
    # a second complete factorization of the same element breaks uniqueness
    return ok, {"got": _enc_list(inst, n, dec.components), "decisive": dec.complete(inst)}


def check_reconstruct(inst: SGroup, n: int, order: TotalOrder, g) -> tuple[bool, dict]:
    back = reconstruct(inst, decompose(inst, n, g, order, force=True))
    return inst.eq(n, back, g), {"got": inst.encode(n, back), "decisive": False}


def check_stability(inst: SGroup, n: int, order: TotalOrder, g) -> tuple[bool, dict]:
    first = decompose(inst, n, g, order, force=True)
    again = decompose(inst, n, reconstruct(inst, first), order, force=True)
    ok = _same(inst, n, again.components, first.components)
    return ok, {"got": _enc_list(inst, n, again.components), "decisive": first.complete(inst) and again.complete(inst)}


def check_kernel(inst: SGroup, n: int, order: TotalOrder, k: int, comps) -> tuple[bool, dict]:
    """A product of subgroup elements at positions ``<= k`` has no components above ``k``."""
    dec = decompose(inst, n, inst.product(n, comps), order, force=True)
    ok = all(inst.is_identity(n, c) for c in dec.components[k + 1:])
    return ok, {"got": _enc_list(inst, n, dec.components), "decisive": dec.complete(inst)}


def check_normality(inst: SGroup, n: int, order: TotalOrder, k: int, comps, h) -> tuple[bool, dict]:
    """Conjugating a product of subgroup elements at positions ``<= k`` stays below ``k``.

    For ``k = 0`` membership of the conjugate in the bottom subgroup is
    tested exactly.  Otherwise a complete decomposition with a component
    above ``k`` shows that the partial product is not normal or that
    factorizations are not unique; either way the order fails.
    """
    conj = inst.mul(n, inst.mul(n, h, inst.product(n, comps)), inst.inv(n, h))
    if k == 0:
        return in_subgroup(inst, order[0], conj), {"got": inst.encode(n, conj), "decisive": True}
    dec = decompose(inst, n, conj, order, force=True)
    ok = all(inst.is_identity(n, c) for c in dec.components[k + 1:])
    return ok, {"got": _enc_list(inst, n, dec.components), "decisive": dec.complete(inst)}


def _witness(inst: SGroup, n: int, order: TotalOrder, check: str, trial: int, inputs: dict, expected, detail: dict) -> dict:
    return {
        "check": check,
        "instance": inst.spec,
        "n": n,
        "order": order.to_json(),
        "trial": trial,
        "inputs": inputs,
        "expected": expected,
        "got": detail["got"],
        "decisive": detail["decisive"],
    }


def unique_factorization_trial(inst: SGroup, n: int, order: TotalOrder, rng: np.random.Generator, trial: int = 0):
    """Yield ``(check, ok, witness)`` for the three factorization checks of one trial."""
    comps = random_components(inst, order, rng)
    ok, detail = check_roundtrip(inst, n, order, comps)
    yield "roundtrip_components", ok, (None if ok else _witness(
        inst, n, order, "roundtrip_components", trial, {"components": _enc_list(inst, n, comps)},
        _enc_list(inst, n, comps), detail))

    g = inst.sample(n, rng)
    ok, detail = check_reconstruct(inst, n, order, g)
    yield "reconstruct", ok, (None if ok else _witness(
        inst, n, order, "reconstruct", trial, {"element": inst.encode(n, g)}, inst.encode(n, g), detail))
    ok, detail = check_stability(inst, n, order, g)
    if not ok:
        first = decompose(inst, n, g, order, force=True).components
        detail = _witness(inst, n, order, "stability", trial, {"element": inst.encode(n, g)},
                          _enc_list(inst, n, first), detail)
    yield "stability", ok, (None if ok else detail)


def kernel_trial(inst: SGroup, n: int, order: TotalOrder, k: int, rng: np.random.Generator, trial: int = 0):
    comps = random_components(inst, order, rng, upto=k)
    ok, detail = check_kernel(inst, n, order, k, comps)
    yield "subgroup_kernel", ok, (None if ok else _witness(
        inst, n, order, "subgroup_kernel", trial, {"k": k, "components": _enc_list(inst, n, comps)},
        "identity above k", detail))
    h = inst.sample(n, rng)
    ok, detail = check_normality(inst, n, order, k, comps, h)
    yield "normality", ok, (None if ok else _witness(
        inst, n, order, "normality", trial,
        {"k": k, "components": _enc_list(inst, n, comps), "conjugator": inst.encode(n, h)},
        "identity above k", detail))


def verify_unique_factorization(inst: SGroup, n: int, order: TotalOrder, flavor: Optional[str] = None,
                                trials: int = 100, seed: int = 0, force: bool = False) -> Report:
    _check_order(inst, n, order, flavor, force)
    rng = np.random.default_rng(seed)
    report = Report("unique-factorization")
    for t in range(trials):
        for check, ok, witness in unique_factorization_trial(inst, n, order, rng, t):
            report.record(check, ok, witness)
    return report


def verify_kernel_characterization(inst: SGroup, n: int, order: TotalOrder, flavor: Optional[str] = None,
                                   k: Optional[int] = None, trials: int = 50, seed: int = 0,
                                   force: bool = False) -> Report:
    """Partial products up to ``k`` decompose with nothing above ``k`` and are closed under conjugation.

    With ``k=None`` every position is checked.
    """
    _check_order(inst, n, order, flavor, force)
    rng = np.random.default_rng(seed)
    report = Report("kernel-characterization")
    ks = range(len(order)) if k is None else [k]
    for t in range(trials):
        for kk in ks:
            for check, ok, witness in kernel_trial(inst, n, order, kk, rng, t):
                report.record(check, ok, witness)
    return report


def verify_decomposition_lemmas(inst: SGroup, n: int, order: TotalOrder, flavor: Optional[str] = None,
                                trials: int = 50, seed: int = 0) -> Report:
    """Internal facts about the recursion on an extending order.

    Recursion states lie in the higher face kernels, ``pi`` is idempotent, the
    projections above ``k`` kill partial products up to ``k``, and components
    pull back to Moore chains.
    """
    _check_order(inst, n, order, flavor, False)
    rng = np.random.default_rng(seed)
    report = Report("decomposition-lemmas")
    top = len(order) - 1
    for _ in range(trials):
        g = inst.sample(n, rng)
        states: list = []
        dec = decompose(inst, n, g, order, flavor, trace=states)
        for step, state in enumerate(states):
            k = top - step
            ok = all(
                inst.is_identity(n - len(order[i]), pull_back(inst, order[i], state)) for i in range(k + 1, top + 1)
            )
            report.record("state_in_kernels", ok, {"k": k})
            once = project(inst, order[k], state)
            report.record("projection_idempotent", inst.eq(n, project(inst, order[k], once), once), {"k": k})
        for alpha, comp in dec:
            report.record("component_in_subgroup", in_subgroup(inst, alpha, comp), {"alpha": list(alpha.indices)})
        report.record("remainder_trivial", dec.complete(inst))
        for k in range(top + 1):
            part = inst.product(n, random_components(inst, order, rng, upto=k))
            killed = all(inst.is_identity(n, project(inst, order[i], part)) for i in range(k + 1, top + 1))
            report.record("projections_vanish", killed, {"k": k})
    return report


# -- closed forms -----------------------------------------------------------------


def _q(inst: SGroup, n: int, i: int, g):
    return project(inst, MultiIndex((i,), n, SIMPLICIAL), g)


def _r(inst: SGroup, n: int, i: int, g):
    return project(inst, MultiIndex((i,), n, SYMMETRIC), g)


def closed_form_binary(inst: SGroup, n: int, g, k: int):
    """``q_alpha q^perp_{alpha^c}(g)`` for ``alpha`` the binary multi-index of ``k``.

    ``q_i = s_i d+_i`` and ``q^perp_j(x) = x - q_j(x)``.  The ``q^perp`` factors are
    composed in increasing index order left to right (so the largest acts
    first) and the ``q`` factors in decreasing order left to right.
    """
    if not 0 <= k < 1 << n:
        raise DecompositionError(f"position {k} out of range for level {n}")
    alpha = MultiIndex.from_bits(k, n, SIMPLICIAL)
    x = g
    for j in reversed(alpha.complement().indices):
        x = inst.sub(n, x, _q(inst, n, j, x))
    for i in alpha.indices:
        x = _q(inst, n, i, x)
    return x


def closed_form_symmetric(inst: SGroup, n: int, g, k: int, sorted_form: bool = False):
    """``r_alpha r^perp_{alpha^c}(g)`` with ``r_i = u_i d_i``; or, sorted, ``r_1^e ... r_n^e (g)``."""
    if not inst.is_symmetric:
        raise DecompositionError(f"{inst.spec} is not symmetric")
    if not 0 <= k < 1 << n:
        raise DecompositionError(f"position {k} out of range for level {n}")
    alpha = MultiIndex.from_bits(k, n, SYMMETRIC)
    x = g
    if sorted_form:
        for i in range(n, 0, -1):
            rx = _r(inst, n, i, x)
            x = rx if i in alpha else inst.sub(n, x, rx)
        return x
    for j in reversed(alpha.complement().indices):
        x = inst.sub(n, x, _r(inst, n, j, x))
    for i in alpha.indices:
        x = _r(inst, n, i, x)
    return x


def verify_closed_forms(inst: SGroup, n: int, trials: int = 200, seed: int = 0) -> Report:
    rng = np.random.default_rng(seed)
    report = Report("closed-forms")
    simp = binary_order(n, SIMPLICIAL)
    sym = binary_order(n, SYMMETRIC) if inst.is_symmetric else None
    for _ in range(trials):
        g = inst.sample(n, rng)
        dec = decompose(inst, n, g, simp)
        for k, comp in enumerate(dec.components):
            report.record("binary_q_formula", inst.eq(n, closed_form_binary(inst, n, g, k), comp),
                          {"k": k, "element": inst.encode(n, g)})
        if sym is None:
            continue
        dec = decompose(inst, n, g, sym)
        for k, comp in enumerate(dec.components):
            plain = closed_form_symmetric(inst, n, g, k)
            report.record("symmetric_r_formula", inst.eq(n, plain, comp), {"k": k, "element": inst.encode(n, g)})
            report.record("symmetric_r_sorted", inst.eq(n, closed_form_symmetric(inst, n, g, k, True), plain),
                          {"k": k, "element": inst.encode(n, g)})
    return report


def replacement_words(i: int, n: int) -> tuple[OperatorWord, OperatorWord, OperatorWord]:
    """The three words ``u_i d_i``, ``d_{i+1} u_i``, ``d_i u_{i+1}`` acting on level ``n``."""
    return (
        OperatorWord.from_spec([("u", i), ("d", i)], n),
        OperatorWord.from_spec([("d", i + 1), ("u", i)], n),
        OperatorWord.from_spec([("d", i), ("u", i + 1)], n),
    )


def verify_replacement_projections(inst: SGroup, n: int, trials: int = 100, seed: int = 0) -> Report:
    if not inst.is_symmetric:
        raise DecompositionError(f"{inst.spec} is not symmetric")
    rng = np.random.default_rng(seed)
    report = Report("replacement-projections")
    r = [None] + [Generator("r", i, n) for i in range(1, n + 1)]
    for _ in range(trials):
        g = inst.sample(n, rng)
        for i in range(1, n + 1):
            ri = inst.act(r[i], g)
            report.record("idempotent", inst.eq(n, inst.act(r[i], ri), ri), {"i": i})
            for w in replacement_words(i, n):
                report.record("defining_words", inst.eq(n, inst.act_word(w, g), ri), {"i": i, "word": str(w)})
            for j in range(1, n + 1):
                lhs = inst.act(r[i], inst.act(r[j], g))
                rhs = inst.act(r[j], ri)
                report.record("commute", inst.eq(n, lhs, rhs), {"i": i, "j": j})
    return report
