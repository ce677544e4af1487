"""Multi-indices, the partial orders on them, and total orders extending those.

A multi-index is a strictly increasing tuple of indices attached to an
ambient level ``n``.  Two variants exist:

* ``simplicial`` -- indices in ``0..n-1`` (selects degeneracies ``s_i``),
* ``symmetric``  -- indices in ``1..n`` (selects quasi-degeneracies ``u_i``).

Total orders are stored as the tuple of multi-indices in position order,
so ``order[k]`` is the multi-index placed at position ``k``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

SIMPLICIAL = "simplicial"
SYMMETRIC = "symmetric"
VARIANTS = (SIMPLICIAL, SYMMETRIC)

LP = "lp"
INCL = "incl"

# exhaustive linear-extension enumeration is only offered up to this level
EXHAUSTIVE_MAX_N = 3


class OrderError(ValueError):
    pass


def _offset(variant: str) -> int:
    if variant not in VARIANTS:
        raise OrderError(f"unknown variant {variant!r}")
    return 0 if variant == SIMPLICIAL else 1


@dataclass(frozen=True)
class MultiIndex:
    indices: tuple[int, ...]
    n: int
    variant: str = SIMPLICIAL

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        lo = _offset(self.variant)
        hi = self.n - 1 + lo
        if self.n < 0:
            raise OrderError(f"negative ambient level {self.n}")
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise OrderError(f"indices {self.indices} are not strictly increasing")
        if any(i < lo or i > hi for i in self.indices):
            raise OrderError(
                f"{self.variant} multi-index {self.indices} out of range {lo}..{hi} at n={self.n}"
            )

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return i in self.indices

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.indices)) + "}"

    @property
    def is_empty(self) -> bool:
        return not self.indices

    @property
    def bits(self) -> int:
        """Position of this multi-index in the binary order."""
        lo = _offset(self.variant)
        return sum(1 << (i - lo) for i in self.indices)

    def complement(self) -> MultiIndex:
        lo = _offset(self.variant)
        rest = [i for i in range(lo, self.n + lo) if i not in self.indices]
        return MultiIndex(tuple(rest), self.n, self.variant)

    def to_json(self) -> dict:
        return {"n": self.n, "variant": self.variant, "indices": list(self.indices)}

    @classmethod
    def from_json(cls, data: dict) -> MultiIndex:
        return cls(tuple(data["indices"]), int(data["n"]), data.get("variant", SIMPLICIAL))

    @classmethod
    def full(cls, n: int, variant: str = SIMPLICIAL) -> MultiIndex:
        lo = _offset(variant)
        return cls(tuple(range(lo, n + lo)), n, variant)

    @classmethod
    def from_bits(cls, k: int, n: int, variant: str = SIMPLICIAL) -> MultiIndex:
        lo = _offset(variant)
        return cls(tuple(i + lo for i in range(n) if k >> i & 1), n, variant)


def enumerate_indices(n: int, variant: str = SIMPLICIAL) -> list[MultiIndex]:
    """All ``2**n`` multi-indices at level ``n``, listed in binary order."""
    _offset(variant)
    if n < 0:
        raise OrderError(f"negative level {n}")
    return [MultiIndex.from_bits(k, n, variant) for k in range(1 << n)]


def _check_compatible(alpha: MultiIndex, beta: MultiIndex):
    if alpha.n != beta.n or alpha.variant != beta.variant:
        raise OrderError(
            f"cannot compare {alpha.variant} n={alpha.n} with {beta.variant} n={beta.n}"
        )


def lp_leq(alpha: MultiIndex, beta: MultiIndex) -> bool:
    """Length-product order: ``|alpha| <= |beta|`` and tail-aligned entries compare."""
    _check_compatible(alpha, beta)
    a, b = alpha.indices, beta.indices
    k, l = len(a), len(b)
    if k > l:
        return False
    return all(a[k - 1 - p] <= b[l - 1 - p] for p in range(k))


def incl_leq(alpha: MultiIndex, beta: MultiIndex) -> bool:
    _check_compatible(alpha, beta)
    return set(alpha.indices) <= set(beta.indices)


PARTIAL_ORDERS = {LP: lp_leq, INCL: incl_leq}


def partial_order(name: str):
    try:
        return PARTIAL_ORDERS[name]
    except KeyError:
        raise OrderError(f"unknown partial order {name!r}") from None


def default_partial(variant: str) -> str:
    """The partial order whose extensions are known to give decompositions."""
    return LP if variant == SIMPLICIAL else INCL


@dataclass(frozen=True)
class TotalOrder:
    n: int
    variant: str
    positions: tuple[MultiIndex, ...]

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(self.positions))
        expected = set(enumerate_indices(self.n, self.variant))
        if len(self.positions) != len(expected) or set(self.positions) != expected:
            raise OrderError(f"positions are not a bijection onto the {2**self.n} multi-indices")

    def __len__(self) -> int:
        return len(self.positions)

    def __getitem__(self, k: int) -> MultiIndex:
        return self.positions[k]

    def __iter__(self):
        return iter(self.positions)

    def rank(self, alpha: MultiIndex) -> int:
        return self.positions.index(alpha)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant,
            "positions": [list(a.indices) for a in self.positions],
        }

    @classmethod
    def from_json(cls, data: dict) -> TotalOrder:
        n, variant = int(data["n"]), data.get("variant", SIMPLICIAL)
        return cls(n, variant, tuple(MultiIndex(tuple(p), n, variant) for p in data["positions"]))

    @classmethod
    def from_bit_sequence(cls, ks, n: int, variant: str = SIMPLICIAL) -> TotalOrder:
        return cls(n, variant, tuple(MultiIndex.from_bits(k, n, variant) for k in ks))


def binary_order(n: int, variant: str = SIMPLICIAL) -> TotalOrder:
    return TotalOrder(n, variant, tuple(enumerate_indices(n, variant)))


def is_order_reflecting(order: TotalOrder, partial: Optional[str] = None) -> bool:
    """True iff ``order[k] <= order[l]`` in the partial order forces ``k <= l``."""
    leq = partial_order(partial or default_partial(order.variant))
    pos = order.positions
    for k, a in enumerate(pos):
        for l in range(k):
            if leq(a, pos[l]):
                return False
    return True


def _strict_predecessors(elems: list[MultiIndex], leq) -> list[set[int]]:
    return [
        {j for j, b in enumerate(elems) if j != i and leq(b, a)}
        for i, a in enumerate(elems)
    ]


def linear_extensions(
    n: int,
    variant: str = SIMPLICIAL,
    partial: Optional[str] = None,
    limit: Optional[int] = None,
    seed: Optional[int] = None,
) -> Iterator[TotalOrder]:
    """Stream total orders extending the given partial order.

    With ``seed=None`` the extensions are enumerated exhaustively (each exactly
    once, in lexicographic order of binary positions); this is only allowed for
    ``n <= EXHAUSTIVE_MAX_N``.  With a seed, orders are sampled by random
    topological shuffles (uniform choice among the currently minimal elements),
    which may repeat; ``limit`` defaults to 100 in that mode.
    """
    leq = partial_order(partial or default_partial(variant))
    elems = enumerate_indices(n, variant)
    preds = _strict_predecessors(elems, leq)
    size = len(elems)

    if seed is None:
        if n > EXHAUSTIVE_MAX_N:
            raise OrderError(
                f"exhaustive enumeration is limited to n <= {EXHAUSTIVE_MAX_N}; pass a seed to sample"
            )
        count = 0
        chosen: list[int] = []
        placed = [False] * size

        def backtrack():
            nonlocal count
            if len(chosen) == size:
                yield TotalOrder(n, variant, tuple(elems[i] for i in chosen))
                return
            for i in range(size):
                if not placed[i] and all(placed[j] for j in preds[i]):
                    placed[i] = True
                    chosen.append(i)
                    yield from backtrack()
                    chosen.pop()
                    placed[i] = False

        for order in backtrack():
            yield order
            count += 1
            if limit is not None and count >= limit:
                return
        return

    rng = random.Random(seed)
    for _ in range(100 if limit is None else limit):
        placed = [False] * size
        seq = []
        for _ in range(size):
            ready = [i for i in range(size) if not placed[i] and all(placed[j] for j in preds[i])]
            i = rng.choice(ready)
            placed[i] = True
            seq.append(elems[i])
        yield TotalOrder(n, variant, tuple(seq))


def all_total_orders(n: int, variant: str = SIMPLICIAL) -> Iterator[TotalOrder]:
    """Every permutation of the multi-indices, extending or not."""
    if n > EXHAUSTIVE_MAX_N:
        raise OrderError(f"enumerating all orders is limited to n <= {EXHAUSTIVE_MAX_N}")
    elems = enumerate_indices(n, variant)
    for perm in itertools.permutations(elems):
        yield TotalOrder(n, variant, perm)


def random_total_order(n: int, variant: str, rng: random.Random) -> TotalOrder:
    elems = enumerate_indices(n, variant)
    rng.shuffle(elems)
    return TotalOrder(n, variant, tuple(elems))
