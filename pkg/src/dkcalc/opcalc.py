"""Operators of the simplicial and symmetric-simplicial categories.

Every operator is ultimately a map of finite ordinals, a :class:`FinMap`.
Operators act on the *left* of elements: a word ``g1 g2 ... gp`` sends an
element ``x`` to ``g1(g2(...gp(x)))``.  Because the action is contravariant,
the map of finite sets underlying that word is ``phi(gp) o ... o phi(g1)``;
i.e. the leftmost generator's map is applied first.  Operator equality is
always decided by comparing FinMaps.

Generator levels
----------------
A :class:`Generator` carries the level ``n`` of the *larger* simplex it
touches:

=====  ===============  ==================  ===============
kind   acts on level    lands in level       index range
=====  ===============  ==================  ===============
d_i    n                n-1                  0 <= i <= n
s_i    n-1              n                    0 <= i <= n-1
u_i    n-1              n                    1 <= i <= n
t_i    n                n                    0 <= i <= n-1
z_i    n                n                    0 <= i <= n
r_i    n                n                    1 <= i <= n
=====  ===============  ==================  ===============
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .orders import SIMPLICIAL, SYMMETRIC, MultiIndex, enumerate_indices, lp_leq
from .report import Report

KINDS = ("d", "s", "t", "u", "z", "r")


class OperatorError(ValueError):
    pass


class RangeError(OperatorError):
    pass


class CompositionError(OperatorError):
    pass


@dataclass(frozen=True)
class FinMap:
    dom: int
    cod: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if self.dom < 0 or self.cod < 0:
            raise OperatorError(f"negative level in FinMap [{self.dom}]->[{self.cod}]")
        if len(self.table) != self.dom + 1:
            raise OperatorError(f"table of length {len(self.table)} does not fit dom [{self.dom}]")
        if any(v < 0 or v > self.cod for v in self.table):
            raise OperatorError(f"table {self.table} leaves cod [{self.cod}]")

    def __call__(self, k: int) -> int:
        return self.table[k]

    @property
    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.table, self.table[1:]))

    @property
    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod + 1

    @property
    def is_identity(self) -> bool:
        return self.dom == self.cod and self.table == tuple(range(self.dom + 1))

    @classmethod
    def identity(cls, n: int) -> FinMap:
        return cls(n, n, tuple(range(n + 1)))

    def to_json(self) -> dict:
        return {"dom": self.dom, "cod": self.cod, "table": list(self.table)}

    @classmethod
    def from_json(cls, data: dict) -> FinMap:
        return cls(int(data["dom"]), int(data["cod"]), tuple(data["table"]))


def compose_maps(f: FinMap, g: FinMap) -> FinMap:
    """``f o g``: apply ``g`` first."""
    if f.dom != g.cod:
        raise CompositionError(f"cannot compose [{f.dom}]->[{f.cod}] after [{g.dom}]->[{g.cod}]")
    return FinMap(g.dom, f.cod, tuple(f.table[v] for v in g.table))


def all_maps(dom: int, cod: int) -> Iterable[FinMap]:
    for table in itertools.product(range(cod + 1), repeat=dom + 1):
        yield FinMap(dom, cod, table)


def _fin_table(kind: str, i: int, n: int) -> tuple[int, int, list[int]]:
    """``(dom, cod, table)`` of a generator at level ``n`` (larger-level convention)."""
    if kind == "d":
        return n - 1, n, [k if k < i else k + 1 for k in range(n)]
    if kind == "s":
        return n, n - 1, [k if k <= i else k - 1 for k in range(n + 1)]
    if kind == "u":
        return n, n - 1, [0 if k in (0, i) else (k if k < i else k - 1) for k in range(n + 1)]
    if kind == "t":
        return n, n, [i + 1 if k == i else i if k == i + 1 else k for k in range(n + 1)]
    if kind == "z":
        return n, n, [k + 1 if k < i else 0 if k == i else k for k in range(n + 1)]
    if kind == "r":
        return n, n, [0 if k in (0, i) else k for k in range(n + 1)]
    raise OperatorError(f"unknown generator kind {kind!r}")


def _index_range(kind: str, n: int) -> tuple[int, int]:
    return {
        "d": (0, n),
        "s": (0, n - 1),
        "u": (1, n),
        "t": (0, n - 1),
        "z": (0, n),
        "r": (1, n),
    }[kind]


@dataclass(frozen=True)
class Generator:
    kind: str
    i: int
    level: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise OperatorError(f"unknown generator kind {self.kind!r}")
        lo, hi = _index_range(self.kind, self.level)
        if not lo <= self.i <= hi or self.level < (1 if self.kind in "dsu" else 0):
            raise RangeError(
                f"{self.kind}_{self.i} is not defined at level {self.level} (needs {lo} <= i <= {hi})"
            )

    @property
    def source(self) -> int:
        """Level of the element the operator is applied to."""
        return self.level - 1 if self.kind in ("s", "u") else self.level

    @property
    def target(self) -> int:
        return self.level - 1 if self.kind == "d" else self.level

    def to_map(self) -> FinMap:
        return FinMap(*_fin_table(self.kind, self.i, self.level))

    def __str__(self) -> str:
        return f"{self.kind}{self.i}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "i": self.i, "level": self.level}

    @classmethod
    def from_json(cls, data: dict) -> Generator:
        return cls(data["kind"], int(data["i"]), int(data["level"]))


def named_operator(kind: str, i: int, n: int) -> FinMap:
    """The map of finite sets named by ``kind_i`` with superscript ``n``.

    Superscripts follow the defining displays: ``d_i: [n] -> [n+1]``,
    ``s_i: [n] -> [n-1]``, ``u_i: [n+1] -> [n]`` and ``t_i, z_i, r_i: [n] -> [n]``.
    """
    level = {"d": n + 1, "s": n, "u": n + 1}.get(kind, n)
    try:
        return Generator(kind, i, level).to_map()
    except RangeError:
        raise RangeError(f"{kind}_{i} is not defined with superscript n={n}") from None


Spec = Union[str, tuple[str, int]]


def _parse_spec(item: Spec) -> tuple[str, int]:
    if isinstance(item, str):
        return item[0], int(item[1:])
    kind, i = item
    return kind, int(i)


@dataclass(frozen=True)
class OperatorWord:
    """A composable sequence of generators, leftmost applied last to elements."""

    generators: tuple[Generator, ...]
    from_level: int
    to_level: int

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        level = self.from_level
        for g in reversed(self.generators):
            if g.source != level:
                raise CompositionError(f"{g} at level {g.level} cannot act on level {level}")
            level = g.target
        if level != self.to_level:
            raise CompositionError(f"word lands in level {level}, not {self.to_level}")

    @classmethod
    def of(cls, generators: Sequence[Generator], from_level: Optional[int] = None) -> OperatorWord:
        generators = tuple(generators)
        if not generators:
            if from_level is None:
                raise CompositionError("empty word needs an explicit level")
            return cls((), from_level, from_level)
        return cls(generators, generators[-1].source, generators[0].target)

    @classmethod
    def identity(cls, n: int) -> OperatorWord:
        return cls((), n, n)

    @classmethod
    def from_spec(cls, items: Union[str, Iterable[Spec]], from_level: int) -> OperatorWord:
        """Build a word from ``"d0 u1"`` or ``[("d", 0), ("u", 1)]`` acting on ``from_level``."""
        if isinstance(items, str):
            items = items.split()
        specs = [_parse_spec(x) for x in items]
        gens = []
        level = from_level
        for kind, i in reversed(specs):
            if kind in ("s", "u"):
                level += 1
            g = Generator(kind, i, level)
            gens.append(g)
            level = g.target
        return cls(tuple(reversed(gens)), from_level, level)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __str__(self) -> str:
        return " ".join(map(str, self.generators)) or f"id[{self.from_level}]"

    def __matmul__(self, other: OperatorWord) -> OperatorWord:
        """Concatenation ``self other``: ``other`` acts first."""
        if other.to_level != self.from_level:
            raise CompositionError(
                f"cannot apply {self} (on level {self.from_level}) after {other} (into level {other.to_level})"
            )
        return OperatorWord(self.generators + other.generators, other.from_level, self.to_level)

    def to_json(self) -> list:
        return [g.to_json() for g in self.generators]

    @classmethod
    def from_json(cls, data, from_level: Optional[int] = None) -> OperatorWord:
        if isinstance(data, dict):
            from_level = data.get("from_level", from_level)
            data = data["generators"]
        return cls.of([Generator.from_json(g) for g in data], from_level)


def word_to_map(w: OperatorWord) -> FinMap:
    f = FinMap.identity(w.to_level)
    for g in w.generators:
        f = compose_maps(g.to_map(), f)
    return f


# -- canonical words ---------------------------------------------------------


def epi_mono(f: FinMap) -> tuple[FinMap, FinMap]:
    """Split a monotone map as ``mono o epi``."""
    if not f.is_monotone:
        raise OperatorError(f"{f.table} is not monotone")
    image = sorted(set(f.table))
    rank = {v: j for j, v in enumerate(image)}
    p = len(image) - 1
    return FinMap(f.dom, p, tuple(rank[v] for v in f.table)), FinMap(p, f.cod, tuple(image))


def _delta_specs(f: FinMap) -> list[tuple[str, int]]:
    epi, mono = epi_mono(f)
    collapsed = [k for k in range(epi.dom) if epi.table[k] == epi.table[k + 1]]
    missing = [k for k in range(mono.cod + 1) if k not in mono.table]
    return [("s", k) for k in reversed(collapsed)] + [("d", k) for k in missing]


def map_to_word_delta(f: FinMap) -> OperatorWord:
    """Canonical ``s...s d...d`` word of a monotone map.

    Degeneracy indices strictly decrease left to right, face indices strictly
    increase, and all degeneracies sit to the left of all faces.
    """
    if not f.is_monotone:
        raise OperatorError(f"{f.table} is not monotone; only maps of the simplicial category have a d/s word")
    return OperatorWord.from_spec(_delta_specs(f), f.cod)


def is_canonical_delta(w: OperatorWord) -> bool:
    kinds = [g.kind for g in w]
    if any(k not in ("d", "s") for k in kinds):
        return False
    n_s = kinds.count("s")
    if kinds != ["s"] * n_s + ["d"] * (len(kinds) - n_s):
        return False
    s_idx = [g.i for g in w.generators[:n_s]]
    d_idx = [g.i for g in w.generators[n_s:]]
    return all(a > b for a, b in zip(s_idx, s_idx[1:])) and all(a < b for a, b in zip(d_idx, d_idx[1:]))


def _sorting_swaps(values: list) -> list[int]:
    """Adjacent swaps (by position) that bubble-sort ``values`` stably."""
    vals = list(values)
    swaps = []
    for end in range(len(vals) - 1, 0, -1):
        for j in range(end):
            if vals[j] > vals[j + 1]:
                vals[j], vals[j + 1] = vals[j + 1], vals[j]
                swaps.append(j)
    return swaps


def _transposition_swaps(i: int) -> list[int]:
    # the transposition (0 i) as adjacent swaps
    return _sorting_swaps([i] + list(range(1, i)) + [0]) if i else []


def map_to_word_fin(f: FinMap) -> OperatorWord:
    """A deterministic word over ``d``, ``u`` and ``t`` whose map is ``f``.

    Scheme: write ``f = g o p`` where ``p`` is the stable sorting permutation of
    the table, so that ``g`` is monotone.  ``p`` becomes the adjacent-swap
    sequence of bubble sort, ``g`` becomes its canonical ``s...s d...d`` word, and
    each ``s_i`` is rewritten as ``t-word(0 i) u_{i+1} t-word(0 i)``.
    """
    swaps = _sorting_swaps(list(f.table))
    specs: list[tuple[str, int]] = [("t", j) for j in swaps]
    g = FinMap(f.dom, f.cod, tuple(sorted(f.table)))
    for kind, i in _delta_specs(g):
        if kind == "s":
            conj = [("t", j) for j in _transposition_swaps(i)]
            specs += conj + [("u", i + 1)] + conj
        else:
            specs.append((kind, i))
    return OperatorWord.from_spec(specs, f.cod)


# -- presentation tables -----------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """One row of a presentation table: ``lhs(i, j) = rhs(i, j)`` when ``cond(i, j)``."""

    table: str
    name: str
    lhs: object
    cond: object
    rhs: object
    column: str = "left"

    def instantiate(self, i: int, j: int):
        return self.lhs(i, j), self.rhs(i, j)


def _w(*items):
    return list(items)


SIMPLICIAL_IDENTITIES = [
    Relation("delta", "d_i d_j", lambda i, j: _w(("d", i), ("d", j)), lambda i, j: i < j,
             lambda i, j: _w(("d", j - 1), ("d", i))),
    Relation("delta", "d_i d_j", lambda i, j: _w(("d", i), ("d", j)), lambda i, j: i >= j,
             lambda i, j: _w(("d", j), ("d", i + 1))),
    Relation("delta", "s_i s_j", lambda i, j: _w(("s", i), ("s", j)), lambda i, j: i <= j,
             lambda i, j: _w(("s", j + 1), ("s", i))),
    Relation("delta", "s_i s_j", lambda i, j: _w(("s", i), ("s", j)), lambda i, j: i > j,
             lambda i, j: _w(("s", j), ("s", i - 1))),
    Relation("delta", "d_i s_j", lambda i, j: _w(("d", i), ("s", j)), lambda i, j: i < j,
             lambda i, j: _w(("s", j - 1), ("d", i))),
    Relation("delta", "d_i s_j", lambda i, j: _w(("d", i), ("s", j)), lambda i, j: i in (j, j + 1),
             lambda i, j: _w()),
    Relation("delta", "d_i s_j", lambda i, j: _w(("d", i), ("s", j)), lambda i, j: i >= j + 2,
             lambda i, j: _w(("s", j), ("d", i - 1))),
    Relation("delta", "s_i d_j", lambda i, j: _w(("s", i), ("d", j)), lambda i, j: i < j,
             lambda i, j: _w(("d", j + 1), ("s", i)), "right"),
    Relation("delta", "s_i d_j", lambda i, j: _w(("s", i), ("d", j)), lambda i, j: i >= j,
             lambda i, j: _w(("d", j), ("s", i + 1)), "right"),
]


def _tt(i, j):
    if i == j:
        return _w()
    if abs(i - j) >= 2:
        return _w(("t", j), ("t", i))
    return _w(("t", j), ("t", i), ("t", j), ("t", i))


FIN_PRESENTATION = [
    Relation("fin", "d_i d_j", lambda i, j: _w(("d", i), ("d", j)), lambda i, j: i < j,
             lambda i, j: _w(("d", j - 1), ("d", i))),
    Relation("fin", "d_i d_j", lambda i, j: _w(("d", i), ("d", j)), lambda i, j: i >= j,
             lambda i, j: _w(("d", j), ("d", i + 1))),
    Relation("fin", "d_i u_j", lambda i, j: _w(("d", i), ("u", j)), lambda i, j: i == 0,
             lambda i, j: _w(("z", j - 1))),
    Relation("fin", "d_i u_j", lambda i, j: _w(("d", i), ("u", j)), lambda i, j: 0 != i < j,
             lambda i, j: _w(("u", j - 1), ("d", i))),
    Relation("fin", "d_i u_j", lambda i, j: _w(("d", i), ("u", j)), lambda i, j: i == j,
             lambda i, j: _w()),
    Relation("fin", "d_i u_j", lambda i, j: _w(("d", i), ("u", j)), lambda i, j: i > j,
             lambda i, j: _w(("u", j), ("d", i - 1))),
    Relation("fin", "u_i d_j", lambda i, j: _w(("u", i), ("d", j)), lambda i, j: i <= j,
             lambda i, j: _w(("d", j + 1), ("u", i)), "right"),
    Relation("fin", "u_i d_j", lambda i, j: _w(("u", i), ("d", j)), lambda i, j: i >= j != 0,
             lambda i, j: _w(("d", j), ("u", i + 1)), "right"),
    Relation("fin", "u_i d_j", lambda i, j: _w(("u", i), ("d", j)), lambda i, j: j == 0,
             lambda i, j: _w(("d", 1), ("u", i + 1), ("t", 0)), "right"),
    Relation("fin", "u_i u_j", lambda i, j: _w(("u", i), ("u", j)), lambda i, j: i <= j,
             lambda i, j: _w(("u", j + 1), ("u", i))),
    Relation("fin", "u_i u_j", lambda i, j: _w(("u", i), ("u", j)), lambda i, j: i > j,
             lambda i, j: _w(("u", j), ("u", i - 1))),
    Relation("fin", "t_i t_j", lambda i, j: _w(("t", i), ("t", j)), lambda i, j: True, _tt),
    Relation("fin", "d_i t_j", lambda i, j: _w(("d", i), ("t", j)), lambda i, j: i < j,
             lambda i, j: _w(("t", j - 1), ("d", i))),
    Relation("fin", "d_i t_j", lambda i, j: _w(("d", i), ("t", j)), lambda i, j: i == j,
             lambda i, j: _w(("d", i + 1))),
    Relation("fin", "d_i t_j", lambda i, j: _w(("d", i), ("t", j)), lambda i, j: i == j + 1,
             lambda i, j: _w(("d", i - 1))),
    Relation("fin", "d_i t_j", lambda i, j: _w(("d", i), ("t", j)), lambda i, j: i >= j + 2,
             lambda i, j: _w(("t", j), ("d", i))),
    Relation("fin", "t_i d_j", lambda i, j: _w(("t", i), ("d", j)), lambda i, j: i <= j - 2,
             lambda i, j: _w(("d", j), ("t", i)), "right"),
    Relation("fin", "t_i d_j", lambda i, j: _w(("t", i), ("d", j)), lambda i, j: i == j - 1,
             lambda i, j: _w(("d", j), ("t", i + 1), ("t", i), ("t", i + 1)), "right"),
    Relation("fin", "t_i d_j", lambda i, j: _w(("t", i), ("d", j)), lambda i, j: i >= j,
             lambda i, j: _w(("d", j), ("t", i + 1)), "right"),
    Relation("fin", "t_i u_j", lambda i, j: _w(("t", i), ("u", j)), lambda i, j: 0 != i <= j - 2,
             lambda i, j: _w(("u", j), ("t", i))),
    Relation("fin", "t_i u_j", lambda i, j: _w(("t", i), ("u", j)), lambda i, j: 0 != i == j - 1,
             lambda i, j: _w(("u", j - 1))),
    Relation("fin", "t_i u_j", lambda i, j: _w(("t", i), ("u", j)), lambda i, j: i == j,
             lambda i, j: _w(("u", j + 1))),
    Relation("fin", "t_i u_j", lambda i, j: _w(("t", i), ("u", j)), lambda i, j: i > j,
             lambda i, j: _w(("u", j), ("t", i - 1))),
    Relation("fin", "u_i t_j", lambda i, j: _w(("u", i), ("t", j)), lambda i, j: i <= j,
             lambda i, j: _w(("t", j + 1), ("u", i)), "right"),
    Relation("fin", "u_i t_j", lambda i, j: _w(("u", i), ("t", j)), lambda i, j: i == j + 1 and j != 0,
             lambda i, j: _w(("t", j), ("t", j + 1), ("u", i - 1)), "right"),
    Relation("fin", "u_i t_j", lambda i, j: _w(("u", i), ("t", j)), lambda i, j: i >= j + 2 and j != 0,
             lambda i, j: _w(("t", j), ("u", i)), "right"),
    Relation("fin", "t_0 u_1", lambda i, j: _w(("t", 0), ("u", 1)), lambda i, j: i == 0 and j == 0,
             lambda i, j: _w(("u", 1))),
    Relation("fin", "t_0 u_i t_0 u_j", lambda i, j: _w(("t", 0), ("u", i), ("t", 0), ("u", j)),
             lambda i, j: 2 <= i <= j, lambda i, j: _w(("u", j + 1), ("t", 0), ("u", i), ("t", 0))),
    Relation("fin", "t_0 u_i t_0 u_j", lambda i, j: _w(("t", 0), ("u", i), ("t", 0), ("u", j)),
             lambda i, j: 2 <= j < i, lambda i, j: _w(("u", j), ("t", 0), ("u", i - 1), ("t", 0))),
]

RELATIONS = SIMPLICIAL_IDENTITIES + FIN_PRESENTATION


@dataclass
class RelationReport:
    n_max: int
    rows: list[dict]
    checked: int = 0
    failed: int = 0
    first_failure: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.checked > 0

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "checked": self.checked,
            "failed": self.failed,
            "first_failure": self.first_failure,
            "rows": self.rows,
        }


def _try_word(specs, level: int) -> Optional[OperatorWord]:
    try:
        return OperatorWord.from_spec(specs, level)
    except RangeError:
        return None


def instantiate(rel: Relation, n_max: int):
    """Yield ``(n, i, j, lhs, rhs)`` for every legal instantiation up to level ``n_max``.

    An instantiation is legal when its left side is a well-formed word acting on
    level ``n`` whose intermediate levels stay within ``n_max + 1``.  ``rhs`` is
    ``None`` if the right side fails to be well-formed, which counts as a failure.
    """
    for n in range(n_max + 1):
        for i in range(n_max + 3):
            for j in range(n_max + 3):
                if not rel.cond(i, j):
                    continue
                lhs = _try_word(rel.lhs(i, j), n)
                if lhs is None or max((g.level for g in lhs), default=n) > n_max + 1:
                    continue
                rhs = _try_word(rel.rhs(i, j), n)
                yield n, i, j, lhs, rhs


def verify_presentations(n_max: int = 4) -> RelationReport:
    if n_max < 1:
        raise OperatorError("n_max must be at least 1")
    report = RelationReport(n_max, [])
    for rel in RELATIONS:
        row = {"table": rel.table, "relation": rel.name, "column": rel.column, "checked": 0, "failed": 0}
        for n, i, j, lhs, rhs in instantiate(rel, n_max):
            row["checked"] += 1
            ok = rhs is not None and rhs.to_level == lhs.to_level and word_to_map(lhs) == word_to_map(rhs)
            if not ok:
                row["failed"] += 1
                if report.first_failure is None:
                    report.first_failure = {
                        "relation": rel.name, "n": n, "i": i, "j": j,
                        "lhs": str(lhs), "rhs": None if rhs is None else str(rhs),
                    }
        report.rows.append(row)
        report.checked += row["checked"]
        report.failed += row["failed"]
    return report


# -- multi-index operators and push-through ----------------------------------

S_ALPHA, D_ALPHA_PLUS, U_ALPHA, D_ALPHA = "s_alpha", "d_alpha_plus", "u_alpha", "d_alpha"


def multi_operator(alpha: MultiIndex, flavor: str) -> OperatorWord:
    """``s_alpha``, ``d+_alpha``, ``u_alpha`` or ``d_alpha`` as a word."""
    want = SIMPLICIAL if flavor in (S_ALPHA, D_ALPHA_PLUS) else SYMMETRIC
    if flavor not in (S_ALPHA, D_ALPHA_PLUS, U_ALPHA, D_ALPHA):
        raise OperatorError(f"unknown flavor {flavor!r}")
    if alpha.variant != want:
        raise OperatorError(f"{flavor} needs a {want} multi-index, got {alpha.variant}")
    n, k = alpha.n, len(alpha)
    if flavor == S_ALPHA:
        return OperatorWord.from_spec([("s", i) for i in reversed(alpha.indices)], n - k)
    if flavor == U_ALPHA:
        return OperatorWord.from_spec([("u", i) for i in reversed(alpha.indices)], n - k)
    if flavor == D_ALPHA_PLUS:
        return OperatorWord.from_spec([("d", i + 1) for i in alpha.indices], n)
    return OperatorWord.from_spec([("d", i) for i in alpha.indices], n)


@dataclass(frozen=True)
class Absorbed:
    beta_prime: MultiIndex


@dataclass(frozen=True)
class Slipped:
    """The face slipped past; ``face_index`` uses the flavor's own convention.

    For degeneracies it is a ``d+`` index (the elementary face ``d_{face_index+1}``),
    for quasi-degeneracies a plain face index.  Either way the emitted face is
    never ``d_0``.
    """

    beta_prime: MultiIndex
    face_index: int

    @property
    def face(self) -> int:
        return self.face_index + 1 if self.beta_prime.variant == SIMPLICIAL else self.face_index


PushResult = Union[Absorbed, Slipped]


def push_result_word(result: PushResult) -> OperatorWord:
    beta = result.beta_prime
    flavor = S_ALPHA if beta.variant == SIMPLICIAL else U_ALPHA
    degen = multi_operator(beta, flavor)
    if isinstance(result, Absorbed):
        return degen
    face = OperatorWord.from_spec([("d", result.face)], degen.from_level + 1)
    return degen @ face


def push_face_through_degens(i: int, beta: MultiIndex) -> PushResult:
    """Rewrite ``d+_i s_beta`` as ``s_beta'`` or ``s_beta' d+_r``."""
    if beta.variant != SIMPLICIAL:
        raise OperatorError("push_face_through_degens needs a simplicial multi-index")
    n = beta.n
    if not 0 <= i <= n - 1:
        raise RangeError(f"d+_{i} is not defined at level {n} (needs 0 <= i <= {n - 1})")
    js = beta.indices
    hit = i + 1 if i + 1 in js else i if i in js else None
    if hit is not None:
        rest = tuple(j for j in js if j < hit) + tuple(j - 1 for j in js if j > hit)
        return Absorbed(MultiIndex(rest, n - 1))
    q = sum(1 for j in js if j < i)
    rest = tuple(j for j in js if j < i) + tuple(j - 1 for j in js if j > i + 1)
    return Slipped(MultiIndex(rest, n - 1), i - q)


def push_face_through_quasidegens(i: int, beta: MultiIndex) -> PushResult:
    """Rewrite ``d_i u_beta`` (``i >= 1``) as ``u_beta'`` or ``u_beta' d_r``."""
    if beta.variant != SYMMETRIC:
        raise OperatorError("push_face_through_quasidegens needs a symmetric multi-index")
    n = beta.n
    if not 1 <= i <= n:
        raise RangeError(f"d_{i} cannot be pushed through quasi-degeneracies at level {n} (needs 1 <= i <= {n})")
    js = beta.indices
    if i in js:
        rest = tuple(j for j in js if j < i) + tuple(j - 1 for j in js if j > i)
        return Absorbed(MultiIndex(rest, n - 1, SYMMETRIC))
    q = sum(1 for j in js if j < i)
    rest = tuple(j for j in js if j < i) + tuple(j - 1 for j in js if j > i)
    return Slipped(MultiIndex(rest, n - 1, SYMMETRIC), i - q)


@dataclass(frozen=True)
class PushThrough:
    """Result of pushing a whole face operator across a degeneracy operator.

    The composite equals ``degen(beta_prime)`` followed (on the right, i.e.
    acting first) by the plain faces ``residual`` listed in word order.
    """

    beta_prime: MultiIndex
    residual: tuple[int, ...]

    @property
    def pure(self) -> bool:
        return not self.residual

    def word(self, source_level: int) -> OperatorWord:
        flavor = S_ALPHA if self.beta_prime.variant == SIMPLICIAL else U_ALPHA
        faces = OperatorWord.from_spec([("d", i) for i in self.residual], source_level)
        return multi_operator(self.beta_prime, flavor) @ faces


def push_faces_through(alpha: MultiIndex, beta: MultiIndex) -> PushThrough:
    """Fold single-face pushes of ``d+_alpha s_beta`` (or ``d_alpha u_beta``), largest index first."""
    if alpha.variant != beta.variant:
        raise OperatorError("alpha and beta must share a variant")
    if alpha.n != beta.n:
        raise OperatorError("alpha and beta must share an ambient level")
    push = push_face_through_degens if beta.variant == SIMPLICIAL else push_face_through_quasidegens
    current = beta
    residual: list[int] = []
    for i in reversed(alpha.indices):
        res = push(i, current)
        current = res.beta_prime
        if isinstance(res, Slipped):
            # later faces act after (to the left of) earlier residuals
            residual.insert(0, res.face)
    return PushThrough(current, tuple(residual))


PLUS, PLAIN = "plus", "plain"


def face_absorb_face(i: int, beta: MultiIndex, convention: str = PLUS) -> MultiIndex:
    """The multi-index ``beta'`` with ``d_i d+_beta = d+_beta'`` (or ``d_i d_beta = d_beta'``)."""
    if i == 0:
        raise RangeError("face_absorb_face needs a nonzero face index")
    if convention not in (PLUS, PLAIN):
        raise OperatorError(f"unknown convention {convention!r}")
    shift = 1 if convention == PLUS else 0
    plain = [j + shift for j in beta.indices]
    n, l = beta.n, len(plain)
    if not 1 <= i <= n - l:
        raise RangeError(f"d_{i} is not defined after a {l}-fold face at level {n}")
    q = 0
    while q < l and i + q >= plain[q]:
        q += 1
    new = plain[:q] + [i + q] + plain[q:]
    return MultiIndex(tuple(j - shift for j in new), n, beta.variant)


# -- exhaustive oracles ----------------------------------------------------------


def _composite(alpha: MultiIndex, beta: MultiIndex) -> OperatorWord:
    if beta.variant == SIMPLICIAL:
        return multi_operator(alpha, D_ALPHA_PLUS) @ multi_operator(beta, S_ALPHA)
    return multi_operator(alpha, D_ALPHA) @ multi_operator(beta, U_ALPHA)


def verify_push_through(n_max: int = 6) -> Report:
    """Compare every push-through result with the composite it rewrites, as FinMaps.

    Covers single faces through ``s_beta`` and ``u_beta``, whole multi-index
    faces, and face absorption into multi-index faces, for ``n <= n_max``.
    """
    report = Report("push-through")
    for n in range(1, n_max + 1):
        for beta in enumerate_indices(n, SIMPLICIAL):
            lift = multi_operator(beta, S_ALPHA)
            for i in range(n):
                lhs = OperatorWord.from_spec([("d", i + 1)], n) @ lift
                got = push_result_word(push_face_through_degens(i, beta))
                report.record("single_degens", word_to_map(lhs) == word_to_map(got), {"i": i, "beta": beta.to_json()})
            for i in range(1, n - len(beta) + 1):
                lhs = OperatorWord.from_spec([("d", i)], n - len(beta)) @ multi_operator(beta, D_ALPHA_PLUS)
                merged = face_absorb_face(i, beta)
                ok = word_to_map(lhs) == word_to_map(multi_operator(merged, D_ALPHA_PLUS))
                report.record("face_absorb_face", ok, {"i": i, "beta": beta.to_json()})
        for beta in enumerate_indices(n, SYMMETRIC):
            lift = multi_operator(beta, U_ALPHA)
            for i in range(1, n + 1):
                lhs = OperatorWord.from_spec([("d", i)], n) @ lift
                got = push_result_word(push_face_through_quasidegens(i, beta))
                report.record("single_quasidegens", word_to_map(lhs) == word_to_map(got), {"i": i, "beta": beta.to_json()})
        for variant in (SIMPLICIAL, SYMMETRIC):
            indices = enumerate_indices(n, variant)
            for alpha in indices:
                for beta in indices:
                    got = push_faces_through(alpha, beta).word(n - len(beta))
                    ok = word_to_map(_composite(alpha, beta)) == word_to_map(got)
                    report.record(f"multi_{variant}", ok, {"alpha": alpha.to_json(), "beta": beta.to_json()})
    return report


def verify_dichotomy(n_max: int = 5) -> Report:
    """The pure/residual split of whole multi-index pushes, exhaustively.

    Simplicial: a pure result forces ``alpha <= beta`` in the length-product
    order.  Symmetric: the result is pure exactly when ``alpha`` is contained
    in ``beta``.  A residual never contains ``d_0``.
    """
    report = Report("dichotomy")
    for n in range(n_max + 1):
        for variant in (SIMPLICIAL, SYMMETRIC):
            indices = enumerate_indices(n, variant)
            for alpha in indices:
                for beta in indices:
                    res = push_faces_through(alpha, beta)
                    where = {"alpha": alpha.to_json(), "beta": beta.to_json()}
                    if variant == SIMPLICIAL:
                        report.record("pure_implies_lp", not res.pure or lp_leq(alpha, beta), where)
                    else:
                        report.record("pure_iff_subset", res.pure == (set(alpha) <= set(beta)), where)
                    report.record("residual_avoids_d0", 0 not in res.residual, where)
    return report
