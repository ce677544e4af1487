"""Simplicial and symmetric-simplicial groups, given level-wise.

Two concrete instances serve as test substrate:

* :class:`GammaInstance` -- the simplicial abelian group built from a chain
  complex ``C`` whose level ``n`` is the direct sum of copies of ``C_k``, one per
  monotone surjection ``[n] ->> [k]``.  The Moore convention used throughout is
  "kernel of every face except ``d_0``, boundary ``d_0``", so the coface missing
  ``0`` is the one that acts through the boundary of ``C``.
* :class:`ExponentialInstance` -- level ``n`` is the group of all functions
  ``Fin([m], [n]) -> K`` under pointwise multiplication, for a finite group ``K``.
  An operator with underlying map ``phi`` acts by ``x |-> x(phi o -)``.  This is a
  symmetric-simplicial group, nonabelian whenever ``K`` is.

Elements are read-only numpy integer vectors.  Product ``x - y`` in the
additive notation of the decomposition formulas is ``mul(x, inv(y))``.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .opcalc import FinMap, Generator, OperatorError, OperatorWord, compose_maps, epi_mono
from .report import Report


class GroupError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@functools.lru_cache(maxsize=None)
def _generator_map(g: Generator) -> FinMap:
    return g.to_map()


# -- finite groups -----------------------------------------------------------


class FiniteGroup:
    """A finite group given by its multiplication table on ``0..order-1``."""

    def __init__(self, table, name: Optional[str] = None):
        table = np.asarray(table, dtype=np.int64)
        k = len(table)
        if table.shape != (k, k) or k == 0:
            raise GroupError("group table must be a nonempty square array")
        if table.min() < 0 or table.max() >= k:
            raise GroupError("group table entries must lie in 0..order-1")
        if any(sorted(row) != list(range(k)) for row in table.tolist()) or any(
            sorted(col) != list(range(k)) for col in table.T.tolist()
        ):
            raise GroupError("group table is not a Latin square")
        ids = [e for e in range(k) if list(table[e]) == list(range(k))]
        if not ids or list(table[:, ids[0]]) != list(range(k)):
            raise GroupError("group table has no identity element")
        # associativity: (a b) c == a (b c) for all triples
        left = table[table[:, :, None], np.arange(k)[None, None, :]]
        right = table[np.arange(k)[:, None, None], table[None, :, :]]
        if not np.array_equal(left, right):
            raise GroupError("group table is not associative")
        self.table = _frozen(table)
        self.order = k
        self.identity = ids[0]
        self.inverse = _frozen(np.argmax(table == self.identity, axis=1))
        self.name = name

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def to_json(self) -> dict:
        return {"order": self.order, "table": self.table.tolist()}

    @classmethod
    def from_permutations(cls, perms, name=None) -> FiniteGroup:
        perms = [tuple(p) for p in perms]
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[tuple(p[q[x]] for x in range(len(p)))] for q in perms] for p in perms]
        return cls(table, name)

    @classmethod
    def generated_by(cls, gens, degree: int, name=None) -> FiniteGroup:
        ident = tuple(range(degree))
        seen = [ident]
        known = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(g[p[x]] for x in range(degree))
                    if q not in known:
                        known.add(q)
                        seen.append(q)
                        nxt.append(q)
            frontier = nxt
        return cls.from_permutations(seen, name)

    @classmethod
    def builtin(cls, token: str) -> FiniteGroup:
        """``S<k>`` (symmetric), ``Z<k>`` (cyclic), ``D<k>`` (dihedral of order 2k), ``Z2xZ2``."""
        token = token.strip()
        try:
            if token == "Z2xZ2":
                return cls([[a ^ b for b in range(4)] for a in range(4)], token)
            kind, k = token[0].upper(), int(token[1:])
        except (ValueError, IndexError):
            raise GroupError(f"unknown group token {token!r}") from None
        if k < 1:
            raise GroupError(f"unknown group token {token!r}")
        if kind == "Z":
            return cls([[(a + b) % k for b in range(k)] for a in range(k)], token)
        if kind == "S" and k <= 5:
            return cls.from_permutations(itertools.permutations(range(k)), token)
        if kind == "D" and k >= 3:
            rot = tuple((x + 1) % k for x in range(k))
            ref = tuple((-x) % k for x in range(k))
            return cls.generated_by([rot, ref], k, token)
        raise GroupError(f"unknown group token {token!r}")

    @classmethod
    def parse(cls, text: str) -> FiniteGroup:
        text = text.strip()
        if text.startswith("{"):
            data = json.loads(text)
            table = data["table"]
            if "order" in data and int(data["order"]) != len(table):
                raise GroupError("declared order does not match the table")
            return cls(table)
        return cls.builtin(text)


# -- the interface -------------------------------------------------------------


class SGroup:
    """Level-wise group operations plus the action of operators.

    Subclasses provide ``size``, ``act_map``, the group law, sampling and the
    payload encoding.  ``act`` applies a single generator; ``act_word`` applies a
    word one generator at a time, right to left.
    """

    spec: str = ""
    is_symmetric: bool = False
    is_abelian: bool = False

    def size(self, n: int) -> int:
        raise NotImplementedError

    def identity(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def mul(self, n: int, a, b) -> np.ndarray:
        raise NotImplementedError

    def inv(self, n: int, a) -> np.ndarray:
        raise NotImplementedError

    def eq(self, n: int, a, b) -> bool:
        return bool(np.array_equal(a, b))

    def is_identity(self, n: int, a) -> bool:
        return self.eq(n, a, self.identity(n))

    def sub(self, n: int, a, b) -> np.ndarray:
        """``a - b`` in additive notation, i.e. ``a * b^-1``."""
        return self.mul(n, a, self.inv(n, b))

    def product(self, n: int, elements) -> np.ndarray:
        out = self.identity(n)
        for x in elements:
            out = self.mul(n, out, x)
        return out

    def act_map(self, f: FinMap, a) -> np.ndarray:
        raise NotImplementedError

    def act(self, gen: Generator, a) -> np.ndarray:
        if not self.is_symmetric and gen.kind not in ("d", "s"):
            raise OperatorError(f"{self.spec} is not symmetric; {gen} does not act on it")
        return self.act_map(_generator_map(gen), a)

    def act_word(self, w: OperatorWord, a) -> np.ndarray:
        for g in reversed(w.generators):
            a = self.act(g, a)
        return a

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def sample_moore(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def sample_cycle(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def encode(self, n: int, a) -> dict:
        raise NotImplementedError

    def decode(self, data: dict) -> tuple[int, np.ndarray]:
        raise NotImplementedError

    def _check_level(self, n: int, a):
        if np.shape(a) != (self.size(n),):
            raise GroupError(f"element of shape {np.shape(a)} does not live at level {n}")


def _key(table) -> str:
    return ",".join(map(str, table))


# -- exponential instance ----------------------------------------------------


class ExponentialInstance(SGroup):
    is_symmetric = True

    def __init__(self, m: int, group: FiniteGroup, spec: Optional[str] = None):
        if m < 0:
            raise GroupError("m must be nonnegative")
        self.m = m
        self.group = group
        self.is_abelian = group.is_abelian
        self.spec = spec or f"exponential:{m}:{json.dumps(group.to_json(), separators=(',', ':'))}"
        self._tables: dict[int, np.ndarray] = {}
        self._index: dict[FinMap, np.ndarray] = {}
        self._masks: dict[tuple[int, int], np.ndarray] = {}

    def size(self, n: int) -> int:
        return (n + 1) ** (self.m + 1)

    def tables(self, n: int) -> np.ndarray:
        """All maps ``[m] -> [n]`` as rows, in lexicographic order of tables."""
        if n not in self._tables:
            rows = np.array(list(itertools.product(range(n + 1), repeat=self.m + 1)), dtype=np.int64)
            self._tables[n] = _frozen(rows.reshape(-1, self.m + 1))
        return self._tables[n]

    def _encode(self, rows: np.ndarray, n: int) -> np.ndarray:
        weights = (n + 1) ** np.arange(self.m, -1, -1, dtype=np.int64)
        return rows @ weights

    def _gather(self, f: FinMap) -> np.ndarray:
        idx = self._index.get(f)
        if idx is None:
            images = np.asarray(f.table, dtype=np.int64)[self.tables(f.dom)]
            idx = self._index[f] = _frozen(self._encode(images, f.cod))
        return idx

    def act_map(self, f: FinMap, a) -> np.ndarray:
        self._check_level(f.cod, a)
        return _frozen(np.asarray(a)[self._gather(f)])

    def identity(self, n: int) -> np.ndarray:
        return _frozen(np.full(self.size(n), self.group.identity, dtype=np.int64))

    def mul(self, n: int, a, b) -> np.ndarray:
        return _frozen(self.group.table[a, b])

    def inv(self, n: int, a) -> np.ndarray:
        return _frozen(self.group.inverse[a])

    def sample(self, n: int, rng) -> np.ndarray:
        return _frozen(rng.integers(0, self.group.order, self.size(n)))

    def support_mask(self, n: int, lowest: int) -> np.ndarray:
        """Coordinates whose map ``[m] -> [n]`` hits every value in ``lowest..n``.

        ``d_i`` reads exactly the coordinates missing ``i``, so Moore chains are
        supported where ``lowest = 1`` and cycles where ``lowest = 0``.
        """
        key = (n, lowest)
        if key not in self._masks:
            rows = self.tables(n)
            mask = np.ones(len(rows), dtype=bool)
            for v in range(lowest, n + 1):
                mask &= (rows == v).any(axis=1)
            self._masks[key] = _frozen(mask)
        return self._masks[key]

    def _sample_on(self, n: int, mask, rng) -> np.ndarray:
        x = np.full(self.size(n), self.group.identity, dtype=np.int64)
        x[mask] = rng.integers(0, self.group.order, int(mask.sum()))
        return _frozen(x)

    def sample_moore(self, n: int, rng) -> np.ndarray:
        return self._sample_on(n, self.support_mask(n, 1), rng)

    def sample_cycle(self, n: int, rng) -> np.ndarray:
        return self._sample_on(n, self.support_mask(n, 0), rng)

    def encode(self, n: int, a) -> dict:
        self._check_level(n, a)
        return {
            "instance": self.spec,
            "n": n,
            "payload": {_key(row): int(v) for row, v in zip(self.tables(n).tolist(), np.asarray(a).tolist())},
        }

    def decode(self, data: dict) -> tuple[int, np.ndarray]:
        n = int(data["n"])
        payload = data["payload"]
        keys = [_key(row) for row in self.tables(n).tolist()]
        if set(payload) != set(keys):
            raise GroupError(f"payload keys do not enumerate Fin([{self.m}],[{n}])")
        values = np.array([int(payload[k]) for k in keys], dtype=np.int64)
        if values.min(initial=0) < 0 or values.max(initial=0) >= self.group.order:
            raise GroupError("payload values are not group elements")
        return n, _frozen(values)


# -- chain complexes and the Gamma instance ----------------------------------


@dataclass(frozen=True)
class ChainComplexData:
    """Finite abelian chain groups ``C_0..C_N`` and boundaries ``C_k -> C_{k-1}``.

    ``groups[k]`` lists the cyclic moduli of ``C_k``; ``boundaries[k-1]`` is the
    integer matrix of the boundary out of ``C_k`` (rows index ``C_{k-1}``).
    """

    groups: tuple[tuple[int, ...], ...]
    boundaries: tuple[np.ndarray, ...]

    def __post_init__(self):
        groups = tuple(tuple(int(m) for m in g) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        if not groups:
            raise GroupError("a chain complex needs at least C_0")
        if any(m < 1 for g in groups for m in g):
            raise GroupError("moduli must be positive")
        if len(self.boundaries) != len(groups) - 1:
            raise GroupError(f"expected {len(groups) - 1} boundary matrices, got {len(self.boundaries)}")
        mats = []
        for k, b in enumerate(self.boundaries, start=1):
            b = np.asarray(b, dtype=np.int64).reshape(len(groups[k - 1]), len(groups[k]))
            target = np.array(groups[k - 1], dtype=np.int64).reshape(-1, 1)
            b = b % target if len(b) else b
            source = np.array(groups[k], dtype=np.int64).reshape(1, -1)
            if b.size and ((b * source) % target).any():
                raise GroupError(f"boundary out of C_{k} is not a well-defined homomorphism")
            mats.append(_frozen(b))
        for k in range(2, len(groups)):
            comp = mats[k - 2] @ mats[k - 1]
            target = np.array(groups[k - 2], dtype=np.int64).reshape(-1, 1)
            if comp.size and (comp % target).any():
                raise GroupError(f"boundary squared is nonzero out of C_{k}")
        object.__setattr__(self, "boundaries", tuple(mats))

    @property
    def length(self) -> int:
        return len(self.groups) - 1

    def order(self, k: int) -> int:
        return int(np.prod(self.groups[k])) if k <= self.length else 1

    def to_json(self) -> dict:
        return {"groups": [list(g) for g in self.groups], "boundaries": [b.tolist() for b in self.boundaries]}

    @classmethod
    def from_json(cls, data: dict) -> ChainComplexData:
        groups = data["groups"]
        bounds = [
            np.array(b, dtype=np.int64).reshape(len(groups[k]), len(groups[k + 1]))
            for k, b in enumerate(data["boundaries"])
        ]
        return cls(tuple(tuple(g) for g in groups), tuple(bounds))

    def __eq__(self, other):
        if not isinstance(other, ChainComplexData):
            return NotImplemented
        return self.groups == other.groups and all(
            np.array_equal(a, b) for a, b in zip(self.boundaries, other.boundaries)
        )

    def __hash__(self):
        return hash((self.groups, tuple(b.tobytes() for b in self.boundaries)))


DEFAULT_COMPLEX = {
    "groups": [[2], [4], [2, 2], [2]],
    "boundaries": [[[1]], [[2, 0]], [[0], [1]]],
}


def monotone_surjections(n: int, max_k: Optional[int] = None) -> list[FinMap]:
    """Monotone surjections out of ``[n]``, largest codomain first."""
    out = []
    for r in range(n + 1):
        k = n - r
        if max_k is not None and k > max_k:
            continue
        for collapsed in itertools.combinations(range(n), r):
            table, v = [0], 0
            for pos in range(n):
                if pos not in collapsed:
                    v += 1
                table.append(v)
            out.append(FinMap(n, k, tuple(table)))
    return out


class GammaInstance(SGroup):
    is_symmetric = False
    is_abelian = True

    def __init__(self, complex_data: ChainComplexData, spec: Optional[str] = None):
        self.C = complex_data
        self.spec = spec or "gamma:" + json.dumps(complex_data.to_json(), separators=(",", ":"))
        self._layouts: dict[int, tuple] = {}
        self._matrices: dict[FinMap, np.ndarray] = {}

    def layout(self, n: int):
        """``(summands, moduli)`` where summands are ``(surjection, k, offset)``."""
        if n not in self._layouts:
            summands, moduli, offset = [], [], 0
            for sigma in monotone_surjections(n, self.C.length):
                k = sigma.cod
                summands.append((sigma, k, offset))
                moduli.extend(self.C.groups[k])
                offset += len(self.C.groups[k])
            self._layouts[n] = (summands, _frozen(np.array(moduli, dtype=np.int64)))
        return self._layouts[n]

    def moduli(self, n: int) -> np.ndarray:
        return self.layout(n)[1]

    def block(self, n: int, sigma: FinMap) -> slice:
        for s, k, off in self.layout(n)[0]:
            if s == sigma:
                return slice(off, off + len(self.C.groups[k]))
        raise GroupError(f"{sigma.table} is not a summand at level {n}")

    def size(self, n: int) -> int:
        return len(self.moduli(n))

    def matrix(self, f: FinMap) -> np.ndarray:
        """Integer matrix of ``f^*`` from level ``f.cod`` to level ``f.dom``."""
        mat = self._matrices.get(f)
        if mat is not None:
            return mat
        if not f.is_monotone:
            raise OperatorError(f"{f.table} is not monotone and does not act on a simplicial group")
        a, b = f.dom, f.cod
        mat = np.zeros((self.size(a), self.size(b)), dtype=np.int64)
        for sigma, k, off in self.layout(b)[0]:
            width = len(self.C.groups[k])
            if not width:
                continue
            tau, delta = epi_mono(compose_maps(sigma, f))
            rows = self.block(a, tau)
            if delta.is_identity:
                mat[rows, off:off + width] += np.eye(width, dtype=np.int64)
            elif delta.dom == k - 1 and delta.table == tuple(range(1, k + 1)):
                mat[rows, off:off + width] += self.C.boundaries[k - 1]
        self._matrices[f] = _frozen(mat)
        return mat

    def act_map(self, f: FinMap, a) -> np.ndarray:
        self._check_level(f.cod, a)
        return _frozen((self.matrix(f) @ np.asarray(a)) % self.moduli(f.dom))

    def identity(self, n: int) -> np.ndarray:
        return _frozen(np.zeros(self.size(n), dtype=np.int64))

    def mul(self, n: int, a, b) -> np.ndarray:
        return _frozen((np.asarray(a) + np.asarray(b)) % self.moduli(n))

    def inv(self, n: int, a) -> np.ndarray:
        return _frozen((-np.asarray(a)) % self.moduli(n))

    def sample(self, n: int, rng) -> np.ndarray:
        mod = self.moduli(n)
        return _frozen(rng.integers(0, mod) if len(mod) else np.zeros(0, dtype=np.int64))

    def embed(self, n: int, c) -> np.ndarray:
        """Place a chain ``c`` of ``C_n`` on the identity summand of level ``n``."""
        x = np.zeros(self.size(n), dtype=np.int64)
        if n <= self.C.length:
            x[self.block(n, FinMap.identity(n))] = np.asarray(c) % np.array(self.C.groups[n], dtype=np.int64)
        return _frozen(x)

    def sample_moore(self, n: int, rng) -> np.ndarray:
        if n > self.C.length or not self.C.groups[n]:
            return self.identity(n)
        return self.embed(n, rng.integers(0, np.array(self.C.groups[n])))

    @functools.lru_cache(maxsize=None)
    def chain_cycles(self, n: int) -> np.ndarray:
        """All cycles of ``C_n`` by enumeration."""
        if n > self.C.length:
            return np.zeros((1, 0), dtype=np.int64)
        elems = all_elements(self.C.groups[n])
        if n == 0:
            return elems
        target = np.array(self.C.groups[n - 1], dtype=np.int64)
        images = (elems @ self.C.boundaries[n - 1].T) % target if len(target) else np.zeros((len(elems), 0))
        return elems[~images.any(axis=1)]

    def sample_cycle(self, n: int, rng) -> np.ndarray:
        if n > self.C.length:
            return self.identity(n)
        cycles = self.chain_cycles(n)
        return self.embed(n, cycles[rng.integers(0, len(cycles))])

    def encode(self, n: int, a) -> dict:
        self._check_level(n, a)
        a = np.asarray(a).tolist()
        payload = {}
        for sigma, k, off in self.layout(n)[0]:
            payload[_key(sigma.table)] = a[off:off + len(self.C.groups[k])]
        return {"instance": self.spec, "n": n, "payload": payload}

    def decode(self, data: dict) -> tuple[int, np.ndarray]:
        n = int(data["n"])
        payload = data["payload"]
        summands = self.layout(n)[0]
        if set(payload) != {_key(s.table) for s, _, _ in summands}:
            raise GroupError(f"payload keys do not enumerate the surjections out of [{n}]")
        values = []
        for sigma, k, _ in summands:
            coords = list(payload[_key(sigma.table)])
            if len(coords) != len(self.C.groups[k]):
                raise GroupError(f"summand {sigma.table} needs {len(self.C.groups[k])} coordinates")
            values.extend(coords)
        return n, _frozen(np.array(values, dtype=np.int64).reshape(-1) % self.moduli(n))


def all_elements(moduli) -> np.ndarray:
    moduli = list(moduli)
    if not moduli:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(m) for m in moduli], indexing="ij")
    return np.stack(grids, axis=-1).reshape(-1, len(moduli)).astype(np.int64)


def gamma_instance(C: ChainComplexData) -> GammaInstance:
    return GammaInstance(C)


def exponential_instance(m: int, K) -> ExponentialInstance:
    group = K if isinstance(K, FiniteGroup) else FiniteGroup.parse(K)
    spec = f"exponential:{m}:{group.name}" if group.name else None
    return ExponentialInstance(m, group, spec)


@functools.lru_cache(maxsize=64)
def make_instance(spec: str) -> SGroup:
    """Build an instance from ``gamma[:<json>]`` or ``exponential:<m>:<group>``."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "gamma":
            data = DEFAULT_COMPLEX if rest in ("", "default") else json.loads(rest)
            inst = GammaInstance(ChainComplexData.from_json(data), spec=spec)
            return inst
        if kind == "exponential":
            m, _, group = rest.partition(":")
            return ExponentialInstance(int(m), FiniteGroup.parse(group or "S3"), spec=spec)
    except (ValueError, KeyError, TypeError) as exc:
        raise GroupError(f"bad instance spec {spec!r}: {exc}") from exc
    raise GroupError(f"unknown instance kind in {spec!r}")


# -- Moore complex -------------------------------------------------------------


def _face(n: int, i: int) -> Generator:
    return Generator("d", i, n)


def moore_membership(inst: SGroup, n: int, g) -> bool:
    return all(inst.is_identity(n - 1, inst.act(_face(n, i), g)) for i in range(1, n + 1))


def cycle_membership(inst: SGroup, n: int, g) -> bool:
    # Z_0 is all of M_0
    return n == 0 or all(inst.is_identity(n - 1, inst.act(_face(n, i), g)) for i in range(0, n + 1))


def moore_kernel(inst: GammaInstance, n: int, limit: int = 1 << 20) -> np.ndarray:
    """Every element of level ``n`` killed by all faces but ``d_0``, by enumeration."""
    mod = inst.moduli(n)
    if int(np.prod(mod, dtype=object)) > limit:
        raise GroupError(f"level {n} has more than {limit} elements")
    elems = all_elements(mod)
    alive = np.ones(len(elems), dtype=bool)
    for i in range(1, n + 1):
        f = _generator_map(_face(n, i))
        images = (elems @ inst.matrix(f).T) % inst.moduli(n - 1)
        alive &= ~images.any(axis=1)
    return elems[alive]


def extract_moore_complex(inst: GammaInstance, report: Optional[Report] = None) -> ChainComplexData:
    """Read the Moore complex of a Gamma instance back off its levels ``0..N``.

    Each Moore group is found by brute-force enumeration and compared with the
    identity summand; boundaries are read by applying ``d_0`` to basis chains.
    """
    report = report if report is not None else Report("moore-extraction")
    C = inst.C
    groups, bounds = [], []
    for n in range(C.length + 1):
        kernel = moore_kernel(inst, n)
        ident = inst.block(n, FinMap.identity(n))
        outside = np.ones(inst.size(n), dtype=bool)
        outside[ident] = False
        in_summand = not kernel[:, outside].any()
        report.record("moore_group", in_summand and len(kernel) == C.order(n), {"n": n, "order": len(kernel)})
        groups.append(C.groups[n])
        if n == 0:
            continue
        lower = inst.block(n - 1, FinMap.identity(n - 1))
        lower_out = np.ones(inst.size(n - 1), dtype=bool)
        lower_out[lower] = False
        cols = []
        for j in range(len(C.groups[n])):
            e = np.zeros(len(C.groups[n]), dtype=np.int64)
            e[j] = 1
            y = inst.act(_face(n, 0), inst.embed(n, e))
            report.record("boundary_in_summand", not y[lower_out].any(), {"n": n, "basis": j})
            cols.append(y[lower])
        mat = np.array(cols, dtype=np.int64).T.reshape(len(C.groups[n - 1]), len(C.groups[n]))
        bounds.append(mat)
    out = ChainComplexData(tuple(groups), tuple(bounds))
    report.record("boundaries", out == C, {"extracted": out.to_json()})
    return out


def moore_roundtrip(C: ChainComplexData) -> Report:
    report = Report("gamma-roundtrip")
    extract_moore_complex(GammaInstance(C), report)
    return report


def cyclic_complexes(max_order: int = 4, max_length: int = 3):
    """Every chain complex of single cyclic groups ``Z/m`` (``m <= max_order``)."""
    orders = range(1, max_order + 1)
    for N in range(max_length + 1):
        for ms in itertools.product(orders, repeat=N + 1):
            choices = [
                [b for b in range(ms[k - 1]) if (b * ms[k]) % ms[k - 1] == 0] for k in range(1, N + 1)
            ]
            for bs in itertools.product(*choices):
                if any((bs[k - 2] * bs[k - 1]) % ms[k - 2] for k in range(2, N + 1)):
                    continue
                yield ChainComplexData(
                    tuple((m,) for m in ms), tuple(np.array([[b]], dtype=np.int64) for b in bs)
                )


# -- sampled verification ------------------------------------------------------


def random_word(rng: np.random.Generator, source: int, target: int, max_level: int, symmetric: bool,
                steps: int = 4) -> OperatorWord:
    """A random composable word from level ``source`` to ``target``."""
    applied: list[Generator] = []
    level = source

    def options(c):
        opts = []
        if c >= 1:
            opts += [("d", i, c) for i in range(c + 1)]
        if c + 1 <= max_level:
            opts += [("s", i, c + 1) for i in range(c + 1)]
            if symmetric:
                opts += [("u", i, c + 1) for i in range(1, c + 2)]
        if symmetric:
            opts += [("t", i, c) for i in range(c)] + [("z", i, c) for i in range(c + 1)]
            opts += [("r", i, c) for i in range(1, c + 1)]
        return opts

    for _ in range(int(rng.integers(0, steps + 1))):
        opts = options(level)
        kind, i, lev = opts[int(rng.integers(0, len(opts)))]
        g = Generator(kind, i, lev)
        applied.append(g)
        level = g.target
    while level != target:
        if level > target:
            g = Generator("d", int(rng.integers(0, level + 1)), level)
        else:
            kind = "u" if symmetric and rng.integers(0, 2) else "s"
            i = int(rng.integers(1, level + 2)) if kind == "u" else int(rng.integers(0, level + 1))
            g = Generator(kind, i, level + 1)
        applied.append(g)
        level = g.target
    return OperatorWord.of(tuple(reversed(applied)), source)


def verify_instance(inst: SGroup, max_level: int = 4, words_per_pair: int = 100, samples: int = 2,
                    seed: int = 0) -> Report:
    """Functoriality, homomorphism and ``d_0 d_0 = e`` on Moore chains, by sampling."""
    from .opcalc import map_to_word_delta, map_to_word_fin, word_to_map

    rng = np.random.default_rng(seed)
    report = Report("instance")
    canon = map_to_word_fin if inst.is_symmetric else map_to_word_delta
    for a in range(max_level + 1):
        for b in range(max_level + 1):
            for _ in range(words_per_pair):
                w = random_word(rng, a, b, max_level, inst.is_symmetric)
                other = canon(word_to_map(w))
                for _ in range(samples):
                    x = inst.sample(a, rng)
                    ok = inst.eq(b, inst.act_word(w, x), inst.act_word(other, x))
                    report.record("functoriality", ok, {"word": str(w), "canonical": str(other)})
    for n in range(max_level + 1):
        gens = [Generator("d", i, n) for i in range(n + 1)] if n else []
        gens += [Generator("s", i, n + 1) for i in range(n + 1)] if n < max_level else []
        if inst.is_symmetric:
            gens += [Generator("t", i, n) for i in range(n)]
            gens += [Generator("u", i, n + 1) for i in range(1, n + 2)] if n < max_level else []
        for g in gens:
            for _ in range(samples):
                x, y = inst.sample(n, rng), inst.sample(n, rng)
                lhs = inst.act(g, inst.mul(n, x, y))
                rhs = inst.mul(g.target, inst.act(g, x), inst.act(g, y))
                report.record("homomorphism", inst.eq(g.target, lhs, rhs), {"generator": str(g), "n": n})
        if n >= 2:
            for _ in range(samples * 5):
                m = inst.sample_moore(n, rng)
                dd = inst.act(_face(n - 1, 0), inst.act(_face(n, 0), m))
                report.record("d0_squared", inst.is_identity(n - 2, dd), {"n": n})
    return report


def verify_symmetric_invariance(inst: SGroup, n: int, trials: int = 100, seed: int = 0) -> Report:
    """Transpositions fixing 0 preserve Moore chains; all transpositions preserve cycles."""
    if not inst.is_symmetric:
        raise GroupError(f"{inst.spec} is not a symmetric instance")
    rng = np.random.default_rng(seed)
    report = Report("symmetric-invariance")
    for _ in range(trials):
        g = inst.sample_moore(n, rng)
        for j in range(n):
            image = inst.act(Generator("t", j, n), g)
            member = moore_membership(inst, n, image)
            if j == 0:
                if not member:
                    report.note("t0_moore_out_of_claim")
                continue
            report.record("moore_invariant", member, {"n": n, "t": j, "element": inst.encode(n, g)})
        z = inst.sample_cycle(n, rng)
        for j in range(n):
            image = inst.act(Generator("t", j, n), z)
            report.record("cycle_invariant", cycle_membership(inst, n, image),
                          {"n": n, "t": j, "element": inst.encode(n, z)})
    return report


def verify_symmetric_chain_condition(inst: SGroup, n: int, trials: int = 100, seed: int = 0) -> Report:
    """``d_0 t_i = t_{i-1} d_0`` on Moore chains and ``d_0 t_0 = d_1 = e`` on cycles."""
    if not inst.is_symmetric:
        raise GroupError(f"{inst.spec} is not a symmetric instance")
    rng = np.random.default_rng(seed)
    report = Report("symmetric-chain-condition")
    if n == 0:
        return report
    d0 = _face(n, 0)
    for _ in range(trials):
        m = inst.sample_moore(n, rng)
        for i in range(1, n):
            lhs = inst.act(d0, inst.act(Generator("t", i, n), m))
            rhs = inst.act(Generator("t", i - 1, n - 1), inst.act(d0, m))
            report.record("boundary_commutes", inst.eq(n - 1, lhs, rhs),
                          {"n": n, "i": i, "element": inst.encode(n, m)})
        z = inst.sample_cycle(n, rng)
        lhs = inst.act(d0, inst.act(Generator("t", 0, n), z))
        report.record("cycle_t0", inst.is_identity(n - 1, lhs) and inst.eq(n - 1, lhs, inst.act(_face(n, 1), z)),
                      {"n": n, "element": inst.encode(n, z)})
    return report
