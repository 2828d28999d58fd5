"""Kripke semantics and a bounded countermodel search.

Truth sets are int bitmasks over worlds, so a formula is evaluated at all
worlds of a model in one pass.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .formula import And, Atom, BlackBox, BlackDia, Box, Dia, Formula, NegAtom, Or, atoms

FRAME_FILTERS = ("none", "refl+trans", "equivalence", "partial-function")


@dataclass(frozen=True)
class KripkeModel:
    worlds: int
    relation: frozenset[tuple[int, int]]
    valuation: dict[str, frozenset[int]]

    def __post_init__(self):
        if self.worlds < 1:
            raise ValueError("a model needs at least one world")
        for u, v in self.relation:
            if not (0 <= u < self.worlds and 0 <= v < self.worlds):
                raise ValueError(f"relation pair {(u, v)} outside the worlds")

    def __hash__(self):
        return hash((self.worlds, self.relation, tuple(sorted(self.valuation.items()))))

    def to_json(self, world: int | None = None) -> dict:
        out = {
            "worlds": self.worlds,
            "rel": [list(p) for p in sorted(self.relation)],
            "val": {a: sorted(ws) for a, ws in sorted(self.valuation.items())},
        }
        if world is not None:
            out["world"] = world
        return out

    @staticmethod
    def from_json(obj: dict) -> "KripkeModel":
        return KripkeModel(
            obj["worlds"],
            frozenset(tuple(p) for p in obj["rel"]),
            {a: frozenset(ws) for a, ws in obj["val"].items()},
        )


class _Evaluator:
    def __init__(self, n: int, relation, valuation: dict[str, int]):
        self.n = n
        self.full = (1 << n) - 1
        self.succ = [0] * n
        self.pred = [0] * n
        for u, v in relation:
            self.succ[u] |= 1 << v
            self.pred[v] |= 1 << u
        self.val = valuation
        self.cache: dict[Formula, int] = {}

    def mask(self, f: Formula) -> int:
        hit = self.cache.get(f)
        if hit is not None:
            return hit
        match f:
            case Atom(name):
                m = self.val.get(name, 0)
            case NegAtom(name):
                m = self.full & ~self.val.get(name, 0)
            case And(l, r):
                m = self.mask(l) & self.mask(r)
            case Or(l, r):
                m = self.mask(l) | self.mask(r)
            case Box(b):
                mb = self.mask(b)
                m = self._select(lambda w: self.succ[w] & ~mb == 0)
            case Dia(b):
                mb = self.mask(b)
                m = self._select(lambda w: self.succ[w] & mb != 0)
            case BlackBox(b):
                mb = self.mask(b)
                m = self._select(lambda w: self.pred[w] & ~mb == 0)
            case BlackDia(b):
                mb = self.mask(b)
                m = self._select(lambda w: self.pred[w] & mb != 0)
            case _:
                raise TypeError(f"not a formula: {f!r}")
        self.cache[f] = m
        return m

    def _select(self, test) -> int:
        m = 0
        for w in range(self.n):
            if test(w):
                m |= 1 << w
        return m


def _masks(m: KripkeModel) -> dict[str, int]:
    return {a: sum(1 << w for w in ws) for a, ws in m.valuation.items()}


def truth_mask(m: KripkeModel, f: Formula) -> int:
    return _Evaluator(m.worlds, m.relation, _masks(m)).mask(f)


def forces(m: KripkeModel, w: int, f: Formula) -> bool:
    if not 0 <= w < m.worlds:
        raise ValueError(f"world {w} not in the model")
    return bool(truth_mask(m, f) >> w & 1)


# --- frame enumeration ---------------------------------------------------------------


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(n)]


def _encode(rel: frozenset[tuple[int, int]], n: int) -> int:
    return sum(1 << (u * n + v) for u, v in rel)


@lru_cache(maxsize=None)
def canonical_relations(n: int) -> tuple[frozenset[tuple[int, int]], ...]:
    """One relation per isomorphism class, the one with the smallest encoding."""
    pairs = _pairs(n)
    perms = list(itertools.permutations(range(n)))
    out = []
    for code in range(1 << (n * n)):
        rel = frozenset(p for b, p in enumerate(pairs) if code >> b & 1)
        if all(_encode(frozenset((pi[u], pi[v]) for u, v in rel), n) >= code for pi in perms):
            out.append(rel)
    return tuple(out)


def frame_ok(rel: frozenset[tuple[int, int]], n: int, frame_filter: str) -> bool:
    if frame_filter == "none":
        return True
    refl = all((w, w) in rel for w in range(n))
    trans = all((u, x) in rel for u, v in rel for v2, x in rel if v == v2)
    if frame_filter == "refl+trans":
        return refl and trans
    if frame_filter == "equivalence":
        return refl and trans and all((v, u) in rel for u, v in rel)
    if frame_filter == "partial-function":
        return all(sum(1 for (u2, _) in rel if u2 == u) <= 1 for u in range(n))
    raise ValueError(f"unknown frame filter {frame_filter!r}; choose from {FRAME_FILTERS}")


def frames(max_worlds: int, frame_filter: str = "none") -> Iterator[tuple[int, frozenset[tuple[int, int]]]]:
    for n in range(1, max_worlds + 1):
        for rel in canonical_relations(n):
            if frame_ok(rel, n, frame_filter):
                yield n, rel


def models(max_worlds: int, atom_names, frame_filter: str = "none") -> Iterator[KripkeModel]:
    names = sorted(atom_names)
    for n, rel in frames(max_worlds, frame_filter):
        for bits in itertools.product(range(1 << n), repeat=len(names)):
            yield KripkeModel(n, rel, {a: frozenset(w for w in range(n) if b >> w & 1) for a, b in zip(names, bits)})


def find_countermodel(f: Formula, max_worlds: int = 4, frame_filter: str = "none") -> tuple[KripkeModel, int] | None:
    """Smallest pointed model (in enumeration order) where ``f`` is false."""
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    if frame_filter not in FRAME_FILTERS:
        raise ValueError(f"unknown frame filter {frame_filter!r}; choose from {FRAME_FILTERS}")
    names = sorted(atoms(f))
    for n, rel in frames(max_worlds, frame_filter):
        full = (1 << n) - 1
        for bits in itertools.product(range(1 << n), repeat=len(names)):
            ev = _Evaluator(n, rel, dict(zip(names, bits)))
            false_at = full & ~ev.mask(f)
            if false_at:
                w = (false_at & -false_at).bit_length() - 1
                val = {a: frozenset(x for x in range(n) if b >> x & 1) for a, b in zip(names, bits)}
                return KripkeModel(n, rel, val), w
    return None


def valid_up_to(f: Formula, max_worlds: int, frame_filter: str = "none") -> bool:
    return find_countermodel(f, max_worlds, frame_filter) is None


def countermodel_json(found: tuple[KripkeModel, int] | None) -> str:
    if found is None:
        return json.dumps({"result": "NotFound"})
    m, w = found
    return json.dumps(m.to_json(w))
