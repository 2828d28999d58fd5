"""Seeded random formula corpora and the fixed formula lists used by tests.

``TENSERA_SEED`` overrides the default seed so every generated corpus is
reproducible from the environment alone.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from pathlib import Path

from .formula import (
    And,
    Atom,
    BlackBox,
    BlackDia,
    Box,
    Dia,
    Formula,
    NegAtom,
    Or,
    is_black_free,
    parse,
    size,
    to_text,
)

DEFAULT_SEED = 20110601


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("TENSERA_SEED")
    return int(raw) if raw else default


@dataclass(frozen=True)
class CorpusConfig:
    count: int = 200
    max_size: int = 7
    atoms: tuple[str, ...] = ("a", "b")
    modal_only: bool = False
    seed: int | None = None


def random_formula(rng: random.Random, n: int, atoms=("a", "b"), modal_only: bool = False) -> Formula:
    """A uniformly shaped NNF formula with exactly ``n`` syntax-tree nodes."""
    if n <= 1:
        name = rng.choice(atoms)
        return Atom(name) if rng.random() < 0.5 else NegAtom(name)
    unary = (Box, Dia) if modal_only else (Box, Dia, BlackBox, BlackDia)
    if n == 2 or rng.random() < 0.45:
        return rng.choice(unary)(random_formula(rng, n - 1, atoms, modal_only))
    left = rng.randint(1, n - 2)
    op = rng.choice((And, Or))
    return op(random_formula(rng, left, atoms, modal_only), random_formula(rng, n - 1 - left, atoms, modal_only))


def generate(cfg: CorpusConfig = CorpusConfig()) -> list[Formula]:
    """Distinct formulas of size 1..max_size, in generation order."""
    rng = random.Random(seed_from_env() if cfg.seed is None else cfg.seed)
    seen: dict[Formula, None] = {}
    attempts = 0
    while len(seen) < cfg.count and attempts < cfg.count * 200:
        attempts += 1
        f = random_formula(rng, rng.randint(1, cfg.max_size), cfg.atoms, cfg.modal_only)
        seen.setdefault(f, None)
    return list(seen)


# Concrete instances of the four tense axioms over atoms a and b.
KT_AXIOMS = (
    "a -> []<*>a",
    "a -> [*]<>a",
    "[](a -> b) -> ([]a -> []b)",
    "[*](a -> b) -> ([*]a -> [*]b)",
)

# Non-theorems of the base tense logic, each with a small countermodel.
KT_NON_THEOREMS = (
    "[]a -> a",
    "<>a -> []a",
    "[]a -> [][]a",
    "<>[]a -> []<>a",
    "a -> []a",
    "<*>a -> a",
    "a -> <>a",
    "[]<>a -> <>[]a",
    "<>a & <>b -> <>(a & b)",
    "[*]a -> <*>a",
)


def write_corpus(formulas, path: str | Path) -> None:
    lines = [to_text(f) for f in formulas]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_corpus(path: str | Path) -> list[Formula]:
    """One formula per line; blank lines and ``#`` comments are skipped."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        text = line.split("#", 1)[0].strip()
        if text:
            out.append(parse(text))
    return out


def modal_subset(formulas) -> list[Formula]:
    return [f for f in formulas if is_black_free(f)]


def by_size(formulas, max_size: int) -> list[Formula]:
    return [f for f in formulas if size(f) <= max_size]
