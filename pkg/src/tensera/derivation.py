"""Rule-annotated proof trees shared by the shallow and deep calculi.

A derivation node records its conclusion, the rule name, the rule
parameters and its premise derivations.  ``rule is None`` marks an open
leaf.  Parameters are plain values: formulas, sequents, node addresses
(tuples of ints) and, for structural rules, a ``{variable: sequent}``
binding map.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from typing import Any, Iterable, Iterator

from .formula import Diamond, Formula, parse, size, to_text
from .sequent import (
    NodeAddress,
    RuleStep,
    Sequent,
    format_address,
    from_json as seq_from_json,
    parse_address,
    to_json as seq_to_json,
)


@dataclass(frozen=True, eq=False)
class Derivation:
    seq: Sequent
    rule: str | None
    params: tuple = ()
    prems: tuple["Derivation", ...] = ()
    witness: tuple[Diamond, ...] | None = None

    @property
    def is_open(self) -> bool:
        return self.rule is None


def open_leaf(s: Sequent) -> Derivation:
    return Derivation(s, None)


def iter_derivation(d: Derivation) -> Iterator[Derivation]:
    """Pre-order traversal, premises left to right."""
    stack = [d]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.prems))


def height(d: Derivation) -> int:
    """Number of rule applications on the longest branch (open leaves count 0)."""
    best = 0
    stack = [(d, 1 if d.rule is not None else 0)]
    while stack:
        node, h = stack.pop()
        best = max(best, h)
        for p in node.prems:
            stack.append((p, h + (1 if p.rule is not None else 0)))
    return best


def cut_rank(d: Derivation) -> int:
    """Largest cut-formula size in ``d``, 0 when cut-free."""
    return max((size(n.params[0]) for n in iter_derivation(d) if n.rule == "cut"), default=0)


def inventory(d: Derivation) -> Counter:
    return Counter(n.rule for n in iter_derivation(d) if n.rule is not None)


def count_steps(d: Derivation) -> int:
    return sum(1 for n in iter_derivation(d) if n.rule is not None)


def open_leaves(d: Derivation) -> list[Sequent]:
    return [n.seq for n in iter_derivation(d) if n.rule is None]


def chain(steps: Iterable[RuleStep], top: Derivation) -> Derivation:
    """Stack single-premise steps on ``top``.

    ``steps`` is listed from the bottom-most conclusion upward, as
    :func:`sequent.display` returns them.
    """
    out = top
    for step in reversed(list(steps)):
        if step.premise != out.seq:
            raise ValueError(f"step {step.rule} expects premise {step.premise}, got {out.seq}")
        out = Derivation(step.conclusion, step.rule, (step.param,), (out,))
    return out


# --- JSON -----------------------------------------------------------------------

_ADDRESS_RE = re.compile(r"^(\.|\d+(\.\d+)*)$")


def _param_to_json(p: Any) -> Any:
    if isinstance(p, Sequent):
        return seq_to_json(p)
    if isinstance(p, tuple) and all(isinstance(i, int) for i in p):
        return format_address(p)
    if isinstance(p, dict):
        return {"bind": {k: seq_to_json(v) for k, v in sorted(p.items())}}
    if isinstance(p, str):
        return {"name": p}
    return to_text(p)


def _param_from_json(obj: Any) -> Any:
    if isinstance(obj, str):
        return parse_address(obj) if _ADDRESS_RE.match(obj) else parse(obj)
    if isinstance(obj, dict):
        if "bind" in obj:
            return {k: seq_from_json(v) for k, v in obj["bind"].items()}
        if "name" in obj:
            return obj["name"]
        return seq_from_json(obj)
    raise ValueError(f"unrecognised parameter {obj!r}")


def to_json(d: Derivation) -> dict:
    out: dict[str, Any] = {
        "seq": seq_to_json(d.seq),
        "rule": d.rule if d.rule is not None else "open",
        "params": [_param_to_json(p) for p in d.params],
        "prems": [to_json(p) for p in d.prems],
    }
    if d.witness is not None:
        out["witness"] = [w.value for w in d.witness]
    return out


def from_json(obj: dict) -> Derivation:
    try:
        rule = obj["rule"]
        witness = obj.get("witness")
        return Derivation(
            seq_from_json(obj["seq"]),
            None if rule == "open" else rule,
            tuple(_param_from_json(p) for p in obj.get("params", [])),
            tuple(from_json(p) for p in obj.get("prems", [])),
            None if witness is None else tuple(Diamond(w) for w in witness),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed proof JSON: {exc}") from None


def dumps(d: Derivation, **kw) -> str:
    return json.dumps(to_json(d), **kw)


def loads(text: str) -> Derivation:
    return from_json(json.loads(text))


def render_text(d: Derivation, indent: str = "") -> str:
    """Indented bottom-up listing, one line per rule application."""
    lines = []
    stack = [(d, 0)]
    while stack:
        node, level = stack.pop()
        label = node.rule or "open"
        params = ", ".join(_short(p) for p in node.params)
        lines.append(f"{indent}{'  ' * level}{node.seq}    [{label}{': ' + params if params else ''}]")
        for p in reversed(node.prems):
            stack.append((p, level + 1))
    return "\n".join(lines)


def _short(p: Any) -> str:
    if isinstance(p, Sequent):
        return "{" + str(p) + "}"
    if isinstance(p, tuple):
        return format_address(p)
    if isinstance(p, dict):
        return ", ".join(f"{k}:={{{v}}}" for k, v in sorted(p.items()))
    if isinstance(p, str):
        return p
    return to_text(p)


def to_dot(d: Derivation, name: str = "proof") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    ids: dict[int, str] = {}
    for i, node in enumerate(iter_derivation(d)):
        ids[id(node)] = f"d{i}"
        lines.append(f"  d{i} [label={json.dumps(str(node.seq) or '∅')}];")
    for node in iter_derivation(d):
        for p in node.prems:
            lines.append(f'  {ids[id(p)]} -> {ids[id(node)]} [label="{node.rule}"];')
    lines.append("}")
    return "\n".join(lines)


def paths_in(d: Derivation) -> list[NodeAddress]:
    return [p for n in iter_derivation(d) for p in n.params if isinstance(p, tuple)]


def formulas_in_params(d: Derivation) -> list[Formula]:
    out = []
    for n in iter_derivation(d):
        for p in n.params:
            if not isinstance(p, (Sequent, tuple, dict, str)):
                out.append(p)
    return out
