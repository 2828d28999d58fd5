"""The shallow calculus: rules applied at the root of a nested sequent.

Rule parameters identify an instance by content rather than position,
so an instance stays meaningful when surrounding occurrences move:

=========  ==========================================================
rule       params
=========  ==========================================================
id         [a]              atom with ``a`` and ``~a`` at the root
cut        [A]              premises ``Γ, A`` and ``Δ, ~A``
and, or    [A∧B] / [A∨B]
box, bbox  [□A] / [■A]
dia, bdia  [◇A, Δ] / [◆A, Δ]  ``Δ`` is the content of the child used
ctr, wk    [Δ]              top-level sub-sequent contracted/weakened
rf         [Γ]              ``Γ`` is the •-child of the conclusion
rp         [Γ]              ``Γ`` is the ∘-child of the conclusion
struct:ID  [bindings]       one sequent per structure variable
ax:ID      [A]              premise-free instance of an axiom scheme
=========  ==========================================================
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .derivation import Derivation, iter_derivation
from .formula import (
    And,
    Atom,
    BlackBox,
    BlackDia,
    Box,
    Diamond,
    Dia,
    Formula,
    NegAtom,
    Or,
    make_diamond,
    nnf_negate,
    to_text,
)
from .path_engine import PathAxiom, parse_axiom
from .sequent import (
    BULLET,
    CIRCLE,
    FormulaAddress,
    Polarity,
    Sequent,
    merge,
    subtract,
)

GAMMA = "Γ"
DELTA = "Δ"

SHALLOW_RULES = frozenset({"id", "cut", "and", "or", "ctr", "wk", "rf", "rp", "bbox", "box", "bdia", "dia"})


class CheckError(ValueError):
    """A derivation step that does not match its claimed rule.

    ``where`` lists premise indices from the root of the derivation down
    to the offending node.
    """

    def __init__(self, message: str, where: tuple[int, ...] = ()):
        loc = "root" if not where else "node " + ".".join(map(str, where))
        super().__init__(f"{loc}: {message}")
        self.message = message
        self.where = where


class RuleError(ValueError):
    pass


# --- structural rules -------------------------------------------------------------


@dataclass(frozen=True)
class Pattern:
    """A sequent skeleton whose leaves are structure variables.

    ``formulas`` exists only so that ill-formed rules can be represented
    and rejected by :func:`validate_structural_rule`.
    """

    vars: tuple[str, ...] = ()
    children: tuple[tuple[Polarity, "Pattern"], ...] = ()
    formulas: tuple[Formula, ...] = ()

    def __str__(self) -> str:
        parts = list(self.vars) + [to_text(f) for f in self.formulas]
        parts += [f"{p.symbol}{{{c}}}" for p, c in self.children]
        return ", ".join(parts) if parts else "∅"


@dataclass(frozen=True)
class StructuralRule:
    name: str
    premise: Pattern
    conclusion: Pattern

    def __str__(self) -> str:
        return f"{self.name}: {self.conclusion} <= {self.premise}"


def nest(pols: Iterable[Polarity], inner: Pattern) -> Pattern:
    """Wrap ``inner`` in the given connectives, outermost first."""
    out = inner
    for pol in reversed(list(pols)):
        out = Pattern(children=((pol, out),))
    return out


def _with_gamma(p: Pattern) -> Pattern:
    return Pattern((GAMMA,) + p.vars, p.children, p.formulas)


def make_sl_rule(h: int, i: int, j: int, k: int) -> StructuralRule:
    """sl(h,i,j,k): from ``Γ, ∘ⁱ{•ᵏ{Δ}}`` infer ``Γ, •ʰ{∘ʲ{Δ}}``."""
    delta = Pattern((DELTA,))
    premise = _with_gamma(nest([CIRCLE] * i + [BULLET] * k, delta))
    conclusion = _with_gamma(nest([BULLET] * h + [CIRCLE] * j, delta))
    return StructuralRule(f"sl({h},{i},{j},{k})", premise, conclusion)


def _dual(d: Diamond) -> Polarity:
    return CIRCLE if d is Diamond.WHITE else BULLET


def make_path_rule(ax: PathAxiom) -> StructuralRule:
    """From ``Γ, ⋆{Δ}`` infer ``Γ, ⋆₁{…⋆ₙ{Δ}}`` with ⋆ dual to each diamond."""
    delta = Pattern((DELTA,))
    premise = _with_gamma(nest([_dual(ax.target)], delta))
    conclusion = _with_gamma(nest([_dual(d) for d in ax.sources], delta))
    return StructuralRule(f"path({ax})", premise, conclusion)


def _renamed(r: StructuralRule, name: str) -> StructuralRule:
    return StructuralRule(name, r.premise, r.conclusion)


RULE_T = _renamed(make_path_rule(PathAxiom((), Diamond.WHITE)), "T_f")
RULE_4 = _renamed(make_sl_rule(0, 1, 2, 0), "4_f")
RULE_B = _renamed(make_path_rule(PathAxiom((Diamond.WHITE,), Diamond.BLACK)), "B")
RULE_U = _renamed(make_sl_rule(1, 0, 1, 0), "U")
NAMED_RULES = {r.name: r for r in (RULE_T, RULE_4, RULE_B, RULE_U)}


@dataclass(frozen=True)
class AxiomRule:
    """Premise-free rule ``~F(A), G(A)`` for an axiom scheme ``F(A) → G(A)``.

    ``lhs`` and ``rhs`` list the modal connectives wrapped around ``A``,
    outermost first, by shallow rule name (box, dia, bbox, bdia).
    """

    name: str
    lhs: tuple[str, ...]
    rhs: tuple[str, ...]

    def instance(self, a: Formula) -> Sequent:
        return Sequent((nnf_negate(_wrap(self.lhs, a)), _wrap(self.rhs, a)))

    def __str__(self) -> str:
        return f"{self.name}: {self.instance(Atom('A'))}"


_WRAP = {"box": Box, "dia": Dia, "bbox": BlackBox, "bdia": BlackDia}


def _wrap(ops: tuple[str, ...], a: Formula) -> Formula:
    for op in reversed(ops):
        a = _WRAP[op](a)
    return a


def scott_lemmon_axiom(h: int, i: int, j: int, k: int) -> AxiomRule:
    """G(h,i,j,k): ◇ʰ□ⁱA → □ʲ◇ᵏA."""
    return AxiomRule(f"G({h},{i},{j},{k})", ("dia",) * h + ("box",) * i, ("box",) * j + ("dia",) * k)


def primitive_axiom(h: int, i: int, j: int, k: int) -> AxiomRule:
    """P(h,i,j,k): ◆ʰ◇ʲA → ◇ⁱ◆ᵏA."""
    return AxiomRule(f"P({h},{i},{j},{k})", ("bdia",) * h + ("dia",) * j, ("dia",) * i + ("bdia",) * k)


_AX_RE = re.compile(r"^([GP])\((\d+),(\d+),(\d+),(\d+)\)$")
_SL_RE = re.compile(r"^sl\((\d+),(\d+),(\d+),(\d+)\)$")
_PATH_RE = re.compile(r"^path\((.*)\)$")


def resolve_structural_rule(name: str) -> StructuralRule:
    """Rule from its printed name: T_f, 4_f, B, U, sl(h,i,j,k) or path(axiom)."""
    name = name.replace(" ", "")
    if name in NAMED_RULES:
        return NAMED_RULES[name]
    m = _SL_RE.match(name)
    if m:
        return make_sl_rule(*map(int, m.groups()))
    m = _PATH_RE.match(name)
    if m:
        return make_path_rule(parse_axiom(m.group(1)))
    raise ValueError(f"unknown structural rule {name!r}")


def resolve_axiom_rule(name: str) -> AxiomRule:
    """Axiom rule from its printed name: G(h,i,j,k) or P(h,i,j,k)."""
    m = _AX_RE.match(name.replace(" ", ""))
    if not m:
        raise ValueError(f"unknown axiom rule {name!r}")
    make = scott_lemmon_axiom if m.group(1) == "G" else primitive_axiom
    return make(*map(int, m.groups()[1:]))


def rules_in(d: Derivation) -> dict[str, StructuralRule | AxiomRule]:
    """The structural and axiom rules a proof names, resolved by name."""
    out = {}
    for n in iter_derivation(d):
        if n.rule and n.rule.startswith("struct:"):
            name = n.rule[len("struct:"):]
            out[name] = resolve_structural_rule(name)
        elif n.rule and n.rule.startswith("ax:"):
            name = n.rule[len("ax:"):]
            out[name] = resolve_axiom_rule(name)
    return out


class InvalidRule(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


def _pattern_vars(p: Pattern) -> list[str]:
    out = list(p.vars)
    for _, c in p.children:
        out.extend(_pattern_vars(c))
    return out


def _pattern_formulas(p: Pattern) -> list[Formula]:
    out = list(p.formulas)
    for _, c in p.children:
        out.extend(_pattern_formulas(c))
    return out


def structural_rule_problems(r: StructuralRule) -> list[str]:
    if isinstance(r, AxiomRule):
        return [f"axiom rule {r.name} is not a linear structural rule"]
    problems = []
    prem = _pattern_vars(r.premise)
    conc = _pattern_vars(r.conclusion)
    for side, names in (("premise", prem), ("conclusion", conc)):
        for v in sorted(set(names)):
            if names.count(v) > 1:
                problems.append(f"variable {v} occurs twice in the {side}")
    for v in sorted(set(prem) - set(conc)):
        problems.append(f"variable lost: {v} is missing from the conclusion")
    for v in sorted(set(conc) - set(prem)):
        problems.append(f"variable lost: {v} is missing from the premise")
    for side, pat in (("premise", r.premise), ("conclusion", r.conclusion)):
        for f in _pattern_formulas(pat):
            problems.append(f"formula {to_text(f)} in the {side} breaks substitution closure")
    return problems


def validate_structural_rule(r: StructuralRule) -> None:
    """Raise :class:`InvalidRule` unless ``r`` is linear and formula-free."""
    problems = structural_rule_problems(r)
    if problems:
        raise InvalidRule(problems)


def instantiate(p: Pattern, bindings: Mapping[str, Sequent]) -> Sequent:
    out = Sequent(tuple(p.formulas))
    for v in p.vars:
        if v not in bindings:
            raise RuleError(f"no binding for structure variable {v}")
        out = merge(out, bindings[v])
    for pol, c in p.children:
        out = out.add_child(pol, instantiate(c, bindings))
    return out


def _var_sites(p: Pattern, bindings: Mapping[str, Sequent], addr=()) -> dict[str, tuple[tuple[int, ...], int, int]]:
    """Where each variable's content lands: (node address, formula offset, child offset)."""
    sites = {}
    fo = len(p.formulas)
    co = 0
    for v in p.vars:
        sites[v] = (addr, fo, co)
        fo += len(bindings[v].formulas)
        co += len(bindings[v].children)
    for n, (_, c) in enumerate(p.children):
        sites.update(_var_sites(c, bindings, addr + (co + n,)))
    return sites


def occurrence_map(r: StructuralRule, bindings: Mapping[str, Sequent]) -> dict[FormulaAddress, FormulaAddress]:
    """Bijection from premise formula occurrences to conclusion occurrences."""
    from .sequent import iter_nodes

    prem_sites = _var_sites(r.premise, bindings)
    conc_sites = _var_sites(r.conclusion, bindings)
    out = {}
    for v, value in bindings.items():
        if v not in prem_sites or v not in conc_sites:
            continue
        (pa, pf, pc), (ca, cf, cc) = prem_sites[v], conc_sites[v]
        for addr, node in iter_nodes(value):
            for i in range(len(node.formulas)):
                if addr:
                    src = FormulaAddress(pa + (pc + addr[0],) + addr[1:], i)
                    dst = FormulaAddress(ca + (cc + addr[0],) + addr[1:], i)
                else:
                    src = FormulaAddress(pa, pf + i)
                    dst = FormulaAddress(ca, cf + i)
                out[src] = dst
    return out


# --- rule semantics -------------------------------------------------------------


def _take(s: Sequent, f, what: str) -> Sequent:
    i = s.index_of(f)
    if i is None:
        raise RuleError(f"principal formula {what} not found")
    return s.without_index(i)


def _take_child(s: Sequent, pol: Polarity, child: Sequent) -> Sequent:
    i = s.child_index(pol, child)
    if i is None:
        raise RuleError(f"no {pol.symbol}-child {{{child}}} in the conclusion")
    return s.without_child(i)


def _need(param, kind, rule: str):
    if not isinstance(param, kind):
        raise RuleError(f"rule {rule} expects a {getattr(kind, '__name__', kind)} parameter")
    return param


def shallow_premises(rule: str, params: tuple, conclusion: Sequent,
                     system: Mapping[str, StructuralRule] | None = None) -> list[Sequent]:
    """Premises of the instance of ``rule`` with ``conclusion`` (cut excluded)."""
    c = conclusion
    try:
        if rule == "id":
            (a,) = params
            if isinstance(a, NegAtom):
                a = Atom(a.name)
            if not isinstance(a, Atom) or a not in c.formulas or NegAtom(a.name) not in c.formulas:
                raise RuleError("no atomic clash")
            return []
        if rule in ("and", "or", "box", "bbox"):
            (f,) = params
            kind = {"and": And, "or": Or, "box": Box, "bbox": BlackBox}[rule]
            if not isinstance(f, kind):
                raise RuleError(f"principal formula {to_text(f)} has the wrong shape for {rule}")
            rest = _take(c, f, to_text(f))
            if rule == "and":
                return [rest.add(f.left), rest.add(f.right)]
            if rule == "or":
                return [rest.add(f.left, f.right)]
            pol = CIRCLE if rule == "box" else BULLET
            return [rest.add_child(pol, Sequent((f.body,)))]
        if rule in ("dia", "bdia"):
            f, delta = params
            kind, pol = (Dia, CIRCLE) if rule == "dia" else (BlackDia, BULLET)
            if not isinstance(f, kind):
                raise RuleError(f"principal formula {to_text(f)} has the wrong shape for {rule}")
            _need(delta, Sequent, rule)
            rest = _take(c, f, to_text(f))
            rest = _take_child(rest, pol, delta)
            return [rest.add_child(pol, delta.add(f.body))]
        if rule == "ctr":
            (delta,) = params
            _need(delta, Sequent, rule)
            if subtract(c, delta) is None:
                raise RuleError(f"contracted part {{{delta}}} not in the conclusion")
            return [merge(c, delta)]
        if rule == "wk":
            (delta,) = params
            _need(delta, Sequent, rule)
            rest = subtract(c, delta)
            if rest is None:
                raise RuleError(f"weakened part {{{delta}}} not in the conclusion")
            return [rest]
        if rule in ("rf", "rp"):
            (gamma,) = params
            _need(gamma, Sequent, rule)
            inner, outer = (BULLET, CIRCLE) if rule == "rf" else (CIRCLE, BULLET)
            rest = _take_child(c, inner, gamma)
            return [gamma.add_child(outer, rest)]
        if rule.startswith("struct:"):
            name = rule[len("struct:"):]
            if system is None or name not in system:
                raise RuleError(f"rule not in system: {rule}")
            (bindings,) = params
            _need(bindings, dict, rule)
            r = system[name]
            if not isinstance(r, StructuralRule):
                raise RuleError(f"{name} is not a structural rule")
            if instantiate(r.conclusion, bindings) != c:
                raise RuleError(f"conclusion does not match the pattern of {name}")
            return [instantiate(r.premise, bindings)]
        if rule.startswith("ax:"):
            name = rule[len("ax:"):]
            r = (system or {}).get(name)
            if not isinstance(r, AxiomRule):
                raise RuleError(f"rule not in system: {rule}")
            (a,) = params
            if r.instance(a) != c:
                raise RuleError(f"conclusion is not the instance of {name} at {to_text(a)}")
            return []
    except ValueError as exc:
        if isinstance(exc, RuleError):
            raise
        raise RuleError(f"arity mismatch for {rule}: {exc}") from None
    raise RuleError(f"unknown shallow rule {rule!r}")


def cut_conclusion(cut_formula: Formula, left: Sequent, right: Sequent) -> Sequent:
    gamma = subtract(left, Sequent((cut_formula,)))
    delta = subtract(right, Sequent((nnf_negate(cut_formula),)))
    if gamma is None:
        raise RuleError(f"cut formula {to_text(cut_formula)} missing from the left premise")
    if delta is None:
        raise RuleError("negated cut formula missing from the right premise")
    return merge(gamma, delta)


def as_system(rules: Iterable[StructuralRule | AxiomRule] | Mapping[str, StructuralRule | AxiomRule] | None
              ) -> dict[str, StructuralRule | AxiomRule]:
    if rules is None:
        return {}
    if isinstance(rules, Mapping):
        return dict(rules)
    return {r.name: r for r in rules}


def check_step(d: Derivation, system: Mapping[str, StructuralRule], allow_cut: bool) -> None:
    """Check one inference; raises :class:`RuleError`."""
    if d.rule == "cut":
        if not allow_cut:
            raise RuleError("cut disallowed")
        if len(d.params) != 1 or len(d.prems) != 2:
            raise RuleError("arity mismatch for cut")
        if cut_conclusion(d.params[0], d.prems[0].seq, d.prems[1].seq) != d.seq:
            raise RuleError("cut conclusion is not the union of the premise contexts")
        return
    expected = shallow_premises(d.rule, d.params, d.seq, system)
    if len(expected) != len(d.prems):
        raise RuleError(f"arity mismatch: {d.rule} has {len(expected)} premises, got {len(d.prems)}")
    for n, (want, got) in enumerate(zip(expected, d.prems)):
        if want != got.seq:
            raise RuleError(f"premise {n} should be {{{want}}} but is {{{got.seq}}}")


def check_shallow(d: Derivation, system=None, allow_cut: bool = False, allow_open: bool = False) -> None:
    """Verify every inference of ``d``; raise :class:`CheckError` on the first bad one."""
    rules = as_system(system)
    stack = [(d, ())]
    while stack:
        node, where = stack.pop()
        if node.rule is None:
            if not allow_open:
                raise CheckError("open leaf in a closed derivation", where)
            continue
        try:
            check_step(node, rules, allow_cut)
        except RuleError as exc:
            raise CheckError(str(exc), where) from None
        for n, p in enumerate(node.prems):
            stack.append((p, where + (n,)))


def is_valid_shallow(d: Derivation, system=None, allow_cut: bool = False) -> bool:
    try:
        check_shallow(d, system, allow_cut)
    except CheckError:
        return False
    return True


# --- construction helpers ---------------------------------------------------------


def infer(conclusion: Sequent, rule: str, params: tuple, *prems: Derivation, system=None) -> Derivation:
    """Build one checked inference bottom-up from its premise derivations."""
    d = Derivation(conclusion, rule, tuple(params), tuple(prems))
    try:
        check_step(d, as_system(system), allow_cut=True)
    except RuleError as exc:
        raise RuleError(f"{rule} at {{{conclusion}}}: {exc}") from None
    return d


def premises_for(conclusion: Sequent, rule: str, *params, system=None) -> list[Sequent]:
    return shallow_premises(rule, tuple(params), conclusion, as_system(system))


def cut(cut_formula: Formula, left: Derivation, right: Derivation) -> Derivation:
    return Derivation(cut_conclusion(cut_formula, left.seq, right.seq), "cut", (cut_formula,), (left, right))


def rf_down(d: Derivation, child_index: int) -> Derivation:
    """Apply rf top-down: ``Γ, ∘{Δ}`` (child ``child_index``) gives ``•{Γ}, Δ``."""
    pol, delta = d.seq.children[child_index]
    if pol is not CIRCLE:
        raise RuleError("rf needs a ∘-child in its premise")
    gamma = d.seq.without_child(child_index)
    return Derivation(delta.add_child(BULLET, gamma), "rf", (gamma,), (d,))


def rp_down(d: Derivation, child_index: int) -> Derivation:
    """Apply rp top-down: ``Γ, •{Δ}`` gives ``∘{Γ}, Δ``."""
    pol, delta = d.seq.children[child_index]
    if pol is not BULLET:
        raise RuleError("rp needs a •-child in its premise")
    gamma = d.seq.without_child(child_index)
    return Derivation(delta.add_child(CIRCLE, gamma), "rp", (gamma,), (d,))


def residuate_down(d: Derivation, child_index: int) -> Derivation:
    pol = d.seq.children[child_index][0]
    return rf_down(d, child_index) if pol is CIRCLE else rp_down(d, child_index)


def wk_down(d: Derivation, delta: Sequent) -> Derivation:
    if delta.is_empty:
        return d
    return Derivation(merge(d.seq, delta), "wk", (delta,), (d,))


def ctr_down(d: Derivation, delta: Sequent) -> Derivation:
    """Contract one copy of ``delta`` away; the premise must contain it twice."""
    if delta.is_empty:
        return d
    rest = subtract(d.seq, delta)
    if rest is None or subtract(rest, delta) is None:
        raise RuleError(f"ctr needs two copies of {{{delta}}}")
    return Derivation(rest, "ctr", (delta,), (d,))


def diamond_rule(colour: Diamond) -> str:
    return "dia" if colour is Diamond.WHITE else "bdia"


def dia_down(d: Derivation, child_index: int, body: Formula, colour: Diamond) -> Derivation:
    """Top-down dia/bdia: remove ``body`` from the child, add the diamond at the root."""
    pol, child = d.seq.children[child_index]
    if pol is not _dual(colour):
        raise RuleError("diamond colour does not match the child polarity")
    delta = child.remove(body)
    principal = make_diamond(colour, body)
    conclusion = d.seq.replace_child(child_index, delta).add(principal)
    return Derivation(conclusion, diamond_rule(colour), (principal, delta), (d,))


def box_down(d: Derivation, child_index: int) -> Derivation:
    """Top-down box/bbox: a child holding exactly one formula becomes □A/■A."""
    pol, child = d.seq.children[child_index]
    if child.children or len(child.formulas) != 1:
        raise RuleError("box needs a child containing exactly one formula")
    body = child.formulas[0]
    principal = Box(body) if pol is CIRCLE else BlackBox(body)
    return Derivation(d.seq.without_child(child_index).add(principal),
                      "box" if pol is CIRCLE else "bbox", (principal,), (d,))


def struct_down(d: Derivation, rule: StructuralRule, bindings: Mapping[str, Sequent]) -> Derivation:
    if instantiate(rule.premise, bindings) != d.seq:
        raise RuleError(f"premise does not match the pattern of {rule.name}")
    return Derivation(instantiate(rule.conclusion, bindings), f"struct:{rule.name}", (dict(bindings),), (d,))


def id_leaf(s: Sequent, atom: str) -> Derivation:
    return infer(s, "id", (Atom(atom),))


def axiom_leaf(rule: AxiomRule, a: Formula) -> Derivation:
    return Derivation(rule.instance(a), f"ax:{rule.name}", (a,), ())


def structural_rules_used(d: Derivation) -> set[str]:
    return {n.rule[len("struct:"):] for n in iter_derivation(d) if n.rule and n.rule.startswith("struct:")}


# --- primitive Scott-Lemmon schemes ---------------------------------------------


@dataclass(frozen=True)
class PrimitiveScheme:
    """◆ʰ◇ʲX → ◇ⁱ◆ᵏX."""

    h: int
    i: int
    j: int
    k: int
    sources: tuple[Diamond, ...] = field(init=False)
    targets: tuple[Diamond, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sources", (Diamond.BLACK,) * self.h + (Diamond.WHITE,) * self.j)
        object.__setattr__(self, "targets", (Diamond.WHITE,) * self.i + (Diamond.BLACK,) * self.k)

    @property
    def is_path_axiom(self) -> bool:
        return self.i + self.k == 1

    def as_path_axiom(self) -> PathAxiom:
        if not self.is_path_axiom:
            raise ValueError(f"{self} is not a path axiom")
        return PathAxiom(self.sources, self.targets[0])

    def formula(self, x: Formula = Atom("p")) -> Formula:
        lhs = x
        for d in reversed(self.sources):
            lhs = make_diamond(d, lhs)
        rhs = x
        for d in reversed(self.targets):
            rhs = make_diamond(d, rhs)
        return Or(nnf_negate(lhs), rhs)

    def __str__(self) -> str:
        def word(ds):
            return "".join(d.symbol for d in ds)

        return f"{word(self.sources)}X→{word(self.targets)}X"


def primitive_of_scott_lemmon(h: int, i: int, j: int, k: int) -> PrimitiveScheme:
    return PrimitiveScheme(h, i, j, k)



