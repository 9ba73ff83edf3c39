"""The theory of an infinite set with no structure beyond equality."""

from __future__ import annotations

import itertools

from ..logic import (
    Eq,
    Exists,
    Falsity,
    Formula,
    HConst,
    Language,
    Not,
    Param,
    Var,
    conj,
    free_vars,
    substitute,
)
from ..oracles import SetOracle, enumerate_members
from ..structures import CodedStructure, eval_ground, restrict
from .base import (
    AclResult,
    AdequacyError,
    FiniteTargetError,
    IndependentSequence,
    Literal,
    QEError,
    TheoryPlugin,
    dnf,
    ground_node,
    register_plugin,
)


def _sides(atom: Formula):
    if not isinstance(atom, Eq):
        raise QEError(f"pure equality has no relation {atom!r}")
    return atom.left, atom.right


class PureEqualityTheory(TheoryPlugin):
    plugin_id = "pure-eq"
    strongly_minimal = True

    def __init__(self) -> None:
        super().__init__()
        self.language = Language("pure-eq")

    def make_canonical(self) -> CodedStructure:
        return CodedStructure(
            language=self.language,
            domain=SetOracle("pure-eq-domain", lambda n: n % 2 == 0),
            complement_witness=lambda n: 2 * n + 1,
            theory=self.plugin_id,
            name="pure-eq-canonical",
        )

    def axioms(self):
        # infinitude scheme: at least n distinct elements, n = 2, 3, ...
        n = 2
        while True:
            body = conj(
                Not(Eq(Var(i), Var(j))) for i in range(n) for j in range(i + 1, n)
            )
            phi: Formula = body
            for v in reversed(range(n)):
                phi = Exists(v, phi)
            yield phi
            n += 1

    # -- QE -------------------------------------------------------------------

    def eliminate_conjunct(self, var: int, literals: list[Literal]) -> Formula:
        pin = None
        for pos, atom in literals:
            if not pos:
                continue
            left, right = _sides(atom)
            if left == Var(var) and right != Var(var):
                pin = right
                break
            if right == Var(var) and left != Var(var):
                pin = left
                break
        if pin is not None:
            out = []
            for pos, atom in literals:
                new_atom = substitute(atom, {var: pin})
                out.append(new_atom if pos else Not(new_atom))
            return conj(out)
        out = []
        for pos, atom in literals:
            left, right = _sides(atom)
            mentions = Var(var) in (left, right)
            if not mentions:
                out.append(atom if pos else Not(atom))
            elif left == right:  # x = x
                if not pos:
                    return Falsity()
            # remaining case: x != t, always satisfiable in an infinite set
        return conj(out)

    # -- satisfiability of literal systems -------------------------------------

    def consistent(self, literals) -> bool:
        parent: dict = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            parent[find(a)] = find(b)

        diseqs = []
        for pos, atom in literals:
            left, right = _sides(atom)
            a, b = ground_node(left), ground_node(right)
            if pos:
                union(a, b)
            else:
                diseqs.append((a, b))
        # distinct named elements can never be identified
        classes: dict = {}
        for node in list(parent):
            rep = find(node)
            if node[0] == "p":
                prior = classes.get(rep)
                if prior is not None and prior != node[1]:
                    return False
                classes[rep] = node[1]
        return all(find(a) != find(b) for a, b in diseqs)

    # -- algebra ----------------------------------------------------------------

    def acl_compute(self, structure, base, tuple_elements, budget=0) -> AclResult:
        elements = set(tuple_elements)

        def member(m: int) -> bool:
            return m in elements or base(m)

        def witness(m: int):
            return Eq(Var(0), Param(m)), 1

        name = f"acl({base.name}+{sorted(elements)})"
        return AclResult(SetOracle(name, member, base.jump_tag), witness)

    def hull(self, structure, generators) -> CodedStructure:
        try:
            enumerate_members(generators, 8, stall_bound=100_000)
        except Exception as err:
            raise AdequacyError(f"hull generators too sparse: {err}") from err
        return restrict(structure, generators, name=f"hull({generators.name})")

    def independent_sequence(self, structure, base, psi, budget=0) -> IndependentSequence:
        return _enumerated_sequence(self, structure, base, psi)

    # -- solution sets ------------------------------------------------------------

    def solution_infinite(self, psi: Formula) -> bool:
        return _scan_solutions(self, psi)[0]

    def solution_elements(self, psi: Formula, cap: int = 10_000):
        infinite, elements = _scan_solutions(self, psi)
        return None if infinite else sorted(elements)

    # -- types over the empty set ---------------------------------------------------

    def descriptor_of(self, values: tuple[int, ...]):
        pattern = []
        for i, v in enumerate(values):
            pattern.append(values.index(v))
        return tuple(pattern)

    def zero_type_descriptors(self, n: int):
        # descriptors are first-occurrence patterns: entry i names the first
        # index of i's equality block
        if n == 0:
            return [()]
        out: list[tuple[int, ...]] = []

        def grow(prefix: list[int]):
            if len(prefix) == n:
                out.append(tuple(prefix))
                return
            for first in sorted(set(prefix)):
                grow(prefix + [first])
            grow(prefix + [len(prefix)])

        grow([0])
        return out

    def isolating_formula(self, values: tuple[int, ...]) -> Formula:
        n = len(values)
        parts = []
        for i in range(n):
            for j in range(i + 1, n):
                atom = Eq(Var(i), Var(j))
                parts.append(atom if values[i] == values[j] else Not(atom))
        return conj(parts)

    def representative_tuple(self, descriptor, pool: list[int] | None = None):
        values = []
        fresh = iter(itertools.count(0))
        chosen: dict[int, int] = {}
        for i, first in enumerate(descriptor):
            if first == i:
                chosen[i] = 2 * next(fresh)
            values.append(chosen[first])
        return tuple(values)


# ---------------------------------------------------------------------------
# helpers shared with the order theory (no functions in either language)


def _scan_solutions(plugin: TheoryPlugin, psi: Formula):
    """(infinite?, finite-solution listing) for a one-variable formula."""
    fv = free_vars(psi)
    if len(fv) != 1:
        raise QEError("solution analysis needs exactly one free variable")
    var = next(iter(fv))
    reduced = plugin.qe_reduce(psi)
    canonical = plugin.canonical()
    elements: set[int] = set()
    for conjunct in dnf(reduced):
        pin = None
        for pos, atom in conjunct:
            if not pos or not isinstance(atom, Eq):
                continue
            left, right = atom.left, atom.right
            if left == Var(var) and right != Var(var):
                pin = right
                break
            if right == Var(var) and left != Var(var):
                pin = left
                break
        if pin is None:
            # no equation pins the variable; check the conjunct is not
            # self-contradictory about it
            ok = True
            for pos, atom in conjunct:
                if isinstance(atom, Eq) and atom.left == atom.right == Var(var):
                    if not pos:
                        ok = False
                    continue
                if var in free_vars(atom):
                    continue  # a disequation removes one point only
                if eval_ground(canonical, atom, {}) != pos:
                    ok = False
                    break
            if ok:
                return True, set()
        else:
            if isinstance(pin, Var):
                continue  # cannot happen for a one-variable formula
            value = canonical.eval_term(pin, {})
            candidate = substitute(
                conj((a if p else Not(a)) for p, a in conjunct), {var: Param(value)}
            )
            if eval_ground(canonical, candidate, {}):
                elements.add(value)
    return False, elements


def _enumerated_sequence(plugin, structure, base, psi, scan_bound: int = 500_000):
    if not plugin.solution_infinite(psi):
        raise FiniteTargetError(f"{psi!r} defines a finite set")
    fv = free_vars(psi)
    var = next(iter(fv))
    reduced = plugin.qe_reduce(psi)

    def qualifies(elt: int) -> bool:
        if not structure.domain(elt) or base(elt):
            return False
        return eval_ground(structure, reduced, {var: elt})

    cache: list[int] = []

    def element(n: int) -> int:
        candidate = cache[-1] + 1 if cache else 0
        while len(cache) <= n:
            if candidate > scan_bound:
                raise AdequacyError("sequence scan stalled")
            if qualifies(candidate):
                cache.append(candidate)
            candidate += 1
        return cache[n]

    def index_of(elt: int):
        if not qualifies(elt):
            return None
        index = 0
        while True:
            value = element(index)
            if value == elt:
                return index
            if value > elt:
                return None
            index += 1

    return IndependentSequence(element, index_of, f"solutions of {psi!r} off {base.name}")


PLUGIN = register_plugin(PureEqualityTheory())
