"""Dense linear orders without endpoints, presented on a fixed computable
enumeration of the rationals.

Domain element 2n carries the rational rho(n); odd numbers stay outside
every domain.  Quantifier elimination is the classical interval argument:
an existential over a conjunction of order facts holds iff every lower
bound sits below every upper bound.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from ..coding import tuple_decode
from ..logic import (
    And,
    Atom,
    Eq,
    Exists,
    Falsity,
    ForAll,
    Formula,
    Implies,
    Language,
    Not,
    Or,
    Param,
    Var,
    conj,
    disj,
    free_vars,
    parse_formula,
    substitute,
)
from ..oracles import SetOracle
from ..rationals import is_dyadic, rho, rho_inv
from ..structures import CodedStructure, eval_ground, restrict
from .base import (
    AclResult,
    AdequacyError,
    IndependentSequence,
    Literal,
    QEError,
    TheoryPlugin,
    dnf,
    ground_node,
    register_plugin,
)
from .pure_eq import _enumerated_sequence

LT = "<"


def element_of(value: Fraction | int) -> int:
    """Domain element carrying the given rational."""
    return 2 * rho_inv(Fraction(value))


def rational_of(element: int) -> Fraction:
    if element % 2:
        raise ValueError(f"{element} is not a domain element")
    return rho(element // 2)


class DenseOrderTheory(TheoryPlugin):
    plugin_id = "dlo"
    strongly_minimal = False  # definable cuts split the order

    def __init__(self) -> None:
        super().__init__()
        self.language = Language("dlo", relations=[(LT, 2)])

    def make_canonical(self) -> CodedStructure:
        def less(code: int) -> bool:
            try:
                a, b = tuple_decode(code)
            except Exception:
                return False
            if a % 2 or b % 2:
                return False
            return rho(a // 2) < rho(b // 2)

        return CodedStructure(
            language=self.language,
            domain=SetOracle("dlo-domain", lambda n: n % 2 == 0),
            complement_witness=lambda n: 2 * n + 1,
            relations={LT: SetOracle("dlo-order", less)},
            theory=self.plugin_id,
            name="dlo-canonical",
        )

    def axioms(self):
        text = [
            "forall x. ~(x < x)",
            "forall x. forall y. forall z. (x < y & y < z -> x < z)",
            "forall x. forall y. (x < y | y < x | x = y)",
            "forall x. forall y. (x < y -> exists z. (x < z & z < y))",
            "forall x. exists y. x < y",
            "forall x. exists y. y < x",
        ]
        for t in text:
            yield parse_formula(t, self.language)

    # -- QE ---------------------------------------------------------------------

    def eliminate_conjunct(self, var: int, literals: list[Literal]) -> Formula:
        # expand negated order facts into their positive alternatives first
        alternative_lists = []
        for pos, atom in literals:
            if pos:
                alternative_lists.append([atom])
            elif isinstance(atom, Eq):
                a, b = atom.left, atom.right
                alternative_lists.append([Atom(LT, (a, b)), Atom(LT, (b, a))])
            elif isinstance(atom, Atom) and atom.rel == LT:
                a, b = atom.args
                alternative_lists.append([Atom(LT, (b, a)), Eq(a, b)])
            else:
                raise QEError(f"unknown atom {atom!r}")
        parts = []
        for choice in itertools.product(*alternative_lists):
            parts.append(self._eliminate_positive(var, list(choice)))
        return disj(parts)

    def _eliminate_positive(self, var: int, atoms: list[Formula]) -> Formula:
        x = Var(var)
        pin = None
        for atom in atoms:
            if isinstance(atom, Eq):
                if atom.left == x and atom.right != x:
                    pin = atom.right
                    break
                if atom.right == x and atom.left != x:
                    pin = atom.left
                    break
        if pin is not None:
            return conj(substitute(a, {var: pin}) for a in atoms)
        lowers, uppers, rest = [], [], []
        for atom in atoms:
            if isinstance(atom, Eq):
                if atom.left == x and atom.right == x:
                    continue
                rest.append(atom)
            else:
                a, b = atom.args
                if a == x and b == x:
                    return Falsity()  # x < x
                if b == x and a != x:
                    lowers.append(a)
                elif a == x and b != x:
                    uppers.append(b)
                else:
                    rest.append(atom)
        # density and unboundedness: a witness exists iff the interval is
        # nonempty, and an empty side never blocks
        rest.extend(Atom(LT, (lo, up)) for lo in lowers for up in uppers)
        return conj(rest)

    # -- satisfiability -----------------------------------------------------------

    def consistent(self, literals) -> bool:
        parent: dict = {}

        def find(node):
            parent.setdefault(node, node)
            while parent[node] != node:
                parent[node] = parent[parent[node]]
                node = parent[node]
            return node

        def union(a, b):
            parent[find(a)] = find(b)

        strict: list[tuple] = []
        weak: list[tuple] = []
        diseqs: list[tuple] = []
        nodes: set = set()
        for pos, atom in literals:
            if isinstance(atom, Eq):
                a, b = ground_node(atom.left), ground_node(atom.right)
            elif isinstance(atom, Atom) and atom.rel == LT:
                a, b = ground_node(atom.args[0]), ground_node(atom.args[1])
            else:
                raise QEError(f"unknown atom {atom!r}")
            nodes.update((a, b))
            if isinstance(atom, Eq):
                if pos:
                    union(a, b)
                else:
                    diseqs.append((a, b))
            elif pos:
                strict.append((a, b))
            else:
                weak.append((b, a))  # not(a < b) means b <= a
        # named elements are already totally ordered
        params = sorted(n[1] for n in nodes if n[0] == "p")
        for p, q in itertools.combinations(params, 2):
            if rho(p // 2) < rho(q // 2):
                strict.append((("p", p), ("p", q)))
            elif rho(q // 2) < rho(p // 2):
                strict.append((("p", q), ("p", p)))
        edges: dict = {}
        strict_set = set()
        for a, b in strict:
            ra, rb = find(a), find(b)
            edges.setdefault(ra, set()).add(rb)
            strict_set.add((ra, rb))
            nodes.update((a, b))
        for a, b in weak:
            ra, rb = find(a), find(b)
            edges.setdefault(ra, set()).add(rb)
        reps = {find(n) for n in nodes}
        component = _scc(reps, edges)
        for ra, rb in strict_set:
            if component[ra] == component[rb]:
                return False
        for a, b in diseqs:
            ra, rb = find(a), find(b)
            if ra == rb or component[ra] == component[rb]:
                return False
        return True

    # -- algebra ---------------------------------------------------------------------

    def acl_compute(self, structure, base, tuple_elements, budget=0) -> AclResult:
        elements = set(tuple_elements)

        def member(m: int) -> bool:
            return m in elements or base(m)

        def witness(m: int):
            return Eq(Var(0), Param(m)), 1

        name = f"acl({base.name}+{sorted(elements)})"
        return AclResult(SetOracle(name, member, base.jump_tag), witness)

    def hull(self, structure, generators) -> CodedStructure:
        self._check_density(structure, generators)
        return restrict(structure, generators, name=f"hull({generators.name})")

    def _check_density(
        self, structure, generators, sample: int = 10, scan_bound: int = 60_000
    ) -> None:
        members: list[int] = []
        n = 0
        while len(members) < sample and n < scan_bound:
            if generators(n) and structure.domain(n):
                members.append(n)
            n += 1
        if len(members) < sample:
            raise AdequacyError("hull generators too sparse for a dense order")
        members.sort(key=rational_of)

        def found_between(lo: Fraction | None, hi: Fraction | None) -> bool:
            for candidate in range(0, scan_bound, 2):
                if not generators(candidate):
                    continue
                value = rho(candidate // 2)
                if (lo is None or lo < value) and (hi is None or value < hi):
                    return True
            return False

        for a, b in zip(members, members[1:]):
            if not found_between(rational_of(a), rational_of(b)):
                raise AdequacyError(
                    f"no generator strictly between {rational_of(a)} and {rational_of(b)}"
                )
        if not found_between(None, rational_of(members[0])):
            raise AdequacyError("no generator below the sampled minimum")
        if not found_between(rational_of(members[-1]), None):
            raise AdequacyError("no generator above the sampled maximum")

    def independent_sequence(self, structure, base, psi, budget=0) -> IndependentSequence:
        return _enumerated_sequence(self, structure, base, psi)

    # -- solution sets -----------------------------------------------------------------

    def solution_infinite(self, psi: Formula) -> bool:
        return self._solutions(psi)[0]

    def solution_elements(self, psi: Formula, cap: int = 10_000):
        infinite, elements = self._solutions(psi)
        return None if infinite else sorted(elements)

    def _solutions(self, psi: Formula):
        fv = free_vars(psi)
        if len(fv) != 1:
            raise QEError("solution analysis needs exactly one free variable")
        var = next(iter(fv))
        reduced = self.qe_reduce(psi)
        canonical = self.canonical()
        points: set[int] = set()
        for conjunct in dnf(reduced):
            for choice in itertools.product(
                *[self._positive_choices(lit) for lit in conjunct]
            ):
                atoms = list(choice)
                pin = None
                for atom in atoms:
                    if isinstance(atom, Eq) and Var(var) in (atom.left, atom.right):
                        other = atom.right if atom.left == Var(var) else atom.left
                        if other != Var(var):
                            pin = other
                            break
                if pin is not None:
                    value = canonical.eval_term(pin, {})
                    ok = all(
                        eval_ground(canonical, substitute(a, {var: Param(value)}), {})
                        for a in atoms
                    )
                    if ok:
                        points.add(value)
                    continue
                lowers, uppers = [], []
                ok = True
                for atom in atoms:
                    mentions = var in free_vars(atom)
                    if not mentions:
                        if not eval_ground(canonical, atom, {}):
                            ok = False
                            break
                        continue
                    if isinstance(atom, Eq):
                        continue  # x = x
                    a, b = atom.args
                    if a == Var(var) and b == Var(var):
                        ok = False
                        break
                    if b == Var(var):
                        lowers.append(rational_of(canonical.eval_term(a, {})))
                    else:
                        uppers.append(rational_of(canonical.eval_term(b, {})))
                if not ok:
                    continue
                if not lowers or not uppers or max(lowers) < min(uppers):
                    return True, set()
        return False, points

    def _positive_choices(self, literal: Literal):
        pos, atom = literal
        if pos:
            return [atom]
        if isinstance(atom, Eq):
            return [Atom(LT, (atom.left, atom.right)), Atom(LT, (atom.right, atom.left))]
        a, b = atom.args
        return [Atom(LT, (b, a)), Eq(a, b)]

    # -- types over the empty set ---------------------------------------------------------

    def descriptor_of(self, values: tuple[int, ...]):
        rationals = [rational_of(v) for v in values]
        out = []
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                if rationals[i] < rationals[j]:
                    out.append("<")
                elif rationals[i] == rationals[j]:
                    out.append("=")
                else:
                    out.append(">")
        return tuple(out)

    def zero_type_descriptors(self, n: int):
        seen = []
        for ranks in itertools.product(range(n or 1), repeat=n):
            pattern = []
            for i in range(n):
                for j in range(i + 1, n):
                    if ranks[i] < ranks[j]:
                        pattern.append("<")
                    elif ranks[i] == ranks[j]:
                        pattern.append("=")
                    else:
                        pattern.append(">")
            pattern = tuple(pattern)
            if pattern not in seen:
                seen.append(pattern)
        return seen

    def isolating_formula(self, values: tuple[int, ...]) -> Formula:
        descriptor = self.descriptor_of(values)
        parts = []
        k = 0
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                rel = descriptor[k]
                k += 1
                if rel == "<":
                    parts.append(Atom(LT, (Var(i), Var(j))))
                elif rel == ">":
                    parts.append(Atom(LT, (Var(j), Var(i))))
                else:
                    parts.append(Eq(Var(i), Var(j)))
        return conj(parts)

    def representative_tuple(self, descriptor, n: int | None = None):
        if n is None:
            # descriptor length is C(n, 2)
            n = 1
            while n * (n - 1) // 2 < len(descriptor):
                n += 1
        for ranks in itertools.product(range(n or 1), repeat=n):
            values = tuple(element_of(r) for r in ranks)
            if self.descriptor_of(values) == tuple(descriptor):
                return values
        raise QEError("descriptor is not realizable")


def _scc(nodes, edges):
    """Iterative Tarjan strongly-connected components."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    component: dict = {}
    counter = itertools.count()
    comp_counter = itertools.count()

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(sorted(edges.get(root, ()), key=repr)))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = low[succ] = next(counter)
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(sorted(edges.get(succ, ()), key=repr))))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = next(comp_counter)
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    component[top] = comp
                    if top == node:
                        break
            if work:
                parent_node = work[-1][0]
                low[parent_node] = min(low[parent_node], low[node])
    return component


# fixed demo regions: the base order lives on (-inf,0) | (1,2) | (3,inf)

M0_REGIONS = ((None, Fraction(0)), (Fraction(1), Fraction(2)), (Fraction(3), None))


def in_regions(value: Fraction, regions=M0_REGIONS) -> bool:
    for lo, hi in regions:
        if (lo is None or lo < value) and (hi is None or value < hi):
            return True
    return False


def region_oracle(name: str, regions=M0_REGIONS) -> SetOracle:
    def member(n: int) -> bool:
        return n % 2 == 0 and in_regions(rho(n // 2), regions)

    return SetOracle(name, member)


def dyadics_in(lo: Fraction, hi: Fraction, name: str) -> SetOracle:
    def member(n: int) -> bool:
        if n % 2:
            return False
        value = rho(n // 2)
        return lo < value < hi and is_dyadic(value)

    return SetOracle(name, member)


def nondyadic_injection(lo: Fraction, hi: Fraction):
    """n-th non-dyadic rational in (lo, hi), as a domain element."""
    cache: list[int] = []

    def alpha(n: int) -> int:
        candidate = cache[-1] // 2 + 1 if cache else 0
        while len(cache) <= n:
            value = rho(candidate)
            if lo < value < hi and not is_dyadic(value):
                cache.append(2 * candidate)
            candidate += 1
        return cache[n]

    def alpha_inv(element: int) -> int | None:
        if element % 2:
            return None
        value = rho(element // 2)
        if not (lo < value < hi) or is_dyadic(value):
            return None
        n = 0
        while True:
            e = alpha(n)
            if e == element:
                return n
            if e > element:
                return None
            n += 1

    return alpha, alpha_inv


PLUGIN = register_plugin(DenseOrderTheory())
