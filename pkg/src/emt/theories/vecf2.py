"""Infinite vector spaces over the two-element field.

A vector is the bitset of its coordinates in a fixed basis; the domain
element carrying bitset b is 2*b, so odd numbers stay outside every domain.
Addition is bitwise xor.  Every atom normalizes to a linear equation
"xor of unknowns = known vector", and quantifier elimination is Gaussian
elimination over these rows.
"""

from __future__ import annotations

import itertools

from ..coding import tuple_decode
from ..logic import (
    Apply,
    Const,
    Eq,
    Exists,
    Falsity,
    ForAll,
    Formula,
    HConst,
    Language,
    Not,
    Param,
    Term,
    Truth,
    Var,
    conj,
    free_vars,
    parse_formula,
)
from ..oracles import SetOracle
from ..structures import CodedStructure, FunctionInterp, restrict
from .base import (
    AclResult,
    AdequacyError,
    FiniteTargetError,
    IndependentSequence,
    Literal,
    QEError,
    TheoryPlugin,
    dnf,
    register_plugin,
    sum_term,
)

PLUS = "+"
ZERO = "0"


def vector_of(element: int) -> int:
    if element % 2:
        raise ValueError(f"{element} is not a domain element")
    return element // 2


def element_of(vector: int) -> int:
    return 2 * vector


def xor_elements(a: int, b: int) -> int:
    return element_of(vector_of(a) ^ vector_of(b))


def unit_element(coordinate: int) -> int:
    return element_of(1 << coordinate)


# a linear row: xor of `unknowns` equals the vector `value`
Row = tuple[frozenset, int]


def _term_row(term: Term) -> Row:
    if isinstance(term, Var):
        return frozenset([("v", term.index)]), 0
    if isinstance(term, HConst):
        return frozenset([("h", term.index)]), 0
    if isinstance(term, Param):
        return frozenset(), vector_of(term.value)
    if isinstance(term, Const):
        if term.name != ZERO:
            raise QEError(f"unknown constant {term.name!r}")
        return frozenset(), 0
    if isinstance(term, Apply):
        if term.func != PLUS:
            raise QEError(f"unknown function {term.func!r}")
        left = _term_row(term.args[0])
        right = _term_row(term.args[1])
        return left[0] ^ right[0], left[1] ^ right[1]
    raise QEError(f"not a term: {term!r}")


def _literal_row(atom: Formula) -> Row:
    if not isinstance(atom, Eq):
        raise QEError(f"the vector language has no relation {atom!r}")
    left = _term_row(atom.left)
    right = _term_row(atom.right)
    return left[0] ^ right[0], left[1] ^ right[1]


def _row_formula(row: Row, positive: bool) -> Formula:
    unknowns, value = row
    parts: list[Term] = []
    for kind, idx in sorted(unknowns):
        parts.append(Var(idx) if kind == "v" else HConst(idx))
    lhs = sum_term(parts)
    rhs: Term = Const(ZERO) if value == 0 else Param(element_of(value))
    atom = Eq(lhs, rhs)
    return atom if positive else Not(atom)


def _reduce(row: Row, pivots: dict) -> Row:
    unknowns, value = row
    changed = True
    while changed:
        changed = False
        for key in sorted(unknowns):
            pivot = pivots.get(key)
            if pivot is not None:
                unknowns = unknowns ^ pivot[0]
                value ^= pivot[1]
                changed = True
                break
    return unknowns, value


class VectorSpaceTheory(TheoryPlugin):
    plugin_id = "vecf2"
    strongly_minimal = True

    def __init__(self) -> None:
        super().__init__()
        self.language = Language("vecf2", functions=[(PLUS, 2)], constants=[ZERO])

    def make_canonical(self) -> CodedStructure:
        def evaluate(args: tuple[int, ...]) -> int:
            return xor_elements(args[0], args[1])

        def graph_member(code: int) -> bool:
            try:
                a, b, c = tuple_decode(code)
            except Exception:
                return False
            return a % 2 == 0 and b % 2 == 0 and xor_elements(a, b) == c

        return CodedStructure(
            language=self.language,
            domain=SetOracle("vecf2-domain", lambda n: n % 2 == 0),
            complement_witness=lambda n: 2 * n + 1,
            functions={PLUS: FunctionInterp(evaluate, SetOracle("vecf2-sum", graph_member))},
            constants={ZERO: 0},
            theory=self.plugin_id,
            name="vecf2-canonical",
        )

    def axioms(self):
        for text in [
            "forall x. forall y. forall z. (x + y) + z = x + (y + z)",
            "forall x. forall y. x + y = y + x",
            "forall x. x + 0 = x",
            "forall x. x + x = 0",
        ]:
            yield parse_formula(text, self.language)
        # infinitude scheme
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

    # -- QE -------------------------------------------------------------------------

    def eliminate_conjunct(self, var: int, literals: list[Literal]) -> Formula:
        key = ("v", var)
        equations: list[Row] = []
        diseqs: list[Row] = []
        for pos, atom in literals:
            row = _literal_row(atom)
            (equations if pos else diseqs).append(row)
        pivot = None
        for row in equations:
            if key in row[0]:
                pivot = row
                break
        out: list[Formula] = []
        if pivot is not None:
            for row in equations:
                if row is pivot:
                    continue
                if key in row[0]:
                    row = (row[0] ^ pivot[0], row[1] ^ pivot[1])
                out.append(self._finish_row(row, True))
            for row in diseqs:
                if key in row[0]:
                    row = (row[0] ^ pivot[0], row[1] ^ pivot[1])
                out.append(self._finish_row(row, False))
        else:
            # only disequations mention the variable; each removes a single
            # value from an infinite space
            out.extend(self._finish_row(row, True) for row in equations)
            out.extend(self._finish_row(row, False) for row in diseqs if key not in row[0])
        return conj(out)

    @staticmethod
    def _finish_row(row: Row, positive: bool) -> Formula:
        unknowns, value = row
        if not unknowns:
            holds = value == 0
            truth = holds if positive else not holds
            return Truth() if truth else Falsity()
        return _row_formula(row, positive)

    # -- satisfiability ----------------------------------------------------------------

    def consistent(self, literals) -> bool:
        pivots: dict = {}
        diseqs: list[Row] = []
        for pos, atom in literals:
            row = _reduce(_literal_row(atom), pivots)
            if pos:
                unknowns, value = row
                if not unknowns:
                    if value != 0:
                        return False
                    continue
                pivots[min(unknowns)] = row
            else:
                diseqs.append(row)
        for row in diseqs:
            unknowns, value = _reduce(row, pivots)
            if not unknowns and value == 0:
                return False
        return True

    # -- algebra -------------------------------------------------------------------------

    def acl_compute(self, structure, base, tuple_elements, budget=0) -> AclResult:
        elements = tuple(tuple_elements)

        def span_witness(m: int):
            if m % 2:
                return None
            for size in range(len(elements) + 1):
                for combo in itertools.combinations(range(len(elements)), size):
                    acc = 0
                    for i in combo:
                        acc ^= vector_of(elements[i])
                    rest = element_of(vector_of(m) ^ acc)
                    if rest == 0 or base(rest):
                        return combo, rest
            return None

        def member(m: int) -> bool:
            return span_witness(m) is not None

        def witness(m: int):
            found = span_witness(m)
            if found is None:
                raise QEError(f"{m} is not in the span")
            combo, rest = found
            parts: list[Term] = [Param(elements[i]) for i in combo]
            if rest != 0:
                parts.append(Param(rest))
            return Eq(Var(0), sum_term(parts)), 1

        name = f"span({base.name}+{list(elements)})"
        return AclResult(SetOracle(name, member, base.jump_tag), witness)

    def hull(self, structure, generators) -> CodedStructure:
        self._check_coordinate_generated(generators)

        def member(v: int) -> bool:
            if v % 2 or not structure.domain(v):
                return False
            vec = vector_of(v)
            while vec:
                low = vec & -vec
                if not generators(element_of(low)):
                    return False
                vec ^= low
            return True

        domain = SetOracle(f"span({generators.name})", member, generators.jump_tag)
        return restrict(structure, domain, name=f"hull({generators.name})")

    def _check_coordinate_generated(
        self, generators, sample: int = 12, scan_bound: int = 400_000
    ) -> None:
        # the span computation above is exact exactly when every generator is
        # a sum of unit vectors that are themselves generators
        found = 0
        n = 0
        while found < sample and n < scan_bound:
            if generators(n) and n % 2 == 0:
                found += 1
                vec = vector_of(n)
                while vec:
                    low = vec & -vec
                    if not generators(element_of(low)):
                        raise AdequacyError(
                            f"generator {n} uses coordinate {low.bit_length() - 1} "
                            "whose unit vector is not a generator"
                        )
                    vec ^= low
            n += 2
        if found < 2:
            raise AdequacyError("generator set too sparse to span an infinite space")

    def independent_sequence(self, structure, base, psi, budget=0) -> IndependentSequence:
        if not self.solution_infinite(psi):
            raise FiniteTargetError(f"{psi!r} defines a finite set")
        self._check_subspace_sample(base)
        fv = free_vars(psi)
        var = next(iter(fv)) if fv else 0
        reduced = self.qe_reduce(psi)
        from ..structures import eval_ground

        cache: list[int] = []

        def qualifies(coordinate: int) -> bool:
            elt = unit_element(coordinate)
            if not structure.domain(elt) or base(elt):
                return False
            return eval_ground(structure, reduced, {var: elt})

        def element(n: int) -> int:
            coordinate = (vector_of(cache[-1]).bit_length()) if cache else 0
            while len(cache) <= n:
                if coordinate > 100_000:
                    raise AdequacyError("unit-vector scan stalled")
                if qualifies(coordinate):
                    cache.append(unit_element(coordinate))
                coordinate += 1
            return cache[n]

        def index_of(elt: int):
            if elt % 2:
                return None
            vec = vector_of(elt)
            if vec == 0 or vec & (vec - 1):
                return None  # not a unit vector
            coordinate = vec.bit_length() - 1
            if not qualifies(coordinate):
                return None
            index = 0
            while True:
                e = element(index)
                if e == elt:
                    return index
                if vector_of(e) > vec:
                    return None
                index += 1

        return IndependentSequence(
            element, index_of, f"unit vectors off {base.name} inside {psi!r}"
        )

    def _check_subspace_sample(self, base, sample: int = 6, scan_bound: int = 200_000) -> None:
        members: list[int] = []
        n = 0
        while len(members) < sample and n < scan_bound:
            if n % 2 == 0 and base(n):
                members.append(n)
            n += 1
        for a in members:
            vec = vector_of(a)
            while vec:
                low = vec & -vec
                if not base(element_of(low)):
                    raise AdequacyError(
                        "sequence base must be a coordinate subspace; "
                        f"member {a} uses a missing unit"
                    )
                vec ^= low
        for a, b in itertools.combinations(members[:4], 2):
            if not base(xor_elements(a, b)):
                raise AdequacyError("sequence base is not closed under addition")

    # -- solution sets -----------------------------------------------------------------------

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
        key = ("v", var)
        reduced = self.qe_reduce(psi)
        points: set[int] = set()
        for conjunct in dnf(reduced):
            rows = [(_literal_row(atom), pos) for pos, atom in conjunct]
            pin: Row | None = None
            for row, pos in rows:
                if pos and key in row[0]:
                    pin = row
                    break
            if pin is None:
                ok = True
                for row, pos in rows:
                    unknowns, value = row
                    if key in unknowns:
                        continue  # disequation on the variable: removes a point
                    if unknowns:
                        raise QEError("unexpected free unknown in solution analysis")
                    holds = value == 0
                    if holds != pos:
                        ok = False
                        break
                if ok:
                    return True, set()
            else:
                if pin[0] != frozenset([key]):
                    raise QEError("unexpected extra unknowns in a pinned row")
                value = pin[1]
                ok = True
                for row, pos in rows:
                    unknowns, rest = row
                    if key in unknowns:
                        unknowns = unknowns ^ frozenset([key])
                        rest ^= value
                    if unknowns:
                        raise QEError("unexpected free unknown in solution analysis")
                    if (rest == 0) != pos:
                        ok = False
                        break
                if ok:
                    points.add(element_of(value))
        return False, points

    # -- types over the empty set ----------------------------------------------------------------

    def descriptor_of(self, values: tuple[int, ...]):
        n = len(values)
        vanishing = set()
        for size in range(1, n + 1):
            for combo in itertools.combinations(range(n), size):
                acc = 0
                for i in combo:
                    acc ^= vector_of(values[i])
                if acc == 0:
                    vanishing.add(frozenset(combo))
        return frozenset(vanishing)

    def zero_type_descriptors(self, n: int):
        combos = [frozenset(c) for size in range(1, n + 1)
                  for c in itertools.combinations(range(n), size)]
        out = []
        for bits in range(1 << len(combos)):
            chosen = {combos[i] for i in range(len(combos)) if bits >> i & 1}
            closed = True
            for a in chosen:
                for b in chosen:
                    d = a ^ b
                    if d and d not in chosen:
                        closed = False
                        break
                if not closed:
                    break
            if closed:
                out.append(frozenset(chosen))
        return out

    def isolating_formula(self, values: tuple[int, ...]) -> Formula:
        n = len(values)
        descriptor = self.descriptor_of(values)
        parts = []
        for size in range(1, n + 1):
            for combo in itertools.combinations(range(n), size):
                atom = Eq(sum_term([Var(i) for i in combo]), Const(ZERO))
                parts.append(atom if frozenset(combo) in descriptor else Not(atom))
        return conj(parts)

    def representative_tuple(self, descriptor, n: int):
        for vectors in itertools.product(range(1 << n), repeat=n):
            values = tuple(element_of(v) for v in vectors)
            if self.descriptor_of(values) == descriptor:
                return values
        raise QEError("descriptor is not realizable")


def coordinate_subspace(name: str, coordinate_pred) -> SetOracle:
    """Subspace of vectors supported on the selected coordinates."""

    def member(n: int) -> bool:
        if n % 2:
            return False
        vec = vector_of(n)
        while vec:
            low = vec & -vec
            if not coordinate_pred(low.bit_length() - 1):
                return False
            vec ^= low
        return True

    return SetOracle(name, member)


PLUGIN = register_plugin(VectorSpaceTheory())
