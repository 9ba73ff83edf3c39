"""Shared machinery for decidable theory plugins.

Each plugin supplies quantifier elimination over its theory, a sentence
decider, satisfiability of quantifier-free literal systems over
indeterminate constants, algebraic closure, a hull operator, and an
independent-sequence generator.  Everything downstream (model builders,
type spaces, back-and-forth) talks to this interface only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from ..logic import (
    And,
    Apply,
    Atom,
    Const,
    Count,
    Eq,
    Exists,
    Falsity,
    ForAll,
    Formula,
    HConst,
    Iff,
    Implies,
    Language,
    Not,
    Or,
    Param,
    Term,
    Truth,
    Var,
    conj,
    disj,
    expand_counting,
    free_vars,
)
from ..oracles import SetOracle
from ..structures import CodedStructure, eval_ground

__all__ = [
    "Literal",
    "TheoryPlugin",
    "AclResult",
    "IndependentSequence",
    "QEError",
    "AdequacyError",
    "FiniteTargetError",
    "nnf",
    "dnf",
    "simplify",
    "register_plugin",
    "get_plugin",
    "plugin_ids",
]


class QEError(ValueError):
    pass


class AdequacyError(ValueError):
    pass


class FiniteTargetError(ValueError):
    pass


Literal = tuple[bool, Formula]  # (positive?, atomic formula)


def nnf(phi: Formula, negate: bool = False) -> Formula:
    """Negation normal form of a quantifier-free formula."""
    if isinstance(phi, Truth):
        return Falsity() if negate else phi
    if isinstance(phi, Falsity):
        return Truth() if negate else phi
    if isinstance(phi, (Eq, Atom)):
        return Not(phi) if negate else phi
    if isinstance(phi, Not):
        return nnf(phi.body, not negate)
    if isinstance(phi, And):
        cls = Or if negate else And
        return cls(nnf(phi.left, negate), nnf(phi.right, negate))
    if isinstance(phi, Or):
        cls = And if negate else Or
        return cls(nnf(phi.left, negate), nnf(phi.right, negate))
    if isinstance(phi, Implies):
        return nnf(Or(Not(phi.left), phi.right), negate)
    if isinstance(phi, Iff):
        both = And(phi.left, phi.right)
        neither = And(Not(phi.left), Not(phi.right))
        return nnf(Or(both, neither), negate)
    raise QEError(f"not quantifier-free: {phi!r}")


_DNF_CAP = 200_000


def dnf(phi: Formula) -> list[list[Literal]]:
    """Disjunctive normal form as literal lists; [] is falsum, [[]] verum."""

    def walk(f: Formula) -> list[list[Literal]]:
        if isinstance(f, Truth):
            return [[]]
        if isinstance(f, Falsity):
            return []
        if isinstance(f, (Eq, Atom)):
            return [[(True, f)]]
        if isinstance(f, Not):
            return [[(False, f.body)]]
        if isinstance(f, Or):
            return walk(f.left) + walk(f.right)
        if isinstance(f, And):
            left = walk(f.left)
            right = walk(f.right)
            if len(left) * len(right) > _DNF_CAP:
                raise QEError("DNF blowup")
            return [a + b for a in left for b in right]
        raise QEError(f"unexpected connective in NNF: {f!r}")

    return walk(nnf(phi))


def literals_to_formula(literal_sets: list[list[Literal]]) -> Formula:
    return simplify(
        disj(conj((lit if pos else Not(lit)) for pos, lit in conjunct) for conjunct in literal_sets)
    )


def simplify(phi: Formula) -> Formula:
    """Constant folding; keeps QE output compact."""
    if isinstance(phi, Not):
        body = simplify(phi.body)
        if isinstance(body, Truth):
            return Falsity()
        if isinstance(body, Falsity):
            return Truth()
        if isinstance(body, Not):
            return body.body
        return Not(body)
    if isinstance(phi, And):
        left, right = simplify(phi.left), simplify(phi.right)
        if isinstance(left, Falsity) or isinstance(right, Falsity):
            return Falsity()
        if isinstance(left, Truth):
            return right
        if isinstance(right, Truth):
            return left
        return And(left, right)
    if isinstance(phi, Or):
        left, right = simplify(phi.left), simplify(phi.right)
        if isinstance(left, Truth) or isinstance(right, Truth):
            return Truth()
        if isinstance(left, Falsity):
            return right
        if isinstance(right, Falsity):
            return left
        return Or(left, right)
    if isinstance(phi, Implies):
        return simplify(Or(Not(phi.left), phi.right))
    if isinstance(phi, Iff):
        left, right = simplify(phi.left), simplify(phi.right)
        if isinstance(left, Truth):
            return right
        if isinstance(right, Truth):
            return left
        if isinstance(left, Falsity):
            return simplify(Not(right))
        if isinstance(right, Falsity):
            return simplify(Not(left))
        return Iff(left, right)
    if isinstance(phi, (ForAll, Exists)):
        body = simplify(phi.body)
        if isinstance(body, (Truth, Falsity)):
            return body
        return type(phi)(phi.var, body)
    return phi


@dataclass
class AclResult:
    """Membership oracle for acl(base ∪ tuple) with algebraicity witnesses."""

    oracle: SetOracle
    witness: Callable[[int], tuple[Formula, int]]  # member -> (formula, bound)


@dataclass
class IndependentSequence:
    """Injective computable sequence, independent over its base."""

    element: Callable[[int], int]
    index_of: Callable[[int], int | None]
    description: str = ""


class TheoryPlugin:
    """Decidable complete theory with quantifier elimination."""

    plugin_id: str = ""
    language: Language
    strongly_minimal: bool = False

    def __init__(self) -> None:
        self._qe_cache: dict[Formula, Formula] = {}
        self._canonical: CodedStructure | None = None

    # -- canonical model -----------------------------------------------------

    def make_canonical(self) -> CodedStructure:
        raise NotImplementedError

    def canonical(self) -> CodedStructure:
        if self._canonical is None:
            self._canonical = self.make_canonical()
        return self._canonical

    # -- syntax --------------------------------------------------------------

    def sm_formula(self) -> Formula:
        """Designated strongly minimal formula (one free variable)."""
        if not self.strongly_minimal:
            raise QEError(f"{self.plugin_id} declares no strongly minimal formula")
        return Eq(Var(0), Var(0))

    def axioms(self) -> Iterator[Formula]:
        raise NotImplementedError

    # -- quantifier elimination ----------------------------------------------

    def qe_reduce(self, phi: Formula) -> Formula:
        cached = self._qe_cache.get(phi)
        if cached is None:
            cached = simplify(self._qe(expand_counting(phi)))
            self._qe_cache[phi] = cached
        return cached

    def _qe(self, phi: Formula) -> Formula:
        if isinstance(phi, (Truth, Falsity, Eq, Atom)):
            return phi
        if isinstance(phi, Not):
            return Not(self._qe(phi.body))
        if isinstance(phi, (And, Or, Implies, Iff)):
            return type(phi)(self._qe(phi.left), self._qe(phi.right))
        if isinstance(phi, Exists):
            return self._qe_exists(phi.var, simplify(self._qe(phi.body)))
        if isinstance(phi, ForAll):
            inner = self._qe_exists(phi.var, simplify(Not(self._qe(phi.body))))
            return Not(inner)
        raise QEError(f"cannot eliminate: {phi!r}")

    def _qe_exists(self, var: int, body: Formula) -> Formula:
        body = simplify(body)
        if var not in free_vars(body):
            return body
        parts = []
        for conjunct in dnf(body):
            parts.append(self.eliminate_conjunct(var, conjunct))
        return simplify(disj(parts))

    def eliminate_conjunct(self, var: int, literals: list[Literal]) -> Formula:
        raise NotImplementedError

    # -- decision ------------------------------------------------------------

    def decide_sentence(self, sigma: Formula) -> bool:
        """Truth of a sentence, with named domain elements read in the
        canonical model."""
        if free_vars(sigma):
            raise QEError("decide_sentence requires a sentence")
        reduced = self.qe_reduce(sigma)
        return eval_ground(self.canonical(), reduced, {})

    def consistent(self, literals: Iterable[Literal]) -> bool:
        """Satisfiability (over the theory) of a conjunction of quantifier-free
        literals whose terms mention parameters and indeterminate constants."""
        raise NotImplementedError

    def find_consistent_disjunct(
        self, base: list[Literal], phi: Formula
    ) -> list[Literal] | None:
        """First DNF disjunct of `phi` consistent with `base`, if any."""
        reduced = self.qe_reduce(phi)
        for conjunct in dnf(reduced):
            if self.consistent(base + conjunct):
                return conjunct
        return None

    # -- algebra -------------------------------------------------------------

    def acl_compute(
        self,
        structure: CodedStructure,
        base: SetOracle,
        tuple_elements: tuple[int, ...],
        budget: int = 0,
    ) -> AclResult:
        raise NotImplementedError

    def hull(self, structure: CodedStructure, generators: SetOracle) -> CodedStructure:
        raise NotImplementedError

    def independent_sequence(
        self,
        structure: CodedStructure,
        base: SetOracle,
        psi: Formula,
        budget: int = 0,
    ) -> IndependentSequence:
        raise NotImplementedError

    def solution_infinite(self, psi: Formula) -> bool:
        """Whether a one-variable formula defines an infinite set."""
        raise NotImplementedError

    def solution_elements(self, psi: Formula, cap: int = 10_000) -> list[int] | None:
        """Listing of a finite solution set; None when infinite."""
        raise NotImplementedError

    # -- types over the empty set ---------------------------------------------

    def isolating_formula(self, values: tuple[int, ...]) -> Formula:
        """Atomic diagram of the tuple; isolates its type over the empty set."""
        raise NotImplementedError

    def zero_type_descriptors(self, n: int) -> list:
        """All complete n-types over the empty set, as comparable descriptors."""
        raise NotImplementedError

    def descriptor_of(self, values: tuple[int, ...]):
        raise NotImplementedError


# ---------------------------------------------------------------------------
# term helpers shared by plugins


def term_nodes(term: Term) -> Iterator[Term]:
    yield term
    if isinstance(term, Apply):
        for a in term.args:
            yield from term_nodes(a)


def ground_node(term: Term):
    """Node key for constraint graphs: params collapse to their value."""
    if isinstance(term, Param):
        return ("p", term.value)
    if isinstance(term, HConst):
        return ("h", term.index)
    if isinstance(term, Var):
        return ("v", term.index)
    raise QEError(f"unsupported term in literal system: {term!r}")


def sum_term(parts: list[Term]) -> Term:
    if not parts:
        return Const("0")
    acc = parts[0]
    for p in parts[1:]:
        acc = Apply("+", (acc, p))
    return acc


# ---------------------------------------------------------------------------
# registry

_REGISTRY: dict[str, TheoryPlugin] = {}


def register_plugin(plugin: TheoryPlugin) -> TheoryPlugin:
    _REGISTRY[plugin.plugin_id] = plugin
    return plugin


def get_plugin(plugin_id: str) -> TheoryPlugin:
    try:
        return _REGISTRY[plugin_id]
    except KeyError as err:
        raise KeyError(f"unknown theory plugin {plugin_id!r}") from err


def plugin_ids() -> list[str]:
    return sorted(_REGISTRY)
