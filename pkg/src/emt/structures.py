"""Coded structures over the naturals with Tarskian satisfaction.

Satisfaction is exact in two cases: quantifier-free input, and structures
backed by a decidable theory plugin (quantifiers are removed by the plugin's
QE, which is valid in every model of the theory, so only ground atoms remain
to evaluate).  Otherwise quantifiers are searched over domain elements below
an explicit budget and the verdict may be `unknown`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .coding import tuple_code
from .logic import (
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
    expand_counting,
    free_vars,
    godel_decode,
    substitute,
)
from .oracles import SetOracle

__all__ = [
    "CodedStructure",
    "SatVerdict",
    "FunctionInterp",
    "EvaluationError",
    "NotDecidablePresentedError",
    "ClosureError",
    "TransportError",
    "satisfies",
    "diagram_oracle",
    "transport",
    "restrict",
    "is_quantifier_free",
]


class EvaluationError(ValueError):
    pass


class NotDecidablePresentedError(ValueError):
    pass


class ClosureError(ValueError):
    pass


class TransportError(ValueError):
    pass


@dataclass
class FunctionInterp:
    evaluate: Callable[[tuple[int, ...]], int]
    graph: SetOracle  # membership of tuple_code(args + (value,))


@dataclass
class SatVerdict:
    truth: bool | None  # None = unknown at the given budget
    budget_used: int = 0

    @property
    def is_true(self) -> bool:
        return self.truth is True

    @property
    def is_false(self) -> bool:
        return self.truth is False

    @property
    def is_unknown(self) -> bool:
        return self.truth is None


@dataclass
class CodedStructure:
    language: Language
    domain: SetOracle
    complement_witness: Callable[[int], int]
    relations: dict[str, SetOracle] = field(default_factory=dict)
    functions: dict[str, FunctionInterp] = field(default_factory=dict)
    constants: dict[str, int] = field(default_factory=dict)
    theory: str | None = None  # plugin id enabling exact satisfaction
    theory_params: dict = field(default_factory=dict)
    domain_bound: int | None = None  # finite domains: all members are < bound
    record: dict | None = None  # reconstruction record for serialization
    name: str = "structure"

    def in_domain(self, value: int) -> bool:
        return self.domain(value)

    def eval_term(self, term: Term, env: dict[int, int] | None = None) -> int:
        if isinstance(term, Param):
            return term.value
        if isinstance(term, Const):
            try:
                return self.constants[term.name]
            except KeyError as err:
                raise EvaluationError(f"constant {term.name!r} not interpreted") from err
        if isinstance(term, Var):
            if env is None or term.index not in env:
                raise EvaluationError(f"unassigned variable index {term.index}")
            return env[term.index]
        if isinstance(term, Apply):
            interp = self.functions.get(term.func)
            if interp is None:
                raise EvaluationError(f"function {term.func!r} not interpreted")
            args = tuple(self.eval_term(a, env) for a in term.args)
            return interp.evaluate(args)
        if isinstance(term, HConst):
            raise EvaluationError(f"indeterminate constant h{term.index} has no value")
        raise TypeError(f"not a term: {term!r}")

    def eval_atom(self, phi: Formula, env: dict[int, int] | None = None) -> bool:
        if isinstance(phi, Truth):
            return True
        if isinstance(phi, Falsity):
            return False
        if isinstance(phi, Eq):
            return self.eval_term(phi.left, env) == self.eval_term(phi.right, env)
        if isinstance(phi, Atom):
            oracle = self.relations.get(phi.rel)
            if oracle is None:
                raise EvaluationError(f"relation {phi.rel!r} not interpreted")
            args = tuple(self.eval_term(a, env) for a in phi.args)
            return oracle(tuple_code(args))
        raise EvaluationError(f"not an atomic formula: {phi!r}")

    def domain_prefix(self, count: int, scan_limit: int = 500_000) -> list[int]:
        """First `count` domain elements in increasing code order."""
        out: list[int] = []
        n = 0
        while len(out) < count and n <= scan_limit:
            if self.domain(n):
                out.append(n)
            n += 1
            if self.domain_bound is not None and n >= self.domain_bound:
                break
        return out

    def without_theory(self) -> "CodedStructure":
        """Raw view: same interpretations, no exact-satisfaction backing."""
        return CodedStructure(
            language=self.language,
            domain=self.domain,
            complement_witness=self.complement_witness,
            relations=self.relations,
            functions=self.functions,
            constants=self.constants,
            theory=None,
            domain_bound=self.domain_bound,
            name=f"raw({self.name})",
        )


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Truth, Falsity, Eq, Atom)):
        return True
    if isinstance(phi, Not):
        return is_quantifier_free(phi.body)
    if isinstance(phi, (And, Or, Implies, Iff)):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return False


def eval_ground(structure: CodedStructure, phi: Formula, env: dict[int, int] | None = None) -> bool:
    """Exact evaluation of a quantifier-free formula."""
    if isinstance(phi, (Truth, Falsity, Eq, Atom)):
        return structure.eval_atom(phi, env)
    if isinstance(phi, Not):
        return not eval_ground(structure, phi.body, env)
    if isinstance(phi, And):
        return eval_ground(structure, phi.left, env) and eval_ground(structure, phi.right, env)
    if isinstance(phi, Or):
        return eval_ground(structure, phi.left, env) or eval_ground(structure, phi.right, env)
    if isinstance(phi, Implies):
        return (not eval_ground(structure, phi.left, env)) or eval_ground(structure, phi.right, env)
    if isinstance(phi, Iff):
        return eval_ground(structure, phi.left, env) == eval_ground(structure, phi.right, env)
    raise EvaluationError(f"not quantifier-free: {phi!r}")


def _kleene(structure: CodedStructure, phi: Formula, env: dict[int, int], budget: int) -> bool | None:
    if isinstance(phi, (Truth, Falsity, Eq, Atom)):
        return structure.eval_atom(phi, env)
    if isinstance(phi, Not):
        sub = _kleene(structure, phi.body, env, budget)
        return None if sub is None else not sub
    if isinstance(phi, (And, Or)):
        left = _kleene(structure, phi.left, env, budget)
        right = _kleene(structure, phi.right, env, budget)
        if isinstance(phi, And):
            if left is False or right is False:
                return False
            if left is True and right is True:
                return True
            return None
        if left is True or right is True:
            return True
        if left is False and right is False:
            return False
        return None
    if isinstance(phi, Implies):
        return _kleene(structure, Or(Not(phi.left), phi.right), env, budget)
    if isinstance(phi, Iff):
        left = _kleene(structure, phi.left, env, budget)
        right = _kleene(structure, phi.right, env, budget)
        if left is None or right is None:
            return None
        return left == right
    if isinstance(phi, (ForAll, Exists)):
        exhaustive = structure.domain_bound is not None and budget >= structure.domain_bound
        found_unknown = False
        for candidate in range(budget):
            if structure.domain_bound is not None and candidate >= structure.domain_bound:
                break
            if not structure.domain(candidate):
                continue
            env2 = dict(env)
            env2[phi.var] = candidate
            sub = _kleene(structure, phi.body, env2, budget)
            if isinstance(phi, Exists) and sub is True:
                return True
            if isinstance(phi, ForAll) and sub is False:
                return False
            if sub is None:
                found_unknown = True
        if exhaustive and not found_unknown:
            return not isinstance(phi, Exists)
        return None
    raise EvaluationError(f"cannot evaluate: {phi!r}")


def satisfies(
    structure: CodedStructure,
    phi: Formula,
    assignment: dict[int, int] | None = None,
    budget: int = 0,
) -> SatVerdict:
    """Tarskian satisfaction with explicit budgets.

    Verdicts are monotone in the budget: a definite answer at one budget is
    never contradicted at a larger one.
    """
    assignment = assignment or {}
    missing = free_vars(phi) - set(assignment)
    if missing:
        raise EvaluationError(f"unassigned free variables: {sorted(missing)}")
    for var, value in assignment.items():
        if not structure.domain(value):
            raise EvaluationError(f"assigned value {value} is outside the domain")
    phi = expand_counting(phi)

    if is_quantifier_free(phi):
        return SatVerdict(eval_ground(structure, phi, assignment), 0)

    if structure.theory is not None:
        from .theories import get_plugin  # local import to avoid a cycle

        plugin = get_plugin(structure.theory)
        closed = substitute(phi, {v: Param(val) for v, val in assignment.items()})
        reduced = plugin.qe_reduce(closed)
        return SatVerdict(eval_ground(structure, reduced, {}), 0)

    truth = _kleene(structure, phi, dict(assignment), budget)
    return SatVerdict(truth, budget)


def diagram_oracle(structure: CodedStructure) -> SetOracle:
    """Oracle of Goedel codes of true sentences with parameters."""
    if structure.theory is None and structure.domain_bound is None:
        raise NotDecidablePresentedError(
            f"{structure.name}: no exact satisfaction available for quantified sentences"
        )

    def member(code: int) -> bool:
        try:
            obj = godel_decode(code, structure.language)
        except Exception:
            return False
        if isinstance(obj, (Var, Const, Apply, Param, HConst, list)):
            return False
        if free_vars(obj):
            return False
        for p in _params_of(obj):
            if not structure.domain(p):
                return False
        budget = structure.domain_bound or 0
        verdict = satisfies(structure, obj, {}, budget=budget)
        return verdict.truth is True

    return SetOracle(f"diag({structure.name})", member, jump_tag=structure.domain.jump_tag)


def _params_of(phi) -> set[int]:
    out: set[int] = set()

    def walk_term(t: Term) -> None:
        if isinstance(t, Param):
            out.add(t.value)
        elif isinstance(t, Apply):
            for a in t.args:
                walk_term(a)

    def walk(f: Formula) -> None:
        if isinstance(f, Eq):
            walk_term(f.left)
            walk_term(f.right)
        elif isinstance(f, Atom):
            for a in f.args:
                walk_term(a)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or, Implies, Iff)):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, (ForAll, Exists, Count)):
            walk(f.body)

    walk(phi)
    return out


def transport(
    structure: CodedStructure,
    recode: Callable[[int], int],
    inverse: Callable[[int], int | None],
    complement_witness: Callable[[int], int],
    check_prefix: int = 32,
) -> CodedStructure:
    """Isomorphic copy along an injective recoding of the domain."""
    prefix = structure.domain_prefix(check_prefix)
    images = [recode(x) for x in prefix]
    if len(set(images)) != len(images):
        raise TransportError("recode is not injective on the tested prefix")
    for x, y in zip(prefix, images):
        if inverse(y) != x:
            raise TransportError(f"inverse fails at {y}")
    last = -1
    for n in range(min(check_prefix, 16)):
        w = complement_witness(n)
        if w <= n or w <= last:
            raise TransportError("complement witness must be strictly increasing and > n")
        if inverse(w) is not None and structure.domain(inverse(w)):
            raise TransportError(f"complement witness value {w} lies in the image")
        last = w

    def member(m: int) -> bool:
        x = inverse(m)
        return x is not None and structure.domain(x)

    domain = SetOracle(f"transport({structure.domain.name})", member, structure.domain.jump_tag)

    def lift_relation(oracle: SetOracle) -> SetOracle:
        from .coding import tuple_decode

        def rel_member(code: int) -> bool:
            try:
                args = tuple_decode(code)
            except Exception:
                return False
            pre = [inverse(a) for a in args]
            if any(p is None for p in pre):
                return False
            return oracle(tuple_code(tuple(pre)))

        return SetOracle(f"transport({oracle.name})", rel_member, oracle.jump_tag)

    def lift_function(interp: FunctionInterp) -> FunctionInterp:
        def evaluate(args: tuple[int, ...]) -> int:
            pre = tuple(inverse(a) for a in args)
            if any(p is None for p in pre):
                raise EvaluationError("function argument outside the transported domain")
            return recode(interp.evaluate(pre))

        def graph_member(code: int) -> bool:
            from .coding import tuple_decode

            try:
                items = tuple_decode(code)
            except Exception:
                return False
            if not items:
                return False
            *args, value = items
            try:
                return evaluate(tuple(args)) == value
            except EvaluationError:
                return False

        return FunctionInterp(evaluate, SetOracle("graph", graph_member))

    return CodedStructure(
        language=structure.language,
        domain=domain,
        complement_witness=complement_witness,
        relations={name: lift_relation(o) for name, o in structure.relations.items()},
        functions={name: lift_function(f) for name, f in structure.functions.items()},
        constants={name: recode(v) for name, v in structure.constants.items()},
        theory=structure.theory,
        theory_params=dict(structure.theory_params),
        domain_bound=None,
        name=f"transport({structure.name})",
    )


def restrict(
    structure: CodedStructure,
    sub: SetOracle,
    check_prefix: int = 32,
    name: str | None = None,
) -> CodedStructure:
    """Induced substructure on `sub`; checks containment and closure on a prefix."""
    members: list[int] = []
    n = 0
    scan = 0
    while len(members) < check_prefix and scan < 200_000:
        if sub(n):
            if not structure.domain(n):
                raise ClosureError(f"element {n} of the subset is outside the domain")
            members.append(n)
        n += 1
        scan += 1
    for fname, interp in structure.functions.items():
        sym = structure.language.symbol(fname, "function")
        arity = sym.arity if sym else 1
        sample = members[: max(2, 6 - arity)]
        import itertools

        for args in itertools.product(sample, repeat=arity):
            value = interp.evaluate(args)
            if not sub(value):
                raise ClosureError(
                    f"subset not closed under {fname!r}: {args} maps to {value}"
                )
    for cname, value in structure.constants.items():
        if not sub(value):
            raise ClosureError(f"constant {cname!r} = {value} missing from the subset")

    return CodedStructure(
        language=structure.language,
        domain=sub,
        complement_witness=structure.complement_witness,
        relations=structure.relations,
        functions=structure.functions,
        constants=structure.constants,
        theory=structure.theory,
        theory_params=dict(structure.theory_params),
        domain_bound=structure.domain_bound,
        name=name or f"{structure.name}|{sub.name}",
    )
