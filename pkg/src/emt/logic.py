"""First-order syntax: languages, terms, formulas, codes, parsing, printing.

The concrete grammar uses keyword quantifiers (``forall x.``, ``exists y.``),
infix relations and ``=``/``!=``, connectives ``~ & | -> <->``, counting
quantifiers ``exists<=K``/``exists=K``, ``@N`` for the domain element N named
as a constant, and infix ``+`` for operator-named function symbols.  The
identifiers ``x y z w u v`` and ``xN`` are variables; ``hN`` is reserved for
indeterminate constants used by model builders.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coding import BitReader, BitWriter, NotACodeError

__all__ = [
    "Language",
    "Symbol",
    "Var",
    "Const",
    "Apply",
    "Param",
    "HConst",
    "Truth",
    "Falsity",
    "Eq",
    "Atom",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "ForAll",
    "Exists",
    "Count",
    "ParseError",
    "ArityError",
    "NotACodeError",
    "parse_formula",
    "parse_term",
    "render",
    "free_vars",
    "substitute",
    "expand_counting",
    "conj",
    "disj",
    "godel_code",
    "godel_decode",
    "enumerate_sentences",
    "is_sentence",
    "validate",
]


class ParseError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ArityError(ValueError):
    pass


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    code: int
    kind: str  # "relation" | "function" | "constant"


class Language:
    """Symbol table; every symbol carries an injective numeric code."""

    def __init__(
        self,
        name: str,
        relations: tuple[tuple[str, int], ...] | list = (),
        functions: tuple[tuple[str, int], ...] | list = (),
        constants: tuple[str, ...] | list = (),
    ) -> None:
        self.name = name
        self._by_name: dict[str, Symbol] = {}
        self._by_code: dict[tuple[str, int], Symbol] = {}
        code = 0
        for rel, arity in relations:
            self._add(Symbol(rel, arity, code, "relation"))
            code += 1
        for fn, arity in functions:
            self._add(Symbol(fn, arity, code, "function"))
            code += 1
        for const in constants:
            self._add(Symbol(const, 0, code, "constant"))
            code += 1

    def _add(self, sym: Symbol) -> None:
        if sym.name in self._by_name:
            raise ValueError(f"duplicate symbol {sym.name!r}")
        if sym.arity < 0:
            raise ValueError("arity must be >= 0")
        self._by_name[sym.name] = sym
        self._by_code[(sym.kind, sym.code)] = sym

    def symbol(self, name: str, kind: str | None = None) -> Symbol | None:
        sym = self._by_name.get(name)
        if sym is not None and kind is not None and sym.kind != kind:
            return None
        return sym

    def by_code(self, kind: str, code: int) -> Symbol | None:
        return self._by_code.get((kind, code))

    def symbols(self, kind: str | None = None) -> list[Symbol]:
        syms = sorted(self._by_name.values(), key=lambda s: s.code)
        if kind is None:
            return syms
        return [s for s in syms if s.kind == kind]

    def __repr__(self) -> str:
        return f"Language({self.name!r})"


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Apply:
    func: str
    args: tuple


@dataclass(frozen=True)
class Param:
    """A domain element of the ambient coded structure, named as a constant."""

    value: int


@dataclass(frozen=True)
class HConst:
    """Indeterminate constant; interpreted only by model builders."""

    index: int


Term = Var | Const | Apply | Param | HConst


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Truth:
    pass


@dataclass(frozen=True)
class Falsity:
    pass


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Count:
    """Counting quantifier macro: exists<=k or exists=k; expanded on demand."""

    kind: str  # "<=" | "=="
    bound: int
    var: int
    body: "Formula"


Formula = (
    Truth | Falsity | Eq | Atom | Not | And | Or | Implies | Iff | ForAll | Exists | Count
)

BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return Truth()
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc


def disj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return Falsity()
    acc = parts[0]
    for p in parts[1:]:
        acc = Or(acc, p)
    return acc


# ---------------------------------------------------------------------------
# structural helpers


def term_vars(t: Term) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    if isinstance(t, Apply):
        out: set[int] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def free_vars(phi: Formula) -> set[int]:
    if isinstance(phi, (Truth, Falsity)):
        return set()
    if isinstance(phi, Eq):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, Atom):
        out: set[int] = set()
        for a in phi.args:
            out |= term_vars(a)
        return out
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or, Implies, Iff)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (ForAll, Exists)):
        return free_vars(phi.body) - {phi.var}
    if isinstance(phi, Count):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def is_sentence(phi: Formula) -> bool:
    return not free_vars(phi)


def subst_term(t: Term, mapping: dict[int, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.index, t)
    if isinstance(t, Apply):
        return Apply(t.func, tuple(subst_term(a, mapping) for a in t.args))
    return t


def substitute(phi: Formula, mapping: dict[int, Term]) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return phi
    if isinstance(phi, (Truth, Falsity)):
        return phi
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.left, mapping), subst_term(phi.right, mapping))
    if isinstance(phi, Atom):
        return Atom(phi.rel, tuple(subst_term(a, mapping) for a in phi.args))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, mapping))
    if isinstance(phi, (And, Or, Implies, Iff)):
        return type(phi)(substitute(phi.left, mapping), substitute(phi.right, mapping))
    if isinstance(phi, (ForAll, Exists, Count)):
        inner = {k: v for k, v in mapping.items() if k != bound_var(phi)}
        if not inner:
            return phi
        captured = set()
        for v in inner.values():
            captured |= term_vars(v)
        var = bound_var(phi)
        body = phi.body
        if var in captured:
            fresh = 0
            avoid = captured | free_vars(body)
            while fresh in avoid:
                fresh += 1
            body = substitute(body, {var: Var(fresh)})
            var = fresh
        body = substitute(body, inner)
        if isinstance(phi, Count):
            return Count(phi.kind, phi.bound, var, body)
        return type(phi)(var, body)
    raise TypeError(f"not a formula: {phi!r}")


def bound_var(phi) -> int:
    return phi.var


def expand_counting(phi: Formula) -> Formula:
    """Rewrite counting quantifiers into pure first-order form."""
    if isinstance(phi, (Truth, Falsity, Eq, Atom)):
        return phi
    if isinstance(phi, Not):
        return Not(expand_counting(phi.body))
    if isinstance(phi, (And, Or, Implies, Iff)):
        return type(phi)(expand_counting(phi.left), expand_counting(phi.right))
    if isinstance(phi, (ForAll, Exists)):
        return type(phi)(phi.var, expand_counting(phi.body))
    if isinstance(phi, Count):
        body = expand_counting(phi.body)
        if phi.kind == "<=":
            return _at_most(phi.bound, phi.var, body)
        return And(_at_most(phi.bound, phi.var, body), _at_least(phi.bound, phi.var, body))
    raise TypeError(f"not a formula: {phi!r}")


def _fresh_vars(count: int, avoid: set[int]) -> list[int]:
    out: list[int] = []
    candidate = 0
    while len(out) < count:
        if candidate not in avoid:
            out.append(candidate)
            avoid = avoid | {candidate}
        candidate += 1
    return out


def _at_most(k: int, var: int, body: Formula) -> Formula:
    # Any k+1 realizations collide somewhere.
    avoid = free_vars(body) | {var}
    fresh = _fresh_vars(k + 1, avoid)
    hyp = conj(substitute(body, {var: Var(v)}) for v in fresh)
    coll = disj(
        Eq(Var(fresh[i]), Var(fresh[j]))
        for i in range(k + 1)
        for j in range(i + 1, k + 1)
    )
    out: Formula = Implies(hyp, coll)
    for v in reversed(fresh):
        out = ForAll(v, out)
    return out


def _at_least(k: int, var: int, body: Formula) -> Formula:
    if k == 0:
        return Truth()
    avoid = free_vars(body) | {var}
    fresh = _fresh_vars(k, avoid)
    parts = [substitute(body, {var: Var(v)}) for v in fresh]
    parts += [
        Not(Eq(Var(fresh[i]), Var(fresh[j])))
        for i in range(k)
        for j in range(i + 1, k)
    ]
    out: Formula = conj(parts)
    for v in reversed(fresh):
        out = Exists(v, out)
    return out


def validate(phi: Formula, language: Language) -> None:
    """Check declared arities; raises ArityError on mismatch."""

    def check_term(t: Term) -> None:
        if isinstance(t, Const):
            sym = language.symbol(t.name, "constant")
            if sym is None:
                raise ArityError(f"unknown constant {t.name!r}")
        elif isinstance(t, Apply):
            sym = language.symbol(t.func, "function")
            if sym is None:
                raise ArityError(f"unknown function {t.func!r}")
            if sym.arity != len(t.args):
                raise ArityError(f"{t.func!r} expects {sym.arity} arguments")
            for a in t.args:
                check_term(a)

    def check(f: Formula) -> None:
        if isinstance(f, Eq):
            check_term(f.left)
            check_term(f.right)
        elif isinstance(f, Atom):
            sym = language.symbol(f.rel, "relation")
            if sym is None:
                raise ArityError(f"unknown relation {f.rel!r}")
            if sym.arity != len(f.args):
                raise ArityError(f"{f.rel!r} expects {sym.arity} arguments")
            for a in f.args:
                check_term(a)
        elif isinstance(f, Not):
            check(f.body)
        elif isinstance(f, (And, Or, Implies, Iff)):
            check(f.left)
            check(f.right)
        elif isinstance(f, (ForAll, Exists, Count)):
            check(f.body)

    check(phi)


# ---------------------------------------------------------------------------
# printing

VAR_NAMES = "xyzwuv"


def var_name(index: int) -> str:
    if 0 <= index < len(VAR_NAMES):
        return VAR_NAMES[index]
    return f"x{index}"


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return var_name(t.index)
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Param):
        return f"@{t.value}"
    if isinstance(t, HConst):
        return f"h{t.index}"
    if isinstance(t, Apply):
        if not t.func.isidentifier() and len(t.args) == 2:
            return f"({render_term(t.args[0])} {t.func} {render_term(t.args[1])})"
        args = ", ".join(render_term(a) for a in t.args)
        return f"{t.func}({args})"
    raise TypeError(f"not a term: {t!r}")


# precedence: iff(1) < implies(2) < or(3) < and(4) < not(5) < atoms
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}


def render(phi: Formula) -> str:
    return _render(phi, 0)


def _render(phi: Formula, outer: int) -> str:
    if isinstance(phi, Truth):
        return "true"
    if isinstance(phi, Falsity):
        return "false"
    if isinstance(phi, Eq):
        return f"{render_term(phi.left)} = {render_term(phi.right)}"
    if isinstance(phi, Atom):
        if not phi.rel.isidentifier() and len(phi.args) == 2:
            return f"{render_term(phi.args[0])} {phi.rel} {render_term(phi.args[1])}"
        args = ", ".join(render_term(a) for a in phi.args)
        return f"{phi.rel}({args})"
    if isinstance(phi, Not):
        if isinstance(phi.body, Eq):
            return f"{render_term(phi.body.left)} != {render_term(phi.body.right)}"
        return f"~{_render(phi.body, 5)}"
    if type(phi) in BINARY:
        prec = _PREC[type(phi)]
        op = BINARY[type(phi)]
        if isinstance(phi, Implies):  # '->' associates right
            left = _render(phi.left, prec + 1)
            right = _render(phi.right, prec)
        else:  # '& | <->' associate left
            left = _render(phi.left, prec)
            right = _render(phi.right, prec + 1)
        text = f"{left} {op} {right}"
        if outer >= prec + 1:
            return f"({text})"
        return text
    if isinstance(phi, ForAll):
        text = f"forall {var_name(phi.var)}. {_render(phi.body, 0)}"
        return f"({text})" if outer > 0 else text
    if isinstance(phi, Exists):
        text = f"exists {var_name(phi.var)}. {_render(phi.body, 0)}"
        return f"({text})" if outer > 0 else text
    if isinstance(phi, Count):
        op = "<=" if phi.kind == "<=" else "="
        text = f"exists{op}{phi.bound} {var_name(phi.var)}. {_render(phi.body, 0)}"
        return f"({text})" if outer > 0 else text
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# parsing

_OPERATOR_CHARS = set("<>+*-/")


class _Tokenizer:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._scan()
        self.index = 0

    def _scan(self) -> None:
        text = self.text
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            start = i
            if ch in "().,":
                self.tokens.append(("punct", ch, start))
                i += 1
            elif ch == "@":
                i += 1
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j == i:
                    raise ParseError("expected digits after '@'", start)
                self.tokens.append(("param", text[i:j], start))
                i = j
            elif ch == "~":
                self.tokens.append(("not", "~", start))
                i += 1
            elif ch == "&":
                self.tokens.append(("and", "&", start))
                i += 1
            elif ch == "|":
                self.tokens.append(("or", "|", start))
                i += 1
            elif text.startswith("<->", i):
                self.tokens.append(("iff", "<->", start))
                i += 3
            elif text.startswith("->", i):
                self.tokens.append(("implies", "->", start))
                i += 2
            elif text.startswith("!=", i):
                self.tokens.append(("neq", "!=", start))
                i += 2
            elif text.startswith("<=", i):
                self.tokens.append(("le", "<=", start))
                i += 2
            elif ch == "=":
                self.tokens.append(("eq", "=", start))
                i += 1
            elif ch in _OPERATOR_CHARS:
                j = i
                while j < len(text) and text[j] in _OPERATOR_CHARS:
                    j += 1
                self.tokens.append(("op", text[i:j], start))
                i = j
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("int", text[i:j], start))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                if word in ("forall", "exists"):
                    self.tokens.append(("quant", word, start))
                elif word == "true":
                    self.tokens.append(("true", word, start))
                elif word == "false":
                    self.tokens.append(("false", word, start))
                else:
                    self.tokens.append(("name", word, start))
                i = j
            else:
                raise ParseError(f"unexpected character {ch!r}", start)
        self.tokens.append(("eof", "", len(text)))

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok


class _Parser:
    def __init__(self, text: str, language: Language) -> None:
        self.toks = _Tokenizer(text)
        self.language = language

    def parse_formula(self) -> Formula:
        phi = self._iff()
        tok = self.toks.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected trailing {tok[1]!r}", tok[2])
        validate(phi, self.language)
        return phi

    def parse_term(self) -> Term:
        t = self._term()
        tok = self.toks.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected trailing {tok[1]!r}", tok[2])
        return t

    def _iff(self) -> Formula:
        left = self._implies()
        while self.toks.peek()[0] == "iff":
            self.toks.next()
            left = Iff(left, self._implies())
        return left

    def _implies(self) -> Formula:
        left = self._or()
        if self.toks.peek()[0] == "implies":
            self.toks.next()
            return Implies(left, self._implies())
        return left

    def _or(self) -> Formula:
        left = self._and()
        while self.toks.peek()[0] == "or":
            self.toks.next()
            left = Or(left, self._and())
        return left

    def _and(self) -> Formula:
        left = self._unary()
        while self.toks.peek()[0] == "and":
            self.toks.next()
            left = And(left, self._unary())
        return left

    def _unary(self) -> Formula:
        kind, value, pos = self.toks.peek()
        if kind == "not":
            self.toks.next()
            return Not(self._unary())
        if kind == "quant":
            return self._quantifier()
        return self._atomish()

    def _quantifier(self) -> Formula:
        kind, word, pos = self.toks.next()
        count_kind: str | None = None
        bound = 0
        nxt = self.toks.peek()
        if word == "exists" and nxt[0] in ("le", "eq"):
            self.toks.next()
            count_kind = "<=" if nxt[0] == "le" else "=="
            tok = self.toks.expect("int")
            bound = int(tok[1])
        name_tok = self.toks.expect("name")
        var = self._variable_index(name_tok)
        dot = self.toks.next()
        if dot[1] != ".":
            raise ParseError("expected '.' after quantified variable", dot[2])
        body = self._iff()
        if count_kind is not None:
            return Count(count_kind, bound, var, body)
        if word == "forall":
            return ForAll(var, body)
        return Exists(var, body)

    def _variable_index(self, tok: tuple[str, str, int]) -> int:
        name = tok[1]
        if name in VAR_NAMES and len(name) == 1:
            return VAR_NAMES.index(name)
        if name[0] == "x" and name[1:].isdigit():
            return int(name[1:])
        raise ParseError(f"not a variable name: {name!r}", tok[2])

    def _atomish(self) -> Formula:
        kind, value, pos = self.toks.peek()
        if kind == "true":
            self.toks.next()
            return Truth()
        if kind == "false":
            self.toks.next()
            return Falsity()
        if kind == "punct" and value == "(":
            # could be a parenthesised formula or a parenthesised term
            save = self.toks.index
            try:
                self.toks.next()
                phi = self._iff()
                close = self.toks.next()
                if close[1] != ")":
                    raise ParseError("expected ')'", close[2])
                if self.toks.peek()[0] in ("eq", "neq", "op"):
                    raise ParseError("term context", pos)
                return phi
            except ParseError:
                self.toks.index = save
        left = self._term()
        kind, value, pos = self.toks.next()
        if kind == "eq":
            return Eq(left, self._term())
        if kind == "neq":
            return Not(Eq(left, self._term()))
        if kind in ("op", "name"):
            sym = self.language.symbol(value, "relation")
            if sym is None:
                raise ParseError(f"unknown relation {value!r}", pos)
            if sym.arity != 2:
                raise ParseError(f"relation {value!r} is not binary", pos)
            return Atom(value, (left, self._term()))
        raise ParseError(f"expected a relation, found {value!r}", pos)

    def _term(self) -> Term:
        left = self._primary()
        while True:
            kind, value, pos = self.toks.peek()
            if kind == "op" and self.language.symbol(value, "function"):
                self.toks.next()
                right = self._primary()
                left = Apply(value, (left, right))
            else:
                return left

    def _primary(self) -> Term:
        kind, value, pos = self.toks.next()
        if kind == "param":
            return Param(int(value))
        if kind == "punct" and value == "(":
            t = self._term()
            close = self.toks.next()
            if close[1] != ")":
                raise ParseError("expected ')'", close[2])
            return t
        if kind == "name":
            if value[0] == "h" and value[1:].isdigit():
                return HConst(int(value[1:]))
            if self.toks.peek()[1] == "(" and self.language.symbol(value, "function"):
                self.toks.next()
                args = [self._term()]
                while self.toks.peek()[1] == ",":
                    self.toks.next()
                    args.append(self._term())
                close = self.toks.next()
                if close[1] != ")":
                    raise ParseError("expected ')'", close[2])
                sym = self.language.symbol(value, "function")
                if sym.arity != len(args):
                    raise ParseError(f"{value!r} expects {sym.arity} arguments", pos)
                return Apply(value, tuple(args))
            if self.language.symbol(value, "constant"):
                return Const(value)
            if (value in VAR_NAMES and len(value) == 1) or (
                value[0] == "x" and value[1:].isdigit()
            ):
                return Var(self._var_index(value))
            raise ParseError(f"unknown symbol {value!r}", pos)
        if kind == "int" and self.language.symbol(value, "constant"):
            return Const(value)
        raise ParseError(f"expected a term, found {value!r}", pos)

    @staticmethod
    def _var_index(name: str) -> int:
        if name in VAR_NAMES:
            return VAR_NAMES.index(name)
        return int(name[1:])


def parse_formula(text: str, language: Language) -> Formula:
    return _Parser(text, language).parse_formula()


def parse_term(text: str, language: Language) -> Term:
    return _Parser(text, language).parse_term()


# ---------------------------------------------------------------------------
# Goedel coding
#
# Objects serialize to a prefix-free bit stream; the code is the stream read
# as a binary numeral behind a sentinel bit.  A subobject's stream is a
# strict substring of its parent's, so codes are subterm-monotone.

_KIND_TERM = 0
_KIND_FORMULA = 1
_KIND_LIST = 2


def _encode_term(w: BitWriter, t: Term, lang: Language) -> None:
    if isinstance(t, Var):
        w.write_str("0")
        w.gamma(t.index + 1)
    elif isinstance(t, Const):
        sym = lang.symbol(t.name, "constant")
        if sym is None:
            raise ArityError(f"unknown constant {t.name!r}")
        w.write_str("10")
        w.gamma(sym.code + 1)
    elif isinstance(t, Apply):
        sym = lang.symbol(t.func, "function")
        if sym is None:
            raise ArityError(f"unknown function {t.func!r}")
        if sym.arity != len(t.args):
            raise ArityError(f"{t.func!r} expects {sym.arity} arguments")
        w.write_str("110")
        w.gamma(sym.code + 1)
        for a in t.args:
            _encode_term(w, a, lang)
    elif isinstance(t, Param):
        w.write_str("1110")
        w.gamma(t.value + 1)
    elif isinstance(t, HConst):
        w.write_str("1111")
        w.gamma(t.index + 1)
    else:
        raise TypeError(f"not a term: {t!r}")


def _decode_term(r: BitReader, lang: Language) -> Term:
    if r.take(1) == 0:
        return Var(r.gamma() - 1)
    if r.take(1) == 0:
        code = r.gamma() - 1
        sym = lang.by_code("constant", code)
        if sym is None:
            raise NotACodeError(f"no constant with code {code}")
        return Const(sym.name)
    if r.take(1) == 0:
        code = r.gamma() - 1
        sym = lang.by_code("function", code)
        if sym is None:
            raise NotACodeError(f"no function with code {code}")
        args = tuple(_decode_term(r, lang) for _ in range(sym.arity))
        return Apply(sym.name, args)
    if r.take(1) == 0:
        return Param(r.gamma() - 1)
    return HConst(r.gamma() - 1)


_FTAGS = {
    Eq: "00",
    Atom: "01",
    ForAll: "100",
    Exists: "101",
    Not: "1100",
    And: "1101",
    Or: "11100",
    Implies: "11101",
    Iff: "111100",
    Truth: "111101",
    Falsity: "111110",
    Count: "111111",
}


def _encode_formula(w: BitWriter, phi: Formula, lang: Language) -> None:
    tag = _FTAGS.get(type(phi))
    if tag is None:
        raise TypeError(f"not a formula: {phi!r}")
    w.write_str(tag)
    if isinstance(phi, Eq):
        _encode_term(w, phi.left, lang)
        _encode_term(w, phi.right, lang)
    elif isinstance(phi, Atom):
        sym = lang.symbol(phi.rel, "relation")
        if sym is None:
            raise ArityError(f"unknown relation {phi.rel!r}")
        if sym.arity != len(phi.args):
            raise ArityError(f"{phi.rel!r} expects {sym.arity} arguments")
        w.gamma(sym.code + 1)
        for a in phi.args:
            _encode_term(w, a, lang)
    elif isinstance(phi, (ForAll, Exists)):
        w.gamma(phi.var + 1)
        _encode_formula(w, phi.body, lang)
    elif isinstance(phi, Not):
        _encode_formula(w, phi.body, lang)
    elif isinstance(phi, (And, Or, Implies, Iff)):
        _encode_formula(w, phi.left, lang)
        _encode_formula(w, phi.right, lang)
    elif isinstance(phi, Count):
        w.write(0 if phi.kind == "<=" else 1, 1)
        w.gamma(phi.bound + 1)
        w.gamma(phi.var + 1)
        _encode_formula(w, phi.body, lang)


def _decode_formula(r: BitReader, lang: Language) -> Formula:
    if r.take(1) == 0:
        if r.take(1) == 0:
            left = _decode_term(r, lang)
            right = _decode_term(r, lang)
            return Eq(left, right)
        code = r.gamma() - 1
        sym = lang.by_code("relation", code)
        if sym is None:
            raise NotACodeError(f"no relation with code {code}")
        args = tuple(_decode_term(r, lang) for _ in range(sym.arity))
        return Atom(sym.name, args)
    if r.take(1) == 0:
        cls = ForAll if r.take(1) == 0 else Exists
        var = r.gamma() - 1
        return cls(var, _decode_formula(r, lang))
    if r.take(1) == 0:
        if r.take(1) == 0:
            return Not(_decode_formula(r, lang))
        return And(_decode_formula(r, lang), _decode_formula(r, lang))
    if r.take(1) == 0:
        cls = Or if r.take(1) == 0 else Implies
        return cls(_decode_formula(r, lang), _decode_formula(r, lang))
    branch = r.take(2)
    if branch == 0:
        return Iff(_decode_formula(r, lang), _decode_formula(r, lang))
    if branch == 1:
        return Truth()
    if branch == 2:
        return Falsity()
    kind = "<=" if r.take(1) == 0 else "=="
    bound = r.gamma() - 1
    var = r.gamma() - 1
    return Count(kind, bound, var, _decode_formula(r, lang))


def godel_code(obj, language: Language) -> int:
    """Injective code; decode(code(x)) == x and subobject codes are smaller."""
    w = BitWriter()
    if isinstance(obj, (Var, Const, Apply, Param, HConst)):
        w.write(_KIND_TERM, 2)
        _encode_term(w, obj, language)
    elif isinstance(obj, (list, tuple)):
        w.write(_KIND_LIST, 2)
        w.gamma(len(obj) + 1)
        for phi in obj:
            _encode_formula(w, phi, language)
    else:
        w.write(_KIND_FORMULA, 2)
        _encode_formula(w, obj, language)
    return w.to_int()


def godel_decode(code: int, language: Language):
    """Inverse of godel_code; raises NotACodeError on non-codes."""
    if not isinstance(code, int) or code < 4:
        raise NotACodeError("not a code")
    r = BitReader(code)
    kind = r.take(2)
    if kind == _KIND_TERM:
        obj = _decode_term(r, language)
    elif kind == _KIND_FORMULA:
        obj = _decode_formula(r, language)
    elif kind == _KIND_LIST:
        n = r.gamma() - 1
        obj = [_decode_formula(r, language) for _ in range(n)]
    else:
        raise NotACodeError("bad kind tag")
    if not r.exhausted():
        raise NotACodeError("trailing bits")
    return obj


def try_decode_sentence(code: int, language: Language) -> Formula | None:
    """Formula decode that also requires closedness; None on failure."""
    try:
        obj = godel_decode(code, language)
    except NotACodeError:
        return None
    if isinstance(obj, (Var, Const, Apply, Param, HConst, list)):
        return None
    if free_vars(obj):
        return None
    return obj


def enumerate_sentences(language: Language, budget: int):
    """All sentences with code < budget, in increasing code order."""
    out = []
    for code in range(4, budget):
        phi = try_decode_sentence(code, language)
        if phi is not None:
            out.append(phi)
    return out
