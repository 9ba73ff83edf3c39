import random

import pytest

from emt.coding import NotACodeError, pair, tuple_code, tuple_decode, unpair
from emt.logic import (
    And,
    Apply,
    ArityError,
    Atom,
    Const,
    Count,
    Eq,
    Exists,
    Falsity,
    ForAll,
    HConst,
    Iff,
    Implies,
    Language,
    Not,
    Or,
    Param,
    ParseError,
    Truth,
    Var,
    enumerate_sentences,
    expand_counting,
    free_vars,
    godel_code,
    godel_decode,
    parse_formula,
    render,
    substitute,
)

DLO = Language("dlo", relations=[("<", 2)])
VEC = Language("vecf2", functions=[("+", 2)], constants=["0"])
EQL = Language("pure-eq")


def random_term(rng, depth, lang):
    choices = ["var", "param"]
    if lang.symbols("constant"):
        choices.append("const")
    if depth > 0 and lang.symbols("function"):
        choices.append("apply")
    kind = rng.choice(choices)
    if kind == "var":
        return Var(rng.randrange(6))
    if kind == "param":
        return Param(rng.randrange(50))
    if kind == "const":
        return Const(rng.choice(lang.symbols("constant")).name)
    sym = rng.choice(lang.symbols("function"))
    return Apply(sym.name, tuple(random_term(rng, depth - 1, lang) for _ in range(sym.arity)))


def random_formula(rng, depth, lang):
    if depth == 0:
        kind = rng.choice(["eq", "atom", "true", "false"])
        if kind == "atom" and lang.symbols("relation"):
            sym = rng.choice(lang.symbols("relation"))
            return Atom(sym.name, tuple(random_term(rng, 1, lang) for _ in range(sym.arity)))
        if kind == "true":
            return Truth()
        if kind == "false":
            return Falsity()
        return Eq(random_term(rng, 1, lang), random_term(rng, 1, lang))
    kind = rng.choice(["not", "and", "or", "implies", "iff", "forall", "exists", "count", "leaf"])
    if kind == "leaf":
        return random_formula(rng, 0, lang)
    if kind == "not":
        return Not(random_formula(rng, depth - 1, lang))
    if kind in ("and", "or", "implies", "iff"):
        cls = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
        return cls(random_formula(rng, depth - 1, lang), random_formula(rng, depth - 1, lang))
    if kind == "count":
        return Count(rng.choice(["<=", "=="]), rng.randrange(3), rng.randrange(6),
                     random_formula(rng, depth - 1, lang))
    cls = ForAll if kind == "forall" else Exists
    return cls(rng.randrange(6), random_formula(rng, depth - 1, lang))


class TestParser:
    def test_quantified_order_formula(self):
        phi = parse_formula("forall x. exists y. x < y", DLO)
        assert phi == ForAll(0, Exists(1, Atom("<", (Var(0), Var(1)))))

    def test_identity_atom(self):
        assert parse_formula("x = x", DLO) == Eq(Var(0), Var(0))

    def test_roundtrip_generated_corpus(self):
        rng = random.Random(7)
        for lang in (DLO, VEC, EQL):
            for _ in range(200):
                phi = random_formula(rng, rng.randrange(4), lang)
                text = render(phi)
                assert parse_formula(text, lang) == phi, text

    def test_syntax_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse_formula("forall x exists y. x < y", DLO)
        assert err.value.position > 0

    def test_unknown_symbol(self):
        with pytest.raises(ParseError):
            parse_formula("x < frob", DLO)

    def test_arity_mismatch(self):
        with pytest.raises(ParseError):
            parse_formula("+(x) = x", VEC)

    def test_vector_sum_parses_infix(self):
        phi = parse_formula("forall x. x + x = 0", VEC)
        assert phi == ForAll(0, Eq(Apply("+", (Var(0), Var(0))), Const("0")))

    def test_counting_quantifier(self):
        phi = parse_formula("exists<=2 x. x = @5", EQL)
        assert phi == Count("<=", 2, 0, Eq(Var(0), Param(5)))
        assert parse_formula(render(phi), EQL) == phi


class TestCoding:
    def test_injective_on_distinct_objects(self):
        a = godel_code(Eq(Var(0), Var(0)), EQL)
        b = godel_code(Eq(Var(1), Var(1)), EQL)
        assert a != b

    def test_decode_inverts_code_on_random_formulas(self):
        rng = random.Random(11)
        for lang in (DLO, VEC, EQL):
            seen = set()
            for _ in range(500):
                phi = random_formula(rng, rng.randrange(4), lang)
                code = godel_code(phi, lang)
                assert godel_decode(code, lang) == phi
                if phi in seen:
                    continue
                seen.add(phi)

    def test_subformula_codes_strictly_smaller(self):
        rng = random.Random(13)

        def subformulas(phi):
            yield phi
            for attr in ("body", "left", "right"):
                sub = getattr(phi, attr, None)
                if sub is not None and not isinstance(sub, (Var, Const, Apply, Param, HConst)):
                    yield from subformulas(sub)

        for _ in range(100):
            phi = random_formula(rng, 3, DLO)
            top = godel_code(phi, DLO)
            for sub in subformulas(phi):
                if sub is phi:
                    continue
                assert godel_code(sub, DLO) < top

    def test_subterm_codes_strictly_smaller(self):
        t = Apply("+", (Apply("+", (Var(0), Param(3))), Const("0")))
        outer = godel_code(t, VEC)
        assert godel_code(t.args[0], VEC) < outer
        assert godel_code(t.args[0].args[1], VEC) < godel_code(t.args[0], VEC)

    def test_decode_rejects_non_codes(self):
        for junk in (0, 1, 2, 3):
            with pytest.raises(NotACodeError):
                godel_decode(junk, DLO)
        rejected = 0
        for code in range(4, 4000):
            try:
                godel_decode(code, DLO)
            except NotACodeError:
                rejected += 1
        assert rejected > 0

    def test_sentence_list_roundtrip(self):
        sentences = [ForAll(0, Eq(Var(0), Var(0))), Exists(1, Atom("<", (Param(2), Var(1))))]
        code = godel_code(sentences, DLO)
        assert godel_decode(code, DLO) == sentences


class TestEnumeration:
    def test_budget_zero_is_empty(self):
        assert enumerate_sentences(DLO, 0) == []

    def test_first_element_is_least_coded_sentence(self):
        sentences = enumerate_sentences(DLO, 10_000)
        codes = [godel_code(s, DLO) for s in sentences]
        assert codes == sorted(codes)
        least = min(codes)
        # nothing below the least code decodes to a sentence
        for code in range(4, least):
            try:
                obj = godel_decode(code, DLO)
            except NotACodeError:
                continue
            assert isinstance(obj, (Var, Const, Apply, Param, HConst, list)) or free_vars(obj)

    def test_enumeration_to_ten_thousand_contains_reflexive_equality(self):
        target = parse_formula("forall x. x = x", DLO)
        assert godel_code(target, DLO) < 10_000
        assert target in enumerate_sentences(DLO, 10_000)

    def test_position_determined_by_code(self):
        sentences = enumerate_sentences(DLO, 10_000)
        target = parse_formula("forall x. x = x", DLO)
        code = godel_code(target, DLO)
        expected_index = len(enumerate_sentences(DLO, code))
        assert sentences[expected_index] == target

    def test_every_sentence_appears_exactly_once(self):
        sentences = enumerate_sentences(EQL, 10_000)
        assert len(sentences) == len(set(sentences))


class TestSubstitution:
    def test_free_substitution(self):
        phi = parse_formula("x < y", DLO)
        assert substitute(phi, {0: Param(9)}) == parse_formula("@9 < y", DLO)

    def test_bound_occurrence_unchanged(self):
        phi = parse_formula("exists x. x < y", DLO)
        assert substitute(phi, {0: Param(9)}) == phi

    def test_capture_renames_bound_variable(self):
        phi = parse_formula("exists y. x < y", DLO)
        out = substitute(phi, {0: Var(1)})
        assert isinstance(out, Exists)
        assert out.var != 1
        assert out.body == Atom("<", (Var(1), Var(out.var)))
        # against naive substitution on an alpha-converted input
        alpha = Exists(2, Atom("<", (Var(0), Var(2))))
        assert substitute(alpha, {0: Var(1)}) == Exists(2, Atom("<", (Var(1), Var(2))))

    def test_post_free_variable_identity(self):
        rng = random.Random(17)
        for _ in range(100):
            phi = random_formula(rng, 3, DLO)
            fv = free_vars(phi)
            if not fv:
                continue
            target = min(fv)
            out = substitute(phi, {target: Param(5)})
            assert free_vars(out) == fv - {target}

    def test_composition_matches_simultaneous(self):
        rng = random.Random(19)
        checked = 0
        while checked < 200:
            phi = random_formula(rng, 3, DLO)
            fv = free_vars(phi)
            if len(fv) < 2:
                continue
            x, y = sorted(fv)[:2]
            s, t = Param(rng.randrange(20)), Param(rng.randrange(20))
            sequential = substitute(substitute(phi, {x: s}), {y: t})
            simultaneous = substitute(phi, {x: s, y: t})
            assert sequential == simultaneous
            checked += 1


class TestCounting:
    def test_expansion_is_pure_first_order(self):
        phi = Count("==", 2, 0, Eq(Var(0), Var(0)))
        out = expand_counting(phi)

        def no_count(f):
            if isinstance(f, Count):
                return False
            for attr in ("body", "left", "right"):
                sub = getattr(f, attr, None)
                if sub is not None and hasattr(sub, "__dataclass_fields__") and not no_count(sub):
                    if not isinstance(sub, (Var, Const, Apply, Param, HConst)):
                        return False
            return True

        assert no_count(out)

    def test_expansion_preserves_free_variables(self):
        phi = Count("<=", 1, 0, Atom("<", (Var(0), Var(3))))
        assert free_vars(expand_counting(phi)) == {3}


class TestPairing:
    def test_pair_roundtrip(self):
        for a in range(30):
            for b in range(30):
                assert unpair(pair(a, b)) == (a, b)

    def test_tuple_code_roundtrip(self):
        rng = random.Random(23)
        for _ in range(200):
            items = tuple(rng.randrange(100) for _ in range(rng.randrange(6)))
            assert tuple_decode(tuple_code(items)) == items

    def test_tuple_code_dominates_entries(self):
        items = (5, 90, 3)
        code = tuple_code(items)
        assert all(code > item for item in items)
