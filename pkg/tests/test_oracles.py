import random

import pytest

from emt.oracles import (
    HALT,
    INC,
    JMP,
    JZ,
    QUERY,
    OracleSpecError,
    ReductionCertificate,
    SetOracle,
    VerificationReport,
    encode_program,
    enumerate_members,
    join,
    jump_approx,
    left_projection,
    make_named_oracle,
    right_projection,
    run_program,
    verify_reduction,
)

EMPTY = make_named_oracle("empty")
EVENS = make_named_oracle("evens")
ODDS = SetOracle("odds", lambda n: n % 2 == 1)
PRIMES = make_named_oracle("primes")


class TestJoin:
    def test_join_of_empty_is_empty(self):
        j = join(EMPTY, make_named_oracle("empty"))
        assert all(not j(k) for k in range(100))

    def test_definition_unfold(self):
        j = join(EVENS, ODDS)
        assert j(2 * 3) == EVENS(3)
        assert not j(6)  # 3 is odd, so 3 not in evens

    def test_projections_recover_inputs(self):
        j = join(EVENS, PRIMES)
        left = left_projection(j)
        right = right_projection(j)
        for n in range(256):
            assert left(n) == EVENS(n)
            assert right(n) == PRIMES(n)

    def test_jump_tag_is_max(self):
        high = SetOracle("x", lambda n: False, jump_tag=3)
        assert join(high, EVENS).jump_tag == 3


class TestJumpApprox:
    def test_immediate_halt_in_at_any_budget(self):
        e = encode_program([(HALT,)])
        for budget in (1, 10, 1000):
            assert jump_approx(EMPTY, budget)(e)

    def test_forever_loop_out_at_every_budget(self):
        e = encode_program([(JMP, 0)])
        for budget in (1, 100, 10_000):
            assert not jump_approx(EMPTY, budget)(e)

    def test_monotone_in_step_budget(self):
        small = jump_approx(EVENS, 1_000)
        large = jump_approx(EVENS, 10_000)
        for e in range(64):
            if small(e):
                assert large(e)

    def test_query_instruction_consults_oracle(self):
        # halts iff oracle(argument) is false: on true the program loops
        program = [(QUERY,), (JZ, 0, 3), (JMP, 2), (HALT,)]
        e = encode_program(program)
        assert run_program(e, 4, ODDS, 1000)  # 4 odd? no -> R0=0 -> halt
        assert not run_program(e, 3, ODDS, 1000)

    def test_jump_tag_increments(self):
        assert jump_approx(EVENS, 10).jump_tag == EVENS.jump_tag + 1

    def test_counting_costs_steps(self):
        # inc loop of length n halts only with enough budget
        program = [(INC, 1), (JMP, 0)]
        e = encode_program(program)
        assert not run_program(e, 0, EMPTY, 50)

    def test_rejects_nonpositive_budget(self):
        with pytest.raises(ValueError):
            jump_approx(EMPTY, 0)


class TestCertificates:
    def test_identity_certificate_passes(self):
        for oracle in (EVENS, PRIMES):
            cert = ReductionCertificate(oracle, oracle, lambda n, t: t(n))
            report = verify_reduction(cert, 256)
            assert report.ok
            assert report.max_use == 255

    def test_computable_source_needs_no_queries(self):
        cert = ReductionCertificate(EVENS, EMPTY, lambda n, t: n % 2 == 0)
        report = verify_reduction(cert, 256)
        assert report.ok
        assert report.max_use == -1
        assert report.query_count == 0

    def test_wrong_evaluator_fails_at_first_disagreement(self):
        # off-by-one: claims membership of n based on n+1
        cert = ReductionCertificate(EVENS, EVENS, lambda n, t: t(n + 1))
        report = verify_reduction(cert, 64)
        assert not report.ok
        assert report.first_disagreement == 0
        assert report.disagreements == 64

    def test_report_roundtrips_through_json(self):
        cert = ReductionCertificate(PRIMES, PRIMES, lambda n, t: t(n))
        report = verify_reduction(cert, 128)
        assert report.ok
        clone = VerificationReport.from_json(report.to_json())
        assert clone == report
        # and the certificate itself re-verifies
        again = verify_reduction(cert, 128)
        assert again.ok and again.max_use == clone.max_use


class TestNamedOracles:
    def test_evens(self):
        oracle = make_named_oracle("evens")
        assert oracle(4)
        assert not oracle(5)

    def test_bits_pattern_msb_first(self):
        oracle = make_named_oracle("bits:a0")
        members = [n for n in range(16) if oracle(n)]
        assert members == [0, 2]

    def test_seeded_identical_across_runs(self):
        first = make_named_oracle("seeded:7")
        second = make_named_oracle("seeded:7")
        assert [first(n) for n in range(512)] == [second(n) for n in range(512)]

    def test_jump_spec_nests(self):
        oracle = make_named_oracle("jump:evens:100")
        assert oracle.jump_tag == 1

    def test_unknown_generator(self):
        with pytest.raises(OracleSpecError):
            make_named_oracle("frobnicate")
        with pytest.raises(OracleSpecError):
            make_named_oracle("bits:zz")

    def test_enumerate_members_stall_detection(self):
        with pytest.raises(OracleSpecError):
            enumerate_members(make_named_oracle("bits:f"), 10, stall_bound=100)


class TestDeterminism:
    def test_repeated_queries_agree(self):
        calls = {"n": 0}

        def flaky(n: int) -> bool:
            calls["n"] += 1
            return (n + calls["n"]) % 2 == 0  # stateful on purpose

        oracle = SetOracle("flaky", flaky)
        rng = random.Random(3)
        queries = [rng.randrange(100) for _ in range(1000)]
        first = {q: oracle(q) for q in set(queries)}
        for q in queries:
            assert oracle(q) == first[q]

    def test_instrumented_view_records_max_use(self):
        view, recorder = PRIMES.instrumented()
        view(10)
        view(99)
        view(4)
        assert recorder.max_index == 99
        assert recorder.count == 3
