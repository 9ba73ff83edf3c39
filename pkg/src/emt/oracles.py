"""Set oracles, joins, stage-bounded jump approximation, and reduction
certificates.

Arithmetic degrees are never decided here.  A degree claim is represented by
a pair of :class:`ReductionCertificate` objects whose evaluators are checked
on prefixes with instrumented query-use bounds.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Callable

from .coding import pair, tuple_code, tuple_decode

__all__ = [
    "SetOracle",
    "QueryRecorder",
    "ReductionCertificate",
    "VerificationReport",
    "join",
    "left_projection",
    "right_projection",
    "jump_approx",
    "make_named_oracle",
    "encode_program",
    "decode_program",
    "run_program",
    "OracleSpecError",
    "enumerate_members",
]


class OracleSpecError(ValueError):
    pass


class SetOracle:
    """Total deterministic membership function on the naturals.

    Answers are memoized, so repeated queries agree by construction.  The
    jump tag is descriptive metadata and never feeds back into membership
    logic.
    """

    def __init__(
        self,
        name: str,
        member: Callable[[int], bool],
        jump_tag: int = 0,
        use_bound: Callable[[int], int] | None = None,
    ) -> None:
        self.name = name
        self._member = member
        self.jump_tag = jump_tag
        self.use_bound = use_bound
        self._cache: dict[int, bool] = {}

    def __call__(self, n: int) -> bool:
        if n < 0:
            return False
        hit = self._cache.get(n)
        if hit is None:
            hit = bool(self._member(n))
            self._cache[n] = hit
        return hit

    def instrumented(self) -> tuple["SetOracle", "QueryRecorder"]:
        """A recording view; the recorder sees every query, unmemoized."""
        recorder = QueryRecorder()
        return _InstrumentedView(self, recorder), recorder

    def __repr__(self) -> str:
        return f"SetOracle({self.name!r})"


class _InstrumentedView(SetOracle):
    def __init__(self, base: SetOracle, recorder: "QueryRecorder") -> None:
        self.name = base.name
        self.jump_tag = base.jump_tag
        self.use_bound = base.use_bound
        self._base = base
        self._recorder = recorder

    def __call__(self, n: int) -> bool:
        self._recorder.record(n)
        return self._base(n)


@dataclass
class QueryRecorder:
    count: int = 0
    max_index: int = -1

    def record(self, n: int) -> None:
        self.count += 1
        if n > self.max_index:
            self.max_index = n


def enumerate_members(oracle: SetOracle, count: int, stall_bound: int = 200_000) -> list[int]:
    """First `count` members in increasing order; raises if the scan stalls."""
    out: list[int] = []
    n = 0
    misses = 0
    while len(out) < count:
        if oracle(n):
            out.append(n)
            misses = 0
        else:
            misses += 1
            if misses > stall_bound:
                raise OracleSpecError(
                    f"oracle {oracle.name!r} yielded only {len(out)} members "
                    f"within a scan window of {stall_bound}"
                )
        n += 1
    return out


# ---------------------------------------------------------------------------
# joins


def join(x: SetOracle, y: SetOracle) -> SetOracle:
    """Effective join: even indices query x, odd indices query y."""

    def member(n: int) -> bool:
        if n % 2 == 0:
            return x(n // 2)
        return y(n // 2)

    return SetOracle(f"join({x.name},{y.name})", member, max(x.jump_tag, y.jump_tag))


def left_projection(j: SetOracle, name: str = "left") -> SetOracle:
    return SetOracle(name, lambda n: j(2 * n), j.jump_tag)


def right_projection(j: SetOracle, name: str = "right") -> SetOracle:
    return SetOracle(name, lambda n: j(2 * n + 1), j.jump_tag)


# ---------------------------------------------------------------------------
# register machine and jump approximation
#
# A program is a coded instruction list for a counter machine with an oracle
# query instruction.  Opcodes: 0 halt, 1 inc r, 2 dec r, 3 jz r addr,
# 4 jmp addr, 5 query (replaces R0 with oracle(R0) as 0/1).

HALT, INC, DEC, JZ, JMP, QUERY = range(6)


def encode_program(instructions: list[tuple[int, ...]]) -> int:
    codes = []
    for instr in instructions:
        op = instr[0]
        a = instr[1] if len(instr) > 1 else 0
        b = instr[2] if len(instr) > 2 else 0
        codes.append(pair(op, pair(a, b)))
    return tuple_code(codes)


def decode_program(e: int) -> list[tuple[int, int, int]] | None:
    """None when e is not a well-formed program (treated as divergent)."""
    try:
        codes = tuple_decode(e)
    except Exception:
        return None
    program = []
    from .coding import unpair

    for code in codes:
        op, rest = unpair(code)
        if op > QUERY:
            return None
        a, b = unpair(rest)
        program.append((op, a, b))
    return program


def run_program(e: int, argument: int, oracle: SetOracle, step_budget: int) -> bool:
    """True iff program e halts on `argument` within `step_budget` steps."""
    program = decode_program(e)
    if program is None or not program:
        return False
    registers: dict[int, int] = {0: argument}
    pc = 0
    for _ in range(step_budget):
        if pc >= len(program):
            return True
        op, a, b = program[pc]
        if op == HALT:
            return True
        if op == INC:
            registers[a] = registers.get(a, 0) + 1
            pc += 1
        elif op == DEC:
            registers[a] = max(0, registers.get(a, 0) - 1)
            pc += 1
        elif op == JZ:
            pc = b if registers.get(a, 0) == 0 else pc + 1
        elif op == JMP:
            pc = a
        elif op == QUERY:
            registers[0] = 1 if oracle(registers.get(0, 0)) else 0
            pc += 1
    return False


def jump_approx(x: SetOracle, step_budget: int) -> SetOracle:
    """Stage-bounded halting set relative to x.

    Membership is monotone in `step_budget` (halting within b steps implies
    halting within any larger budget).
    """
    if step_budget <= 0:
        raise ValueError("step_budget must be positive")

    def member(e: int) -> bool:
        return run_program(e, e, x, step_budget)

    return SetOracle(f"jump:{x.name}:{step_budget}", member, x.jump_tag + 1)


# ---------------------------------------------------------------------------
# reduction certificates


@dataclass
class ReductionCertificate:
    """Checkable witness that `source` is computable from `target` queries."""

    source: SetOracle
    target: SetOracle
    evaluator: Callable[[int, SetOracle], bool]
    jump_allowance: int = 0
    claim: str = ""

    def __post_init__(self) -> None:
        if not self.claim:
            self.claim = f"{self.source.name} <=ar {self.target.name}"


@dataclass
class VerificationReport:
    claim: str
    n_max: int
    ok: bool
    max_use: int
    first_disagreement: int | None = None
    disagreements: int = 0
    query_count: int = 0

    def to_json(self) -> str:
        payload = {
            "claim": self.claim,
            "n_max": self.n_max,
            "pass": self.ok,
            "max_use": self.max_use,
            "first_disagreement": self.first_disagreement,
            "disagreements": self.disagreements,
            "query_count": self.query_count,
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        payload = json.loads(text)
        return cls(
            claim=payload["claim"],
            n_max=payload["n_max"],
            ok=payload["pass"],
            max_use=payload["max_use"],
            first_disagreement=payload["first_disagreement"],
            disagreements=payload["disagreements"],
            query_count=payload["query_count"],
        )


def verify_reduction(cert: ReductionCertificate, n_max: int) -> VerificationReport:
    """Compare the evaluator with source membership for every n < n_max.

    The evaluator only receives an instrumented view of the target, so the
    recorded max use genuinely bounds its queries.
    """
    view, recorder = cert.target.instrumented()
    first = None
    disagreements = 0
    for n in range(n_max):
        claimed = bool(cert.evaluator(n, view))
        actual = cert.source(n)
        if claimed != actual:
            disagreements += 1
            if first is None:
                first = n
    return VerificationReport(
        claim=cert.claim,
        n_max=n_max,
        ok=disagreements == 0,
        max_use=recorder.max_index,
        first_disagreement=first,
        disagreements=disagreements,
        query_count=recorder.count,
    )


# ---------------------------------------------------------------------------
# named oracle specs


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _seeded_member(seed: int, n: int) -> bool:
    digest = hashlib.blake2b(f"{seed}:{n}".encode(), digest_size=1).digest()
    return bool(digest[0] & 1)


def make_named_oracle(spec: str) -> SetOracle:
    """Build an oracle from the spec mini-language.

    Generators: ``empty``, ``evens``, ``primes``, ``bits:<hex>`` (most
    significant bit is index 0; indices beyond the pattern are out),
    ``seeded:<u64>``, ``jump:<spec>:<budget>``.
    """
    if spec == "empty":
        return SetOracle("empty", lambda n: False)
    if spec == "evens":
        return SetOracle("evens", lambda n: n % 2 == 0)
    if spec == "primes":
        return SetOracle("primes", _is_prime)
    if spec.startswith("bits:"):
        hex_part = spec[len("bits:") :]
        try:
            value = int(hex_part, 16)
        except ValueError as err:
            raise OracleSpecError(f"bad hex pattern in {spec!r}") from err
        width = 4 * len(hex_part)
        bits = [(value >> (width - 1 - i)) & 1 == 1 for i in range(width)]
        return SetOracle(spec, lambda n: n < width and bits[n])
    if spec.startswith("seeded:"):
        try:
            seed = int(spec[len("seeded:") :])
        except ValueError as err:
            raise OracleSpecError(f"bad seed in {spec!r}") from err
        return SetOracle(spec, lambda n: _seeded_member(seed, n))
    if spec.startswith("jump:"):
        inner, _, budget_text = spec[len("jump:") :].rpartition(":")
        if not inner:
            raise OracleSpecError(f"jump spec needs an inner spec and budget: {spec!r}")
        try:
            budget = int(budget_text)
        except ValueError as err:
            raise OracleSpecError(f"bad budget in {spec!r}") from err
        return jump_approx(make_named_oracle(inner), budget)
    raise OracleSpecError(f"unknown oracle generator {spec!r}")
