"""Low-level numeric codes shared across the package.

Two codecs live here: a bit-stream codec (Elias gamma numbers inside a
prefix-free stream, used for syntax objects) and a Cantor-pairing codec
(used for tuple codes of relations and for register-machine programs).
"""

from __future__ import annotations


class NotACodeError(ValueError):
    """Raised when a number does not decode to a well-formed object."""


# ---------------------------------------------------------------------------
# bit streams


class BitWriter:
    """Accumulates bits most-significant first."""

    def __init__(self) -> None:
        self.acc = 0
        self.length = 0

    def write(self, bits: int, width: int) -> None:
        self.acc = (self.acc << width) | bits
        self.length += width

    def write_str(self, s: str) -> None:
        for ch in s:
            self.write(1 if ch == "1" else 0, 1)

    def gamma(self, n: int) -> None:
        """Elias gamma code of n >= 1."""
        if n < 1:
            raise ValueError("gamma requires n >= 1")
        width = n.bit_length()
        self.write(0, width - 1)
        self.write(n, width)

    def to_int(self) -> int:
        # Leading sentinel bit makes the empty stream and leading zeros
        # recoverable.
        return (1 << self.length) | self.acc


class BitReader:
    def __init__(self, code: int) -> None:
        if code < 1:
            raise NotACodeError("codes are positive")
        self.length = code.bit_length() - 1
        self.acc = code ^ (1 << self.length)
        self.pos = 0

    def take(self, width: int) -> int:
        if self.pos + width > self.length:
            raise NotACodeError("truncated bit stream")
        shift = self.length - self.pos - width
        self.pos += width
        return (self.acc >> shift) & ((1 << width) - 1)

    def gamma(self) -> int:
        zeros = 0
        while self.take(1) == 0:
            zeros += 1
            if zeros > self.length:
                raise NotACodeError("runaway gamma code")
        rest = self.take(zeros) if zeros else 0
        return (1 << zeros) | rest

    def exhausted(self) -> bool:
        return self.pos == self.length


# ---------------------------------------------------------------------------
# Cantor pairing


def pair(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    # s = floor((sqrt(8n+1)-1)/2), computed exactly with isqrt.
    from math import isqrt

    s = (isqrt(8 * n + 1) - 1) // 2
    b = n - s * (s + 1) // 2
    return s - b, b


def tuple_code(items: tuple[int, ...] | list[int]) -> int:
    """Injective code of an integer sequence; empty sequence codes to 0."""
    acc = 0
    for item in reversed(items):
        acc = pair(item, acc) + 1
    return acc


def tuple_decode(code: int) -> tuple[int, ...]:
    items = []
    guard = 0
    while code:
        head, code = unpair(code - 1)
        items.append(head)
        guard += 1
        if guard > 10_000_000:
            raise NotACodeError("runaway sequence code")
    return tuple(items)
