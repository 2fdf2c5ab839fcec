"""Canonical digit expansions and the digit-level primitives built on them."""

from __future__ import annotations

import re

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import InvalidBaseError, UnsupportedBlockError

_SYMBOLS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _check_base(q: int) -> None:
    if not isinstance(q, int) or q < 2:
        raise InvalidBaseError(f"base must be an integer >= 2, got {q!r}")


@dataclass(frozen=True)
class Expansion:
    """Base-q digits of a nonnegative integer, most significant first.

    Zero is the empty digit tuple.
    """

    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        _check_base(self.base)
        if self.digits and self.digits[0] == 0:
            raise ValueError("canonical expansions have no leading zeros")
        if any(not 0 <= d < self.base for d in self.digits):
            raise ValueError(f"digits out of range for base {self.base}")

    @property
    def value(self) -> int:
        n = 0
        for d in self.digits:
            n = n * self.base + d
        return n

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        if not self.digits:
            return "0"
        if self.base <= len(_SYMBOLS):
            return "".join(_SYMBOLS[d] for d in self.digits)
        return ":".join(map(str, self.digits))


@dataclass(frozen=True)
class SignedExpansion:
    """Binary representation over the digit set {-1, 0, 1}, most significant first."""

    digits: tuple[int, ...]

    def __post_init__(self):
        if self.digits and self.digits[0] == 0:
            raise ValueError("leading digit must be nonzero")
        if any(d not in (-1, 0, 1) for d in self.digits):
            raise ValueError("signed digits must lie in {-1, 0, 1}")

    @property
    def value(self) -> int:
        n = 0
        for d in self.digits:
            n = 2 * n + d
        return n

    @property
    def weight(self) -> int:
        return sum(1 for d in self.digits if d)

    def is_nonadjacent(self) -> bool:
        return all(not (a and b) for a, b in zip(self.digits, self.digits[1:]))

    def __str__(self) -> str:
        if not self.digits:
            return "0"
        return "".join("T" if d < 0 else str(d) for d in self.digits)


def digit_list(n: int, q: int) -> list[int]:
    """Digits of ``n`` in base ``q``, most significant first (empty for 0)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if q == 2:
        return [int(c) for c in bin(n)[2:]] if n else []
    out = []
    while n:
        n, d = divmod(n, q)
        out.append(d)
    out.reverse()
    return out


def to_expansion(n: int, q: int) -> Expansion:
    _check_base(q)
    return Expansion(q, tuple(digit_list(n, q)))


def length(n: int, q: int) -> int:
    """Number of digits of the canonical expansion; 0 has length 0."""
    _check_base(q)
    ell = 0
    while n:
        n //= q
        ell += 1
    return ell


def parse_block(block: str | Sequence[int]) -> tuple[int, ...]:
    """Accept a digit block either as a string like ``"0101"`` or as a sequence of ints."""
    if isinstance(block, str):
        return tuple(_SYMBOLS.index(c) for c in block.lower())
    return tuple(int(d) for d in block)


def count_block(n: int, q: int, block: str | Sequence[int]) -> int:
    """Occurrences (overlapping) of ``block`` in the zero-padded base-q expansion of n.

    The expansion is padded with ``len(block) - 1`` zeros on both sides; more
    padding can only add all-zero windows, which never match a block that has a
    nonzero digit.
    """
    _check_base(q)
    b = parse_block(block)
    if not b or not any(b):
        raise UnsupportedBlockError("all-zero blocks have infinitely many padded occurrences")
    if any(not 0 <= d < q for d in b):
        raise UnsupportedBlockError(f"block {block!r} has digits outside base {q}")
    m = len(b)
    if q <= len(_SYMBOLS):
        pad = "0" * (m - 1)
        return len(_block_pattern("".join(_SYMBOLS[d] for d in b)).findall(pad + _digit_str(n, q) + pad))
    pad = [0] * (m - 1)
    s = pad + digit_list(n, q) + pad
    return sum(1 for i in range(len(s) - m + 1) if tuple(s[i:i + m]) == b)


@lru_cache(maxsize=64)
def _block_pattern(block: str) -> re.Pattern:
    return re.compile("(?=%s)" % re.escape(block))


def _digit_str(n: int, q: int) -> str:
    if n == 0:
        return ""
    if q == 2:
        return bin(n)[2:]
    if q == 10:
        return str(n)
    return "".join(_SYMBOLS[d] for d in digit_list(n, q))


def run_lengths(n: int) -> list[int]:
    """Lengths of the maximal runs of ones in the binary expansion, from the top."""
    return [len(run) for run in bin(n)[2:].split("0") if run] if n else []


def gray_weight(n: int) -> int:
    return bin(n ^ (n >> 1)).count("1")


def count_runs(n: int) -> int:
    """Number of maximal runs of either symbol in the binary expansion."""
    if n == 0:
        return 0
    s = bin(n)[2:]
    return 1 + sum(1 for a, b in zip(s, s[1:]) if a != b)


def naf(n: int) -> SignedExpansion:
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    while n:
        if n & 1:
            d = 2 - (n & 3)
            n -= d
        else:
            d = 0
        out.append(d)
        n >>= 1
    out.reverse()
    return SignedExpansion(tuple(out))


@lru_cache(maxsize=1 << 16)
def naf_weight(n: int) -> int:
    """Hamming weight of the NAF, computed from its defining recursions."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 0
    if n % 2 == 0:
        return naf_weight(n // 2)
    if n % 4 == 1:
        return naf_weight(n // 4) + 1
    return naf_weight((n + 1) // 4) + 1


def digit_sum(n: int, q: int) -> int:
    _check_base(q)
    if q == 2:
        return bin(n).count("1")
    s = 0
    while n:
        n, d = divmod(n, q)
        s += d
    return s


def from_digits(digits: Iterable[int], q: int) -> int:
    n = 0
    for d in digits:
        n = n * q + d
    return n
