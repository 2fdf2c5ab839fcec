"""Quasiadditive / quasimultiplicative functions: checking, splitting, combining."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional

import numpy as np

from .digits import _check_base, digit_list, from_digits
from .errors import CompositionError, DomainError

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
MODES = (ADDITIVE, MULTIPLICATIVE)


@dataclass(frozen=True)
class QuasiSpec:
    """A digital function together with its base, parameter and mode.

    ``rep`` optionally carries a linear representation computing the same
    values (of ``f`` itself, also in multiplicative mode); enumeration-heavy
    routines use it to aggregate words with identical state.
    """

    name: str
    q: int
    r: int
    mode: str
    eval: Callable[[int], Any] = field(compare=False)
    rep: Optional[Any] = field(default=None, compare=False)

    def __post_init__(self):
        _check_base(self.q)
        if self.r < 0:
            raise ValueError("parameter r must be nonnegative")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    def __call__(self, n: int):
        return self.eval(n)

    @property
    def additive(self) -> bool:
        return self.mode == ADDITIVE

    def with_r(self, r: int) -> QuasiSpec:
        return replace(self, r=r)


@dataclass(frozen=True)
class Counterexample:
    a: int
    k: int
    b: int
    lhs: Any
    rhs: Any

    def __str__(self):
        return f"a={self.a} k={self.k} b={self.b}: f(q^(k+r)a+b)={self.lhs} != {self.rhs}"


def _close(x, y) -> bool:
    if isinstance(x, float) or isinstance(y, float):
        return math.isclose(x, y, rel_tol=1e-9, abs_tol=1e-9)
    return x == y


def verify_identity(f: QuasiSpec, a_max: int, k_max: int, r: int | None = None) -> Counterexample | None:
    """Check ``f(q^(k+r) a + b) == f(a) (+|*) f(b)`` over the window.

    Triples are visited in lexicographic (a, k, b) order and the first
    violation is returned; ``None`` means the window is clean.
    """
    q = f.q
    r = f.r if r is None else r
    combine = (lambda x, y: x + y) if f.additive else (lambda x, y: x * y)
    fb_cache = {}
    for a in range(a_max + 1):
        fa = f(a)
        for k in range(k_max + 1):
            shift = q ** (k + r) * a
            for b in range(q ** k):
                fb = fb_cache.get(b)
                if fb is None:
                    fb = fb_cache[b] = f(b)
                lhs = f(shift + b)
                rhs = combine(fa, fb)
                if not _close(lhs, rhs):
                    return Counterexample(a, k, b, lhs, rhs)
    return None


def monotone_parameter_check(f: QuasiSpec, s: int, a_max: int = 32, k_max: int = 6) -> Counterexample | None:
    """Re-run the identity check with a larger parameter ``s >= f.r``."""
    if s < f.r:
        raise ValueError("s must be at least the verified parameter r")
    return verify_identity(f, a_max, k_max, r=s)


def combine(f: QuasiSpec, g: QuasiSpec, alpha, beta, name: str | None = None) -> QuasiSpec:
    """Linear combination ``alpha*f + beta*g`` of two additive functions in the same base."""
    if not (f.additive and g.additive):
        raise CompositionError("linear combinations need two additive functions")
    if f.q != g.q:
        raise CompositionError(f"base mismatch: {f.q} vs {g.q}")
    alpha, beta = Fraction(alpha), Fraction(beta)
    ff, gg = f.eval, g.eval

    def h(n):
        return alpha * ff(n) + beta * gg(n)

    return QuasiSpec(name or f"{alpha}*{f.name}+{beta}*{g.name}", f.q, max(f.r, g.r), ADDITIVE, h)


def exp_log_bridge(f: QuasiSpec, c=2, name: str | None = None) -> QuasiSpec:
    """``c**f`` for additive f, ``log_c f`` for multiplicative f.

    Exactness is kept where possible: a rational ``c`` raised to an integer
    value stays rational, and ``log`` of an exact power of ``c`` comes back as
    an integer. Everything else is a float.
    """
    if isinstance(c, str):
        c = math.e if c == "e" else Fraction(c)
    if c <= 0:
        raise DomainError("bridge constant must be positive")
    ff = f.eval
    if f.additive:
        def g(n):
            x = ff(n)
            if isinstance(c, Fraction) and isinstance(x, (int, Fraction)) and Fraction(x).denominator == 1:
                return c ** int(x)
            return float(c) ** float(x)

        return QuasiSpec(name or f"{c}^{f.name}", f.q, f.r, MULTIPLICATIVE, g)

    if c == 1:
        raise DomainError("logarithm base must differ from 1")

    def g(n):
        x = ff(n)
        if x <= 0:
            raise DomainError(f"{f.name}({n}) = {x} is not positive")
        if isinstance(c, Fraction) and isinstance(x, (int, Fraction)):
            k = _exact_log(Fraction(x), c)
            if k is not None:
                return k
        return math.log(x) / math.log(c)

    return QuasiSpec(name or f"log_{c}({f.name})", f.q, f.r, ADDITIVE, g)


def _exact_log(x: Fraction, c: Fraction) -> int | None:
    if x == 1:
        return 0
    k = round(math.log(x) / math.log(c))
    if k and c ** k == x:
        return k
    return None


@dataclass(frozen=True)
class SplitResult:
    blocks: tuple[int, ...]
    reduced: tuple[int, ...]
    exponents: tuple[int, ...]


_SPLIT_CACHE: dict[int, re.Pattern] = {}


def _split_pattern(r: int) -> re.Pattern:
    pat = _SPLIT_CACHE.get(r)
    if pat is None:
        # shortest prefix ending in a maximal run of >= r zeros, else the rest
        pat = _SPLIT_CACHE[r] = re.compile(r".*?0{%d,}(?=[^0]|$)|.+" % r)
    return pat


def _digit_string(n: int, q: int) -> str:
    if q == 2:
        return bin(n)[2:]
    if q == 10:
        return str(n)
    if q <= 36:
        return np.base_repr(n, q)
    raise ValueError("string splitting supports bases up to 36")


def _strip_q(n: int, q: int) -> tuple[int, int]:
    e = 0
    while n % q == 0:
        n //= q
        e += 1
    return n, e


def split_blocks(n: int, q: int, r: int) -> SplitResult:
    """Break the expansion of n after every maximal run of at least r zeros.

    ``r == 0`` makes every nonzero digit, with the zeros that follow it, a
    block of its own.
    """
    _check_base(q)
    if n == 0:
        return SplitResult((), (), ())
    if q > 36:
        return _split_digits(n, q, r)
    s = _digit_string(n, q)
    if r == 0:
        pieces = re.findall(r"[^0]0*", s)
    else:
        pieces = _split_pattern(r).findall(s)
    blocks = tuple(int(p, q) for p in pieces)
    red = [_strip_q(b, q) for b in blocks]
    return SplitResult(blocks, tuple(m for m, _ in red), tuple(e for _, e in red))


def _split_digits(n: int, q: int, r: int) -> SplitResult:
    ds = digit_list(n, q)
    pieces, cur, zeros = [], [], 0
    for i, d in enumerate(ds):
        cur.append(d)
        zeros = zeros + 1 if d == 0 else 0
        nxt = ds[i + 1] if i + 1 < len(ds) else None
        if nxt is None or (nxt != 0 and (r == 0 or zeros >= r)):
            pieces.append(cur)
            cur, zeros = [], 0
    if cur:
        pieces.append(cur)
    blocks = tuple(from_digits(p, q) for p in pieces)
    red = [_strip_q(b, q) for b in blocks]
    return SplitResult(blocks, tuple(m for m, _ in red), tuple(e for _, e in red))


class SplitEvaluator:
    """Evaluate f as a sum/product over the reduced blocks of its expansion.

    Values of f on reduced blocks are memoized (keyed by digit string for
    bases up to 36); those blocks are the q-free representatives of every
    block that can occur.
    """

    def __init__(self, f: QuasiSpec):
        self.f = f
        self.memo: dict[int, Any] = {}

    def _value(self, m: int):
        v = self.memo.get(m)
        if v is None:
            v = self.memo[m] = self.f.eval(m)
        return v

    def _parts(self, n: int):
        q, r = self.f.q, self.f.r
        if n == 0:
            return []
        if q > 36:
            return split_blocks(n, q, r).reduced
        s = _digit_string(n, q)
        pieces = re.findall(r"[^0]0*", s) if r == 0 else _split_pattern(r).findall(s)
        # the reduced block is the piece with its trailing zeros removed
        return [p.rstrip("0") for p in pieces]

    def _value_str(self, key: str):
        v = self.memo.get(key)
        if v is None:
            v = self.memo[key] = self.f.eval(int(key, self.f.q))
        return v

    def __call__(self, n: int):
        parts = self._parts(n)
        value = self._value if self.f.q > 36 else self._value_str
        if self.f.additive:
            total = 0
            for m in parts:
                total += value(m)
            return total
        total = 1
        for m in parts:
            total *= value(m)
        return total


def eval_by_splitting(f: QuasiSpec, n: int, evaluator: SplitEvaluator | None = None):
    return (evaluator or SplitEvaluator(f))(n)


# -- B-set -----------------------------------------------------------------

@dataclass(frozen=True)
class BSetAutomaton:
    """DFA for the B-set words (either reading direction).

    State ``start`` has read nothing; states ``0..r-1`` count the current
    trailing zeros. For r = 0 the B-set is the single nonzero digits, and
    state 0 then has no outgoing transitions.
    """

    q: int
    r: int

    @property
    def n_states(self) -> int:
        return max(self.r, 1) + 1

    @property
    def start(self) -> int:
        return max(self.r, 1)

    @property
    def accepting(self) -> int:
        return 0

    def step(self, s: int, d: int) -> int | None:
        if s == self.start:
            return 0 if d else None
        if self.r == 0:
            return None
        if d:
            return 0
        return s + 1 if s + 1 < self.r else None

    def transition_matrices(self) -> list[list[list[int]]]:
        n = self.n_states
        out = []
        for d in range(self.q):
            P = [[0] * n for _ in range(n)]
            for s in range(n):
                t = self.step(s, d)
                if t is not None:
                    P[s][t] = 1
            out.append(P)
        return out

    def adjacency(self) -> np.ndarray:
        return np.array(self.transition_matrices(), dtype=float).sum(axis=0)

    def growth_rate(self) -> float:
        """Dominant eigenvalue of the counting matrix (B-set members grow like this per digit)."""
        eig = np.linalg.eigvals(self.adjacency())
        return float(max(abs(eig))) if len(eig) else 0.0

    def counts(self, max_len: int) -> list[int]:
        """Number of B-set members of each length 0..max_len (transfer-matrix count)."""
        state = [0] * self.n_states
        state[self.start] = 1
        out = [0]
        for _ in range(max_len):
            new = [0] * self.n_states
            for s, c in enumerate(state):
                if c:
                    for d in range(self.q):
                        t = self.step(s, d)
                        if t is not None:
                            new[t] += c
            state = new
            out.append(state[self.accepting])
        return out


def bset_words(q: int, r: int, max_len: int) -> Iterator[int]:
    """B-set members ordered by (length, value)."""
    _check_base(q)
    aut = BSetAutomaton(q, r)
    level = [(d, 0) for d in range(1, q)]  # (value, automaton state)
    for ell in range(1, max_len + 1):
        for n, s in level:
            if s == aut.accepting:
                yield n
        if ell == max_len:
            break
        nxt = []
        for n, s in level:
            for d in range(q):
                t = aut.step(s, d)
                if t is not None:
                    nxt.append((n * q + d, t))
        level = nxt


def enumerate_bset(q: int, r: int, max_len: int) -> list[int]:
    return list(bset_words(q, r, max_len))


def in_bset(n: int, q: int, r: int) -> bool:
    if n <= 0 or n % q == 0:
        return False
    if r == 0:
        return n < q
    ds = digit_list(n, q)
    run = 0
    for d in ds:
        run = run + 1 if d == 0 else 0
        if run >= r:
            return False
    return True
