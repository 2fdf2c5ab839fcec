"""Concrete digital functions and the builtin catalog used by the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .digits import count_block, digit_sum, gray_weight, naf_weight, run_lengths
from .errors import InputError, NotQuasiMultiplicativeError
from .quasi import ADDITIVE, MULTIPLICATIVE, QuasiSpec, verify_identity
from .regular import (
    FIXTURE_DIR,
    LinearRepresentation,
    Transducer,
    block_count_transducer,
    load_representation,
    naf_weight_transducer,
    transducer_to_rep,
)


class OptimalRepresentations:
    """Counts of optimal {0, 1, -1}-representations via five coupled sequences.

    ``u_vector(n)`` returns ``(u_1(n), ..., u_5(n))``; the count itself is the
    first entry. Each instance carries its own bounded memo table.
    """

    def __init__(self, cache_size: int = 1 << 17):
        self.u_vector = lru_cache(maxsize=cache_size)(self._u_vector)

    def _u_vector(self, n: int) -> tuple[int, int, int, int, int]:
        if n < 0:
            raise ValueError("n must be nonnegative")
        if n == 0:
            return (1, 1, 1, 1, 1)
        if n == 1:
            return (1, 1, 0, 0, 0)
        m, bit = divmod(n, 2)
        u1, u2, u3, u4, u5 = self.u_vector(m)
        if bit == 0:
            return (u1, u1, u2, u1, u4)
        w = self.u_vector(m + 1)
        return (u2 + w[3], u3, 0, w[4], 0)

    def __call__(self, n: int) -> int:
        return self.u_vector(n)[0]


_OPT = OptimalRepresentations()


def u_vector(n: int) -> tuple[int, int, int, int, int]:
    return _OPT.u_vector(n)


def optimal_rep_count(n: int) -> int:
    return _OPT(n)


def adjusted_gray(n: int) -> int:
    """Gray-code weight plus one for odd n: occurrences of 01 and 10 in the padded expansion."""
    return gray_weight(n) + (n & 1)


def _sequence_getter(s) -> Callable[[int], float]:
    if callable(s):
        return s
    if isinstance(s, Mapping):
        def get(i):
            try:
                return s[i]
            except KeyError:
                raise InputError(f"sequence has no entry for index {i}") from None
        return get
    if isinstance(s, Sequence):
        def get(i):
            if not 1 <= i <= len(s):
                raise InputError(f"sequence has no entry for index {i} (length {len(s)})")
            return s[i - 1]
        return get
    raise TypeError("sequence must be callable, a mapping, or a list indexed from 1")


def run_length_transform(s, n: int):
    """Product of ``s_i`` over the run lengths of ones in the binary expansion of n.

    ``s`` may be a callable ``i -> s_i``, a mapping, or a list holding
    ``s_1, s_2, ...`` at positions 0, 1, ...
    """
    get = _sequence_getter(s)
    out = 1
    for i in run_lengths(n):
        out *= get(i)
    return out


@lru_cache(maxsize=None)
def jacobsthal(n: int) -> int:
    if n < 1:
        raise ValueError("Jacobsthal index starts at 1")
    return (2 ** (n + 2) - (-1) ** n) // 3


def jacobsthal_rlt(n: int) -> int:
    out = 1
    for i in run_lengths(n):
        out *= jacobsthal(i)
    return out


def rlt_inverse(f: QuasiSpec, a_max: int = 32, k_max: int = 6) -> Callable[[int], object]:
    """Recover the sequence whose run length transform is f, as ``k -> f(2^k - 1)``."""
    if f.q != 2 or f.mode != MULTIPLICATIVE:
        raise NotQuasiMultiplicativeError("need a base-2 multiplicative function")
    bad = verify_identity(f, a_max, k_max, r=1)
    if bad is not None:
        raise NotQuasiMultiplicativeError(f"{f.name} is not 2-quasimultiplicative with r=1: {bad}")
    ev = f.eval

    @lru_cache(maxsize=None)
    def s(k: int):
        if k < 1:
            raise InputError("sequence index starts at 1")
        return ev(2 ** k - 1)

    return s


def pow_digit_sum(n: int) -> int:
    return 2 ** digit_sum(n, 2)


def transducer_exp_rep(T: Transducer, c) -> LinearRepresentation:
    """Representation of ``c ** (output sum)``: outputs become multiplicative weights."""
    c = Fraction(c)
    idx = {s: i for i, s in enumerate(T.states)}
    n = len(T.states)
    Ms = []
    for d in range(T.q):
        m = [[Fraction(0)] * n for _ in range(n)]
        for s in T.states:
            t, out = T.transitions[(s, d)]
            if Fraction(out).denominator != 1:
                raise InputError("exponentiated transducers need integer outputs")
            m[idx[s]][idx[t]] += c ** int(out)
        Ms.append(m)
    u = [Fraction(int(s == T.initial)) for s in T.states]
    v = []
    for s in T.states:
        if Fraction(T.final[s]).denominator != 1:
            raise InputError("exponentiated transducers need integer final outputs")
        v.append(c ** int(T.final[s]))
    return LinearRepresentation(T.q, tuple(u), tuple(Ms), tuple(v))


# -- catalog ---------------------------------------------------------------------

@dataclass(frozen=True)
class BuiltinDescriptor:
    name: str
    spec: QuasiSpec
    quasi: bool = True  # False for catalog entries kept only as non-examples
    description: str = ""


def _block_count(block: str, q: int = 2) -> BuiltinDescriptor:
    T = block_count_transducer([block], q)
    spec = QuasiSpec(
        f"block-count:{block}", q, len(block), ADDITIVE,
        lambda n, b=block, q=q: count_block(n, q, b),
        rep=transducer_to_rep(T),
    )
    return BuiltinDescriptor(spec.name, spec, True, f"occurrences of {block} in the padded base-{q} expansion")


def _naf_weight() -> BuiltinDescriptor:
    spec = QuasiSpec("naf-weight", 2, 2, ADDITIVE, naf_weight, rep=load_representation(FIXTURE_DIR / "hn_rep.json"))
    return BuiltinDescriptor(spec.name, spec, True, "Hamming weight of the non-adjacent form")


def _naf_exp() -> BuiltinDescriptor:
    spec = QuasiSpec("naf-exp", 2, 2, MULTIPLICATIVE, lambda n: 2 ** naf_weight(n),
                     rep=transducer_exp_rep(naf_weight_transducer(), 2))
    return BuiltinDescriptor(spec.name, spec, True, "2 to the power of the NAF weight")


def _adjusted_gray() -> BuiltinDescriptor:
    spec = QuasiSpec("adjusted-gray", 2, 1, ADDITIVE, adjusted_gray,
                     rep=transducer_to_rep(block_count_transducer(["01", "10"])))
    return BuiltinDescriptor(spec.name, spec, True, "occurrences of 01 and 10 in the padded binary expansion")


def _gray_runs() -> BuiltinDescriptor:
    spec = QuasiSpec("gray-runs", 2, 1, ADDITIVE, gray_weight)
    return BuiltinDescriptor(spec.name, spec, False, "number of runs / Gray-code weight (not quasiadditive)")


def _opt_reps() -> BuiltinDescriptor:
    spec = QuasiSpec("opt-reps", 2, 3, MULTIPLICATIVE, optimal_rep_count,
                     rep=load_representation(FIXTURE_DIR / "opt_reps.json"))
    return BuiltinDescriptor(spec.name, spec, True, "number of optimal {0,1,-1}-representations")


def _rlt_jacobsthal() -> BuiltinDescriptor:
    spec = QuasiSpec("rlt:jacobsthal", 2, 1, MULTIPLICATIVE, jacobsthal_rlt)
    return BuiltinDescriptor(spec.name, spec, True, "run length transform of the Jacobsthal numbers")


def _pow_digit_sum() -> BuiltinDescriptor:
    spec = QuasiSpec("pow-digit-sum", 2, 0, MULTIPLICATIVE, pow_digit_sum,
                     rep=load_representation(FIXTURE_DIR / "pow_digit_sum.json"))
    return BuiltinDescriptor(spec.name, spec, True, "2 to the power of the binary digit sum")


def _digit_sum() -> BuiltinDescriptor:
    spec = QuasiSpec("digit-sum", 2, 0, ADDITIVE, lambda n: digit_sum(n, 2))
    return BuiltinDescriptor(spec.name, spec, True, "binary sum of digits")


_FACTORIES = {
    "naf-weight": _naf_weight,
    "naf-exp": _naf_exp,
    "adjusted-gray": _adjusted_gray,
    "gray-runs": _gray_runs,
    "opt-reps": _opt_reps,
    "rlt:jacobsthal": _rlt_jacobsthal,
    "pow-digit-sum": _pow_digit_sum,
    "digit-sum": _digit_sum,
}

BUILTIN_NAMES = tuple(sorted(_FACTORIES)) + ("block-count:<digits>",)


@lru_cache(maxsize=None)
def builtin(name: str) -> BuiltinDescriptor:
    """Look up a catalog entry; ``block-count:<digits>`` takes any non-zero binary block."""
    if name.startswith("block-count:"):
        block = name.split(":", 1)[1]
        if not block or any(c not in "01" for c in block):
            raise InputError(f"block-count expects a binary block, got {block!r}")
        return _block_count(block)
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise InputError(f"unknown function {name!r}; known: {', '.join(BUILTIN_NAMES)}") from None


def get_spec(name: str) -> QuasiSpec:
    return builtin(name).spec


def catalog(include_non_quasi: bool = False) -> list[BuiltinDescriptor]:
    names = list(_FACTORIES) + ["block-count:0101"]
    out = [builtin(n) for n in names]
    return [d for d in out if d.quasi or include_non_quasi]


__all__ = [
    "OptimalRepresentations", "u_vector", "optimal_rep_count", "adjusted_gray",
    "run_length_transform", "jacobsthal", "jacobsthal_rlt", "rlt_inverse", "pow_digit_sum",
    "transducer_exp_rep", "BuiltinDescriptor", "builtin", "get_spec", "catalog", "BUILTIN_NAMES",
]
