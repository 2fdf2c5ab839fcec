"""Linear representations of q-regular sequences over exact rationals.

A representation ``(u, (M_0, ..., M_{q-1}), v)`` evaluates as

    f(n) = u^t M_{n_0} M_{n_1} ... M_{n_L} v

with ``n_0`` the least significant digit, which is the order forced by
``f_vec(q n + i) = M_i f_vec(n)``.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Hashable, Iterable, Sequence

from . import linalg as la
from .digits import _SYMBOLS, _check_base, parse_block
from .errors import (
    DisconnectedTransducerError,
    InputError,
    MinimizationConflictError,
    RepresentationNotCanonicalError,
    UnsupportedBlockError,
)


@dataclass(frozen=True)
class LinearRepresentation:
    q: int
    u: tuple
    M: tuple
    v: tuple

    def __post_init__(self):
        _check_base(self.q)
        u = tuple(la.vec(self.u))
        v = tuple(la.vec(self.v))
        M = tuple(tuple(tuple(r) for r in la.mat(m)) for m in self.M)
        d = len(u)
        if len(v) != d:
            raise InputError(f"u has length {d} but v has length {len(v)}")
        if len(M) != self.q:
            raise InputError(f"expected {self.q} digit matrices, got {len(M)}")
        for i, m in enumerate(M):
            if len(m) != d or any(len(row) != d for row in m):
                raise InputError(f"M_{i} is not {d}x{d}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "M", M)

    @property
    def dim(self) -> int:
        return len(self.u)

    def matrices(self) -> list[list[list[Fraction]]]:
        return [[list(r) for r in m] for m in self.M]

    def __call__(self, n: int) -> Fraction:
        return eval_rep(self, n)

    def row_after(self, n: int, digits: int | None = None) -> list[Fraction]:
        """``u^t`` multiplied by the digit matrices of n (optionally zero-padded to ``digits``)."""
        x = list(self.u)
        count = 0
        while n or (digits is not None and count < digits):
            n, d = divmod(n, self.q)
            x = la.vec_mat(x, self.M[d])
            count += 1
        return x

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "u": [la.fmt(x) for x in self.u],
            "M": [[[la.fmt(x) for x in row] for row in m] for m in self.M],
            "v": [la.fmt(x) for x in self.v],
        }

    @classmethod
    def from_json(cls, data: dict) -> LinearRepresentation:
        try:
            return cls(int(data["q"]), tuple(data["u"]), tuple(data["M"]), tuple(data["v"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed representation: {exc}") from exc


def eval_rep(R: LinearRepresentation, n: int) -> Fraction:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return la.dot(R.row_after(n), R.v)


def is_zero_insensitive(R: LinearRepresentation) -> bool:
    return la.mat_vec(R.M[0], R.v) == list(R.v)


def hadamard(R: LinearRepresentation, S: LinearRepresentation) -> LinearRepresentation:
    """Representation of the pointwise product, via Kronecker products."""
    if R.q != S.q:
        raise InputError("base mismatch")
    return LinearRepresentation(
        R.q,
        tuple(la.kron_vec(R.u, S.u)),
        tuple(la.kron(a, b) for a, b in zip(R.matrices(), S.matrices())),
        tuple(la.kron_vec(R.v, S.v)),
    )


def _closure(seeds: Iterable[Sequence], maps, dim: int) -> la.EchelonBasis:
    basis = la.EchelonBasis(dim)
    todo = deque(seeds)
    while todo:
        w = todo.popleft()
        if basis.add(w):
            for g in maps:
                todo.append(g(w))
    return basis


def _right_reduce(R: LinearRepresentation) -> LinearRepresentation:
    Ms = R.matrices()
    basis = _closure([R.v], [lambda w, m=m: la.mat_vec(m, w) for m in Ms], R.dim)
    B = basis.vectors
    k = len(B)
    newM = []
    for m in Ms:
        cols = [basis.coordinates(la.mat_vec(m, b)) for b in B]
        newM.append([[cols[j][i] for j in range(k)] for i in range(k)])
    u = [la.dot(R.u, b) for b in B]
    v = basis.coordinates(R.v) if k else []
    return LinearRepresentation(R.q, tuple(u), tuple(newM), tuple(v))


def _left_reduce(R: LinearRepresentation) -> LinearRepresentation:
    Ms = R.matrices()
    basis = _closure([R.u], [lambda w, m=m: la.vec_mat(w, m) for m in Ms], R.dim)
    A = basis.vectors
    newM = [[basis.coordinates(la.vec_mat(a, m)) for a in A] for m in Ms]
    u = basis.coordinates(R.u) if A else []
    v = [la.dot(a, R.v) for a in A]
    return LinearRepresentation(R.q, tuple(u), tuple(newM), tuple(v))


def minimize(R: LinearRepresentation) -> LinearRepresentation:
    """Minimal equivalent representation (reachable, then observable reduction).

    The first basis vectors are ``v`` and then ``u``, so a one-dimensional
    result has ``v = u = (1)`` whenever the sequence is not identically zero.
    """
    out = _left_reduce(_right_reduce(R))
    if is_zero_insensitive(R) and not is_zero_insensitive(out):
        raise MinimizationConflictError("minimization lost zero-insensitivity")
    return out


def _require_zero_insensitive(R: LinearRepresentation) -> None:
    if not is_zero_insensitive(R):
        raise RepresentationNotCanonicalError("representation is not zero-insensitive (M_0 v != v)")


@dataclass
class MultiplicativeReport:
    r: int
    holds: bool
    minimized: bool
    dim: int
    rank_M0_r: int

    def lines(self) -> list[str]:
        status = "PASS" if self.holds else "FAIL"
        return [
            f"representation dimension: {self.dim}{' (minimized)' if self.minimized else ''}",
            f"rank M_0^{self.r}: {self.rank_M0_r}",
            f"M_0^{self.r} == v u^t: {status}",
        ]


def check_quasimultiplicative(R: LinearRepresentation, r: int, minimal: bool = True) -> MultiplicativeReport:
    """Decide q-quasimultiplicativity with parameter r via ``M_0^r == v u^t``.

    The criterion is only valid for minimal zero-insensitive representations,
    so by default the representation is minimized first. ``minimal=False``
    runs the raw matrix test on R as given.
    """
    _require_zero_insensitive(R)
    S = minimize(R) if minimal else R
    _require_zero_insensitive(S)
    P = la.mat_pow(S.matrices()[0], r) if S.dim else []
    holds = P == la.outer(S.v, S.u)
    return MultiplicativeReport(r, holds, minimal, S.dim, la.rank(P) if P else 0)


def find_quasimultiplicative_parameter(R: LinearRepresentation) -> int | None:
    """Smallest r in 0..dim with ``M_0^r == v u^t`` on the minimized representation."""
    S = minimize(R)
    _require_zero_insensitive(S)
    M0 = S.matrices()[0]
    target = la.outer(S.v, S.u)
    P = la.identity(S.dim)
    for r in range(S.dim + 1):
        if P == target:
            return r
        P = la.mat_mul(P, M0)
    return None


@dataclass
class AffineClosure:
    side: str
    base: list
    basis: list
    matrices: list = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _image(self, w, m):
        return la.vec_mat(w, m) if self.side == "left" else la.mat_vec(m, w)

    def contains_point(self, p: Sequence) -> bool:
        span = la.span_basis(self.basis, len(self.base))
        return span.contains(la.vsub(p, self.base))

    def is_stable(self) -> bool:
        """Every digit matrix maps base + span(basis) into itself."""
        span = la.span_basis(self.basis, len(self.base))
        for m in self.matrices:
            if not span.contains(la.vsub(self._image(self.base, m), self.base)):
                return False
            for b in self.basis:
                if not span.contains(self._image(b, m)):
                    return False
        return True


def affine_closure(R: LinearRepresentation, side: str) -> AffineClosure:
    """Smallest U (side="left") or V (side="right") of the affine-closure construction.

    Left: all ``u^t prod M`` lie in ``u^t + U^t``. Right: all ``prod M v`` lie
    in ``v + V``. Seeds are the one-digit differences; the span is then closed
    under the digit matrices.
    """
    Ms = R.matrices()
    if side == "left":
        base = list(R.u)
        seeds = [la.vsub(la.vec_mat(base, m), base) for m in Ms]
        maps = [lambda w, m=m: la.vec_mat(w, m) for m in Ms]
    elif side == "right":
        base = list(R.v)
        seeds = [la.vsub(la.mat_vec(m, base), base) for m in Ms]
        maps = [lambda w, m=m: la.mat_vec(m, w) for m in Ms]
    else:
        raise ValueError("side must be 'left' or 'right'")
    basis = _closure(seeds, maps, R.dim)
    return AffineClosure(side, base, basis.vectors, Ms)


@dataclass
class AdditiveReport:
    r: int
    conditions: dict
    dim_U: int
    dim_V: int

    @property
    def holds(self) -> bool:
        return all(self.conditions.values())

    @property
    def failing(self) -> list[str]:
        return [k for k, ok in self.conditions.items() if not ok]

    def lines(self) -> list[str]:
        out = [f"dim U = {self.dim_U}, dim V = {self.dim_V}"]
        for k, ok in self.conditions.items():
            out.append(f"{k}: {'PASS' if ok else 'FAIL'}")
        return out


def check_quasiadditive(R: LinearRepresentation, r: int) -> AdditiveReport:
    """The four matrix conditions for q-quasiadditivity with parameter r."""
    _require_zero_insensitive(R)
    U = affine_closure(R, "left")
    V = affine_closure(R, "right")
    d = R.dim
    P = la.mat_pow(R.matrices()[0], r) if d else []
    PmI = la.sub(P, la.identity(d)) if d else []
    right_vec = la.mat_vec(PmI, R.v) if d else []
    left_vec = la.vec_mat(R.u, PmI) if d else []
    conditions = {
        "u^t v = 0": la.dot(R.u, R.v) == 0,
        "U orthogonal to (M_0^r - I) v": all(la.dot(x, right_vec) == 0 for x in U.basis),
        "V orthogonal to u^t (M_0^r - I)": all(la.dot(left_vec, y) == 0 for y in V.basis),
        "U^t M_0^r V = 0": all(la.dot(la.vec_mat(x, P), y) == 0 for x in U.basis for y in V.basis),
    }
    return AdditiveReport(r, conditions, U.dim, V.dim)


# -- transducers -------------------------------------------------------------

@dataclass(frozen=True)
class Transducer:
    """Deterministic complete transducer reading base-q digits least significant first."""

    q: int
    states: tuple
    initial: Hashable
    transitions: dict = field(hash=False)  # (state, digit) -> (next, output)
    final: dict = field(hash=False)  # state -> output

    def __post_init__(self):
        _check_base(self.q)
        if self.initial not in self.states:
            raise InputError("initial state is not a state")
        for s in self.states:
            if s not in self.final:
                raise InputError(f"state {s!r} has no final output")
            for d in range(self.q):
                if (s, d) not in self.transitions:
                    raise InputError(f"missing transition from {s!r} on digit {d}")
                t, _ = self.transitions[(s, d)]
                if t not in self.states:
                    raise InputError(f"transition into unknown state {t!r}")

    def step(self, s, d):
        return self.transitions[(s, d)]

    def reachable(self) -> set:
        seen = {self.initial}
        todo = [self.initial]
        while todo:
            s = todo.pop()
            for d in range(self.q):
                t = self.transitions[(s, d)][0]
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return seen

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "states": list(self.states),
            "initial": self.initial,
            "transitions": [[s, d, t, la.fmt(o)] for (s, d), (t, o) in sorted(self.transitions.items(), key=str)],
            "final": [[s, la.fmt(o)] for s, o in self.final.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> Transducer:
        try:
            key = lambda s: tuple(s) if isinstance(s, list) else s  # noqa: E731
            trans = {(key(s), int(d)): (key(t), la.frac(o)) for s, d, t, o in data["transitions"]}
            final = {key(s): la.frac(o) for s, o in data["final"]}
            states = tuple(key(s) for s in data["states"])
            return cls(int(data["q"]), states, key(data["initial"]), trans, final)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed transducer: {exc}") from exc


def transducer_eval(T: Transducer, n: int) -> Fraction:
    s = T.initial
    total = Fraction(0)
    while n:
        n, d = divmod(n, T.q)
        s, out = T.transitions[(s, d)]
        total += out
    return total + T.final[s]


@dataclass
class TransducerReport:
    r: int
    conditions: dict

    @property
    def holds(self) -> bool:
        return all(self.conditions.values())

    def lines(self) -> list[str]:
        return [f"{k}: {'PASS' if ok else 'FAIL'}" for k, ok in self.conditions.items()]


def check_transducer_conditions(T: Transducer, r: int) -> TransducerReport:
    """Sufficient conditions for the output sum to be quasiadditive with parameter r."""
    if T.reachable() != set(T.states):
        raise DisconnectedTransducerError("some states are unreachable from the initial state")
    reset = True
    reset_output = True
    for s in T.states:
        state, total = s, Fraction(0)
        for _ in range(r):
            state, out = T.transitions[(state, 0)]
            total += out
        reset &= state == T.initial
        reset_output &= total == T.final[s]
    trailing = all(
        T.transitions[(s, 0)][1] + T.final[T.transitions[(s, 0)][0]] == T.final[s] for s in T.states
    )
    return TransducerReport(r, {
        f"0^{r} resets to the initial state": reset,
        f"output along 0^{r} equals final output": reset_output,
        "trailing zeros leave the output sum unchanged": trailing,
    })


def transducer_to_rep(T: Transducer) -> LinearRepresentation:
    """Linear representation of the output sum.

    Coordinates are the output sums started in each state, plus a constant 1.
    Zero-insensitive exactly when trailing zeros do not change output sums.
    """
    idx = {s: i for i, s in enumerate(T.states)}
    n = len(T.states)
    Ms = []
    for d in range(T.q):
        m = la.zeros(n + 1)
        for s in T.states:
            t, out = T.transitions[(s, d)]
            m[idx[s]][idx[t]] += 1
            m[idx[s]][n] += out
        m[n][n] = Fraction(1)
        Ms.append(m)
    u = [Fraction(0)] * (n + 1)
    u[idx[T.initial]] = Fraction(1)
    v = [T.final[s] for s in T.states] + [Fraction(1)]
    return LinearRepresentation(T.q, tuple(u), tuple(Ms), tuple(v))


def block_count_transducer(blocks: Sequence, q: int = 2) -> Transducer:
    """Transducer counting occurrences of the given blocks in the zero-padded expansion.

    States are the last ``m - 1`` digits read (most recent first), m being
    the longest block; reading starts from an all-zero window, which accounts
    for the padding on the least significant side.
    """
    _check_base(q)
    pats = [parse_block(b) for b in blocks]
    if not pats or any(not p or not any(p) for p in pats):
        raise UnsupportedBlockError("blocks must be nonempty and not all-zero")
    m = max(len(p) for p in pats)
    w = m - 1

    def matches(top: int, window: tuple) -> int:
        # digits from the newest (most significant) downwards
        seq = (top,) + window
        return sum(1 for p in pats if seq[: len(p)] == p)

    states = [tuple(s) for s in itertools.product(range(q), repeat=w)]
    trans = {}
    for s in states:
        for d in range(q):
            trans[(s, d)] = ((d,) + s[:-1] if w else (), Fraction(matches(d, s)))
    final = {}
    for s in states:
        state, total = s, Fraction(0)
        for _ in range(w):
            state, out = trans[(state, 0)]
            total += out
        final[s] = total
    label = {s: "w" + "".join(_SYMBOLS[d] for d in s) for s in states}
    return Transducer(
        q,
        tuple(label[s] for s in states),
        label[(0,) * w],
        {(label[s], d): (label[t], o) for (s, d), (t, o) in trans.items()},
        {label[s]: o for s, o in final.items()},
    )


def naf_weight_transducer() -> Transducer:
    """NAF Hamming weight as an output sum.

    State "c0"/"c1" means the unread part still has carry 0/1 added; "odd"
    means a nonzero NAF digit was just emitted and the next bit only decides
    the carry.
    """
    one, zero = Fraction(1), Fraction(0)
    trans = {
        ("c0", 0): ("c0", zero),
        ("c0", 1): ("odd", one),
        ("c1", 0): ("odd", one),
        ("c1", 1): ("c1", zero),
        ("odd", 0): ("c0", zero),
        ("odd", 1): ("c1", zero),
    }
    final = {"c0": zero, "c1": one, "odd": zero}
    return Transducer(2, ("c0", "c1", "odd"), "c0", trans, final)


# -- file formats ---------------------------------------------------------------

FIXTURE_DIR = Path(__file__).with_name("fixtures")


def resolve_fixture(path: str | Path) -> Path:
    """Return ``path`` if it exists, else the bundled fixture with the same file name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = FIXTURE_DIR / p.name
    if bundled.exists():
        return bundled
    raise InputError(f"fixture file not found: {path}")


def _read_json(path) -> Any:
    p = resolve_fixture(path)
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: invalid JSON ({exc})") from exc


def load_representation(path) -> LinearRepresentation:
    return LinearRepresentation.from_json(_read_json(path))


def load_transducer(path) -> Transducer:
    return Transducer.from_json(_read_json(path))


def dumps(obj) -> str:
    """JSON text with one top-level key per line and compact values."""
    data = obj.to_json()
    lines = []
    for k, val in data.items():
        if isinstance(val, list) and val and isinstance(val[0], list):
            inner = ",\n  ".join(json.dumps(x) for x in val)
            lines.append(f' "{k}": [\n  {inner}\n ]')
        else:
            lines.append(f' "{k}": {json.dumps(val)}')
    return "{\n" + ",\n".join(lines) + "\n}\n"


def save_json(obj, path) -> None:
    Path(path).write_text(dumps(obj))
