"""Generating-function layer and central-limit constants.

Moments of the B-set series are computed three ways: exactly (for additive
functions with a linear representation), by truncated enumeration with a
fitted geometric tail, and implicitly through the dominant root of
``x + x^r B(x, t) = 1``. Exhaustive experiments give finite-k diagnostics.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import linalg as la
from .errors import ConvergenceError, DomainError, InputError, SpectralRadiusError
from .quasi import BSetAutomaton, QuasiSpec, bset_words, exp_log_bridge
from .regular import LinearRepresentation, hadamard, is_zero_insensitive, minimize

Number = Any  # int | Fraction | float


class GrowthConditionWarning(UserWarning):
    """A sequence violates the growth hypothesis behind the CLT constants."""


@dataclass(frozen=True)
class MomentSums:
    bt: Number
    btt: Number
    btx: Number
    provenance: str
    tail_params: dict | None = None

    @property
    def exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in (self.bt, self.btt, self.btx))


# -- value spectra ---------------------------------------------------------------

def _int_or_frac(x: Fraction):
    return x.numerator if x.denominator == 1 else x


def _numeric_rep(R: LinearRepresentation):
    """u, column lists of each M_d, and v; integers where every entry allows it."""
    entries = list(R.u) + list(R.v) + [x for m in R.M for row in m for x in row]
    conv = _int_or_frac if all(x.denominator == 1 for x in entries) else (lambda x: x)
    u = tuple(conv(x) for x in R.u)
    v = tuple(conv(x) for x in R.v)
    cols = [tuple(tuple(conv(x) for x in col) for col in zip(*m)) for m in R.M]
    return u, cols, v


def _row_times(x, cols):
    return tuple(sum(a * b for a, b in zip(x, col) if a) for col in cols)


def _bset_spectrum_rep(R: LinearRepresentation, r: int, L: int) -> list[Counter]:
    q = R.q
    aut = BSetAutomaton(q, r)
    u, cols, v = _numeric_rep(R)
    level: Counter = Counter()
    for d in range(1, q):
        level[(aut.step(aut.start, d), _row_times(u, cols[d]))] += 1
    out = []
    for ell in range(1, L + 1):
        spec: Counter = Counter()
        for (s, x), c in level.items():
            if s == aut.accepting:
                spec[_int_or_frac(Fraction(sum(a * b for a, b in zip(x, v))))] += c
        out.append(spec)
        if ell == L:
            break
        nxt: Counter = Counter()
        cache: dict = {}
        for (s, x), c in level.items():
            for d in range(q):
                t = aut.step(s, d)
                if t is None:
                    continue
                key = (x, d)
                y = cache.get(key)
                if y is None:
                    y = cache[key] = _row_times(x, cols[d])
                nxt[(t, y)] += c
        level = nxt
    return out


def _bset_spectrum_brute(f: QuasiSpec, L: int) -> list[Counter]:
    out = [Counter() for _ in range(L)]
    q = f.q
    for n in bset_words(q, f.r, L):
        ell = len(np.base_repr(n, q)) if q <= 36 else _length(n, q)
        out[ell - 1][f.eval(n)] += 1
    return out


def _length(n: int, q: int) -> int:
    ell = 0
    while n:
        n //= q
        ell += 1
    return ell


def bset_value_spectrum(f: QuasiSpec, L: int) -> list[Counter]:
    """For each length 1..L, the multiset of values f(n) over B-set members of that length.

    With a representation attached, words with equal automaton state and
    equal row vector are merged, so the cost follows the number of distinct
    states rather than the number of B-set members.
    """
    if L < 1:
        raise InputError("truncation length must be positive")
    if f.rep is not None and f.rep.q == f.q:
        return _bset_spectrum_rep(f.rep, f.r, L)
    return _bset_spectrum_brute(f, L)


def _lam(value, additive: bool):
    if additive:
        return value
    if value <= 0:
        raise DomainError(f"value {value} is not positive; its logarithm is undefined")
    return 0.0 if value == 1 else math.log(value)


def _spectrum_lambdas(spectrum: list[Counter], additive: bool) -> list[list[tuple[Number, int]]]:
    return [[(_lam(v, additive), c) for v, c in sorted(level.items())] for level in spectrum]


def _power_sum(pairs, j: int):
    vals = [c * lam ** j for lam, c in pairs]
    if any(isinstance(x, float) for x in vals):
        return math.fsum(vals)
    return sum(vals, 0)


# -- tails -----------------------------------------------------------------------

def _eulerian(k: int, i: int) -> int:
    return sum((-1) ** m * math.comb(k + 1, m) * (i + 1 - m) ** k for m in range(i + 1))


def polylog_neg(k: int, z: float) -> float:
    """``sum_{m >= 1} m^k z^m`` for |z| < 1, via Eulerian numbers."""
    if not abs(z) < 1:
        raise ConvergenceError(f"polylog series diverges at z={z}")
    if k == 0:
        return z / (1 - z)
    num = sum(_eulerian(k, i) * z ** (i + 1) for i in range(k))
    return num / (1 - z) ** (k + 1)


def _geometric_poly_tail(coeffs: Sequence[float], z: float, L: int) -> float:
    """``sum_{l > L} P(l - L) z^l`` with ``P(m) = sum_k coeffs[k] m^k``."""
    if z == 0:
        return 0.0
    return z ** L * math.fsum(c * polylog_neg(k, z) for k, c in enumerate(coeffs))


def _poly_times_shift(coeffs: Sequence[float], L: int) -> list[float]:
    """Coefficients of ``(m + L) P(m)``."""
    out = [0.0] * (len(coeffs) + 1)
    for k, c in enumerate(coeffs):
        out[k] += L * c
        out[k + 1] += c
    return out


def _fit_tail(values: Sequence[float], z: float, L: int, deg: int, window: int) -> list[float]:
    """Fit ``values[l-1] ~ P(l - L) z^l`` on the last ``window`` lengths; coefficients low-first."""
    ls = np.arange(L - window + 1, L + 1)
    y = np.array([float(values[l - 1]) for l in ls]) / np.power(z, ls.astype(float))
    deg = min(deg, window - 1)
    return [float(c) for c in np.polynomial.polynomial.polyfit(ls - L, y, deg)]


# -- moment sums -----------------------------------------------------------------

def truncated_moments(
    f: QuasiSpec,
    L: int,
    tail: bool = True,
    window: int = 6,
    spectrum: list[Counter] | None = None,
) -> MomentSums:
    """Partial B-set sums up to length L, optionally completed by a fitted tail.

    Per-length contributions ``a_l = q^-l sum lambda^j`` are modelled as
    ``P_j(l) gamma^l`` with ``deg P_j = j`` and ``gamma`` the B-set growth
    rate over q; the polynomials are fitted on the last ``window`` lengths.
    """
    q = f.q
    spectrum = spectrum if spectrum is not None else bset_value_spectrum(f, L)
    L = len(spectrum)
    lams = _spectrum_lambdas(spectrum, f.additive)
    m1 = [_power_sum(p, 1) for p in lams]
    m2 = [_power_sum(p, 2) for p in lams]
    exact = not any(isinstance(x, float) for x in m1 + m2)
    w = [Fraction(1, q ** l) for l in range(1, L + 1)]
    if exact:
        bt = sum((a * b for a, b in zip(w, m1)), Fraction(0))
        btt = sum((a * b for a, b in zip(w, m2)), Fraction(0))
        btx = sum((q * l * a * b for l, (a, b) in enumerate(zip(w, m1), 1)), Fraction(0))
    else:
        bt = math.fsum(float(a) * b for a, b in zip(w, m1))
        btt = math.fsum(float(a) * b for a, b in zip(w, m2))
        btx = math.fsum(q * l * float(a) * b for l, (a, b) in enumerate(zip(w, m1), 1))
    growth = BSetAutomaton(q, f.r).growth_rate()
    if not tail or growth == 0 or L < window:
        prov = f"truncated(L={L}, tail=off)"
        return MomentSums(bt, btt, btx, prov, None)
    gamma = growth / q
    a1 = [float(a) * float(b) for a, b in zip(w, m1)]
    a2 = [float(a) * float(b) for a, b in zip(w, m2)]
    c1 = _fit_tail(a1, gamma, L, 1, window)
    c2 = _fit_tail(a2, gamma, L, 2, window)
    t1 = _geometric_poly_tail(c1, gamma, L)
    t2 = _geometric_poly_tail(c2, gamma, L)
    tx = q * _geometric_poly_tail(_poly_times_shift(c1, L), gamma, L)
    params = {
        "model": "a_l = P(l - L) * gamma^l",
        "gamma": gamma,
        "window": [L - window + 1, L],
        "bt_coeffs": c1,
        "btt_coeffs": c2,
        "tail_bt": t1,
        "tail_btt": t2,
        "tail_btx": tx,
    }
    return MomentSums(float(bt) + t1, float(btt) + t2, float(btx) + tx, f"truncated(L={L}, tail=on)", params)


def _tensor_with_bset(R: LinearRepresentation, r: int) -> LinearRepresentation:
    aut = BSetAutomaton(R.q, r)
    P = aut.transition_matrices()
    Ms = [la.kron(la.mat(P[d]), R.M[d]) for d in range(R.q)]
    e_start = [int(i == aut.start) for i in range(aut.n_states)]
    e_acc = [int(i == aut.accepting) for i in range(aut.n_states)]
    return LinearRepresentation(R.q, la.kron_vec(la.vec(e_start), R.u), Ms, la.kron_vec(la.vec(e_acc), R.v))


def _resolvent_sums(W: LinearRepresentation) -> tuple[Fraction, Fraction]:
    """``sum_l q^-l a T^l b`` and ``sum_l l q^(1-l) a T^l b`` for T the digit-matrix sum."""
    q = W.q
    n = W.dim
    if n == 0:
        return Fraction(0), Fraction(0)
    T = W.M[0]
    for m in W.M[1:]:
        T = la.add(T, m)
    Y = la.scale(Fraction(1, q), T)
    radius = max(abs(np.linalg.eigvals(np.array(Y, dtype=float)))) if n else 0.0
    if radius >= 1:
        raise SpectralRadiusError(f"spectral radius of T/q is {radius:.6g} >= 1; the series diverges at x = 1/q")
    A = la.sub(la.identity(n), Y)
    try:
        x1 = la.solve(A, W.v)
        x2 = la.solve(A, x1)
    except ZeroDivisionError:
        raise SpectralRadiusError("I - T/q is singular") from None
    first = la.dot(W.u, x1) - la.dot(W.u, W.v)
    deriv = q * la.dot(W.u, la.mat_vec(Y, x2))
    return first, deriv


def exact_moments(R: LinearRepresentation, r: int, q: int | None = None) -> MomentSums:
    """Exact B-set moment sums of an additive function given by R.

    The B-set recognizer is tensored with R (and with the minimized
    Hadamard square of R for the second moment); the sums over all lengths
    are resolvents of the tensored transfer operator at x = 1/q.
    """
    if q is not None and q != R.q:
        raise InputError(f"base mismatch: representation has q={R.q}, got {q}")
    R = minimize(R)
    W1 = minimize(_tensor_with_bset(R, r))
    bt, btx = _resolvent_sums(W1)
    R2 = minimize(hadamard(R, R))
    W2 = minimize(_tensor_with_bset(R2, r))
    btt, _ = _resolvent_sums(W2)
    return MomentSums(_int_or_frac(bt), _int_or_frac(btt), _int_or_frac(btx), "exact-rational", None)


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def mean_constant(m: MomentSums, q: int, r: int):
    if _exact(m.bt):
        return _int_or_frac(Fraction(m.bt) / Fraction(q) ** (2 * r))
    return m.bt / q ** (2 * r)


def variance_constant(m: MomentSums, q: int, r: int):
    """Six-term variance constant from the three moment sums."""
    if m.exact:
        Q = Fraction(q)
        bt, btt, btx = Fraction(m.bt), Fraction(m.btt), Fraction(m.btx)
    else:
        Q = float(q)
        bt, btt, btx = float(m.bt), float(m.btt), float(m.btx)
    s = (
        -bt ** 2 * Q ** (-4 * r + 1) / (Q - 1)
        + 2 * bt ** 2 * Q ** (-3 * r + 1) / (Q - 1)
        - bt ** 2 * Q ** (-4 * r) / (Q - 1)
        - 4 * r * bt ** 2 * Q ** (-4 * r)
        + btt * Q ** (-2 * r)
        - 2 * bt * btx * Q ** (-4 * r - 1)
    )
    return _int_or_frac(s) if m.exact else s


def constants(m: MomentSums, q: int, r: int) -> tuple[Number, Number]:
    return mean_constant(m, q, r), variance_constant(m, q, r)


# -- run length transforms -------------------------------------------------------

def rlt_constants(s, I: int = 200) -> tuple[float, float]:
    """Mean and variance constants of ``log`` of a run length transform.

    ``s`` is a callable ``i -> s_i`` or a list holding ``s_1, s_2, ...``.
    """
    get = s if callable(s) else (lambda i: s[i - 1])
    logs = []
    for i in range(1, I + 1):
        si = get(i)
        if si < 1:
            warnings.warn(f"s_{i} = {si} < 1 violates the growth condition", GrowthConditionWarning, stacklevel=2)
        logs.append(math.log(si))
    mu = math.fsum(x * 2.0 ** (-i - 2) for i, x in enumerate(logs, 1))
    diag = math.fsum(x * x * (2.0 ** (-i - 2) - (2 * i - 1) * 2.0 ** (-2 * i - 4)) for i, x in enumerate(logs, 1))
    cross = math.fsum(
        logs[i - 1] * logs[j - 1] * (i + j - 1) * 2.0 ** (-i - j - 3)
        for i in range(1, I + 1)
        for j in range(i + 1, I + 1)
        if logs[i - 1] and logs[j - 1]
    )
    return mu, diag - cross


# -- generating function identity ------------------------------------------------

@dataclass
class GFRow:
    t: int
    k: int
    series: Number
    direct: Number
    ok: bool


@dataclass
class GFReport:
    name: str
    rows: list[GFRow]

    @property
    def holds(self) -> bool:
        return all(row.ok for row in self.rows)


def _series_div(num: list, den: list, K: int) -> list:
    """Power series quotient for a denominator with constant term 1."""
    out = []
    for k in range(K + 1):
        acc = num[k] if k < len(num) else 0
        for i in range(1, min(k, len(den) - 1) + 1):
            acc -= den[i] * out[k - i]
        out.append(acc)
    return out


def _close(a, b) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-9)
    return a == b


def _pow(v, t):
    if isinstance(v, (int, Fraction)) and isinstance(t, int):
        return Fraction(v) ** t if t < 0 else v ** t
    return float(v) ** t


def gf_identity_check(f: QuasiSpec, K: int = 12, t_samples: Sequence = (0, 1, 2)) -> GFReport:
    """Compare the closed-form series in x with direct power sums over n < q^k, k <= K.

    Additive functions are bridged to ``2**f`` first.
    """
    if f.additive:
        f = exp_log_bridge(f, 2)
    q, r = f.q, f.r
    spectrum = bset_value_spectrum(f, K)
    direct_levels = [Counter() for _ in range(K + 1)]  # values of n with exactly k digits
    ev = f.eval
    direct_levels[0][ev(0)] += 1
    for n in range(1, q ** K):
        direct_levels[_length(n, q)][ev(n)] += 1
    rows = []
    for t in t_samples:
        B = [0] + [sum((c * _pow(v, t) for v, c in lvl.items()), 0) for lvl in spectrum]
        num = [0] * (K + 1)
        num[0] = 1
        for i in range(r):
            for ell, b in enumerate(B):
                if i + ell <= K:
                    num[i + ell] += b
        den = [0] * (K + 1)
        den[0] = 1
        if K >= 1:
            den[1] -= 1
        for ell, b in enumerate(B):
            if r + ell <= K:
                den[r + ell] -= b
        F = _series_div(num, den, K)
        acc = 0
        for k in range(K + 1):
            acc += sum((c * _pow(v, t) for v, c in direct_levels[k].items()), 0)
            rows.append(GFRow(t, k, F[k], acc, _close(F[k], acc)))
    return GFReport(f.name, rows)


# -- dominant singularity --------------------------------------------------------

@dataclass
class BSeries:
    """``B(x, t) = sum_{n in B} x^l(n) exp(t lambda(n))`` from a truncated spectrum plus tails.

    Lengths up to L are summed exactly in t. Beyond L the count part uses the
    closed rational form of the B-set automaton and the t-dependence is
    expanded to third order with fitted ``P_j(l) rho^l`` power sums.
    """

    q: int
    r: int
    L: int
    ells: np.ndarray
    lams: np.ndarray
    counts: np.ndarray
    count_levels: list[int]
    growth: float
    tail_coeffs: dict = field(default_factory=dict)

    @classmethod
    def from_spectrum(cls, f: QuasiSpec, spectrum: list[Counter], window: int = 6) -> BSeries:
        lams = _spectrum_lambdas(spectrum, f.additive)
        ells, lv, cv = [], [], []
        for ell, pairs in enumerate(lams, 1):
            for lam, c in pairs:
                ells.append(ell)
                lv.append(float(lam))
                cv.append(float(c))
        L = len(spectrum)
        aut = BSetAutomaton(f.q, f.r)
        growth = aut.growth_rate()
        coeffs = {}
        if growth > 0 and L >= window:
            for j in (1, 2, 3):
                mj = [float(_power_sum(p, j)) for p in lams]
                coeffs[j] = _fit_tail(mj, growth, L, j, window)
        return cls(f.q, f.r, L, np.array(ells, dtype=float), np.array(lv), np.array(cv),
                   [sum(lvl.values()) for lvl in spectrum], growth, coeffs)

    @classmethod
    def from_spec(cls, f: QuasiSpec, L: int, window: int = 6) -> BSeries:
        return cls.from_spectrum(f, bset_value_spectrum(f, L), window)

    def _count_series(self, x: float) -> tuple[float, float]:
        """B(x, 0) and its x-derivative from the automaton's rational form."""
        aut = BSetAutomaton(self.q, self.r)
        A = aut.adjacency()
        n = aut.n_states
        e_s = np.zeros(n)
        e_s[aut.start] = 1
        e_a = np.zeros(n)
        e_a[aut.accepting] = 1
        G = np.linalg.inv(np.eye(n) - x * A)
        return float(e_s @ G @ e_a), float(e_s @ G @ A @ G @ e_a)

    def value_and_dx(self, x: float, t: float) -> tuple[float, float]:
        if x <= 0:
            raise ConvergenceError("x must be positive")
        w = np.exp(self.ells * math.log(x) + t * self.lams) * self.counts
        val = float(np.sum(w))
        dx = float(np.sum(w * self.ells)) / x
        # tail beyond L: counts exactly, higher orders in t from fitted power sums
        c0, c0x = self._count_series(x)
        part0 = math.fsum(c * x ** l for l, c in enumerate(self.count_levels, 1))
        part0x = math.fsum(l * c * x ** (l - 1) for l, c in enumerate(self.count_levels, 1))
        val += c0 - part0
        dx += c0x - part0x
        z = self.growth * x
        for j, cs in self.tail_coeffs.items():
            fac = t ** j / math.factorial(j)
            if fac == 0:
                continue
            val += fac * _geometric_poly_tail(cs, z, self.L)
            dx += fac * _geometric_poly_tail(_poly_times_shift(cs, self.L), z, self.L) / x
        return val, dx

    def radius(self) -> float:
        return 1.0 / self.growth if self.growth > 0 else math.inf


def dominant_singularity(f, t: float, L: int | None = None, series: BSeries | None = None,
                         tol: float = 1e-15, max_iter: int = 200) -> float:
    """Real root near 1/q of ``x + x^r B(x, t) = 1`` by bracketed Newton iteration."""
    if series is None:
        if L is None:
            raise InputError("need a truncation length or a prepared series")
        series = BSeries.from_spec(f, L)
    q, r = series.q, series.r
    hi_lim = min(series.radius(), 1.0)

    def g(x):
        b, bx = series.value_and_dx(x, t)
        xr = x ** r
        return x + xr * b - 1, 1 + (r * x ** (r - 1) * b if r else 0.0) + xr * bx

    x0 = 1.0 / q
    lo, hi = x0, x0
    glo, _ = g(lo)
    step = 0.01 * x0
    # expand a bracket around the start point
    for _ in range(200):
        if glo <= 0:
            break
        hi, lo = lo, max(lo - step, lo / 2)
        glo, _ = g(lo)
        step *= 2
    ghi, _ = g(hi)
    for _ in range(200):
        if ghi >= 0:
            break
        lo = hi
        hi = min(hi + step, (hi + hi_lim) / 2)
        ghi, _ = g(hi)
        step *= 2
    if not (glo <= 0 <= ghi):
        raise ConvergenceError(f"no sign change of x + x^r B(x,{t}) - 1 in (0, {hi_lim})")
    x = min(max(x0, lo), hi)
    for _ in range(max_iter):
        gx, dgx = g(x)
        if gx == 0:
            return x
        if gx < 0:
            lo = x
        else:
            hi = x
        nx = x - gx / dgx if dgx > 0 else None
        if nx is None or not lo <= nx <= hi:
            nx = 0.5 * (lo + hi)
        if abs(nx - x) <= tol * max(1.0, abs(x)):
            return nx
        x = nx
    raise ConvergenceError("Newton iteration did not converge")


def singularity_mean(series: BSeries, h: float = 1e-4) -> float:
    """``-q * alpha'(0)`` by a central difference."""
    ap = dominant_singularity(None, h, series=series)
    am = dominant_singularity(None, -h, series=series)
    return -series.q * (ap - am) / (2 * h)


def singularity_variance(series: BSeries, h: float = 1e-3) -> float:
    """``-(d/dt)^2 log alpha(t)`` at 0 by a central second difference."""
    a0 = dominant_singularity(None, 0.0, series=series)
    ap = dominant_singularity(None, h, series=series)
    am = dominant_singularity(None, -h, series=series)
    return -(math.log(ap) - 2 * math.log(a0) + math.log(am)) / h ** 2


# -- exhaustive experiments -------------------------------------------------------

def value_distribution(f: QuasiSpec, k: int) -> Counter:
    """Multiset of f(n) over all n < q^k."""
    R = f.rep
    if R is not None and R.q == f.q and is_zero_insensitive(R):
        u, cols, v = _numeric_rep(R)
        level = Counter({u: 1})
        for _ in range(k):
            nxt: Counter = Counter()
            for x, c in level.items():
                for col in cols:
                    nxt[_row_times(x, col)] += c
            level = nxt
        out: Counter = Counter()
        for x, c in level.items():
            out[_int_or_frac(Fraction(sum(a * b for a, b in zip(x, v))))] += c
        return out
    ev = f.eval
    return Counter(ev(n) for n in range(f.q ** k))


def normal_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


HIST_EDGES = tuple(x / 2 for x in range(-8, 9))


@dataclass
class ExperimentReport:
    name: str
    k: int
    count: int
    mean: Number
    variance: Number
    ks_distance: float | None
    degenerate: bool
    histogram: list[tuple[float, float, float]]
    ks_distance_lattice: float | None = None

    def row(self) -> dict:
        return {
            "k": self.k,
            "count": self.count,
            "mean": self.mean,
            "variance": self.variance,
            "ks_distance": self.ks_distance,
        }


def _ks(points: list[tuple[float, int]], total: int, mean: float, sd: float) -> float:
    acc = 0
    d = 0.0
    for lam, c in points:
        phi = normal_cdf((lam - mean) / sd)
        before = acc / total
        acc += c
        after = acc / total
        d = max(d, abs(before - phi), abs(after - phi))
    return d


def _ks_lattice(points: list[tuple[float, int]], total: int, mean: float, sd: float) -> float:
    """Distance with the normal evaluated half a lattice step past each atom."""
    acc = 0
    d = 0.0
    for lam, c in points:
        acc += c
        d = max(d, abs(acc / total - normal_cdf((lam + 0.5 - mean) / sd)))
    return d


def empirical_experiment(f: QuasiSpec, k: int, distribution: Counter | None = None) -> ExperimentReport:
    """Exact mean, variance and Kolmogorov distance of lambda(N) for uniform N < q^k."""
    dist = distribution if distribution is not None else value_distribution(f, k)
    total = f.q ** k
    pairs = sorted((_lam(v, f.additive), c) for v, c in dist.items())
    if all(_exact(lam) for lam, _ in pairs):
        mean = _int_or_frac(sum((Fraction(lam) * c for lam, c in pairs), Fraction(0)) / total)
        second = sum((Fraction(lam) ** 2 * c for lam, c in pairs), Fraction(0)) / total
        var = _int_or_frac(second - Fraction(mean) ** 2)
    else:
        mean = math.fsum(lam * c for lam, c in pairs) / total
        var = max(math.fsum((lam - mean) ** 2 * c for lam, c in pairs) / total, 0.0)
    if var == 0:
        return ExperimentReport(f.name, k, total, mean, var, None, True, [])
    mf, sd = float(mean), math.sqrt(float(var))
    fpairs = [(float(lam), c) for lam, c in pairs]
    ks = _ks(fpairs, total, mf, sd)
    lattice = None
    if all(_exact(lam) and Fraction(lam).denominator == 1 for lam, _ in pairs):
        lattice = _ks_lattice(fpairs, total, mf, sd)
    mass = [0] * (len(HIST_EDGES) - 1)
    for lam, c in fpairs:
        z = (lam - mf) / sd
        i = int(np.clip(np.searchsorted(HIST_EDGES, z, side="right") - 1, 0, len(mass) - 1))
        mass[i] += c
    hist = [(HIST_EDGES[i], HIST_EDGES[i + 1], mass[i] / total) for i in range(len(mass))]
    return ExperimentReport(f.name, k, total, mean, var, ks, False, hist, lattice)


__all__ = [
    "MomentSums", "GrowthConditionWarning", "bset_value_spectrum", "truncated_moments", "exact_moments",
    "mean_constant", "variance_constant", "constants", "rlt_constants", "polylog_neg",
    "GFRow", "GFReport", "gf_identity_check", "BSeries", "dominant_singularity",
    "singularity_mean", "singularity_variance", "value_distribution", "normal_cdf",
    "ExperimentReport", "empirical_experiment",
]
