"""Counting with linear representations, recurrence fitting and closed-form checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import automata as au
from .automata import Automaton
from .logic import Formula, compile_formula, parse_formula
from .numeration import FIB, encode, get_system


class CountingError(ValueError):
    pass


@dataclass
class LinearRepresentation:
    """``c(n) = v . mu[d_1] ... mu[d_L] . w`` over the digits of ``n``.

    ``mu`` maps a parameter symbol (bit ``i`` = digit of parameter ``i``) to a
    non-negative integer matrix.
    """

    v: np.ndarray
    mu: dict
    w: np.ndarray
    system: object = FIB
    params: tuple = ("n",)
    counted: tuple = ()

    @property
    def rank(self) -> int:
        return len(self.v)

    def __call__(self, *values: int) -> int:
        return evaluate(self, *values)

    def to_json_dict(self) -> dict:
        k = len(self.params)
        return {
            "system": get_system(self.system).name,
            "params": list(self.params),
            "counted": list(self.counted),
            "rank": self.rank,
            "v": [int(x) for x in self.v],
            "w": [int(x) for x in self.w],
            "mu": {"".join(str((s >> i) & 1) for i in range(k)): [[int(x) for x in row] for row in m]
                   for s, m in sorted(self.mu.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1, sort_keys=True)


def _as_automaton(f, env) -> Automaton:
    if isinstance(f, Automaton):
        return f
    return compile_formula(f if isinstance(f, Formula) else parse_formula(f), env)


def build_counter(f, params: Sequence[str] = ("n",), env: Mapping | None = None,
                  count_var: str | Sequence[str] | None = None) -> LinearRepresentation:
    """Linear representation counting the values of the non-parameter tracks.

    ``f`` is a formula (text or parsed) or an already compiled automaton.
    ``mu[d][s, t]`` counts the digit choices on the counted tracks that move
    ``s`` to ``t`` while the parameters read ``d``.  Because canonical padded
    words are unique, each counted value contributes exactly one path.
    """
    a = au.minimize(au.determinize(_as_automaton(f, env)))
    params = tuple(params)
    for p in params:
        if p not in a.tracks:
            raise CountingError(f"parameter {p!r} is not a free variable; tracks are {a.tracks}")
    counted = tuple(t for t in a.tracks if t not in params)
    if count_var is not None:
        want = (count_var,) if isinstance(count_var, str) else tuple(count_var)
        if set(want) != set(counted):
            raise CountingError(f"count variable {want} is not the set of free non-parameters {counted}")
    a = au.reorder(a, params + counted)
    # keep only useful states so the rank is the trimmed state count
    live = au._reachable(a) & a.coaccessible()
    order = sorted(live)
    idx = {s: i for i, s in enumerate(order)}
    t = len(order)
    kp = len(params)
    mu = {d: np.zeros((t, t), dtype=object) for d in range(1 << kp)}
    for s in order:
        for c, u in a.delta[s].items():
            if u in idx:
                mu[c & ((1 << kp) - 1)][idx[s], idx[u]] += 1
    v = np.zeros(t, dtype=object)
    if a.start in idx:
        v[idx[a.start]] = 1
    w = np.array([1 if s in a.accepting else 0 for s in order], dtype=object)
    return LinearRepresentation(v, mu, w, a.system, params, counted)


def evaluate(rep: LinearRepresentation, *values: int) -> int:
    """Exact ``v . mu((n)) . w``; several parameters are read in parallel, zero-padded."""
    if len(values) != len(rep.params):
        raise CountingError(f"expected {len(rep.params)} parameter values")
    if rep.rank == 0:
        return 0
    sys = get_system(rep.system)
    words = [encode(x, sys) for x in values]
    n = max((len(x) for x in words), default=0)
    words = [x.rjust(n, "0") for x in words]
    vec = rep.v
    for j in range(n):
        d = sum(int(x[j]) << i for i, x in enumerate(words))
        vec = vec.dot(rep.mu[d])
    return int(vec.dot(rep.w))


def evaluate_word(rep: LinearRepresentation, word: str) -> int:
    """Evaluate on a single-parameter digit word (e.g. ``"1" + "0" * k``)."""
    vec = rep.v
    for ch in word:
        vec = vec.dot(rep.mu[int(ch)])
    return int(vec.dot(rep.w))


# -- recurrences ----------------------------------------------------------------------


@dataclass(frozen=True)
class RecurrenceFit:
    """``x_n = sum_j coefficients[j-1] * x_{n-j}`` for all ``n >= start + order``."""

    coefficients: tuple
    start: int = 0

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @property
    def characteristic(self) -> list:
        """Characteristic polynomial, highest degree first: ``X^d - c_1 X^{d-1} - ... - c_d``."""
        return [Fraction(1)] + [-c for c in self.coefficients]

    def annihilates(self, seq: Sequence[int]) -> bool:
        return annihilates(self.characteristic, seq)


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]):
    """A solution of an overdetermined linear system, or None if inconsistent."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in m[r:]):
        return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = m[i][-1]
    return sol


def fit_recurrence(seq: Sequence[int], from_index: int = 0, max_order: int | None = None,
                   margin: int = 4) -> RecurrenceFit:
    """Shortest exact linear recurrence satisfied by ``seq[from_index:]``.

    Order ``d`` is accepted when the full overdetermined Hankel system (one
    equation per available term) is consistent; ``d`` is only tried while at
    least ``d + margin`` equations are available.
    """
    xs = [Fraction(x) for x in seq[from_index:]]
    if max_order is None:
        max_order = (len(xs) - margin) // 2
    for d in range(0, max_order + 1):
        neq = len(xs) - d
        if neq < d + margin:
            break
        if d == 0:
            if all(x == 0 for x in xs):
                return RecurrenceFit((), from_index)
            continue
        rows = [[xs[n - j] for j in range(1, d + 1)] for n in range(d, len(xs))]
        sol = _solve_exact(rows, xs[d:])
        if sol is not None:
            return RecurrenceFit(tuple(sol), from_index)
    raise CountingError(f"no linear recurrence of order <= {max_order} fits the sequence")


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_from_factors(*factors):
    """Expand a product of polynomials given highest-degree-first."""
    out = [1]
    for f in factors:
        out = poly_mul(out, f)
    return out


def poly_divides(d, p) -> bool:
    """True iff ``d`` divides ``p`` over the rationals (coefficients highest degree first)."""
    import sympy

    x = sympy.Symbol("X")
    pd = sympy.Poly([sympy.Rational(c) for c in d], x, domain="QQ")
    pp = sympy.Poly([sympy.Rational(c) for c in p], x, domain="QQ")
    return pp.rem(pd).is_zero


def annihilates(poly, seq: Sequence[int]) -> bool:
    """Does ``sum_j poly[j] * x_{n+deg-j} = 0`` hold for every window of ``seq``?"""
    deg = len(poly) - 1
    return all(sum(c * seq[n + deg - j] for j, c in enumerate(poly)) == 0
               for n in range(len(seq) - deg))


# The minimal polynomial reported for mu(0) of the U+U counter:
# X^3 (X+1) (X^2-X-1) (X-1)^2
UPLUSU_MINPOLY = poly_from_factors([1, 0, 0, 0], [1, 1], [1, -1, -1], [1, -1], [1, -1])


# -- closed forms -------------------------------------------------------------------


@dataclass
class ClosedFormReport:
    kind: str
    ok: bool
    checked: tuple
    first_failure: tuple | None = None  # (n, expected, got)
    rows: list = field(default_factory=list)

    def __str__(self):
        lo, hi = self.checked
        if self.ok:
            return f"{self.kind}: holds for {lo} <= n <= {hi}"
        n, want, got = self.first_failure
        return f"{self.kind}: fails at n={n} (expected {want}, got {got})"


def _fib(i):
    return FIB.basis(i) if i >= 2 else (1 if i == 1 else 0)


CLOSED_FORMS = {
    # elements of U+U below F_n: 2 F_{n-2} + 2 - n
    "uPlusUBelowFib": (range(4, 25), lambda n: _fib(n), lambda n: 2 * _fib(n - 2) + 2 - n),
    # ordered pairs (i, j) with F_n - 1 = a_i + a_j: F_{n-1} - 1
    "lowPlusLowAtFibMinus1": (range(2, 25), lambda n: _fib(n) - 1, lambda n: _fib(n - 1) - 1),
}


def verify_closed_form(rep: LinearRepresentation, kind: str, ns=None) -> ClosedFormReport:
    ns_default, arg, expected = CLOSED_FORMS[kind]
    ns = ns_default if ns is None else ns
    rows = []
    failure = None
    for n in ns:
        got = evaluate(rep, arg(n))
        want = expected(n)
        rows.append((n, want, got))
        if got != want and failure is None:
            failure = (n, want, got)
    return ClosedFormReport(kind, failure is None, (min(ns), max(ns)), failure, rows)
