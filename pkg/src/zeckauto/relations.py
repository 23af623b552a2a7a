"""Base relations over canonical representations: equality, order, constants, addition."""

from __future__ import annotations

import logging
from collections import deque
from functools import lru_cache

import numpy as np

from .automata import (
    Automaton,
    AutomatonError,
    accepts_many,
    digit_table,
    intersect,
    minimize,
    product,
    rename,
    reorder,
    sym_of,
    validity,
)
from .numeration import FIB, NumerationSystem, encode, get_system

log = logging.getLogger(__name__)

DEFAULT_BOUND = 6
MAX_BOUND = 12
VALIDATION_LIMIT = 3000


class AdderValidationError(AutomatonError):
    pass


def build_validity(system, k: int | list = 1) -> Automaton:
    tracks = k if isinstance(k, (list, tuple)) else [f"x{i}" for i in range(k)]
    return validity(system, tracks)


def build_comparison(system, relation: str, tracks=("x", "y")) -> Automaton:
    """Two-track ``x R y`` for ``R`` in eq, ne, lt, le, gt, ge."""
    system = get_system(system)
    x, y = tracks
    if relation in ("gt", "ge"):
        return reorder(build_comparison(system, {"gt": "lt", "ge": "le"}[relation], (y, x)), (x, y))
    if relation == "ne":
        return product(build_comparison(system, "lt", tracks), build_comparison(system, "gt", tracks), "or")
    eq = {sym_of((0, 0)): 0, sym_of((1, 1)): 0}
    if relation == "eq":
        raw = Automaton(system, tracks, [eq], (0,), (0,))
    elif relation in ("lt", "le"):
        # equal-length canonical words compare lexicographically
        rows = [{**eq, sym_of((0, 1)): 1}, {c: 1 for c in range(4)}]
        acc = (1,) if relation == "lt" else (0, 1)
        raw = Automaton(system, tracks, rows, (0,), acc)
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return product(raw, validity(system, tracks), "and")


def build_constant(system, c: int, track: str = "x") -> Automaton:
    """Accepts exactly the zero-padded forms of ``encode(c)``."""
    system = get_system(system)
    w = encode(c, system)
    rows = [{0: 0}]
    for j, ch in enumerate(w):
        if j == 0:
            rows[0][1] = 1  # w starts with 1
        else:
            rows[-1][int(ch)] = len(rows)
        rows.append({})
    return minimize(Automaton(system, [track], rows, (0,), (len(rows) - 1,)))


def _raw_adder(system: NumerationSystem, bound: int) -> Automaton:
    # A state is the running discrepancy val(x)+val(y)-val(z) of the prefixes,
    # written as coefficients on the next ``order`` weights above the unread
    # digits: (c_0, ..., c_{r-1}) stands for sum c_i U_{m+r+1-i} when m digits remain.
    r = system.order
    final = [system.basis(r + 1 - i) for i in range(r)]
    start = (0,) * r
    index = {start: 0}
    order = [start]
    rows = []
    queue = deque([start])
    while queue:
        st = queue.popleft()
        row = {}
        for dx in (0, 1):
            for dy in (0, 1):
                for dz in (0, 1):
                    d = dx + dy - dz
                    lead = st[0]
                    nxt = tuple(lead + st[i + 1] for i in range(r - 1)) + (lead + d,)
                    if max(abs(v) for v in nxt) > bound:
                        continue
                    j = index.get(nxt)
                    if j is None:
                        j = index[nxt] = len(order)
                        order.append(nxt)
                        queue.append(nxt)
                    row[sym_of((dx, dy, dz))] = j
        rows.append(row)
    acc = [j for j, st in enumerate(order) if sum(c * w for c, w in zip(st, final)) == 0]
    return Automaton(system, ("x", "y", "z"), rows, (0,), acc)


def validate_adder(adder: Automaton, limit: int = VALIDATION_LIMIT) -> list[tuple]:
    """Exhaustive check of ``x + y = z`` for ``x, y <= limit``.

    Returns a list of counterexamples (empty when valid).  Acceptance of every
    ``(x, y, x+y)`` is checked by running the automaton on all pairs; that no
    other ``z`` is accepted follows from the adder being unambiguous in ``z``,
    which :func:`is_functional` checks on the automaton itself.
    """
    sys = adder.system
    table = digit_table(sys, 2 * limit)
    bad = []
    n = limit + 1
    block = max(1, 1_000_000 // n)
    ys = np.tile(np.arange(n), block)
    for x0 in range(0, n, block):
        xs = np.repeat(np.arange(x0, min(x0 + block, n)), n)
        y = ys[: len(xs)]
        ok = accepts_many(adder, [table[xs], table[y], table[xs + y]])
        for i in np.flatnonzero(~ok)[:20]:
            bad.append((int(xs[i]), int(y[i]), int(xs[i] + y[i])))
        if bad:
            break
    if not bad and not is_functional(adder):
        bad.append(("ambiguous", None, None))
    return bad


def is_functional(adder: Automaton) -> bool:
    """True iff no (x, y) pair is accepted with two different z tracks.

    Runs two copies of the DFA in lockstep on the same x, y digits and asks
    whether an accepting pair of runs can be reached after the z tracks differ.
    """
    t = adder.delta
    start = (adder.start, adder.start, False)
    seen = {start}
    queue = deque([start])
    while queue:
        s1, s2, diverged = queue.popleft()
        if diverged and s1 in adder.accepting and s2 in adder.accepting:
            return False
        for xy in range(4):
            for z1 in (0, 1):
                u1 = t[s1].get(xy | z1 << 2)
                if u1 is None:
                    continue
                for z2 in (0, 1):
                    u2 = t[s2].get(xy | z2 << 2)
                    if u2 is None:
                        continue
                    nxt = (u1, u2, diverged or z1 != z2)
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    return True


@lru_cache(maxsize=None)
def _cached_adder(system: NumerationSystem, bound: int, retry: bool, limit: int) -> Automaton:
    k = bound
    while True:
        raw = _raw_adder(system, k)
        adder = intersect(raw, validity(system, raw.tracks))
        bad = validate_adder(adder, limit)
        if not bad:
            log.debug("adder %s with bound %d: %d states", system.name, k, adder.num_states)
            return adder
        if not retry or k + 2 > MAX_BOUND:
            raise AdderValidationError(
                f"{system.name} adder with bound {k} fails validation, e.g. {bad[:3]}")
        k += 2


def build_adder(system=FIB, bound: int = DEFAULT_BOUND, retry: bool = True,
                limit: int = VALIDATION_LIMIT, tracks=("x", "y", "z")) -> Automaton:
    """Three-track DFA accepting canonical ``(x, y, z)`` with ``x + y = z``.

    Built by exploring discrepancy states pruned at ``bound``; the result is
    validated exhaustively up to ``limit`` and rebuilt with a larger bound
    (up to 12) when ``retry`` is set.
    """
    adder = _cached_adder(get_system(system), bound, retry, limit)
    if tuple(tracks) != adder.tracks:
        adder = rename(adder, tracks)
    return adder


def build_successor(system=FIB, tracks=("m", "n")) -> Automaton:
    """``n = m + 1`` from the adder with a constant track, the constant projected away."""
    from .automata import project

    m, n = tracks
    one = build_constant(system, 1, "#one")
    return project(intersect(build_adder(system, tracks=(m, "#one", n)), one), "#one")
