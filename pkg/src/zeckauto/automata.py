"""Multi-track automata over digit tuples.

A symbol of a ``k``-track automaton is an integer in ``range(2**k)`` whose bit
``i`` is the digit on track ``i``.  Every automaton that denotes a set or a
relation obeys two conventions:

* only *valid* tuples are accepted (no track contains the forbidden factor);
* the language is closed under leading zeros: ``w`` is accepted iff the
  all-zero symbol followed by ``w`` is.

Transitions are partial; a missing transition goes to an implicit dead state.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import product as _cartesian
from typing import Iterable, Sequence

import numpy as np

from .numeration import NumerationSystem, encode, get_system

ZERO = 0


class AutomatonError(Exception):
    pass


class ClassificationError(AutomatonError):
    """Raised when a set listing would exceed the configured cap."""


def sym_of(digits: Sequence[int]) -> int:
    return sum(int(d) << i for i, d in enumerate(digits))


def digits_of(sym: int, k: int) -> tuple[int, ...]:
    return tuple((sym >> i) & 1 for i in range(k))


class Automaton:
    """Immutable DFA or NFA over ``k``-tuples of digits.

    ``delta[s]`` maps a symbol to a target state (DFA) or to a tuple of target
    states (NFA).  ``initial`` is a tuple of states; a DFA has exactly one.
    """

    __slots__ = ("system", "tracks", "delta", "initial", "accepting", "deterministic")

    def __init__(self, system, tracks, delta, initial, accepting, deterministic=True):
        self.system = get_system(system)
        self.tracks = tuple(tracks)
        self.delta = tuple(delta)
        self.initial = tuple(initial)
        self.accepting = frozenset(accepting)
        self.deterministic = deterministic
        if len(set(self.tracks)) != len(self.tracks):
            raise AutomatonError(f"duplicate track names {self.tracks}")
        if deterministic and len(self.initial) != 1:
            raise AutomatonError("a DFA has exactly one initial state")

    @property
    def k(self) -> int:
        return len(self.tracks)

    @property
    def num_states(self) -> int:
        return len(self.delta)

    @property
    def start(self) -> int:
        return self.initial[0]

    def __repr__(self):
        kind = "DFA" if self.deterministic else "NFA"
        return f"<{kind} {self.system.name} tracks={list(self.tracks)} states={self.num_states}>"

    # -- running -----------------------------------------------------------

    def run(self, symbols: Iterable[int]):
        """Final DFA state after reading ``symbols`` or None if the run dies."""
        a = self if self.deterministic else determinize(self)
        s = a.start
        for c in symbols:
            s = a.delta[s].get(c)
            if s is None:
                return None
        return s

    def accepts_word(self, *words: str) -> bool:
        """Membership of one digit word per track (words are left-padded)."""
        if len(words) != self.k:
            raise AutomatonError(f"expected {self.k} words, got {len(words)}")
        n = max((len(w) for w in words), default=0)
        words = [w.rjust(n, "0") for w in words]
        s = self.run(sym_of([w[j] for w in words]) for j in range(n))
        return s is not None and s in self.accepting

    def accepts(self, *values: int) -> bool:
        """Membership of a tuple of naturals, one per track."""
        return self.accepts_word(*(encode(v, self.system) for v in values))

    def __contains__(self, value):
        if isinstance(value, tuple):
            return self.accepts(*value)
        return self.accepts(value)

    # -- views -------------------------------------------------------------

    def transitions(self):
        """Yield ``(source, symbol, target)`` triples in a stable order."""
        for s, row in enumerate(self.delta):
            for c in sorted(row):
                t = row[c]
                if self.deterministic:
                    yield s, c, t
                else:
                    for u in t:
                        yield s, c, u

    def coaccessible(self) -> set[int]:
        rev = [[] for _ in self.delta]
        for s, _, t in self.transitions():
            rev[t].append(s)
        seen = set(self.accepting)
        stack = list(seen)
        while stack:
            t = stack.pop()
            for s in rev[t]:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        return seen

    @property
    def trimmed_size(self) -> int:
        """Number of states that are both reachable and co-reachable."""
        reach = _reachable(self)
        return len(reach & self.coaccessible())

    @property
    def complete_size(self) -> int:
        """State count of the complete minimal DFA (dead state included when needed)."""
        a = minimize(self)
        if a.trimmed_size == 0:
            return 1
        full = 1 << a.k
        missing = any(len(row) < full for row in a.delta)
        return a.num_states + (1 if missing else 0)

    def is_empty(self) -> bool:
        return self.trimmed_size == 0

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "system": self.system.name,
            "tracks": list(self.tracks),
            "deterministic": self.deterministic,
            "states": self.num_states,
            "initial": list(self.initial) if not self.deterministic else self.start,
            "accepting": sorted(self.accepting),
            "transitions": [
                {"from": s, "tuple": list(digits_of(c, self.k)), "to": t}
                for s, c, t in self.transitions()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_json_dict(cls, d: dict) -> "Automaton":
        det = d.get("deterministic", True)
        n = d["states"]
        rows = [dict() for _ in range(n)]
        for tr in d["transitions"]:
            c = sym_of(tr["tuple"])
            if det:
                rows[tr["from"]][c] = tr["to"]
            else:
                rows[tr["from"]].setdefault(c, []).append(tr["to"])
        if not det:
            rows = [{c: tuple(v) for c, v in r.items()} for r in rows]
        init = d["initial"]
        init = (init,) if isinstance(init, int) else tuple(init)
        return cls(d["system"], d["tracks"], rows, init, d["accepting"], det)

    @classmethod
    def from_json(cls, text: str) -> "Automaton":
        return cls.from_json_dict(json.loads(text))

    def to_dot(self, name: str = "A") -> str:
        """Graphviz source; states keep their (breadth-first) numbering."""
        lines = [f'digraph "{name}" {{', "  rankdir=LR;", '  node [shape=circle];',
                 '  __start [shape=none, label=""];']
        for s in range(self.num_states):
            shape = "doublecircle" if s in self.accepting else "circle"
            lines.append(f"  {s} [shape={shape}];")
        for s in self.initial:
            lines.append(f"  __start -> {s};")
        labels: dict[tuple[int, int], list[str]] = {}
        for s, c, t in self.transitions():
            lab = ",".join(str(d) for d in digits_of(c, self.k)) if self.k else "()"
            if self.k > 1:
                lab = f"[{lab}]"
            labels.setdefault((s, t), []).append(lab)
        for (s, t), labs in labels.items():
            lines.append(f'  {s} -> {t} [label="{" ".join(labs)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _reachable(a: Automaton) -> set[int]:
    seen = set(a.initial)
    stack = list(seen)
    while stack:
        s = stack.pop()
        targets = a.delta[s].values()
        if not a.deterministic:
            targets = [u for t in targets for u in t]
        for t in targets:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


# -- elementary automata ----------------------------------------------------


def validity(system, tracks: Sequence[str]) -> Automaton:
    """Accepts tuples whose every track avoids the forbidden factor."""
    system = get_system(system)
    k, r = len(tracks), system.order
    # state: per-track count of trailing 1s, packed in base ``r``
    states = list(_cartesian(range(r), repeat=k))
    index = {st: i for i, st in enumerate(states)}
    rows = []
    for st in states:
        row = {}
        for c in range(1 << k):
            nxt = []
            for i in range(k):
                run = st[i] + 1 if (c >> i) & 1 else 0
                if run >= r:
                    break
                nxt.append(run)
            else:
                row[c] = index[tuple(nxt)]
        rows.append(row)
    return Automaton(system, tracks, rows, (index[(0,) * k],), range(len(states)))


def universal(system, tracks: Sequence[str]) -> Automaton:
    return validity(system, tracks)


def empty(system, tracks: Sequence[str]) -> Automaton:
    return Automaton(system, tracks, [{}], (0,), ())


# -- core algebra -----------------------------------------------------------


def determinize(a: Automaton) -> Automaton:
    """Subset construction; DFAs are returned unchanged."""
    if a.deterministic:
        return a
    start = frozenset(a.initial)
    index = {start: 0}
    order = [start]
    rows = []
    syms = range(1 << a.k)
    i = 0
    while i < len(order):
        cur = order[i]
        i += 1
        row = {}
        for c in syms:
            nxt = set()
            for s in cur:
                t = a.delta[s].get(c)
                if t:
                    nxt.update(t)
            if not nxt:
                continue
            key = frozenset(nxt)
            j = index.get(key)
            if j is None:
                j = index[key] = len(order)
                order.append(key)
            row[c] = j
        rows.append(row)
    acc = [j for j, st in enumerate(order) if st & a.accepting]
    return Automaton(a.system, a.tracks, rows, (0,), acc)


def minimize(a: Automaton) -> Automaton:
    """Minimal DFA with the dead state dropped and states numbered breadth-first.

    Two automata with the same language (and track order) minimize to
    identical objects, which is what :func:`equivalent` relies on.
    """
    if not a.deterministic:
        raise AutomatonError("minimize requires a deterministic automaton")
    reach = sorted(_reachable(a))
    pos = {s: i for i, s in enumerate(reach)}
    n = len(reach)
    dead = n
    nsym = 1 << a.k
    table = []
    for s in reach:
        row = a.delta[s]
        table.append([pos[row[c]] if c in row else dead for c in range(nsym)])
    table.append([dead] * nsym)

    # Moore partition refinement on the completed automaton
    cls = [1 if s in a.accepting else 0 for s in reach] + [0]
    count = len(set(cls))
    while True:
        sigs = {}
        new = []
        for s in range(n + 1):
            key = (cls[s], *(cls[t] for t in table[s]))
            new.append(sigs.setdefault(key, len(sigs)))
        if len(sigs) == count:
            break
        cls, count = new, len(sigs)
    cls = new

    dead_cls = cls[dead]
    # renumber live classes breadth-first from the initial class
    init = cls[pos[a.start]]
    if init == dead_cls:
        return empty(a.system, a.tracks)
    rep = {}
    for s in range(n):
        rep.setdefault(cls[s], s)
    number = {init: 0}
    queue = deque([init])
    rows = []
    acc = []
    while queue:
        c0 = queue.popleft()
        s = rep[c0]
        if reach[s] in a.accepting:
            acc.append(number[c0])
        row = {}
        for c in range(nsym):
            t = cls[table[s][c]]
            if t == dead_cls:
                continue
            if t not in number:
                number[t] = len(number)
                queue.append(t)
            row[c] = number[t]
        rows.append(row)
    return Automaton(a.system, a.tracks, rows, (0,), acc)


def _track_map(tracks: Sequence[str], sub: Sequence[str]) -> list[int]:
    """For every symbol over ``tracks`` the induced symbol over ``sub``."""
    idx = [tracks.index(t) for t in sub]
    return [sum(((c >> i) & 1) << j for j, i in enumerate(idx)) for c in range(1 << len(tracks))]


def product(a: Automaton, b: Automaton, mode: str = "and") -> Automaton:
    """Intersection (``"and"``) or union (``"or"``) after unifying tracks by name.

    Tracks of ``a`` come first, followed by tracks only ``b`` has.  A track
    missing from one operand ranges over all valid digit words there.
    """
    if mode not in ("and", "or"):
        raise AutomatonError(f"unknown product mode {mode!r}")
    if a.system != b.system:
        raise AutomatonError(f"system mismatch: {a.system.name} vs {b.system.name}")
    a, b = determinize(a), determinize(b)
    tracks = a.tracks + tuple(t for t in b.tracks if t not in a.tracks)
    ma, mb = _track_map(tracks, a.tracks), _track_map(tracks, b.tracks)
    if mode == "or":
        cyl = [t for t in tracks if t not in a.tracks or t not in b.tracks]
    else:
        cyl = []
    v = validity(a.system, cyl)
    mv = _track_map(tracks, cyl)

    start = (a.start, b.start, v.start)
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    nsym = 1 << len(tracks)
    while i < len(order):
        sa, sb, sv = order[i]
        i += 1
        row = {}
        for c in range(nsym):
            tv = v.delta[sv].get(mv[c])
            if tv is None:
                continue
            ta = a.delta[sa].get(ma[c]) if sa is not None else None
            tb = b.delta[sb].get(mb[c]) if sb is not None else None
            if mode == "and":
                if ta is None or tb is None:
                    continue
            elif ta is None and tb is None:
                continue
            key = (ta, tb, tv)
            j = index.get(key)
            if j is None:
                j = index[key] = len(order)
                order.append(key)
            row[c] = j
        rows.append(row)
    if mode == "and":
        acc = [j for j, (sa, sb, _) in enumerate(order) if sa in a.accepting and sb in b.accepting]
    else:
        acc = [j for j, (sa, sb, _) in enumerate(order) if sa in a.accepting or sb in b.accepting]
    return minimize(Automaton(a.system, tracks, rows, (0,), acc))


def intersect(*automata: Automaton) -> Automaton:
    out = automata[0]
    for b in automata[1:]:
        out = product(out, b, "and")
    return out


def union(*automata: Automaton) -> Automaton:
    out = automata[0]
    for b in automata[1:]:
        out = product(out, b, "or")
    return out


def complement(a: Automaton) -> Automaton:
    """Valid tuples (over the same tracks) that ``a`` rejects."""
    a = determinize(a)
    v = validity(a.system, a.tracks)
    start = (a.start, v.start)
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        sa, sv = order[i]
        i += 1
        row = {}
        for c, tv in v.delta[sv].items():
            ta = a.delta[sa].get(c) if sa is not None else None
            key = (ta, tv)
            j = index.get(key)
            if j is None:
                j = index[key] = len(order)
                order.append(key)
            row[c] = j
        rows.append(row)
    acc = [j for j, (sa, _) in enumerate(order) if sa is None or sa not in a.accepting]
    return minimize(Automaton(a.system, a.tracks, rows, (0,), acc))


def close_leading_zeros(a: Automaton) -> Automaton:
    """Smallest leading-zero closed language ``0* . {u : 0^j u in L(a) for some j}``.

    Returns a DFA.
    """
    nfa = _as_nfa(a)
    zero_reach = set(nfa.initial)
    stack = list(zero_reach)
    while stack:
        s = stack.pop()
        for t in nfa.delta[s].get(ZERO, ()):
            if t not in zero_reach:
                zero_reach.add(t)
                stack.append(t)
    q0 = nfa.num_states
    row: dict[int, set] = {}
    for s in zero_reach:
        for c, ts in nfa.delta[s].items():
            row.setdefault(c, set()).update(ts)
    row.setdefault(ZERO, set()).add(q0)
    rows = list(nfa.delta) + [{c: tuple(sorted(ts)) for c, ts in row.items()}]
    acc = set(nfa.accepting)
    if zero_reach & nfa.accepting:
        acc.add(q0)
    closed = Automaton(a.system, a.tracks, rows, (q0,), acc, deterministic=False)
    return minimize(determinize(closed))


def _as_nfa(a: Automaton) -> Automaton:
    if not a.deterministic:
        return a
    rows = [{c: (t,) for c, t in row.items()} for row in a.delta]
    return Automaton(a.system, a.tracks, rows, a.initial, a.accepting, deterministic=False)


def project(a: Automaton, track: str) -> Automaton:
    """Existentially quantify ``track`` away.

    The erased component may need more digits than the surviving ones, so the
    result is re-closed under leading zeros before determinization.
    """
    if track not in a.tracks:
        raise AutomatonError(f"unknown track {track!r}; have {list(a.tracks)}")
    i = a.tracks.index(track)
    low = (1 << i) - 1
    nfa = _as_nfa(a)
    rows = []
    for row in nfa.delta:
        new: dict[int, set] = {}
        for c, ts in row.items():
            nc = (c & low) | ((c >> (i + 1)) << i)
            new.setdefault(nc, set()).update(ts)
        rows.append({c: tuple(sorted(ts)) for c, ts in new.items()})
    tracks = a.tracks[:i] + a.tracks[i + 1:]
    erased = Automaton(a.system, tracks, rows, nfa.initial, nfa.accepting, deterministic=False)
    return close_leading_zeros(erased)


def rename(a: Automaton, names: Sequence[str]) -> Automaton:
    """Relabel tracks; tracks given the same name are identified (diagonal)."""
    if len(names) != a.k:
        raise AutomatonError("rename needs one name per track")
    a = determinize(a)
    tracks = tuple(dict.fromkeys(names))
    pos = [tracks.index(n) for n in names]
    remap = {}
    for c in range(1 << a.k):
        bits = {}
        for i, p in enumerate(pos):
            d = (c >> i) & 1
            if bits.setdefault(p, d) != d:
                break
        else:
            remap[c] = sum(d << p for p, d in bits.items())
    rows = [{remap[c]: t for c, t in row.items() if c in remap} for row in a.delta]
    out = Automaton(a.system, tracks, rows, a.initial, a.accepting)
    if len(tracks) == a.k:
        return out
    return minimize(out)


def reorder(a: Automaton, tracks: Sequence[str]) -> Automaton:
    """Same relation with tracks permuted into the given order."""
    tracks = tuple(tracks)
    if sorted(tracks) != sorted(a.tracks):
        raise AutomatonError(f"cannot reorder {list(a.tracks)} as {list(tracks)}")
    if tracks == a.tracks:
        return a
    perm = [tracks.index(t) for t in a.tracks]
    det = a.deterministic

    def move(c):
        return sum(((c >> i) & 1) << p for i, p in enumerate(perm))

    rows = [{move(c): t for c, t in row.items()} for row in a.delta]
    out = Automaton(a.system, tracks, rows, a.initial, a.accepting, det)
    return minimize(out) if det else out


def equivalent(a: Automaton, b: Automaton) -> bool:
    """Language equality, compared through canonical minimal DFAs."""
    if a.system != b.system:
        raise AutomatonError("automata over different numeration systems")
    if sorted(a.tracks) != sorted(b.tracks):
        raise AutomatonError(f"track mismatch {list(a.tracks)} vs {list(b.tracks)}")
    ma = minimize(determinize(a))
    mb = minimize(determinize(reorder(determinize(b), a.tracks)))
    return ma.delta == mb.delta and ma.accepting == mb.accepting


def is_leading_zero_closed(a: Automaton) -> bool:
    m = minimize(determinize(a))
    if m.is_empty():
        return True
    return m.delta[0].get(ZERO) == 0


# -- reading off sets -------------------------------------------------------


def enumerate_values(a: Automaton, limit: int) -> list[int]:
    """All naturals ``<= limit`` accepted by a one-track automaton."""
    a = minimize(determinize(a))
    if a.k != 1:
        raise AutomatonError("enumerate needs a one-track automaton")
    sys = a.system
    out = []
    if a.start in a.accepting:
        out.append(0)
    if limit < 1:
        return out
    live = a.coaccessible()
    maxlen = len(encode(limit, sys))
    for length in range(1, maxlen + 1):
        w = sys.weights(length)
        s = a.delta[a.start].get(1)
        if s is None or s not in live:
            continue
        # depth-first over the remaining digits, pruning values above the limit
        stack = [(s, 1, w[0])]
        while stack:
            s, j, val = stack.pop()
            if j == length:
                if s in a.accepting:
                    out.append(val)
                continue
            for d in (1, 0):
                t = a.delta[s].get(d)
                if t is None or t not in live:
                    continue
                nv = val + d * w[j]
                if nv <= limit:
                    stack.append((t, j + 1, nv))
    return sorted(out)


@dataclass(frozen=True)
class SetDescription:
    """How a one-track automaton's set looks: finite, cofinite, or neither."""

    kind: str  # "finite" | "cofinite" | "infinite"
    elements: tuple = ()  # members (finite) or non-members (cofinite)
    sample: tuple = field(default=(), compare=False)
    states: int = 0

    def __str__(self):
        if self.kind == "finite":
            return "finite: {" + ", ".join(map(str, self.elements)) + "}"
        if self.kind == "cofinite":
            return "N - {" + ", ".join(map(str, self.elements)) + "}"
        head = ", ".join(map(str, self.sample))
        return (f"infinite; complement infinite; automaton: {self.states} states (trimmed); "
                f"first elements: {head}")


def _has_useful_cycle(a: Automaton) -> bool:
    # cycles among useful states, ignoring the leading-zero loop at the start
    useful = _reachable(a) & a.coaccessible()
    succ = {s: [t for c, t in a.delta[s].items() if t in useful and not (s == a.start and c == ZERO and t == a.start)]
            for s in useful}
    color = dict.fromkeys(useful, 0)
    for root in useful:
        if color[root]:
            continue
        color[root] = 1
        stack = [(root, iter(succ[root]))]
        while stack:
            s, it = stack[-1]
            for t in it:
                if color[t] == 1:
                    return True
                if color[t] == 0:
                    color[t] = 1
                    stack.append((t, iter(succ[t])))
                    break
            else:
                color[s] = 2
                stack.pop()
    return False


def _finite_members(a: Automaton) -> list[int]:
    # acyclic apart from the leading-zero loop: every member has at most
    # (number of states) canonical digits
    live = a.coaccessible()
    out = [0] if a.start in a.accepting else []
    sys = a.system
    stack = []
    t = a.delta[a.start].get(1)
    if t is not None and t in live:
        stack.append((t, "1"))
    while stack:
        s, w = stack.pop()
        if s in a.accepting:
            out.append(sys.decode(w))
        for d in (0, 1):
            t = a.delta[s].get(d)
            if t is not None and t in live:
                stack.append((t, w + str(d)))
    return sorted(out)


def classify(a: Automaton, cap: int = 10_000, sample: int = 20) -> SetDescription:
    """Describe the set accepted by a one-track automaton."""
    if a.k != 1:
        raise AutomatonError("classify needs a one-track automaton")
    a = minimize(determinize(a))
    if not _has_useful_cycle(a):
        members = _finite_members(a)
        if len(members) > cap:
            raise ClassificationError(f"{len(members)} members exceed cap {cap}")
        return SetDescription("finite", tuple(members), states=a.trimmed_size)
    c = complement(a)
    if not _has_useful_cycle(c):
        missing = _finite_members(c)
        if len(missing) > cap:
            raise ClassificationError(f"{len(missing)} non-members exceed cap {cap}")
        return SetDescription("cofinite", tuple(missing), states=a.trimmed_size)
    head = []
    limit = 64
    while len(head) < sample:
        head = enumerate_values(a, limit)
        limit *= 4
    return SetDescription("infinite", (), tuple(head[:sample]), states=a.trimmed_size)


# -- vectorized membership ----------------------------------------------------


def digit_table(system: NumerationSystem, limit: int, length: int | None = None) -> np.ndarray:
    """Row ``n`` holds the left-padded canonical digits of ``n``."""
    if length is None:
        length = len(encode(limit, system))
    out = np.zeros((limit + 1, length), dtype=np.int8)
    for n in range(1, limit + 1):
        w = encode(n, system)
        out[n, length - len(w):] = [int(ch) for ch in w]
    return out


def transition_array(a: Automaton) -> np.ndarray:
    """Dense ``(states + 1, 2**k)`` table; the extra last row is the dead state."""
    a = determinize(a)
    dead = a.num_states
    t = np.full((dead + 1, 1 << a.k), dead, dtype=np.int64)
    for s, row in enumerate(a.delta):
        for c, u in row.items():
            t[s, c] = u
    return t


def accepts_many(a: Automaton, digit_columns: Sequence[np.ndarray]) -> np.ndarray:
    """Vectorized membership.

    ``digit_columns[i]`` is an ``(m, L)`` digit array for track ``i`` (all
    tracks padded to the same length ``L``); returns a boolean vector of length ``m``.
    """
    a = determinize(a)
    t = transition_array(a)
    nsym = t.shape[1]
    flat = (t * nsym).ravel().astype(np.int32)  # pre-scaled: next lookup is one add
    m, length = digit_columns[0].shape
    packed = np.zeros((m, length), dtype=np.uint8)
    for i, col in enumerate(digit_columns):
        packed |= col.view(np.uint8) << i
    sym = np.ascontiguousarray(packed.T).astype(np.int32)
    state = np.full(m, a.start * nsym, dtype=np.int32)
    for j in range(length):
        state = np.take(flat, state + sym[j])
    state //= nsym
    acc = np.zeros(t.shape[0], dtype=bool)
    acc[list(a.accepting)] = True
    return acc[state]
