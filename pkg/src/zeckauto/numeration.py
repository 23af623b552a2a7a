"""Fibonacci and Tribonacci numeration: canonical digit strings and exact oracles.

Digit strings are plain ``str`` objects over ``"0"``/``"1"``, most significant
digit first.  The empty string represents 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.signal import fftconvolve


@dataclass(frozen=True)
class NumerationSystem:
    """A positional system whose weights obey ``U_i = U_{i-1} + ... + U_{i-order}``.

    Weights are indexed from 2 (``U_2 = 1``) so that a word of length ``L`` uses
    weights ``U_{L+1}, ..., U_2``.
    """

    name: str
    order: int
    _basis: list = field(default_factory=list, repr=False, compare=False, hash=False)

    @property
    def forbidden(self) -> str:
        return "1" * self.order

    def basis(self, i: int) -> int:
        """Weight ``U_i`` for ``i >= 2``."""
        if i < 2:
            raise ValueError("basis index starts at 2")
        b = self._basis
        if not b:
            # U_2 .. U_{order+1} are 1, 2, 4, ... (greedy canonical words of one 1)
            b.extend(1 << j for j in range(self.order))
        while len(b) <= i - 2:
            b.append(sum(b[-self.order:]))
        return b[i - 2]

    def weights(self, length: int) -> list[int]:
        """MSD-first weights for a word of the given length."""
        return [self.basis(length + 1 - j) for j in range(length)]

    def encode(self, n: int) -> str:
        return encode(n, self)

    def decode(self, s: str | Sequence[int]) -> int:
        return decode(s, self)

    def __str__(self):
        return self.name


FIB = NumerationSystem("msd_fib", 2)
TRIB = NumerationSystem("msd_trib", 3)

SYSTEMS = {FIB.name: FIB, TRIB.name: TRIB}


def get_system(name: str | NumerationSystem) -> NumerationSystem:
    if isinstance(name, NumerationSystem):
        return name
    try:
        return SYSTEMS[name.lstrip("?")]
    except KeyError:
        raise ValueError(f"unknown numeration system {name!r}") from None


def encode(n: int, sys: NumerationSystem = FIB) -> str:
    """Greedy canonical representation of ``n``; ``encode(0)`` is ``""``."""
    if n < 0:
        raise ValueError("only natural numbers have a representation")
    if n == 0:
        return ""
    i = 2
    while sys.basis(i + 1) <= n:
        i += 1
    digits = []
    for j in range(i, 1, -1):
        w = sys.basis(j)
        if w <= n:
            digits.append("1")
            n -= w
        else:
            digits.append("0")
    return "".join(digits)


def decode(s: str | Sequence[int], sys: NumerationSystem = FIB) -> int:
    """Value of any digit word; leading zeros and non-canonical words allowed."""
    ds = [int(c) for c in s]
    return sum(d * w for d, w in zip(ds, sys.weights(len(ds))))


def is_canonical(s: str, sys: NumerationSystem = FIB) -> bool:
    return not s.startswith("0") and sys.forbidden not in s


def pad(words: Iterable[str], length: int | None = None) -> list[str]:
    """Left-pad words with zeros to a common length."""
    words = list(words)
    if length is None:
        length = max((len(w) for w in words), default=0)
    return [w.rjust(length, "0") for w in words]


# -- sequence oracles -------------------------------------------------------


def lower_wythoff(i: int) -> int:
    """``floor(i * phi)`` via the exact integer square root of ``5 i^2``."""
    if i < 1:
        raise ValueError("index starts at 1")
    return (i + isqrt(5 * i * i)) // 2


def upper_wythoff(i: int) -> int:
    return lower_wythoff(i) + i


@lru_cache(maxsize=None)
def _carlitz_class(n: int) -> str:
    # suffix class of "0" + (n-1)_T; the leading 0 makes 0 and 1 classifiable
    w = "0" + encode(n - 1, TRIB)
    if w.endswith("0"):
        return "A"
    if w.endswith("011"):
        return "C"
    return "B"


_carlitz_cache: dict[str, list[int]] = {"A": [], "B": [], "C": []}
_carlitz_next = [1]


def carlitz(kind: str, i: int) -> int:
    """i-th element (1-based) of the Carlitz-Scoville-Hoggatt sequence A, B or C."""
    kind = kind.removeprefix("carlitz")
    if i < 1:
        raise ValueError("index starts at 1")
    seq = _carlitz_cache[kind]
    while len(seq) < i:
        n = _carlitz_next[0]
        _carlitz_cache[_carlitz_class(n)].append(n)
        _carlitz_next[0] = n + 1
    return seq[i - 1]


ORACLES: dict[str, Callable[[int], int]] = {
    "lower": lower_wythoff,
    "upper": upper_wythoff,
    "carlitzA": lambda i: carlitz("A", i),
    "carlitzB": lambda i: carlitz("B", i),
    "carlitzC": lambda i: carlitz("C", i),
}


def oracle(kind: str, i: int) -> int:
    return ORACLES[kind](i)


def oracle_values(kind: str, limit: int) -> list[int]:
    """All values of an increasing oracle sequence that are ``<= limit``."""
    out = []
    i = 1
    while True:
        v = oracle(kind, i)
        if v > limit:
            return out
        out.append(v)
        i += 1


# Named sets used by the sumset theorems; the 0-suffixed variants add 0.
_SET_KINDS = {
    "L": ("lower", False),
    "L0": ("lower", True),
    "U": ("upper", False),
    "U0": ("upper", True),
    "A": ("carlitzA", False),
    "B": ("carlitzB", False),
    "C": ("carlitzC", False),
}


def indicator(gen, limit: int) -> np.ndarray:
    """0/1 integer vector over ``0..limit`` for a named set or an iterable of naturals."""
    v = np.zeros(limit + 1, dtype=np.int64)
    if isinstance(gen, str):
        kind, with_zero = _SET_KINDS[gen]
        vals = oracle_values(kind, limit)
        if with_zero:
            vals = [0] + vals
    elif callable(gen):
        vals = [n for n in range(limit + 1) if gen(n)]
    else:
        vals = [n for n in gen if 0 <= n <= limit]
    v[vals] = 1
    return v


def representation_counts(sets: Sequence, limit: int) -> np.ndarray:
    """Number of ordered tuples (one element per set) summing to each ``n <= limit``.

    Exact integer convolution; intended for moderate limits.
    """
    acc = indicator(sets[0], limit)
    for s in sets[1:]:
        acc = np.convolve(acc, indicator(s, limit))[: limit + 1]
    return acc


def brute_force_sumset(sets: Sequence, limit: int) -> list[int]:
    """Sorted values ``<= limit`` expressible as a sum of one element from each set.

    ``sets`` entries are names (``"L"``, ``"U"``, ``"L0"``, ``"U0"``, ``"A"``,
    ``"B"``, ``"C"``), iterables of naturals, or membership predicates.
    """
    if limit < 0:
        return []
    if limit <= 5000:
        counts = representation_counts(sets, limit)
        return np.flatnonzero(counts).tolist()
    acc = indicator(sets[0], limit).astype(float)
    for s in sets[1:]:
        acc = fftconvolve(acc, indicator(s, limit).astype(float))[: limit + 1]
        # counts are integers; threshold away FFT round-off before the next pass
        acc = (acc > 0.5).astype(float)
    return np.flatnonzero(acc > 0.5).tolist()
