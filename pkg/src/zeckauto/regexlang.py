"""Digit regular expressions (``|``, concatenation, ``*``, parentheses) compiled to automata."""

from __future__ import annotations

from dataclasses import dataclass

from .automata import Automaton, close_leading_zeros, determinize, intersect, validity
from .numeration import get_system


class RegexSyntaxError(ValueError):
    def __init__(self, msg, offset):
        super().__init__(f"{msg} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Lit:
    digit: int


@dataclass(frozen=True)
class Alt:
    left: object
    right: object


@dataclass(frozen=True)
class Cat:
    left: object
    right: object


@dataclass(frozen=True)
class Star:
    inner: object


class _Parser:
    def __init__(self, text):
        self.text = text
        self.i = 0

    def peek(self):
        return self.text[self.i] if self.i < len(self.text) else None

    def parse(self):
        node = self.alt()
        if self.i != len(self.text):
            raise RegexSyntaxError(f"unexpected {self.text[self.i]!r}", self.i)
        return node

    def alt(self):
        node = self.cat()
        while self.peek() == "|":
            self.i += 1
            node = Alt(node, self.cat())
        return node

    def cat(self):
        node = self.star()
        while self.peek() not in (None, "|", ")"):
            node = Cat(node, self.star())
        return node

    def star(self):
        node = self.atom()
        while self.peek() == "*":
            self.i += 1
            node = Star(node)
        return node

    def atom(self):
        c = self.peek()
        if c is None:
            raise RegexSyntaxError("unexpected end of expression", self.i)
        if c in "01":
            self.i += 1
            return Lit(int(c))
        if c == "(":
            self.i += 1
            node = self.alt()
            if self.peek() != ")":
                raise RegexSyntaxError("expected ')'", self.i)
            self.i += 1
            return node
        raise RegexSyntaxError(f"unexpected {c!r}", self.i)


def parse_regex(text: str):
    """Parse a digit regex; whitespace is not allowed inside the expression."""
    return _Parser(text).parse()


class _Thompson:
    """Thompson construction; state ``None`` edges are epsilon moves."""

    def __init__(self):
        self.edges: list[list[tuple]] = []

    def new(self):
        self.edges.append([])
        return len(self.edges) - 1

    def build(self, node):
        s, f = self.new(), self.new()
        if isinstance(node, Lit):
            self.edges[s].append((node.digit, f))
        elif isinstance(node, Cat):
            s1, f1 = self.build(node.left)
            s2, f2 = self.build(node.right)
            self.edges[s].append((None, s1))
            self.edges[f1].append((None, s2))
            self.edges[f2].append((None, f))
        elif isinstance(node, Alt):
            for part in (node.left, node.right):
                s1, f1 = self.build(part)
                self.edges[s].append((None, s1))
                self.edges[f1].append((None, f))
        elif isinstance(node, Star):
            s1, f1 = self.build(node.inner)
            self.edges[s] += [(None, s1), (None, f)]
            self.edges[f1] += [(None, s1), (None, f)]
        else:
            raise TypeError(node)
        return s, f

    def closure(self, states):
        seen = set(states)
        stack = list(states)
        while stack:
            s = stack.pop()
            for lab, t in self.edges[s]:
                if lab is None and t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen


def thompson_nfa(ast, system, track="x") -> Automaton:
    """Epsilon-free one-track NFA for the regex (no validity or zero closure)."""
    th = _Thompson()
    s, f = th.build(ast)
    closures = [th.closure([q]) for q in range(len(th.edges))]
    rows = []
    for q in range(len(th.edges)):
        row: dict[int, set] = {}
        for p in closures[q]:
            for lab, t in th.edges[p]:
                if lab is not None:
                    row.setdefault(lab, set()).update(closures[t])
        rows.append({c: tuple(sorted(ts)) for c, ts in row.items()})
    acc = [q for q in range(len(th.edges)) if f in closures[q]]
    return Automaton(get_system(system), [track], rows, (s,), acc, deterministic=False)


def compile_regex(ast, system, track: str = "x") -> Automaton:
    """Minimal DFA of the regex language restricted to valid words, closed under leading zeros.

    A word is accepted when some zero-padding of its canonical form matches,
    so ``(0|1)*0`` also accepts the empty word (the value 0).
    """
    if isinstance(ast, str):
        ast = parse_regex(ast)
    system = get_system(system)
    dfa = determinize(thompson_nfa(ast, system, track))
    return close_leading_zeros(intersect(dfa, validity(system, [track])))
