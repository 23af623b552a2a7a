"""First-order formulas over a numeration system, compiled to automata.

Surface syntax follows the command language used for automatic-sequence
provers::

    ?msd_fib E a,b (n=a+b) & $lower(a) & $upper(b)

``E``/``A`` are quantifiers (their scope extends as far right as possible),
``~ & | => <=>`` are connectives (listed from tightest to loosest), atoms
compare sums of variables and literals, and ``$name(args)`` calls a
previously defined automaton.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from . import automata as au
from .automata import Automaton
from .numeration import FIB, NumerationSystem, get_system
from .regexlang import compile_regex
from .relations import DEFAULT_BOUND, build_adder, build_comparison, build_constant


class FormulaSyntaxError(ValueError):
    def __init__(self, msg, offset, text=""):
        super().__init__(f"{msg} at offset {offset}")
        self.offset = offset
        self.text = text


class CompileError(ValueError):
    pass


# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Plus:
    left: object
    right: object


@dataclass(frozen=True)
class Cmp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Quant:
    kind: str  # "E" or "A"
    vars: tuple
    body: object


@dataclass(frozen=True)
class Formula:
    system: NumerationSystem
    root: object
    text: str = ""

    @property
    def free_vars(self) -> tuple:
        return free_vars(self.root)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<system>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<call>\$[A-Za-z_][A-Za-z0-9_]*)
  | (?P<num>\d+)
  | (?P<quant>[EA])
  | (?P<ident>[a-z_][A-Za-z0-9_]*)
  | (?P<op><=>|=>|<=|>=|!=|[=<>~&|+(),])
""", re.VERBOSE)

_RELOPS = {"=": "eq", "!=": "ne", "<": "lt", "<=": "le", ">": "gt", ">=": "ge"}


def tokenize(text: str):
    out = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), i))
        i = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, value=None):
        kind, v, _ = self.toks[self.i]
        if value is None:
            return kind, v
        return v == value and kind in ("op", "quant")

    def error(self, msg):
        raise FormulaSyntaxError(msg, self.toks[self.i][2], self.text)

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def formula(self):
        return self.iff()

    def iff(self):
        node = self.implies()
        while self.peek("<=>"):
            self.take()
            node = Bin("<=>", node, self.implies())
        return node

    def implies(self):
        node = self.disj()
        if self.peek("=>"):
            self.take()
            node = Bin("=>", node, self.implies())
        return node

    def disj(self):
        node = self.conj()
        while self.peek("|"):
            self.take()
            node = Bin("|", node, self.conj())
        return node

    def conj(self):
        node = self.unary()
        while self.peek("&"):
            self.take()
            node = Bin("&", node, self.unary())
        return node

    def unary(self):
        kind, v = self.peek()
        if kind == "op" and v == "~":
            self.take()
            return Not(self.unary())
        if kind == "quant":
            self.take()
            names = [self.ident()]
            while self.peek(","):
                self.take()
                names.append(self.ident())
            return Quant(v, tuple(names), self.formula())
        return self.primary()

    def ident(self):
        kind, v, _ = self.toks[self.i]
        if kind != "ident":
            self.error(f"expected a variable name, found {v or 'end of input'!r}")
        self.i += 1
        return v

    def primary(self):
        kind, v = self.peek()
        if kind == "op" and v == "(":
            save = self.i
            try:
                self.take()
                node = self.formula()
                self.take(")")
                return node
            except FormulaSyntaxError as first:
                self.i = save  # maybe a parenthesized term: (a+b)=n
                try:
                    return self._comparison()
                except FormulaSyntaxError as second:
                    # report whichever reading got further
                    raise first if first.offset >= second.offset else second
        if kind == "call":
            self.take()
            self.take("(")
            args = [self.term()]
            while self.peek(","):
                self.take()
                args.append(self.term())
            self.take(")")
            return Call(v[1:], tuple(args))
        return self._comparison()

    def _comparison(self):
        left = self.term()
        kind, op = self.peek()
        if kind != "op" or op not in _RELOPS:
            self.error(f"expected a comparison, found {op or 'end of input'!r}")
        self.take()
        return Cmp(_RELOPS[op], left, self.term())

    def term(self):
        node = self.operand()
        while self.peek("+"):
            self.take()
            node = Plus(node, self.operand())
        return node

    def operand(self):
        kind, v, _ = self.toks[self.i]
        if kind == "ident":
            self.i += 1
            return Var(v)
        if kind == "num":
            self.i += 1
            return Num(int(v))
        if kind == "op" and v == "(":
            self.i += 1
            node = self.term()
            self.take(")")
            return node
        self.error(f"expected a term, found {v or 'end of input'!r}")


def parse_formula(text: str, default_system=FIB) -> Formula:
    """Parse a formula, optionally prefixed by a system tag such as ``?msd_trib``."""
    p = _Parser(text)
    system = get_system(default_system)
    kind, v = p.peek()
    if kind == "system":
        try:
            system = get_system(v)
        except ValueError:
            p.error(f"unknown numeration system {v!r}")
        p.take()
    root = p.formula()
    if p.peek()[0] != "end":
        p.error(f"unexpected {p.peek()[1]!r}")
    return Formula(system, root, text)


# -- free variables -----------------------------------------------------------


def _term_vars(t):
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, Plus):
        yield from _term_vars(t.left)
        yield from _term_vars(t.right)


def _walk_free(node, bound, out):
    if isinstance(node, Cmp):
        names = itertools.chain(_term_vars(node.left), _term_vars(node.right))
    elif isinstance(node, Call):
        names = itertools.chain.from_iterable(_term_vars(a) for a in node.args)
    elif isinstance(node, Not):
        return _walk_free(node.body, bound, out)
    elif isinstance(node, Bin):
        _walk_free(node.left, bound, out)
        return _walk_free(node.right, bound, out)
    elif isinstance(node, Quant):
        return _walk_free(node.body, bound | set(node.vars), out)
    else:
        raise TypeError(node)
    for n in names:
        if n not in bound:
            out.setdefault(n, None)


def free_vars(node) -> tuple:
    """Free variables in order of first (left-to-right) appearance."""
    out: dict = {}
    _walk_free(node, set(), out)
    return tuple(out)


# -- environment ----------------------------------------------------------------


class Environment(Mapping):
    """Persistent name -> automaton map; :meth:`define` returns a new environment."""

    def __init__(self, entries=None):
        self._d = dict(entries or {})

    def __getitem__(self, name):
        return self._d[name]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def define(self, name: str, automaton: Automaton) -> "Environment":
        if name in self._d:
            raise CompileError(f"{name!r} is already defined")
        d = dict(self._d)
        d[name] = automaton
        return Environment(d)


def define(env: Environment, name: str, formula: str | Formula) -> Environment:
    """Bind ``name`` to the automaton of ``formula``."""
    return env.define(name, compile_formula(formula, env))


def define_regex(env: Environment, name: str, system, regex: str) -> Environment:
    return env.define(name, compile_regex(regex, system))


# -- compilation ---------------------------------------------------------------


def _flatten(term) -> list:
    if isinstance(term, Plus):
        return _flatten(term.left) + _flatten(term.right)
    return [term]


class _Compiler:
    def __init__(self, env: Mapping, system: NumerationSystem, adder_bound: int = DEFAULT_BOUND):
        self.env = env
        self.system = system
        self.adder_bound = adder_bound
        self.fresh_count = 0

    def fresh(self):
        self.fresh_count += 1
        return f"#t{self.fresh_count}"

    # terms become single variables plus side constraints over fresh variables

    def operand(self, term, constraints, fresh, target=None):
        items = _flatten(term)
        const = sum(i.value for i in items if isinstance(i, Num))
        names = [i.name for i in items if isinstance(i, Var)]
        if const or not names:
            k = self.fresh()
            fresh.append(k)
            constraints.append(build_constant(self.system, const, k))
            names.append(k)
        cur = names[0]
        for j, nxt in enumerate(names[1:]):
            last = j == len(names) - 2
            out = target if (last and target is not None) else self.fresh()
            if out != target:
                fresh.append(out)
            constraints.append(build_adder(self.system, self.adder_bound, tracks=(cur, nxt, out)))
            cur = out
        return cur

    def finish(self, constraints, fresh):
        out = au.intersect(*constraints)
        for v in fresh:
            if v in out.tracks:
                out = au.project(out, v)
        return out

    def relation(self, op, x, y):
        if x == y:
            if op in ("eq", "le", "ge"):
                return au.validity(self.system, [x])
            return au.empty(self.system, [x])
        return build_comparison(self.system, op, (x, y))

    def compile(self, node) -> Automaton:
        if isinstance(node, Cmp):
            constraints, fresh = [], []
            left, right = node.left, node.right
            if node.op == "eq" and isinstance(left, Plus) and isinstance(right, Var):
                left, right = right, left
            if node.op == "eq" and isinstance(left, Var) and isinstance(right, Plus):
                out = self.operand(right, constraints, fresh, target=left.name)
                if out != left.name:
                    constraints.append(self.relation("eq", left.name, out))
            else:
                x = self.operand(left, constraints, fresh)
                y = self.operand(right, constraints, fresh)
                constraints.append(self.relation(node.op, x, y))
            return self.finish(constraints, fresh)
        if isinstance(node, Call):
            if node.name not in self.env:
                raise CompileError(f"undefined predicate ${node.name}")
            a = self.env[node.name]
            if a.system != self.system:
                raise CompileError(
                    f"system mismatch: ${node.name} is a {a.system.name} automaton, formula uses {self.system.name}")
            if len(node.args) != a.k:
                raise CompileError(f"${node.name} takes {a.k} arguments, got {len(node.args)}")
            constraints, fresh = [], []
            names = [self.operand(t, constraints, fresh) for t in node.args]
            return self.finish([au.rename(a, names)] + constraints, fresh)
        if isinstance(node, Not):
            return au.complement(self.compile(node.body))
        if isinstance(node, Bin):
            left, right = self.compile(node.left), self.compile(node.right)
            if node.op == "&":
                return au.product(left, right, "and")
            if node.op == "|":
                return au.product(left, right, "or")
            if node.op == "=>":
                return au.product(au.complement(left), right, "or")
            if node.op == "<=>":
                return au.product(au.product(au.complement(left), right, "or"),
                                  au.product(au.complement(right), left, "or"), "and")
            raise CompileError(f"unknown connective {node.op}")
        if isinstance(node, Quant):
            body = self.compile(node.body)
            if node.kind == "A":
                body = au.complement(body)
            for v in node.vars:
                if v in body.tracks:
                    body = au.project(body, v)
            return au.complement(body) if node.kind == "A" else body
        raise TypeError(node)


def compile_formula(formula: str | Formula, env: Mapping | None = None,
                    adder_bound: int = DEFAULT_BOUND) -> Automaton:
    """Automaton over the formula's free variables (tracks in first-appearance order)."""
    if isinstance(formula, str):
        formula = parse_formula(formula)
    comp = _Compiler(env if env is not None else {}, formula.system, adder_bound)
    a = comp.compile(formula.root)
    want = formula.free_vars
    if set(want) != set(a.tracks):
        raise CompileError(f"free variables {want} do not match tracks {a.tracks}")
    return au.reorder(a, want)


# -- bounded brute-force semantics ----------------------------------------------------


def _term_value(term, env):
    if isinstance(term, Var):
        return env[term.name]
    if isinstance(term, Num):
        return term.value
    return _term_value(term.left, env) + _term_value(term.right, env)


def _conjuncts(node):
    if isinstance(node, Bin) and node.op == "&":
        return _conjuncts(node.left) + _conjuncts(node.right)
    return [node]


def _equation_for(var, node):
    """An equation conjunct of ``node`` in which ``var`` has a nonzero net coefficient."""
    for c in _conjuncts(node):
        if isinstance(c, Cmp) and c.op == "eq":
            coef = (sum(1 for n in _term_vars(c.left) if n == var)
                    - sum(1 for n in _term_vars(c.right) if n == var))
            if coef:
                others = (set(_term_vars(c.left)) | set(_term_vars(c.right))) - {var}
                return c, coef, others
    return None


def _solve(var, eq, env):
    c, coef, others = eq
    if not others <= env.keys():
        return None
    trial = dict(env, **{var: 0})
    rest = _term_value(c.left, trial) - _term_value(c.right, trial)
    if rest % coef:
        return ()
    return (-rest // coef,)


@lru_cache(maxsize=None)
def _exists_plan(node: Quant):
    # checks[i]: conjuncts that become fully bound once node.vars[i] is bound
    # (outer variables are always bound during evaluation)
    names = node.vars
    checks = []
    for i, var in enumerate(names):
        done = set(names[: i + 1])
        checks.append(tuple(c for c in _conjuncts(node.body)
                            if var in (fv := set(free_vars(c))) and (fv & set(names)) <= done))
    return checks, _equation_for(names[-1], node.body)


def _exists(node, env, predicates, bound) -> bool:
    # Bind variables one at a time, pruning on conjuncts that are already
    # decided; the last variable is solved from an equation when possible.
    names, body = node.vars, node.body
    checks, eq = _exists_plan(node)
    last = len(names) - 1

    def search(i, cur):
        var = names[i]
        if i == last:
            cands = _solve(var, eq, cur) if eq else None
            for v in range(bound + 1) if cands is None else cands:
                if 0 <= v <= bound:
                    cur[var] = v
                    if evaluate(body, cur, predicates, bound):
                        return True
            return False
        for v in range(bound + 1):
            cur[var] = v
            if all(evaluate(c, cur, predicates, bound) for c in checks[i]):
                if search(i + 1, cur):
                    return True
        return False

    return search(0, dict(env))


_CMP = {
    "eq": lambda a, b: a == b, "ne": lambda a, b: a != b,
    "lt": lambda a, b: a < b, "le": lambda a, b: a <= b,
    "gt": lambda a, b: a > b, "ge": lambda a, b: a >= b,
}


def evaluate(node, env: dict, predicates: Mapping[str, Callable], bound: int) -> bool:
    """Truth of ``node`` with quantifiers ranging over ``0..bound``.

    Independent of the automaton machinery; meant as an oracle for formulas
    whose witnesses never exceed ``bound``.
    """
    if isinstance(node, Formula):
        node = node.root
    if isinstance(node, Cmp):
        return _CMP[node.op](_term_value(node.left, env), _term_value(node.right, env))
    if isinstance(node, Call):
        return bool(predicates[node.name](*(_term_value(t, env) for t in node.args)))
    if isinstance(node, Not):
        return not evaluate(node.body, env, predicates, bound)
    if isinstance(node, Bin):
        left = evaluate(node.left, env, predicates, bound)
        if node.op == "&":
            return left and evaluate(node.right, env, predicates, bound)
        if node.op == "|":
            return left or evaluate(node.right, env, predicates, bound)
        if node.op == "=>":
            return (not left) or evaluate(node.right, env, predicates, bound)
        return left == evaluate(node.right, env, predicates, bound)
    if isinstance(node, Quant):
        if node.kind == "E":
            return _exists(node, env, predicates, bound)
        for values in itertools.product(range(bound + 1), repeat=len(node.vars)):
            if not evaluate(node.body, dict(env, **dict(zip(node.vars, values))), predicates, bound):
                return False
        return True
    raise TypeError(node)
