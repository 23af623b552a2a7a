"""Interpreter for ``reg`` / ``def`` / ``eval`` command scripts.

Each line holds one command in the Walnut-style surface syntax, optionally
terminated by ``:`` or ``;``::

    reg end0 msd_fib "(0|1)*0":
    def lower "?msd_fib Em $end0(m) & n=m+1":
    eval count2upp n "?msd_fib (m < n) & E a,b (m=a+b) & $upper(a) & $upper(b)":

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .automata import Automaton, AutomatonError, classify
from .counting import CountingError, LinearRepresentation, build_counter
from .logic import CompileError, Environment, FormulaSyntaxError, compile_formula, parse_formula
from .regexlang import RegexSyntaxError, compile_regex
from .relations import DEFAULT_BOUND

log = logging.getLogger(__name__)

_REG = re.compile(r'reg\s+(\w+)\s+(\w+)\s+"([^"]*)"\s*[:;]?\s*$')
_DEF = re.compile(r'def\s+(\w+)\s+"([^"]*)"\s*[:;]?\s*$')
_EVAL = re.compile(r'eval\s+(\w+)\s+(\w+(?:\s*,\s*\w+)*)\s+"([^"]*)"\s*[:;]?\s*$')


class ScriptError(Exception):
    def __init__(self, msg, line=None, column=None):
        where = f"line {line}" + (f", column {column}" if column is not None else "") if line else ""
        super().__init__(f"{where}: {msg}" if where else msg)
        self.line = line
        self.column = column


def bundled_script(name: str) -> str:
    """Text of a script shipped with the package (``wythoff`` or ``tribonacci``)."""
    return resources.files("zeckauto").joinpath("data", f"{name}.txt").read_text()


@dataclass
class Session:
    """Named automata and counters produced by running commands in order."""

    env: Environment = field(default_factory=Environment)
    counters: dict = field(default_factory=dict)
    adder_bound: int = DEFAULT_BOUND
    enum_cap: int = 10_000
    out_dir: Path | None = None
    kinds: dict = field(default_factory=dict)

    def names(self):
        return list(self.kinds)

    def _claim(self, name):
        if name in self.kinds:
            raise CompileError(f"{name!r} is already defined")

    def reg(self, name, system, regex):
        self._claim(name)
        self.env = self.env.define(name, compile_regex(regex, system))
        self.kinds[name] = "reg"
        return self.env[name]

    def define(self, name, formula):
        self._claim(name)
        self.env = self.env.define(name, compile_formula(formula, self.env, self.adder_bound))
        self.kinds[name] = "def"
        return self.env[name]

    def eval(self, name, params, formula) -> LinearRepresentation:
        self._claim(name)
        f = parse_formula(formula)
        a = compile_formula(f, self.env, self.adder_bound)
        rep = build_counter(a, params)
        self.counters[name] = rep
        self.kinds[name] = "eval"
        return rep

    def execute(self, line: str, lineno: int | None = None):
        text = line.strip()
        if not text or text.startswith("#"):
            return None
        try:
            if m := _REG.match(text):
                return self.reg(*m.groups())
            if m := _DEF.match(text):
                return self.define(*m.groups())
            if m := _EVAL.match(text):
                name, params, formula = m.groups()
                return self.eval(name, [p.strip() for p in params.split(",")], formula)
        except (FormulaSyntaxError, RegexSyntaxError) as e:
            # offset inside the quoted formula -> column on the line
            col = line.index('"') + 2 + e.offset if '"' in line else None
            raise ScriptError(str(e), lineno, col) from e
        except (CompileError, CountingError, AutomatonError, ValueError) as e:
            raise ScriptError(str(e), lineno) from e
        raise ScriptError(f"cannot parse command {text.split()[0]!r}", lineno, 1)

    def run(self, text: str) -> list[str]:
        """Execute every line; returns the names defined, in order."""
        done = []
        for i, line in enumerate(text.splitlines(), 1):
            before = len(self.kinds)
            self.execute(line, i)
            if len(self.kinds) > before:
                name = list(self.kinds)[-1]
                done.append(name)
                log.info("line %d: %s %s", i, self.kinds[name], name)
                if self.out_dir is not None:
                    self.save(name)
        if self.out_dir is not None:
            self.write_manifest()
        return done

    # -- lookup and description --------------------------------------------------

    def automaton(self, name) -> Automaton:
        if name not in self.env:
            raise ScriptError(f"no automaton named {name!r}")
        return self.env[name]

    def describe(self, name) -> str:
        if name in self.counters:
            rep = self.counters[name]
            return (f"linear representation of rank {rep.rank}; parameters {list(rep.params)}, "
                    f"counting {list(rep.counted)}")
        a = self.automaton(name)
        if a.k == 1:
            d = classify(a, cap=self.enum_cap)
            if d.kind == "infinite" and self.out_dir is not None:
                return f"{d}; DOT: {Path(self.out_dir) / (name + '.dot')}"
            return str(d)
        return f"relation on tracks {list(a.tracks)}; {a.trimmed_size} states (trimmed)"

    # -- persistence -----------------------------------------------------------

    def save(self, name):
        out = Path(self.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if name in self.counters:
            (out / f"{name}.linrep.json").write_text(self.counters[name].to_json() + "\n")
            return
        a = self.env[name]
        (out / f"{name}.json").write_text(a.to_json() + "\n")
        (out / f"{name}.dot").write_text(a.to_dot(name))

    def manifest(self) -> dict:
        entries = {}
        for name, kind in self.kinds.items():
            if kind == "eval":
                rep = self.counters[name]
                entries[name] = {"kind": kind, "file": f"{name}.linrep.json", "rank": rep.rank,
                                 "params": list(rep.params)}
            else:
                a = self.env[name]
                entries[name] = {"kind": kind, "file": f"{name}.json", "dot": f"{name}.dot",
                                 "system": a.system.name, "tracks": list(a.tracks),
                                 "states": a.num_states}
        return {"order": list(self.kinds), "entries": entries}

    def write_manifest(self):
        path = Path(self.out_dir) / "manifest.json"
        path.write_text(json.dumps(self.manifest(), indent=1, sort_keys=True) + "\n")

    @classmethod
    def load(cls, out_dir, **kw) -> "Session":
        """Rebuild a session from a directory written by :meth:`run`."""
        import numpy as np

        out = Path(out_dir)
        man = json.loads((out / "manifest.json").read_text())
        s = cls(out_dir=None, **kw)
        for name in man["order"]:
            e = man["entries"][name]
            if e["kind"] == "eval":
                d = json.loads((out / e["file"]).read_text())
                k = len(d["params"])
                mu = {sum(int(ch) << i for i, ch in enumerate(key)): np.array(m, dtype=object).reshape(d["rank"], d["rank"])
                      for key, m in d["mu"].items()}
                s.counters[name] = LinearRepresentation(
                    np.array(d["v"], dtype=object), mu, np.array(d["w"], dtype=object),
                    d["system"], tuple(d["params"]), tuple(d["counted"]))
                assert len(mu) == 1 << k
            else:
                a = Automaton.from_json((out / e["file"]).read_text())
                s.env = s.env.define(name, a)
            s.kinds[name] = e["kind"]
        s.out_dir = out
        return s


def run_script(path, out_dir=None, **kw) -> Session:
    """Run a script file in a fresh session."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ScriptError(f"cannot read script {path}: {e.strerror}") from e
    s = Session(out_dir=Path(out_dir) if out_dir else None, **kw)
    s.run(text)
    return s
