import itertools
import json
import random

import pytest
from hypothesis import given, strategies as st

from zeckauto import automata as au
from zeckauto.logic import compile_formula
from zeckauto.numeration import FIB, TRIB, brute_force_sumset, decode, encode, oracle_values
from zeckauto.bench import fib_minus_one_fixture, leading_zero_sample, random_automaton
from zeckauto.regexlang import compile_regex, thompson_nfa, parse_regex
from zeckauto.relations import build_adder, build_comparison, build_constant


def words(maxlen):
    for n in range(maxlen + 1):
        for t in itertools.product("01", repeat=n):
            yield "".join(t)


def ends_in_zero_nfa():
    # state 0 loops on everything and guesses the last 0
    return au.Automaton(FIB, ["x"], [{0: (0, 1), 1: (0,)}, {}], (0,), [1], deterministic=False)


def test_determinize_ends_in_zero():
    nfa = ends_in_zero_nfa()
    dfa = au.determinize(nfa)
    assert dfa.deterministic
    for w in words(14):
        assert dfa.accepts_word(w) == nfa.accepts_word(w) == w.endswith("0")


def test_determinize_idempotent_on_dfa():
    a = compile_regex("(0|1)*0", FIB)
    assert au.equivalent(au.determinize(a), a)


def test_project_adder_z_accepts_every_pair():
    pairs = au.project(build_adder(FIB), "z")
    assert pairs.tracks == ("x", "y")
    for x in range(201):
        for y in range(201):
            assert pairs.accepts(x, y)


def test_minimize_idempotent_and_language_preserving(fib):
    for name in ("lower", "upper", "uplusu", "thm35i"):
        a = fib.env[name]
        m = au.minimize(a)
        assert m.num_states == au.minimize(m).num_states
        assert au.equivalent(m, a)


def test_minimize_rejects_nfa():
    with pytest.raises(au.AutomatonError):
        au.minimize(ends_in_zero_nfa())


def test_uplusu_twelve_states(fib):
    assert au.minimize(fib.env["uplusu"]).trimmed_size == 12


def test_regex_and_formula_routes_give_same_minimal_dfa(fib):
    # lower Wythoff numbers are exactly those whose representation ends in an even number of 0s
    via_regex = au.rename(compile_regex("(0|1)*1(00)*", FIB), ["n"])
    via_formula = fib.env["lower"]
    assert au.minimize(via_regex).to_json() == au.minimize(via_formula).to_json()


def test_product_examples(fib):
    e0, e01 = fib.env["end0"], fib.env["end01"]
    assert au.product(e0, au.rename(e01, e0.tracks), "and").is_empty()
    a = fib.env["lower"]
    assert au.equivalent(au.product(a, a, "and"), a)
    both = au.product(fib.env["lower"], fib.env["upper"], "or")
    assert au.enumerate_values(both, 10_000) == list(range(1, 10_001))


def test_product_cylindrifies_missing_tracks(fib):
    a = au.product(fib.env["lower"], au.rename(fib.env["upper"], ["m"]), "and")
    assert a.tracks == ("n", "m")
    assert a.accepts(1, 2) and not a.accepts(2, 2)
    b = au.product(fib.env["lower"], au.rename(fib.env["upper"], ["m"]), "or")
    assert b.accepts(1, 4) and b.accepts(4, 2) and not b.accepts(2, 1)


def test_product_rejects_mixed_systems(fib, trib):
    with pytest.raises(au.AutomatonError):
        au.product(fib.env["lower"], au.rename(trib.env["aa"], ["n"]), "and")


def test_complement_examples(fib):
    a = fib.env["lower"]
    assert au.equivalent(au.complement(au.complement(a)), a)
    e = au.empty(FIB, ["n"])
    assert au.enumerate_values(au.complement(e), 500) == list(range(501))
    assert str(au.classify(fib.env["thm31i"])) == "finite: {0, 1, 3}"


def test_complement_stays_valid():
    c = au.complement(build_constant(FIB, 3))
    assert not c.accepts_word("11")
    assert c.accepts_word("1000")


def test_project_examples(fib):
    eq = build_comparison(FIB, "eq")
    assert au.equivalent(au.project(eq, "y"), au.universal(FIB, ["x"]))
    with pytest.raises(au.AutomatonError):
        au.project(eq, "q")
    body = compile_formula("?msd_fib (n=a+b) & $lower(a) & $lower(b)", fib.env)
    ll = au.project(au.project(body, "a"), "b")
    assert au.classify(au.complement(ll)).elements == (0, 1, 3)


def test_project_needs_longer_witness():
    # E y (x = y+1 ... ) style: witness may be longer than x; here y = x + 8 always exists
    rel = compile_formula("?msd_fib y = x + 8")
    assert au.enumerate_values(au.project(rel, "y"), 300) == list(range(301))
    assert au.enumerate_values(au.project(rel, "x"), 300) == list(range(8, 301))


def test_classify_examples(fib):
    assert au.classify(fib.env["thm37i"]).elements == (0, 1, 2, 3, 4, 6, 9)
    assert au.classify(fib.env["thm38iii"]).elements == (0, 1, 3, 8)
    d = au.classify(fib.env["uplusu"])
    assert d.kind == "infinite"
    assert str(d).startswith("infinite; complement infinite; automaton: 12 states (trimmed)")
    assert str(au.classify(au.empty(FIB, ["n"]))) == "finite: {}"
    assert str(au.classify(au.complement(build_constant(FIB, 0)))) == "N - {0}"


def test_classify_cap():
    big = compile_formula("?msd_fib x < 200")
    with pytest.raises(au.ClassificationError):
        au.classify(big, cap=50)
    with pytest.raises(au.ClassificationError):
        au.classify(au.complement(big), cap=50)
    assert au.classify(big).elements == tuple(range(200))


def test_equivalent_examples(fib):
    a = fib.env["lower"]
    assert au.equivalent(a, a)
    fixture = au.union(fib_minus_one_fixture(), build_constant(FIB, 0))
    assert au.equivalent(au.rename(fixture, ["n"]), fib.env["thm35i"])
    assert not au.equivalent(fib.env["lower"], fib.env["upper"])
    with pytest.raises(au.AutomatonError):
        au.equivalent(fib.env["lower"], build_comparison(FIB, "eq"))


def test_enumerate_examples(fib):
    assert au.enumerate_values(fib_minus_one_fixture(), 12) == [1, 2, 4, 7, 12]
    assert au.enumerate_values(au.empty(FIB, ["n"]), 100) == []
    assert au.enumerate_values(fib.env["lower"], 16) == [1, 3, 4, 6, 8, 9, 11, 12, 14, 16]


SUMSETS = {
    "lplusu": ["L", "U"], "uplusu": ["U", "U"],
}


def test_enumerate_agrees_with_sumsets(fib, trib):
    lim = 100_000
    for name, sets in SUMSETS.items():
        assert au.enumerate_values(fib.env[name], lim) == brute_force_sumset(sets, lim), name
    # complement-valued definitions, both systems
    pairs = [(fib, "thm31i", ["L", "L"]), (fib, "thm31ii", ["L0", "L"]), (fib, "thm35i", ["L", "U"]),
             (fib, "thm35ii", ["L0", "U"]), (fib, "thm35iii", ["L", "U0"]), (trib, "aaplusbb", ["A", "B"])]
    for s, name, sets in pairs:
        members = set(brute_force_sumset(sets, lim))
        want = [n for n in range(lim + 1) if n not in members]
        assert au.enumerate_values(s.env[name], lim) == want, name


def test_every_harness_automaton_is_leading_zero_closed(fib, trib):
    rng = random.Random(7)
    for s in (fib, trib):
        for name, a in s.env.items():
            assert au.is_leading_zero_closed(a), name
            assert leading_zero_sample(a, rng), name


@given(st.integers(0, 2**32))
def test_de_morgan_random(seed):
    rng = random.Random(seed)
    a = random_automaton(rng, states=rng.randrange(1, 7))
    b = random_automaton(rng, states=rng.randrange(1, 7))
    lhs = au.complement(au.product(a, b, "and"))
    rhs = au.product(au.complement(a), au.complement(b), "or")
    assert au.equivalent(lhs, rhs)
    assert au.equivalent(au.complement(au.complement(a)), a)
    assert au.is_leading_zero_closed(lhs)


@given(st.integers(0, 2**32))
def test_random_operations_preserve_leading_zero_closure(seed):
    rng = random.Random(seed)
    a = random_automaton(rng, system=TRIB, states=5)
    b = au.rename(random_automaton(rng, system=TRIB, states=5), ["m"])
    both = au.product(a, b, "or")
    assert leading_zero_sample(both, rng, 300)
    assert leading_zero_sample(au.project(both, "m"), rng, 300)
    assert leading_zero_sample(au.complement(both), rng, 300)


def test_json_round_trip_and_schema(fib):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((__import__("importlib").resources.files("zeckauto") / "data" / "automaton.schema.json").read_text())
    for name in ("lower", "uplusu", "thm35i"):
        a = fib.env[name]
        d = json.loads(a.to_json())
        jsonschema.validate(d, schema)
        b = au.Automaton.from_json(a.to_json())
        assert b.to_json() == a.to_json()
        assert au.equivalent(a, b)
    adder = build_adder(FIB)
    assert au.Automaton.from_json(adder.to_json()).accepts(3, 4, 7)


def test_dot_export(fib):
    dot = fib.env["end0"].to_dot("end0")
    assert dot.startswith('digraph "end0"')
    assert "doublecircle" in dot
    assert '-> 0' in dot or "->" in dot


def test_stable_numbering_is_bfs_from_initial(fib):
    a = fib.env["uplusu"]
    assert a.start == 0
    seen, order = {0}, [0]
    for s in order:
        for c in sorted(a.delta[s]):
            t = a.delta[s][c]
            if t not in seen:
                seen.add(t)
                order.append(t)
    assert order == list(range(len(order)))


def test_accepts_many_matches_scalar(fib):
    a = fib.env["lplusu"]
    t = au.digit_table(FIB, 500)
    import numpy as np
    got = au.accepts_many(a, [t[np.arange(501)]])
    assert [bool(g) for g in got] == [a.accepts(n) for n in range(501)]
