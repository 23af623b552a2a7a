import numpy as np
import pytest
from hypothesis import given, strategies as st

from zeckauto import automata as au
from zeckauto.logic import compile_formula
from zeckauto.numeration import FIB, TRIB, encode
from zeckauto.relations import (
    AdderValidationError, build_adder, build_comparison, build_constant, build_successor,
    build_validity, is_functional, validate_adder,
)


def test_adder_examples():
    a = build_adder(FIB)
    assert a.accepts_word("001", "010", "100")
    assert not a.accepts(1, 1, 3)
    assert a.tracks == ("x", "y", "z")


@pytest.mark.parametrize("sys", [FIB, TRIB], ids=lambda s: s.name)
def test_adder_exhaustive(sys):
    a = build_adder(sys)
    assert validate_adder(a, 3000) == []
    assert is_functional(a)


@pytest.mark.parametrize("sys", [FIB, TRIB], ids=lambda s: s.name)
def test_adder_total_function_small(sys):
    a = build_adder(sys)
    lim = 500
    t = au.digit_table(sys, 2 * lim + 2)
    x, y = np.meshgrid(np.arange(lim + 1), np.arange(lim + 1), indexing="ij")
    x, y = x.ravel(), y.ravel()
    # z = x + y accepted, and z off by one or two is not
    for dz in (0, -1, 1, 2):
        z = x + y + dz
        ok = z >= 0
        acc = au.accepts_many(a, [t[x[ok]], t[y[ok]], t[z[ok]]])
        assert acc.all() if dz == 0 else not acc.any()


@pytest.mark.parametrize("sys", [FIB, TRIB], ids=lambda s: s.name)
def test_adder_commutative(sys):
    a = build_adder(sys)
    swapped = au.reorder(au.rename(a, ["y", "x", "z"]), ["x", "y", "z"])
    assert au.equivalent(a, swapped)


def test_bound_too_small_is_reported():
    with pytest.raises(AdderValidationError):
        build_adder(FIB, 0, retry=False)
    with pytest.raises(AdderValidationError):
        build_adder(TRIB, 1, retry=False)


def test_retry_recovers_from_small_bound():
    assert validate_adder(build_adder(FIB, 1, retry=True), 300) == []


def test_comparison_examples():
    eq = build_comparison(FIB, "eq")
    assert eq.accepts_word("010", "010") and not eq.accepts_word("010", "100")
    lt = build_comparison(FIB, "lt")
    assert lt.accepts(2, 3) and not lt.accepts(3, 3)


@pytest.mark.parametrize("sys", [FIB, TRIB], ids=lambda s: s.name)
def test_comparisons_exhaustive(sys):
    lim = 2000
    t = au.digit_table(sys, lim)
    x, y = np.meshgrid(np.arange(lim + 1), np.arange(lim + 1), indexing="ij")
    x, y = x.ravel(), y.ravel()
    ops = {"eq": x == y, "ne": x != y, "lt": x < y, "le": x <= y, "gt": x > y, "ge": x >= y}
    for rel, want in ops.items():
        got = au.accepts_many(build_comparison(sys, rel), [t[x], t[y]])
        assert np.array_equal(got, want), rel


def test_lt_strict_order():
    lt = build_comparison(FIB, "lt")
    assert not any(lt.accepts(n, n) for n in range(501))
    # transitivity: no counterexample x<y, y<z, not x<z
    bad = compile_formula("?msd_fib E x,y,z (x<y) & (y<z) & ~(x<z)")
    assert not bad.accepts()
    refl = compile_formula("?msd_fib E x (x<x)")
    assert not refl.accepts()
    trans = compile_formula("?msd_fib A x,y,z ((x<y) & (y<z)) => (x<z)")
    assert trans.accepts()


def test_constant_examples():
    zero = build_constant(FIB, 0)
    assert zero.accepts_word("") and zero.accepts_word("0") and zero.accepts_word("00")
    one = build_constant(FIB, 1)
    assert one.accepts_word("1") and one.accepts_word("01") and not one.accepts_word("10")
    c = build_constant(FIB, 43)
    assert c.accepts_word("10010001") and c.accepts_word("0010010001")
    assert au.enumerate_values(c, 10_000) == [43]


@given(st.integers(0, 10**6))
def test_constant_any(c):
    for sys in (FIB, TRIB):
        a = build_constant(sys, c)
        assert a.accepts(c) and not a.accepts(c + 1)
        assert a.accepts_word("00" + encode(c, sys))


def test_validity_examples():
    assert not build_validity(FIB, 1).accepts_word("11")
    assert build_validity(TRIB, 1).accepts_word("110")
    assert not build_validity(TRIB, 1).accepts_word("0111")
    assert build_validity(FIB, 2).accepts_word("10", "01")


def test_successor():
    s = build_successor(FIB)
    assert all(s.accepts(m, m + 1) for m in range(10_001))
    assert not any(s.accepts(m, m + 2) for m in range(200))
    t = build_successor(TRIB)
    assert all(t.accepts(m, m + 1) for m in range(2001))
