import itertools
import re

import pytest

from zeckauto import automata as au
from zeckauto.numeration import FIB, TRIB, encode, is_canonical
from zeckauto.regexlang import Alt, Cat, Lit, RegexSyntaxError, Star, compile_regex, parse_regex

BIT = Alt(Lit(0), Lit(1))

PAPER_REGEXES = {
    "end0": ("(0|1)*0", FIB), "end01": ("1|((0|1)*01)", FIB),
    "tend0": ("(0|1)*0", TRIB), "tend01": ("1|((0|1)*01)", TRIB), "tend011": ("11|((0|1)*011)", TRIB),
}


def test_parse_examples():
    assert parse_regex("(0|1)*0") == Cat(Star(BIT), Lit(0))
    assert parse_regex("1|((0|1)*01)") == Alt(Lit(1), Cat(Cat(Star(BIT), Lit(0)), Lit(1)))


@pytest.mark.parametrize("text,offset", [("((", 2), ("", 0), ("(0|1", 4), ("0)", 1), ("2", 0), ("0|*", 2)])
def test_parse_errors(text, offset):
    with pytest.raises(RegexSyntaxError) as e:
        parse_regex(text)
    assert e.value.offset == offset


def test_end0_end01_examples():
    end0 = compile_regex("(0|1)*0", FIB)
    assert all(end0.accepts_word(w) for w in ("0", "10", "100"))
    assert not end0.accepts_word("1") and not end0.accepts_word("01")
    end01 = compile_regex("1|((0|1)*01)", FIB)
    assert all(end01.accepts_word(w) for w in ("1", "01", "101"))
    assert not end01.accepts_word("10")


def test_end0_values():
    end0 = compile_regex("(0|1)*0", FIB)
    got = au.enumerate_values(end0, 1000)
    # "ends in 0" with the convention that the empty word is preceded by a 0
    assert got == [n for n in range(1001) if ("0" + encode(n)).endswith("0")]
    assert got[:5] == [0, 2, 3, 5, 7]  # 3 = "100"


@pytest.mark.parametrize("name", sorted(PAPER_REGEXES))
def test_regex_matches_direct_oracle(name):
    text, sys = PAPER_REGEXES[name]
    a = compile_regex(text, sys)
    rx = re.compile(text)
    for n in range(13):
        for t in itertools.product("01", repeat=n):
            w = "".join(t)
            canon = w.lstrip("0")
            valid = sys.forbidden not in w
            # some zero-padding of the canonical form matches
            want = valid and any(rx.fullmatch("0" * j + canon) for j in range(sys.order + 1))
            assert a.accepts_word(w) == want, (name, w)


def test_compiled_regex_is_closed_and_valid():
    for text, sys in PAPER_REGEXES.values():
        a = compile_regex(text, sys)
        assert au.is_leading_zero_closed(a)
        assert not a.accepts_word(sys.forbidden)


def test_track_name():
    assert compile_regex("1", FIB, track="q").tracks == ("q",)
