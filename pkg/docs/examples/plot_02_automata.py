"""
Sets of numbers as automata
===========================

A regular expression over digits becomes a DFA that accepts every
zero-padded representation of the numbers in the set.
"""

from zeckauto import automata as au
from zeckauto.numeration import FIB
from zeckauto.regexlang import compile_regex

# 1, 10, 101, 1010, ... are the numbers F_n - 1
fig = compile_regex("((10)*1)|(1(01)*0)", FIB, track="n")
print(au.enumerate_values(fig, 200))
print(fig.accepts_word("0001010"), fig.accepts_word("11"))

###############################################################################
# Complements are taken inside the valid representations, so they are again
# subsets of the naturals.

rest = au.complement(fig)
print(au.enumerate_values(rest, 20))
print(au.classify(rest))

###############################################################################
# Automata serialize to JSON and Graphviz DOT with breadth-first state numbers.

print(fig.to_dot("fib_minus_one"))
