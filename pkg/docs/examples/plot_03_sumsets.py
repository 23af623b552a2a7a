"""
Sumsets of Wythoff sequences
============================

Statements such as "every n >= 4 except 3 is a sum of two lower Wythoff
numbers" become formulas.  Their automata are read off directly.
"""

from zeckauto import automata as au
from zeckauto.numeration import brute_force_sumset
from zeckauto.script import Session

s = Session()
s.run('''
reg end0 msd_fib "(0|1)*0":
reg end01 msd_fib "1|((0|1)*01)":
def lower "?msd_fib Em $end0(m) & n=m+1":
def upper "?msd_fib Em $end01(m) & n=m+1":
def notll "?msd_fib ~Ea,b (n=a+b) & $lower(a) & $lower(b)":
def notlu "?msd_fib ~Ea,b (n=a+b) & $lower(a) & $upper(b)":
def uu "?msd_fib Ea,b (n=a+b) & $upper(a) & $upper(b)":
''')

print("N - (L+L):", s.describe("notll"))
print("N - (L+U):", au.enumerate_values(s.env["notlu"], 1000))
print("U+U:", s.describe("uu"))

###############################################################################
# The same sets by direct enumeration of pairs.

members = set(brute_force_sumset(["L", "L"], 1000))
print([n for n in range(1001) if n not in members])
