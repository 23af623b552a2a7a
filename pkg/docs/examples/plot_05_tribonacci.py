"""
Tribonacci analogues
====================

The Carlitz-Scoville-Hoggatt sequences A, B, C are defined by the last
digits of Tribonacci representations.  The same machinery decides their
sumsets.
"""

from zeckauto import automata as au
from zeckauto.numeration import TRIB, encode
from zeckauto.script import Session, bundled_script

s = Session()
s.run(bundled_script("tribonacci"))

for name in ("aa", "bb", "cc"):
    print(name, au.enumerate_values(s.env[name], 40))

missing = au.enumerate_values(s.env["aaplusbb"], 2000)
print("not in A+B:", [(n, encode(n, TRIB)) for n in missing])
print("N - (A+B+C):", s.describe("aaplusbbpluscc"))
