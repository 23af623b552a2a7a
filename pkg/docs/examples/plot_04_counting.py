"""
Counting with linear representations
====================================

An ``eval`` command turns a formula with one extra free variable into a
matrix-valued function of the digits of n.  Multiplying the matrices out
counts the witnesses.
"""

import numpy as np

from zeckauto.counting import UPLUSU_MINPOLY, annihilates, evaluate, fit_recurrence
from zeckauto.numeration import FIB
from zeckauto.script import Session, bundled_script

s = Session()
s.run(bundled_script("wythoff"))
c = s.counters["count2upp"]
print("rank", c.rank)

F = [FIB.basis(n) for n in range(2, 30)]  # F_2, F_3, ...
vals = [evaluate(c, F[n - 2]) for n in range(4, 25)]
closed = [2 * F[n - 4] + 2 - n for n in range(4, 25)]
print(vals)
print("closed form holds:", vals == closed)

###############################################################################
# The sequence c(F_n) satisfies a short linear recurrence.

seq = [evaluate(c, F[n - 2]) for n in range(4, 29)]
fit = fit_recurrence(seq)
print("characteristic polynomial:", [int(x) for x in fit.characteristic])
print("annihilated by the degree-8 polynomial:", annihilates(UPLUSU_MINPOLY, seq))

###############################################################################
# Ordered representations n = a_i + a_j with both summands lower Wythoff.

r = s.counters["lowpluslow"]
print(np.array([evaluate(r, n) for n in range(30)]))
