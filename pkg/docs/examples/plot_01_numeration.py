"""
Zeckendorf and Tribonacci representations
=========================================

Every natural number is a unique sum of non-adjacent Fibonacci numbers.
Written most significant digit first, that is a 0/1 word with no "11".
"""

import numpy as np

from zeckauto.numeration import FIB, TRIB, decode, encode, is_canonical, oracle_values

# 43 = F_9 + F_6 + F_2
print(encode(43), decode("10010001"))

# zero is the empty word; leading zeros carry no weight
print(repr(encode(0)), decode("0010"))

# Tribonacci forbids "111" instead
print(encode(100, TRIB), is_canonical("110", TRIB), is_canonical("111", TRIB))

###############################################################################
# The lower and upper Wythoff sequences partition the positive integers.
# They are computed with an exact integer square root, never with floats.

L = np.array(oracle_values("lower", 50))
U = np.array(oracle_values("upper", 50))
print("L:", L)
print("U:", U)
print("disjoint:", np.intersect1d(L, U).size == 0)

###############################################################################
# Silber's criterion: n is in L exactly when the representation of n-1
# (with a 0 in front) ends in 0.

for n in range(1, 12):
    w = "0" + encode(n - 1)
    print(n, w, "L" if w.endswith("0") else "U")
