"""Straight-line programs: exponentially long data words checked without expansion."""

import time

from tptlcheck import formula as fm
from tptlcheck.checker import check_slp
from tptlcheck.dataword import DataWord
from tptlcheck.slp import (
    Concat, Leaf, Shift, Slp, slp_at, slp_expand, slp_iterate, slp_length, slp_max, slp_min,
)
from tptlcheck.wordio import format_word

# B = (5), C = B shifted by 3, A = B C
g = Slp({"A": Concat("B", "C"), "B": Leaf(frozenset(), 5), "C": Shift("B", 3)}, "A")
print(format_word(g))
print("expands to", slp_expand(g).values, "min", slp_min(g), "max", slp_max(g))

# A_i = A_{i-1} (A_{i-1} + 2^{i-1}) enumerates 0 .. 2^n - 1
n = 40
rules = {"A0": Leaf(frozenset(), 0)}
for i in range(1, n + 1):
    rules[f"S{i}"] = Shift(f"A{i - 1}", 2 ** (i - 1))
    rules[f"A{i}"] = Concat(f"A{i - 1}", f"S{i}")
big = Slp(rules, f"A{n}")
print("length", slp_length(big), "rules", big.size, "point 123456789:", slp_at(big, 123456789))

for target in (2**n - 1, 2**n):
    t = time.perf_counter()
    v = check_slp(big, None, 0, fm.parse(f"x.F(x = {target})"), witness=False)
    print(f"x.F(x = {target}) -> {v.satisfied} in {time.perf_counter() - t:.4f}s")

# u_{+k} u_{+2k} ... u_{+mk} in logarithmically many rules
it = slp_iterate(DataWord.from_values([0, 1]), 10**9, 2)
print("iterate: length", slp_length(it), "rules", it.size, "last", slp_at(it, slp_length(it) - 1).value)

# periodic mode: the compressed block repeats forever, shifted by 2^40
for text in (f"x.F(x = {3 * 2**n})", "x.G(x >= 0)"):
    v = check_slp(None, big, 2**n, fm.parse(text), witness=False)
    print(text, "on the periodic extension ->", v.satisfied)

# nesting a temporal operator under G visits every position, so keep blocks short here
small = Slp(rules, "A10")
v = check_slp(None, small, 2**10, fm.parse("G x.F(x = 1)"), witness=False)
print("G x.F(x = 1) over 2^10-point periods ->", v.satisfied)
