"""Checking TPTL and MTL formulas on ultimately periodic data words."""

from tptlcheck import formula as fm
from tptlcheck.checker import check, check_naive, select_engine, unroll_horizon
from tptlcheck.dataword import DataWord, PeriodicWord, at

# 0 1 2 3 ...: one prefix point, then a one-point period shifted by 1 each round
nat = PeriodicWord(DataWord.from_values([0]), DataWord.from_values([1]), 1)
print("first points:", [at(nat, i).value for i in range(8)])

# x.F(x = 5): freeze the first value, look for a point exactly 5 higher
phi = fm.parse("x.F(x = 5)")
v = check(nat, phi, engine="periodic")
print(fm.to_text(phi), "->", v.satisfied, v.stats)
for step in v.witness:
    print("  witness", step.position, step.choice, step.formula)

# every point is followed by one that is one larger
print("G x.X(x = 1) ->", check(nat, fm.parse("G x.X(x = 1)")).satisfied)

# MTL intervals are sugar for a freeze over one extra register
mtl = fm.parse("G (p -> F[2,3] q)")
print("desugared:", fm.to_text(fm.desugar(mtl)))

# a word where p and q alternate, with data growing by 2 per round
w = PeriodicWord(DataWord.of(), DataWord.of(({"p"}, 0), ({"q"}, 1)), 2)
print(fm.to_text(mtl), "->", check(w, mtl).satisfied, "via", select_engine(w, mtl))
print("G (p -> F[5,9] q) ->", check(w, fm.parse("G (p -> F[5,9] q)")).satisfied)

# the reference evaluator stops each Until after a bounded lookahead
two = fm.parse("x.y.F(x >= 4 & y.F(y = 1 & x >= 7))")
print("lookahead", unroll_horizon(nat, two))
print("naive", check_naive(nat, two).satisfied, "periodic", check(nat, two, engine="periodic").satisfied)
