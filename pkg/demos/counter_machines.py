"""Deterministic one-counter machines: extract the run, then model check it."""

from tptlcheck import docm
from tptlcheck import formula as fm
from tptlcheck.slp import slp_length
from tptlcheck.wordio import format_word

# count up forever through two states
inc = docm.parse_ocm("""
ocm unary
init q0
q0 add(1) q1
q1 add(1) q0
""")
w = docm.comp_unary(inc)
print(format_word(w))
for text in ("G(x >= 0)", "F(q1 & x = 1)", "F(q0 & x = 1)"):
    print(text, "->", docm.model_check(inc, fm.parse(text)).satisfied)

# jump to 10^15, count back down to zero, then stop in q2
down = docm.parse_ocm("""
ocm binary
init q0
q0 add(1000000000000000) q1
q1 add(-1) q1
q1 zero q2
""")
g = docm.comp_binary(down)
print("run length", slp_length(g), "with", g.size, "rules")
print("reaches q2 at the start value ->", docm.model_check(down, fm.parse("x.F(q2 & x = 0)")).satisfied)
print("ever above 10^15 ->", docm.model_check(down, fm.parse("x.F(x > 1000000000000000)")).satisfied)

# a zero test and a decrement guarded apart stay deterministic
bounce = docm.Ocm.build("a", [("a", 3, "b"), ("b", -1, "b"), ("b", docm.ZERO, "a")])
print("deterministic:", docm.is_deterministic(bounce))
print(format_word(docm.comp_unary(bounce)))

clash = docm.Ocm.build("a", [("a", 1, "b"), ("a", 2, "b")])
print("two enabled add edges, deterministic:", docm.is_deterministic(clash))
