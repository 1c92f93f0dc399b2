"""Instances from the hardness reductions, each checked against its direct oracle."""

import random

from tptlcheck import formula as fm
from tptlcheck import generators as gen
from tptlcheck.checker import check

# the three-level example circuit; its output gate evaluates to false
c = gen.example_circuit()
print(gen.format_circuit(c))
w, phi = gen.gen_circuit_mtl(c)
print("word", w.values)
print("formula", fm.to_text(phi))
print("circuit", gen.eval_circuit(c), "checker", check(w, phi).satisfied)

rng = random.Random(7)
for _ in range(5):
    c = gen.random_circuit(rng, rng.randint(2, 4), rng.randint(2, 4))
    results = [check(*make(c)).satisfied for make in
               (gen.gen_circuit_mtl, gen.gen_circuit_mtl_infinite, gen.gen_circuit_smtl)]
    print(f"levels={c.levels} gates={c.gates} oracle={gen.eval_circuit(c)} checker={results}")

# without the second-half guard, a short jump can land in the first half of a block
c = gen.parse_circuit("""
circuit levels=2 gates=2 output=1
level 1 and
level 2 input 1,1
wire 2:1 -> 1:1
wire 2:2 -> 1:1
wire 2:2 -> 1:2
wire 2:1 -> 1:2
""")
for guarded in (True, False):
    w, phi = gen.gen_circuit_smtl(c, guarded=guarded)
    print("guarded" if guarded else "unguarded", fm.to_text(phi), "->", check(w, phi).satisfied)

# QBF: one register per variable, the word 0 .. 2n+1
q = gen.QbfInstance("AE", fm.parse("(x1 | x2) & (!x1 | !x2)"))
w, phi = gen.gen_qbf(q)
print(fm.to_text(phi))
print("qbf", gen.eval_qbf(q), "checker", check(w, phi).satisfied)

# subset sum over the natural numbers with two registers
for a, b in (((1, 1), 2), ((2, 2), 4), ((1, 2, 3, 1), 5)):
    p = gen.PqssInstance(a, b)
    word, freeze_phi = gen.gen_pqss_freezeltl(p)
    print(a, b, gen.eval_pqss(p), check(gen.pqss_word(), gen.gen_pqss_tptl2(p)).satisfied,
          check(word, freeze_phi).satisfied)
