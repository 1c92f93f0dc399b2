import pytest

from tptlcheck import docm
from tptlcheck import formula as fm
from tptlcheck.checker import check_naive, check_periodic
from tptlcheck.dataword import DataWord, PeriodicWord, at
from tptlcheck.docm import ZERO, NondeterministicError, Ocm, comp_binary, comp_unary, model_check
from tptlcheck.slp import Slp, SlpPeriodicWord, slp_at, slp_expand, slp_length
from corpus import rand_machine, simulate


def points(pairs):
    return DataWord.of(*(((q,), c) for q, c in pairs))


INC = Ocm.build("q0", [("q0", 1, "q1"), ("q1", 1, "q0")])


def test_step():
    m = Ocm.build("q0", [("q0", ZERO, "q1")])
    assert docm.step(m, "q0", 0) == {("q1", 0)}
    assert docm.step(m, "q0", 3) == set()
    m = Ocm.build("q0", [("q0", -1, "q1")])
    assert docm.step(m, "q0", 0) == set()
    with pytest.raises(ValueError):
        docm.step(m, "q0", -1)


def test_determinism():
    assert not docm.is_deterministic(Ocm.build("q0", [("q0", 1, "q1"), ("q0", 2, "q1")]))
    assert not docm.is_deterministic(Ocm.build("q0", [("q0", ZERO, "q1"), ("q0", 1, "q1")]))
    assert docm.is_deterministic(INC)
    # Two edges that are never enabled together.
    assert docm.is_deterministic(Ocm.build("q0", [("q0", ZERO, "q1"), ("q0", -1, "q1"), ("q1", 1, "q0")]))
    with pytest.raises(NondeterministicError):
        comp_unary(Ocm.build("q0", [("q0", 1, "q0"), ("q0", 2, "q0")]))


def test_comp_unary_examples():
    assert comp_unary(INC) == PeriodicWord(DataWord.of(), points([("q0", 0), ("q1", 1)]), 2)
    loop = comp_unary(Ocm.build("q0", [("q0", ZERO, "q0")]))
    assert loop == PeriodicWord(DataWord.of(), points([("q0", 0)]), 0)
    assert comp_unary(Ocm.build("q0", [("q0", -1, "q1")])) == points([("q0", 0)])


def test_countdown_binary():
    n = 2**10
    m = Ocm.build("q0", [("q0", n, "q1"), ("q1", -1, "q1"), ("q1", ZERO, "q2")], "binary")
    g = comp_binary(m)
    assert isinstance(g, Slp)
    assert slp_length(g) == n + 3
    assert slp_expand(g).points == tuple(simulate(m, 10**5))


def test_huge_counter_is_not_expanded():
    n = 10**12
    m = Ocm.build("q0", [("q0", n, "q1"), ("q1", -1, "q1"), ("q1", ZERO, "q2")], "binary")
    g = comp_binary(m)
    assert slp_length(g) == n + 3
    assert slp_at(g, n // 2 + 1).value == n - n // 2
    assert model_check(m, fm.parse("x.F(q2 & x=0)")).satisfied
    assert not model_check(m, fm.parse("x.F(x > 1000000000000)")).satisfied


def test_growing_loop_matches_unary():
    g = comp_binary(Ocm.build("q0", [("q0", 1, "q1"), ("q1", 1, "q0")], "binary"))
    assert isinstance(g, SlpPeriodicWord)
    w = comp_unary(INC)
    assert g.offset == w.offset
    assert _explicit(g, 20) == [at(w, i) for i in range(20)]


def test_immediate_halt():
    m = Ocm.build("q0", [("q0", -1, "q1")], "binary")
    g = comp_binary(m)
    assert isinstance(g, Slp) and slp_expand(g) == points([("q0", 0)])
    assert not model_check(m, fm.parse("X true")).satisfied


def test_model_check_examples():
    assert model_check(INC, fm.parse("G(x >= 0)")).satisfied
    assert model_check(INC, fm.parse("F(q1 & x = 1)")).satisfied
    assert not model_check(INC, fm.parse("F(q0 & x = 1)")).satisfied


def _explicit(g, n):
    if isinstance(g, Slp):
        return [slp_at(g, i) for i in range(min(n, slp_length(g)))]
    pre = [slp_at(g.prefix, i) for i in range(slp_length(g.prefix))] if g.prefix is not None else []
    per = DataWord(tuple(slp_at(g.period, i) for i in range(slp_length(g.period))))
    w = PeriodicWord(DataWord(tuple(pre)), per, g.offset)
    return [at(w, i) for i in range(n)]


def test_extractors_match_simulation(rng):
    for enc in ("unary", "binary"):
        for _ in range(300):
            m = rand_machine(rng, encoding=enc)
            w = comp_unary(m)
            size = len(w) if isinstance(w, DataWord) else len(w.prefix) + len(w.period)
            n = 3 * size + 5
            run = simulate(m, n)
            if isinstance(w, DataWord):
                assert list(w.points) == run
            else:
                assert [at(w, i) for i in range(n)] == run
            assert _explicit(comp_binary(m), n) == run


def test_binary_with_large_updates(rng):
    for _ in range(200):
        m = rand_machine(rng, amax=40, max_states=4, encoding="binary")
        g = comp_binary(m)
        assert _explicit(g, 3000) == simulate(m, 3000)


def test_model_check_equals_path_check(rng):
    for _ in range(150):
        m = rand_machine(rng)
        w = comp_unary(m)
        phi = fm.parse(rng.choice([
            "x.F(q0 & x=2)", "G(q0 -> X !q0)", "x.G(x <= 3)", "F G q1", "q0 U (q1 & x >= 1)",
        ]))
        assert model_check(m, phi).satisfied == check_naive(w, phi).satisfied
        binary = Ocm(m.states, m.initial, m.edges, "binary")
        assert model_check(binary, phi).satisfied == check_periodic(w, phi).satisfied


def test_text_format_round_trip(rng):
    for _ in range(50):
        m = rand_machine(rng)
        assert docm.parse_ocm(docm.format_ocm(m)) == m
    text = "ocm binary  # comment\ninit a\na add(+5) b\nb zero a\n"
    m = docm.parse_ocm(text)
    assert m.encoding == "binary" and m.initial == "a" and len(m.edges) == 2


@pytest.mark.parametrize("text", ["init q0\n", "ocm ternary\ninit q\n", "ocm unary\nq0 add q1\n", "ocm unary\n"])
def test_bad_machine_text(text):
    with pytest.raises(docm.OcmFormatError):
        docm.parse_ocm(text)


def test_unary_budget():
    m = Ocm.build("q0", [("q0", 1, "q0")])
    assert comp_unary(m).offset == 1
    with pytest.raises(RuntimeError):
        comp_unary(Ocm.build("q0", [("q0", 1, "q1"), ("q1", 1, "q2"), ("q2", -1, "q0")]), budget=2)
