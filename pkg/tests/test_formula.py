import pytest

from tptlcheck import formula as fm
from tptlcheck.checker import check_naive
from tptlcheck.formula import (
    And, Constraint, Freeze, Interval, IntervalUnion, Not, Or, Prop, Release, TRUE, Until,
    UntilAnnotated,
)
from corpus import rand_formula, rand_word

p, q = Prop("p"), Prop("q")


def test_parse_examples():
    f = fm.parse("x.(p U (q & x >= 2 & x < 3))")
    assert f == Freeze("x", Until(p, And(q, And(Constraint("x", ">=", 2), Constraint("x", "<", 3)))))
    assert fm.parse("F[=2] p") == UntilAnnotated(TRUE, IntervalUnion((Interval(2, 2),)), p)
    assert fm.parse("!X true") == Not(Until(Not(TRUE), TRUE))


@pytest.mark.parametrize("text", [
    "p U q R p", "x.F(x = -3)", "G[1,inf) p", "F(-inf,0] q", "p U([1,2]|[5,7]) q",
    "X^3 p", "X[2,5) !p", "p -> q | !q", "x.y.(x <= 1 & y > -2)", "false R (p & true)",
])
def test_round_trip(text):
    f = fm.parse(text)
    assert fm.parse(fm.to_text(f)) == f


def test_round_trip_random(rng):
    for _ in range(500):
        f = rand_formula(rng, annotated=True)
        assert fm.parse(fm.to_text(f)) == f


@pytest.mark.parametrize("text", ["", "p U", "(p", "x.", "x < ", "F[3,2] p", "p & & q", "$u = 1", "F[1,2 p"])
def test_syntax_errors(text):
    with pytest.raises(fm.FormulaSyntaxError):
        fm.parse(text)


def test_reserved_names_allowed_on_request():
    assert fm.parse("$u.($u = 1)", allow_reserved=True) == Freeze("$u", Constraint("$u", "=", 1))


def test_desugar_examples():
    u = fm.DESUGAR_REGISTER
    got = fm.desugar(fm.parse("p U[2,3) q"))
    assert got == Freeze(u, Until(p, And(And(Constraint(u, ">=", 2), Constraint(u, "<", 3)), q)))
    assert fm.desugar(fm.parse("p U q")) == Until(p, q)
    assert fm.desugar(fm.parse("p U(-inf,inf) q")) == Until(p, q)
    got = fm.desugar(fm.parse("p U([1,2]|[5,7]) q"))
    member = Or(And(Constraint(u, ">=", 1), Constraint(u, "<=", 2)),
                And(Constraint(u, ">=", 5), Constraint(u, "<=", 7)))
    assert got == Freeze(u, Until(p, And(member, q)))
    assert fm.register_count(fm.desugar(fm.parse("F[1,2] G[3,4] p"))) == 1


def test_nnf_examples():
    assert fm.nnf(fm.parse("!(p U q)")) == Release(Not(p), Not(q))
    assert fm.nnf(fm.parse("!(x<5)")) == Constraint("x", ">=", 5)
    got = fm.nnf(fm.parse("!x.(p & x=0)"))
    assert got == Freeze("x", Or(Not(p), Or(Constraint("x", "<", 0), Constraint("x", ">", 0))))


def test_metrics():
    assert fm.c_phi(fm.parse("x.F(x=5 & y<=-2)")) == 5
    assert fm.c_phi(fm.parse("F p")) == 0
    assert fm.c_phi(fm.parse("x.F(x<-3)")) == 0
    f = fm.parse("x.F(x=0)")
    assert fm.register_count(f) == 1 and fm.is_freeze_ltl(f) and fm.is_closed(f)
    assert not fm.is_closed(fm.parse("F(x=0)"))
    f = fm.parse("x.(y.(x=1 & y>0))")
    assert fm.register_count(f) == 2 and not fm.is_freeze_ltl(f)
    assert fm.until_rank(fm.parse("p")) == 0
    assert fm.until_rank(fm.parse("p U q")) == 1
    assert fm.until_rank(fm.parse("p U (q U r)")) == 2
    with pytest.raises(fm.NotLtlError):
        fm.until_rank(fm.parse("x.F(x=1)"))
    assert fm.free_registers(fm.parse("x.(x=1 & y=2)")) == {"y"}
    assert fm.max_abs_const(fm.parse("x.F(x=-7 & x<3)")) == 7


def test_until_rank_ignores_double_negation(rng):
    for _ in range(200):
        f = rand_formula(rng, registers=(), freeze=False)
        assert fm.until_rank(Not(Not(f))) == fm.until_rank(f)


def test_interval_validation():
    with pytest.raises(ValueError):
        Interval(3, 2)
    with pytest.raises(ValueError):
        Interval(2, 2, True, False)
    with pytest.raises(ValueError):
        IntervalUnion(())


def test_desugar_preserves_verdicts(rng):
    for _ in range(400):
        w = rand_word(rng, 1, 8)
        f = rand_formula(rng, depth=4, registers=(), annotated=True)
        assert check_naive(w, f).satisfied == check_naive(w, fm.desugar(f)).satisfied


def test_nnf_preserves_verdicts(rng):
    for _ in range(400):
        w = rand_word(rng, 1, 8)
        f = rand_formula(rng, depth=5)
        assert check_naive(w, f).satisfied == check_naive(w, fm.nnf(fm.desugar(f))).satisfied


def test_replace():
    f = fm.parse("x.F(x=1) & G x.F(x=1)")
    g = fm.replace(f, {fm.parse("x.F(x=1)"): Prop("r")})
    assert g == fm.parse("r & G r")
