import pytest

from tptlcheck.dataword import DataPoint, DataWord, NegativeValueError
from tptlcheck.slp import (
    BudgetExceededError, Concat, Leaf, Shift, Slp, SlpBuilder, SlpError,
    iter_points, slp_at, slp_concat, slp_expand, slp_from_word, slp_iterate,
    slp_length, slp_max, slp_min, slp_reverse,
)
from corpus import rand_word, random_slp

E = frozenset()


def example():
    return Slp({"A0": Concat("B", "C"), "B": Leaf(E, 5), "C": Shift("B", 3)}, "A0")


def doubling(n, value=2):
    rules = {"A0": Leaf(E, value)}
    for i in range(1, n + 1):
        rules[f"A{i}"] = Concat(f"A{i - 1}", f"A{i - 1}")
    return Slp(rules, f"A{n}")


def product(u, m, k):
    return [v + i * k for i in range(1, m + 1) for v in u]


def test_expand_examples():
    assert slp_expand(Slp({"A0": Leaf({"p"}, 5)}, "A0")) == DataWord.of(({"p"}, 5))
    assert slp_expand(example()).values == [5, 8]
    assert slp_expand(Slp({"A0": Concat("B", "B"), "B": Leaf(E, 1)}, "A0")).values == [1, 1]


def test_length_min_max_at():
    g = example()
    assert (slp_length(g), slp_min(g), slp_max(g)) == (2, 5, 8)
    assert slp_at(g, 1) == DataPoint(E, 8)
    with pytest.raises(IndexError):
        slp_at(g, 2)
    d = doubling(10)
    assert slp_length(d) == 1024
    assert slp_min(d) == slp_max(d) == 2
    assert slp_at(d, 1023) == DataPoint(E, 2)
    assert slp_length(Slp({"A": Shift("B", 4), "B": Concat("C", "C"), "C": Leaf(E, 0)}, "A")) == 2
    leaf = Slp({"A": Leaf(E, 7)}, "A")
    assert slp_min(leaf) == slp_max(leaf) == 7


def test_validation():
    with pytest.raises(SlpError):
        Slp({"A": Concat("A", "A")}, "A")
    with pytest.raises(SlpError):
        Slp({"A": Concat("B", "C"), "B": Leaf(E, 1)}, "A")
    with pytest.raises(SlpError):
        Shift("B", -1)
    with pytest.raises(NegativeValueError):
        Leaf(E, -2)


def test_unreachable_rules_dropped():
    g = Slp({"A": Leaf(E, 1), "Z": Concat("A", "A")}, "A")
    assert set(g.rules) == {"A"}


def test_budget():
    with pytest.raises(BudgetExceededError):
        slp_expand(doubling(12), budget=1000)


def test_iterate_examples():
    assert slp_expand(slp_iterate(DataWord.from_values([3]), 2, 1)).values == [4, 5]
    assert slp_expand(slp_iterate(DataWord.from_values([0, 1]), 3, 2)).values == [2, 3, 4, 5, 6, 7]
    assert slp_expand(slp_iterate(DataWord.from_values([10]), 3, -2)).values == [8, 6, 4]
    with pytest.raises(NegativeValueError):
        slp_iterate(DataWord.from_values([6]), 4, -2)
    with pytest.raises(SlpError):
        slp_iterate(DataWord.from_values([6]), 0, 1)


def test_iterate_exhaustive(rng):
    for n in range(1, 5):
        for m in range(1, 21):
            for k in range(-5, 6):
                u = [rng.randint(0, 40) for _ in range(n)]
                if min(u) + min(k, m * k) < 0:
                    continue
                props = [frozenset({"p"}) if rng.random() < 0.5 else E for _ in range(n)]
                w = DataWord(tuple(DataPoint(ps, v) for ps, v in zip(props, u)))
                got = slp_expand(slp_iterate(w, m, k))
                assert got.values == product(u, m, k)
                assert [p.props for p in got] == props * m


def test_iterate_is_small():
    g = slp_iterate(DataWord.from_values([1, 2, 3]), 10**6, 3)
    assert len(g) == 3 * 10**6
    assert g.size < 100
    assert slp_at(g, 3 * 10**6 - 1).value == 3 + 3 * 10**6


def test_queries_agree_with_expansion(rng):
    for _ in range(200):
        g = random_slp(rng, rng.randint(1, 12))
        w = slp_expand(g, budget=1 << 16)
        assert slp_length(g) == len(w)
        assert slp_min(g) == min(w.values) and slp_max(g) == max(w.values)
        for i in range(len(w)):
            assert slp_at(g, i) == w[i]
        lo = rng.randrange(len(w))
        hi = rng.randint(lo, len(w))
        assert list(iter_points(g, start=lo, stop=hi)) == list(w.points[lo:hi])


def test_builder_and_helpers(rng):
    a, b = rand_word(rng, 1, 5), rand_word(rng, 1, 5)
    ga, gb = slp_from_word(a), slp_from_word(b)
    assert slp_expand(ga) == a
    assert slp_expand(slp_concat(ga, gb)) == a + b
    assert slp_expand(slp_reverse(ga)).points == tuple(reversed(a.points))
    bld = SlpBuilder()
    x = bld.leaf({"p"}, 1)
    assert bld.leaf({"p"}, 1) == x
    y = bld.shift(bld.shift(x, 2), 3)
    assert isinstance(bld.rules[y], Shift) and bld.rules[y].delta == 5
    assert bld.shift(x, 0) == x
