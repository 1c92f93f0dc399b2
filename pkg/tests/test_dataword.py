import math

import pytest

from tptlcheck.dataword import (
    INFINITY, DataPoint, DataWord, NegativeValueError, NotQuasiMonotonicError, PeriodicWord,
    at, concat, is_quasi_monotonic, length, shift, shrink,
)
from corpus import rand_word

E = frozenset()


def pw(prefix, period, k):
    return PeriodicWord(DataWord.from_values(prefix), DataWord.from_values(period), k)


def test_point_validation():
    with pytest.raises(NegativeValueError):
        DataPoint(E, -1)
    with pytest.raises(ValueError):
        DataPoint(frozenset({""}), 0)


def test_length():
    assert length(DataWord(())) == 0
    assert length(DataWord.from_values([1, 2, 3])) == 3
    assert length(pw([], [1], 1)) is INFINITY
    assert INFINITY == math.inf


def test_at():
    w = pw([0], [1], 1)
    assert at(w, 0) == DataPoint(E, 0)
    assert at(w, 3) == DataPoint(E, 3)
    w = PeriodicWord(DataWord(()), DataWord.of(({"p"}, 5)), 0)
    assert at(w, 7) == DataPoint(frozenset({"p"}), 5)


def test_period_shift_property(rng):
    from corpus import rand_periodic
    for _ in range(50):
        w = rand_periodic(rng)
        n1, n2 = len(w.prefix), len(w.period)
        for i in range(n1, n1 + 3 * n2):
            a, b = at(w, i), at(w, i + n2)
            assert b.value == a.value + w.offset and b.props == a.props


def test_empty_period_rejected():
    with pytest.raises(ValueError):
        PeriodicWord(DataWord(()), DataWord(()), 0)
    with pytest.raises(ValueError):
        pw([], [1], -1)


def test_shift_and_concat(rng):
    w = DataWord.of(({"p"}, 2), ({"q"}, 5))
    assert shift(w, 3) == DataWord.of(({"p"}, 5), ({"q"}, 8))
    assert shift(w, 0) == w
    with pytest.raises(NegativeValueError):
        shift(DataWord.of(({"p"}, 2)), -3)
    assert concat(DataWord.of(({"p"}, 1)), DataWord.of(({"q"}, 2))) == DataWord.of(({"p"}, 1), ({"q"}, 2))
    assert concat(DataWord(()), w) == w
    a, b, c = (rand_word(rng, 0, 4) for _ in range(3))
    assert concat(concat(a, b), c) == concat(a, concat(b, c))


def test_quasi_monotonic():
    assert is_quasi_monotonic(pw([0], [1], 1))
    assert is_quasi_monotonic(pw([], [0, 100], 200))
    assert not is_quasi_monotonic(pw([], [5, 0], 1))


def test_shrink_examples():
    s = shrink(pw([], [0, 100], 200), 3)
    assert s.period.values == [0, 4] and s.offset == 8
    w = pw([0], [1], 1)
    assert shrink(w, 5) == w
    w = pw([2], [3, 5], 3)
    s = shrink(w, 4)
    assert s.period.values == [1, 3] and s.offset == 3
    with pytest.raises(NotQuasiMonotonicError):
        shrink(pw([], [5, 0], 1), 2)


def _region(diff, c):
    if diff < -c:
        return -c - 1
    if diff > c:
        return c + 1
    return diff


def test_shrink_preserves_difference_regions(rng):
    for _ in range(300):
        n2 = rng.randint(1, 4)
        period = sorted(rng.randint(0, 30) for _ in range(n2))
        rng.shuffle(period)
        k = max(period) - min(period) + rng.randint(0, 30)
        prefix = [rng.randint(0, max(period)) for _ in range(rng.randint(0, 3))]
        w = pw(prefix, period, k)
        c = rng.randint(0, 6)
        s = shrink(w, c)
        n = len(prefix) + 2 * n2
        a, b = w.expand(n).values, s.expand(n).values
        for i in range(n):
            for j in range(i + 1, n):
                assert _region(a[j] - a[i], c) == _region(b[j] - b[i], c)


def test_shrink_equal_values_stay_equal():
    s = shrink(pw([4], [4, 40, 4], 50), 2)
    assert s.prefix.values[0] == s.period.values[0] == s.period.values[2]


def test_shrink_value_bound(rng):
    from corpus import rand_periodic
    for _ in range(200):
        w = rand_periodic(rng, max_value=60, max_offset=0)
        w = PeriodicWord(w.prefix, w.period, max(w.period.values) - min(w.period.values) + rng.randint(0, 40))
        if not is_quasi_monotonic(w):
            continue
        c = rng.randint(0, 6)
        s = shrink(w, c)
        n = len(w.prefix) + len(w.period)
        assert max(s.prefix.values + s.period.values) <= (c + 1) * (n - 1)
