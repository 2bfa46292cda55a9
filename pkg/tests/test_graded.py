import random
from fractions import Fraction

import pytest

from linfenv.graded import (ChainComplex, GradedMap, GradedSpace, QONE,
                            WindowError, koszul_sign, sort_with_sign, vadd,
                            vaccum, vec, vscale, vsub)


def swap_walk_sign(perm, degrees):
    """Oracle: realize perm by adjacent transpositions, one Koszul factor
    per swap.  Independent of the pair-counting formula under test."""
    n = len(perm)
    arr = list(range(n))
    sign = 1
    for i, t in enumerate(perm):
        j = arr.index(t)
        while j > i:
            d1, d2 = degrees[arr[j - 1]], degrees[arr[j]]
            if d1 % 2 and d2 % 2:
                sign = -sign
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            j -= 1
    return sign


def perms(n):
    import itertools
    return itertools.permutations(range(n))


def test_koszul_sign_identity():
    assert koszul_sign([0, 1, 2], [1, 1, 1]) == 1
    assert koszul_sign([], []) == 1


def test_koszul_sign_single_swap():
    assert koszul_sign([1, 0], [1, 1]) == -1
    assert koszul_sign([1, 0], [1, 2]) == 1
    assert koszul_sign([1, 0], [2, 4]) == 1


def test_koszul_sign_against_transposition_walk():
    rng = random.Random(7)
    for n in range(2, 6):
        for perm in perms(n):
            degrees = [rng.randrange(0, 4) for _ in range(n)]
            assert koszul_sign(perm, degrees) == swap_walk_sign(perm, degrees)


def test_koszul_sign_only_relative_order_matters():
    # values 4 < 10 < 99 have ranks 0, 1, 2; degrees follow the values
    degrees = {10: 3, 4: 1, 99: 1}
    assert koszul_sign([99, 4, 10], degrees) == \
        koszul_sign([2, 0, 1], [1, 3, 1])


def test_koszul_sign_composition():
    # sign of a composite reordering is the product of the pieces
    rng = random.Random(3)
    import itertools
    for _ in range(50):
        n = rng.randrange(2, 5)
        degrees = [rng.randrange(0, 3) for _ in range(n)]
        p = list(rng.sample(range(n), n))
        q = list(rng.sample(range(n), n))
        pq = [p[q[i]] for i in range(n)]
        dp = [degrees[p[i]] for i in range(n)]
        assert koszul_sign(pq, degrees) == \
            koszul_sign(p, degrees) * koszul_sign(q, dp)


def test_sort_with_sign_sym():
    # two odd letters crossing
    word, sign = sort_with_sign([("b", 1), ("a", 1)], "sym")
    assert word == (("a", 1), ("b", 1)) and sign == -1
    # odd letter repeated -> zero
    word, sign = sort_with_sign([("a", 1), ("a", 1)], "sym")
    assert word is None and sign == 0
    # even repeats survive
    word, sign = sort_with_sign([("a", 2), ("a", 2)], "sym")
    assert word == (("a", 2), ("a", 2)) and sign == 1


def test_sort_with_sign_antisym():
    # two even letters crossing pick up the sgn factor
    word, sign = sort_with_sign([("b", 2), ("a", 2)], "antisym")
    assert word == (("a", 2), ("b", 2)) and sign == -1
    # two odd letters crossing: sgn * Koszul = (-1)(-1) = +1
    word, sign = sort_with_sign([("b", 1), ("a", 1)], "antisym")
    assert sign == 1
    # even repeat dies, odd repeat lives
    assert sort_with_sign([("a", 2), ("a", 2)], "antisym") == (None, 0)
    word, sign = sort_with_sign([("a", 1), ("a", 1)], "antisym")
    assert word is not None and sign == 1


def test_sort_with_sign_matches_koszul_on_distinct_keys():
    rng = random.Random(11)
    for n in range(2, 5):
        for perm in perms(n):
            degrees = [rng.randrange(0, 4) for _ in range(n)]
            keys = sorted("abcdef"[:n])
            items = [(keys[p], degrees[p]) for p in perm]
            word, sign = sort_with_sign(items, "sym")
            assert word == tuple((keys[i], degrees[i]) for i in range(n))
            # sorting undoes the permutation
            assert sign == koszul_sign(perm, degrees)


def test_sort_with_sign_repeat_handling():
    # repeated odd letter under 'antisym': crossing it is sgn * Koszul = +1,
    # so every input ordering gives the same canonical sign
    w, s = sort_with_sign([("b", 1), ("a", 1), ("a", 1)], "antisym")
    assert w == (("a", 1), ("a", 1), ("b", 1)) and s == 1
    w2, s2 = sort_with_sign([("a", 1), ("b", 1), ("a", 1)], "antisym")
    assert (w2, s2) == (w, s)
    # same story for repeated even letters under 'sym'
    w3, s3 = sort_with_sign([("b", 2), ("a", 2), ("a", 2)], "sym")
    assert w3 == (("a", 2), ("a", 2), ("b", 2)) and s3 == 1


def test_vector_helpers():
    u = vec("x", Fraction(1, 3))
    v = vec("x", Fraction(1, 6))
    assert vadd(u, v) == {"x": Fraction(1, 2)}
    assert vadd(u, vscale(-1, u)) == {}
    assert vec("x", 0) == {}
    w = dict(u)
    vaccum(w, v, Fraction(2))
    assert w == {"x": Fraction(2, 3)}
    assert vsub(u, u) == {}
    assert vscale(Fraction(0), u) == {}


def test_graded_space_basics():
    V = GradedSpace("V", elements=[("x", 1), ("y", 2, 5)])
    assert V.basis(1) == ("x",)
    assert V.dim(3) == 0
    assert V.degree("y") == 2
    assert V.weight("y") == 5
    assert V.weight("x") is None
    assert V.has("x") and not V.has("z")
    with pytest.raises(KeyError):
        V.degree("z")
    with pytest.raises(ValueError):
        GradedSpace("W", elements=[("x", 1), ("x", 2)])


def test_graded_space_loader_and_window():
    calls = []

    def loader(n):
        calls.append(n)
        return [(("w", n, k), n) for k in range(n)]

    V = GradedSpace("V", loader=loader, window=(0, 4))
    assert V.dim(2) == 2
    assert V.dim(2) == 2
    assert calls == [2]  # cached
    with pytest.raises(WindowError):
        V.basis(5)


def test_degree_of_vector():
    V = GradedSpace("V", elements=[("x", 1), ("y", 1), ("z", 2)])
    assert V.degree_of_vector({"x": QONE, "y": QONE}) == 1
    assert V.degree_of_vector({}) is None
    with pytest.raises(ValueError):
        V.degree_of_vector({"x": QONE, "z": QONE})


def test_graded_map_columns_and_apply():
    V = GradedSpace("V", elements=[("x", 1), ("y", 1)])
    W = GradedSpace("W", elements=[("u", 0)])
    f = GradedMap(V, W, -1, columns={"x": {"u": Fraction(2)}})
    assert f.column("x") == {"u": Fraction(2)}
    assert f.column("y") == {}  # declared but no column: zero
    with pytest.raises(KeyError):
        f.column("nope")
    assert f.apply({"x": Fraction(1, 2), "y": Fraction(7)}) == {"u": QONE}


def test_graded_map_fn_memoized():
    V = GradedSpace("V", elements=[("x", 1)])
    calls = []

    def fn(label):
        calls.append(label)
        return {label: Fraction(3)}

    f = GradedMap(V, V, 0, fn=fn)
    f.column("x")
    f.column("x")
    assert calls == ["x"]


def test_graded_map_compose_add_scale():
    V = GradedSpace("V", elements=[("x", 2), ("y", 1), ("z", 0)])
    d = GradedMap(V, V, -1, columns={"x": {"y": Fraction(2)},
                                     "y": {"z": Fraction(3)}})
    dd = d.compose(d)
    assert dd.degree == -2
    assert dd.column("x") == {"z": Fraction(6)}
    s = d.add(d.scale(-1))
    assert s.column("x") == {}
    assert d.scale(Fraction(1, 2)).column("y") == {"z": Fraction(3, 2)}


def test_graded_map_check_degrees():
    V = GradedSpace("V", elements=[("x", 2), ("y", 0)])
    bad = GradedMap(V, V, -1, columns={"x": {"y": QONE}})
    with pytest.raises(ValueError):
        bad.check_degrees(["x"])
    ok = GradedMap(V, V, -2, columns={"x": {"y": QONE}})
    ok.check_degrees(["x", "y"])


def test_identity_and_zero():
    V = GradedSpace("V", elements=[("x", 1)])
    assert GradedMap.identity(V).column("x") == {"x": QONE}
    assert GradedMap.zero(V, V, -1).column("x") == {}


def test_chain_complex_require():
    V = GradedSpace("V", elements=[("x", 1), ("y", 0)])
    d = GradedMap(V, V, -1, columns={"x": {"y": QONE}})
    c = ChainComplex(V, d, (0, 1))
    c.require(0, 1)
    with pytest.raises(WindowError):
        c.require(0, 2)
    assert c.dims(0, 1) == [1, 1]
