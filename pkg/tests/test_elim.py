import random
from fractions import Fraction

import pytest

from linfenv.elim import Solver, block, kernel_of_block, rank_of_block
from linfenv.graded import GradedMap, GradedSpace, QONE, WindowError


def dense_rank(cols, nrows):
    """Oracle: dense row-echelon rank over Fraction."""
    mat = [[cols[j].get(i, Fraction(0)) for j in range(len(cols))]
           for i in range(nrows)]
    rank = 0
    for col in range(len(cols)):
        piv = None
        for r in range(rank, nrows):
            if mat[r][col]:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(nrows):
            if r != rank and mat[r][col]:
                c = mat[r][col]
                mat[r] = [a - c * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def random_cols(rng, nrows, ncols, density=0.5):
    cols = []
    for _ in range(ncols):
        col = {}
        for i in range(nrows):
            if rng.random() < density:
                num = rng.randrange(-4, 5)
                if num:
                    col[i] = Fraction(num, rng.randrange(1, 4))
        cols.append(col)
    return cols


def mat_vec(cols, coeffs):
    out = {}
    for j, c in coeffs.items():
        for i, v in cols[j].items():
            s = out.get(i, Fraction(0)) + c * v
            if s:
                out[i] = s
            else:
                out.pop(i, None)
    return out


def test_rank_against_dense_oracle():
    rng = random.Random(42)
    for trial in range(40):
        nrows = rng.randrange(1, 8)
        ncols = rng.randrange(1, 8)
        cols = random_cols(rng, nrows, ncols)
        assert Solver().feed_all(cols).rank == dense_rank(cols, nrows)


def test_kernel_vectors_are_in_kernel():
    rng = random.Random(1)
    for trial in range(30):
        nrows = rng.randrange(1, 7)
        ncols = rng.randrange(1, 9)
        cols = random_cols(rng, nrows, ncols)
        s = Solver().feed_all(cols)
        assert len(s.kernel) == ncols - s.rank
        for t in s.kernel:
            assert mat_vec(cols, t) == {}
            assert t  # tracking vector is never empty


def test_pivot_positions_are_greedy():
    # a column becomes a pivot iff it enlarges the span of the prefix
    rng = random.Random(5)
    for trial in range(20):
        nrows = rng.randrange(1, 6)
        ncols = rng.randrange(1, 8)
        cols = random_cols(rng, nrows, ncols)
        s = Solver().feed_all(cols)
        for j in range(ncols):
            r_with = dense_rank(cols[:j + 1], nrows)
            r_without = dense_rank(cols[:j], nrows)
            assert (j in s.pivot_positions) == (r_with > r_without)


def test_solve_and_residual():
    rng = random.Random(9)
    for trial in range(30):
        nrows = rng.randrange(2, 7)
        ncols = rng.randrange(1, 6)
        cols = random_cols(rng, nrows, ncols)
        s = Solver().feed_all(cols)
        coeffs = {j: Fraction(rng.randrange(-3, 4)) for j in range(ncols)}
        v = mat_vec(cols, coeffs)
        sol = s.solve(v)
        assert sol is not None
        assert mat_vec(cols, sol) == v
        res, _ = s.residual(v)
        assert res == {}


def test_solve_outside_span():
    s = Solver().feed_all([{0: QONE}])
    assert s.solve({1: QONE}) is None
    res, _ = s.residual({0: Fraction(2), 1: Fraction(3)})
    assert res == {1: Fraction(3)}


def test_determinism():
    rng = random.Random(123)
    cols = random_cols(rng, 6, 6)
    a = Solver().feed_all([dict(c) for c in cols])
    b = Solver().feed_all([dict(c) for c in cols])
    assert a.pivot_positions == b.pivot_positions
    assert a.kernel == b.kernel
    assert a.pivots == b.pivots


def test_block_and_helpers():
    V = GradedSpace("V", elements=[("x", 1), ("y", 1), ("z", 0)])
    d = GradedMap(V, V, -1, columns={"x": {"z": QONE}, "y": {"z": Fraction(2)}})
    src, tgt, cols = block(d, 1)
    assert src == ("x", "y") and tgt == ("z",)
    assert cols == [{0: QONE}, {0: Fraction(2)}]
    assert rank_of_block(d, 1) == 1
    kernel, _ = kernel_of_block(d, 1)
    assert kernel == [{"x": Fraction(-2), "y": QONE}]


def test_block_window_error():
    V = GradedSpace("V", loader=lambda n: [(("v", n), n)], window=(1, 1))
    d = GradedMap(V, V, -1, fn=lambda l: {("v", l[1] - 1): QONE})
    with pytest.raises(WindowError):
        block(d, 1)  # target degree 0 is outside the stored window
