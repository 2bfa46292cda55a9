import random
from fractions import Fraction

import pytest

from conftest import build_acyclic_pair, build_cone_lie, corpus
from linfenv.algebras import (AInfinityAlgebra, DgLieAlgebra,
                              LInfinityAlgebra, StrictMorphism,
                              antisymmetrize, classical_envelope,
                              suspension_factor)
from linfenv.graded import GradedMap, QONE, vaccum, veq

Q = Fraction


# ---------------------------------------------------------------- suspension

def test_suspension_factor_small_cases():
    assert suspension_factor([]) == 1
    assert suspension_factor([5]) == 1          # k=1: no crossings
    assert suspension_factor([2, 2]) == 1       # (1)(2) + 0
    assert suspension_factor([3, 2]) == -1      # (1)(3) + 0
    assert suspension_factor([1, 1, 1]) == -1   # 2 + 1 + 0


def test_suspended_bracket_is_graded_symmetric(heisenberg, free_nilpotent):
    # l_2 is Koszul-antisymmetric, so D_2 = s l_2 (s^-1 x s^-1) must be
    # Koszul-symmetric with respect to the suspended degrees.
    for g in (heisenberg, free_nilpotent):
        names = [gen for gen, _ in g.generators]
        for a in names:
            for b in names:
                sa = g.space.degree(a) + 1
                sb = g.space.degree(b) + 1
                lhs = g.suspended(2, (a, b))
                rhs = g.suspended(2, (b, a))
                sign = -1 if (sa * sb) % 2 else 1
                assert lhs == {k: sign * c for k, c in rhs.items()}


# ------------------------------------------------------------ bracket lookup

def test_bracket_canonicalization_signs(heisenberg, free_nilpotent):
    # Two odd letters: swapping costs sgn * Koszul = (-1) * (-1) = +1.
    assert heisenberg.l(2, ("y", "x")) == {"z": Q(1)}
    # Odd and even letter: sgn * Koszul = (-1) * (+1) = -1.
    assert free_nilpotent.l(2, ("y", "x")) == {"z2": Q(-1)}
    # Repeated odd letter is a legal canonical word.
    assert free_nilpotent.l(2, ("x", "x")) == {"z1": Q(1)}
    # Missing arities and unmatched words evaluate to zero.
    assert heisenberg.l(3, ("x", "y", "z")) == {}
    assert heisenberg.l(2, ("x", "z")) == {}


def test_bracket_even_repeat_is_zero(free_nilpotent):
    assert free_nilpotent.l(2, ("y", "y")) == {}


def test_storage_validation_rejects_bad_tables():
    with pytest.raises(ValueError, match="canonical"):
        LInfinityAlgebra("bad", [("a", 1), ("b", 1)],
                         {2: {("b", "a"): {"a": Q(1)}}})
    with pytest.raises(ValueError, match="repeats"):
        LInfinityAlgebra("bad", [("a", 2)], {2: {("a", "a"): {}}})
    with pytest.raises(ValueError, match="degree"):
        LInfinityAlgebra("bad", [("a", 1), ("b", 5)],
                         {2: {("a", "a"): {"b": Q(1)}}})
    with pytest.raises(ValueError, match="positive"):
        LInfinityAlgebra("bad", [("a", 0)], {})
    with pytest.raises(ValueError, match="arity > 2"):
        DgLieAlgebra("bad", [("a", 1), ("b", 1), ("c", 1), ("w", 4)],
                     {3: {("a", "b", "c"): {"w": Q(1)}}})


def test_minimality_and_strictness_flags(l3_example, cone_lie, heisenberg):
    assert heisenberg.is_minimal and heisenberg.is_strict
    assert l3_example.is_minimal and not l3_example.is_strict
    assert not cone_lie.is_minimal and cone_lie.is_strict


# --------------------------------------------------------- classical envelope

def test_envelope_dimension_series(heisenberg):
    u = classical_envelope(heisenberg)
    assert [u.space.dim(n) for n in range(7)] == [1, 2, 2, 2, 2, 2, 2]


def test_envelope_dimension_series_abelian_pair():
    g = corpus()["abelian_pair"]
    u = classical_envelope(g)
    # S(x odd, y even): 1, x, y, xy, y^2, xy^2, ...
    assert [u.space.dim(n) for n in range(7)] == [1, 1, 1, 1, 1, 1, 1]


def test_envelope_basis_is_graded_lex(free_nilpotent):
    u = classical_envelope(free_nilpotent)
    assert list(u.space.basis(3)) == [("z2",), ("x", "y"), ("x", "z1")]


def test_straightening_two_odd_letters(heisenberg):
    u = classical_envelope(heisenberg)
    # y x = -(x y) + z  (swap two odd letters, then the bracket term)
    assert u.m(2, (("y",), ("x",))) == {("x", "y"): Q(-1), ("z",): Q(1)}
    # x y is already canonical
    assert u.m(2, (("x",), ("y",))) == {("x", "y"): Q(1)}


def test_straightening_odd_square(free_nilpotent):
    u = classical_envelope(free_nilpotent)
    # x x = (1/2) l_2(x, x) = z1 / 2
    assert u.m(2, (("x",), ("x",))) == {("z1",): Q(1, 2)}


def test_envelope_unit_words():
    g = corpus()["heisenberg"]
    u = classical_envelope(g)
    assert list(u.space.basis(0)) == [()]
    assert u.m(2, ((), ("x",))) == {("x",): Q(1)}
    assert u.m(2, (("x",), ())) == {("x",): Q(1)}


def _mul(u, a, b):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            vaccum(out, u.m(2, (wa, wb)), ca * cb)
    return out


def _random_vector(rng, space, degree):
    basis = space.basis(degree)
    return {w: Q(rng.randint(-3, 3)) for w in rng.sample(
        basis, k=min(2, len(basis)))}


def test_envelope_associativity_on_random_triples():
    rng = random.Random(20260815)
    algebras = [corpus()["heisenberg"], corpus()["free_nilpotent"],
                build_acyclic_pair()]
    checked = 0
    while checked < 100:
        g = rng.choice(algebras)
        u = classical_envelope(g)
        degs = [rng.randint(1, 4) for _ in range(3)]
        a, b, c = (_random_vector(rng, u.space, d) for d in degs)
        if not (a and b and c):
            continue
        assert veq(_mul(u, _mul(u, a, b), c), _mul(u, a, _mul(u, b, c)))
        checked += 1


def test_envelope_differential_is_a_derivation():
    rng = random.Random(7)
    for g in (build_acyclic_pair(), build_cone_lie()):
        u = classical_envelope(g)

        def d(v):
            out = {}
            for w, c in v.items():
                vaccum(out, u.m(1, (w,)), c)
            return out

        for _ in range(40):
            da = rng.randint(1, 4)
            db = rng.randint(1, 4)
            a = _random_vector(rng, u.space, da)
            b = _random_vector(rng, u.space, db)
            lhs = d(_mul(u, a, b))
            rhs = _mul(u, d(a), b)
            sign = Q(-1) if da % 2 else Q(1)
            vaccum(rhs, _mul(u, a, d(b)), sign)
            assert veq(lhs, rhs)


def test_envelope_differential_squares_to_zero():
    for g in (build_acyclic_pair(), build_cone_lie()):
        u = classical_envelope(g)
        for n in range(2, 7):
            for w in u.space.basis(n):
                out = {}
                for t, c in u.m(1, (w,)).items():
                    vaccum(out, u.m(1, (t,)), c)
                assert out == {}


def test_envelope_rejects_higher_brackets(l3_example):
    with pytest.raises(ValueError, match="higher brackets"):
        classical_envelope(l3_example)


# ------------------------------------------------------------ antisymmetrize

def test_antisymmetrize_recovers_commutator(heisenberg, free_nilpotent):
    u = classical_envelope(heisenberg)
    lie = antisymmetrize(u, 2, window=3)
    # [x, y] = xy - (-1)^{|x||y|} yx = xy + yx = z in the envelope
    assert lie.l(2, (("x",), ("y",))) == {("z",): Q(1)}
    # heisenberg has no l_2(x, x), so the commutator [x, x] = 2 xx vanishes
    assert lie.l(2, (("x",), ("x",))) == {}
    # free_nilpotent does: xx = z1/2 in the envelope, so [x, x] = z1
    lie2 = antisymmetrize(classical_envelope(free_nilpotent), 2, window=3)
    assert lie2.l(2, (("x",), ("x",))) == {("z1",): Q(1)}


def test_antisymmetrize_doubles_odd_squares():
    from linfenv.graded import GradedSpace
    space = GradedSpace("pair", elements=[("p", 1), ("r", 2)])
    a = AInfinityAlgebra("pair", space, {2: {("p", "p"): {"r": Q(1)}}})
    lie = antisymmetrize(a, 2)
    # l_2(p, p) = m_2(p, p) + m_2(p, p): both permutations contribute +1
    assert lie.l(2, ("p", "p")) == {"r": Q(2)}


def test_antisymmetrize_needs_window_for_lazy_spaces(heisenberg):
    u = classical_envelope(heisenberg)
    with pytest.raises(ValueError, match="window"):
        antisymmetrize(u, 2)


# ------------------------------------------------------------ strict morphism

def test_strict_morphism_inclusion_passes(heisenberg, acyclic_pair):
    cols = {g: {g: QONE} for g, _ in heisenberg.generators}
    f = StrictMorphism(heisenberg, acyclic_pair,
                       GradedMap(heisenberg.space, acyclic_pair.space, 0,
                                 columns=cols), name="inclusion")
    assert f.check().ok


def test_strict_morphism_detects_failure(heisenberg):
    target = corpus()["heisenberg"]
    cols = {"x": {"x": QONE}, "y": {"x": QONE}, "z": {"z": QONE}}
    f = StrictMorphism(heisenberg, target,
                       GradedMap(heisenberg.space, target.space, 0,
                                 columns=cols))
    report = f.check()
    assert not report.ok
    assert report.witness["arity"] == 2
    assert report.witness["word"] == ["x", "y"]
