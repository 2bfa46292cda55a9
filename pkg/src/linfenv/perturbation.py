"""Homological perturbation: the basic lemma, the tensor trick, and the
two envelope pipelines built on them.

Both pipelines follow the same shape: contract a word-algebra resolution
onto a small symmetric-word space, lift the contraction to the cofree
tensor coalgebras on suspensions, perturb the lifted (internal-only)
differential by the product part of the bar differential, run the
perturbation lemma once, and read the transferred operations off the
length-one corestriction of the perturbed coderivation.

The perturbation is locally nilpotent because every one of its terms
strictly lowers a declared filtration (bar word length, lexicographically
refined by internal letter weight in the perturbative envelope); this is
asserted entrywise on the working window before the series is summed,
never assumed.
"""

import itertools
import math
from fractions import Fraction

from .algebras import (AInfinityAlgebra, DgLieAlgebra, _monomials,
                       classical_envelope, suspension_factor)
from .barcobar import _tensor_words, chevalley_eilenberg, cobar, rectify
from .graded import (ChainComplex, GradedMap, GradedSpace, QONE, WindowError,
                     koszul_sign, vaccum, vsub)
from .homology import Contraction, Homology, contraction_onto_cycles
from .reports import FAIL, PASS, Report


class PerturbationError(Exception):
    pass


# ------------------------------------------------------------- perturbations

class Perturbation:
    """A degree -1 disturbance of a complex, small for a filtration.

    `filtration(label)` returns a comparable value (int or tuple); every
    term of delta(x) must sit strictly below x.  That makes the series
    sum(delta (h delta)^k) finite degreewise for any filtration-preserving
    homotopy h.
    """

    def __init__(self, base, delta, filtration, filtration_tag, name="delta"):
        self.base = base
        self.delta = delta
        self.filtration = filtration
        self.filtration_tag = filtration_tag
        self.name = name

    def assert_lowers(self, lo, hi):
        """Entrywise check that delta strictly lowers the filtration."""
        for n in range(lo, hi + 1):
            for label in self.base.space.basis(n):
                fx = self.filtration(label)
                for t, _ in self.delta.column(label).items():
                    if not self.filtration(t) < fx:
                        raise PerturbationError(
                            "%s does not lower %s at %r: term %r has value "
                            "%r >= %r" % (self.name, self.filtration_tag,
                                          label, t, self.filtration(t), fx))

    def check(self, lo, hi):
        """Report on both invariants: strict lowering and (d + delta)^2 = 0."""
        try:
            self.assert_lowers(lo, hi)
        except PerturbationError as e:
            return Report("perturbation", self.name, FAIL, window=(lo, hi),
                          witness={"invariant": self.filtration_tag,
                                   "detail": str(e)})
        d = self.base.d
        for n in range(lo + 1, hi + 1):
            for label in self.base.space.basis(n):
                v = vaccum(dict(d.column(label)), self.delta.column(label))
                out = vaccum(d.apply(v), self.delta.apply(v))
                if out:
                    bad = sorted(out.items(), key=lambda kv: str(kv[0]))[0]
                    return Report("perturbation", self.name, FAIL,
                                  window=(lo, hi),
                                  witness={"invariant": "(d+delta)^2 = 0",
                                           "element": str(label),
                                           "term": str(bad[0]),
                                           "coefficient": str(bad[1])})
        return Report("perturbation", self.name, PASS, window=(lo, hi))


# -------------------------------------------------------------- tensor trick

def _tensor_expand(vectors):
    """All tensor words obtainable by picking one term per vector."""
    out = {(): QONE}
    for v in vectors:
        new = {}
        for w, c in out.items():
            for x, cx in v.items():
                vaccum(new, {w + (x,): QONE}, c * cx)
        out = new
    return out


def _word_space(letter_space, window, max_length, name=None):
    def wfn(w):
        parts = [letter_space.weight(x) for x in w]
        return sum(parts) if all(p is not None for p in parts) else len(w)

    return GradedSpace(name or "T(s%s)" % letter_space.name,
                       window=(0, window),
                       loader=_tensor_words(letter_space, 1,
                                            min_letter_degree=1,
                                            max_length=max_length),
                       degree_fn=lambda w: sum(letter_space.degree(x) + 1
                                               for x in w),
                       weight_fn=wfn)


def _internal_coderivation(word_space, letter_space, d_map, name):
    """Extend a degree -1 letter map to tensor words, with the odd-map
    staircase over the suspended degrees of the passed letters."""

    def fn(w):
        out = {}
        sign = 1
        for i, letter in enumerate(w):
            for t, c in d_map.column(letter).items():
                vaccum(out, {w[:i] + (t,) + w[i + 1:]: QONE},
                       Fraction(sign) * c)
            if (letter_space.degree(letter) + 1) % 2:
                sign = -sign
        return out

    return GradedMap(word_space, word_space, -1, fn=fn, name=name)


def _letterwise(src, dst, letter_map, name):
    """Apply an even letter map in every slot (no Koszul signs)."""

    def fn(w):
        return _tensor_expand([letter_map.column(x) for x in w])

    return GradedMap(src, dst, 0, fn=fn, name=name)


def tensor_trick(con, window, bar_length_bound):
    """Lift a contraction to the cofree tensor coalgebras on suspensions.

    The lifted complexes carry the internal differentials only (the
    coderivation extensions of the input differentials); the homotopy is
    the staggered sum 1^(x)j (x) h (x) (ip)^(x)rest, with the staircase
    sign of inserting the odd map h after j letters.  Words are truncated
    to `bar_length_bound` letters, a subcomplex for every differential
    that never lengthens words.
    """
    big, small = con.big, con.small
    tbig = _word_space(big.space, window, bar_length_bound)
    tsmall = _word_space(small.space, window, bar_length_bound)

    d_big = _internal_coderivation(tbig, big.space, big.d, "d_int")
    d_small = _internal_coderivation(tsmall, small.space, small.d, "d_int")
    include = _letterwise(tsmall, tbig, con.include, "Ti")
    project = _letterwise(tbig, tsmall, con.project, "Tp")

    ip_cols = {}

    def ip(label):
        if label not in ip_cols:
            ip_cols[label] = con.include.apply(con.project.column(label))
        return ip_cols[label]

    def h_fn(w):
        out = {}
        sign = 1
        for i, letter in enumerate(w):
            hv = con.homotopy.column(letter)
            if hv:
                tails = _tensor_expand([ip(x) for x in w[i + 1:]])
                for hl, hc in hv.items():
                    for tail, tc in tails.items():
                        vaccum(out, {w[:i] + (hl,) + tail: QONE},
                               Fraction(sign) * hc * tc)
            if (big.space.degree(letter) + 1) % 2:
                sign = -sign
        return out

    homotopy = GradedMap(tbig, tbig, 1, fn=h_fn, name="Th")
    big_cx = ChainComplex(tbig, d_big, (0, window), tbig.name)
    small_cx = ChainComplex(tsmall, d_small, (0, window), tsmall.name)
    return Contraction(big_cx, small_cx, include, project, homotopy,
                       (0, window), name="T(%s)" % con.name)


# -------------------------------------------------------- perturbation lemma

def basic_perturbation_lemma(con, pert, window):
    """Transfer a perturbation through a contraction.

    With A = delta (1 - h delta)^{-1} summed as the finite series
    sum_k delta (h delta)^k (finite because delta strictly lowers the
    declared filtration, which is asserted entrywise first):

        d_small' = d_small + p A i      i' = i + h A i
        p' = p + p A h                  h' = h + h A h

    Returns (the perturbed contraction, the transferred differential).
    """
    if pert.base.space is not con.big.space:
        raise ValueError("perturbation lives on %s but the contraction "
                         "is on %s" % (pert.base.space.name,
                                       con.big.space.name))
    lo, hi = con.window[0], min(con.window[1], window)
    pert.assert_lowers(lo, hi)

    space = con.big.space
    delta = pert.delta
    h = con.homotopy

    def a_column(label):
        out = {}
        cur = {label: QONE}
        bound = pert.filtration(label)
        while cur:
            dv = delta.apply(cur)
            vaccum(out, dv)
            cur = h.apply(dv)
            if cur:
                top = max(pert.filtration(t) for t in cur)
                if not top < bound:
                    worst = max(cur, key=pert.filtration)
                    raise PerturbationError(
                        "perturbation series at %r does not descend; the "
                        "%s filtration is stuck on %r" %
                        (label, pert.filtration_tag, worst))
                bound = top
        return out

    a_map = GradedMap(space, space, -1, fn=a_column, name="A")
    i, p = con.include, con.project
    i2 = i.add(h.compose(a_map).compose(i), name="i'")
    p2 = p.add(p.compose(a_map).compose(h), name="p'")
    h2 = h.add(h.compose(a_map).compose(h), name="h'")
    d_small = con.small.d.add(p.compose(a_map).compose(i), name="d'")
    d_big = con.big.d.add(delta, name="d+delta")
    big = ChainComplex(space, d_big, (lo, hi), con.big.name + "+delta")
    small = ChainComplex(con.small.space, d_small, (lo, hi),
                         con.small.name + "'")
    out = Contraction(big, small, i2, p2, h2, (lo, hi),
                      name=con.name + "'")
    return out, d_small


# --------------------------------------------------------- transferred A-oo

class TransferredStructure:
    """A-infinity products extracted from a perturbed bar-level contraction.

    `algebra` holds the products on the small word space; `contraction`
    is the perturbed bar-level contraction; `differential` the transferred
    coderivation the products were read from.  Products answer only where
    the construction was verified: m_k on a word of suspended degree
    beyond `bar_window` raises WindowError rather than returning zero.
    """

    def __init__(self, algebra, contraction, differential, provenance,
                 window, bar_window):
        self.algebra = algebra
        self.contraction = contraction
        self.differential = differential
        self.provenance = provenance
        self.window = window
        self.bar_window = bar_window

    @property
    def name(self):
        return self.algebra.name

    @property
    def space(self):
        return self.algebra.space

    def m(self, k, word):
        return self.algebra.m(k, word)


def _merge_differential(word_space, a, name):
    """The product part of the bar differential of `a`: apply the
    suspended product b_k to every block of consecutive letters, with the
    staircase prefix of the (odd) coderivation."""
    arities = [k for k in a.arities if k >= 2]

    def fn(w):
        out = {}
        sign = 1
        for i in range(len(w)):
            for k in arities:
                if i + k > len(w):
                    continue
                b = a.suspended(k, w[i:i + k])
                for t, c in b.items():
                    vaccum(out, {w[:i] + (t,) + w[i + k:]: QONE},
                           Fraction(sign) * c)
            if (a.space.degree(w[i]) + 1) % 2:
                sign = -sign
        return out

    return GradedMap(word_space, word_space, -1, fn=fn, name=name)


def _transferred_operations(letter_space, dprime, arity_bound, bar_hi):
    """m_k callables reading the length-one corestriction of the
    transferred coderivation, guarded by the verified bar window."""

    def op(k):
        def fn(word):
            sdegs = [letter_space.degree(x) + 1 for x in word]
            if sum(sdegs) > bar_hi:
                raise WindowError(
                    "m_%d%r sits at suspended degree %d; the transferred "
                    "structure is verified only up to %d"
                    % (k, tuple(word), sum(sdegs), bar_hi))
            out = {}
            for label, c in dprime.column(tuple(word)).items():
                if len(label) == 1:
                    vaccum(out, {label[0]: QONE}, c)
            if suspension_factor(sdegs) == 1:
                return out
            return {t: -c for t, c in out.items()}
        return fn

    return {k: op(k) for k in range(1, arity_bound + 1)}


def _check_extraction(alg, word_space, dprime, bar_hi, arity_bound):
    """Re-assemble the coderivation from the extracted operations and
    compare it to the transferred differential on every word."""
    for n in range(2, bar_hi + 1):
        for w in word_space.basis(n):
            expect = {}
            sign = 1
            for i in range(len(w)):
                for k in range(1, min(arity_bound, len(w) - i) + 1):
                    b = alg.suspended(k, w[i:i + k])
                    for t, c in b.items():
                        vaccum(expect, {w[:i] + (t,) + w[i + k:]: QONE},
                               Fraction(sign) * c)
                if (alg.space.degree(w[i]) + 1) % 2:
                    sign = -sign
            diff = vsub(dprime.column(w), expect)
            if diff:
                bad = sorted(diff.items(), key=lambda kv: str(kv[0]))[0]
                raise PerturbationError(
                    "transferred differential is not the coderivation of "
                    "its corestrictions at %r: term %r off by %s"
                    % (w, bad[0], bad[1]))


def _bar_transfer(a, con, arity_bound, window, provenance, name,
                  weight_filtration=False, expect_minimal=False,
                  bar_hi=None):
    """Shared transfer engine; see the module docstring for the shape."""
    if bar_hi is None:
        bar_hi = window + arity_bound
    lifted = tensor_trick(con, bar_hi, arity_bound)
    tbig = lifted.big.space

    delta = _merge_differential(tbig, a, "d_merge")
    if weight_filtration:
        filtration = lambda w: (len(w), tbig.weight(w))  # noqa: E731
        tag = "(bar length, letter weight)"
    else:
        filtration = len
        tag = "bar length"
    pert = Perturbation(lifted.big, delta, filtration, tag)

    pcon, dprime = basic_perturbation_lemma(lifted, pert, bar_hi)
    ops = _transferred_operations(con.small.space, dprime, arity_bound,
                                  bar_hi)
    if expect_minimal:
        for n in range(1, bar_hi):
            for x in con.small.space.basis(n):
                v = ops[1]((x,))
                if v:
                    bad = sorted(v.items(), key=lambda kv: str(kv[0]))[0]
                    raise PerturbationError(
                        "transferred differential should vanish on the "
                        "small space but sends %r to %r (coefficient %s); "
                        "sign-convention defect upstream" %
                        (x, bad[0], bad[1]))
        ops[1] = {}
    alg = AInfinityAlgebra(name, con.small.space, ops, check=False)
    _check_extraction(alg, pcon.small.space, dprime, bar_hi, arity_bound)
    return TransferredStructure(alg, pcon, dprime, provenance, window,
                                (0, bar_hi))


# ------------------------------------------------------ symmetric small side

def _symmetric_space(name, generators, window, with_unit):
    index = {gname: i for i, (gname, _) in enumerate(generators)}
    degs = dict(generators)
    base = _monomials(generators, index)

    def loader(n):
        return [e for e in base(n) if with_unit or e[0] != ()]

    return GradedSpace(name, loader=loader, window=(0, window),
                       degree_fn=lambda w: sum(degs[x] for x in w),
                       weight_fn=len)


def algebra_product(a, vectors):
    """Left-to-right m_2 fold of coefficient vectors in a's space."""
    acc = vectors[0]
    for v in vectors[1:]:
        new = {}
        for la, ca in acc.items():
            for lb, cb in v.items():
                vaccum(new, a.m(2, (la, lb)), ca * cb)
        acc = new
    return acc


def _oriented(reps, degs):
    """Flip the sign of every odd representative (the desuspension
    orientation).  Transferring through the oriented inclusion
    conjugates the products by the parity automorphism, i.e. scales m_k
    by (-1)^k; this is the orientation for which the canonical twisting
    cochain x -> (x) solves Maurer-Cartan on the nose, with even arities
    (in particular every classical product) untouched."""
    return {name: (dict(v) if degs[name] % 2 == 0
                   else {k: -c for k, c in v.items()})
            for name, v in reps.items()}


def pbw_symmetrization(small, a, reps, degs, with_unit):
    """The symmetrization x_1...x_k -> (1/k!) sum_s +- z_{s(1)}...z_{s(k)}
    of chosen representative vectors, as a map into a's space."""

    def col(mono):
        if not mono:
            if with_unit:
                return {(): QONE}
            raise KeyError("empty monomial in a unitless inclusion")
        k = len(mono)
        dw = [degs[x] for x in mono]
        norm = Fraction(1, math.factorial(k))
        out = {}
        for perm in itertools.permutations(range(k)):
            sign = koszul_sign(perm, dw)
            prod = algebra_product(a, [reps[mono[j]] for j in perm])
            vaccum(out, prod, Fraction(sign) * norm)
        return out

    return GradedMap(small, a.space, 0, fn=col, name="eta")


# ----------------------------------------------------------- homology of Lie

def _l2_bilinear(g, u, v):
    out = {}
    for xa, ca in u.items():
        for xb, cb in v.items():
            vaccum(out, g.l(2, (xa, xb)), ca * cb)
    return out


def homology_lie(g):
    """The homology of a dg Lie algebra, as a Lie algebra with zero
    differential, together with chosen representative cycles.

    Returns (h, reps): reps maps each h-generator name to a cycle in g's
    generator space.  Generators are named "h<degree>.<k>" in the
    deterministic representative order; when g already has no
    differential it is returned unchanged with identity representatives.
    """
    if not g.is_strict:
        raise ValueError("homology_lie needs a dg Lie algebra; %s has "
                         "higher brackets" % g.name)
    l1 = g.brackets.get(1, {})
    if not any(v for v in l1.values()):
        return g, {name: {name: QONE} for name, _ in g.generators}

    top = max(d for _, d in g.generators)
    cx = ChainComplex(g.space, g.d1_map(), (1, top + 1), name=g.name)
    hom = Homology(cx, 1, top)
    gens = []
    reps = {}
    by_slot = {}
    for n in range(1, top + 1):
        for k, v in enumerate(hom.representatives(n)):
            name = "h%d.%d" % (n, k)
            gens.append((name, n))
            reps[name] = v
            by_slot[(n, k)] = name

    brackets = {}
    for i, (na, da) in enumerate(gens):
        for nb, db in gens[i:]:
            if na == nb and da % 2 == 0:
                continue
            if da + db > top:
                continue
            vec = _l2_bilinear(g, reps[na], reps[nb])
            cls = hom.classify(vec, da + db)
            if cls:
                brackets[(na, nb)] = {by_slot[(da + db, j)]: c
                                      for j, c in cls.items()}
    table = {2: brackets} if brackets else {}
    return DgLieAlgebra("H(%s)" % g.name, gens, table), reps


# ------------------------------------------------------------ the pipelines

def baranovsky_envelope(g, arity_bound, window, bar_hi=None):
    """The perturbative envelope of a minimal algebra, on symmetric words.

    Base: the cobar construction on the word coalgebra, contracted onto
    the symmetric-word space along the PBW-symmetrized one-letter words
    (cycles because g is minimal); the elimination aborts with a
    diagnostic if the prescribed cycles fail to complement the boundaries.
    One perturbation-lemma call then restores the concatenation product,
    filtered by (bar length, letter weight).

    Strictness does not depend on which homotopy the elimination chooses:
    the Koszul-antisymmetrization of the extracted m_k assembles, inside
    the cobar construction, the full differential of the length-k word of
    the generators, whose projection is forced to the single bracket
    letter by p d = 0.

    `bar_hi` truncates the tensor words the transfer runs through; the
    default supports every m_k, k <= arity_bound, on words of total
    letter degree <= window.  A caller that only evaluates products up
    to a known suspended degree may pass something smaller (>= window+1)
    to cut the cost; products beyond it raise WindowError.
    """
    if not g.is_minimal:
        raise ValueError("the perturbative envelope needs a minimal "
                         "algebra; %s has l_1" % g.name)
    bar_hi = _checked_bar_hi(bar_hi, window, arity_bound)
    ce = chevalley_eilenberg(g, bar_hi + 1)
    omega = cobar(ce, bar_hi)

    degs = dict(g.generators)
    small = _symmetric_space("S(%s)" % g.name, g.generators, bar_hi - 1,
                             with_unit=False)
    reps = _oriented({name: {((name,),): QONE} for name, _ in g.generators},
                     degs)
    eta = pbw_symmetrization(small, omega, reps, degs, with_unit=False)
    base = omega.complex((0, bar_hi))
    con = contraction_onto_cycles(base, 0, bar_hi - 1, small, eta,
                                  name="contract(%s)" % base.name)

    return _bar_transfer(omega, con, arity_bound, window, "baranovsky",
                         "U(%s)" % g.name, weight_filtration=True,
                         expect_minimal=True, bar_hi=bar_hi)


def _checked_bar_hi(bar_hi, window, arity_bound):
    if bar_hi is None:
        return window + arity_bound
    if bar_hi < window + 1:
        raise ValueError("bar truncation %d cannot sit below window %d + 1"
                         % (bar_hi, window))
    return bar_hi


def homotopy_transfer(a, con, arity_bound, window, provenance="generic-htt",
                      name=None):
    """Transfer the products of `a` through a contraction of its complex.

    The caller guarantees the side conditions and that con.big is a's
    complex; the product part of the bar differential is the perturbation,
    filtered by bar word length.
    """
    name = name or "T(%s)" % a.name
    return _bar_transfer(a, con, arity_bound, window, provenance, name)


def moreno_fernandez_envelope(g, arity_bound, window, bar_hi=None):
    """The homotopy-transfer envelope, on symmetric words over homology.

    Dg Lie input: the classical envelope is contracted onto symmetric
    words over chosen homology representatives along the symmetrization
    map, and the product is transferred.  Minimal input with higher
    brackets: the input is first replaced by its rectification (the free
    Lie model carried by the cobar construction), whose homology is the
    original space; the small side keeps the original generator names.
    `bar_hi` truncates the transfer as in the perturbative envelope.
    """
    bar_hi = _checked_bar_hi(bar_hi, window, arity_bound)
    if g.is_strict:
        lie = g
        h, hreps = homology_lie(g)
        u = classical_envelope(lie)
        reps = {name: {(x,): c for x, c in v.items()}
                for name, v in hreps.items()}
        small_name = "S(%s)" % h.name
        gens = h.generators
    elif g.is_minimal:
        lie = rectify(g, bar_hi)
        u = classical_envelope(lie)
        reps = {name: {(((name,),),): QONE} for name, _ in g.generators}
        small_name = "S(%s)" % g.name
        gens = g.generators
    else:
        raise ValueError("the transfer envelope needs a dg Lie algebra or "
                         "a minimal algebra; %s is neither" % g.name)

    degs = dict(gens)
    reps = _oriented(reps, degs)
    small = _symmetric_space(small_name, gens, bar_hi - 1, with_unit=True)
    eta = pbw_symmetrization(small, u, reps, degs, with_unit=True)
    ucx = u.complex((0, bar_hi))
    con = contraction_onto_cycles(ucx, 0, bar_hi - 1, small, eta,
                                  name="contract(%s)" % u.name)
    return _bar_transfer(u, con, arity_bound, window, "moreno",
                         "T(%s)" % u.name, expect_minimal=True,
                         bar_hi=bar_hi)
