"""Word coalgebras, bar and cobar constructions, twisting cochains.

Sign conventions are fixed once here and everything downstream inherits
them:

* Letters of word spaces are (de)suspended: a generator x contributes
  |x| + 1 to a coalgebra word, a letter c of a coalgebra contributes
  |c| - 1 to a cobar word.

* Structure maps act on suspended letters through the single conversion
  of `suspension_factor`: D_k = s l_k (s^-1)^k and b_k = s m_k (s^-1)^k,
  with no further arity-dependent signs.  Coderivation extensions carry
  the usual staircase prefix (-1)^(suspended degree of the prefix).

* The cobar differential of a letter is d(1/s c) = -1/s (dc) +
  sum (-1)^{|c_(1)|} 1/s c_(1) (x) 1/s c_(2), extended as a derivation.

* A twisting cochain tau: C -> A (degree -1) is Maurer-Cartan when

      sum_{t>=1} eps_t m_t(tau c_(1), ..., tau c_(t)) = tau(d_C c)

  for every word c, where eps_t = (-1)^(sum_j (t-1-j)|c_(j)|) is the
  Koszul staircase of applying t copies of the odd map tau.  Since the
  suspension factor of b_t on the images is the same staircase, the
  identity in suspended form, sum b_t(tau...) = tau d_C, is sign-free,
  and is exactly the word-length-one corestriction of d_BA q = q d_C
  for the induced coalgebra map q: C -> BA.
"""

import itertools
from fractions import Fraction

from .algebras import AInfinityAlgebra, DgAlgebra, DgLieAlgebra, \
    StrictMorphism, suspension_factor
from .graded import (ChainComplex, GradedMap, GradedSpace, QONE, WindowError,
                     sort_with_sign, vaccum)
from .reports import FAIL, PASS, Report


def _unshuffle_sign(positions, sdegrees):
    """Koszul sign for pulling the letters at `positions` to the front."""
    chosen = set(positions)
    e = 0
    for i in positions:
        for j in range(i):
            if j not in chosen:
                e += sdegrees[i] * sdegrees[j]
    return -1 if e % 2 else 1


class DgCoalgebra:
    """A conilpotent word coalgebra with a coderivation differential.

    `coproduct(label)` returns the reduced coproduct as a list of
    (left, right, coefficient) triples; iterating it gives `splits`.
    The empty word is not stored: everything is coaugmentation-reduced.
    """

    def __init__(self, name, space, differential, coproduct, window):
        self.name = name
        self.space = space
        self.differential = differential
        self._coproduct = coproduct
        self._cop_cache = {}
        self._split_cache = {}
        self.window = window

    def d(self, label):
        return self.differential.column(label)

    def reduced_coproduct(self, label):
        if label not in self._cop_cache:
            self._cop_cache[label] = self._coproduct(label)
        return self._cop_cache[label]

    def splits(self, label, parts):
        """Iterated reduced coproduct: list of (tuple of labels, coeff)."""
        if parts == 1:
            return [((label,), QONE)]
        key = (label, parts)
        if key not in self._split_cache:
            out = []
            for left, right, c in self.reduced_coproduct(label):
                for rest, c2 in self.splits(left, parts - 1):
                    out.append((rest + (right,), c * c2))
            self._split_cache[key] = out
        return self._split_cache[key]

    def complex(self, window=None):
        window = window or self.window
        return ChainComplex(self.space, self.differential, window, self.name)


# ----------------------------------------------------------- word enumerators

def _symmetric_words(generators, index, degrees):
    """Loader for canonical symmetric words on suspended generators.

    Non-decreasing in file order; a letter repeats only when its
    suspended degree is even (odd generator degree).  Degree of a word
    is the sum of suspended degrees, weight is the letter count.
    """
    names = [g for g, _ in generators]

    def loader(n):
        words = []

        def extend(start, remaining, word):
            if remaining == 0:
                if word:
                    words.append(tuple(word))
                return
            for i in range(start, len(names)):
                sd = degrees[names[i]] + 1
                if sd > remaining:
                    continue
                if word and word[-1] == names[i] and sd % 2:
                    continue
                word.append(names[i])
                extend(i, remaining - sd, word)
                word.pop()

        extend(0, n, [])
        words.sort(key=lambda w: (len(w), tuple(index[x] for x in w)))
        return [(w, n, len(w)) for w in words]

    return loader


def _tensor_words(letter_space, letter_degree_shift, min_letter_degree=1,
                  max_length=None):
    """Loader for tensor words over a lazy letter space.

    A letter of degree d contributes d + letter_degree_shift; shift +1
    suspends (bar), shift -1 desuspends (cobar).  Weight is the sum of
    letter weights when the letter space carries them, else the count.
    `max_length` truncates to words of at most that many letters (a
    subcomplex whenever the differential never lengthens words).
    """

    def loader(n):
        words = []

        def extend(remaining, word):
            if remaining == 0:
                if word:
                    words.append(tuple(word))
                return
            if max_length is not None and len(word) >= max_length:
                return
            d = min_letter_degree
            while d + letter_degree_shift <= remaining:
                step = d + letter_degree_shift
                if step >= 1:
                    for letter in letter_space.basis(d):
                        word.append(letter)
                        extend(remaining - step, word)
                        word.pop()
                d += 1

        extend(n, [])
        out = []
        for w in words:
            parts = [letter_space.weight(x) for x in w]
            weight = sum(parts) if all(p is not None for p in parts) \
                else len(w)
            out.append((w, n, weight))
        return out

    return loader


# ------------------------------------------------------- Chevalley-Eilenberg

def chevalley_eilenberg(g, window, arity_bound=None):
    """The word coalgebra on suspended generators whose coderivation
    differential collects all brackets; it squares to zero exactly when
    the generalized Jacobi identities hold."""
    degrees = {name: d for name, d in g.generators}
    index = g.index
    space = GradedSpace("C(%s)" % g.name, window=(0, window),
                        loader=_symmetric_words(g.generators, index, degrees),
                        degree_fn=lambda w: sum(degrees[x] + 1 for x in w),
                        weight_fn=len)
    arities = sorted(k for k in g.brackets
                     if arity_bound is None or k <= arity_bound)

    def d_word(w):
        out = {}
        sdeg = [degrees[x] + 1 for x in w]
        for k in arities:
            if k > len(w):
                continue
            for pos in itertools.combinations(range(len(w)), k):
                block = tuple(w[i] for i in pos)
                lk = g.l(k, block)
                if not lk:
                    continue
                sign = (_unshuffle_sign(pos, sdeg)
                        * suspension_factor([sdeg[i] for i in pos]))
                rest = [i for i in range(len(w)) if i not in pos]
                for t, c in lk.items():
                    items = [(index[t], degrees[t] + 1)]
                    items += [(index[w[i]], sdeg[i]) for i in rest]
                    canon, s2 = sort_with_sign(items, "sym")
                    if canon is None:
                        continue
                    word2 = tuple(g.generators[i][0] for i, _ in canon)
                    vaccum(out, {word2: QONE}, Fraction(sign * s2) * c)
        return out

    def coproduct(w):
        sdeg = [degrees[x] + 1 for x in w]
        terms = []
        for r in range(1, len(w)):
            for pos in itertools.combinations(range(len(w)), r):
                rest = tuple(i for i in range(len(w)) if i not in pos)
                sign = _unshuffle_sign(pos, sdeg)
                terms.append((tuple(w[i] for i in pos),
                              tuple(w[i] for i in rest),
                              Fraction(sign)))
        return terms

    differential = GradedMap(space, space, -1, fn=d_word, name="d_CE")
    ce = DgCoalgebra("C(%s)" % g.name, space, differential, coproduct,
                     (0, window))
    ce.algebra = g
    return ce


# ------------------------------------------------------------------------ bar

def bar(a, window, arity_bound=None):
    """Reduced tensor coalgebra on the suspension of the positive part,
    with the coderivation differential collecting all products; squares
    to zero exactly when the Stasheff identities hold."""
    space = GradedSpace("B(%s)" % a.name, window=(0, window),
                        loader=_tensor_words(a.space, +1),
                        degree_fn=lambda w: sum(a.space.degree(x) + 1
                                                for x in w),
                        weight_fn=len)
    arities = sorted(k for k in a.ops
                     if arity_bound is None or k <= arity_bound)

    def d_word(w):
        out = {}
        sdeg = [a.space.degree(x) + 1 for x in w]
        for k in arities:
            for i in range(len(w) - k + 1):
                bk = a.suspended(k, w[i:i + k])
                if not bk:
                    continue
                prefix = -1 if sum(sdeg[:i]) % 2 else 1
                if len(w) > k and sum(sdeg[i:i + k]) - k + (k - 2) == -1:
                    # a strict unit appearing inside a longer word
                    raise ValueError(
                        "bar differential produced a degree-0 letter "
                        "inside %r" % (w,))
                for t, c in bk.items():
                    word2 = w[:i] + (t,) + w[i + k:]
                    vaccum(out, {word2: QONE}, Fraction(prefix) * c)
        return out

    def coproduct(w):
        return [(w[:i], w[i:], QONE) for i in range(1, len(w))]

    differential = GradedMap(space, space, -1, fn=d_word, name="d_bar")
    ba = DgCoalgebra("B(%s)" % a.name, space, differential, coproduct,
                     (0, window))
    ba.algebra = a
    return ba


# ---------------------------------------------------------------------- cobar

def cobar(c, window):
    """Reduced tensor algebra on the desuspension of a word coalgebra,
    with differential d(1/s c) = -1/s(dc) + sum (-1)^{|c_(1)|}
    1/s c_(1) (x) 1/s c_(2) extended as a derivation; the product is
    concatenation."""
    if c.space.window is not None and c.space.window[1] < window + 1:
        raise WindowError(
            "cobar words of degree %d need letters of degree %d, but %s "
            "is stored only up to %d"
            % (window, window + 1, c.name, c.space.window[1]))
    space = GradedSpace("O(%s)" % c.name, window=(0, window),
                        loader=_tensor_words(c.space, -1,
                                             min_letter_degree=2),
                        degree_fn=lambda w: sum(c.space.degree(x) - 1
                                                for x in w),
                        weight_fn=lambda w: sum(c.space.weight(x)
                                                for x in w))

    def d_letter(letter):
        out = {}
        for t, coeff in c.d(letter).items():
            vaccum(out, {(t,): QONE}, -coeff)
        for left, right, coeff in c.reduced_coproduct(letter):
            sign = -1 if c.space.degree(left) % 2 else 1
            vaccum(out, {(left, right): QONE}, Fraction(sign) * coeff)
        return out

    def d_word(w):
        out = {}
        prefix = 1
        for i, letter in enumerate(w):
            for piece, coeff in d_letter(letter).items():
                vaccum(out, {w[:i] + piece + w[i + 1:]: QONE},
                       Fraction(prefix) * coeff)
            if (c.space.degree(letter) - 1) % 2:
                prefix = -prefix
        return out

    def product(word):
        u, v = word
        return {u + v: QONE}

    omega = DgAlgebra("O(%s)" % c.name, space,
                      {1: lambda word: d_word(word[0]), 2: product},
                      check=False)
    omega.coalgebra = c
    return omega


# ---------------------------------------------------------- twisting cochains

class TwistingCochain:
    """A degree -1 map from a word coalgebra to an algebra's space."""

    def __init__(self, source, target, data, name="tau"):
        self.source = source
        self.target = target
        self.data = data
        self.name = name
        self._cache = {}

    def __call__(self, label):
        if label not in self._cache:
            if callable(self.data):
                self._cache[label] = self.data(label)
            else:
                self._cache[label] = dict(self.data.get(label, {}))
        return self._cache[label]

    def apply(self, v):
        out = {}
        for label, coeff in v.items():
            vaccum(out, self(label), coeff)
        return out


def canonical_twisting_cochain(ce, target, name="tau"):
    """x on one-letter words, zero elsewhere.  The target is a word
    model containing the generators as its length-one words."""
    for gname, _ in ce.algebra.generators:
        if not target.space.has((gname,)):
            raise ValueError("target %s has no length-one word for %r"
                             % (target.name, gname))

    def data(word):
        if len(word) == 1:
            return {(word[0],): QONE}
        return {}

    return TwistingCochain(ce, target, data, name=name)


def _apply_multilinear(a, k, vectors):
    """m_k extended to k coefficient vectors (scalars carry no signs)."""
    out = {}

    def expand(i, word, coeff):
        if i == k:
            vaccum(out, a.m(k, tuple(word)), coeff)
            return
        for label, c in vectors[i].items():
            word.append(label)
            expand(i + 1, word, coeff * c)
            word.pop()

    expand(0, [], QONE)
    return out


def check_maurer_cartan(tau, window, arity_bound):
    """Verify sum_t +- m_t(tau c_(1), ..., tau c_(t)) = tau(d_C c) on
    every word of the source coalgebra in the window.  The sign on each
    t-fold term is the Koszul staircase of applying t copies of the odd
    map tau, (-1)^(sum_j (t-1-j)|c_(j)|) -- the same staircase the
    induced coalgebra map into the bar construction carries, so the two
    checks pin down one convention."""
    c = tau.source
    a = tau.target
    lo, hi = c.window
    for n in range(lo, min(hi, window + 1) + 1):
        for word in c.space.basis(n):
            residual = _apply_multilinear(a, 1, [tau(word)])
            for t in range(2, arity_bound + 1):
                for parts, coeff in c.splits(word, t):
                    vecs = [tau(p) for p in parts]
                    if any(not v for v in vecs):
                        continue
                    sign = suspension_factor(
                        [c.space.degree(p) for p in parts])
                    vaccum(residual, _apply_multilinear(a, t, vecs),
                           Fraction(sign) * coeff)
            vaccum(residual, tau.apply(c.d(word)), -QONE)
            if residual:
                bad = sorted(residual.items(), key=lambda kv: str(kv[0]))[0]
                return Report("maurer_cartan", tau.name, FAIL,
                              window=(lo, window), arity_bound=arity_bound,
                              witness={"word": list(word),
                                       "term": str(bad[0]),
                                       "coefficient": str(bad[1])})
    return Report("maurer_cartan", tau.name, PASS, window=(lo, window),
                  arity_bound=arity_bound)


def coalgebra_map_from_cochain(tau, window, arity_bound=None):
    """The coalgebra map q: C -> B(A) with corestriction tau:
    q = sum_l (s tau)^{(x)l} o (reduced coproduct iterated l times).
    Since s tau has degree 0 and both source and target words are
    written on suspended letters, no Koszul signs appear here; the
    staircase sits inside b_t on the bar side (and hence inside the
    Maurer-Cartan identity once b_t is unpacked as chi m_t).

    Returns (q as a GradedMap, the bar coalgebra it lands in).
    """
    c = tau.source
    ba = bar(tau.target, window, arity_bound=arity_bound)

    def q_word(word):
        out = {}
        length = 1
        while True:
            split_terms = c.splits(word, length)
            if not split_terms:
                break
            for parts, coeff in split_terms:
                vecs = [tau(p) for p in parts]
                if any(not v for v in vecs):
                    continue
                total = coeff

                def expand(i, letters, k):
                    if i == length:
                        vaccum(out, {tuple(letters): QONE}, k)
                        return
                    for label, cf in vecs[i].items():
                        letters.append(label)
                        expand(i + 1, letters, k * cf)
                        letters.pop()

                expand(0, [], total)
            length += 1
        return out

    q = GradedMap(c.space, ba.space, 0, fn=q_word, name="q")
    return q, ba


def check_coalgebra_map(q, c, ba, window):
    """Chain-map check d_BA q = q d_C on the window, plus degreewise
    injectivity of q (every source word feeds an independent column)."""
    from .elim import Solver
    lo, hi = c.window
    hi = min(hi, window)
    for n in range(lo, hi + 1):
        rows = {}
        solver = Solver()
        for word in c.space.basis(n):
            qcol = q.column(word)
            lhs = ba.differential.apply(qcol)
            vaccum(lhs, q.apply(c.d(word)), -QONE)
            if lhs:
                bad = sorted(lhs.items(), key=lambda kv: str(kv[0]))[0]
                return Report("coalgebra_map", q.name, FAIL,
                              window=(lo, hi),
                              witness={"word": list(word), "degree": n,
                                       "term": str(bad[0]),
                                       "identity": "chain-map"})
            col = {}
            for bar_word, coeff in qcol.items():
                rows.setdefault(bar_word, len(rows))
                col[rows[bar_word]] = coeff
            if not solver.feed(col):
                return Report("coalgebra_map", q.name, FAIL,
                              window=(lo, hi),
                              witness={"word": list(word), "degree": n,
                                       "identity": "degreewise-injective"})
    return Report("coalgebra_map", q.name, PASS, window=(lo, hi))


# -------------------------------------------------------------- twisted tensor

def twisted_tensor(ce, a, tau, window):
    """The twisted tensor product complex of a word coalgebra and an
    algebra along a twisting cochain.

    Labels are pairs (coalgebra word or (), algebra label); the unit ()
    on either side is strict.  The differential is

        d(c (x) u) = dc (x) u - (-1)^{|c|} c (x) du
                   - sum_{t>=1} (-1)^{|c_(0)|} c_(0) (x)
                         m_{t+1}(tau c_(1), ..., tau c_(t), u)

    with c_(0) allowed to be empty and the tau-factors carrying their
    staircase sign.  The orientation of the du term follows the stored
    coderivation conventions (the cap term's t = 1 piece is itself a
    u-differential twisted by tau, and both must point the same way);
    d^2 = 0 is equivalent to tau being Maurer-Cartan.
    """
    c_space = ce.space
    has_unit = a.space.dim(0) > 0
    if has_unit:
        (unit_label,) = a.space.basis(0)
    else:
        unit_label = ()

    def a_basis(n):
        if n == 0:
            return [unit_label]
        return list(a.space.basis(n))

    def a_degree(label):
        if label == unit_label and not has_unit:
            return 0
        return a.space.degree(label)

    def a_d(label):
        if label == unit_label and not has_unit:
            return {}
        return a.m(1, (label,))

    def a_m(t, word):
        if any(x == unit_label for x in word):
            if t == 2:
                u, v = word
                other = v if u == unit_label else u
                if u == unit_label and v == unit_label:
                    return {unit_label: QONE}
                return {other: QONE}
            if not has_unit:
                return {}
        return a.m(t, word)

    def loader(n):
        out = []
        for dc in range(0, n + 1):
            if dc == 0:
                cws = [()]
            else:
                cws = list(c_space.basis(dc))
            for aw in a_basis(n - dc):
                for cw in cws:
                    out.append(((cw, aw), n))
        return out

    space = GradedSpace("tw(%s,%s)" % (ce.name, a.name),
                        window=(0, window), loader=loader)

    def d_label(label):
        cw, aw = label
        out = {}
        if cw != ():
            for c2, coeff in ce.d(cw).items():
                vaccum(out, {(c2, aw): QONE}, coeff)
        csign = Fraction(1 if (c_space.degree(cw) if cw != () else 0) % 2
                         else -1)
        for a2, coeff in a_d(aw).items():
            vaccum(out, {(cw, a2): QONE}, csign * coeff)
        if cw != ():
            cap_splits = []
            weight = c_space.weight(cw)
            for t in range(1, weight + 1):
                for parts, coeff in ce.splits(cw, t):
                    cap_splits.append(((), parts, coeff))
                if t + 1 <= weight:
                    for parts, coeff in ce.splits(cw, t + 1):
                        cap_splits.append((parts[0], parts[1:], coeff))
            for c0, parts, coeff in cap_splits:
                vecs = [tau(p) for p in parts]
                if any(not v for v in vecs):
                    continue
                sign = suspension_factor(
                    [c_space.degree(p) for p in parts])
                pre = -1 if (c_space.degree(c0) if c0 != () else 0) % 2 \
                    else 1
                t = len(parts)
                target = _apply_multilinear_unital(
                    a_m, t + 1, vecs + [{aw: QONE}])
                for a2, cf in target.items():
                    vaccum(out, {(c0, a2): QONE},
                           Fraction(-sign * pre) * coeff * cf)
        return out

    differential = GradedMap(space, space, -1, fn=d_label, name="d_tw")
    return ChainComplex(space, differential, (0, window),
                        "tw(%s,%s)" % (ce.name, a.name))


def _apply_multilinear_unital(m_fn, k, vectors):
    out = {}

    def expand(i, word, coeff):
        if i == k:
            vaccum(out, m_fn(k, tuple(word)), coeff)
            return
        for label, c in vectors[i].items():
            word.append(label)
            expand(i + 1, word, coeff * c)
            word.pop()

    expand(0, [], QONE)
    return out


# ---------------------------------------------------------------- rectify

def rectify(g, window, name=None):
    """The dg Lie algebra replacing a minimal algebra: the free graded
    Lie algebra on the desuspended reduced word coalgebra, inside the
    tensor algebra, with the cobar differential.

    Basis: greedy echelon of left-normed brackets of letters, built
    degree by degree; the table-based output is the window truncation
    (brackets landing above the window are dropped).
    """
    if not g.is_minimal:
        raise ValueError("rectify needs a minimal algebra; %s has l_1"
                         % g.name)
    from .homology import _LabelSolver
    ce = chevalley_eilenberg(g, window + 1)
    omega = cobar(ce, window)
    name = name or "L(%s)" % g.name

    letters = {}
    for n in range(1, window + 1):
        letters[n] = [w[0] for w in omega.space.basis(n) if len(w) == 1]

    def letter_degree(c):
        return ce.space.degree(c) - 1

    def expand(elt):
        """Tensor-algebra expansion of a left-normed bracket of letters."""
        vec = {(elt[0],): QONE}
        deg = letter_degree(elt[0])
        for letter in elt[1:]:
            ld = letter_degree(letter)
            new = {}
            sign = -1 if (deg * ld) % 2 else 1
            for word, coeff in vec.items():
                vaccum(new, {word + (letter,): QONE}, coeff)
                vaccum(new, {(letter,) + word: QONE}, -Fraction(sign) * coeff)
            vec = new
            deg += ld
        return vec

    basis = []          # (name, degree) in construction order
    expansions = {}     # name -> tensor expansion
    solvers = {}        # degree -> _LabelSolver over tensor words
    fed = {}            # degree -> candidate names in feed order

    for n in range(1, window + 1):
        solver = _LabelSolver()
        solvers[n] = solver
        fed[n] = []
        candidates = [(letter,) for letter in letters[n]]
        for bname, bdeg in list(basis):
            for m in sorted(letters):
                if bdeg + m == n:
                    for letter in letters[m]:
                        candidates.append(bname + (letter,))
        for cand in candidates:
            vec = expand(cand)
            fed[n].append(cand)
            if solver.feed(vec):
                basis.append((cand, n))
                expansions[cand] = vec

    def in_basis(vec, degree):
        # solve() keys coefficients by feed order; only columns that
        # became pivots (= basis elements) can occur in a combination
        coords = solvers[degree].solve(vec)
        if coords is None:
            raise ValueError("element of degree %d escapes the free Lie "
                             "basis (convention defect)" % degree)
        return {fed[degree][j]: coeff for j, coeff in coords.items()}

    brackets1 = {}
    brackets2 = {}
    for bname, bdeg in basis:
        dvec = {}
        for word, coeff in expansions[bname].items():
            vaccum(dvec, omega.m(1, (word,)), coeff)
        if dvec:
            brackets1[(bname,)] = in_basis(dvec, bdeg - 1)
    for i, (na, da) in enumerate(basis):
        for nb, db in basis[i:]:
            if da + db > window:
                continue
            if na == nb and da % 2 == 0:
                continue
            comm = {}
            sign = -1 if (da * db) % 2 else 1
            for wa, ca in expansions[na].items():
                for wb, cb in expansions[nb].items():
                    vaccum(comm, {wa + wb: QONE}, ca * cb)
                    vaccum(comm, {wb + wa: QONE}, -Fraction(sign) * ca * cb)
            if comm:
                brackets2[(na, nb)] = in_basis(comm, da + db)

    generators = [(bname, bdeg) for bname, bdeg in basis]
    table = {}
    if brackets1:
        table[1] = brackets1
    if brackets2:
        table[2] = brackets2
    return DgLieAlgebra(name, generators, table)


def rectify_counit(rect, g):
    """The strict comparison from the rectification onto (g, l_2):
    a one-letter generator maps to its generator, longer brackets map to
    the iterated bracket of their letter images (zero unless every
    letter is a one-generator word).

    The target is the arity-two truncation of g; for minimal g this is a
    genuine graded Lie algebra (its Jacobiator is a boundary of l_3 terms,
    all of which involve the vanishing l_1).
    """
    target = DgLieAlgebra(
        g.name + "|lie", g.generators,
        {k: t for k, t in g.brackets.items() if k <= 2}, check=False)

    def kappa(letter):
        if len(letter) == 1:
            return {letter[0]: QONE}
        return {}

    columns = {}
    for bname, _ in rect.generators:
        img = kappa(bname[0])
        for letter in bname[1:]:
            nxt = kappa(letter)
            out = {}
            for xa, ca in img.items():
                for xb, cb in nxt.items():
                    vaccum(out, target.l(2, (xa, xb)), ca * cb)
            img = out
            if not img:
                break
        columns[bname] = img
    linear = GradedMap(rect.space, target.space, 0, columns=columns,
                       name="counit")
    return StrictMorphism(rect, target, linear, name="counit(%s)" % g.name)
