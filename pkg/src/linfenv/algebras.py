"""Algebras up to homotopy on explicit graded bases.

An L-infinity algebra stores brackets l_k (degree k-2) on canonical words:
generator names in non-decreasing file order, with a repeated name allowed
only when that generator has odd degree (graded antisymmetry kills even
repeats).  An A-infinity algebra stores products m_k (degree k-2) on
ordered words, either as finite tables or as functions on a lazy basis
(the classical universal envelope is the main function-backed instance).

All word-level machinery downstream works with the suspended operations

    D_k = s l_k (s^{-1})^{(x) k},      b_k = s m_k (s^{-1})^{(x) k},

because on suspended letters every structure map has degree -1 and the
Koszul bookkeeping reduces to one rule: moving s or s^{-1} past an element
of degree n costs (-1)^n.  Unwinding the tensor factors gives the single
conversion factor implemented in `suspension_factor`, which is its own
inverse (converting either way multiplies by the same sign).
"""

from fractions import Fraction

from .graded import (ChainComplex, GradedMap, GradedSpace, QONE, koszul_sign,
                     sort_with_sign, vaccum)
from .reports import Report


def suspension_factor(suspended_degrees):
    """Sign of (s^{-1})^{(x)k} applied to a word of suspended letters.

    Crossing the i-th desuspension past the remaining letters gives
    (-1)^(sum_j (k-1-j)|s x_j|), 0-based.  The same factor converts in the
    opposite direction (s^{(x)k} on the desuspended word), so b_k(sw) =
    factor * m_k(w) and m_k(w) = factor * b_k(sw) with the factor always
    evaluated on the suspended degrees.
    """
    k = len(suspended_degrees)
    e = 0
    for j, d in enumerate(suspended_degrees):
        e += (k - 1 - j) * d
    return -1 if e % 2 else 1


def _generator_space(name, generators):
    seen = []
    for gname, degree in generators:
        if degree < 1:
            raise ValueError("generator %r has degree %d; positive grading "
                             "(all degrees >= 1) is required" % (gname, degree))
        seen.append((gname, degree))
    return GradedSpace(name, elements=seen)


class LInfinityAlgebra:
    """Brackets l_k of degree k-2 on canonical antisymmetric words."""

    def __init__(self, name, generators, brackets=None, check=True):
        self.name = name
        self.generators = [(g, d) for g, d in generators]
        self.space = _generator_space(name, self.generators)
        self.index = {g: i for i, (g, d) in enumerate(self.generators)}
        self.brackets = {}
        for k, table in sorted((brackets or {}).items()):
            self.brackets[k] = dict(table)
        if check:
            self._validate()

    def _validate(self):
        for k, table in self.brackets.items():
            for word, out in table.items():
                if len(word) != k:
                    raise ValueError("bracket arity %d stored on word %r"
                                     % (k, word))
                degs = [self.space.degree(g) for g in word]
                idx = [self.index[g] for g in word]
                for a, b in zip(range(len(word) - 1), range(1, len(word))):
                    if idx[a] > idx[b]:
                        raise ValueError(
                            "%s: word %r is not in canonical (file) order"
                            % (self.name, word))
                    if word[a] == word[b] and degs[a] % 2 == 0:
                        raise ValueError(
                            "%s: even generator %r repeats in %r"
                            % (self.name, word[a], word))
                want = sum(degs) + k - 2
                for g, c in out.items():
                    if not isinstance(c, Fraction):
                        raise ValueError("coefficient of %r is not a Fraction"
                                         % (g,))
                    if self.space.degree(g) != want:
                        raise ValueError(
                            "%s: l_%d%r hits %r of degree %d, expected %d"
                            % (self.name, k, word, g,
                               self.space.degree(g), want))

    @property
    def max_arity(self):
        return max(self.brackets, default=1)

    @property
    def is_minimal(self):
        return not self.brackets.get(1)

    @property
    def is_strict(self):
        return all(k <= 2 for k, t in self.brackets.items() if t)

    def degrees(self, word):
        return [self.space.degree(g) for g in word]

    def l(self, k, word):
        """Evaluate l_k on a word in any order (Koszul-antisymmetric)."""
        table = self.brackets.get(k)
        if not table:
            return {}
        items = [(self.index[g], self.space.degree(g)) for g in word]
        canon, sign = sort_with_sign(items, "antisym")
        if canon is None:
            return {}
        names = tuple(self.generators[i][0] for i, _ in canon)
        out = table.get(names)
        if not out:
            return {}
        if sign == 1:
            return dict(out)
        return {g: -c for g, c in out.items()}

    def suspended(self, k, word):
        """D_k = s l_k (s^-1)^k on the word read as suspended letters."""
        sdegs = [self.space.degree(g) + 1 for g in word]
        v = self.l(k, word)
        if suspension_factor(sdegs) == 1 or not v:
            return v
        return {g: -c for g, c in v.items()}

    def abelianization(self):
        return LInfinityAlgebra(self.name + "_ab", self.generators, {},
                                check=False)

    def d1_map(self):
        """l_1 as a GradedMap (the internal differential)."""
        return GradedMap(self.space, self.space, -1,
                         fn=lambda g: self.l(1, (g,)), name="l1")


class DgLieAlgebra(LInfinityAlgebra):
    """An L-infinity algebra with brackets only in arities 1 and 2."""

    def __init__(self, name, generators, brackets=None, check=True):
        super().__init__(name, generators, brackets, check=check)
        if not self.is_strict:
            raise ValueError("%s carries brackets of arity > 2" % name)


class AInfinityAlgebra:
    """Products m_k of degree k-2 on ordered words.

    `ops[k]` is either a dict word -> vector (finite tables, validated) or
    a callable word -> vector (lazy instances such as envelopes); lazy
    evaluations are memoized.  The unit, when the space has an empty-word
    basis element, is strict: it is handled by callers (bar constructions
    use the reduced part, twisted tensors extend by m_2(1, u) = u).
    """

    def __init__(self, name, space, ops, check=True):
        self.name = name
        self.space = space
        self.ops = dict(ops)
        self._cache = {}
        if check:
            self._validate()

    def _validate(self):
        for k, table in self.ops.items():
            if callable(table):
                continue
            for word, out in table.items():
                if len(word) != k:
                    raise ValueError("product arity %d stored on word %r"
                                     % (k, word))
                want = sum(self.space.degree(x) for x in word) + k - 2
                for y, c in out.items():
                    if not isinstance(c, Fraction):
                        raise ValueError("coefficient of %r is not a Fraction"
                                         % (y,))
                    if self.space.degree(y) != want:
                        raise ValueError(
                            "%s: m_%d%r hits %r of degree %d, expected %d"
                            % (self.name, k, word, y,
                               self.space.degree(y), want))

    @property
    def arities(self):
        return sorted(self.ops)

    @property
    def max_arity(self):
        return max(self.ops, default=1)

    @property
    def is_minimal(self):
        op = self.ops.get(1)
        if op is None:
            return True
        if callable(op):
            raise ValueError("cannot decide minimality of a lazy m_1")
        return not any(op.values())

    def m(self, k, word):
        op = self.ops.get(k)
        if op is None:
            return {}
        if callable(op):
            key = (k, word)
            if key not in self._cache:
                self._cache[key] = op(word)
            return self._cache[key]
        return dict(op.get(word, {}))

    def suspended(self, k, word):
        """b_k = s m_k (s^-1)^k on the word read as suspended letters."""
        sdegs = [self.space.degree(x) + 1 for x in word]
        v = self.m(k, word)
        if suspension_factor(sdegs) == 1 or not v:
            return v
        return {y: -c for y, c in v.items()}

    def d1_map(self):
        return GradedMap(self.space, self.space, -1,
                         fn=lambda x: self.m(1, (x,)), name="m1")

    def complex(self, window):
        """The underlying chain complex (space, m_1) on the given window."""
        return ChainComplex(self.space, self.d1_map(), window, self.name)


class DgAlgebra(AInfinityAlgebra):
    """Strict dg algebra: only m_1 (a derivation differential) and m_2."""

    def __init__(self, name, space, ops, check=True):
        if any(k > 2 for k in ops):
            raise ValueError("%s has products of arity > 2" % name)
        super().__init__(name, space, ops, check=check)


class StrictMorphism:
    """A degree-0 linear map commuting with every stored bracket."""

    def __init__(self, source, target, linear, name=""):
        self.source = source
        self.target = target
        self.linear = linear
        self.name = name or "morphism"

    def _push_word(self, k, word):
        """Evaluate l_k^target on the image of a word, multilinearly."""
        out = {}
        images = [self.linear.column(g) for g in word]

        def expand(i, partial, coeff):
            if i == len(images):
                vaccum(out, self.target.l(k, tuple(partial)), coeff)
                return
            for g, c in images[i].items():
                partial.append(g)
                expand(i + 1, partial, coeff * c)
                partial.pop()

        expand(0, [], QONE)
        return out

    def check(self, arity_bound=None):
        """Report whether f l_k = l_k (f x ... x f) on all canonical words
        of the source (the target side can be nonzero where l_k^source
        vanishes, so stored words alone would not be enough)."""
        import itertools
        from .reports import FAIL, PASS
        bound = arity_bound or max(self.source.max_arity,
                                   self.target.max_arity)
        names = [g for g, _ in self.source.generators]
        degs = dict(self.source.generators)
        for k in range(1, bound + 1):
            if k not in self.source.brackets and k not in self.target.brackets:
                continue
            for word in itertools.combinations_with_replacement(names, k):
                if any(word[i] == word[i + 1] and degs[word[i]] % 2 == 0
                       for i in range(k - 1)):
                    continue
                lhs = self.linear.apply(self.source.l(k, word))
                rhs = self._push_word(k, word)
                vaccum(lhs, rhs, -QONE)
                if lhs:
                    bad = sorted(lhs.items(), key=lambda kv: str(kv[0]))[0]
                    return Report("strict_morphism", self.name, FAIL,
                                  arity_bound=bound,
                                  witness={"arity": k, "word": list(word),
                                           "term": str(bad[0]),
                                           "coefficient": str(bad[1])})
        return Report("strict_morphism", self.name, PASS, arity_bound=bound)


def check_l_infinity(g, arity_bound, window):
    """Pass iff the word-coalgebra differential built from g squares to
    zero on the window (all generalized Jacobi identities there)."""
    from .barcobar import chevalley_eilenberg
    from .homology import check_complex
    ce = chevalley_eilenberg(g, window + 1, arity_bound=arity_bound)
    inner = check_complex(ce.complex(), 0, window + 1)
    return Report("check_l_infinity", g.name, inner.status,
                  window=(0, window), arity_bound=arity_bound,
                  witness=inner.witness)


def check_a_infinity(a, arity_bound, window):
    """Pass iff the tensor-coalgebra differential built from a squares to
    zero on the window (all Stasheff identities there)."""
    from .barcobar import bar
    from .homology import check_complex
    ba = bar(a, window + 1, arity_bound=arity_bound)
    inner = check_complex(ba.complex(), 0, window + 1)
    return Report("check_a_infinity", a.name, inner.status,
                  window=(0, window), arity_bound=arity_bound,
                  witness=inner.witness)


def antisymmetrize(a, arity_bound, window=None):
    """Koszul-signed antisymmetrization of an A-infinity algebra.

    l_k(x_1, ..., x_k) = sum over permutations of sgn * Koszul sign times
    m_k applied to the permuted word; on ordered pairs this is the graded
    commutator m_2(x, y) - (-1)^(|x||y|) m_2(y, x).  Output brackets are
    stored on canonical words built from basis labels with degree at most
    `window` (required when the underlying space is infinite).
    """
    import itertools

    if window is None:
        if a.space.loader is not None:
            raise ValueError("antisymmetrize of a lazy algebra needs a window")
        labels = list(a.space.labels())
    else:
        labels = []
        for n in range(1, window + 1):
            labels.extend(a.space.basis(n))
    order = {x: i for i, x in enumerate(labels)}
    degs = {x: a.space.degree(x) for x in labels}

    brackets = {}
    for k in range(1, arity_bound + 1):
        if k not in a.ops:
            continue
        table = {}
        for combo in itertools.combinations_with_replacement(labels, k):
            if any(combo[i] == combo[i + 1] and degs[combo[i]] % 2 == 0
                   for i in range(k - 1)):
                continue
            word_degs = [degs[x] for x in combo]
            out = {}
            for perm in itertools.permutations(range(k)):
                inv = sum(1 for i in range(k) for j in range(i + 1, k)
                          if perm[i] > perm[j])
                sign = (-1 if inv % 2 else 1) * koszul_sign(perm, word_degs)
                vaccum(out, a.m(k, tuple(combo[p] for p in perm)), sign)
            if out:
                table[combo] = out
        if table:
            brackets[k] = table

    gens = [(x, degs[x]) for x in labels]
    out = LInfinityAlgebra("antisym(%s)" % a.name, gens, check=False)
    out.brackets = brackets
    return out


def _monomials(generators, index):
    """Loader factory: PBW monomials of a fixed total degree.

    Canonical monomials are non-decreasing in file order with odd
    generators appearing at most once; enumeration is graded-lex
    (by length, then by index sequence), so the basis order is stable.
    """
    names = [g for g, _ in generators]
    degs = [d for _, d in generators]

    def loader(n):
        if n < 0:
            return []
        words = []

        def extend(start, remaining, word):
            if remaining == 0:
                words.append(tuple(word))
                return
            for i in range(start, len(names)):
                d = degs[i]
                if d > remaining:
                    continue
                if word and word[-1] == names[i] and d % 2:
                    continue
                word.append(names[i])
                extend(i, remaining - d, word)
                word.pop()

        extend(0, n, [])
        words.sort(key=lambda w: (len(w), tuple(index[x] for x in w)))
        return [(w, n, len(w)) for w in words]

    return loader


def classical_envelope(g, name=None):
    """The universal envelope of a dg Lie algebra on its PBW basis.

    Basis: canonical monomials (see `_monomials`); product: straightening
    x_j x_i -> (-1)^(|x_i||x_j|) x_i x_j + l_2(x_j, x_i) for j after i in
    file order, and x x -> (1/2) l_2(x, x) for odd x; differential: l_1
    extended as a derivation.  Both operations are function-backed and
    memoized; the basis is complete in every degree (positive grading).
    """
    if not g.is_strict:
        raise ValueError("classical_envelope needs a dg Lie algebra; %s has "
                         "higher brackets" % g.name)
    name = name or "U(%s)" % g.name
    index = g.index
    degs = {gen: d for gen, d in g.generators}
    space = GradedSpace(name, loader=_monomials(g.generators, index),
                        degree_fn=lambda w: sum(degs[x] for x in w),
                        weight_fn=len)

    def straighten(word):
        out = {}
        stack = [(tuple(word), QONE)]
        while stack:
            w, coeff = stack.pop()
            for i in range(len(w) - 1):
                a, b = w[i], w[i + 1]
                if index[a] > index[b]:
                    swap_sign = -1 if (degs[a] % 2 and degs[b] % 2) else 1
                    stack.append((w[:i] + (b, a) + w[i + 2:],
                                  coeff * swap_sign))
                    for t, c in g.l(2, (a, b)).items():
                        stack.append((w[:i] + (t,) + w[i + 2:], coeff * c))
                    break
                if a == b and degs[a] % 2:
                    for t, c in g.l(2, (a, a)).items():
                        stack.append((w[:i] + (t,) + w[i + 2:],
                                      coeff * c / 2))
                    break
            else:
                vaccum(out, {w: QONE}, coeff)
        return out

    def product(word):
        u, v = word
        return straighten(u + v)

    def differential(word):
        (w,) = word
        out = {}
        sign = 1
        for i, x in enumerate(w):
            for t, c in g.l(1, (x,)).items():
                vaccum(out, straighten(w[:i] + (t,) + w[i + 1:]),
                       c * sign)
            if degs[x] % 2:
                sign = -sign
        return out

    return DgAlgebra(name, space, {1: differential, 2: product}, check=False)
