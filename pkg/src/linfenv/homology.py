"""Homology, and contractions manufactured degreewise by elimination.

A contraction (i, p, h) of a complex (C, d) onto a smaller complex packs
the five side conditions

    p i = 1,   i p - 1 = d h + h d,   h h = 0,   h i = 0,   p h = 0.

We build one from scratch per degree: column-eliminate d_n in the fixed
basis order; the pivot columns span a complement A_n of the cycles, the
images d(e_a) of the pivot columns one degree up span the boundaries B_n,
and the kernel vectors that survive reduction against B_n are the homology
representatives H_n.  With C_n = H + B + A the contraction is

    i = chosen representatives,   p = projection to H along B + A,
    h = -(d|_A)^{-1} on B, 0 on H + A,

and all five conditions hold on the nose (the minus sign makes
d h + h d equal i p - 1 rather than its negative).  Everything pivots in
a fixed order, so reruns choose identical representatives.

An optional block grading by weight splits each degree into independent
slices when the differential preserves weight; this is validated, not
assumed.  `contraction_onto_cycles` takes prescribed representatives
instead of computed ones and aborts with a diagnostic if they fail to
complement the boundaries -- that failure mode is how sign defects in
upstream constructions surface, so the message says so.
"""

from .elim import Solver
from .graded import ChainComplex, GradedMap, GradedSpace, QONE, WindowError, vaccum
from .reports import FAIL, PASS, Report


class ContractionError(Exception):
    pass


class Contraction:
    """(i, p, h) between a big complex and a small one, plus its window."""

    def __init__(self, big, small, include, project, homotopy, window, name=""):
        self.big = big
        self.small = small
        self.include = include
        self.project = project
        self.homotopy = homotopy
        self.window = tuple(window)
        self.name = name or "contraction"


def check_complex(c, lo=None, hi=None):
    """Verify d*d = 0 entrywise for source elements in [lo+1, hi]."""
    wlo, whi = c.window
    lo = wlo if lo is None else lo
    hi = whi if hi is None else hi
    c.require(lo, hi)
    for n in range(lo + 1, hi + 1):
        for label in c.space.basis(n):
            dd = c.d.apply(c.d.column(label))
            if dd:
                bad = sorted(dd.items(), key=lambda kv: str(kv[0]))[0]
                return Report("check_complex", c.name, FAIL, window=(lo, hi),
                              witness={"degree": n, "element": str(label),
                                       "dd_term": str(bad[0]),
                                       "coefficient": str(bad[1])})
    return Report("check_complex", c.name, PASS, window=(lo, hi))


class _LabelSolver:
    """Solver over label-keyed vectors; rows are numbered first-seen, which
    is deterministic because columns arrive in a fixed order."""

    def __init__(self):
        self.sol = Solver()
        self.rows = {}

    def _index(self, v, grow):
        idxv = {}
        for k, c in v.items():
            r = self.rows.get(k)
            if r is None:
                if not grow:
                    return None
                r = self.rows[k] = len(self.rows)
            idxv[r] = c
        return idxv

    def feed(self, v):
        return self.sol.feed(self._index(v, True))

    def solve(self, v):
        idxv = self._index(v, False)
        return None if idxv is None else self.sol.solve(idxv)

    @property
    def rank(self):
        return self.sol.rank


def _blocks_of_degree(space, n, block):
    labels = space.basis(n)
    if not block:
        return {None: list(labels)}
    out = {}
    for label in labels:
        key = space.weight(label)
        if key is None:
            raise ValueError("block grading requested but %r carries no weight"
                             % (label,))
        out.setdefault(key, []).append(label)
    return dict(sorted(out.items()))


class _Block:
    """Elimination of one (degree, weight) slice of the differential."""

    def __init__(self, cx, n, labels, block):
        self.labels = labels
        sol = _LabelSolver()
        for l in labels:
            col = cx.d.column(l)
            if block:
                w = cx.space.weight(l)
                for k in col:
                    if cx.space.weight(k) != w:
                        raise ValueError(
                            "%s: differential does not preserve the weight "
                            "grading at %r" % (cx.name, l))
            sol.feed(col)
        self.kernel = [{labels[j]: c for j, c in t.items()}
                       for t in sol.sol.kernel]
        self.pivot_labels = [labels[j] for j in sol.sol.pivot_positions]


def _eliminate(cx, lo, hi, block):
    """_Block for every (degree, weight) slice with lo <= degree <= hi+1."""
    out = {}
    for n in range(lo, hi + 2):
        for key, labels in _blocks_of_degree(cx.space, n, block).items():
            out[(n, key)] = _Block(cx, n, labels, block)
    return out


class Homology:
    """Dims, representatives and classification over one window.

    Needs the complex stored on [lo, hi + 1] (boundaries into degree hi
    come from above).  `classify` writes an arbitrary cycle as a
    combination of the chosen representatives modulo boundaries, keyed by
    index into `representatives(n)`.
    """

    def __init__(self, cx, lo, hi, block=None):
        cx.require(lo, hi + 1)
        self.cx = cx
        self.lo, self.hi = lo, hi
        blocks = _eliminate(cx, lo, hi, block)
        self._reps = {}
        self._solvers = {}
        for n in range(lo, hi + 1):
            sol = _LabelSolver()
            nboundaries = 0
            for (m, key), blk in blocks.items():
                if m == n + 1:
                    for a in blk.pivot_labels:
                        sol.feed(cx.d.column(a))
                        nboundaries += 1
            reps = []
            for (m, key), blk in blocks.items():
                if m == n:
                    for kv in blk.kernel:
                        if sol.feed(kv):
                            reps.append(kv)
            self._reps[n] = reps
            self._solvers[n] = (sol, nboundaries)

    def dim(self, n):
        return len(self._reps[n])

    def dims(self):
        return [self.dim(n) for n in range(self.lo, self.hi + 1)]

    def representatives(self, n):
        return list(self._reps[n])

    def classify(self, v, n):
        """Class of the cycle v as {rep_index: coefficient}."""
        if not v:
            return {}
        sol, nb = self._solvers[n]
        coeffs = sol.solve(v)
        if coeffs is None:
            raise ValueError("vector at degree %d is not a cycle, cannot "
                             "classify" % n)
        return {j - nb: c for j, c in coeffs.items() if j >= nb}


def homology(cx, lo, hi, block=None):
    return Homology(cx, lo, hi, block=block)


def homology_dims(cx, lo, hi, block=None):
    return Homology(cx, lo, hi, block=block).dims()


class _Decomp:
    """The [H | B | A] decomposition of one (degree, weight) slice."""

    def __init__(self, reps, b_labels_up, b_cols, a_labels, where):
        self.reps = reps                  # list of (small_label, vector)
        self.b_labels_up = b_labels_up    # chosen boundary preimages, degree+1
        self.a_labels = a_labels
        self.where = where
        self.sol = _LabelSolver()
        for _, v in reps:
            self.sol.feed(v)
        for v in b_cols:
            self.sol.feed(v)
        for l in a_labels:
            self.sol.feed({l: QONE})
        total = len(reps) + len(b_cols) + len(a_labels)
        if self.sol.rank != total:
            raise ContractionError(
                "%s: H + B + A is not a direct sum (rank %d of %d); the "
                "prescribed cycles are dependent modulo boundaries, which "
                "usually means a sign defect upstream" %
                (where, self.sol.rank, total))

    def decompose(self, v):
        coeffs = self.sol.solve(v)
        if coeffs is None:
            raise ContractionError(
                "%s: vector escapes its H + B + A slice; the weight grading "
                "is probably not respected" % (self.where,))
        return coeffs


def _assemble(cx, lo, hi, small_space, include, reps_table, blocks, block, name):
    data = {}
    for n in range(lo, hi + 1):
        for key, labels in _blocks_of_degree(cx.space, n, block).items():
            blk = blocks[(n, key)]
            up = blocks.get((n + 1, key))
            b_up = up.pivot_labels if up is not None else []
            b_cols = [cx.d.column(a) for a in b_up]
            where = "%s @ degree %d%s" % (
                name, n, "" if key is None else " weight %r" % (key,))
            data[(n, key)] = _Decomp(reps_table.get((n, key), []), b_up,
                                     b_cols, blk.pivot_labels, where)

    def key_of(label):
        return cx.space.weight(label) if block else None

    def slot(label, what):
        n = cx.space.degree(label)
        dd = data.get((n, key_of(label)))
        if dd is None:
            raise WindowError("%s: %s asked outside window [%d, %d] at %r"
                              % (name, what, lo, hi, label))
        return dd

    def p_col(label):
        dd = slot(label, "projection")
        out = {}
        for j, c in dd.decompose({label: QONE}).items():
            if j < len(dd.reps):
                out[dd.reps[j][0]] = c
        return out

    def h_col(label):
        dd = slot(label, "homotopy")
        nreps = len(dd.reps)
        out = {}
        for j, c in dd.decompose({label: QONE}).items():
            jb = j - nreps
            if 0 <= jb < len(dd.b_labels_up):
                # h on a boundary is minus its chosen preimage
                vaccum(out, {dd.b_labels_up[jb]: QONE}, -c)
        return out

    small_d = GradedMap.zero(small_space, small_space, -1)
    small = ChainComplex(small_space, small_d, (lo, hi), name=name + ".small")
    project = GradedMap(cx.space, small_space, 0, fn=p_col, name=name + ".p")
    homotopy = GradedMap(cx.space, cx.space, 1, fn=h_col, name=name + ".h")
    return Contraction(cx, small, include, project, homotopy, (lo, hi), name)


def contraction_onto_homology(cx, lo, hi, block=None, label_prefix="H"):
    """Contraction of (C, d) onto its homology (zero differential).

    Small basis labels are (label_prefix, degree, k), numbered in
    representative order; they inherit the weight of their slice when the
    block grading is in use.  Needs the complex stored on [lo, hi + 1].
    """
    cx.require(lo, hi + 1)
    blocks = _eliminate(cx, lo, hi, block)
    counters = {}
    elements = []
    reps_table = {}
    include_cols = {}
    for (n, key), blk in blocks.items():
        if n > hi:
            continue
        sol = _LabelSolver()
        up = blocks.get((n + 1, key))
        if up is not None:
            for a in up.pivot_labels:
                sol.feed(cx.d.column(a))
        reps = []
        for kv in blk.kernel:
            if sol.feed(kv):
                k = counters.get(n, 0)
                counters[n] = k + 1
                slabel = (label_prefix, n, k)
                elements.append((slabel, n, key))
                include_cols[slabel] = kv
                reps.append((slabel, kv))
        if reps:
            reps_table[(n, key)] = reps
    small_space = GradedSpace("H(%s)" % cx.name, elements=elements,
                              window=(lo, hi))
    include = GradedMap(small_space, cx.space, 0, columns=include_cols,
                        name="i")
    return _assemble(cx, lo, hi, small_space, include, reps_table, blocks,
                     block, "contract(%s)" % cx.name)


def contraction_onto_cycles(cx, lo, hi, small_space, include_map, block=None,
                            name=None):
    """Contraction onto a prescribed space of cycles.

    `include_map` sends each small basis label to a cycle in C.  Per
    (degree, weight) slice the prescribed cycles must complement the
    boundaries inside the cycles; this is verified by dimension count and
    by rank, and a mismatch raises ContractionError naming the slice
    (rather than silently choosing different representatives).
    """
    cx.require(lo, hi + 1)
    name = name or "contract(%s)" % cx.name
    blocks = _eliminate(cx, lo, hi, block)

    reps_table = {}
    for n in range(lo, hi + 1):
        for slabel in small_space.basis(n):
            key = small_space.weight(slabel) if block else None
            v = include_map.column(slabel)
            if not v:
                raise ContractionError("%s: prescribed cycle %r is zero"
                                       % (name, slabel))
            if block:
                for k in v:
                    if cx.space.weight(k) != key:
                        raise ContractionError(
                            "%s: image of %r mixes weights (%r vs %r)"
                            % (name, slabel, cx.space.weight(k), key))
            dv = cx.d.apply(v)
            if dv:
                bad = sorted(dv.items(), key=lambda kv: str(kv[0]))[0]
                raise ContractionError(
                    "%s: prescribed element %r is not a cycle; d hits %r "
                    "with coefficient %s" % (name, slabel, bad[0], bad[1]))
            reps_table.setdefault((n, key), []).append((slabel, v))

    for (n, key) in reps_table:
        if (n, key) not in blocks:
            raise ContractionError(
                "%s: prescribed cycles in empty slice (degree %d, weight %r)"
                % (name, n, key))
    for (n, key), blk in blocks.items():
        if n > hi:
            continue
        up = blocks.get((n + 1, key))
        nb = len(up.pivot_labels) if up is not None else 0
        reps = reps_table.get((n, key), [])
        if len(reps) + nb != len(blk.kernel):
            raise ContractionError(
                "%s degree %d weight %r: %d prescribed cycles + %d boundaries "
                "!= %d = dim ker d; the prescribed space does not complement "
                "the boundaries (sign-convention defect upstream?)"
                % (name, n, key, len(reps), nb, len(blk.kernel)))

    return _assemble(cx, lo, hi, small_space, include_map, reps_table, blocks,
                     block, name)


def check_contraction(con, lo=None, hi=None):
    """Verify the contraction identities entrywise.

    Each identity is checked at every degree where all of its factors stay
    inside the stored window: the chain-map property of p needs degree
    lo+1 and up; h*h = 0 and p*h = 0 stop one short of hi; the two-sided
    homotopy identity needs room on both sides (its d*h factor passes
    through degree n+1) and runs on lo+1 .. hi-1.
    """
    lo = con.window[0] if lo is None else lo
    hi = con.window[1] if hi is None else hi
    big, small = con.big, con.small
    i, p, h = con.include, con.project, con.homotopy
    d, ds = big.d, small.d

    def bad(cond, label, v):
        worst = sorted(v.items(), key=lambda kv: str(kv[0]))[0]
        return Report("check_contraction", con.name, FAIL, window=(lo, hi),
                      witness={"condition": cond, "element": str(label),
                               "term": str(worst[0]),
                               "coefficient": str(worst[1])})

    for n in range(lo, hi + 1):
        for s in small.space.basis(n):
            iv = i.column(s)
            v = p.apply(iv)
            vaccum(v, {s: QONE}, -QONE)
            if v:
                return bad("p*i = 1", s, v)
            v = h.apply(iv)
            if v:
                return bad("h*i = 0", s, v)
            v = d.apply(iv)
            vaccum(v, i.apply(ds.column(s)), -QONE)
            if v:
                return bad("d*i = i*d", s, v)
        for x in big.space.basis(n):
            hx = h.column(x)
            if n < hi:
                v = h.apply(hx)
                if v:
                    return bad("h*h = 0", x, v)
                v = p.apply(hx)
                if v:
                    return bad("p*h = 0", x, v)
            if lo < n < hi:
                v = d.apply(hx)
                vaccum(v, h.apply(d.column(x)))
                vaccum(v, i.apply(p.column(x)), -QONE)
                vaccum(v, {x: QONE})
                if v:
                    return bad("i*p - 1 = d*h + h*d", x, v)
            if n > lo:
                v = ds.apply(p.column(x))
                vaccum(v, p.apply(d.column(x)), -QONE)
                if v:
                    return bad("p*d = d*p", x, v)
    return Report("check_contraction", con.name, PASS, window=(lo, hi))
