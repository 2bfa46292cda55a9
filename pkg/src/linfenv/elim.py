"""Sparse exact Gaussian elimination over the rationals.

The single engine is `Solver`: an incremental column echelon with
combination tracking.  Pivoting is deterministic -- within each column the
pivot is the first nonzero row in the fixed row order, and columns are
processed in the order given -- so ranks, kernels, chosen complements and
homology representatives are reproducible across runs.

Rows are indexed by integers internally; `block` converts a GradedMap's
degree-n block into index space.
"""

from .graded import QONE, WindowError, vaccum


class Solver:
    """Incremental column reducer with tracking.

    Feed columns (dicts row-index -> Fraction) in a fixed order.  Each
    column is reduced against the pivots found so far; a column that
    reduces to zero contributes a kernel vector (its tracking combination),
    a column that survives becomes a new pivot, normalized to leading
    coefficient 1.  After feeding, `solve` expresses further vectors in
    terms of the fed columns when possible.
    """

    def __init__(self):
        self.pivots = {}          # leading row -> (reduced column, tracking)
        self.kernel = []          # tracking vectors of vanished columns
        self.pivot_positions = [] # indices (feed order) of pivot columns
        self._nfed = 0

    @property
    def rank(self):
        return len(self.pivots)

    def _reduce(self, col, track):
        col = dict(col)
        while col:
            r = min(col)
            if r not in self.pivots:
                return col, track, r
            pcol, ptrack = self.pivots[r]
            c = col[r]
            vaccum(col, pcol, -c)
            if track is not None:
                vaccum(track, ptrack, -c)
        return col, track, None

    def feed(self, col):
        """Insert one column; returns True if it became a pivot."""
        idx = self._nfed
        self._nfed += 1
        col, track, lead = self._reduce(col, {idx: QONE})
        if lead is None:
            self.kernel.append(track)
            return False
        c = col[lead]
        if c != QONE:
            inv = QONE / c
            col = {r: v * inv for r, v in col.items()}
            track = {j: v * inv for j, v in track.items()}
        self.pivots[lead] = (col, track)
        self.pivot_positions.append(idx)
        return True

    def feed_all(self, cols):
        for col in cols:
            self.feed(col)
        return self

    def residual(self, v):
        """Reduce v against the pivots; returns (residual, combination)."""
        res, comb, _ = self._reduce(v, {})
        return res, comb

    def solve(self, v):
        """Coefficients (by feed order) expressing v, or None if outside span."""
        res, comb = self.residual(v)
        if res:
            return None
        return {j: -c for j, c in comb.items()}


def block(gmap, n):
    """Degree-n block of a GradedMap as index vectors.

    Returns (src_labels, tgt_labels, columns) where columns[i] is the
    column of src_labels[i] written over row indices into tgt_labels.
    """
    src = gmap.source.basis(n)
    tgt = gmap.target.basis(n + gmap.degree)
    row = {label: i for i, label in enumerate(tgt)}
    cols = []
    for label in src:
        v = gmap.column(label)
        try:
            cols.append({row[k]: c for k, c in v.items()})
        except KeyError as exc:
            raise WindowError(
                "column of %r leaves the stored degree-%d basis of %s"
                % (label, n + gmap.degree, gmap.target.name)) from exc
    return src, tgt, cols


def rank_of_block(gmap, n):
    _, _, cols = block(gmap, n)
    return Solver().feed_all(cols).rank


def kernel_of_block(gmap, n):
    """Kernel vectors of the degree-n block, as label vectors."""
    src, _, cols = block(gmap, n)
    s = Solver().feed_all(cols)
    out = []
    for track in s.kernel:
        out.append({src[j]: c for j, c in track.items()})
    return out, s
