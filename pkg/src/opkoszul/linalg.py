"""
Exact linear algebra over Q: permutations, shuffles, sparse matrices,
incremental row echelon forms, kernels and orthogonal complements.

Everything is computed with fractions.Fraction; no floating point anywhere.
"""

from fractions import Fraction
from math import comb

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class Permutation:
    """A permutation of {1..n}, stored by its tuple of images.

    p(i) = p.images[i-1].  Composition is left-to-right: (p * q)(i) = q(p(i)),
    so acting twice on labels composes the right way round:
    act(act(d, p), q) = act(d, p * q).
    """

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        assert sorted(images) == list(range(1, len(images) + 1)), images
        self.images = images

    @staticmethod
    def identity(n):
        return Permutation(range(1, n + 1))

    @property
    def size(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def __mul__(self, other):
        assert self.size == other.size
        return Permutation(other.images[i - 1] for i in self.images)

    def inverse(self):
        inv = [0] * self.size
        for i, j in enumerate(self.images):
            inv[j - 1] = i + 1
        return Permutation(inv)

    def sign(self):
        seen = [False] * self.size
        sign = 1
        for i in range(1, self.size + 1):
            if seen[i - 1]:
                continue
            # trace the cycle through i
            length = 0
            j = i
            while not seen[j - 1]:
                seen[j - 1] = True
                j = self(j)
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "Permutation(%s)" % (self.images,)


def all_permutations(n):
    from itertools import permutations
    return [Permutation(p) for p in permutations(range(1, n + 1))]


def shuffles(p, q):
    """All (p,q)-shuffles: permutations of 1..p+q increasing on the first p
    and on the last q positions.  There are binomial(p+q, p) of them."""
    assert p >= 0 and q >= 0
    n = p + q
    from itertools import combinations
    out = []
    for first in combinations(range(1, n + 1), p):
        rest = [i for i in range(1, n + 1) if i not in first]
        out.append(Permutation(list(first) + rest))
    assert len(out) == comb(n, p)
    return out


def block_insertions(n, start, size):
    """Permutations redistributing labels after grafting: choose which `size`
    labels (ascending) land on the block occupying positions start..start+size-1,
    the rest filling the other positions ascending.

    Returned permutations map old labels to new ones, i.e. they are meant for
    act(tree, sigma); acting by all of them on a grafted tree with a
    contiguous label block realizes every label distribution up to the blocks'
    internal symmetric-group actions.
    """
    from itertools import combinations
    out = []
    positions_block = list(range(start, start + size))
    positions_rest = [i for i in range(1, n + 1) if i not in positions_block]
    for labels in combinations(range(1, n + 1), size):
        rest = [i for i in range(1, n + 1) if i not in labels]
        images = [0] * n
        # old label at block position k becomes labels[k]
        for pos, lab in zip(positions_block, labels):
            images[pos - 1] = lab
        for pos, lab in zip(positions_rest, rest):
            images[pos - 1] = lab
        out.append(Permutation(images))
    return out


class Matrix:
    """Sparse exact matrix; entries is a dict (row, col) -> Fraction with no
    stored zeros."""

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                v = Fraction(v)
                if v:
                    assert 0 <= r < rows and 0 <= c < cols
                    self.entries[(r, c)] = v

    @staticmethod
    def from_rows(rows_list):
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows_list):
            assert len(row) == cols
            for c, v in enumerate(row):
                if v:
                    entries[(r, c)] = Fraction(v)
        return Matrix(rows, cols, entries)

    @staticmethod
    def identity(n):
        return Matrix(n, n, {(i, i): ONE for i in range(n)})

    def row_dicts(self):
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def apply(self, vec):
        """Matrix times a column vector given as a dict col -> Fraction."""
        out = {}
        for (r, c), v in self.entries.items():
            if c in vec:
                out[r] = out.get(r, ZERO) + v * vec[c]
        return {k: v for k, v in out.items() if v}

    def transpose(self):
        return Matrix(self.cols, self.rows,
                      {(c, r): v for (r, c), v in self.entries.items()})

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return "Matrix(%d x %d, %d entries)" % (self.rows, self.cols, len(self.entries))


class Echelon:
    """Incremental sparse row echelon form over Q.

    Rows are dicts col -> Fraction.  Pivots are the first nonzero column of
    each stored row under the ambient column order 0..ncols-1; pivot entries
    are normalized to 1 (first-nonzero pivoting keeps the result
    deterministic).  After rref() the stored rows are fully reduced, so
    reduce() computes canonical residues supported on non-pivot columns.
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.pivot_rows = {}   # pivot col -> row dict
        self._reduced = False

    @property
    def rank(self):
        return len(self.pivot_rows)

    def reduce(self, row):
        """Reduce a row dict against the stored rows (row is not mutated).

        Stored rows have support >= their pivot column, so one ascending
        sweep (heap with lazy re-push) fully reduces.
        """
        import heapq
        row = {c: v for c, v in row.items() if v}
        heap = list(row)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            v = row.get(c)
            if not v:
                row.pop(c, None)
                continue
            piv = self.pivot_rows.get(c)
            if piv is None:
                continue
            del row[c]
            for pc, pv in piv.items():
                if pc == c:
                    continue
                nv = row.get(pc, ZERO) - v * pv
                if nv:
                    if pc not in row:
                        heapq.heappush(heap, pc)
                    row[pc] = nv
                else:
                    row.pop(pc, None)
        return row

    def add(self, row):
        """Insert a row; returns the new pivot column or None if dependent."""
        row = self.reduce(row)
        if not row:
            return None
        lead = min(row)
        inv = ONE / row[lead]
        row = {c: v * inv for c, v in row.items()}
        if self._reduced:
            # keep full reduction: clear the new pivot column from old rows
            for pc, prow in self.pivot_rows.items():
                if lead in prow:
                    coeff = prow[lead]
                    for c, v in row.items():
                        nv = prow.get(c, ZERO) - coeff * v
                        if nv:
                            prow[c] = nv
                        elif c in prow:
                            del prow[c]
        self.pivot_rows[lead] = row
        return lead

    def rref(self):
        """Back-substitute so every pivot column occurs in exactly one row.

        Descending pivot order: when row `lead` is processed, every pivot row
        with larger pivot is already fully reduced, so one pass suffices.
        """
        if self._reduced:
            return self
        for lead in sorted(self.pivot_rows, reverse=True):
            row = self.pivot_rows[lead]
            for c in sorted(k for k in row if k != lead and k in self.pivot_rows):
                coeff = row.get(c)
                if not coeff:
                    continue
                for sc, sv in self.pivot_rows[c].items():
                    nv = row.get(sc, ZERO) - coeff * sv
                    if nv:
                        row[sc] = nv
                    elif sc in row:
                        del row[sc]
        self._reduced = True
        return self

    def pivots(self):
        return sorted(self.pivot_rows)

    def subspace(self):
        self.rref()
        basis = [self.pivot_rows[c] for c in sorted(self.pivot_rows)]
        return Subspace(self.ncols, basis)


class Subspace:
    """A subspace of Q^n given by a reduced-echelon basis of row vectors
    (sparse dicts).  Equality of subspaces is equality of representations."""

    def __init__(self, ambient, basis):
        self.ambient = ambient
        self.basis = [dict(row) for row in basis]
        pivots = [min(row) for row in self.basis if row]
        assert pivots == sorted(pivots), "echelon pivots must increase"

    @property
    def dim(self):
        return len(self.basis)

    def pivots(self):
        return [min(row) for row in self.basis]

    def contains(self, vec):
        ech = Echelon(self.ambient)
        for row in self.basis:
            ech.add(row)
        return not ech.reduce(vec)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __repr__(self):
        return "Subspace(dim %d of %d)" % (self.dim, self.ambient)


def echelon_of(rows, ncols):
    ech = Echelon(ncols)
    for row in rows:
        ech.add(row)
    return ech


def rank(m):
    """Rank of a Matrix over Q; rank + dim kernel = cols."""
    return echelon_of(m.row_dicts(), m.cols).rank


def kernel_basis(m):
    """Reduced-echelon basis of {v : m v = 0} as a Subspace of Q^cols."""
    ech = echelon_of(m.row_dicts(), m.cols)
    ech.rref()
    piv = set(ech.pivot_rows)
    free = [c for c in range(m.cols) if c not in piv]
    out = Echelon(m.cols)
    for f in free:
        vec = {f: ONE}
        for pc, row in ech.pivot_rows.items():
            if f in row:
                vec[pc] = -row[f]
        out.add(vec)
    return out.subspace()


def orthogonal_complement(s, pairing):
    """{w : <w, v> = 0 for all v in s} where <w, v> = sum w_r P[r,c] v_c.

    w lives in Q^(pairing.rows), s is a Subspace of Q^(pairing.cols).
    """
    if s.ambient != pairing.cols:
        raise ValueError("pairing columns (%d) do not match subspace ambient (%d)"
                         % (pairing.cols, s.ambient))
    rows = []
    for v in s.basis:
        # constraint row over w-coordinates: sum_r w_r * (P v)_r
        constraint = {}
        for (r, c), val in pairing.entries.items():
            if c in v:
                constraint[r] = constraint.get(r, ZERO) + val * v[c]
        rows.append({k: x for k, x in constraint.items() if x})
    mat = Matrix(len(rows), pairing.rows)
    for i, row in enumerate(rows):
        for c, v in row.items():
            mat.entries[(i, c)] = v
    return kernel_basis(mat)
