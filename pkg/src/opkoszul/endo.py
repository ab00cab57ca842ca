"""
The endomorphism operad of a graded space: multilinear maps with exact
coefficients, operadic composition, the symmetric-group action with Koszul
signs, and evaluation of decorated trees against an assignment of generator
names to maps.
"""

from fractions import Fraction

from .linalg import Permutation

ZERO = Fraction(0)


def koszul_sort_sign(degrees):
    """Sign for sorting a sequence of (sort_key, degree) pairs by stable
    insertion, counting odd-odd crossings."""
    sign = 1
    seq = list(degrees)
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1][0] > seq[j][0]:
            if seq[j - 1][1] % 2 and seq[j][1] % 2:
                sign = -sign
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            j -= 1
    return sign


class MultiMap:
    """A multilinear map V^(tensor n) -> V of homogeneous degree.

    entries: dict (i_1..i_n) -> dict out_index -> Fraction over basis tuples.
    Only tuples satisfying the degree constraint can be nonzero.
    """

    def __init__(self, space, arity, degree, entries=None):
        self.space = space
        self.arity = arity
        self.degree = degree
        self.entries = {}
        if entries:
            for tup, val in entries.items():
                cleaned = {o: Fraction(c) for o, c in val.items() if c}
                if not cleaned:
                    continue
                assert len(tup) == arity
                for o in cleaned:
                    assert (space.degrees[o]
                            == sum(space.degrees[i] for i in tup) + degree), \
                        "entry violates the degree constraint"
                self.entries[tup] = cleaned

    def value(self, tup):
        return self.entries.get(tuple(tup), {})

    def is_zero(self):
        return not self.entries

    def tuple_degrees(self, tup):
        return [self.space.degrees[i] for i in tup]

    def __add__(self, other):
        assert (self.space is other.space and self.arity == other.arity
                and self.degree == other.degree)
        out = {}
        for src in (self.entries, other.entries):
            for tup, val in src.items():
                acc = out.setdefault(tup, {})
                for o, c in val.items():
                    nv = acc.get(o, ZERO) + c
                    if nv:
                        acc[o] = nv
                    elif o in acc:
                        del acc[o]
        return MultiMap(self.space, self.arity, self.degree, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return MultiMap(self.space, self.arity, self.degree,
                        {t: {o: v * c for o, v in val.items()}
                         for t, val in self.entries.items()})

    def __eq__(self, other):
        return (isinstance(other, MultiMap) and self.arity == other.arity
                and self.degree == other.degree and self.entries == other.entries)

    def __repr__(self):
        return "MultiMap(arity %d, degree %d, %d entries)" % (
            self.arity, self.degree, len(self.entries))


def identity_map(space):
    return MultiMap(space, 1, 0, {(i,): {i: Fraction(1)}
                                  for i in range(space.dim)})


def act_map(f, sigma):
    """(f . sigma)(w_1 .. w_n) = koszul * f(w_sigma(1), .., w_sigma(n)):
    the right action matching the leaf-relabelling action on trees."""
    assert sigma.size == f.arity
    sp = f.space
    out = {}
    for tup, val in f.entries.items():
        # f receives (w_sigma(1)..); we know f's input tuple, so the outer
        # arguments are w_k with w_sigma(p) = tup[p-1], i.e. w_k = tup at
        # position sigma^{-1}(k)
        inv = sigma.inverse()
        new = tuple(tup[inv(k) - 1] for k in range(1, f.arity + 1))
        # koszul sign of rearranging (w_1..w_n) -> (w_sigma(1)..w_sigma(n)):
        # entry at position p is w_sigma(p) with degree of new[sigma(p)-1]
        pairs = [(sigma(p + 1), sp.degrees[tup[p]]) for p in range(f.arity)]
        sign = koszul_sort_sign(pairs)
        acc = out.setdefault(new, {})
        for o, c in val.items():
            nv = acc.get(o, ZERO) + sign * c
            if nv:
                acc[o] = nv
            elif o in acc:
                del acc[o]
    return MultiMap(sp, f.arity, f.degree, out)


def compose_at(f, pos, g):
    """Operadic composite f o_pos g with the standard Koszul sign
    (-1)^{|g| * (deg of the arguments before the slot)}."""
    assert f.space is g.space
    sp = f.space
    n = f.arity + g.arity - 1
    out = {}
    for gtup, gval in g.entries.items():
        for o_g, c_g in gval.items():
            for ftup, fval in f.entries.items():
                if ftup[pos - 1] != o_g:
                    continue
                prefix = ftup[:pos - 1]
                tail = ftup[pos:]
                tup = prefix + gtup + tail
                sign = 1
                if g.degree % 2 and sum(sp.degrees[i] for i in prefix) % 2:
                    sign = -1
                acc = out.setdefault(tup, {})
                for o, c in fval.items():
                    nv = acc.get(o, ZERO) + sign * c_g * c
                    if nv:
                        acc[o] = nv
                    elif o in acc:
                        del acc[o]
    return MultiMap(sp, n, f.degree + g.degree, out)


def differential_map(space):
    """d as an arity-1 degree-1 map."""
    entries = {}
    for (b, a), v in space.differential.items():
        entries.setdefault((a,), {})[b] = v
    return MultiMap(space, 1, 1, entries)


def hom_differential(f):
    """The differential on Hom(V^n, V):
    (df) = d o f - (-1)^|f| sum_s f o (1 x .. d_s .. x 1)."""
    sp = f.space
    d = differential_map(sp)
    out = compose_at(d, 1, f)
    sgn = -1 if f.degree % 2 else 1
    for s in range(1, f.arity + 1):
        out = out - compose_at(f, s, d).scale(sgn)
    return out


def eval_tree(t, assign, space):
    """Evaluate a decorated tree as a MultiMap, composing the assigned maps
    with Koszul regrouping signs.

    assign: generator name -> MultiMap (arity 2); flipped decorations act
    through the symmetric-group action on the assigned map.
    """
    if t.is_leaf:
        return identity_map(space)
    labels = sorted(t.leaves())
    pos_of = {lab: p for p, lab in enumerate(labels)}
    f = assign[t.dec.gen.name]
    if t.dec.flipped:
        f = act_map(f, Permutation((2, 1)))
    child_maps = []
    child_labels = []
    for c in t.children:
        child_maps.append(eval_tree(c, assign, space))
        child_labels.append(sorted(c.leaves()))
    out = {}
    dim = space.dim
    from itertools import product
    for tup in product(range(dim), repeat=t.nleaves):
        # group arguments by child, stable: kappa sign
        pairs = []
        for k, labs in enumerate(child_labels):
            for lab in labs:
                pairs.append((k, pos_of[lab]))
        # sequence of (group index, original position); sorting by (group,
        # position in child order) from the original label order
        seq = []
        for lab in labels:
            for k, labs in enumerate(child_labels):
                if lab in labs:
                    seq.append(((k, labs.index(lab)), space.degrees[tup[pos_of[lab]]]))
                    break
        kappa = koszul_sort_sign(seq)
        # operator-passing sign lambda
        lam = 1
        deg_before = 0
        blocks = []
        for k, labs in enumerate(child_labels):
            block = tuple(tup[pos_of[lab]] for lab in labs)
            blocks.append(block)
            if child_maps[k].degree % 2 and deg_before % 2:
                lam = -lam
            deg_before += sum(space.degrees[i] for i in block)
        # inner values
        inner = []
        okflag = True
        for k, block in enumerate(blocks):
            val = child_maps[k].value(block)
            if not val:
                okflag = False
                break
            inner.append(val)
        if not okflag:
            continue
        # contract through f over all combinations of inner outputs
        def rec(k, idxs, coeff):
            if k == len(inner):
                fval = f.value(tuple(idxs))
                if fval:
                    acc = out.setdefault(tup, {})
                    for o, c in fval.items():
                        nv = acc.get(o, ZERO) + coeff * c
                        if nv:
                            acc[o] = nv
                        elif o in acc:
                            del acc[o]
                return
            for o_k, c_k in inner[k].items():
                rec(k + 1, idxs + [o_k], coeff * c_k)
        rec(0, [], Fraction(kappa * lam))
    deg = sum(assign[d.gen.name].degree for d in t.vertices())
    res = MultiMap(space, t.nleaves, deg, out)
    return res


def eval_tree_vector(tv, assign, space, arity):
    out = None
    for t, c in tv.items():
        m = eval_tree(t, assign, space).scale(c)
        out = m if out is None else out + m
    if out is None:
        degs = None
        return MultiMap(space, arity, 0, {})
    return out
