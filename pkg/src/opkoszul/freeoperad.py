"""
The free operad on an S-module of binary generators: enumeration of the
decorated-tree basis per arity, and arithmetic on tree vectors.

A tree vector is a dict DTree -> Fraction with no zero coefficients; all
trees in a vector have the same arity and are in planar normal form.
"""

from fractions import Fraction

from . import trees
from .trees import DTree, act, graft, leaf, node, normalize_raw


def enumerate_basis(module, n):
    """All normal-form decorated trees of arity n, sorted by serialization
    (deterministic, stable across runs)."""
    assert n >= 1
    if n == 1:
        return [leaf(1)]
    for g in module.generators:
        if g.arity != 2:
            raise NotImplementedError("basis enumeration needs binary generators")
    decs = module.decorations
    from itertools import combinations

    def trees_on(labels):
        if len(labels) == 1:
            return [leaf(labels[0])]
        out = []
        first, rest = labels[0], labels[1:]
        for k in range(0, len(rest)):
            for tail in combinations(rest, k):
                left = (first,) + tail
                right = tuple(x for x in rest if x not in tail)
                for t1 in trees_on(left):
                    for t2 in trees_on(right):
                        for dec in decs:
                            out.append(node(dec, (t1, t2)))
        return out

    basis = trees_on(tuple(range(1, n + 1)))
    basis.sort(key=trees.serialize)
    return basis


def free_dim(module, n):
    """dim F(M)(n); for binary generators this is (2n-3)!! * (dim M(2))^(n-1)."""
    return len(enumerate_basis(module, n))


def tv_add_into(acc, t, c):
    nv = acc.get(t, 0) + c
    if nv:
        acc[t] = nv
    elif t in acc:
        del acc[t]


def tv_scale(v, c):
    if not c:
        return {}
    return {t: x * c for t, x in v.items()}


def tv_sum(vectors):
    acc = {}
    for v in vectors:
        for t, c in v.items():
            tv_add_into(acc, t, c)
    return acc


def tv_graft(av, i, bv):
    """Bilinear extension of o_i to tree vectors."""
    acc = {}
    for ta, ca in av.items():
        for tb, cb in bv.items():
            s, t = graft(ta, i, tb)
            tv_add_into(acc, t, ca * cb * s)
    return acc


def tv_act(v, sigma):
    acc = {}
    for t, c in v.items():
        s, u = act(t, sigma)
        tv_add_into(acc, u, c * s)
    return acc


def normalize(raw_terms):
    """Normalize a formal sum [(coefficient, raw tree)] into a tree vector:
    planar normal forms with symmetry and Koszul sign adjustments."""
    acc = {}
    arity = None
    for c, raw in raw_terms:
        s, t = normalize_raw(raw)
        labels = sorted(t.leaves())
        if labels != list(range(1, t.nleaves + 1)):
            raise ValueError("external labels must be exactly 1..n, got %s" % labels)
        if arity is None:
            arity = t.nleaves
        elif arity != t.nleaves:
            raise ValueError("inconsistent arities %d and %d" % (arity, t.nleaves))
        tv_add_into(acc, t, Fraction(c) * s)
    return acc
