"""Decorated trees: planar forms, grafting, the S-action, restriction,
path words and the length-lex order."""

import random
from itertools import product

from opkoszul.linalg import Permutation, all_permutations
from opkoszul.smodule import GeneratorSymbol, SModuleSpec
from opkoszul import trees
from opkoszul.trees import (act, compare_words, graft, internal_edges, leaf,
                            node, normalize_raw, parse_raw, path_words,
                            restrict_edge, serialize)

# one regular generator g (degree 0), one trivial-symmetric h, one odd q
MOD = SModuleSpec([
    GeneratorSymbol("g", 2, 0, "regular"),
    GeneratorSymbol("h", 2, 0, "trivial"),
    GeneratorSymbol("q", 2, 1, "trivial"),
])
G = MOD.dec_by_name["g"]
GOP = MOD.dec_by_name["g_op"]
H = MOD.dec_by_name["h"]
Q = MOD.dec_by_name["q"]


def t(text):
    sign, tree = normalize_raw(parse_raw(text, MOD))
    return sign, tree


def test_normalize_symmetries():
    # h(2,1) = +h(1,2); g(2,1) = g_op(1,2); sign generators flip sign
    s, tr = t("h(2, 1)")
    assert s == 1 and serialize(tr) == "h(1, 2)"
    s, tr = t("g(2, 1)")
    assert s == 1 and serialize(tr) == "g_op(1, 2)"
    sgn_mod = SModuleSpec([GeneratorSymbol("w", 2, 0, "sign")])
    s, tr = normalize_raw(parse_raw("w(2, 1)", sgn_mod))
    assert s == -1 and serialize(tr) == "w(1, 2)"


def test_planar_order_two_vertex():
    # upper vertex carrying {2,3}: lower vertex orders (leaf 1, internal edge)
    s, tr = t("h(h(2, 3), 1)")
    assert serialize(tr) == "h(1, h(2, 3))"
    # upper vertex carrying {1,3}: lower orders (internal edge, leaf 2)
    s, tr = t("h(2, h(1, 3))")
    assert serialize(tr) == "h(h(1, 3), 2)"


def test_path_words_examples():
    _, tr = t("g(1, 2)")
    assert path_words(tr) == (("g",), ("g",))
    # two-vertex: g below h, leaf 1 on g, leaves 2,3 on h -> (g, gh, gh)
    _, tr = t("g(1, h(2, 3))")
    assert path_words(tr) == (("g",), ("g", "h"), ("g", "h"))
    # left comb g(h(q(1,2),3),4) -> (ghq, ghq, gh, g)
    _, tr = t("g(h(q(1, 2), 3), 4)")
    assert path_words(tr) == (("g", "h", "q"), ("g", "h", "q"), ("g", "h"), ("g",))


def test_compare_length_then_lex():
    ranks = {"g_op": 0, "q": 1, "g": 2, "h": 3}
    _, a = t("g(g(1, 2), 3)")
    _, b = t("g(1, g(2, 3))")
    # first word (g,g) vs (g): longer is greater
    assert compare_words(b, a, ranks) == -1
    assert compare_words(a, a, ranks) == 0
    # lexicographic on the first letter once lengths agree
    _, c = t("q(g(1, 2), 3)")
    _, d = t("g(q(1, 2), 3)")
    assert compare_words(c, d, ranks) == -1  # (q,g) < (g,q) since rank q < g
    assert compare_words(d, c, ranks) == 1


def test_graft_unit_and_combs():
    _, cor = t("g(1, 2)")
    s, tr = graft(cor, 1, leaf(1))
    assert s == 1 and tr == cor
    s, tr = graft(cor, 2, leaf(1))
    assert s == 1 and tr == cor
    s, tr = graft(cor, 1, cor)
    assert s == 1 and serialize(tr) == "g(g(1, 2), 3)"
    s, tr = graft(cor, 2, cor)
    assert s == 1 and serialize(tr) == "g(1, g(2, 3))"


def test_graft_koszul_sign():
    # grafting an odd block before an odd decoration in preorder flips the sign
    _, a = t("q(1, q(2, 3))")
    _, b = t("q(1, 2)")
    s1, tr1 = graft(a, 1, b)
    assert serialize(tr1) == "q(q(1, 2), q(3, 4))"
    assert s1 == -1  # b (odd) moved past the upper q (odd)
    _, a2 = t("q(q(1, 2), 3)")
    s2, tr2 = graft(a2, 1, b)
    assert s2 == 1   # both q's of a2 precede leaf 1 in preorder
    assert serialize(tr2) == "q(q(q(1, 2), 3), 4)"


def test_graft_associativity_random():
    rng = random.Random(3)
    from opkoszul.freeoperad import enumerate_basis
    basis3 = enumerate_basis(MOD, 3)
    basis2 = enumerate_basis(MOD, 2)
    for _ in range(60):
        a = rng.choice(basis3)
        b = rng.choice(basis2)
        c = rng.choice(basis2)
        i = rng.randrange(1, 4)
        j = rng.randrange(1, 3)
        # (a o_i b) o_{i+j-1} c == a o_i (b o_j c)
        s1, ab = graft(a, i, b)
        s2, ab_c = graft(ab, i + j - 1, c)
        s3, bc = graft(b, j, c)
        s4, a_bc = graft(a, i, bc)
        assert ab_c == a_bc
        assert s1 * s2 == s3 * s4
        # parallel axiom: (a o_i b) o_{k+|b|-1} c == +- (a o_k c) o_i b for i < k
        k = rng.randrange(i + 1, 5)
        if k <= 3:
            t1s, t1 = graft(a, i, b)
            t1s2, t1f = graft(t1, k + b.nleaves - 1, c)
            t2s, t2 = graft(a, k, c)
            t2s2, t2f = graft(t2, i, b)
            assert t1f == t2f
            koszul = -1 if (b.parity and c.parity) else 1
            assert t1s * t1s2 == koszul * t2s * t2s2


def test_act_examples_and_functoriality():
    _, cor = t("g(1, 2)")
    s, tr = act(cor, Permutation((1, 2)))
    assert s == 1 and tr == cor
    s, tr = act(cor, Permutation((2, 1)))
    assert serialize(tr) == "g_op(1, 2)" and s == 1

    rng = random.Random(4)
    from opkoszul.freeoperad import enumerate_basis
    for basis in (enumerate_basis(MOD, 3), enumerate_basis(MOD, 4)):
        n = basis[0].nleaves
        perms = all_permutations(n)
        for _ in range(40):
            d = rng.choice(basis)
            sg, tg = rng.choice(perms), rng.choice(perms)
            s1, d1 = act(d, sg)
            s2, d2 = act(d1, tg)
            s3, d3 = act(d, sg * tg)
            assert d2 == d3
            assert s1 * s2 == s3


def test_act_identity_and_planarity():
    from opkoszul.freeoperad import enumerate_basis
    for d in enumerate_basis(MOD, 4):
        s, u = act(d, Permutation.identity(4))
        assert s == 1 and u == d


def test_restrict_edge_two_vertex_identity():
    _, tr = t("g(1, h(2, 3))")
    (parent, k), = internal_edges(tr)
    assert restrict_edge(parent, k) == tr
    # labels renumbered to 1..n; already-standard labels stay put
    _, tr2 = t("g(2, h(1, 3))")
    assert serialize(tr2) == "g_op(h(1, 3), 2)"
    (parent, k), = internal_edges(tr2)
    assert serialize(restrict_edge(parent, k)) == "g_op(h(1, 3), 2)"


def test_restrict_edge_three_vertex_comb():
    # comb g(h(q(1,2),3),4): two internal edges
    _, tr = t("g(h(q(1, 2), 3), 4)")
    edges = list(internal_edges(tr))
    assert len(edges) == 2
    restricted = {serialize(restrict_edge(p, k)) for p, k in edges}
    # bottom edge: vertices g,h; the h-side carries {1,2,3}-block and leaf 3->2, leaf 4->3
    # top edge: vertices h,q
    assert restricted == {"g(h(1, 2), 3)", "h(q(1, 2), 3)"}


def test_restrict_edge_balanced():
    _, tr = t("g(h(1, 4), q(2, 3))")
    out = {serialize(restrict_edge(p, k)) for p, k in internal_edges(tr)}
    # h-branch: linked minima 1(=h leaf1), 4(h leaf4), 2(q-block) -> h block keeps 1,
    # q-block gets 2, leaf4 gets 3; q-branch: minima 2,3 inside, 1 outside
    assert out == {"g(h(1, 3), 2)", "g(1, q(2, 3))"}


def test_order_compatible_with_grafting():
    # if a < b then a o c < b o c and c o a < c o b (path-word order)
    rng = random.Random(5)
    ranks = {d.name: i for i, d in enumerate(MOD.decorations)}
    from opkoszul.freeoperad import enumerate_basis
    basis3 = enumerate_basis(MOD, 3)
    basis2 = enumerate_basis(MOD, 2)
    for _ in range(80):
        a, b = rng.choice(basis3), rng.choice(basis3)
        c = rng.choice(basis2)
        cmp_ab = compare_words(a, b, ranks)
        if cmp_ab == 0:
            continue
        i = rng.randrange(1, 4)
        _, ac = graft(a, i, c)
        _, bc = graft(b, i, c)
        assert compare_words(ac, bc, ranks) == cmp_ab
        j = rng.randrange(1, 3)
        _, ca = graft(c, j, a)
        _, cb = graft(c, j, b)
        assert compare_words(ca, cb, ranks) == cmp_ab


def test_serialize_parse_roundtrip():
    rng = random.Random(6)
    from opkoszul.freeoperad import enumerate_basis
    for d in rng.sample(enumerate_basis(MOD, 4), 30):
        s, u = normalize_raw(parse_raw(serialize(d), MOD))
        assert s == 1 and u == d
