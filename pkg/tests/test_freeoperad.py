"""Free-operad basis enumeration against brute-force oracles."""

import random
from fractions import Fraction
from itertools import permutations, product

from opkoszul.freeoperad import enumerate_basis, free_dim, normalize, tv_act, tv_sum
from opkoszul.linalg import Permutation
from opkoszul.smodule import GeneratorSymbol, SModuleSpec
from opkoszul.trees import leaf, normalize_raw, parse_raw, serialize

REG = SModuleSpec([GeneratorSymbol("g", 2, 0, "regular")])
TRIV = SModuleSpec([GeneratorSymbol("h", 2, 0, "trivial")])
NIJ_GENS = SModuleSpec([GeneratorSymbol("pl", 2, 0, "regular"),
                        GeneratorSymbol("y", 2, 1, "trivial")])
BINIJ_GENS = SModuleSpec([GeneratorSymbol("pl_w", 2, 0, "regular"),
                          GeneratorSymbol("pl_b", 2, 0, "regular"),
                          GeneratorSymbol("y", 2, 1, "trivial")])


def brute_force_count(module, n):
    """Oracle: generate every raw binary tree on every leaf order with every
    decoration, normalize, count distinct normal forms."""

    def raw_shapes(labels):
        if len(labels) == 1:
            yield ("leaf", labels[0])
            return
        for k in range(1, len(labels)):
            left, right = labels[:k], labels[k:]
            for dec in module.decorations:
                for lt in raw_shapes(left):
                    for rt in raw_shapes(right):
                        yield (dec, [lt, rt])

    seen = set()
    for order in permutations(range(1, n + 1)):
        for raw in raw_shapes(list(order)):
            _, t = normalize_raw(raw)
            seen.add(t)
    return len(seen)


def test_unit_arity_one():
    assert enumerate_basis(REG, 1) == [leaf(1)]


def test_regular_generator_counts():
    assert free_dim(REG, 2) == 2
    assert free_dim(REG, 3) == 12
    assert brute_force_count(REG, 3) == 12


def test_trivial_generator_counts():
    assert free_dim(TRIV, 3) == 3
    assert brute_force_count(TRIV, 3) == 3


def test_nij_dimensions():
    assert NIJ_GENS.dim(2) == 3
    assert free_dim(NIJ_GENS, 2) == 3
    assert free_dim(NIJ_GENS, 3) == 27
    assert brute_force_count(NIJ_GENS, 3) == 27


def test_binij_dimensions():
    assert BINIJ_GENS.dim(2) == 5
    assert free_dim(BINIJ_GENS, 3) == 75


def test_two_vertex_dimension_formula():
    for mod in (REG, TRIV, NIJ_GENS, BINIJ_GENS):
        m2 = mod.dim(2)
        assert free_dim(mod, 3) == 3 * m2 * m2


def test_enumeration_deterministic_and_duplicate_free():
    b1 = enumerate_basis(NIJ_GENS, 3)
    b2 = enumerate_basis(NIJ_GENS, 3)
    assert b1 == b2
    assert len(set(b1)) == len(b1)
    assert [serialize(t) for t in b1] == sorted(serialize(t) for t in b1)


def test_enumeration_closed_under_action():
    basis = set(enumerate_basis(NIJ_GENS, 4))
    rng = random.Random(7)
    from opkoszul.linalg import all_permutations
    perms = all_permutations(4)
    for d in rng.sample(sorted(basis, key=serialize), 25):
        for sigma in perms:
            v = tv_act({d: Fraction(1)}, sigma)
            assert set(v) <= basis


def test_normalize_is_linear_and_idempotent():
    raw1 = parse_raw("y(2, 1)", NIJ_GENS)
    v = normalize([(1, raw1)])
    _, t = normalize_raw(parse_raw("y(1, 2)", NIJ_GENS))
    assert v == {t: Fraction(1)}
    # pl(2,1) is a distinct basis element pl_op(1,2)
    v2 = normalize([(2, parse_raw("pl(2, 1)", NIJ_GENS))])
    _, t2 = normalize_raw(parse_raw("pl_op(1, 2)", NIJ_GENS))
    assert v2 == {t2: Fraction(2)}
    # cancelling sum
    v3 = normalize([(1, parse_raw("y(1, 2)", NIJ_GENS)),
                    (-1, parse_raw("y(2, 1)", NIJ_GENS))])
    assert v3 == {}
