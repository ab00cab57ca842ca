"""
S-module presentations: generator symbols with arity, internal degree and
S_2-symmetry type, and the basis decorations they contribute to the free
operad (regular generators contribute both orderings).
"""

SYMMETRIES = ("trivial", "sign", "regular")


class GeneratorSymbol:
    """A binary-or-higher generator: name, arity, degree, symmetry type.

    symmetry 'trivial' means g.(12) = g, 'sign' means g.(12) = -g, 'regular'
    means g and g.(12) are independent basis decorations.
    """

    __slots__ = ("name", "arity", "degree", "symmetry")

    def __init__(self, name, arity, degree, symmetry):
        assert arity >= 1
        assert symmetry in SYMMETRIES
        self.name = name
        self.arity = arity
        self.degree = degree
        self.symmetry = symmetry

    def _key(self):
        return (self.name, self.arity, self.degree, self.symmetry)

    def __eq__(self, other):
        return isinstance(other, GeneratorSymbol) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "GeneratorSymbol(%r, %d, %d, %r)" % self._key()


class Decoration:
    """A basis decoration of the free operad: a generator together with a
    chosen input alignment (flipped = the (12)-translate, only for regular
    generators)."""

    __slots__ = ("gen", "flipped", "name", "parity", "_hash")

    def __init__(self, gen, flipped=False):
        assert not flipped or gen.symmetry == "regular"
        self.gen = gen
        self.flipped = flipped
        self.name = gen.name + ("_op" if flipped else "")
        self.parity = gen.degree % 2
        self._hash = hash((gen._key(), flipped))

    @property
    def degree(self):
        return self.gen.degree

    def flip(self):
        """The (12)-translate: (coefficient, decoration)."""
        g = self.gen
        if g.symmetry == "trivial":
            return 1, self
        if g.symmetry == "sign":
            return -1, self
        return 1, Decoration(g, not self.flipped)

    def __eq__(self, other):
        return (self is other or (isinstance(other, Decoration)
                and self.flipped == other.flipped and self.gen == other.gen))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Decoration(%s)" % self.name


class SModuleSpec:
    """The S-module of generators of a quadratic presentation."""

    def __init__(self, generators):
        generators = tuple(generators)
        names = [g.name for g in generators]
        assert len(set(names)) == len(names), "generator names must be unique"
        self.generators = generators
        decs = []
        for g in generators:
            decs.append(Decoration(g, False))
            if g.symmetry == "regular":
                decs.append(Decoration(g, True))
        # B^M, in declaration order (regular generators contribute g, g_op)
        self.decorations = tuple(decs)
        self.dec_by_name = {d.name: d for d in decs}
        self.gen_by_name = {g.name: g for g in generators}

    def dim(self, n):
        """Dimension of M(n)."""
        return sum((2 if g.symmetry == "regular" else 1)
                   for g in self.generators if g.arity == n)

    def _key(self):
        return tuple(g._key() for g in self.generators)

    def __eq__(self, other):
        return isinstance(other, SModuleSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "SModuleSpec(%s)" % (", ".join(d.name for d in self.decorations))
