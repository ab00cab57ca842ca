"""
Finitely presented quadratic operads <M | R>: relation ideals per arity,
quotient bases, Czech duals, the tree pairing, Koszul dual operads,
composition in the quotient, and the generating-series consistency check.
"""

import os
from fractions import Fraction
from math import factorial

from . import freeoperad, trees
from .freeoperad import (enumerate_basis, free_dim, normalize, tv_act,
                         tv_add_into, tv_graft, tv_scale, tv_sum)
from .linalg import (Echelon, Matrix, Subspace, all_permutations,
                     block_insertions, orthogonal_complement)
from .smodule import GeneratorSymbol, SModuleSpec
from .trees import leaf, node, sort_key


class SpecError(ValueError):
    """Syntax or validation error in an operad spec file."""


class QuadraticPresentation:
    """A quadratic presentation: generators plus arity-3 relations, each a
    tree vector supported on two-vertex trees and homogeneous in degree."""

    def __init__(self, name, module, relations):
        self.name = name
        self.module = module
        self.relations = [dict(r) for r in relations if r]
        for r in self.relations:
            degs = set()
            for t, c in r.items():
                if t.nleaves != 3 or t.nvertices != 2:
                    raise SpecError("relation terms must be two-vertex arity-3 trees, got %s"
                                    % trees.serialize(t))
                degs.add(sum(d.degree for d in t.vertices()))
            if len(degs) > 1:
                raise SpecError("relation is not homogeneous in degree")
        # rank of a decoration in the presentation's default order
        self.ranks = {d.name: i for i, d in enumerate(module.decorations)}
        self._contexts = {}

    def __repr__(self):
        return "QuadraticPresentation(%s)" % self.name

    def context(self, n):
        ctx = self._contexts.get(n)
        if ctx is None:
            ctx = ArityContext(self, n)
            self._contexts[n] = ctx
        return ctx

    def dim(self, n):
        if n == 1:
            return 1
        return self.context(n).dim


class ArityContext:
    """Arity-n coordinates for a presentation: the tree basis sorted
    ascending in the refined path-word order, the relation-ideal echelon,
    and the quotient basis (non-pivot trees, i.e. greedy maximal trees)."""

    def __init__(self, pres, n):
        self.pres = pres
        self.n = n
        ranks = pres.ranks
        self.trees = sorted(enumerate_basis(pres.module, n),
                            key=lambda t: sort_key(t, ranks))
        self.index = {t: i for i, t in enumerate(self.trees)}
        self.ideal = Echelon(len(self.trees))
        if n >= 3 and pres.relations:
            for v in self._ideal_generators():
                self.ideal.add(self.to_coords(v))
        self.ideal.rref()
        piv = set(self.ideal.pivot_rows)
        self.representatives = [t for i, t in enumerate(self.trees) if i not in piv]
        self.rep_index = {t: k for k, t in enumerate(self.representatives)}
        self.dim = len(self.representatives)

    def _ideal_generators(self):
        pres, n = self.pres, self.n
        if n == 3:
            out = []
            for r in pres.relations:
                for sigma in all_permutations(3):
                    out.append(tv_act(r, sigma))
            return out
        prev = pres.context(n - 1)
        corollas = [{node(d, (leaf(1), leaf(2))): Fraction(1)}
                    for d in pres.module.decorations]
        out = []
        for w in prev.ideal_vectors():
            for c in corollas:
                for i in (1, 2):
                    v = tv_graft(c, i, w)
                    for sigma in block_insertions(n, i, n - 1):
                        out.append(tv_act(v, sigma))
                for j in range(1, n):
                    v = tv_graft(w, j, c)
                    for sigma in block_insertions(n, j, 2):
                        out.append(tv_act(v, sigma))
        return out

    def ideal_vectors(self):
        """A spanning set of the relation ideal in this arity, as tree vectors."""
        return [self.from_coords(row) for row in self.ideal.pivot_rows.values()]

    def to_coords(self, tv):
        return {self.index[t]: c for t, c in tv.items()}

    def from_coords(self, row):
        return {self.trees[i]: c for i, c in row.items()}

    def reduce(self, tv):
        """Quotient coordinates of a tree vector: dict rep_position -> Fraction."""
        residue = self.ideal.reduce(self.to_coords(tv))
        out = {}
        for col, c in residue.items():
            out[self.rep_index[self.trees[col]]] = c
        return out

    def rep_vector(self, coords):
        """Lift quotient coordinates back to the representative tree vector."""
        return {self.representatives[k]: c for k, c in coords.items() if c}

    def subspace(self):
        return self.ideal.subspace()


def relation_ideal_span(pres, n):
    """The span of the relation ideal in F(M)(n), as a Subspace in the
    context's ascending tree coordinates."""
    return pres.context(n).subspace()


def quotient_basis(pres, n):
    """The ArityContext carrying representatives and quotient coordinates."""
    return pres.context(n)


class QElement:
    """An element of P(n) in quotient coordinates over the representatives."""

    __slots__ = ("arity", "coords")

    def __init__(self, arity, coords):
        self.arity = arity
        self.coords = {k: Fraction(c) for k, c in coords.items() if c}

    def __eq__(self, other):
        return (isinstance(other, QElement) and self.arity == other.arity
                and self.coords == other.coords)

    def __repr__(self):
        return "QElement(%d, %s)" % (self.arity, self.coords)


def element_from_tree_vector(pres, tv, n):
    return QElement(n, pres.context(n).reduce(tv))


def compose_mod_relations(pres, x, i, y):
    """o_i in the quotient: graft representatives, reduce modulo the ideal."""
    if not (1 <= i <= x.arity):
        raise IndexError("slot %d out of range for arity %d" % (i, x.arity))
    m = x.arity + y.arity - 1
    xv = pres.context(x.arity).rep_vector(x.coords)
    yv = pres.context(y.arity).rep_vector(y.coords)
    return element_from_tree_vector(pres, tv_graft(xv, i, yv), m)


def act_element(pres, x, sigma):
    xv = pres.context(x.arity).rep_vector(x.coords)
    return element_from_tree_vector(pres, tv_act(xv, sigma), x.arity)


# ---------------------------------------------------------------------------
# Czech dual, pairing, Koszul dual


def czech_dual(module):
    """Arity-wise dual twisted by sign: trivial <-> sign, regular stays
    regular, internal degrees are negated.  Generator names are kept."""
    return SModuleSpec([
        GeneratorSymbol(g.name, g.arity, -g.degree,
                        {"trivial": "sign", "sign": "trivial",
                         "regular": "regular"}[g.symmetry])
        for g in module.generators])


def _partner(t, dual_mod):
    """Same labelled tree shape over the dual module (same decoration names)."""
    if t.is_leaf:
        return t
    return node(dual_mod.dec_by_name[t.dec.name],
                tuple(_partner(c, dual_mod) for c in t.children))


def pairing_matrix(module):
    """The natural pairing F_(2)(M^dual)(3) x F_(2)(M)(3) -> Q in the
    enumerated bases: zero unless the underlying trees and decorations
    match; matching entries are +-1, with signs fixed by sgn_3-twisted
    equivariance extended from canonical orbit representatives."""
    dual_mod = czech_dual(module)
    primal = enumerate_basis(module, 3)
    dual = enumerate_basis(dual_mod, 3)
    dual_index = {t: i for i, t in enumerate(dual)}
    kappa = {}
    perms = all_permutations(3)
    for v0 in primal:
        if v0 in kappa:
            continue
        w0 = _partner(v0, dual_mod)
        root_dec, top_dec = list(v0.vertices())
        droot, dtop = list(w0.vertices())
        base = Fraction(1)
        for d in (root_dec, top_dec):
            if d.flipped:
                base = -base
        if dtop.parity and root_dec.parity:
            base = -base
        # shape factor: the top vertex over the root's second slot pairs
        # with an extra -1 (this makes Perm-perp = PreLie and As self-dual)
        if v0.children[1].nleaves == 2:
            base = -base
        for sigma in perms:
            s_p, v = trees.act(v0, sigma)
            s_d, w = trees.act(w0, sigma)
            assert w == _partner(v, dual_mod)
            val = sigma.sign() * s_p * s_d * base
            if v in kappa:
                assert kappa[v] == val, "pairing signs are not equivariantly consistent"
            else:
                kappa[v] = val
    entries = {}
    primal_index = {t: i for i, t in enumerate(primal)}
    for v, val in kappa.items():
        entries[(dual_index[_partner(v, dual_mod)], primal_index[v])] = val
    return Matrix(len(dual), len(primal), entries)


def pairing_values(module):
    """The diagonal of the tree pairing: primal two-vertex tree -> the value
    it pairs to against its decoration-matched dual partner."""
    dual_mod = czech_dual(module)
    P = pairing_matrix(module)
    primal = enumerate_basis(module, 3)
    dual = enumerate_basis(dual_mod, 3)
    dual_index = {t: i for i, t in enumerate(dual)}
    out = {}
    for i, t in enumerate(primal):
        out[t] = P.entries[(dual_index[_partner(t, dual_mod)], i)]
    return out


def koszul_dual(pres):
    """P^! = <M^dual | R^perp> with R^perp the orthogonal complement of the
    relation span under the tree pairing."""
    module = pres.module
    dual_mod = czech_dual(module)
    pairing = pairing_matrix(module)
    primal = enumerate_basis(module, 3)
    primal_index = {t: i for i, t in enumerate(primal)}
    ech = Echelon(len(primal))
    for r in pres.relations:
        for sigma in all_permutations(3):
            ech.add({primal_index[t]: c for t, c in tv_act(r, sigma).items()})
    r_span = ech.subspace()
    perp = orthogonal_complement(r_span, pairing)
    dual = enumerate_basis(dual_mod, 3)
    relations = [{dual[i]: c for i, c in row.items()} for row in perp.basis]
    name = pres.name[:-1] if pres.name.endswith("!") else pres.name + "!"
    return QuadraticPresentation(name, dual_mod, relations)


# ---------------------------------------------------------------------------
# Generating-series consistency (Koszul pairs)


def _series_compose(outer, inner, nmax):
    """Coefficients (x^1..x^nmax) of outer(inner(x)) for series with zero
    constant term given by coefficient lists."""
    # powers of inner up to nmax
    powers = {1: list(inner)}
    for k in range(2, nmax + 1):
        prev = powers[k - 1]
        cur = [Fraction(0)] * nmax
        for i, a in enumerate(prev, start=1):
            if not a:
                continue
            for j, b in enumerate(inner, start=1):
                if i + j <= nmax:
                    cur[i + j - 1] += a * b
        powers[k] = cur
    out = [Fraction(0)] * nmax
    for k, coeff in enumerate(outer, start=1):
        if not coeff:
            continue
        for idx in range(nmax):
            out[idx] += coeff * powers[k][idx]
    return out


def gk_series_check(pres, nmax, dual=None):
    """Whether the truncated Poincare series of P and P^! are compositional
    inverses up to degree nmax: f_dual(-f(-x)) = x + O(x^(nmax+1))."""
    if dual is None:
        dual = koszul_dual(pres)
    dims = [pres.dim(n) for n in range(1, nmax + 1)]
    dual_dims = [dual.dim(n) for n in range(1, nmax + 1)]
    f = [Fraction(d, factorial(n)) for n, d in enumerate(dims, start=1)]
    g = [Fraction(d, factorial(n)) for n, d in enumerate(dual_dims, start=1)]
    minus_f_minus = [c if n % 2 == 1 else -c for n, c in enumerate(f, start=1)]
    comp = _series_compose(g, minus_f_minus, nmax)
    expect = [Fraction(1)] + [Fraction(0)] * (nmax - 1)
    return {
        "consistent": comp == expect,
        "dims": dims,
        "dual_dims": dual_dims,
        "composition": comp,
    }


# ---------------------------------------------------------------------------
# Spec files


def parse_spec(text, name="operad"):
    """Parse the operad spec grammar:

    generator <name> arity <int> degree <int> symmetry <trivial|sign|regular>
    rel: c1 tree1 +- c2 tree2 ...

    Coefficients are rationals (default 1), trees use the nested-term
    serialization with leaves 1..n.
    """
    gens = []
    rel_lines = []
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("name"):
            name = line.split(None, 1)[1].strip()
            continue
        if line.startswith("generator"):
            parts = line.split()
            try:
                assert parts[0] == "generator" and parts[2] == "arity"
                assert parts[4] == "degree" and parts[6] == "symmetry"
                gname, arity, degree, symmetry = parts[1], int(parts[3]), int(parts[5]), parts[7]
                assert symmetry in ("trivial", "sign", "regular")
            except (AssertionError, IndexError, ValueError):
                raise SpecError("line %d: malformed generator declaration: %r"
                                % (lineno, rawline))
            gens.append(GeneratorSymbol(gname, arity, degree, symmetry))
            continue
        if line.startswith("rel:"):
            rel_lines.append((lineno, line[4:].strip()))
            continue
        raise SpecError("line %d: unrecognized line: %r" % (lineno, rawline))
    module = SModuleSpec(gens)
    relations = []
    for lineno, body in rel_lines:
        try:
            relations.append(_parse_relation(body, module))
        except (ValueError, SpecError) as e:
            raise SpecError("line %d: %s" % (lineno, e))
    return QuadraticPresentation(name, module, relations)


def _split_terms(body):
    """Split a relation body on top-level + and - into (sign, chunk)."""
    terms = []
    depth = 0
    sign = 1
    cur = []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-":
            if "".join(cur).strip():
                terms.append((sign, "".join(cur).strip()))
            sign = 1 if ch == "+" else -1
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        terms.append((sign, "".join(cur).strip()))
    return terms


def _parse_relation(body, module):
    raw_terms = []
    for sign, chunk in _split_terms(body):
        chunk = chunk.replace("*", " ").strip()
        coeff = Fraction(sign)
        # optional leading rational coefficient
        k = 0
        while k < len(chunk) and (chunk[k].isdigit() or chunk[k] == "/"):
            k += 1
        if k and (k == len(chunk) or chunk[k].isspace()):
            coeff *= Fraction(chunk[:k])
            chunk = chunk[k:].strip()
        if not chunk:
            raise SpecError("relation term with no tree")
        raw_terms.append((coeff, trees.parse_raw(chunk, module)))
    vec = normalize(raw_terms)
    for t in vec:
        if t.nleaves != 3:
            raise SpecError("relation terms must have arity 3")
    return vec


_SPECFILE_DIR = os.path.join(os.path.dirname(__file__), "specfiles")

BUILTIN_FILES = {
    "com": "com.op",
    "lie1": "lie1.op",
    "perm": "perm.op",
    "prelie": "prelie.op",
    "nij": "nij.op",
    "binij": "binij.op",
}

_builtin_cache = {}


def builtin(name):
    """Load a built-in presentation by name; a trailing '!' takes the
    Koszul dual (e.g. 'Nij!')."""
    key = name.strip()
    lowered = key.lower()
    if lowered in _builtin_cache:
        return _builtin_cache[lowered]
    base = lowered[:-1] if lowered.endswith("!") else lowered
    if base not in BUILTIN_FILES:
        raise SpecError("unknown built-in operad %r (known: %s)"
                        % (name, ", ".join(sorted(BUILTIN_FILES))))
    if base not in _builtin_cache:
        path = os.path.join(_SPECFILE_DIR, BUILTIN_FILES[base])
        with open(path, encoding="utf-8") as f:
            _builtin_cache[base] = parse_spec(f.read())
    pres = _builtin_cache[base]
    if lowered.endswith("!"):
        pres = koszul_dual(pres)
        _builtin_cache[lowered] = pres
    return pres
