"""
The Koszul dual cooperad and the cobar construction.

For a quadratic presentation P, the generators of the cobar construction on
its dual cooperad are (shifted) duals of a basis of P^!(n); the quadratic
differential is the transpose of the composition of P^!, read off two-vertex
shuffle trees.  A generator dual to a basis element of degree d in arity n
has degree -d - n + 2, and the differential raises degree by one.

For the built-in presentations the basis of P^!(n) is organized into chain
words: a left comb of the odd generator over a label set A, extended by a
chain of pre-Lie letters over a label set S (first colour first).  The
corresponding cobar generators are labelled (I, J, k) = (A, S, #first),
symmetric in I, antisymmetric in J, of degree 1 - |J|.
"""

from fractions import Fraction
from itertools import combinations

from .freeoperad import enumerate_basis, normalize, tv_act, tv_graft
from .linalg import Echelon, Permutation, all_permutations
from .quadratic import koszul_dual
from .trees import parse_raw, serialize

ZERO = Fraction(0)


def _comb_text(gen, labs):
    out = str(labs[0])
    for lab in labs[1:]:
        out = "%s(%s,%d)" % (gen, out, lab)
    return out


def word_text(A, S, k, colours):
    """Serialized chain word for the label (A, S, k)."""
    word = _comb_text("y", A)
    for idx, lab in enumerate(S):
        letter = colours[0] if idx < k else colours[-1]
        word = "%s(%s,%d)" % (letter, word, lab)
    return word


class EBasis:
    """Cobar generators in one arity: labels, degrees, and the basis of
    P^!(n) they are dual to, with the change of basis from quotient
    representatives."""

    def __init__(self, cobar, n):
        self.n = n
        dual = cobar.dual
        ctx = dual.context(n)
        dim = ctx.dim
        self.dim = dim
        self.labels = []
        self.elements = []           # quotient coordinate dicts
        if cobar.colours is not None and n >= 2:
            for (A, S, k) in cobar.structured_labels(n):
                vec = normalize([(1, parse_raw(word_text(A, S, k, cobar.colours),
                                               dual.module))])
                coords = ctx.reduce(vec)
                self.labels.append((A, S, k))
                self.elements.append(coords)
        else:
            for i, t in enumerate(ctx.representatives):
                self.labels.append(serialize(t))
                self.elements.append({i: Fraction(1)})
        assert len(self.elements) == dim, \
            "chain words do not match dim P^!(%d)" % n
        # solver rows [e_j | delta_j]; reducing a coordinate vector leaves
        # the negated e-basis coefficients in the marker columns
        self._solver = Echelon(2 * dim)
        for j, coords in enumerate(self.elements):
            row = dict(coords)
            row[dim + j] = Fraction(1)
            self._solver.add(row)
        assert self._solver.rank == dim, "e-basis is not a basis"
        self._solver.rref()
        self.degrees = []
        for coords in self.elements:
            degs = {sum(d.degree for d in ctx.representatives[i].vertices())
                    for i in coords}
            assert len(degs) == 1, "basis element is not degree-homogeneous"
            self.degrees.append(-degs.pop() - n + 2)

    def expand(self, coords):
        """Express a quotient-coordinate vector in the e-basis."""
        red = self._solver.reduce(dict(coords))
        assert all(c >= self.dim for c in red), "vector outside the span"
        return {c - self.dim: -v for c, v in red.items() if v}


class CobarComplex:
    """The cobar construction on the Koszul dual cooperad of a presentation."""

    def __init__(self, pres, nmax=4):
        self.pres = pres
        self.dual = koszul_dual(pres)
        self.nmax = nmax
        base = pres.name.rstrip("!")
        self.colours = {"Nij": ("pl",), "BiNij": ("pl_w", "pl_b"),
                        "Lie1": ()}.get(base)
        self._ebasis = {}
        self._delta = {}
        self._act_cache = {}

    def structured_labels(self, n):
        labels = []
        names = set(range(1, n + 1))
        ncol = len(self.colours)
        for p in range(0, n):
            if p and ncol == 0:
                continue
            for S in combinations(sorted(names), p):
                A = tuple(sorted(names - set(S)))
                if not A:
                    continue
                kvals = range(0, p + 1) if ncol == 2 else [p]
                for k in kvals:
                    labels.append((A, S, k))
        return labels

    def ebasis(self, n):
        eb = self._ebasis.get(n)
        if eb is None:
            eb = EBasis(self, n)
            self._ebasis[n] = eb
        return eb

    def degree(self, n, idx):
        return self.ebasis(n).degrees[idx]

    def act_matrix(self, n, sigma):
        """Action of sigma on the generators: the sgn-twisted dual of the
        quotient action on the e-basis elements.
        mat[i][j] = coefficient of g_j in g_i . sigma."""
        key = (n, sigma.images)
        mat = self._act_cache.get(key)
        if mat is not None:
            return mat
        eb = self.ebasis(n)
        ctx = self.dual.context(n)
        inv = sigma.inverse()
        sgn = Fraction(sigma.sign())
        mat = {}
        for j, coords in enumerate(eb.elements):
            vec = ctx.rep_vector(coords)
            moved = eb.expand(ctx.reduce(tv_act(vec, inv)))
            for i, c in moved.items():
                mat.setdefault(i, {})[j] = sgn * c
        self._act_cache[key] = mat
        return mat

    # -- the differential --------------------------------------------------

    def delta(self, n, idx):
        """delta(g): list of (coefficient, (m, a, k, b, S)) canonical
        two-vertex terms, where the upper generator (k, b) carries the label
        set S in the lower generator (m, a)."""
        if (n, idx) not in self._delta:
            table = self._delta_table(n)
            for j in range(self.ebasis(n).dim):
                self._delta[(n, j)] = table.get(j, [])
        return self._delta[(n, idx)]

    def _raw_table(self, n):
        """Unsigned structure constants: coefficient of e_lam in the reduced
        shuffle composite (e_a o_i e_b).sigma_S, per two-vertex term."""
        dualctx = self.dual.context(n)
        eb = self.ebasis(n)
        table = {}
        for m in range(2, n):
            k = n + 1 - m
            if k < 2:
                continue
            ebm = self.ebasis(m)
            ebk = self.ebasis(k)
            xas = [self.dual.context(m).rep_vector(e) for e in ebm.elements]
            xbs = [self.dual.context(k).rep_vector(e) for e in ebk.elements]
            for S in combinations(range(1, n + 1), k):
                i = self._slot_of(S, n)
                sigma = self._distribution(S, i, n)
                for a, xa in enumerate(xas):
                    for b, xb in enumerate(xbs):
                        comp = tv_act(tv_graft(xa, i, xb), sigma)
                        coords = dualctx.reduce(comp)
                        if not coords:
                            continue
                        for lam, c in eb.expand(coords).items():
                            acc = table.setdefault(lam, {})
                            t = (m, a, k, b, S)
                            acc[t] = acc.get(t, ZERO) + c
        return table

    def _fold_sign(self, term):
        """Reference sign -(-1)^{|c_a|} (-1)^{|c_b||e_a|}: exact for arity 3
        (validated by the weight-two recovery) and the deterministic gauge
        anchor in higher arity."""
        m, a, k, b, S = term
        dega = self.ebasis(m).degrees[a]
        degb = self.ebasis(k).degrees[b]
        ea_deg = -dega - m + 2
        sign = -1 if (dega + 1) % 2 == 0 else 1
        if (degb + 1) % 2 and ea_deg % 2:
            sign = -sign
        return sign

    def _delta_table(self, n):
        """The differential in arity n.

        For n = 3 the signed transpose of composition is exact (pinned by
        the weight-two recovery of the relations).  For n >= 4 the signs are
        solved from exactness: delta(g) must lie in the kernel of the
        derivation-extended differential on two-vertex trees, which
        determines each column up to a global sign (fixed deterministically
        against the reference sign of its first term).
        """
        raw = self._raw_table(n)
        if n <= 3:
            return {lam: sorted(((self._fold_sign(t) * c, t)
                                 for t, c in terms.items() if c),
                                key=lambda ct: repr(ct[1]))
                    for lam, terms in raw.items()}
        table = {}
        dext_cache = {}
        for lam, terms in raw.items():
            support = sorted((t for t, c in terms.items() if c), key=repr)
            if not support:
                table[lam] = []
                continue
            # conditions: sum_T u_T * delta_ext(T) = 0 over 3-vertex trees
            rows = {}
            for col, t in enumerate(support):
                if t not in dext_cache:
                    dext_cache[t] = delta_on_enode(term_to_enode(t, self), self)
                for u, c in dext_cache[t].items():
                    rows.setdefault(u.key(), {})[col] = c
            ech = Echelon(len(support))
            for row in rows.values():
                ech.add(row)
            ech.rref()
            piv = set(ech.pivot_rows)
            free = [c for c in range(len(support)) if c not in piv]
            assert len(free) == 1, \
                "exactness solve is not one-dimensional (arity %d, dim %d)" % (n, len(free))
            f = free[0]
            vec = {f: Fraction(1)}
            for pc, row in ech.pivot_rows.items():
                if f in row:
                    vec[pc] = -row[f]
            # scale so magnitudes match the structure constants
            scale = terms[support[f]] / vec[f]
            signed = {}
            for col, t in enumerate(support):
                v = vec.get(col, ZERO) * scale
                assert abs(v) == abs(terms[t]), \
                    "kernel element does not match structure constants"
                signed[t] = v
            # deterministic gauge: first term keeps its reference sign
            t0 = support[0]
            if (signed[t0] > 0) != (self._fold_sign(t0) * terms[t0] > 0):
                signed = {t: -v for t, v in signed.items()}
            table[lam] = sorted(((v, t) for t, v in signed.items() if v),
                                key=lambda ct: repr(ct[1]))
        return table

    @staticmethod
    def _slot_of(S, n):
        """Canonical slot of the upper vertex: the rank of min(S) among the
        root's input minima."""
        rest = [x for x in range(1, n + 1) if x not in S]
        return sum(1 for x in rest if x < S[0]) + 1

    @staticmethod
    def _distribution(S, i, n):
        """Relabelling of the standard graft (contiguous block at slot i)
        placing the labels S, ascending, on the upper vertex."""
        k = len(S)
        rest = [x for x in range(1, n + 1) if x not in S]
        images = [0] * n
        for pos, lab in zip(range(i, i + k), S):
            images[pos - 1] = lab
        other = [p for p in range(1, n + 1) if not (i <= p < i + k)]
        for pos, lab in zip(other, rest):
            images[pos - 1] = lab
        return Permutation(images)


# ---------------------------------------------------------------------------
# shuffle trees on cobar generators (for delta^2 and export)


class ENode:
    """A shuffle tree decorated by cobar generators: children in slot order,
    canonical when every vertex's children have increasing minimal labels."""

    __slots__ = ("gen", "children", "min_leaf", "degree", "_key")

    def key(self):
        if self._key is None:
            if self.gen is None:
                self._key = ("leaf", self.min_leaf)
            else:
                self._key = (self.gen, tuple(c.key() for c in self.children))
        return self._key

    def __eq__(self, other):
        return isinstance(other, ENode) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.gen is None:
            return str(self.min_leaf)
        return "E%s(%s)" % (self.gen, ", ".join(map(repr, self.children)))


def eleaf(label):
    node = object.__new__(ENode)
    node.gen = None
    node.children = ()
    node.min_leaf = label
    node.degree = 0
    node._key = None
    return node


def enode(gen, children, cobar):
    node = object.__new__(ENode)
    node.gen = gen
    node.children = tuple(children)
    n, idx = gen
    node.degree = cobar.degree(n, idx) + sum(c.degree for c in node.children)
    node.min_leaf = min(c.min_leaf for c in node.children)
    node._key = None
    return node


def canonicalize_enode(tree, cobar):
    """Expand a slot tree into the canonical shuffle-tree basis; the vertex
    labels absorb the sorting permutations through the generator action."""
    if tree.gen is None:
        return {tree: Fraction(1)}
    n, idx = tree.gen
    expanded = [canonicalize_enode(c, cobar) for c in tree.children]
    out = {}

    def build(kidx, chosen, coeff):
        if kidx == len(expanded):
            mins = [c.min_leaf for c in chosen]
            order = sorted(range(len(chosen)), key=lambda j: mins[j])
            koszul = 1
            arr = [(mins[j], chosen[j].degree % 2) for j in range(len(chosen))]
            for a in range(1, len(arr)):
                b = a
                while b > 0 and arr[b - 1][0] > arr[b][0]:
                    if arr[b - 1][1] and arr[b][1]:
                        koszul = -koszul
                    arr[b - 1], arr[b] = arr[b], arr[b - 1]
                    b -= 1
            sorted_children = [chosen[j] for j in order]
            if order == list(range(len(chosen))):
                node = enode((n, idx), sorted_children, cobar)
                out[node] = out.get(node, ZERO) + coeff * koszul
                return
            sigma = Permutation([order[j] + 1 for j in range(len(chosen))])
            row = cobar.act_matrix(n, sigma).get(idx, {})
            for j2, c2 in row.items():
                node = enode((n, j2), sorted_children, cobar)
                out[node] = out.get(node, ZERO) + coeff * koszul * c2
            return
        for sub, c in expanded[kidx].items():
            build(kidx + 1, chosen + [sub], coeff * c)

    build(0, [], Fraction(1))
    return {t: c for t, c in out.items() if c}


def _relabel_enode(t, sigma, cobar):
    if t.gen is None:
        return eleaf(sigma(t.min_leaf))
    return enode(t.gen, [_relabel_enode(c, sigma, cobar) for c in t.children],
                 cobar)


def _enode_to_term(t):
    """Read a canonical two-vertex ENode back into (m, a, k, b, S)."""
    m, a = t.gen
    for c in t.children:
        if c.gen is not None:
            k, b = c.gen
            S = tuple(sorted(x.min_leaf for x in c.children))
            return (m, a, k, b, S)
    raise ValueError("not a two-vertex tree")


def term_to_enode(term, cobar):
    """The canonical two-vertex ENode of a delta term (m, a, k, b, S)."""
    m, a, k, b, S = term
    n = m + k - 1
    rest = [x for x in range(1, n + 1) if x not in S]
    top = enode((k, b), [eleaf(x) for x in S], cobar)
    i = CobarComplex._slot_of(S, n)
    children = []
    ri = 0
    for pos in range(1, m + 1):
        if pos == i:
            children.append(top)
        else:
            children.append(eleaf(rest[ri]))
            ri += 1
    return enode((m, a), children, cobar)


def delta_on_enode(tree, cobar):
    """delta extended as a derivation (degree one, Koszul signs over the
    preorder tensor of the decorations).

    Substituting a two-vertex pattern (root', top') for a vertex v yields the
    tensor (..., root', top', blocks of v's children, ...); reordering it to
    the canonical preorder of the new tree moves the top' generator past the
    child blocks placed before it, which costs the recorded Koszul sign.
    """
    out = {}

    def add(t, c):
        for tc, cc in canonicalize_enode(t, cobar).items():
            out[tc] = out.get(tc, ZERO) + c * cc

    def rebuild(t, path, replacement):
        if not path:
            return replacement(t.children)
        j = path[0]
        kids = list(t.children)
        kids[j] = rebuild(kids[j], path[1:], replacement)
        return enode(t.gen, kids, cobar)

    def walk(t, path, sign_before):
        if t.gen is None:
            return
        n, idx = t.gen
        for c, term in cobar.delta(n, idx):
            m, a, k, b, S = term
            rest = [x for x in range(1, n + 1) if x not in S]
            i = CobarComplex._slot_of(S, n)
            splice_sign = [1]

            def replacement(children, m=m, a=a, k=k, b=b, S=S, rest=rest,
                            i=i, splice_sign=splice_sign):
                top = enode((k, b), [children[x - 1] for x in S], cobar)
                kids = []
                ri = 0
                for pos in range(1, m + 1):
                    if pos == i:
                        kids.append(top)
                    else:
                        kids.append(children[rest[ri] - 1])
                        ri += 1
                # spliced tensor: [top'-gen, B_1..B_n]; canonical preorder:
                # [B_rest-before, top'-gen, B_S..., B_rest-after]
                items = [("g", cobar.degree(k, b) % 2)] + \
                    [(("B", x), children[x - 1].degree % 2)
                     for x in range(1, n + 1)]
                target = [(("B", x), None) for x in rest[:i - 1]] + \
                    [("g", None)] + [(("B", x), None) for x in S] + \
                    [(("B", x), None) for x in rest[i - 1:]]
                order = {key: p for p, (key, _) in enumerate(target)}
                seq = [(order[key], par) for key, par in items]
                sign = 1
                arr = list(seq)
                for u in range(1, len(arr)):
                    v = u
                    while v > 0 and arr[v - 1][0] > arr[v][0]:
                        if arr[v - 1][1] and arr[v][1]:
                            sign = -sign
                        arr[v - 1], arr[v] = arr[v], arr[v - 1]
                        v -= 1
                splice_sign[0] = sign
                return enode((m, a), kids, cobar)

            new = rebuild(tree, path, replacement)
            add(new, c * sign_before * splice_sign[0])
        sign = sign_before * (-1 if cobar.degree(n, idx) % 2 else 1)
        for j, ch in enumerate(t.children):
            walk(ch, path + (j,), sign)
            if ch.degree % 2:
                sign = -sign

    walk(tree, (), 1)
    return {t: c for t, c in out.items() if c}


def delta_squared_check(pres, nmax=4):
    """delta o delta on every generator of arity <= nmax; ok iff all zero."""
    cobar = pres if isinstance(pres, CobarComplex) else CobarComplex(pres, nmax)
    report = {"presentation": cobar.pres.name, "nmax": nmax, "arities": {},
              "ok": True}
    for n in range(2, nmax + 1):
        eb = cobar.ebasis(n)
        worst = 0
        for idx in range(eb.dim):
            acc = {}
            for c, term in cobar.delta(n, idx):
                node = term_to_enode(term, cobar)
                for t2, c2 in delta_on_enode(node, cobar).items():
                    acc[t2] = acc.get(t2, ZERO) + c * c2
            residual = {t: c for t, c in acc.items() if c}
            worst = max(worst, len(residual))
        report["arities"][n] = worst
        if worst:
            report["ok"] = False
    return report


def dual_cooperad(pres, n, nmax=4):
    """The cooperad basis in arity n: labels and degrees; for built-ins the
    labels are (I, J, k) with I symmetric, J antisymmetric, degree 1-|J|."""
    cobar = pres if isinstance(pres, CobarComplex) else CobarComplex(pres, nmax)
    eb = cobar.ebasis(n)
    return {"arity": n, "weight": n - 1,
            "labels": list(eb.labels), "degrees": list(eb.degrees)}


def weight_two_recovery(pres, cobar=None):
    """Project delta on the arity-3 generators to two-vertex trees over the
    primal module (through the canonical tree pairing) and compare the span
    with the relation span of P."""
    from .quadratic import pairing_values
    if cobar is None:
        cobar = CobarComplex(pres, 3)
    p = cobar.pres
    module = p.module
    kappa = pairing_values(module)
    eb2 = cobar.ebasis(2)
    dual_ctx2 = cobar.dual.context(2)
    corolla_of = {}
    for j, coords in enumerate(eb2.elements):
        assert len(coords) == 1, "arity-2 e-basis must be corollas"
        (i, c), = coords.items()
        assert abs(c) == 1
        corolla_of[j] = (module.dec_by_name[dual_ctx2.representatives[i].dec.name], c)
    basis3 = enumerate_basis(module, 3)
    index = {t: k for k, t in enumerate(basis3)}
    ech = Echelon(len(basis3))
    eb3 = cobar.ebasis(3)
    for idx in range(eb3.dim):
        vec = {}
        for c, (m, a, k, b, S) in cobar.delta(3, idx):
            assert m == 2 and k == 2
            i = CobarComplex._slot_of(S, 3)
            root, croot = corolla_of[a]
            top, ctop = corolla_of[b]
            rest = [x for x in (1, 2, 3) if x not in S]
            top_text = "%s(%d,%d)" % (top.name, S[0], S[1])
            if i == 1:
                text = "%s(%s,%d)" % (root.name, top_text, rest[0])
            else:
                text = "%s(%d,%s)" % (root.name, rest[0], top_text)
            for t, cc in normalize([(c * croot * ctop, parse_raw(text, module))]).items():
                vec[t] = vec.get(t, ZERO) + cc * kappa[t]
        ech.add({index[t]: c for t, c in vec.items() if c})
    ech.rref()
    rel = Echelon(len(basis3))
    for r in p.relations:
        for sigma in all_permutations(3):
            rel.add({index[t]: c for t, c in tv_act(r, sigma).items()})
    rel.rref()
    return {"delta_span": ech.rank, "relation_span": rel.rank,
            "equal": ech.subspace() == rel.subspace()}


def delta_table_text(pres, nmax=3):
    """Structured-text export of the differential, keyed by generator labels
    (stable for golden-file diffs)."""
    cobar = pres if isinstance(pres, CobarComplex) else CobarComplex(pres, nmax)
    lines = ["cobar-delta-table", "presentation: %s" % cobar.pres.name]
    for n in range(2, nmax + 1):
        eb = cobar.ebasis(n)
        for idx in range(eb.dim):
            label = eb.labels[idx]
            lines.append("generator arity %d  label %s  degree %d"
                         % (n, _fmt_label(label), eb.degrees[idx]))
            for c, (m, a, k, b, S) in cobar.delta(n, idx):
                lines.append("  %s * [%s o(%s) %s]"
                             % (c, _fmt_label(self_label(cobar, m, a)),
                                ",".join(map(str, S)),
                                _fmt_label(self_label(cobar, k, b))))
    return "\n".join(lines) + "\n"


def self_label(cobar, n, idx):
    return cobar.ebasis(n).labels[idx]


def _fmt_label(label):
    if isinstance(label, tuple):
        A, S, k = label
        return "I=%s J=%s k=%d" % ("".join(map(str, A)), "".join(map(str, S)) or "-", k)
    return str(label)
