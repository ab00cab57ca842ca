"""
Decorated rooted trees in planar normal form.

A tree is stored with the children of every vertex ordered by the minimal
external label reachable through them (the planar representation), and the
decoration tensor implicitly ordered by preorder traversal.  All operations
that reorder decorations (grafting, relabelling) return a sign along with the
tree: swapping two odd decorations costs -1, and a vertex whose inputs get
swapped transforms its decoration through the S_2 symmetry type.
"""

from .smodule import Decoration

__all__ = ["DTree", "leaf", "node", "normalize_raw", "graft", "act",
           "restrict_edge", "internal_edges", "path_words", "word_key",
           "compare_words", "sort_key", "serialize", "parse_raw"]


class DTree:
    """Immutable decorated tree (or external leaf) in planar normal form."""

    __slots__ = ("dec", "children", "min_leaf", "nleaves", "parity",
                 "_hash", "_serial", "_words")

    def __init__(self, dec, children, label=None):
        self.dec = dec
        self.children = children
        if dec is None:
            assert children == ()
            self.min_leaf = label
            self.nleaves = 1
            self.parity = 0
        else:
            assert len(children) == dec.gen.arity
            mins = [c.min_leaf for c in children]
            assert mins == sorted(mins), "children must be planar-ordered"
            self.min_leaf = mins[0]
            self.nleaves = sum(c.nleaves for c in children)
            self.parity = (dec.parity + sum(c.parity for c in children)) % 2
        self._hash = None
        self._serial = None
        self._words = None

    @property
    def is_leaf(self):
        return self.dec is None

    def leaves(self):
        if self.is_leaf:
            yield self.min_leaf
        else:
            for c in self.children:
                yield from c.leaves()

    def vertices(self):
        """Decorations in preorder."""
        if not self.is_leaf:
            yield self.dec
            for c in self.children:
                yield from c.vertices()

    @property
    def nvertices(self):
        return sum(1 for _ in self.vertices())

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, DTree):
            return False
        if self.is_leaf or other.is_leaf:
            return self.is_leaf and other.is_leaf and self.min_leaf == other.min_leaf
        return (self.dec == other.dec and self.min_leaf == other.min_leaf
                and self.children == other.children)

    def __hash__(self):
        if self._hash is None:
            if self.is_leaf:
                self._hash = hash(("leaf", self.min_leaf))
            else:
                self._hash = hash((self.dec, self.children))
        return self._hash

    def __repr__(self):
        return serialize(self)


def leaf(i):
    return DTree(None, (), label=i)


def node(dec, children):
    return DTree(dec, tuple(children))


def serialize(t):
    """Canonical text form, e.g. pl(1, y(2, 3)).  Used as the deterministic
    tiebreaker refining the path-word order."""
    if t._serial is None:
        if t.is_leaf:
            t._serial = str(t.min_leaf)
        else:
            t._serial = "%s(%s)" % (t.dec.name,
                                    ", ".join(serialize(c) for c in t.children))
    return t._serial


def normalize_raw(raw):
    """Normalize a raw tree ('leaf', i) | (dec, [children raws]) whose
    decoration tensor is read in the raw preorder.  Returns (sign, DTree)."""
    kind = raw[0]
    if kind == "leaf":
        return 1, leaf(raw[1])
    dec, children = raw
    assert isinstance(dec, Decoration)
    sign = 1
    norm = []
    for c in children:
        s, t = normalize_raw(c)
        sign *= s
        norm.append(t)
    # insertion sort by min leaf; adjacent swaps move whole decoration blocks
    n = len(norm)
    assert n == dec.gen.arity
    if n == 2:
        a, b = norm
        if a.min_leaf > b.min_leaf:
            if a.parity and b.parity:
                sign = -sign
            s, dec = dec.flip()
            sign *= s
            norm = [b, a]
    elif n > 2:
        raise NotImplementedError("normal forms only implemented for binary generators")
    return sign, node(dec, norm)


def _shift_relabel(t, i, shift, b_new):
    """Replace leaf i by the (already relabelled) tree b_new; shift larger
    labels up.  Planar order is preserved because b_new's minimal leaf is i."""
    if t.is_leaf:
        if t.min_leaf == i:
            return b_new
        if t.min_leaf > i:
            return leaf(t.min_leaf + shift)
        return t
    return node(t.dec, tuple(_shift_relabel(c, i, shift, b_new) for c in t.children))


def _relabel(t, offset):
    if t.is_leaf:
        return leaf(t.min_leaf + offset)
    return node(t.dec, tuple(_relabel(c, offset) for c in t.children))


def _tail_parity(t, i):
    """Parity of the decorations strictly after leaf i in preorder, or None
    if leaf i does not occur in t."""
    if t.is_leaf:
        return 0 if t.min_leaf == i else None
    for k, c in enumerate(t.children):
        sub = _tail_parity(c, i)
        if sub is not None:
            return (sub + sum(cc.parity for cc in t.children[k + 1:])) % 2
    return None


def graft(a, i, b):
    """Operadic composition a o_i b.  Returns (sign, DTree).

    External labels follow the standard convention: b's labels are inserted
    at slot i, later labels of a are shifted.  The sign moves b's decoration
    block from the end of the tensor (a x b) to its preorder position.
    """
    if not (1 <= i <= a.nleaves):
        raise IndexError("slot %d out of range for arity %d" % (i, a.nleaves))
    shift = b.nleaves - 1
    b_new = _relabel(b, i - 1)
    sign = 1
    if b.parity:
        tail = _tail_parity(a, i)
        if tail:
            sign = -1
    return sign, _shift_relabel(a, i, shift, b_new)


def _raw_relabel(t, images):
    if t.is_leaf:
        return ("leaf", images[t.min_leaf - 1])
    return (t.dec, [_raw_relabel(c, images) for c in t.children])


def act(t, sigma):
    """Permute the external labels: leaf l becomes sigma(l).  Returns
    (sign, DTree); functorial, act(act(t, s)..., tau) = act(t, s * tau)."""
    if sigma.size != t.nleaves:
        raise ValueError("permutation size %d does not match arity %d"
                         % (sigma.size, t.nleaves))
    return normalize_raw(_raw_relabel(t, sigma.images))


def internal_edges(t):
    """The internal edges, as (parent, child_index) pairs over subtrees."""
    if t.is_leaf:
        return
    for k, c in enumerate(t.children):
        if not c.is_leaf:
            yield (t, k)
        yield from internal_edges(c)


def restrict_edge(parent, child_index):
    """The restricted two-vertex tree around an internal edge.

    External edges are relabelled by the greedy minimal-linked-label rule:
    the edge whose linked external labels contain the smallest one gets 1,
    the next smallest among the remaining edges gets 2, and so on.
    """
    child = parent.children[child_index]
    if child.is_leaf:
        raise ValueError("edge is not internal")
    slots = []   # (linked minimum, owner, position)
    for k, c in enumerate(parent.children):
        if k == child_index:
            for j, cc in enumerate(child.children):
                slots.append((cc.min_leaf, "child", j))
        else:
            slots.append((c.min_leaf, "parent", k))
    order = sorted(s[0] for s in slots)
    relabel = {m: i + 1 for i, m in enumerate(order)}
    top = node(child.dec,
               tuple(leaf(relabel[c.min_leaf]) for c in child.children))
    parent_children = []
    for k, c in enumerate(parent.children):
        if k == child_index:
            parent_children.append(top)
        else:
            parent_children.append(leaf(relabel[c.min_leaf]))
    return node(parent.dec, tuple(parent_children))


def path_words(t):
    """For each external label 1..n, the decorations on the root-to-leaf
    path, bottom to top, as a tuple of name tuples."""
    if t._words is None:
        acc = {}

        def walk(s, prefix):
            if s.is_leaf:
                acc[s.min_leaf] = prefix
            else:
                prefix = prefix + (s.dec.name,)
                for c in s.children:
                    walk(c, prefix)

        walk(t, ())
        t._words = tuple(acc[i] for i in range(1, t.nleaves + 1))
    return t._words


def word_key(t, ranks):
    """Length-lex comparison key of the path-word sequence, given a total
    order on decorations as a dict name -> rank."""
    return tuple((len(w), tuple(ranks[x] for x in w)) for w in path_words(t))


def compare_words(a, b, ranks):
    """-1 / 0 / +1 in the path-word order (a preorder: distinct trees can
    tie only if their word sequences coincide)."""
    if a.nleaves != b.nleaves:
        raise ValueError("arity mismatch")
    ka, kb = word_key(a, ranks), word_key(b, ranks)
    return -1 if ka < kb else (0 if ka == kb else 1)


def sort_key(t, ranks):
    """Total order refining the path-word order by canonical serialization."""
    return (word_key(t, ranks), serialize(t))


def parse_raw(text, module):
    """Parse the nested-term serialization g(x1, ..., xk) with integer
    leaves into a raw tree over the module's decorations."""
    text = text.strip()
    pos = 0

    def error(msg):
        raise ValueError("parse error at position %d: %s" % (pos, msg))

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def parse_term():
        nonlocal pos
        skip_ws()
        start = pos
        if pos < len(text) and text[pos].isdigit():
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            return ("leaf", int(text[start:pos]))
        while pos < len(text) and (text[pos].isalnum() or text[pos] == "_"):
            pos += 1
        name = text[start:pos]
        if not name:
            error("expected a generator name or leaf label")
        if name not in module.dec_by_name:
            error("unknown generator %r" % name)
        dec = module.dec_by_name[name]
        skip_ws()
        if pos >= len(text) or text[pos] != "(":
            error("expected '(' after %r" % name)
        pos += 1
        children = []
        while True:
            children.append(parse_term())
            skip_ws()
            if pos < len(text) and text[pos] == ",":
                pos += 1
                continue
            if pos < len(text) and text[pos] == ")":
                pos += 1
                break
            error("expected ',' or ')'")
        if len(children) != dec.gen.arity:
            error("generator %r has arity %d, got %d arguments"
                  % (name, dec.gen.arity, len(children)))
        return (dec, children)

    raw = parse_term()
    skip_ws()
    if pos != len(text):
        error("trailing input %r" % text[pos:])
    return raw
