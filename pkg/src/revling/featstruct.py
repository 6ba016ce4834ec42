"""Feature structures with unification, subsumption and a textual syntax.

A feature structure is a rooted, acyclic attribute-value graph.  Every
node is one of:

  - a *top* node: no constraint at all (written as a bare variable);
  - an *atomic* node: a non-empty set of symbols, interpreted
    disjunctively (``{y, fut_cond_e}`` means "y or fut_cond_e");
  - a *complex* node: a finite mapping from attribute names to nodes.

Nodes may be shared (reentrancy); in the textual form sharing is
expressed with ``?Var`` markers.  Unification is done destructively on
working copies via forward pointers, so the public operations never
mutate their arguments.
"""

import re

TOP = "top"
ATOM = "atom"
COMPLEX = "complex"


class FeatureStructureError(Exception):
    pass


class FSSyntaxError(FeatureStructureError):
    """Raised by read_fs; carries the offset of the offending character."""

    def __init__(self, message, text, pos):
        super().__init__("%s at position %d: %r" % (message, pos, text[pos:pos + 20]))
        self.pos = pos


class FSNode:
    """One node of a feature graph.  The root node *is* the structure."""

    __slots__ = ("kind", "values", "attrs", "forward")

    def __init__(self, kind, values=None, attrs=None):
        self.kind = kind
        self.values = values        # frozenset of symbols (ATOM only)
        self.attrs = attrs          # dict name -> FSNode (COMPLEX only)
        self.forward = None

    def __repr__(self):
        return "<FSNode %s>" % write_fs(self)


def top():
    return FSNode(TOP)


def atom(values):
    if isinstance(values, str):
        values = (values,)
    vals = frozenset(values)
    if not vals:
        raise FeatureStructureError("atomic value set must be non-empty")
    return FSNode(ATOM, values=vals)


def fs(attrs=None, **kwargs):
    """Build a complex node from a mapping (or keyword arguments)."""
    combined = dict(attrs or {})
    combined.update(kwargs)
    if not combined:
        return top()
    norm = {}
    for key, val in combined.items():
        if isinstance(val, FSNode):
            norm[key] = val
        elif isinstance(val, (set, frozenset, tuple, list, str)):
            norm[key] = atom(val)
        else:
            raise FeatureStructureError("bad attribute value for %r: %r" % (key, val))
    return FSNode(COMPLEX, attrs=norm)


def deref(node):
    while node.forward is not None:
        if node.forward.forward is not None:
            node.forward = node.forward.forward  # path compression
        node = node.forward
    return node


def copy_fs(node, memo=None):
    """Deep copy preserving reentrancy.  A shared memo copies several
    roots into one consistent graph (used to standardize rules apart)."""
    if memo is None:
        memo = {}
    node = deref(node)
    hit = memo.get(id(node))
    if hit is not None:
        return hit
    if node.kind == TOP:
        new = FSNode(TOP)
        memo[id(node)] = new
    elif node.kind == ATOM:
        new = FSNode(ATOM, values=node.values)
        memo[id(node)] = new
    else:
        new = FSNode(COMPLEX, attrs={})
        memo[id(node)] = new
        for key, val in node.attrs.items():
            new.attrs[key] = copy_fs(val, memo)
    return new


def unify_in_place(a, b):
    """Destructive unification via forward pointers.  Returns False on
    failure, leaving the graphs in an unusable state (callers unify
    fresh copies and discard them on failure)."""
    a = deref(a)
    b = deref(b)
    if a is b:
        return True
    if a.kind == TOP:
        a.forward = b
        return True
    if b.kind == TOP:
        b.forward = a
        return True
    if a.kind == ATOM and b.kind == ATOM:
        inter = a.values & b.values
        if not inter:
            return False
        merged = FSNode(ATOM, values=inter)
        a.forward = merged
        b.forward = merged
        return True
    if a.kind == COMPLEX and b.kind == COMPLEX:
        b.forward = a
        for key, bval in b.attrs.items():
            aval = a.attrs.get(key)
            if aval is None:
                a.attrs[key] = bval
            elif not unify_in_place(aval, bval):
                return False
        return True
    return False  # atomic node meets complex node


def is_cyclic(node):
    on_stack = set()
    done = set()

    def walk(n):
        n = deref(n)
        if id(n) in done:
            return False
        if id(n) in on_stack:
            return True
        if n.kind == COMPLEX:
            on_stack.add(id(n))
            for child in n.attrs.values():
                if walk(child):
                    return True
            on_stack.discard(id(n))
        done.add(id(n))
        return False

    return walk(node)


def unify(a, b):
    """Most general structure subsumed by both, or None on failure.
    Inputs are never mutated."""
    ca = copy_fs(a)
    cb = copy_fs(b)
    if not unify_in_place(ca, cb):
        return None
    result = deref(ca)
    # Reentrancy across the two inputs can tie a knot; treat that as failure.
    if is_cyclic(result):
        return None
    return copy_fs(result)


def unifiable(a, b):
    return unify(a, b) is not None


def subsumes(a, b):
    """True iff every total instantiation of b is an instantiation of a
    (a is at least as general as b).  Reentrancy in a must be present
    in b."""
    mapping = {}

    def walk(x, y):
        x = deref(x)
        y = deref(y)
        seen = mapping.get(id(x))
        if seen is not None:
            return seen is y
        mapping[id(x)] = y
        if x.kind == TOP:
            return True
        if x.kind == ATOM:
            return y.kind == ATOM and y.values <= x.values
        if y.kind != COMPLEX:
            return False
        for key, xval in x.attrs.items():
            yval = y.attrs.get(key)
            if yval is None or not walk(xval, yval):
                return False
        return True

    return walk(a, b)


def equal_mod_renaming(a, b):
    return subsumes(a, b) and subsumes(b, a)


# ---------------------------------------------------------------------------
# Textual syntax
#
#   node    := '[' pairs? ']' | '{' sym (',' sym)* '}' | sym | '?' name ('=' node)?
#   pairs   := name '=' node (',' name '=' node)*
#
# '[]' denotes the unconstrained (top) structure.  All occurrences of a
# variable within one read (or one shared environment) denote the same node.
# ---------------------------------------------------------------------------

_SYM_RE = re.compile(r"[^\s,=\[\]{}?]+")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


class _Reader:
    def __init__(self, text, env):
        self.text = text
        self.pos = 0
        self.env = env

    def error(self, message):
        raise FSSyntaxError(message, self.text, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char):
        if self.peek() != char:
            self.error("expected %r" % char)
        self.pos += 1

    def symbol(self):
        self.skip_ws()
        match = _SYM_RE.match(self.text, self.pos)
        if not match:
            self.error("expected a symbol")
        self.pos = match.end()
        return match.group()

    def node(self):
        ch = self.peek()
        if ch == "[":
            return self.complex()
        if ch == "{":
            return self.atomset()
        if ch == "?":
            return self.variable()
        if ch == "":
            self.error("unexpected end of input")
        return atom(self.symbol())

    def complex(self):
        self.expect("[")
        attrs = {}
        if self.peek() == "]":
            self.pos += 1
            return top()
        while True:
            self.skip_ws()
            match = _NAME_RE.match(self.text, self.pos)
            if not match:
                self.error("expected an attribute name")
            name = match.group()
            self.pos = match.end()
            if name in attrs:
                self.error("duplicate attribute %r" % name)
            self.expect("=")
            attrs[name] = self.node()
            ch = self.peek()
            if ch == ",":
                self.pos += 1
                continue
            self.expect("]")
            return FSNode(COMPLEX, attrs=attrs)

    def atomset(self):
        self.expect("{")
        values = [self.symbol()]
        while self.peek() == ",":
            self.pos += 1
            values.append(self.symbol())
        self.expect("}")
        return atom(values)

    def variable(self):
        self.expect("?")
        match = _NAME_RE.match(self.text, self.pos)
        if not match:
            self.error("expected a variable name after '?'")
        name = match.group()
        self.pos = match.end()
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "=":
            self.pos += 1
            value = self.node()
            if name in self.env:
                if not unify_in_place(self.env[name], value):
                    self.error("conflicting bindings for ?%s" % name)
            else:
                self.env[name] = value
            return deref(self.env[name])
        if name not in self.env:
            self.env[name] = top()
        return self.env[name]


def read_fs(text, env=None):
    """Parse the textual syntax.  `env` maps variable names to nodes and
    may be shared between calls so that several structures (e.g. the
    categories of one grammar rule) share their variables."""
    reader = _Reader(text, env if env is not None else {})
    node = reader.node()
    reader.skip_ws()
    if reader.pos != len(text):
        reader.error("trailing input")
    if is_cyclic(node):
        reader.pos = 0
        reader.error("cyclic structure")
    return node


def write_fs(node):
    """Canonical textual form: attributes sorted, reentrant and top nodes
    numbered ?X1, ?X2, ... in traversal order.  Two structures are equal
    modulo renaming iff their canonical forms are identical."""
    counts = {}

    def count(n):
        n = deref(n)
        counts[id(n)] = counts.get(id(n), 0) + 1
        if counts[id(n)] == 1 and n.kind == COMPLEX:
            for key in n.attrs:
                count(n.attrs[key])

    count(node)
    names = {}

    def render(n):
        n = deref(n)
        if id(n) in names:
            return names[id(n)]
        shared = counts[id(n)] > 1
        if n.kind == TOP or shared:
            names[id(n)] = "?X%d" % (len(names) + 1)
        if n.kind == TOP:
            return names[id(n)]
        if n.kind == ATOM:
            if len(n.values) == 1:
                body = next(iter(n.values))
            else:
                body = "{%s}" % ", ".join(sorted(n.values))
        else:
            body = "[%s]" % ", ".join(
                "%s=%s" % (key, render(n.attrs[key])) for key in sorted(n.attrs))
        if shared:
            return "%s=%s" % (names[id(n)], body)
        return body

    return render(node)


def get_path(node, path):
    """Follow a sequence of attribute names; None if any step is missing."""
    current = deref(node)
    for name in path:
        if current.kind != COMPLEX or name not in current.attrs:
            return None
        current = deref(current.attrs[name])
    return current


def atom_value(node):
    """The single symbol of a determinate atomic node, else None."""
    node = deref(node)
    if node.kind == ATOM and len(node.values) == 1:
        return next(iter(node.values))
    return None
