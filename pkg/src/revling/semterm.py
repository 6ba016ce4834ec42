"""Logical-form terms ("QLF-lite").

A term is a predicate-argument tree: constants (``jean``), variables
(``?X``), and applications (``aimer(jean, marie)``).  Clause wrappers
(``decl``, ``ynq``, ``whq``, ``imp``), pronoun markers (``pron(il)``),
quantified nominals (``qterm(quant, Var, restriction)``) and conjunction
(``and(a, b)``) are ordinary applications with reserved functors.

Terms are stored as feature-structure nodes so that the grammar can
build them by unification alone: an application is a complex node with
the functor under ``fn`` and arguments under ``a1`` .. ``aN``; a
constant is an atomic node; a variable is a top node.  This module
converts between that encoding and a readable textual form.
"""

from . import featstruct as F

WRAPPERS = ("decl", "ynq", "whq", "imp")

_MAX_ARGS = 8


class TermError(Exception):
    pass


def app(functor, *args):
    """Build the node encoding functor(args...)."""
    if not args:
        return F.atom(functor)
    attrs = {"fn": F.atom(functor)}
    for i, arg in enumerate(args, start=1):
        attrs["a%d" % i] = arg
    return F.fs(attrs)


def constant(name):
    return F.atom(name)


def variable():
    return F.top()


def term_args(node):
    """(functor, [arg nodes]) of an application node, else None."""
    node = F.deref(node)
    if node.kind != F.COMPLEX or "fn" not in node.attrs:
        return None
    functor = F.atom_value(node.attrs["fn"])
    if functor is None:
        return None
    args = []
    for i in range(1, _MAX_ARGS + 1):
        arg = node.attrs.get("a%d" % i)
        if arg is None:
            break
        args.append(F.deref(arg))
    return functor, args


def wrapper_of(node):
    """The clause wrapper functor of a term, or None."""
    parts = term_args(node)
    if parts and parts[0] in WRAPPERS:
        return parts[0]
    return None


def write_term(node):
    """Canonical text: variables are named ?A, ?B, ... in order of first
    occurrence, so textual equality coincides with equality modulo
    renaming for well-formed terms."""
    names = {}

    def render(n):
        n = F.deref(n)
        if n.kind == F.TOP:
            if id(n) not in names:
                index = len(names)
                label = ""
                while True:
                    label = chr(ord("A") + index % 26) + label
                    index = index // 26 - 1
                    if index < 0:
                        break
                names[id(n)] = "?" + label
            return names[id(n)]
        if n.kind == F.ATOM:
            return "{%s}" % ",".join(sorted(n.values)) if len(n.values) > 1 \
                else next(iter(n.values))
        parts = term_args(n)
        if parts is None:
            return F.write_fs(n)
        functor, args = parts
        return "%s(%s)" % (functor, ", ".join(render(a) for a in args))

    return render(node)


_TOKEN_RE = None


def read_term(text, env=None):
    """Parse the textual form back into the node encoding.  `env` shares
    variables between several reads (as in featstruct.read_fs)."""
    if env is None:
        env = {}
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def err(message):
        raise TermError("%s at position %d: %r" % (message, pos, text[pos:pos + 20]))

    def symbol():
        nonlocal pos
        skip()
        start = pos
        while pos < len(text) and text[pos] not in "(),? \t\n":
            pos += 1
        if pos == start:
            err("expected a symbol")
        return text[start:pos]

    def term():
        nonlocal pos
        skip()
        if pos < len(text) and text[pos] == "?":
            pos += 1
            name = symbol()
            if name not in env:
                env[name] = F.top()
            return env[name]
        functor = symbol()
        skip()
        if pos < len(text) and text[pos] == "(":
            pos += 1
            args = []
            skip()
            if pos < len(text) and text[pos] == ")":
                pos += 1
                return F.atom(functor)
            while True:
                args.append(term())
                skip()
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                if pos < len(text) and text[pos] == ")":
                    pos += 1
                    return app(functor, *args)
                err("expected ',' or ')'")
        return F.atom(functor)

    node = term()
    skip()
    if pos != len(text):
        err("trailing input")
    return node


def equal_terms(a, b):
    return F.equal_mod_renaming(a, b)


def is_closed_question(node):
    """Check the whq well-formedness law: whq binds exactly one variable
    and that variable occurs in the body."""
    parts = term_args(node)
    if not parts or parts[0] != "whq":
        return True
    if len(parts[1]) != 2:
        return False
    var, body = parts[1]
    if F.deref(var).kind != F.TOP:
        return False
    target = F.deref(var)
    found = []

    def walk(n):
        n = F.deref(n)
        if n is target:
            found.append(n)
            return
        if n.kind == F.COMPLEX:
            for child in n.attrs.values():
                walk(child)

    walk(body)
    return bool(found)
