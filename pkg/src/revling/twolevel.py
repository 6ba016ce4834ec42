"""Feature-augmented two-level spelling rules and morphotactics.

A word's lexical form ("chameau+e") and its surface form ("chamelle")
are related by an alignment of symbol pairs.  Spelling rules constrain
which alignments are admissible:

  ``=>``  context restriction: the pair is licensed only in this context;
  ``<=``  surface coercion: wherever the lexical symbol occurs in this
          context, it must take the rule's surface realization;
  ``<=>`` both.

A rule marked ``optional`` licenses a change without forcing it (it must
be a pure context restriction), which yields alternations like
paye/paie.  Each rule may carry a feature constraint which must unify,
independently, with the features of every morpheme the rule's matched
span overlaps; this is how lexically conditioned changes (consonant
doubling vs. e->e-grave, silent-e behaviour of endings) are controlled.

Rule application is interpretive: candidate alignments are found by
search and checked against all rules simultaneously.  Compilation is
independent of the lexicon; production rules (morphotax) define the
legal stem+affix combinations and their feature equations by
unification.
"""

import unicodedata
from dataclasses import dataclass, field

from . import featstruct as F

EPS = ""          # null symbol
BOUNDARY = "##"   # word boundary / word edge
PAD = (BOUNDARY, EPS)

CR, SC, COMPOSITE = "=>", "<=", "<=>"


class SpellingError(Exception):
    pass


class MorphotaxError(Exception):
    pass


def nfc(text):
    return unicodedata.normalize("NFC", text)


@dataclass(frozen=True)
class SymbolPair:
    lex: str
    surf: str

    def __post_init__(self):
        if self.lex == EPS and self.surf == EPS:
            raise SpellingError("symbol pair cannot be null on both sides")


@dataclass(frozen=True)
class ContextItem:
    """Matches one alignment pair.  Either side may be None (wildcard)
    or a frozenset of symbols; `negate` inverts the whole item;
    `optional` makes the item skippable."""

    lex: frozenset | None = None
    surf: frozenset | None = None
    negate: bool = False
    optional: bool = False

    def matches(self, pair):
        ok = ((self.lex is None or pair[0] in self.lex)
              and (self.surf is None or pair[1] in self.surf))
        return not ok if self.negate else ok


@dataclass
class SpellingRule:
    name: str
    pair: SymbolPair
    op: str
    left: tuple      # ContextItems, innermost (nearest the focus) first
    right: tuple     # ContextItems, left to right
    optional: bool = False
    constraint: object = None   # FSNode or None


@dataclass
class CompiledSpelling:
    """Compiled, lexicon-independent rule set."""

    letters: frozenset = frozenset()
    defaults: dict = field(default_factory=dict)   # boundary symbol -> surface
    pairs: set = field(default_factory=set)        # declared non-default pairs
    classes: dict = field(default_factory=dict)
    rules: list = field(default_factory=list)

    def candidates(self, lex):
        """Possible surface realizations of one lexical symbol."""
        out = []
        if lex in self.defaults:
            out.append(self.defaults[lex])
        else:
            out.append(lex)   # identity, also for symbols outside the alphabet
        for pair in self.pairs:
            if pair[0] == lex and pair[1] not in out:
                out.append(pair[1])
        return out

    def is_default(self, pair):
        lex, surf = pair
        if lex in self.defaults:
            return surf == self.defaults[lex]
        return lex == surf


@dataclass(frozen=True)
class MorphemeEntry:
    """A stem or affix.  Affix lexical forms begin with '+'.  Affix
    semantic contributions (e.g. an understood subject) travel inside
    `features` under their own attributes."""

    form: str
    features: object            # FSNode

    @property
    def is_affix(self):
        return self.form.startswith("+")


@dataclass
class ProductionRule:
    """word-pattern -> stem-pattern affix-pattern...; feature equations
    are the shared variables of the patterns.  The stem is the head:
    the word inherits the unified stem's features, further constrained
    by the mother pattern."""

    name: str
    mother: object              # FSNode
    daughters: list             # [(role, FSNode)], roles 'stem'/'affix'

    def apply(self, entries):
        if len(entries) != len(self.daughters):
            return None
        memo = {}
        mother = F.copy_fs(self.mother, memo)
        pats = [(role, F.copy_fs(node, memo)) for role, node in self.daughters]
        head = None
        for (role, pat), entry in zip(pats, entries):
            if role == "stem" and entry.is_affix:
                return None
            if role == "affix" and not entry.is_affix:
                return None
            got = F.copy_fs(entry.features)
            if not F.unify_in_place(pat, got):
                return None
            if role == "stem":
                head = pat
        if head is not None and not F.unify_in_place(mother, head):
            return None
        result = F.deref(mother)
        if F.is_cyclic(result):
            return None
        return F.copy_fs(result)


# ---------------------------------------------------------------------------
# Rule file reader
#
#   letters  a b c ...
#   boundary + 0              (lexical symbol with a default realization;
#   boundary ## %              0 = nothing, % = space)
#   class V a e i o u ...
#   pair a:l                  (declares a non-default feasible pair)
#   rule <name> [optional] <pair> <op> <left items> _ <right items>
#        [where <feature structure>]
#
# Context items: `t` (lexical t), `t:e`, `:e`, `{a,e}`, `!{a,e}`, `@V`,
# with `?` suffix for an optional item.
# ---------------------------------------------------------------------------


def _decode_symbol(token):
    if token == "0":
        return EPS
    if token == "%":
        return " "
    return token


def _parse_side(text, classes):
    if text == "":
        return None
    if text.startswith("@"):
        name = text[1:]
        if name not in classes:
            raise SpellingError("unknown class @%s" % name)
        return classes[name]
    if text.startswith("{") and text.endswith("}"):
        return frozenset(_decode_symbol(s.strip()) for s in text[1:-1].split(","))
    return frozenset((_decode_symbol(text),))


def _parse_item(token, classes):
    optional = token.endswith("?")
    if optional:
        token = token[:-1]
    negate = token.startswith("!")
    if negate:
        token = token[1:]
    if ":" in token and not token.startswith("{"):
        lex_text, surf_text = token.split(":", 1)
    else:
        lex_text, surf_text = token, ""
    return ContextItem(lex=_parse_side(lex_text, classes),
                       surf=_parse_side(surf_text, classes),
                       negate=negate, optional=optional)


def _parse_pair(token):
    if ":" not in token:
        raise SpellingError("focus must be written lex:surf, got %r" % token)
    lex, surf = token.split(":", 1)
    return SymbolPair(_decode_symbol(lex), _decode_symbol(surf))


def compile_spelling(text):
    """Compile a rule file (see module docstring for semantics).
    Deterministic; raises SpellingError on undeclared symbols or
    duplicate rule names."""
    compiled = CompiledSpelling()
    letters = set()
    names = set()
    for lineno, raw in enumerate(nfc(text).splitlines(), start=1):
        line = raw.strip()
        # '#' is itself an alphabet symbol, so only whole-line comments
        if not line or (line.startswith("#") and not line.startswith("##")):
            continue
        try:
            head, rest = (line.split(None, 1) + [""])[:2]
            if head == "letters":
                letters.update(rest.split())
            elif head == "boundary":
                sym, default = rest.split()
                compiled.defaults[_decode_symbol(sym)] = _decode_symbol(default)
            elif head == "class":
                name, *members = rest.split()
                compiled.classes[name] = frozenset(_decode_symbol(m) for m in members)
            elif head == "pair":
                pair = _parse_pair(rest.strip())
                compiled.pairs.add((pair.lex, pair.surf))
            elif head == "rule":
                rule = _compile_rule(rest, compiled, letters, names)
                compiled.rules.append(rule)
            else:
                raise SpellingError("unknown directive %r" % head)
        except SpellingError as exc:
            raise SpellingError("line %d: %s" % (lineno, exc)) from None
    compiled.letters = frozenset(letters)
    return compiled


def _compile_rule(rest, compiled, letters, names):
    if " where " in rest:
        body, fs_text = rest.split(" where ", 1)
        constraint = F.read_fs(fs_text.strip())
    else:
        body, constraint = rest, None
    tokens = body.split()
    if not tokens:
        raise SpellingError("empty rule")
    name = tokens.pop(0)
    if name in names:
        raise SpellingError("duplicate rule name %r" % name)
    names.add(name)
    optional = False
    if tokens and tokens[0] == "optional":
        optional = True
        tokens.pop(0)
    if len(tokens) < 2:
        raise SpellingError("rule %s: missing pair/operator" % name)
    pair = _parse_pair(tokens.pop(0))
    op = tokens.pop(0)
    if op not in (CR, SC, COMPOSITE):
        raise SpellingError("rule %s: bad operator %r" % (name, op))
    if optional and op != CR:
        raise SpellingError("rule %s: optional rules must use =>" % name)
    if "_" not in tokens:
        raise SpellingError("rule %s: missing focus marker _" % name)
    split = tokens.index("_")
    left = [_parse_item(t, compiled.classes) for t in tokens[:split]]
    right = [_parse_item(t, compiled.classes) for t in tokens[split + 1:]]
    rule = SpellingRule(name=name, pair=pair, op=op,
                        left=tuple(reversed(left)), right=tuple(right),
                        optional=optional, constraint=constraint)
    _check_declared(rule, compiled, letters)
    return rule


def _check_declared(rule, compiled, letters):
    known = set(letters) | set(compiled.defaults) | {EPS, " ", "'"}
    known.update(sym for members in compiled.classes.values() for sym in members)
    declared_pairs = set(compiled.pairs)
    declared_pairs.update((l, l) for l in letters)
    declared_pairs.update((b, s) for b, s in compiled.defaults.items())

    focus = (rule.pair.lex, rule.pair.surf)
    if focus not in declared_pairs and not compiled.is_default(focus):
        raise SpellingError("rule %s: pair %s:%s not in the declared alphabet"
                            % (rule.name, rule.pair.lex or "0", rule.pair.surf or "0"))
    for item in rule.left + rule.right:
        for side in (item.lex, item.surf):
            if side is None:
                continue
            for sym in side:
                if sym not in known:
                    raise SpellingError(
                        "rule %s: context symbol %r not in the declared alphabet"
                        % (rule.name, sym))


# ---------------------------------------------------------------------------
# Alignment checking
# ---------------------------------------------------------------------------


def _pair_at(pairs, index):
    if 0 <= index < len(pairs):
        return pairs[index]
    return PAD


def _match_context(items, pairs, start, step):
    """Match items outward from the focus.  Returns the set of matched
    real positions, or None.  `step` is -1 for left contexts (items
    ordered innermost first) and +1 for right contexts."""
    def go(item_i, pos):
        if item_i == len(items):
            return set()
        item = items[item_i]
        if item.optional:
            rest = go(item_i + 1, pos)
            if rest is not None:
                return rest
        if item.matches(_pair_at(pairs, pos)):
            rest = go(item_i + 1, pos + step)
            if rest is not None:
                if 0 <= pos < len(pairs):
                    rest = rest | {pos}
                return rest
        return None

    return go(0, start + step)


def _features_ok(rule, span, owners, feats):
    if rule.constraint is None or owners is None:
        return True
    touched = sorted({owners[i] for i in span if owners[i] is not None})
    for m in touched:
        if F.unify(rule.constraint, feats[m]) is None:
            return False
    return True


def _rule_at(rule, pairs, index, owners, feats):
    """Context + feature match of `rule` with its focus at `index`;
    returns the matched span or None."""
    left = _match_context(rule.left, pairs, index, -1)
    if left is None:
        return None
    right = _match_context(rule.right, pairs, index, +1)
    if right is None:
        return None
    span = left | right | {index}
    if not _features_ok(rule, span, owners, feats):
        return None
    return span


def check_alignment(pairs, compiled, owners=None, feats=None):
    """Admissibility of a complete alignment: every non-default pair is
    licensed by a context-restriction rule, and no coercion rule is
    violated."""
    for i, pair in enumerate(pairs):
        if compiled.is_default(pair):
            continue
        licensed = False
        for rule in compiled.rules:
            if rule.op not in (CR, COMPOSITE):
                continue
            if (rule.pair.lex, rule.pair.surf) != pair:
                continue
            if _rule_at(rule, pairs, i, owners, feats) is not None:
                licensed = True
                break
        if not licensed:
            return False
    for rule in compiled.rules:
        if rule.op not in (SC, COMPOSITE):
            continue
        for i, pair in enumerate(pairs):
            if pair[0] != rule.pair.lex or pair[1] == rule.pair.surf:
                continue
            if _rule_at(rule, pairs, i, owners, feats) is not None:
                return False
    return True


# ---------------------------------------------------------------------------
# Synthesis and analysis
# ---------------------------------------------------------------------------


def surface_realizations(symbols, compiled, owners=None, feats=None):
    """All surface strings admissible for a lexical symbol sequence."""
    results = set()

    def walk(i, chosen):
        if i == len(symbols):
            if check_alignment(chosen, compiled, owners, feats):
                results.add("".join(p[1] for p in chosen))
            return
        for surf in compiled.candidates(symbols[i]):
            walk(i + 1, chosen + [(symbols[i], surf)])

    walk(0, [])
    return results


def lexical_symbols(forms):
    """Symbol sequence and owner map of a morpheme sequence.  The word
    boundary symbol is one symbol despite being spelled '##'."""
    symbols = []
    owners = []
    for m_index, form in enumerate(forms):
        i = 0
        while i < len(form):
            if form.startswith(BOUNDARY, i):
                symbols.append(BOUNDARY)
                i += len(BOUNDARY)
            else:
                symbols.append(form[i])
                i += 1
            owners.append(m_index)
    return symbols, owners


def synthesize_word(morphemes, compiled, rules=None):
    """All surface strings licensed for a morpheme sequence.  When
    production rules are supplied, the sequence must be admitted by one
    of them (MorphotaxError otherwise)."""
    morphemes = list(morphemes)
    if rules is not None and not check_morphotax(morphemes, rules):
        raise MorphotaxError("no production rule admits %s"
                             % "+".join(m.form.lstrip("+") for m in morphemes))
    symbols, owners = lexical_symbols([nfc(m.form) for m in morphemes])
    feats = [m.features for m in morphemes]
    return surface_realizations(symbols, compiled, owners, feats)


def check_morphotax(morphemes, rules):
    """Unified word structures for a morpheme sequence, one per matching
    production rule; empty tuple if none admits it."""
    morphemes = list(morphemes)
    out = []
    for rule in rules:
        mother = rule.apply(morphemes)
        if mother is not None:
            out.append(mother)
    return tuple(out)


class Trie:
    __slots__ = ("children", "forms")

    def __init__(self):
        self.children = {}
        self.forms = []

    def add(self, form):
        node = self
        symbols, _ = lexical_symbols([form])
        for sym in symbols:
            node = node.children.setdefault(sym, Trie())
        node.forms.append(form)


class LexiconAccess:
    """Stem/affix lookup handed to analyze_word: tries over lexical
    forms plus the production rules tying them together."""

    def __init__(self, stems, affixes, rules):
        self.stem_trie = Trie()
        self.affix_trie = Trie()
        self.entries = {}
        for entry in stems:
            self.stem_trie.add(nfc(entry.form))
            self.entries.setdefault(nfc(entry.form), []).append(entry)
        for entry in affixes:
            self.affix_trie.add(nfc(entry.form))
            self.entries.setdefault(nfc(entry.form), []).append(entry)
        self.rules = list(rules)

    def entries_for(self, form):
        return self.entries.get(form, [])


def analyze_word(surface, compiled, lexicon, max_affixes=2, max_states=20000):
    """All (morpheme entries, unified word structure) pairs whose
    synthesis yields `surface`.  Unknown words yield the empty list."""
    surface = nfc(surface)
    found = []
    budget = [max_states]

    def walk(i, trie, pairs, forms, n_affixes):
        budget[0] -= 1
        if budget[0] < 0:
            raise SpellingError("analysis state budget exceeded for %r" % surface)
        for form in trie.forms:
            done = forms + [form]
            if i == len(surface):
                found.append((done, list(pairs)))
            if n_affixes < max_affixes:
                walk(i, lexicon.affix_trie, pairs, done, n_affixes + 1)
        for lex, child in trie.children.items():
            for surf in compiled.candidates(lex):
                if surf == EPS:
                    walk(i, child, pairs + [(lex, surf)], forms, n_affixes)
                elif surface.startswith(surf, i):
                    walk(i + len(surf), child, pairs + [(lex, surf)], forms, n_affixes)

    walk(0, lexicon.stem_trie, [], [], 0)

    results = []
    seen = set()
    for forms, pairs in found:
        _, owners = lexical_symbols(forms)
        for combo in _entry_combinations(forms, lexicon):
            feats = [e.features for e in combo]
            if not check_alignment(pairs, compiled, owners, feats):
                continue
            for mother in check_morphotax(combo, lexicon.rules):
                key = (tuple(forms), tuple(id(e) for e in combo), F.write_fs(mother))
                if key not in seen:
                    seen.add(key)
                    results.append((tuple(combo), mother))
    return results


def _entry_combinations(forms, lexicon):
    pools = [lexicon.entries_for(form) for form in forms]
    if any(not pool for pool in pools):
        return
    indices = [0] * len(pools)
    while True:
        yield [pool[i] for pool, i in zip(pools, indices)]
        for k in range(len(pools) - 1, -1, -1):
            indices[k] += 1
            if indices[k] < len(pools[k]):
                break
            indices[k] = 0
        else:
            return
