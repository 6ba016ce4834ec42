"""The unification-grammar formalism and its compiler.

A language pack consists of seven plain-text files: a feature
declaration, syntax rules, a lexicon (with macros), intra-word spelling
rules, morphotax (affixes and production rules), sandhi rules and a
regression corpus.  This module reads the first five into a
CompiledGrammar that the parser and generator share.

Rule syntax:    rule <id>: M[fs] --> D1[fs] ... Dn[fs] ; sem: <term>
Lexicon:        lex <form>: Cat[fs] ; sem: <term>        (surface word)
                stem <form>: Cat[fs] ; sem: <term>       (morphology stem)
                macro <name>(<params>): ... end   /   use <name>(<args>)
Morphotax:      affix <form>: [fs]
                prule <name>: [mother] -> stem [fs] affix [fs] ...

Semantic templates build the mother's `sem` value by substitution and
unification only: `$k` denotes daughter k's sem node, `?X` variables are
shared with the categories' feature structures.

Gap threading: the feature declaration names the thread features (WH
gaps, the five-slot clitic bundle, fronted verbs) and the categories
that carry them.  Unless a rule mentions a thread's features itself,
the compiler wires them in the difference-list discipline: the mother's
inbound thread enters the leftmost thread-bearing daughter, each
daughter's outbound thread feeds the next, and the last one leaves
through the mother.  A rule whose mother does not carry threads is an
island: its thread-bearing daughters are sealed with the thread's empty
value.
"""

import re
from dataclasses import dataclass, field

from . import featstruct as F
from . import semterm as S
from . import twolevel as T
from . import sandhi as SA


class GrammarError(Exception):
    pass


@dataclass
class Category:
    major: str
    fs: object                  # FSNode (always a complex node)


@dataclass
class GrammarRule:
    rid: str
    mother: Category
    daughters: list
    gen_order: tuple = ()       # daughter indices, semantic head first


@dataclass
class LexEntry:
    form: str
    major: str
    fs: object
    kind: str = "word"          # "word" | "stem"

    def token(self):
        kind = SA.MWU if " " in self.form else SA.WORD
        tags = frozenset(["art"]) if self.major == "Det" else frozenset()
        return SA.LexToken(self.form, kind, tags)


@dataclass
class Thread:
    name: str
    inattr: str
    outattr: str
    empty: object               # FSNode template for the sealed value
    cats: frozenset


@dataclass
class FeatureDecl:
    categories: set = field(default_factory=set)
    features: dict = field(default_factory=dict)    # name -> set | "bundle" | "open"
    threads: list = field(default_factory=list)
    starts: list = field(default_factory=list)      # [(major, fs)]
    wordcats: dict = field(default_factory=dict)    # 'v' -> 'V'


@dataclass
class CompiledGrammar:
    lang: str
    decl: FeatureDecl
    rules: list
    rules_by_first: dict
    empty_rules: list
    words: dict                 # form -> [LexEntry]
    stems: list
    spelling: object            # twolevel.CompiledSpelling
    lexaccess: object           # twolevel.LexiconAccess
    sandhi: object              # sandhi.SandhiRules
    fullforms: dict             # surface form -> [LexEntry], via synthesis

    @property
    def starts(self):
        return self.decl.starts


# ---------------------------------------------------------------------------
# Feature declaration
# ---------------------------------------------------------------------------


def read_features(text, path="features"):
    decl = FeatureDecl()
    for lineno, line in _lines(text):
        parts = line.split()
        try:
            if parts[0] == "category":
                decl.categories.update(parts[1:])
            elif parts[0] == "feature":
                name = parts[1]
                if parts[2:] == ["bundle"]:
                    decl.features[name] = "bundle"
                elif parts[2:] == ["open"]:
                    decl.features[name] = "open"
                else:
                    decl.features[name] = set(parts[2:])
            elif parts[0] == "start":
                major, _, fs_text = line.split(None, 2)[1], None, line.split(None, 2)[2]
                decl.starts.append((major, _category_fs(F.read_fs(fs_text, {}))))
            elif parts[0] == "thread":
                name, inattr, outattr = parts[1:4]
                if parts[4] != "=" or "on" not in parts:
                    raise GrammarError("bad thread line")
                on = parts.index("on")
                empty = F.read_fs(" ".join(parts[5:on]), {})
                decl.threads.append(Thread(name, inattr, outattr, empty,
                                           frozenset(parts[on + 1:])))
            elif parts[0] == "wordcat":
                decl.wordcats[parts[1]] = parts[2]
            else:
                raise GrammarError("unknown directive %r" % parts[0])
        except (IndexError, F.FeatureStructureError, GrammarError) as exc:
            raise GrammarError("%s:%d: %s" % (path, lineno, exc)) from None
    return decl


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _category_fs(node):
    node = F.deref(node)
    if node.kind == F.TOP:
        return F.FSNode(F.COMPLEX, attrs={})
    if node.kind != F.COMPLEX:
        raise GrammarError("a category's feature structure must be complex")
    return node


def validate_fs(decl, node, where):
    """Every attribute must be declared; closed features take declared
    atomic values; `open` features are not inspected."""
    seen = set()

    def walk(n):
        n = F.deref(n)
        if id(n) in seen or n.kind != F.COMPLEX:
            return
        seen.add(id(n))
        for attr, child in n.attrs.items():
            spec = decl.features.get(attr)
            if spec is None:
                raise GrammarError("%s: undeclared feature %r" % (where, attr))
            if spec == "open":
                continue
            child = F.deref(child)
            if spec == "bundle":
                walk(child)
            elif child.kind == F.ATOM:
                bad = child.values - spec
                if bad:
                    raise GrammarError("%s: value %s not declared for feature %r"
                                       % (where, "/".join(sorted(bad)), attr))
            elif child.kind == F.COMPLEX:
                raise GrammarError("%s: feature %r is atomic but has structure"
                                   % (where, attr))

    walk(node)


# ---------------------------------------------------------------------------
# Categories, rules, entries
# ---------------------------------------------------------------------------

_CAT_RE = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*(\[)?")


def _parse_category_seq(text, env, decl, where):
    """Parse 'Major[fs] Major2[fs] ...'; bare majors get empty structures."""
    cats = []
    pos = 0
    while True:
        match = _CAT_RE.match(text, pos)
        if not match:
            if text[pos:].strip():
                raise GrammarError("%s: cannot parse category at %r"
                                   % (where, text[pos:pos + 25]))
            break
        major = match.group(1)
        if major not in decl.categories:
            raise GrammarError("%s: undeclared category %r" % (where, major))
        if match.group(2):
            depth = 0
            i = match.end() - 1
            while i < len(text):
                depth += text[i] == "["
                depth -= text[i] == "]"
                i += 1
                if depth == 0:
                    break
            if depth != 0:
                raise GrammarError("%s: unbalanced brackets" % where)
            fs = _category_fs(F.read_fs(text[match.end() - 1:i], env))
            pos = i
        else:
            fs = F.FSNode(F.COMPLEX, attrs={})
            pos = match.end()
        cats.append(Category(major, fs))
    return cats


_DTR_REF = re.compile(r"\$(\d+)")


def _attach_sem(mother, daughters, template, env, where):
    text = template.strip()
    for ref in _DTR_REF.findall(text):
        k = int(ref)
        if not 1 <= k <= len(daughters):
            raise GrammarError("%s: template hole $%s names no daughter" % (where, ref))
        slot = daughters[k - 1].fs
        if "sem" not in slot.attrs:
            slot.attrs["sem"] = F.top()
        env["__dtr%s" % ref] = F.deref(slot.attrs["sem"])
    text = _DTR_REF.sub(lambda m: "?__dtr%s" % m.group(1), text)
    try:
        node = S.read_term(text, env)
    except S.TermError as exc:
        raise GrammarError("%s: bad template: %s" % (where, exc)) from None
    if "sem" in mother.fs.attrs:
        if not F.unify_in_place(mother.fs.attrs["sem"], node):
            raise GrammarError("%s: template conflicts with mother sem" % where)
    else:
        mother.fs.attrs["sem"] = node


def _mentions(cats, thread):
    return any(thread.inattr in c.fs.attrs or thread.outattr in c.fs.attrs
               for c in cats)


def _wire_threads(rule, decl):
    for thread in decl.threads:
        if _mentions([rule.mother] + rule.daughters, thread):
            continue
        carriers = [d for d in rule.daughters if d.major in thread.cats]
        if rule.mother.major in thread.cats:
            node = F.top()
            rule.mother.fs.attrs[thread.inattr] = node
            for d in carriers:
                d.fs.attrs[thread.inattr] = node
                node = F.top()
                d.fs.attrs[thread.outattr] = node
            rule.mother.fs.attrs[thread.outattr] = node
        else:
            for d in carriers:   # island: no thread passes through
                d.fs.attrs[thread.inattr] = F.copy_fs(thread.empty)
                d.fs.attrs[thread.outattr] = F.copy_fs(thread.empty)


def _inject_defaults(cat, decl, is_rule_mother):
    """Overt-constituent defaults: anything not declared otherwise is a
    non-empty, non-WH category; lexical thread features pass through."""
    for attr, value in (("empty", "n"), ("wh", "n")):
        if attr in decl.features and attr not in cat.fs.attrs:
            cat.fs.attrs[attr] = F.atom(value)
    if not is_rule_mother:
        for thread in decl.threads:
            if cat.major in thread.cats and thread.inattr not in cat.fs.attrs \
                    and thread.outattr not in cat.fs.attrs:
                shared = F.top()
                cat.fs.attrs[thread.inattr] = shared
                cat.fs.attrs[thread.outattr] = shared


def _logical_lines(text):
    """Physical lines not starting a new directive continue the previous
    one, so rules can be written over several indented lines."""
    current = None
    start = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if raw[:1].isspace() and current is not None:
            current += " " + stripped
            continue
        if current is not None:
            yield start, current
        current, start = stripped, lineno
    if current is not None:
        yield start, current


def read_rules(text, decl, path="syntax"):
    rules = []
    seen = set()
    for lineno, line in _logical_lines(text):
        where = "%s:%d" % (path, lineno)
        if not line.startswith("rule "):
            raise GrammarError("%s: expected a rule" % where)
        try:
            head, body = line[5:].split(":", 1)
        except ValueError:
            raise GrammarError("%s: missing ':' after rule id" % where) from None
        rid = head.strip()
        if rid in seen:
            raise GrammarError("%s: duplicate rule id %r" % (where, rid))
        seen.add(rid)
        if "-->" not in body:
            raise GrammarError("%s: missing -->" % where)
        lhs, rhs = body.split("-->", 1)
        template = None
        if "; sem:" in rhs:
            rhs, template = rhs.split("; sem:", 1)
        env = {}
        mothers = _parse_category_seq(lhs, env, decl, where)
        if len(mothers) != 1:
            raise GrammarError("%s: exactly one mother category required" % where)
        mother = mothers[0]
        daughters = _parse_category_seq(rhs, env, decl, where)
        if template is not None:
            _attach_sem(mother, daughters, template, env, where)
        rule = GrammarRule(rid, mother, daughters)
        _wire_threads(rule, decl)
        _inject_defaults(mother, decl, is_rule_mother=True)
        for cat in [mother] + daughters:
            validate_fs(decl, cat.fs, "%s (rule %s)" % (where, rid))
        rule.gen_order = _generation_order(rule)
        rules.append(rule)
    return rules


def _generation_order(rule):
    """Daughter indices with semantic contributors first: solving them
    instantiates the shared variables the other daughters need."""
    sem = rule.mother.fs.attrs.get("sem")
    occurring = set()
    if sem is not None:
        nodes = set()

        def collect(n):
            n = F.deref(n)
            if id(n) in nodes:
                return
            nodes.add(id(n))
            if n.kind == F.COMPLEX:
                for child in n.attrs.values():
                    collect(child)

        collect(sem)
        for i, d in enumerate(rule.daughters):
            dsem = d.fs.attrs.get("sem")
            if dsem is not None and id(F.deref(dsem)) in nodes:
                occurring.add(i)
    order = [i for i in range(len(rule.daughters)) if i in occurring]
    order += [i for i in range(len(rule.daughters)) if i not in occurring]
    return tuple(order)


# ---------------------------------------------------------------------------
# Lexicon
# ---------------------------------------------------------------------------

_MACRO_HEAD = re.compile(r"macro\s+(\w+)\s*\(([^)]*)\)\s*:\s*$")
_USE_RE = re.compile(r"use\s+(\w+)\s*\(([^)]*)\)\s*$")


def read_lexicon(text, decl, path="lexicon"):
    """Returns (word entries, stem entries)."""
    words, stems = [], []
    macros = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i].strip()
        lineno = i + 1
        i += 1
        if not raw or raw.startswith("#"):
            continue
        where = "%s:%d" % (path, lineno)
        match = _MACRO_HEAD.match(raw)
        if match:
            name = match.group(1)
            params = [p.strip() for p in match.group(2).split(",") if p.strip()]
            body = []
            while i < len(lines) and lines[i].strip() != "end":
                body.append(lines[i])
                i += 1
            if i == len(lines):
                raise GrammarError("%s: macro %s has no 'end'" % (where, name))
            i += 1
            macros[name] = (params, body)
            continue
        match = _USE_RE.match(raw)
        if match:
            name, args = match.group(1), [a.strip() for a in match.group(2).split(",")]
            if name not in macros:
                raise GrammarError("%s: unknown macro %r" % (where, name))
            params, body = macros[name]
            if len(args) != len(params):
                raise GrammarError("%s: macro %s takes %d arguments, got %d"
                                   % (where, name, len(params), len(args)))
            for templ in body:
                line = templ
                for param, arg in zip(params, args):
                    line = line.replace("$" + param, arg)
                entry = _read_entry(line.strip(), decl, where + " (macro %s)" % name)
                if entry:
                    (words if entry.kind == "word" else stems).append(entry)
            continue
        entry = _read_entry(raw, decl, where)
        if entry:
            (words if entry.kind == "word" else stems).append(entry)
    by_form = {}
    for entry in words:
        by_form.setdefault(entry.form, []).append(entry)
    return by_form, stems


def _read_entry(line, decl, where):
    if not line or line.startswith("#"):
        return None
    kind = line.split(None, 1)[0]
    if kind not in ("lex", "stem"):
        raise GrammarError("%s: expected lex/stem/macro/use, got %r" % (where, kind))
    rest = line[len(kind):].strip()
    if ":" not in rest:
        raise GrammarError("%s: missing ':' after the form" % where)
    form, body = rest.split(":", 1)
    form = T.nfc(form.strip().replace("_", " "))
    if "; sem:" in body:
        body, template = body.split("; sem:", 1)
    else:
        template = None
    env = {}
    cats = _parse_category_seq(body, env, decl, where)
    if len(cats) != 1:
        raise GrammarError("%s: exactly one category per entry" % where)
    cat = cats[0]
    if template is not None:
        try:
            node = S.read_term(template.strip(), env)
        except S.TermError as exc:
            raise GrammarError("%s: bad sem: %s" % (where, exc)) from None
        if "sem" in cat.fs.attrs:
            if not F.unify_in_place(cat.fs.attrs["sem"], node):
                raise GrammarError("%s: sem conflicts with category" % where)
        else:
            cat.fs.attrs["sem"] = node
    if kind == "word":
        _inject_defaults(cat, decl, is_rule_mother=False)
    validate_fs(decl, cat.fs, where)
    return LexEntry(form, cat.major, cat.fs, kind="word" if kind == "lex" else "stem")


# ---------------------------------------------------------------------------
# Morphotax
# ---------------------------------------------------------------------------


def _role_patterns(text, where):
    """Scan 'stem [..] affix [..] ...' with balanced brackets."""
    out = []
    pos = 0
    while True:
        match = re.compile(r"\s*(stem|affix)\s*\[").match(text, pos)
        if not match:
            if text[pos:].strip():
                raise GrammarError("%s: cannot parse daughter at %r"
                                   % (where, text[pos:pos + 25]))
            return out
        depth = 0
        i = match.end() - 1
        while i < len(text):
            depth += text[i] == "["
            depth -= text[i] == "]"
            i += 1
            if depth == 0:
                break
        if depth != 0:
            raise GrammarError("%s: unbalanced brackets" % where)
        out.append((match.group(1), text[match.end() - 1:i]))
        pos = i


def read_morphotax(text, decl, path="morphotax"):
    """Returns (affix MorphemeEntries, production rules)."""
    affixes = []
    prules = []
    names = set()
    for lineno, line in _logical_lines(text):
        where = "%s:%d" % (path, lineno)
        if line.startswith("affix "):
            rest = line[6:]
            if ":" not in rest:
                raise GrammarError("%s: missing ':'" % where)
            form, fs_text = rest.split(":", 1)
            fs = _category_fs(F.read_fs(fs_text.strip(), {}))
            validate_fs(decl, fs, where)
            affixes.append(T.MorphemeEntry(T.nfc(form.strip()), fs))
        elif line.startswith("prule "):
            rest = line[6:]
            name, body = rest.split(":", 1)
            name = name.strip()
            if name in names:
                raise GrammarError("%s: duplicate production rule %r" % (where, name))
            names.add(name)
            if "->" not in body:
                raise GrammarError("%s: missing ->" % where)
            lhs, rhs = body.split("->", 1)
            env = {}
            mother = _category_fs(F.read_fs(lhs.strip(), env))
            daughters = []
            for role, fs_text in _role_patterns(rhs, where):
                daughters.append((role, _category_fs(F.read_fs(fs_text, env))))
            if sum(1 for role, _ in daughters if role == "stem") != 1:
                raise GrammarError("%s: exactly one stem daughter required" % where)
            validate_fs(decl, mother, where)
            prules.append(T.ProductionRule(name, mother, daughters))
        else:
            raise GrammarError("%s: expected affix/prule" % where)
    return affixes, prules


# ---------------------------------------------------------------------------
# Whole-pack compilation
# ---------------------------------------------------------------------------


def compile_grammar(lang, features_text, syntax_text, lexicon_text,
                    morphotax_text, morph_rules_text, sandhi_text):
    decl = read_features(features_text)
    rules = read_rules(syntax_text, decl)
    words, stems = read_lexicon(lexicon_text, decl)
    affixes, prules = read_morphotax(morphotax_text, decl)
    try:
        spelling = T.compile_spelling(morph_rules_text)
    except T.SpellingError as exc:
        raise GrammarError("morph-rules: %s" % exc) from None
    try:
        sandhi_rules = SA.compile_sandhi(sandhi_text)
    except (T.SpellingError, SA.SandhiError) as exc:
        raise GrammarError("sandhi: %s" % exc) from None

    reverse_wordcats = {major: cat for cat, major in decl.wordcats.items()}
    stem_morphemes = []
    for entry in stems:
        catval = reverse_wordcats.get(entry.major)
        if catval is None:
            raise GrammarError("stem %s: no wordcat mapping for %s"
                               % (entry.form, entry.major))
        feats = F.copy_fs(entry.fs)
        feats.attrs["cat"] = F.atom(catval)
        stem_morphemes.append(T.MorphemeEntry(entry.form, feats))
    lexaccess = T.LexiconAccess(stem_morphemes, affixes, prules)

    grammar = CompiledGrammar(
        lang=lang, decl=decl, rules=rules,
        rules_by_first={}, empty_rules=[],
        words=words, stems=stems, spelling=spelling, lexaccess=lexaccess,
        sandhi=sandhi_rules, fullforms={})
    for rule in rules:
        if rule.daughters:
            grammar.rules_by_first.setdefault(rule.daughters[0].major, []).append(rule)
        else:
            grammar.empty_rules.append(rule)
    _expand_fullforms(grammar, decl)
    return grammar


def _word_from_fs(decl, fs, where):
    catval = F.atom_value(F.get_path(fs, ["cat"])) if F.get_path(fs, ["cat"]) else None
    major = decl.wordcats.get(catval)
    if major is None:
        raise GrammarError("%s: word structure lacks a mapped cat value" % where)
    node = F.copy_fs(fs)
    cat = Category(major, node)
    _inject_defaults(cat, decl, is_rule_mother=False)
    return cat


def _expand_fullforms(grammar, decl):
    """Synthesize every stem through every admissible production rule so
    the generator can look inflected words up by their structures."""
    all_stems = [e for entries in grammar.lexaccess.entries.values()
                 for e in entries if not e.is_affix]
    all_affixes = [e for entries in grammar.lexaccess.entries.values()
                   for e in entries if e.is_affix]
    for prule in grammar.lexaccess.rules:
        n_affix = sum(1 for role, _ in prule.daughters if role == "affix")
        for stem in all_stems:
            combos = [[stem]]
            for _ in range(n_affix):
                combos = [c + [a] for c in combos for a in all_affixes]
            for combo in combos:
                mother = prule.apply(combo)
                if mother is None:
                    continue
                surfaces = T.synthesize_word(combo, grammar.spelling)
                for surface in surfaces:
                    cat = _word_from_fs(decl, mother, "fullform %s" % surface)
                    entry = LexEntry(surface, cat.major, cat.fs)
                    grammar.fullforms.setdefault(surface, []).append(entry)


def lexical_lookup(grammar, token):
    """Entries for one token: direct function-word hits plus
    morphological analyses of content words."""
    if token.kind in (SA.HYPHEN, SA.NOUN_HYPHEN):
        major = "Hyph" if token.kind == SA.HYPHEN else "NHyph"
        if major not in grammar.decl.categories:
            return []
        cat = Category(major, F.FSNode(F.COMPLEX, attrs={}))
        return [LexEntry(token.form, major, cat.fs)]
    form = T.nfc(token.form)
    out = []
    for entry in grammar.words.get(form, []):
        if "art" in token.tags and entry.major != "Det":
            continue
        out.append(entry)
    for _entries, mother in T.analyze_word(form, grammar.spelling, grammar.lexaccess):
        cat = _word_from_fs(grammar.decl, mother, "word %s" % form)
        if "art" in token.tags and cat.major != "Det":
            continue
        out.append(LexEntry(form, cat.major, cat.fs))
    return out
