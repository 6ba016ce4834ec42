"""Inter-word spelling effects: elision, contraction, `cet`-reduction,
pseudo-consonant deletion and verb/clitic hyphens.

Rendering turns a lexical token sequence into surface text; segmentation
inverts it.  The spelling effects themselves are two-level rules over a
token stream in which `##` separates words (realized as a space by
default); the preposition/article contraction table (de+le -> du, ...)
is data.  Vowel elision takes precedence over contraction: a contraction
is skipped whenever the article would elide against the following word.

Segmentation proposes a bounded set of token-sequence candidates per
apostrophe, hyphen or contraction site and keeps exactly those whose
rendering reproduces the input, so the two directions cannot drift
apart.  Ambiguity (l' -> le or la) is preserved for the parser.
"""

import itertools
from dataclasses import dataclass, field

from . import twolevel as T
from .twolevel import BOUNDARY, nfc

WORD = "word"
HYPHEN = "hyphen"
NOUN_HYPHEN = "noun-hyphen"
MWU = "multiword-unit"

# surface text of the verb/clitic hyphen's underlying form
HYPHEN_LEXICAL = "-t-"

_TERMINAL_FLAGS = {"?": "question", "!": "exclaim", ".": "statement"}


class SandhiError(Exception):
    pass


@dataclass(frozen=True)
class LexToken:
    form: str
    kind: str = WORD
    tags: frozenset = frozenset()

    def lexical_form(self):
        if self.kind == HYPHEN:
            return HYPHEN_LEXICAL
        return self.form


VERB_HYPHEN = LexToken("-", HYPHEN)
NOUN_JOINER = LexToken("-", NOUN_HYPHEN)


@dataclass
class SandhiRules:
    compiled: object                       # twolevel.CompiledSpelling
    contractions: dict = field(default_factory=dict)   # (w1, w2) -> merged
    expansions: dict = field(default_factory=dict)     # merged -> (w1, w2)
    elidable: list = field(default_factory=list)
    multiwords: list = field(default_factory=list)     # forms with spaces
    hashwords: set = field(default_factory=set)        # '#onze', '#un'
    articles: set = field(default_factory=set)

    def vowel_initial(self, form):
        vowels = self.compiled.classes.get("VS", frozenset())
        return bool(form) and form[0] in vowels


def compile_sandhi(text):
    """Sandhi files share the spelling-rule format plus the directives
    `contract`, `elidable`, `multiword`, `hashword` and `articles`."""
    spelling_lines = []
    rules = SandhiRules(compiled=None)
    for raw in nfc(text).splitlines():
        line = raw.strip()
        head = line.split(None, 1)[0] if line else ""
        if head == "contract":
            parts = line.split()
            if len(parts) != 4:
                raise SandhiError("bad contract line: %r" % line)
            _, w1, w2, merged = parts
            rules.contractions[(w1, w2)] = merged
            rules.expansions[merged] = (w1, w2)
        elif head == "elidable":
            rules.elidable.extend(line.split()[1:])
        elif head == "multiword":
            rules.multiwords.append(" ".join(line.split()[1:]))
        elif head == "hashword":
            rules.hashwords.update(line.split()[1:])
        elif head == "articles":
            rules.articles.update(line.split()[1:])
        else:
            spelling_lines.append(raw)
    rules.compiled = T.compile_spelling("\n".join(spelling_lines))
    return rules


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _would_elide(rules, form, next_form):
    outs = T.surface_realizations(
        _symbols([LexToken(form), LexToken(next_form)]), rules.compiled)
    return any("'" in out for out in outs)


def _contract(tokens, rules):
    out = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        nxt = tokens[i + 1] if i + 1 < len(tokens) else None
        if (nxt is not None and nxt.kind == WORD
                and ("art" in nxt.tags or not nxt.tags)
                and (tok.form, nxt.form) in rules.contractions):
            merged = rules.contractions[(tok.form, nxt.form)]
            follower = tokens[i + 2] if i + 2 < len(tokens) else None
            elides = (follower is not None
                      and _would_elide(rules, nxt.form, follower.lexical_form()))
            if not elides:
                out.append(LexToken(merged, WORD))
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def _symbols(tokens):
    forms = []
    for i, tok in enumerate(tokens):
        if i:
            forms.append(BOUNDARY)
        forms.append(nfc(tok.lexical_form()))
    symbols, _ = T.lexical_symbols(forms)
    return symbols


def render_surface(tokens, rules):
    """Deterministic surface text of a token sequence."""
    tokens = list(tokens)
    if not tokens:
        return ""
    stream = _contract(tokens, rules)
    outs = T.surface_realizations(_symbols(stream), rules.compiled)
    if len(outs) != 1:
        raise SandhiError("rendering of %s is not deterministic: %r"
                          % ([t.form for t in tokens], sorted(outs)))
    return outs.pop().strip()


# ---------------------------------------------------------------------------
# Segmentation
# ---------------------------------------------------------------------------


def strip_punctuation(text):
    """(body, sentence flag).  Terminal ?/!/. set the flag; inverted
    Spanish marks are dropped."""
    body = nfc(text).strip()
    flag = None
    while body and body[-1] in _TERMINAL_FLAGS:
        flag = flag or _TERMINAL_FLAGS[body[-1]]
        body = body[:-1].rstrip()
    body = body.lstrip("¿¡ ")
    return body, flag


def _atomize(body):
    """Whitespace words, then a split after every apostrophe
    ("l'homme" -> "l'", "homme")."""
    atoms = []
    for word in body.split():
        while "'" in word[:-1]:
            cut = word.index("'") + 1
            atoms.append(word[:cut])
            word = word[cut:]
        atoms.append(word)
    return atoms


def _hyphen_variants(parts):
    """Token sequences for a hyphenated written word; a medial 't' part
    may be the linking t of a verb/clitic hyphen."""
    if len(parts) == 1:
        return [[LexToken(parts[0])]]
    out = []
    for rest in _hyphen_variants(parts[1:]):
        out.append([LexToken(parts[0]), VERB_HYPHEN] + rest)
        out.append([LexToken(parts[0]), NOUN_JOINER] + rest)
    if parts[1] == "t" and len(parts) > 2:
        for rest in _hyphen_variants(parts[2:]):
            out.append([LexToken(parts[0]), VERB_HYPHEN] + rest)
    return out


def _atom_candidates(atom, rules, initial):
    variants = [atom]
    if initial and atom and atom[0].isupper():
        folded = atom[0].lower() + atom[1:]
        if folded != atom:
            variants.append(folded)
    seqs = []
    for v in variants:
        if v == "-":
            seqs.append([VERB_HYPHEN])
            seqs.append([NOUN_JOINER])
            continue
        if v == "--":
            seqs.append([NOUN_JOINER])
            continue
        if v.endswith("'"):
            for form in rules.elidable:
                if form[:-1] + "'" == v:
                    seqs.append([LexToken(form)])
            continue
        if v in rules.expansions:
            first, second = rules.expansions[v]
            seqs.append([LexToken(first), LexToken(second, tags=frozenset(["art"]))])
        if "-" in v.strip("-"):
            seqs.extend(_hyphen_variants(v.split("-")))
        seqs.append([LexToken(v)])
        if "#" + v in rules.hashwords:
            seqs.append([LexToken("#" + v)])
    return seqs


def _multiword_matches(atoms, i, rules, initial):
    """Multiword units starting at atom i, with the unit's final word
    possibly elided; yields (token, atoms consumed)."""
    for form in rules.multiwords:
        words = form.split()
        n = len(words)
        window = atoms[i:i + n]
        if len(window) < n:
            continue
        if initial and window and window[0] and window[0][0].isupper():
            window = [window[0][0].lower() + window[0][1:]] + window[1:]
        if window == words:
            yield LexToken(form, MWU), n
        elif (window[:-1] == words[:-1]
              and window[-1] == words[-1][:-1] + "'"):
            yield LexToken(form, MWU), n


def segment_surface(text, rules, limit=500):
    """All token sequences whose rendering reproduces `text` (modulo
    sentence-initial capitalization and terminal punctuation)."""
    body, _flag = strip_punctuation(text)
    if not body:
        return []
    atoms = _atomize(body)
    candidates = []

    def scan(i, acc):
        if len(candidates) >= limit:
            return
        if i == len(atoms):
            candidates.append(tuple(acc))
            return
        for token, used in _multiword_matches(atoms, i, rules, initial=(i == 0)):
            scan(i + used, acc + [token])
        for seq in _atom_candidates(atoms[i], rules, initial=(i == 0)):
            scan(i + 1, acc + seq)

    scan(0, [])

    target = _fold_first(" ".join(atoms))
    kept = []
    seen = set()
    for cand in candidates:
        try:
            rendered = render_surface(cand, rules)
        except SandhiError:
            continue
        if _fold_first(rendered) == target:
            key = tuple((t.form, t.kind) for t in cand)
            if key not in seen:
                seen.add(key)
                kept.append(cand)
    return kept


def _fold_first(text):
    # apostrophes glue words back together for comparison with renderings
    joined = " ".join(part for part in text.replace("' ", "'").split())
    return joined[0].lower() + joined[1:] if joined else joined


def tokens_from_text(text, rules):
    """Token sequence from the plain notation used by the CLI and corpus
    files: '-' verb/clitic hyphen, '--' noun joiner, '_' for spaces
    inside a multiword unit; articles get their 'art' tag."""
    tokens = []
    for chunk in nfc(text).split():
        if chunk == "-":
            tokens.append(VERB_HYPHEN)
        elif chunk == "--":
            tokens.append(NOUN_JOINER)
        else:
            form = chunk.replace("_", " ")
            kind = MWU if " " in form else WORD
            tags = frozenset(["art"]) if form in rules.articles else frozenset()
            tokens.append(LexToken(form, kind, tags))
    return tokens
