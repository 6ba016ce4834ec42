"""Logical form -> surface strings, through the same grammar.

Top-down search from a start category whose sem is unified with the
goal term.  Daughters are solved semantic-contributors-first (the
compiler records that order per rule), so shared variables are
instantiated before the remaining daughters are enumerated; lexical
lookup runs over function words plus the synthesized full-form table,
so every licensed spelling variant (paye/paie) surfaces.  Output
strings are produced only by sandhi rendering.
"""

from dataclasses import dataclass

from . import featstruct as F
from . import grammar as G
from . import parser as P
from . import sandhi as SA
from . import semterm as S

DEFAULT_MAX_DEPTH = 12


class GenerationError(Exception):
    """Raised when the depth/result budget is exhausted."""


@dataclass
class _Budget:
    results: int


def _entries_by_major(grammar):
    cache = getattr(grammar, "_gen_lexicon", None)
    if cache is None:
        cache = {}
        for table in (grammar.words, grammar.fullforms):
            for form, entries in table.items():
                for entry in entries:
                    cache.setdefault(entry.major, []).append(entry)
        grammar._gen_lexicon = cache
    return cache


def _gen_cat(grammar, major, goal, depth, budget):
    """Yields (token tuple, result structure) realizing one category."""
    for entry in _entries_by_major(grammar).get(major, []):
        got = F.unify(entry.fs, goal)
        if got is not None:
            yield (entry.token(),), got
    for rule in grammar.empty_rules:
        if rule.mother.major != major:
            continue
        got = F.unify(rule.mother.fs, goal)
        if got is not None:
            yield (), got
    if depth <= 0:
        return
    for rule in grammar.rules:
        if rule.mother.major != major or not rule.daughters:
            continue
        memo = {}
        mother = F.copy_fs(rule.mother.fs, memo)
        dtrs = [F.copy_fs(d.fs, memo) for d in rule.daughters]
        if not F.unify_in_place(mother, F.copy_fs(goal)):
            continue
        state = [(mother, dtrs, {})]
        for index in rule.gen_order:
            grown = []
            for st_mother, st_dtrs, toks in state:
                need = F.copy_fs(st_dtrs[index])
                for dtokens, dfs in _gen_cat(grammar, rule.daughters[index].major,
                                             need, depth - 1, budget):
                    memo2 = {}
                    m2 = F.copy_fs(st_mother, memo2)
                    d2 = [F.copy_fs(d, memo2) for d in st_dtrs]
                    if not F.unify_in_place(d2[index], F.copy_fs(dfs)):
                        continue
                    if F.is_cyclic(m2):
                        continue
                    toks2 = dict(toks)
                    toks2[index] = dtokens
                    grown.append((m2, d2, toks2))
                    if len(grown) > budget.results:
                        raise GenerationError("generation result budget exceeded")
            state = grown
            if not state:
                break
        for st_mother, _dtrs, toks in state:
            tokens = tuple(t for i in range(len(rule.daughters)) for t in toks[i])
            yield tokens, F.copy_fs(st_mother)


def generate(sem, grammar, max_depth=DEFAULT_MAX_DEPTH, max_results=400):
    """Surface strings realizing a closed logical form, deduplicated;
    empty set when the term is unrealizable."""
    if isinstance(sem, str):
        sem = S.read_term(sem)
    budget = _Budget(results=max_results)
    out = set()
    for major, start_fs in grammar.starts:
        goal = F.copy_fs(start_fs)
        if "sem" not in goal.attrs:
            goal.attrs["sem"] = F.top()
        if not F.unify_in_place(goal.attrs["sem"], F.copy_fs(sem)):
            continue
        goal = F.copy_fs(F.deref(goal))
        for tokens, _fs in _gen_cat(grammar, major, goal, max_depth, budget):
            text = SA.render_surface(tokens, grammar.sandhi)
            if text:
                out.add(text[0].upper() + text[1:])
    return out


def roundtrip_check(text, grammar, max_depth=DEFAULT_MAX_DEPTH):
    """True iff some reading of `text` generates `text` back."""
    analyses = P.parse(text, grammar)
    if not analyses:
        raise ValueError("roundtrip_check requires text that parses: %r" % text)
    body, _flag = SA.strip_punctuation(text)
    target = body[0].upper() + body[1:] if body else body
    for sem_text in P.sem_strings(analyses):
        if target in generate(sem_text, grammar, max_depth=max_depth):
            return True
    return False
