"""Bottom-up chart parser: surface text -> analyses (tree + logical form).

Tokenization delegates to the sandhi segmenter; every candidate token
sequence is parsed independently and the analyses are unioned.  Edges
are packed by span, category structure and derivation, and gaps are
zero-width edges seeded at every position, so WH movement, clitic
placement and verb fronting all fall out of rule application.  The
chart is exhaustive within an edge cap; exceeding the cap raises
ParseResourceError, which callers must distinguish from "no parse".
"""

from collections import deque
from dataclasses import dataclass

from . import featstruct as F
from . import grammar as G
from . import sandhi as SA
from . import semterm as S

DEFAULT_MAX_EDGES = 50000

_FLAG_WRAPPERS = {
    "question": ("ynq", "whq"),
    "statement": ("decl", "imp"),
    "exclaim": ("imp", "decl"),
}


class ParseResourceError(Exception):
    """Edge cap exceeded; reported distinctly from an empty parse."""


@dataclass(frozen=True)
class Edge:
    start: int
    end: int
    major: str
    fs: object
    rule_id: str
    children: tuple      # Edges, or a token form string for lexical leaves
    canon: str

    def is_leaf(self):
        return self.rule_id.startswith("lex:")


@dataclass
class _Active:
    rule: object
    mother: object
    dtrs: list
    next: int
    start: int
    end: int
    children: tuple


@dataclass
class Analysis:
    tokens: tuple
    edge: Edge
    root_fs: object
    sem: object

    def tree_string(self):
        return _tree_string(self.edge)

    def bracket_string(self):
        return _bracket_string(self.edge)

    def gap_inventory(self):
        """(major, position) of every empty constituent, in tree order."""
        out = []

        def walk(edge):
            if edge.is_leaf():
                return
            if not edge.children:
                out.append((edge.major, edge.start))
                return
            for child in edge.children:
                if isinstance(child, Edge):
                    walk(child)

        walk(self.edge)
        return out


def _tree_string(edge):
    if edge.is_leaf():
        return edge.children[0]
    inner = " ".join(_tree_string(c) for c in edge.children)
    return "(%s%s)" % (edge.rule_id, " " + inner if inner else "")


def _bracket_string(edge):
    if edge.is_leaf():
        return edge.children[0]
    inner = " ".join(_bracket_string(c) for c in edge.children)
    return "[%s]_%s" % (inner, edge.major)


def tokenize(text, grammar):
    """(candidate token sequences, sentence flag)."""
    _body, flag = SA.strip_punctuation(text)
    return SA.segment_surface(text, grammar.sandhi), flag


class _Chart:
    def __init__(self, grammar, budget):
        self.grammar = grammar
        self.budget = budget
        self.agenda = deque()
        self.passives = {}
        self.actives = {}
        self.seen = set()
        self.complete = []

    def add_edge(self, start, end, major, fs, rule_id, children):
        canon = F.write_fs(fs)
        sig = (start, end, major, canon,
               tuple(id(c) if isinstance(c, Edge) else c for c in children))
        if sig in self.seen:
            return
        self.seen.add(sig)
        self.budget[0] -= 1
        if self.budget[0] < 0:
            raise ParseResourceError("edge cap exceeded")
        self.agenda.append(Edge(start, end, major, fs, rule_id, children, canon))

    def run(self, n):
        while self.agenda:
            edge = self.agenda.popleft()
            self.passives.setdefault((edge.start, edge.major), []).append(edge)
            if edge.start == 0 and edge.end == n:
                self.complete.append(edge)
            for rule in self.grammar.rules_by_first.get(edge.major, []):
                memo = {}
                mother = F.copy_fs(rule.mother.fs, memo)
                dtrs = [F.copy_fs(d.fs, memo) for d in rule.daughters]
                self._try(rule, mother, dtrs, 0, edge.start, edge)
            for active in list(self.actives.get((edge.start, edge.major), [])):
                self._extend(active, edge)

    def _try(self, rule, mother, dtrs, next_i, start, edge):
        if not F.unify_in_place(dtrs[next_i], F.copy_fs(edge.fs)):
            return
        self._advance(rule, mother, dtrs, next_i + 1, start, edge.end,
                      (edge,) if next_i == 0 else None)

    def _advance(self, rule, mother, dtrs, next_i, start, end, children):
        if next_i == len(dtrs):
            result = F.deref(mother)
            if F.is_cyclic(result):
                return
            self.add_edge(start, end, rule.mother.major, F.copy_fs(result),
                          rule.rid, children)
            return
        active = _Active(rule, mother, dtrs, next_i, start, end, children)
        need = rule.daughters[next_i].major
        self.actives.setdefault((end, need), []).append(active)
        for passive in list(self.passives.get((end, need), [])):
            self._extend(active, passive)

    def _extend(self, active, edge):
        memo = {}
        mother = F.copy_fs(active.mother, memo)
        dtrs = [F.copy_fs(d, memo) for d in active.dtrs]
        if not F.unify_in_place(dtrs[active.next], F.copy_fs(edge.fs)):
            return
        self._advance(active.rule, mother, dtrs, active.next + 1,
                      active.start, edge.end, active.children + (edge,))


def parse_tokens(tokens, grammar, flag=None, budget=None, roots=None):
    """Analyses of one token sequence."""
    tokens = tuple(tokens)
    if budget is None:
        budget = [DEFAULT_MAX_EDGES]
    chart = _Chart(grammar, budget)
    n = len(tokens)
    found_word = False
    for i, tok in enumerate(tokens):
        for entry in G.lexical_lookup(grammar, tok):
            found_word = True
            chart.add_edge(i, i + 1, entry.major, entry.fs,
                           "lex:" + entry.form, (tok.form,))
    if n and not found_word:
        return []
    for i in range(n + 1):
        for rule in grammar.empty_rules:
            chart.add_edge(i, i, rule.mother.major, rule.mother.fs, rule.rid, ())
    chart.run(n)
    return _collect(chart.complete, tokens, grammar, flag, roots)


def _collect(edges, tokens, grammar, flag, roots):
    wanted = _FLAG_WRAPPERS.get(flag)
    starts = roots if roots is not None else grammar.starts
    analyses = []
    seen = set()
    for edge in edges:
        for major, start_fs in starts:
            if edge.major != major:
                continue
            unified = F.unify(edge.fs, start_fs)
            if unified is None:
                continue
            sem = F.get_path(unified, ["sem"])
            if wanted is not None:
                if sem is None or S.wrapper_of(sem) not in wanted:
                    continue
            key = (_tree_string(edge), S.write_term(sem) if sem is not None else "")
            if key in seen:
                continue
            seen.add(key)
            analyses.append(Analysis(tokens, edge, unified, sem))
    return analyses


def parse(text, grammar, max_edges=DEFAULT_MAX_EDGES, roots=None):
    """All analyses of a sentence, across all token segmentations."""
    seqs, flag = tokenize(text, grammar)
    budget = [max_edges]
    analyses = []
    seen = set()
    for seq in seqs:
        for analysis in parse_tokens(seq, grammar, flag, budget, roots):
            key = (analysis.tree_string(),
                   S.write_term(analysis.sem) if analysis.sem is not None else "")
            if key not in seen:
                seen.add(key)
                analyses.append(analysis)
    return analyses


def semantics_of(analysis):
    return analysis.sem


def sem_strings(analyses):
    """Canonical logical-form texts, deduplicated modulo renaming."""
    return sorted({S.write_term(a.sem) for a in analyses if a.sem is not None})
