"""Language-pack loading.

A pack is a directory of seven files: features, syntax, lexicon,
morph-rules, morphotax, sandhi and corpus.  Packs for French (fr) and
Spanish (es) ship inside the package; the environment variable
LINGWARE_PACK_DIR overrides the location (it must contain fr/ and
es/ subdirectories).
"""

import os
from functools import lru_cache

from .grammar import compile_grammar

PACK_FILES = ("features", "syntax", "lexicon", "morph-rules",
              "morphotax", "sandhi", "corpus")

_HERE = os.path.dirname(os.path.abspath(__file__))


def pack_dir(lang):
    root = os.environ.get("LINGWARE_PACK_DIR") or os.path.join(_HERE, "packs")
    return os.path.join(root, lang)


def _read(path):
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def load_pack(lang, directory=None):
    directory = directory or pack_dir(lang)
    texts = {}
    for name in PACK_FILES:
        path = os.path.join(directory, name)
        if not os.path.exists(path) and name == "corpus":
            texts[name] = ""
            continue
        texts[name] = _read(path)
    grammar = compile_grammar(
        lang,
        features_text=texts["features"],
        syntax_text=texts["syntax"],
        lexicon_text=texts["lexicon"],
        morphotax_text=texts["morphotax"],
        morph_rules_text=texts["morph-rules"],
        sandhi_text=texts["sandhi"],
    )
    grammar.corpus_path = os.path.join(directory, "corpus")
    return grammar


@lru_cache(maxsize=4)
def _cached(lang, directory):
    return load_pack(lang, directory or None)


def load_french(directory=None):
    return _cached("fr", directory)


def load_spanish(directory=None):
    return _cached("es", directory)
