"""Locating and loading the shipped corpus of complexes and cycles.

Resolution order for a name: an existing path as given, the name plus
.json, then the same two inside the corpus directory (the CHARRIG_CORPUS
environment variable when set, else the files packaged with the library).
"""
from __future__ import annotations

import json
import os
from pathlib import Path

from .simplicial import Complex, ParseError, load_complex

CORPUS_NAMES = ("point", "interval", "s1", "s2", "t2", "rp2", "klein", "moore_z3")


def corpus_dir() -> Path:
    env = os.environ.get("CHARRIG_CORPUS")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "corpus"


def resolve(name: str, kind: str = "complex") -> Path:
    sub = corpus_dir() if kind == "complex" else corpus_dir() / "cycles"
    candidates = [Path(name), Path(str(name) + ".json"),
                  sub / name, sub / (str(name) + ".json")]
    for cand in candidates:
        if cand.is_file():
            return cand
    raise FileNotFoundError(f"no {kind} file found for {name!r}")


_loaded: dict = {}


def load(name: str) -> Complex:
    """Load a corpus complex by name or path, cached by resolved path."""
    path = resolve(name)
    key = str(path)
    if key not in _loaded:
        _loaded[key] = load_complex(path)
    return _loaded[key]


def load_cycle(name: str, cx: Complex):
    """Load a cycle file; returns (degree, coefficient vector on cx)."""
    path = resolve(name, kind="cycle")
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "degree" not in doc or "chain" not in doc:
        raise ParseError(f"cycle file {path} needs 'degree' and 'chain'")
    want = doc.get("complex")
    if want is not None and want != cx.name:
        raise ParseError(f"cycle file targets complex {want!r}, got {cx.name!r}")
    d = doc["degree"]
    vec = [0] * cx.n_simplices(d)
    for simplex, coef in doc["chain"]:
        vec[cx.simplex_index(tuple(simplex))] += int(coef)
    return d, vec
