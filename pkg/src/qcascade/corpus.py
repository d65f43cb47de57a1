"""Bundled benchmark circuits."""
from __future__ import annotations

from importlib import resources

from .circuit import QCircuit
from .qasm import parse_qasm


def corpus_names() -> list[str]:
    root = resources.files("qcascade.data.corpus")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".qasm"))


def load(name: str) -> QCircuit:
    text = resources.files("qcascade.data.corpus").joinpath(f"{name}.qasm").read_text()
    return parse_qasm(text, name)


def load_all() -> list[QCircuit]:
    return [load(n) for n in corpus_names()]
