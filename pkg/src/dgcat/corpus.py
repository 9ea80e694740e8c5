"""The built-in example corpus: workspaces shipped with expected records."""

from __future__ import annotations

from importlib import resources

from .workspace import parse_workspace

CORPUS = ("disc_sphere", "a2", "two_cycle", "hull_k", "verdier_k")


def corpus_text(name: str) -> str:
    return resources.files("dgcat").joinpath("corpus_data", name + ".yaml").read_text(encoding="utf-8")


def corpus_workspace(name: str):
    return parse_workspace(corpus_text(name))


def run_corpus(names=CORPUS) -> dict:
    from .commands import run
    return {name: run(corpus_workspace(name)) for name in names}
