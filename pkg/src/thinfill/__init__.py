"""Exact computation with the tower of algebraic models of homotopy types:
simplicial sets, chain complexes, crossed complexes and simplicial
T-complexes, together with the adjunctions between them and the invariants
of strictification."""

from importlib import resources


def corpus_path(name: str):
    """Filesystem path of a bundled example document."""
    return resources.files(__name__) / "corpus" / f"{name}.txt"


__all__ = ["corpus_path"]
__version__ = "0.1.0"
