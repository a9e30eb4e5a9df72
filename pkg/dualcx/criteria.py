import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from dualcx.complexes import SimplicialComplex, link
from dualcx.core.exceptions import InvalidInputError
from dualcx.homology import homology, is_connected
from dualcx.models import Ring

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CriterionReport:
    """A combined verdict with every clause kept separately"""
    name: str
    n: int
    clauses: Dict[str, bool] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.clauses.values())

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict[str, object]:
        return {"criterion": self.name, "n": self.n, "holds": self.holds, "clauses": dict(self.clauses)}


def _require(C: SimplicialComplex, n: int):
    if C.is_empty():
        raise InvalidInputError("criteria need a nonempty complex")
    if n < 0:
        raise InvalidInputError(f"n must be >= 0, got {n}")


def rational_singularity_criterion(C: SimplicialComplex, n: int) -> CriterionReport:
    """C is the dual complex of an isolated rational singularity of dimension n+1"""
    _require(C, n)
    betti = homology(C, Ring.Q).betti
    return CriterionReport(
        "rational_singularity",
        n,
        {
            "connected": is_connected(C),
            "dimension_at_most_n": C.dim <= n,
            "q_acyclic_above_zero": not any(betti[1:]),
        },
    )


def cartier_singularity_criterion(C: SimplicialComplex, n: int) -> CriterionReport:
    """C is realized by a singularity of dimension n+1 with Cartier canonical class"""
    _require(C, n)
    return CriterionReport(
        "cartier_singularity",
        n,
        {"connected": is_connected(C), "dimension_at_most_n": C.dim <= n},
    )


@dataclass(frozen=True)
class NefObstruction:
    ridge: Tuple[str, ...]
    top_cells: int

    @property
    def canonical_degree(self) -> int:
        # degree of K on a rational curve meeting top_cells smaller strata
        return self.top_cells - 2

    def to_dict(self) -> Dict[str, object]:
        return {"ridge": list(self.ridge), "top_cells": self.top_cells, "canonical_degree": self.canonical_degree}


def rational_nef_obstructions(C: SimplicialComplex) -> List[NefObstruction]:
    """Ridges in one or two top cells; their rational curve strata have K of degree -1 or 0"""
    if C.is_empty():
        raise InvalidInputError("criteria need a nonempty complex")
    d = C.dim
    if d < 1:
        return []
    counts = {ridge: 0 for ridge in C.cells_of_dim(d - 1)}
    for top in C.cells_of_dim(d):
        for i in range(len(top)):
            counts[top[:i] + top[i + 1:]] += 1
    return [NefObstruction(ridge, k) for ridge, k in counts.items() if k in (1, 2)]


@dataclass(frozen=True)
class VertexLocality:
    vertex: str
    link: SimplicialComplex
    neighbours: Tuple[str, ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            "vertex": self.vertex,
            "neighbours": list(self.neighbours),
            "link_facets": [list(f) for f in self.link.facets()],
        }


def vertex_locality(C: SimplicialComplex, v: str) -> VertexLocality:
    """Components meeting component v, read off the link of v"""
    if v not in C.vertices:
        raise InvalidInputError(f"unknown vertex {v!r}")
    lk = link(C, (v,))
    return VertexLocality(v, lk, lk.vertices)
