import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from dualcx.arrangement import Arrangement, build_arrangement, initial_dual_complex, stratum_dimension
from dualcx.complexes import (
    Cell,
    CellLike,
    FVector,
    SimplicialComplex,
    as_cell,
    f_vector,
    isomorphic,
    stellar_subdivision,
)
from dualcx.core.config import Config
from dualcx.core.exceptions import CertificationError, EmbeddingError, InvalidInputError
from dualcx.homology import HomologyProfile, homology
from dualcx.models import EMPTY, BlowupKind, IsoMode
from dualcx.storage import complex_to_dict
from dualcx.utils import format_cell, sorted_cells

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CenterRecord:
    """Ledger entry for one blown-up stratum"""
    cell: Tuple[str, ...]
    stratum_dimension: int
    earlier_centers: int  # earlier centers whose linear space lies inside this one

    @property
    def rationality(self) -> str:
        return f"linear space of dimension {self.stratum_dimension} blown up {self.earlier_centers} times"

    def to_dict(self) -> Dict[str, object]:
        return {
            "cell": list(self.cell),
            "stratum_dimension": self.stratum_dimension,
            "earlier_centers": self.earlier_centers,
            "rationality": self.rationality,
        }


@dataclass(frozen=True)
class BlowupStep:
    r: int
    kind: BlowupKind
    centers: Tuple[Tuple[str, ...], ...]
    cells_removed: int
    f_before: FVector
    f_after: FVector
    center_dimension: int
    ledger: Tuple[CenterRecord, ...] = ()

    def to_dict(self) -> Dict[str, object]:
        return {
            "r": self.r,
            "kind": self.kind.value,
            "centers": [list(c) for c in self.centers],
            "cells_removed": self.cells_removed,
            "f_before": list(self.f_before.counts),
            "f_after": list(self.f_after.counts),
            "center_dimension": self.center_dimension,
            "ledger": [record.to_dict() for record in self.ledger],
        }


class SncModel:
    """Surviving strata of an snc configuration, keyed by the components meeting there"""

    def __init__(
        self,
        labels: Iterable[str],
        n: int,
        strata: Iterable[CellLike],
        history: Sequence[BlowupStep] = (),
    ):
        self.labels: Tuple[str, ...] = tuple(sorted(labels))
        self.n = n
        self.strata: FrozenSet[Cell] = frozenset(as_cell(J) for J in strata)
        self.history: Tuple[BlowupStep, ...] = tuple(history)

        known = set(self.labels)
        for J in self.strata:
            if not J <= known:
                raise InvalidInputError(f"stratum {format_cell(J)} mentions unknown components")
            if len(J) > n + 1:
                raise InvalidInputError(f"stratum {format_cell(J)} exceeds dimension {n}")
        for label in self.labels:
            if frozenset((label,)) not in self.strata:
                raise InvalidInputError(f"component {label!r} has no stratum")
        # constructing the complex checks closure under subsets
        self._complex = SimplicialComplex(self.labels, self.strata)

    def replace(self, strata: Iterable[CellLike], step: BlowupStep, labels: Optional[Iterable[str]] = None) -> "SncModel":
        return SncModel(labels if labels is not None else self.labels, self.n, strata, self.history + (step,))

    def __repr__(self) -> str:
        return f"SncModel(n={self.n}, components={len(self.labels)}, f={f_vector(self._complex)})"


def dual_complex(M: SncModel) -> SimplicialComplex:
    """One vertex per component, one (|J|-1)-cell per surviving stratum J"""
    return M._complex


def initial_model(A: Arrangement) -> SncModel:
    """The union of the arrangement's hyperplanes"""
    return SncModel(A.labels, A.n, initial_dual_complex(A).cells)


@dataclass(frozen=True)
class EmbeddingReport:
    embeds: bool
    witness: Optional[Tuple[str, ...]] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.embeds


def check_embedding(C: SimplicialComplex, M: SncModel, r: int) -> EmbeddingReport:
    """C sits inside the dual complex of M and agrees with it from dimension n-r+1 up"""
    if set(C.vertices) != set(M.labels):
        stray = sorted(set(C.vertices) ^ set(M.labels))
        return EmbeddingReport(False, tuple(stray), "vertex sets differ")

    for cell in C.ordered_cells():
        if frozenset(cell) not in M.strata:
            return EmbeddingReport(False, cell, "cell of the input is not a stratum")

    threshold = M.n - r + 1
    for J in sorted(tuple(sorted(J)) for J in M.strata if len(J) - 1 >= threshold):
        if J not in C:
            return EmbeddingReport(False, J, f"stratum of dimension >= {threshold} is not a cell of the input")
    return EmbeddingReport(True)


def _require_step(M: SncModel, r: int):
    if not 0 <= r < M.n:
        raise InvalidInputError(f"step r={r} outside 0..{M.n - 1}")


def excess_cells(M: SncModel, C: SimplicialComplex, r: int) -> List[Tuple[str, ...]]:
    """Strata with n-r+1 components that do not span a cell of C"""
    _require_step(M, r)
    report = check_embedding(C, M, r)
    if not report:
        raise EmbeddingError(f"embedding fails before step {r}: {report.reason}", witness=report.witness)

    size = M.n - r + 1
    excess = sorted(tuple(sorted(J)) for J in M.strata if len(J) == size and J not in C.cells)
    current = dual_complex(M)
    for J in excess:
        if len(current.star(J)) != 1:
            raise CertificationError(f"center {format_cell(J)} is not a maximal cell", witness=list(J))
    return excess


def _ledger(
    centers: Sequence[Tuple[str, ...]],
    history: Sequence[BlowupStep],
    A: Optional[Arrangement],
) -> Tuple[CenterRecord, ...]:
    earlier = [frozenset(c) for step in history if step.kind is BlowupKind.STRATUM for c in step.centers]
    records = []
    for J in centers:
        cell = frozenset(J)
        if A is not None:
            dimension = stratum_dimension(A, J)
            if dimension is EMPTY:
                raise CertificationError(f"center {format_cell(J)} has an empty linear stratum", witness=list(J))
        else:
            dimension = -1
        records.append(CenterRecord(J, dimension, sum(1 for K in earlier if cell < K)))
    return tuple(records)


def blowup_step(
    M: SncModel,
    C: SimplicialComplex,
    r: int,
    arrangement: Optional[Arrangement] = None,
) -> SncModel:
    """Blow up the disjoint minimal strata indexed by the excess cells of size n-r+1"""
    centers = excess_cells(M, C, r)
    before = dual_complex(M)

    strata = set(M.strata)
    removed = 0
    for J in centers:
        doomed = before.star(J)
        if len(doomed) != 1:
            raise CertificationError(f"center {format_cell(J)} is not maximal", witness=list(J))
        strata -= doomed
        removed += len(doomed)

    step = BlowupStep(
        r=r,
        kind=BlowupKind.STRATUM,
        centers=tuple(centers),
        cells_removed=removed,
        f_before=f_vector(before),
        f_after=f_vector(SimplicialComplex(M.labels, strata)),
        center_dimension=r,
        ledger=_ledger(centers, M.history, arrangement),
    )
    logger.info(f"Step r={r}: blowing up {len(centers)} centers of dimension {r}")
    result = M.replace(strata, step)

    report = check_embedding(C, result, r + 1)
    if not report:
        raise EmbeddingError(f"cells of dimension >= {M.n - r} disagree after step {r}: {report.reason}", witness=report.witness)
    return result


def ambient_blowup(M: SncModel, J: CellLike, exceptional_label: str) -> SncModel:
    """Blow up a stratum of the ambient pair; the exceptional divisor joins the boundary"""
    cell = as_cell(J)
    before = dual_complex(M)
    if cell not in before.cells:
        raise InvalidInputError(f"{format_cell(cell)} is not a stratum")
    if exceptional_label in M.labels:
        raise InvalidInputError(f"label {exceptional_label!r} already names a component")

    after = stellar_subdivision(before, cell, exceptional_label)
    centers = (tuple(sorted(cell)),)
    step = BlowupStep(
        r=len(M.history),
        kind=BlowupKind.AMBIENT,
        centers=centers,
        cells_removed=len(before.star(cell)),
        f_before=f_vector(before),
        f_after=f_vector(after),
        center_dimension=M.n + 1 - len(cell),
        ledger=_ledger(centers, M.history, None),
    )
    logger.info(f"Ambient blow-up of {format_cell(cell)}, exceptional divisor {exceptional_label}")
    return M.replace(after.cells, step, after.vertices)


@dataclass
class BlowupTrace:
    """Everything run_construction did, in a reproducible order"""
    input_complex: SimplicialComplex
    arrangement: Arrangement
    steps: List[BlowupStep] = field(default_factory=list)
    final: Optional[SimplicialComplex] = None
    certified: bool = False
    homology_input: Optional[HomologyProfile] = None
    homology_final: Optional[HomologyProfile] = None

    @property
    def homology_agrees(self) -> Optional[bool]:
        if self.homology_input is None or self.homology_final is None:
            return None
        return self.homology_input == self.homology_final

    def to_dict(self) -> Dict[str, object]:
        certificate: Dict[str, object] = {"labeled_isomorphic": self.certified}
        if self.homology_input is not None:
            certificate["homology_match"] = self.homology_agrees
            certificate["homology_input"] = self.homology_input.to_dict()
            certificate["homology_final"] = self.homology_final.to_dict()
        return {
            "input": {**complex_to_dict(self.input_complex), "f_vector": list(f_vector(self.input_complex).counts)},
            "arrangement": self.arrangement.to_dict(),
            "steps": [step.to_dict() for step in self.steps],
            "final": {**complex_to_dict(self.final), "f_vector": list(f_vector(self.final).counts)} if self.final else None,
            "certificate": certificate,
        }


def run_construction(
    C: SimplicialComplex,
    n: Optional[int] = None,
    nodes: Optional[Sequence] = None,
    cross_check: Optional[bool] = None,
) -> BlowupTrace:
    """Realize C as the dual complex of an iterated blow-up of a hyperplane arrangement"""
    if C.is_empty():
        raise InvalidInputError("cannot realize the empty complex")
    n = C.dim if n is None else n
    if n < C.dim:
        raise InvalidInputError(f"ambient dimension n={n} is below dim C={C.dim}")
    cross_check = Config.HOMOLOGY_CROSS_CHECK if cross_check is None else cross_check

    A = build_arrangement(C.vertices, n, nodes)
    model = initial_model(A)
    trace = BlowupTrace(input_complex=C, arrangement=A)
    logger.info(f"Realizing {C!r} with {len(A.labels)} hyperplanes in P^{A.ambient_dim}")

    for r in range(n):
        model = blowup_step(model, C, r, A)
        trace.steps.append(model.history[-1])

    trace.final = dual_complex(model)
    trace.certified = bool(isomorphic(trace.final, C, IsoMode.LABELED))
    if not trace.certified:
        stray = sorted_cells(trace.final.cells ^ C.cells)
        logger.error(f"Final dual complex differs from the input on {len(stray)} cells")

    if cross_check:
        trace.homology_input = homology(C)
        trace.homology_final = homology(trace.final)
        if not trace.homology_agrees:
            logger.error("Homology of the final dual complex differs from the input")
            trace.certified = False
    return trace
