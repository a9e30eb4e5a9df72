import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from dualcx.complexes import SimplicialComplex, full_skeleton
from dualcx.core.config import Config
from dualcx.core.exceptions import CertificationError, InvalidInputError
from dualcx.models import EMPTY, StratumKind
from dualcx.utils import format_cell, format_fraction, sorted_cells

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, str]


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of exact fractions"""
    rows: int
    cols: int
    entries: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]], cols: Optional[int] = None) -> "RationalMatrix":
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        width = cols if cols is not None else (len(data[0]) if data else 0)
        if any(len(row) != width for row in data):
            raise InvalidInputError("ragged matrix rows")
        return cls(len(data), width, data)

    def _domain_matrix(self) -> DomainMatrix:
        return DomainMatrix(
            [[QQ(x.numerator, x.denominator) for x in row] for row in self.entries],
            (self.rows, self.cols),
            QQ,
        )

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return self._domain_matrix().rank()

    def nullspace(self) -> List[Tuple[Fraction, ...]]:
        """Basis of the right kernel, each vector scaled so its first nonzero entry is 1"""
        if self.cols == 0:
            return []
        if self.rows == 0:
            return [tuple(Fraction(int(i == j)) for j in range(self.cols)) for i in range(self.cols)]
        sym = Matrix([[Rational(x.numerator, x.denominator) for x in row] for row in self.entries])
        basis = []
        for vector in sym.nullspace():
            values = [Fraction(int(v.p), int(v.q)) for v in vector]
            lead = next(v for v in values if v)
            basis.append(tuple(v / lead for v in values))
        return basis

    def apply(self, vector: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in self.entries)

    def to_lists(self) -> List[List[str]]:
        return [[format_fraction(x) for x in row] for row in self.entries]


@dataclass(frozen=True)
class Arrangement:
    """Hyperplanes H_i = (x0 + a_i x1 + ... + a_i^(n+1) x_(n+1) = 0) in P^(n+1).

    nodes is empty when the coefficient rows were supplied directly.
    """
    n: int
    labels: Tuple[str, ...]
    nodes: Tuple[Fraction, ...]
    coeffs: Tuple[Tuple[Fraction, ...], ...]

    @property
    def ambient_dim(self) -> int:
        return self.n + 1

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidInputError(f"unknown label {label!r}") from None

    def row(self, label: str) -> Tuple[Fraction, ...]:
        return self.coeffs[self.index(label)]

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "ambient": f"P^{self.ambient_dim}",
            "labels": list(self.labels),
            "nodes": [format_fraction(a) for a in self.nodes],
            "coefficients": [[format_fraction(x) for x in row] for row in self.coeffs],
        }


def build_arrangement(
    labels: Sequence[str],
    n: int,
    nodes: Optional[Sequence[Number]] = None,
    coefficients: Optional[Sequence[Sequence[Number]]] = None,
) -> Arrangement:
    """Vandermonde arrangement on the given labels, or explicit coefficient rows"""
    labels = tuple(labels)
    if not labels:
        raise InvalidInputError("an arrangement needs at least one hyperplane")
    if len(set(labels)) != len(labels):
        raise InvalidInputError("duplicate labels")
    if n < 0:
        raise InvalidInputError(f"n must be >= 0, got {n}")

    if coefficients is not None:
        rows = RationalMatrix.from_rows(coefficients, n + 2)
        if rows.rows != len(labels):
            raise InvalidInputError(f"{rows.rows} coefficient rows for {len(labels)} labels")
        return Arrangement(n, labels, (), rows.entries)

    if nodes is None:
        values = tuple(Fraction(i) for i in range(len(labels)))
    else:
        values = tuple(Fraction(a) for a in nodes)
        if len(values) != len(labels):
            raise InvalidInputError(f"{len(values)} nodes for {len(labels)} labels")
        if len(set(values)) != len(values):
            raise InvalidInputError("nodes must be pairwise distinct")

    coeffs = tuple(tuple(a ** j for j in range(n + 2)) for a in values)
    return Arrangement(n, labels, values, coeffs)


def stratum_equations(A: Arrangement, J: Iterable[str]) -> RationalMatrix:
    rows = [A.row(label) for label in sorted(set(J))]
    if not rows:
        raise InvalidInputError("stratum index set must be nonempty")
    return RationalMatrix(len(rows), A.n + 2, tuple(rows))


def stratum_dimension(A: Arrangement, J: Iterable[str]) -> Union[int, StratumKind]:
    """Projective dimension of the intersection of the hyperplanes in J"""
    rank = stratum_equations(A, J).rank()
    if rank == A.n + 2:
        return EMPTY
    return A.n + 1 - rank


def rational_point(A: Arrangement, J: Iterable[str]) -> Optional[Tuple[Fraction, ...]]:
    """A rational point of the stratum, or None when it is empty"""
    equations = stratum_equations(A, J)
    basis = equations.nullspace()
    if not basis:
        return None
    point = basis[0]
    if any(equations.apply(point)):
        raise CertificationError("nullspace vector does not solve the stratum equations", witness=point)
    return point


@dataclass(frozen=True)
class GeneralPositionReport:
    """Outcome of the rank check over subsets of min(|I|, n+2) hyperplanes"""
    in_general_position: bool
    subset_size: int
    checked: int
    exhaustive: bool
    witness: Optional[Tuple[str, ...]] = None

    def __bool__(self) -> bool:
        return self.in_general_position

    def to_dict(self) -> Dict[str, object]:
        return {
            "general_position": self.in_general_position,
            "subset_size": self.subset_size,
            "checked": self.checked,
            "exhaustive": self.exhaustive,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def _subsets_of_size(
    labels: Sequence[str],
    size: int,
    limit: int,
    sample_size: int,
    rng: random.Random,
) -> Tuple[List[Tuple[str, ...]], bool]:
    ordered = sorted(labels)
    total = comb(len(ordered), size)
    if total <= limit:
        return list(itertools.combinations(ordered, size)), True
    picked = {tuple(sorted(rng.sample(ordered, size))) for _ in range(sample_size)}
    return sorted(picked), False


def verify_general_position(
    A: Arrangement,
    enumeration_limit: Optional[int] = None,
    sample_size: Optional[int] = None,
    seed: Optional[int] = None,
) -> GeneralPositionReport:
    """Every min(|I|, n+2) coefficient rows are linearly independent"""
    limit = enumeration_limit if enumeration_limit is not None else Config.ENUMERATION_LIMIT
    samples = sample_size if sample_size is not None else Config.SAMPLE_SIZE
    rng = random.Random(Config.SEED if seed is None else seed)

    size = min(len(A.labels), A.n + 2)
    subsets, exhaustive = _subsets_of_size(A.labels, size, limit, samples, rng)
    for J in subsets:
        if stratum_equations(A, J).rank() != size:
            logger.error(f"Hyperplanes {format_cell(J)} are linearly dependent")
            return GeneralPositionReport(False, size, len(subsets), exhaustive, J)

    if not exhaustive:
        logger.warning(f"General position checked on {len(subsets)} sampled subsets of size {size}")
    return GeneralPositionReport(True, size, len(subsets), exhaustive)


def initial_dual_complex(
    A: Arrangement,
    enumeration_limit: Optional[int] = None,
    sample_size: Optional[int] = None,
    seed: Optional[int] = None,
) -> SimplicialComplex:
    """Dual complex of the union of the hyperplanes: the n-skeleton of the simplex on I"""
    limit = enumeration_limit if enumeration_limit is not None else Config.ENUMERATION_LIMIT
    samples = sample_size if sample_size is not None else Config.SAMPLE_SIZE
    rng = random.Random(Config.SEED if seed is None else seed)

    report = verify_general_position(A, limit, samples, seed)
    if not report:
        raise InvalidInputError(
            f"hyperplanes are not in general position, dependent subset {format_cell(report.witness)}"
        )

    expected = full_skeleton(A.labels, A.n)
    cells = set()
    exhaustive = True
    for size in range(1, min(len(A.labels), A.n + 2) + 1):
        subsets, complete = _subsets_of_size(A.labels, size, limit, samples, rng)
        exhaustive = exhaustive and complete
        for J in subsets:
            dimension = stratum_dimension(A, J)
            wanted = EMPTY if size == A.n + 2 else A.n + 1 - size
            if dimension != wanted:
                raise CertificationError(
                    f"stratum {format_cell(J)} has dimension {dimension}, expected {wanted}",
                    witness=list(J),
                )
            if dimension is not EMPTY:
                cells.add(frozenset(J))

    if exhaustive:
        derived = SimplicialComplex(A.labels, cells)
        if derived != expected:
            stray = sorted_cells(expected.cells ^ derived.cells)
            raise CertificationError("strata do not form the n-skeleton", witness=stray)
    logger.info(f"Initial dual complex certified ({'all' if exhaustive else 'sampled'} strata)")
    return expected
