import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from dualcx.complexes import DeltaComplex, SimplicialComplex, f_vector
from dualcx.core.exceptions import InvalidInputError
from dualcx.models import Ring

logger = logging.getLogger(__name__)

Complex = Union[SimplicialComplex, DeltaComplex]


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense matrix of arbitrary precision integers"""
    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntegerMatrix":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        width = cols if cols is not None else (len(data[0]) if data else 0)
        for row in data:
            if len(row) != width:
                raise InvalidInputError("ragged matrix rows")
        return cls(len(data), width, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, size: int) -> "IntegerMatrix":
        return cls(size, size, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise InvalidInputError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        columns = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntegerMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in columns) for row in self.entries),
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class SmithForm:
    """Invariant factors d1 | d2 | ... and, on request, S and T with S*M*T = D"""
    invariant_factors: Tuple[int, ...]
    rank: int
    diagonal: Optional[IntegerMatrix] = None
    left: Optional[IntegerMatrix] = None
    right: Optional[IntegerMatrix] = None


def _min_pivot(A: List[List[int]], t: int, rows: int, cols: int) -> Optional[Tuple[int, int]]:
    best = None
    best_abs = 0
    for i in range(t, rows):
        row = A[i]
        for j in range(t, cols):
            value = row[j]
            if value and (best is None or abs(value) < best_abs):
                best, best_abs = (i, j), abs(value)
                if best_abs == 1:
                    return best
    return best


def smith_normal_form(M: IntegerMatrix, with_transforms: bool = False) -> SmithForm:
    """Dense Smith normal form with minimal absolute value pivoting"""
    m, n = M.rows, M.cols
    A = M.to_lists()
    S = IntegerMatrix.identity(m).to_lists() if with_transforms else None
    T = IntegerMatrix.identity(n).to_lists() if with_transforms else None

    def swap_rows(a: int, b: int):
        if a != b:
            A[a], A[b] = A[b], A[a]
            if S is not None:
                S[a], S[b] = S[b], S[a]

    def swap_cols(a: int, b: int):
        if a != b:
            for row in A:
                row[a], row[b] = row[b], row[a]
            if T is not None:
                for row in T:
                    row[a], row[b] = row[b], row[a]

    def add_row(target: int, source: int, q: int):
        # row[target] += q * row[source]
        src, dst = A[source], A[target]
        for j in range(n):
            if src[j]:
                dst[j] += q * src[j]
        if S is not None:
            s_src, s_dst = S[source], S[target]
            for j in range(m):
                if s_src[j]:
                    s_dst[j] += q * s_src[j]

    def add_col(target: int, source: int, q: int):
        for row in A:
            if row[source]:
                row[target] += q * row[source]
        if T is not None:
            for row in T:
                if row[source]:
                    row[target] += q * row[source]

    t = 0
    while t < min(m, n):
        pivot = _min_pivot(A, t, m, n)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        add_row(i, t, -q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        add_col(j, t, -q)
                    if A[t][j]:
                        dirty = True

            if dirty:
                candidates = [(abs(A[i][t]), 0, i) for i in range(t + 1, m) if A[i][t]]
                candidates += [(abs(A[t][j]), 1, j) for j in range(t + 1, n) if A[t][j]]
                _, axis, index = min(candidates)
                if axis == 0:
                    swap_rows(t, index)
                else:
                    swap_cols(t, index)
                continue

            # every remaining entry must be a multiple of the pivot
            if abs(p) != 1:
                offender = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                    None,
                )
                if offender is not None:
                    add_row(t, offender, 1)
                    continue
            break
        t += 1

    rank = t
    for k in range(rank):
        if A[k][k] < 0:
            A[k] = [-x for x in A[k]]
            if S is not None:
                S[k] = [-x for x in S[k]]

    factors = tuple(A[k][k] for k in range(rank))
    if not with_transforms:
        return SmithForm(factors, rank)
    return SmithForm(
        factors,
        rank,
        diagonal=IntegerMatrix.from_rows(A, n),
        left=IntegerMatrix.from_rows(S, m),
        right=IntegerMatrix.from_rows(T, n),
    )


def rational_rank(M: IntegerMatrix) -> int:
    """Exact rank over QQ, eliminating on the sparse form in sympy"""
    if M.rows == 0 or M.cols == 0:
        return 0
    sparse = {
        i: {j: QQ(x) for j, x in enumerate(row) if x}
        for i, row in enumerate(M.entries)
        if any(row)
    }
    return DomainMatrix(sparse, (M.rows, M.cols), QQ).rank()


def _boundary(C: Complex, k: int) -> IntegerMatrix:
    if isinstance(C, SimplicialComplex):
        faces = C.cells_of_dim(k - 1)
        cells = C.cells_of_dim(k)
        row_of = {f: i for i, f in enumerate(faces)}
        entries = [[0] * len(cells) for _ in faces]
        for j, cell in enumerate(cells):
            for i in range(len(cell)):
                entries[row_of[cell[:i] + cell[i + 1:]]][j] += (-1) ** i
        return IntegerMatrix.from_rows(entries, len(cells))

    faces = C.cells_of_dim(k - 1)
    cells = C.cells_of_dim(k)
    row_of = {f.id: i for i, f in enumerate(faces)}
    entries = [[0] * len(cells) for _ in faces]
    for j, cell in enumerate(cells):
        for i, face in enumerate(cell.faces):
            entries[row_of[face]][j] += (-1) ** i
    return IntegerMatrix.from_rows(entries, len(cells))


def boundary_matrix(C: Complex, k: int) -> IntegerMatrix:
    """Matrix of the k-th boundary map, rows and columns in canonical cell order"""
    if not 1 <= k <= C.dim:
        raise InvalidInputError(f"boundary index {k} outside 1..{C.dim}")
    return _boundary(C, k)


def boundary_squares_to_zero(C: Complex) -> bool:
    for k in range(2, C.dim + 1):
        if not (_boundary(C, k - 1) @ _boundary(C, k)).is_zero():
            logger.error(f"Boundary composition d{k - 1}*d{k} is nonzero")
            return False
    return True


@dataclass(frozen=True)
class HomologyProfile:
    """Unreduced Betti numbers and torsion invariant factors per dimension"""
    betti: Tuple[int, ...]
    torsion: Tuple[Tuple[int, ...], ...]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))

    def restrict(self, dims: Iterable[int]) -> "HomologyProfile":
        dims = list(dims)
        betti = tuple(self.betti[k] if k < len(self.betti) else 0 for k in dims)
        torsion = tuple(self.torsion[k] if k < len(self.torsion) else () for k in dims)
        return HomologyProfile(betti, torsion)

    def to_dict(self, ring: Ring = Ring.Z) -> Dict[str, list]:
        data = {"ring": ring.value, "betti": list(self.betti)}
        if ring is Ring.Z:
            data["torsion"] = [list(t) for t in self.torsion]
        return data


def homology(C: Complex, ring: Ring = Ring.Z) -> HomologyProfile:
    """Integral homology via Smith normal form, or rational homology via ranks"""
    if C.is_empty():
        raise InvalidInputError("homology of the empty complex is not defined here")

    d = C.dim
    counts = f_vector(C).counts
    ranks = {0: 0, d + 1: 0}
    torsion_of: Dict[int, Tuple[int, ...]] = {}
    for k in range(1, d + 1):
        matrix = _boundary(C, k)
        if ring is Ring.Q:
            ranks[k] = rational_rank(matrix)
            continue
        form = smith_normal_form(matrix)
        ranks[k] = form.rank
        torsion_of[k - 1] = tuple(f for f in form.invariant_factors if f > 1)

    betti = tuple(counts[k] - ranks[k] - ranks[k + 1] for k in range(d + 1))
    torsion = tuple(torsion_of.get(k, ()) for k in range(d + 1))
    logger.debug(f"Homology over {ring.value}: betti={betti} torsion={torsion}")
    return HomologyProfile(betti, torsion)


def is_q_acyclic(C: Complex) -> bool:
    profile = homology(C, Ring.Q)
    return profile.betti[0] == 1 and not any(profile.betti[1:])


def is_connected(C: Complex) -> bool:
    if C.is_empty():
        raise InvalidInputError("connectivity of the empty complex is not defined here")
    vertices = len(C.cells_of_dim(0))
    if C.dim < 1:
        return vertices == 1
    return vertices - rational_rank(_boundary(C, 1)) == 1
