import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from dualcx.core.exceptions import InvalidInputError
from dualcx.models import IsoMode, PseudomanifoldCondition
from dualcx.utils import format_cell, format_fvector

logger = logging.getLogger(__name__)

Cell = FrozenSet[str]
CellLike = Union[Cell, Iterable[str]]


def as_cell(labels: CellLike) -> Cell:
    """Normalize a label collection to a nonempty cell"""
    if isinstance(labels, str):
        labels = (labels,)
    cell = frozenset(labels)
    if not cell:
        raise InvalidInputError("cells must be nonempty")
    return cell


@dataclass(frozen=True)
class FVector:
    """Number of cells in each dimension"""
    counts: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.counts) - 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts))

    def __str__(self) -> str:
        return format_fvector(self.counts)


class SimplicialComplex:
    """Face-closed finite set of simplices on opaque string labels.

    Every cell is stored explicitly. Vertices and cells are kept in canonical
    order: dimension first, then lexicographic order of the sorted labels.
    """

    def __init__(self, vertices: Iterable[str], cells: Iterable[CellLike] = ()):
        vertex_list = list(vertices)
        for v in vertex_list:
            if not isinstance(v, str):
                raise InvalidInputError(f"vertex labels must be strings, got {v!r}")
        if len(set(vertex_list)) != len(vertex_list):
            raise InvalidInputError("duplicate vertex labels")

        self._vertices: Tuple[str, ...] = tuple(sorted(vertex_list))
        known = set(self._vertices)

        cell_set = {frozenset((v,)) for v in self._vertices}
        for raw in cells:
            cell = as_cell(raw)
            unknown = cell - known
            if unknown:
                raise InvalidInputError(f"cell {format_cell(cell)} mentions unknown labels {sorted(unknown)}")
            cell_set.add(cell)

        for cell in cell_set:
            if len(cell) < 2:
                continue
            for v in cell:
                if cell - {v} not in cell_set:
                    raise InvalidInputError(
                        f"not face-closed: {format_cell(cell - {v})} is missing for {format_cell(cell)}"
                    )

        self._cells: FrozenSet[Cell] = frozenset(cell_set)
        self._by_dim: Dict[int, List[Tuple[str, ...]]] = {}
        for cell in self._cells:
            self._by_dim.setdefault(len(cell) - 1, []).append(tuple(sorted(cell)))
        for bucket in self._by_dim.values():
            bucket.sort()
        self._cofaces: Optional[Dict[str, FrozenSet[Cell]]] = None

    @classmethod
    def from_facets(cls, facets: Iterable[CellLike], vertices: Iterable[str] = ()) -> "SimplicialComplex":
        """Close a list of facets under taking faces"""
        closure = set()
        labels = set(vertices)
        for raw in facets:
            facet = sorted(as_cell(raw))
            labels.update(facet)
            for size in range(1, len(facet) + 1):
                closure.update(frozenset(c) for c in itertools.combinations(facet, size))
        return cls(labels, closure)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self._vertices

    @property
    def cells(self) -> FrozenSet[Cell]:
        return self._cells

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def is_empty(self) -> bool:
        return not self._cells

    def cells_of_dim(self, k: int) -> List[Tuple[str, ...]]:
        """Cells of dimension k as sorted label tuples, in canonical order"""
        return list(self._by_dim.get(k, ()))

    def ordered_cells(self) -> List[Tuple[str, ...]]:
        return [c for k in range(self.dim + 1) for c in self._by_dim[k]]

    def facets(self) -> List[Tuple[str, ...]]:
        """Maximal cells in canonical order"""
        return [c for c in self.ordered_cells() if len(self.star(c)) == 1]

    def star(self, sigma: CellLike) -> FrozenSet[Cell]:
        """Cells having sigma as a face"""
        sigma = as_cell(sigma)
        if sigma not in self._cells:
            raise InvalidInputError(f"{format_cell(sigma)} is not a cell")
        index = self._coface_index()
        smallest = min((index[v] for v in sigma), key=len)
        return frozenset(c for c in smallest if sigma <= c)

    def _coface_index(self) -> Dict[str, FrozenSet[Cell]]:
        if self._cofaces is None:
            buckets: Dict[str, set] = {v: set() for v in self._vertices}
            for cell in self._cells:
                for v in cell:
                    buckets[v].add(cell)
            self._cofaces = {v: frozenset(b) for v, b in buckets.items()}
        return self._cofaces

    def __contains__(self, cell) -> bool:
        try:
            return as_cell(cell) in self._cells
        except InvalidInputError:
            return False

    def __len__(self) -> int:
        return len(self._cells)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._vertices == other._vertices and self._cells == other._cells

    def __hash__(self) -> int:
        return hash((self._vertices, self._cells))

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertices={len(self._vertices)}, f={f_vector(self)})"


def _require_cell(C: SimplicialComplex, sigma: CellLike) -> Cell:
    cell = as_cell(sigma)
    if cell not in C.cells:
        raise InvalidInputError(f"{format_cell(cell)} is not a cell")
    return cell


def full_skeleton(labels: Sequence[str], k: int) -> SimplicialComplex:
    """k-skeleton of the simplex spanned by labels"""
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise InvalidInputError("duplicate labels")
    if k < 0:
        raise InvalidInputError(f"skeleton dimension must be >= 0, got {k}")

    ordered = sorted(labels)
    cells = [
        c
        for size in range(1, min(k + 1, len(ordered)) + 1)
        for c in itertools.combinations(ordered, size)
    ]
    return SimplicialComplex(ordered, cells)


def remove_star(C: SimplicialComplex, sigma: CellLike) -> SimplicialComplex:
    """Delete every cell having sigma as a face"""
    sigma = _require_cell(C, sigma)
    doomed = C.star(sigma)
    vertices = [v for v in C.vertices if frozenset((v,)) not in doomed]
    return SimplicialComplex(vertices, C.cells - doomed)


def stellar_subdivision(C: SimplicialComplex, sigma: CellLike, w: str) -> SimplicialComplex:
    """Replace the star of sigma by the cone from w over its boundary"""
    sigma = _require_cell(C, sigma)
    if w in C.vertices:
        raise InvalidInputError(f"label {w!r} already names a vertex")

    star_cells = C.star(sigma)
    link_faces = [c - sigma for c in star_cells]  # includes the empty face
    ordered_sigma = sorted(sigma)
    proper_faces = [
        frozenset(t)
        for size in range(len(ordered_sigma))
        for t in itertools.combinations(ordered_sigma, size)
    ]
    apex = frozenset((w,))
    coned = {apex | tau | rho for tau in proper_faces for rho in link_faces}
    vertices = [v for v in C.vertices if frozenset((v,)) not in star_cells] + [w]
    return SimplicialComplex(vertices, (C.cells - star_cells) | coned)


def star(C: SimplicialComplex, sigma: CellLike) -> FrozenSet[Cell]:
    return C.star(sigma)


def link(C: SimplicialComplex, sigma: CellLike) -> SimplicialComplex:
    """Cells disjoint from sigma whose union with sigma is a cell"""
    sigma = _require_cell(C, sigma)
    faces = [c - sigma for c in C.star(sigma) if c != sigma]
    vertices = sorted({v for f in faces for v in f})
    return SimplicialComplex(vertices, faces)


def skeleton(C: SimplicialComplex, k: int) -> SimplicialComplex:
    if k < 0:
        raise InvalidInputError(f"skeleton dimension must be >= 0, got {k}")
    return SimplicialComplex(C.vertices, [c for c in C.cells if len(c) <= k + 1])


def f_vector(C: Union[SimplicialComplex, "DeltaComplex"]) -> FVector:
    return FVector(tuple(len(C.cells_of_dim(k)) for k in range(C.dim + 1)))


def euler_characteristic(C: Union[SimplicialComplex, "DeltaComplex"]) -> int:
    return f_vector(C).euler_characteristic()


def one_skeleton_graph(C: SimplicialComplex) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(C.vertices)
    graph.add_edges_from(C.cells_of_dim(1))
    return graph


def vertex_degrees(C: SimplicialComplex) -> Dict[str, int]:
    """Number of edges at each vertex"""
    return dict(one_skeleton_graph(C).degree())


@dataclass(frozen=True)
class PseudomanifoldReport:
    """Verdict of the normal pseudomanifold check and its first violation"""
    is_pseudomanifold: bool
    dimension: int
    condition: Optional[PseudomanifoldCondition] = None
    witness: Optional[Tuple[str, ...]] = None

    def __bool__(self) -> bool:
        return self.is_pseudomanifold

    def to_dict(self) -> dict:
        return {
            "normal_pseudomanifold": self.is_pseudomanifold,
            "dimension": self.dimension,
            "violated": self.condition.value if self.condition else None,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def is_normal_pseudomanifold(C: SimplicialComplex) -> PseudomanifoldReport:
    """Pure, connected links below codimension one, ridges in exactly two facets, strongly connected"""
    if C.is_empty():
        raise InvalidInputError("the empty complex has no pseudomanifold structure")

    d = C.dim
    for facet in C.facets():
        if len(facet) != d + 1:
            return PseudomanifoldReport(False, d, PseudomanifoldCondition.PURE, facet)

    # S^0 is the only 0-dimensional case
    if d == 0:
        if len(C.vertices) == 2:
            return PseudomanifoldReport(True, d)
        return PseudomanifoldReport(False, d, PseudomanifoldCondition.RIDGE_DEGREE, ())

    for k in range(d - 1):
        for cell in C.cells_of_dim(k):
            graph = one_skeleton_graph(link(C, cell))
            if graph.number_of_nodes() == 0 or not nx.is_connected(graph):
                logger.debug(f"Cell {format_cell(cell)} has a disconnected link")
                return PseudomanifoldReport(False, d, PseudomanifoldCondition.LINK_CONNECTED, cell)

    top = C.cells_of_dim(d)
    cofaces: Dict[Tuple[str, ...], List[Tuple[str, ...]]] = {r: [] for r in C.cells_of_dim(d - 1)}
    for t in top:
        for i in range(len(t)):
            cofaces[t[:i] + t[i + 1:]].append(t)
    for ridge in C.cells_of_dim(d - 1):
        if len(cofaces[ridge]) != 2:
            return PseudomanifoldReport(False, d, PseudomanifoldCondition.RIDGE_DEGREE, ridge)

    dual_graph = nx.Graph()
    dual_graph.add_nodes_from(top)
    for pair in cofaces.values():
        dual_graph.add_edge(*pair)
    if not nx.is_connected(dual_graph):
        reached = nx.node_connected_component(dual_graph, top[0])
        stray = next(t for t in top if t not in reached)
        return PseudomanifoldReport(False, d, PseudomanifoldCondition.STRONGLY_CONNECTED, stray)

    return PseudomanifoldReport(True, d)


@dataclass(frozen=True)
class IsomorphismResult:
    isomorphic: bool
    mapping: Optional[Dict[str, str]] = None

    def __bool__(self) -> bool:
        return self.isomorphic


def _vertex_signature(C: SimplicialComplex, v: str) -> Tuple[int, ...]:
    counts = [0] * (C.dim + 1)
    for cell in C.star((v,)):
        counts[len(cell) - 1] += 1
    return tuple(counts)


def isomorphic(C1: SimplicialComplex, C2: SimplicialComplex, mode: IsoMode = IsoMode.LABELED) -> IsomorphismResult:
    """Labeled equality, or a vertex bijection carrying cells onto cells"""
    if mode is IsoMode.LABELED:
        return IsomorphismResult(C1 == C2)

    if f_vector(C1) != f_vector(C2) or len(C1.vertices) != len(C2.vertices):
        return IsomorphismResult(False)
    if C1.is_empty():
        return IsomorphismResult(True, {})

    sig1 = {v: _vertex_signature(C1, v) for v in C1.vertices}
    sig2 = {w: _vertex_signature(C2, w) for w in C2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return IsomorphismResult(False)

    # visit vertices adjacent to already placed ones first so cells close early
    neighbours = {v: set() for v in C1.vertices}
    for a, b in C1.cells_of_dim(1):
        neighbours[a].add(b)
        neighbours[b].add(a)
    order: List[str] = []
    remaining = set(C1.vertices)
    while remaining:
        placed = set(order)
        nxt = min(remaining, key=lambda v: (-len(neighbours[v] & placed), -sum(sig1[v]), v))
        order.append(nxt)
        remaining.remove(nxt)

    candidates = {v: sorted(w for w in C2.vertices if sig2[w] == sig1[v]) for v in C1.vertices}
    index = {v: C1.star((v,)) for v in C1.vertices}
    mapping: Dict[str, str] = {}
    used = set()

    def consistent(v: str) -> bool:
        for cell in index[v]:
            if all(u in mapping for u in cell):
                if frozenset(mapping[u] for u in cell) not in C2.cells:
                    return False
        return True

    def extend(position: int) -> bool:
        if position == len(order):
            return True
        v = order[position]
        for w in candidates[v]:
            if w in used:
                continue
            mapping[v] = w
            used.add(w)
            if consistent(v) and extend(position + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if extend(0):
        return IsomorphismResult(True, dict(sorted(mapping.items())))
    return IsomorphismResult(False)


# Delta complexes

@dataclass(frozen=True)
class DeltaCell:
    """Ordered simplex: face i is the face opposite vertex i"""
    id: int
    dim: int
    faces: Tuple[int, ...] = ()
    label: Optional[str] = None


class DeltaComplex:
    """Cell complex of ordered simplices glued along faces given by id"""

    def __init__(self, cells: Iterable[DeltaCell]):
        by_id: Dict[int, DeltaCell] = {}
        for cell in cells:
            if cell.id in by_id:
                raise InvalidInputError(f"duplicate cell id {cell.id}")
            by_id[cell.id] = cell
        self._by_id = by_id

        labels = set()
        for cell in by_id.values():
            if cell.dim < 0:
                raise InvalidInputError(f"cell {cell.id} has negative dimension")
            if cell.dim == 0:
                if cell.label is None or cell.faces:
                    raise InvalidInputError(f"0-cell {cell.id} needs a label and no faces")
                if cell.label in labels:
                    raise InvalidInputError(f"duplicate vertex label {cell.label!r}")
                labels.add(cell.label)
                continue
            if len(cell.faces) != cell.dim + 1:
                raise InvalidInputError(f"{cell.dim}-cell {cell.id} needs {cell.dim + 1} faces")
            for f in cell.faces:
                face = by_id.get(f)
                if face is None or face.dim != cell.dim - 1:
                    raise InvalidInputError(f"cell {cell.id} has face {f} of the wrong dimension")

        # simplicial identity: face i of face j equals face j-1 of face i, for i < j
        for cell in by_id.values():
            if cell.dim < 2:
                continue
            for j in range(cell.dim + 1):
                for i in range(j):
                    lhs = by_id[cell.faces[j]].faces[i]
                    rhs = by_id[cell.faces[i]].faces[j - 1]
                    if lhs != rhs:
                        raise InvalidInputError(
                            f"cell {cell.id}: faces {i},{j} violate the simplicial identity"
                        )

        buckets: Dict[int, List[DeltaCell]] = {}
        for cell in sorted(by_id.values(), key=lambda c: (c.dim, c.id)):
            buckets.setdefault(cell.dim, []).append(cell)
        self._by_dim: Dict[int, Tuple[DeltaCell, ...]] = {k: tuple(v) for k, v in buckets.items()}
        self._vertex_cache: Dict[int, Tuple[int, ...]] = {}

    @classmethod
    def from_simplicial(cls, C: SimplicialComplex) -> "DeltaComplex":
        """Order every simplex by its sorted labels"""
        ids = {cell: i for i, cell in enumerate(C.ordered_cells())}
        cells = []
        for cell, cid in ids.items():
            if len(cell) == 1:
                cells.append(DeltaCell(cid, 0, (), cell[0]))
            else:
                faces = tuple(ids[cell[:i] + cell[i + 1:]] for i in range(len(cell)))
                cells.append(DeltaCell(cid, len(cell) - 1, faces))
        return cls(cells)

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    @property
    def cells(self) -> Tuple[DeltaCell, ...]:
        return tuple(c for k in sorted(self._by_dim) for c in self._by_dim[k])

    def is_empty(self) -> bool:
        return not self._by_id

    def cells_of_dim(self, k: int) -> Tuple[DeltaCell, ...]:
        return self._by_dim.get(k, ())

    def cell(self, cell_id: int) -> DeltaCell:
        try:
            return self._by_id[cell_id]
        except KeyError:
            raise InvalidInputError(f"unknown cell id {cell_id}") from None

    def __contains__(self, cell_id: int) -> bool:
        return cell_id in self._by_id

    def vertex_ids(self, cell_id: int) -> Tuple[int, ...]:
        """Ordered vertices of a cell"""
        cached = self._vertex_cache.get(cell_id)
        if cached is not None:
            return cached
        cell = self.cell(cell_id)
        if cell.dim == 0:
            result = (cell.id,)
        else:
            result = self.vertex_ids(cell.faces[cell.dim]) + (self.vertex_ids(cell.faces[0])[-1],)
        self._vertex_cache[cell_id] = result
        return result

    def vertex_labels(self, cell_id: int) -> Tuple[str, ...]:
        return tuple(self._by_id[v].label for v in self.vertex_ids(cell_id))

    def sub_face(self, cell_id: int, positions: Iterable[int]) -> int:
        """Face spanned by the given vertex positions"""
        pos = sorted(set(positions))
        current = self.cell(cell_id)
        if not pos or pos[0] < 0 or pos[-1] > current.dim:
            raise InvalidInputError(f"bad vertex positions {pos} for cell {cell_id}")
        while len(pos) < current.dim + 1:
            missing = max(j for j in range(current.dim + 1) if j not in pos)
            current = self._by_id[current.faces[missing]]
            pos = [p if p < missing else p - 1 for p in pos]
        return current.id

    def is_simplicial(self) -> bool:
        seen = set()
        for cell in self._by_id.values():
            verts = self.vertex_ids(cell.id)
            key = frozenset(verts)
            if len(key) != len(verts) or key in seen:
                return False
            seen.add(key)
        return True

    def to_simplicial(self) -> SimplicialComplex:
        if not self.is_simplicial():
            raise InvalidInputError("Δ-complex has cells not determined by their vertices")
        labels = [c.label for c in self.cells_of_dim(0)]
        return SimplicialComplex(labels, [self.vertex_labels(c.id) for c in self._by_id.values()])

    def __len__(self) -> int:
        return len(self._by_id)

    def __repr__(self) -> str:
        return f"DeltaComplex(f={f_vector(self)})"


def fresh_label(candidate: str, taken: set) -> str:
    while candidate in taken:
        candidate = f"<{candidate}>"
    return candidate


def _flags(size: int) -> List[Tuple[FrozenSet[int], ...]]:
    """Strict chains of nonempty subsets of range(size) ending at the full set"""
    full = frozenset(range(size))
    chains = []

    def grow(chain: Tuple[FrozenSet[int], ...]):
        chains.append(chain)
        head = chain[0]
        for k in range(1, len(head)):
            for sub in itertools.combinations(sorted(head), k):
                grow((frozenset(sub),) + chain)

    grow((full,))
    return chains


def _subdivide_once(D: DeltaComplex, generation: int) -> DeltaComplex:
    # a simplex of the subdivision is a cell of D plus a flag of its faces ending at the whole cell
    keys = []
    flag_cache: Dict[int, list] = {}
    for cell in D.cells:
        flags = flag_cache.setdefault(cell.dim, _flags(cell.dim + 1))
        for flag in flags:
            keys.append((cell.id, flag))
    keys.sort(key=lambda key: (len(key[1]) - 1, key[0], [sorted(s) for s in key[1]]))
    ids = {key: i for i, key in enumerate(keys)}

    taken = {c.label for c in D.cells_of_dim(0)}
    new_cells = []
    for key, new_id in ids.items():
        cell_id, flag = key
        m = len(flag) - 1
        if m == 0:
            cell = D.cell(cell_id)
            if cell.dim == 0:
                label = cell.label
            else:
                label = fresh_label(f"b{generation}.{cell_id}", taken)
                taken.add(label)
            new_cells.append(DeltaCell(new_id, 0, (), label))
            continue

        faces = []
        for i in range(m + 1):
            if i < m:
                faces.append(ids[(cell_id, flag[:i] + flag[i + 1:])])
                continue
            lower = flag[m - 1]
            face_id = D.sub_face(cell_id, lower)
            rank = {p: r for r, p in enumerate(sorted(lower))}
            reindexed = tuple(frozenset(rank[p] for p in s) for s in flag[:m])
            faces.append(ids[(face_id, reindexed)])
        new_cells.append(DeltaCell(new_id, m, tuple(faces)))
    return DeltaComplex(new_cells)


def barycentric_subdivision(D: Union[DeltaComplex, SimplicialComplex], rounds: int = 2) -> SimplicialComplex:
    """Iterated barycentric subdivision, returned as a simplicial complex"""
    if rounds not in (1, 2):
        raise InvalidInputError(f"rounds must be 1 or 2, got {rounds}")
    if isinstance(D, SimplicialComplex):
        D = DeltaComplex.from_simplicial(D)

    current = D
    for generation in range(1, rounds + 1):
        current = _subdivide_once(current, generation)
        logger.debug(f"Subdivision round {generation}: f={f_vector(current)}")

    if not current.is_simplicial():
        raise InvalidInputError("one round is not enough for this Δ-complex; use rounds=2")
    return current.to_simplicial()


def relabel(C: SimplicialComplex, mapping: Dict[str, str]) -> SimplicialComplex:
    """Rename vertices; labels missing from mapping are kept"""
    rename = lambda v: mapping.get(v, v)
    images = [rename(v) for v in C.vertices]
    if len(set(images)) != len(images):
        raise InvalidInputError("relabeling is not injective")
    return SimplicialComplex(images, [frozenset(rename(v) for v in c) for c in C.cells])
