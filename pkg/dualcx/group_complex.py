import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from dualcx.complexes import DeltaCell, DeltaComplex, SimplicialComplex, barycentric_subdivision, f_vector
from dualcx.core.exceptions import CertificationError, InvalidInputError
from dualcx.homology import HomologyProfile, homology, is_q_acyclic
from dualcx.models import CyclesFile, Ring

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]  # (generator index, exponent +1 or -1)
Word = Tuple[Letter, ...]

BASE_LABEL = "v"


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    relators: Tuple[Word, ...] = ()

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise InvalidInputError("duplicate generators")
        for i, word in enumerate(self.relators):
            if not word:
                raise InvalidInputError(f"relator {i} is empty")
            for g, e in word:
                if not 0 <= g < len(self.generators):
                    raise InvalidInputError(f"relator {i} uses unknown generator index {g}")
                if e not in (1, -1):
                    raise InvalidInputError(f"relator {i} has exponent {e}, expected +1 or -1")

    def exponent_matrix(self) -> List[List[int]]:
        """Exponent sum of each generator in each relator"""
        rows = []
        for word in self.relators:
            row = [0] * len(self.generators)
            for g, e in word:
                row[g] += e
            rows.append(row)
        return rows

    def word_text(self, i: int) -> str:
        return "".join(
            self.generators[g] if e > 0 else self.generators[g].upper()
            for g, e in self.relators[i]
        )


def parse_presentation(generators: Sequence[str], relators: Sequence[str]) -> Presentation:
    """Lowercase letters are generators, uppercase letters their inverses"""
    gens = tuple(g.strip() for g in generators if g.strip())
    for g in gens:
        if len(g) != 1 or not g.islower():
            raise InvalidInputError(f"generators must be single lowercase letters, got {g!r}")
    index = {g: i for i, g in enumerate(gens)}

    words = []
    for text in relators:
        text = text.strip()
        if not text:
            raise InvalidInputError("empty relator")
        word = []
        for ch in text:
            key = ch.lower()
            if key not in index:
                raise InvalidInputError(f"relator {text!r} uses unknown generator {ch!r}")
            word.append((index[key], 1 if ch.islower() else -1))
        words.append(tuple(word))
    return Presentation(gens, tuple(words))


def abelianization(P: Presentation) -> Tuple[int, Tuple[int, ...]]:
    """Free rank and torsion of G/[G,G] from the invariant factors of the exponent matrix"""
    g = len(P.generators)
    if not P.relators or g == 0:
        return g, ()
    factors = [abs(int(f)) for f in invariant_factors(Matrix(P.exponent_matrix()), domain=ZZ)]
    nonzero = [f for f in factors if f]
    return g - len(nonzero), tuple(sorted(f for f in nonzero if f > 1))


@dataclass(frozen=True)
class TwoCycle:
    """Integral 2-chain with coefficients in {-1, 0, +1}"""
    coefficients: Dict[int, int]

    def __post_init__(self):
        for cell_id, c in self.coefficients.items():
            if c not in (-1, 0, 1):
                raise InvalidInputError(f"coefficient {c} on cell {cell_id} is not in {{-1, 0, 1}}")

    @property
    def support(self) -> List[int]:
        return sorted(cell_id for cell_id, c in self.coefficients.items() if c)


@dataclass
class PresentationComplex:
    """Wedge of subdivided circles with one fan-triangulated polygon per relator"""
    presentation: Presentation
    delta: DeltaComplex
    words: List[Word] = field(default_factory=list)
    fans: List[List[Tuple[int, int]]] = field(default_factory=list)  # (triangle id, orientation)


class _Builder:
    def __init__(self):
        self.cells: List[DeltaCell] = []

    def vertex(self, label: str) -> int:
        cid = len(self.cells)
        self.cells.append(DeltaCell(cid, 0, (), label))
        return cid

    def edge(self, start: int, end: int) -> int:
        cid = len(self.cells)
        self.cells.append(DeltaCell(cid, 1, (end, start)))
        return cid

    def simplex(self, dim: int, faces: Sequence[int]) -> int:
        cid = len(self.cells)
        self.cells.append(DeltaCell(cid, dim, tuple(faces)))
        return cid


def _pad(word: Word) -> Word:
    g = word[0][0]
    while len(word) < 3:
        word = word + ((g, 1), (g, -1))
    return word


def build_presentation_complex(P: Presentation, pad: bool = True) -> PresentationComplex:
    builder = _Builder()
    base = builder.vertex(BASE_LABEL)

    # each generator loop is subdivided into three edges base -> p1 -> p2 -> base
    loops: List[Tuple[Tuple[int, int, int], Tuple[int, int, int, int]]] = []
    for name in P.generators:
        p1 = builder.vertex(f"{name}.1")
        p2 = builder.vertex(f"{name}.2")
        edges = (builder.edge(base, p1), builder.edge(p1, p2), builder.edge(p2, base))
        loops.append((edges, (base, p1, p2, base)))

    words, fans = [], []
    for i, word in enumerate(P.relators):
        word = _pad(word) if pad else word
        words.append(word)

        # boundary path: (edge id, sign, start vertex, end vertex)
        path = []
        for g, e in word:
            edges, stops = loops[g]
            steps = [(edges[k], stops[k], stops[k + 1]) for k in range(3)]
            if e > 0:
                path += [(edge, 1, a, b) for edge, a, b in steps]
            else:
                path += [(edge, -1, b, a) for edge, a, b in reversed(steps)]

        center = builder.vertex(f"r{i}")
        spokes = [builder.edge(center, start) for _, _, start, _ in path]
        fan = []
        length = len(path)
        for j, (edge, sign, _, _) in enumerate(path):
            here, there = spokes[j], spokes[(j + 1) % length]
            if sign > 0:
                triangle = builder.simplex(2, (edge, there, here))
            else:
                triangle = builder.simplex(2, (edge, here, there))
            fan.append((triangle, sign))
        fans.append(fan)

    delta = DeltaComplex(builder.cells)
    logger.debug(f"Presentation complex with {len(P.generators)} generators: f={f_vector(delta)}")
    return PresentationComplex(P, delta, words, fans)


def presentation_complex(P: Presentation, pad: bool = True) -> DeltaComplex:
    """Two-dimensional Δ-complex whose fundamental group is presented by P"""
    return build_presentation_complex(P, pad).delta


def relator_chain(complex_or_presentation, i: int) -> TwoCycle:
    """Oriented fan of relator i; a cycle when every exponent sum vanishes"""
    built = complex_or_presentation
    if isinstance(built, Presentation):
        built = build_presentation_complex(built)
    if not 0 <= i < len(built.fans):
        raise InvalidInputError(f"no relator {i}")
    if any(built.presentation.exponent_matrix()[i]):
        raise InvalidInputError(f"relator {i} has nonzero exponent sums, its fan is not a cycle")
    return TwoCycle({triangle: sign for triangle, sign in built.fans[i]})


def _chain_boundary(D: DeltaComplex, chain: TwoCycle) -> Dict[int, int]:
    boundary: Dict[int, int] = {}
    for cell_id in chain.support:
        cell = D.cell(cell_id)
        if cell.dim != 2:
            raise InvalidInputError(f"cell {cell_id} is not a 2-cell")
        for k, face in enumerate(cell.faces):
            boundary[face] = boundary.get(face, 0) + (-1) ** k * chain.coefficients[cell_id]
    return {face: c for face, c in boundary.items() if c}


def cone_off(D: DeltaComplex, cycles: Sequence[TwoCycle]) -> DeltaComplex:
    """Attach a cone over the support of each 2-cycle"""
    for n, chain in enumerate(cycles):
        residue = _chain_boundary(D, chain)
        if residue:
            raise InvalidInputError(f"chain {n} has nonzero boundary on cells {sorted(residue)}")
    if not cycles:
        return D

    cells = list(D.cells)
    next_id = max((c.id for c in cells), default=-1) + 1
    taken = {c.label for c in D.cells_of_dim(0)}
    for n, chain in enumerate(cycles):
        label = f"cone{n}"
        while label in taken:
            label = f"<{label}>"
        taken.add(label)
        apex = next_id
        cells.append(DeltaCell(apex, 0, (), label))
        next_id += 1

        # cone(σ) has σ's vertices followed by the apex; face i of cone(σ) is cone(face i of σ)
        cone_of: Dict[int, int] = {}

        def cone(cell_id: int) -> int:
            nonlocal next_id
            if cell_id in cone_of:
                return cone_of[cell_id]
            cell = D.cell(cell_id)
            faces = (apex, cell_id) if cell.dim == 0 else tuple(cone(f) for f in cell.faces) + (cell_id,)
            cone_id = next_id
            next_id += 1
            cells.append(DeltaCell(cone_id, cell.dim + 1, faces))
            cone_of[cell_id] = cone_id
            return cone_id

        for triangle in chain.support:
            cone(triangle)
    return DeltaComplex(cells)


def support_complex(D: DeltaComplex, chain: TwoCycle) -> DeltaComplex:
    """Closure of the support of a 2-chain"""
    keep = set()
    stack = list(chain.support)
    while stack:
        cell_id = stack.pop()
        if cell_id in keep:
            continue
        keep.add(cell_id)
        stack.extend(D.cell(cell_id).faces)
    return DeltaComplex(D.cell(cell_id) for cell_id in sorted(keep))


def spans_sphere(D: DeltaComplex, chain: TwoCycle) -> bool:
    """The support has the integral homology of a 2-sphere"""
    profile = homology(support_complex(D, chain))
    return profile.betti == (1, 0, 1) and not any(profile.torsion)


def h1_h2(D: DeltaComplex, presentation: Optional[Presentation] = None) -> HomologyProfile:
    """Integral H1 and H2, checked against the abelianization when a presentation is given"""
    profile = homology(D).restrict((1, 2))
    if presentation is not None:
        rank, torsion = abelianization(presentation)
        if profile.betti[0] != rank or profile.torsion[0] != torsion:
            raise CertificationError(
                "H1 of the presentation complex differs from the abelianization",
                witness={"homology": (profile.betti[0], list(profile.torsion[0])), "abelianization": (rank, list(torsion))},
            )
    return profile


def cycles_from_file(built: PresentationComplex, record: CyclesFile) -> List[TwoCycle]:
    cycles = []
    for entry in record.cycles:
        if entry.relator is not None:
            cycles.append(relator_chain(built, entry.relator))
        else:
            cycles.append(TwoCycle(dict(entry.coefficients)))
    return cycles


@dataclass
class SuperperfectReport:
    presentation: Presentation
    homology_c2: HomologyProfile
    q_betti_c2: Tuple[int, ...]
    abelianization: Tuple[int, Tuple[int, ...]]
    coned: bool
    homology_c3: Optional[HomologyProfile]
    q_superperfect: bool
    q_acyclic: bool
    h3_vanishes: Optional[bool]
    low_homology_kept: Optional[bool] = None
    simplicial: Optional[SimplicialComplex] = None

    def to_dict(self) -> Dict[str, object]:
        rank, torsion = self.abelianization
        data: Dict[str, object] = {
            "generators": list(self.presentation.generators),
            "relators": [self.presentation.word_text(i) for i in range(len(self.presentation.relators))],
            "abelianization": {"rank": rank, "torsion": list(torsion)},
            "c2": {"homology": self.homology_c2.to_dict(), "q_betti": list(self.q_betti_c2)},
            "q_superperfect": self.q_superperfect,
            "q_acyclic": self.q_acyclic,
        }
        if self.simplicial is not None:
            data["simplicial_f_vector"] = list(f_vector(self.simplicial).counts)
        if self.coned:
            data["c3"] = {
                "homology": self.homology_c3.to_dict(),
                "h3_vanishes": self.h3_vanishes,
                "h0_h1_kept": self.low_homology_kept,
            }
        return data


def q_superperfect_report(
    P: Presentation,
    cycles: Optional[Sequence[TwoCycle]] = None,
    simplicialize: bool = True,
) -> SuperperfectReport:
    """Rational homology verdicts for the presentation complex and its coned-off version.

    Coning must keep H0 and H1 when every cycle spans a 2-sphere. Otherwise a change is
    reported and the superperfect verdict is false. With simplicialize the final complex
    is also subdivided twice into a simplicial complex.
    """
    built = build_presentation_complex(P)
    c2 = built.delta
    h1_h2(c2, P)
    homology_c2 = homology(c2)
    q_c2 = homology(c2, Ring.Q).betti

    final = c2
    homology_c3 = None
    h3_vanishes = None
    low_kept = None
    if cycles:
        final = cone_off(c2, cycles)
        homology_c3 = homology(final)
        top = homology_c3.restrict((3,))
        h3_vanishes = top.betti[0] == 0 and not top.torsion[0]
        low_kept = homology_c3.restrict((0, 1)) == homology_c2.restrict((0, 1))
        if not low_kept:
            if all(spans_sphere(c2, chain) for chain in cycles):
                raise CertificationError("coning 2-spheres changed H0 or H1", witness=homology_c3.to_dict())
            logger.warning("Coning changed H0 or H1; some cycle does not span a 2-sphere")

    q_final = homology(final, Ring.Q).restrict((1, 2)).betti
    report = SuperperfectReport(
        presentation=P,
        homology_c2=homology_c2,
        q_betti_c2=q_c2,
        abelianization=abelianization(P),
        coned=bool(cycles),
        homology_c3=homology_c3,
        q_superperfect=q_final == (0, 0) and low_kept is not False,
        q_acyclic=is_q_acyclic(final),
        h3_vanishes=h3_vanishes,
        low_homology_kept=low_kept,
        simplicial=barycentric_subdivision(final, 2) if simplicialize else None,
    )
    logger.info(f"Presentation report: q_superperfect={report.q_superperfect} q_acyclic={report.q_acyclic}")
    return report
