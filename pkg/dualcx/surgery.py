import itertools
import logging
import random
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from dualcx.complexes import DeltaCell, DeltaComplex, SimplicialComplex, f_vector, fresh_label
from dualcx.core.config import Config
from dualcx.core.exceptions import CertificationError, InvalidInputError
from dualcx.storage import delta_to_dict
from dualcx.utils import format_cell

logger = logging.getLogger(__name__)

Choice = Mapping[Tuple[str, ...], int]


@dataclass(frozen=True)
class DoubledComplex:
    """Every top cell of base duplicated along its boundary"""
    base: SimplicialComplex
    doubled_dim: int
    delta: DeltaComplex
    copies: Dict[Tuple[str, ...], Tuple[int, int]]
    origin: Dict[int, Tuple[str, ...]]  # cell id -> cell of base

    def to_dict(self) -> Dict[str, object]:
        return {
            "doubled_dim": self.doubled_dim,
            "f_vector": list(f_vector(self.delta).counts),
            "copies": [{"cell": list(cell), "ids": list(ids)} for cell, ids in sorted(self.copies.items())],
            "complex": delta_to_dict(self.delta),
        }


def double_cover_complex(C: SimplicialComplex) -> DoubledComplex:
    """Duplicate each cell of dimension dim C, sharing its boundary"""
    if C.is_empty():
        raise InvalidInputError("cannot double the empty complex")

    d = C.dim
    base = DeltaComplex.from_simplicial(C)
    origin = {cell.id: tuple(sorted(base.vertex_labels(cell.id))) for cell in base.cells}
    taken = set(C.vertices)
    next_id = max(origin) + 1

    cells: List[DeltaCell] = list(base.cells)
    copies: Dict[Tuple[str, ...], Tuple[int, int]] = {}
    for cell in base.cells_of_dim(d):
        label = None
        if d == 0:
            label = fresh_label(f"{cell.label}#1", taken)
            taken.add(label)
        cells.append(DeltaCell(next_id, d, cell.faces, label))
        copies[origin[cell.id]] = (cell.id, next_id)
        origin[next_id] = origin[cell.id]
        next_id += 1

    delta = DeltaComplex(cells)
    logger.debug(f"Doubled {len(copies)} cells of dimension {d}: f={f_vector(delta)}")
    return DoubledComplex(C, d, delta, copies, origin)


def select_preimages(DC: DoubledComplex, choice: Optional[Choice] = None) -> SimplicialComplex:
    """Keep one copy of every doubled cell and read the result back as a simplicial complex"""
    if choice is None:
        choice = {cell: 0 for cell in DC.copies}
    missing = [cell for cell in DC.copies if cell not in choice]
    if missing:
        raise InvalidInputError(f"no copy chosen for {format_cell(missing[0])}")
    for cell, index in choice.items():
        if cell not in DC.copies:
            raise InvalidInputError(f"{format_cell(cell)} is not a doubled cell")
        if index not in (0, 1):
            raise InvalidInputError(f"copy index must be 0 or 1, got {index}")

    dropped = {ids[1 - choice[cell]] for cell, ids in DC.copies.items()}
    kept = []
    for cell in DC.delta.cells:
        if cell.id in dropped:
            continue
        if cell.dim == 0:
            cell = DeltaCell(cell.id, 0, (), DC.origin[cell.id][0])
        kept.append(cell)
    return DeltaComplex(kept).to_simplicial()


@dataclass(frozen=True)
class RoundtripReport:
    holds: bool
    top_cells: int
    choices_checked: int
    exhaustive: bool
    witness: Optional[Dict[str, int]] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict[str, object]:
        return {
            "roundtrip": self.holds,
            "top_cells": self.top_cells,
            "choices_checked": self.choices_checked,
            "exhaustive": self.exhaustive,
            "witness": self.witness,
        }


def _choices(cells: List[Tuple[str, ...]], bits: int, samples: int, rng: random.Random) -> Tuple[Iterator[Tuple[int, ...]], int, bool]:
    k = len(cells)
    if k <= bits:
        return itertools.product((0, 1), repeat=k), 2 ** k, True
    picked = [(0,) * k, (1,) * k]
    picked += [tuple(rng.randrange(2) for _ in range(k)) for _ in range(max(samples - 2, 0))]
    return iter(picked), len(picked), False


def verify_roundtrip(
    C: SimplicialComplex,
    exhaustive_bits: Optional[int] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> RoundtripReport:
    """Doubling then deleting one copy of each top cell gives back C"""
    bits = Config.ROUNDTRIP_EXHAUSTIVE_BITS if exhaustive_bits is None else exhaustive_bits
    count = Config.ROUNDTRIP_SAMPLES if samples is None else samples
    rng = random.Random(Config.SEED if seed is None else seed)

    DC = double_cover_complex(C)
    expected = f_vector(C).counts
    doubled = f_vector(DC.delta).counts
    if doubled[:-1] != expected[:-1] or doubled[-1] != 2 * expected[-1]:
        raise CertificationError("doubling changed the wrong cell counts", witness=list(doubled))

    cells = sorted(DC.copies)
    choices, total, exhaustive = _choices(cells, bits, count, rng)
    for bits_chosen in choices:
        choice = dict(zip(cells, bits_chosen))
        if select_preimages(DC, choice) != C:
            witness = {",".join(cell): index for cell, index in choice.items()}
            logger.error(f"Roundtrip failed for choice {witness}")
            return RoundtripReport(False, len(cells), total, exhaustive, witness)

    logger.info(f"Roundtrip verified on {total} choice functions ({'exhaustive' if exhaustive else 'sampled'})")
    return RoundtripReport(True, len(cells), total, exhaustive)
