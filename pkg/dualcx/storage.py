import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from pydantic import ValidationError

from dualcx.complexes import DeltaCell, DeltaComplex, SimplicialComplex
from dualcx.core.exceptions import InvalidInputError
from dualcx.models import ComplexFile, CyclesFile, DeltaComplexFile

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def dumps(data: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline"""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_json(path: PathLike) -> Any:
    """Read a JSON document"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInputError(f"cannot read {path}: {e.strerror or e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"{path}: malformed JSON at line {e.lineno}: {e.msg}") from e


def save_json(path: PathLike, data: Any):
    """Write a JSON document in canonical form"""
    Path(path).write_text(dumps(data), encoding="utf-8")
    logger.info(f"Wrote {path}")


def complex_to_dict(C: SimplicialComplex) -> Dict[str, List]:
    return {"vertices": list(C.vertices), "facets": [list(f) for f in C.facets()]}


def complex_from_dict(data: Any) -> SimplicialComplex:
    try:
        record = ComplexFile.model_validate(data)
    except ValidationError as e:
        raise InvalidInputError(f"invalid complex file: {e.errors()[0]['msg']}") from e
    return SimplicialComplex.from_facets(record.facets, record.vertices)


def delta_to_dict(D: DeltaComplex) -> Dict[str, List]:
    cells = []
    for cell in D.cells:
        if cell.dim == 0:
            cells.append({"id": cell.id, "dim": 0, "label": cell.label})
        else:
            cells.append({"id": cell.id, "dim": cell.dim, "faces": list(cell.faces)})
    return {"cells": cells}


def delta_from_dict(data: Any) -> DeltaComplex:
    try:
        record = DeltaComplexFile.model_validate(data)
    except ValidationError as e:
        raise InvalidInputError(f"invalid Δ-complex file: {e.errors()[0]['msg']}") from e
    return DeltaComplex(DeltaCell(c.id, c.dim, tuple(c.faces), c.label) for c in record.cells)


def load_complex(path: PathLike) -> SimplicialComplex:
    """Load a simplicial complex file, or a Δ-complex file whose cells are simplices"""
    data = load_json(path)
    if isinstance(data, dict) and "cells" in data and "facets" not in data:
        return delta_from_dict(data).to_simplicial()
    return complex_from_dict(data)


def load_delta_complex(path: PathLike) -> DeltaComplex:
    data = load_json(path)
    if isinstance(data, dict) and "facets" in data:
        return DeltaComplex.from_simplicial(complex_from_dict(data))
    return delta_from_dict(data)


def load_cycles(path: PathLike) -> CyclesFile:
    try:
        return CyclesFile.model_validate(load_json(path))
    except ValidationError as e:
        raise InvalidInputError(f"invalid cycles file: {e.errors()[0]['msg']}") from e


def save_complex(path: PathLike, C: SimplicialComplex):
    save_json(path, complex_to_dict(C))
