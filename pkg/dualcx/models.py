from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class IsoMode(Enum):
    """Isomorphism comparison modes"""
    LABELED = "labeled"
    UNLABELED = "unlabeled"


class Ring(Enum):
    """Coefficient rings for homology reports"""
    Z = "Z"
    Q = "Q"


class StratumKind(Enum):
    """Marker for an intersection of hyperplanes with no points"""
    EMPTY = "empty"


EMPTY = StratumKind.EMPTY


class ModelKind(Enum):
    """Local equation shapes of a pair (Y, D)"""
    SNC_PAIR = "snc_pair"
    NODAL_PAIR = "nodal_pair"


class BlowupKind(Enum):
    """What a blow-up step was performed on"""
    STRATUM = "stratum"    # center inside the snc variety: star removal
    AMBIENT = "ambient"    # center inside the ambient pair: stellar subdivision


class PseudomanifoldCondition(Enum):
    """Conditions of a normal pseudomanifold, in checking order"""
    PURE = "pure"
    LINK_CONNECTED = "link_connected"
    RIDGE_DEGREE = "ridge_degree"
    STRONGLY_CONNECTED = "strongly_connected"


# File schemas

class ComplexFile(BaseModel):
    """Simplicial complex given by its facets; faces are implied"""
    vertices: List[str] = Field(default_factory=list)
    facets: List[List[str]]

    @model_validator(mode="after")
    def _facets_nonempty(self):
        for facet in self.facets:
            if not facet:
                raise ValueError("facets must be nonempty")
        return self


class DeltaCellRecord(BaseModel):
    id: int
    dim: int = Field(ge=0)
    label: Optional[str] = None
    faces: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def _shape(self):
        if self.dim == 0 and self.label is None:
            raise ValueError(f"0-cell {self.id} needs a label")
        if self.dim > 0 and len(self.faces) != self.dim + 1:
            raise ValueError(f"{self.dim}-cell {self.id} needs {self.dim + 1} faces")
        return self


class DeltaComplexFile(BaseModel):
    cells: List[DeltaCellRecord]


class CycleRecord(BaseModel):
    """A 2-cycle, either a relator's fan chain or explicit coefficients"""
    relator: Optional[int] = None
    coefficients: Dict[int, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _one_source(self):
        if (self.relator is None) == (not self.coefficients):
            raise ValueError("give exactly one of 'relator' or 'coefficients'")
        return self


class CyclesFile(BaseModel):
    cycles: List[CycleRecord]
