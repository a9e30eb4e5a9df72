import json
import random

import pytest

from dualcx.complexes import DeltaCell, DeltaComplex, SimplicialComplex, full_skeleton
from dualcx.core.config import Config

RP2_6_FACETS = [
    ("1", "2", "3"), ("1", "3", "4"), ("1", "4", "5"), ("1", "5", "6"), ("1", "2", "6"),
    ("2", "3", "5"), ("3", "4", "6"), ("2", "4", "5"), ("3", "5", "6"), ("2", "4", "6"),
]

# triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7
TORUS_7_FACETS = [
    tuple(str((i + k) % 7) for k in shape)
    for i in range(7)
    for shape in ((0, 1, 3), (0, 2, 3))
]

# Möbius strip on 0..4 glued to a second Möbius strip along the 5-cycle 0-2-4-1-3
KLEIN_8_FACETS = [
    ("0", "1", "2"), ("1", "2", "3"), ("2", "3", "4"), ("0", "3", "4"), ("0", "1", "4"),
    ("0", "5", "6"), ("0", "6", "7"), ("0", "2", "7"), ("2", "5", "7"), ("2", "4", "5"),
    ("4", "5", "6"), ("1", "4", "6"), ("1", "6", "7"), ("1", "3", "7"), ("3", "5", "7"),
    ("0", "3", "5"),
]


def cycle(k: int) -> SimplicialComplex:
    labels = [f"v{i}" for i in range(k)]
    return SimplicialComplex.from_facets([(labels[i], labels[(i + 1) % k]) for i in range(k)])


def path() -> SimplicialComplex:
    return SimplicialComplex.from_facets([("a", "b"), ("b", "c")])


def hollow_triangle() -> SimplicialComplex:
    return full_skeleton(["a", "b", "c"], 1)


def boundary_tetrahedron() -> SimplicialComplex:
    return full_skeleton(["a", "b", "c", "d"], 2)


def rp2() -> SimplicialComplex:
    return SimplicialComplex.from_facets(RP2_6_FACETS)


def torus() -> SimplicialComplex:
    return SimplicialComplex.from_facets(TORUS_7_FACETS)


def klein_bottle() -> SimplicialComplex:
    return SimplicialComplex.from_facets(KLEIN_8_FACETS)


def rp2_delta() -> DeltaComplex:
    """Two triangles, three edges, two vertices"""
    return DeltaComplex([
        DeltaCell(0, 0, (), "v"),
        DeltaCell(1, 0, (), "w"),
        DeltaCell(2, 1, (1, 0)),
        DeltaCell(3, 1, (1, 0)),
        DeltaCell(4, 1, (0, 0)),
        DeltaCell(5, 2, (2, 3, 4)),
        DeltaCell(6, 2, (3, 2, 4)),
    ])


def circle_delta() -> DeltaComplex:
    return DeltaComplex([DeltaCell(0, 0, (), "v"), DeltaCell(1, 1, (0, 0))])


def random_complex(rng: random.Random, max_vertices: int = 8, max_dim: int = 3):
    """Random complex on all of its vertex labels, with an ambient dimension that fits it"""
    m = rng.randint(1, max_vertices)
    n = rng.randint(0, max_dim)
    labels = [f"x{i}" for i in range(m)]
    facets = [
        tuple(rng.sample(labels, rng.randint(1, min(m, n + 1))))
        for _ in range(rng.randint(0, 2 * m))
    ]
    return SimplicialComplex.from_facets(facets, labels), n


def random_corpus(count: int = 50, seed: int = 0):
    rng = random.Random(seed)
    return [random_complex(rng) for _ in range(count)]


def named_corpus():
    corpus = {
        "path": path(),
        "boundary_tetrahedron": boundary_tetrahedron(),
        "rp2": rp2(),
        "torus": torus(),
        "klein_bottle": klein_bottle(),
    }
    for k in range(3, 9):
        corpus[f"cycle{k}"] = cycle(k)
    return corpus


@pytest.fixture(autouse=True)
def fixed_config(monkeypatch):
    monkeypatch.setattr(Config, "SEED", 0)
    monkeypatch.setattr(Config, "ENUMERATION_LIMIT", 20000)
    monkeypatch.setattr(Config, "SAMPLE_SIZE", 2000)
    monkeypatch.setattr(Config, "ROUNDTRIP_EXHAUSTIVE_BITS", 10)
    monkeypatch.setattr(Config, "ROUNDTRIP_SAMPLES", 256)
    monkeypatch.setattr(Config, "HOMOLOGY_CROSS_CHECK", True)
    monkeypatch.setattr(Config, "DEBUG_MODULES", [])
    monkeypatch.setattr(Config, "LOG_FILE", "")


@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        target = tmp_path / name
        target.write_text(json.dumps(data), encoding="utf-8")
        return str(target)

    return write
