from fractions import Fraction
from typing import Iterable, List, Sequence


def format_cell(cell: Iterable[str]) -> str:
    """Format a cell as its sorted labels"""
    return "{" + ",".join(sorted(cell)) + "}"


def format_fvector(counts: Sequence[int]) -> str:
    """Format an f-vector as (f0,f1,...)"""
    return "(" + ",".join(str(c) for c in counts) + ")"


def format_fraction(value: Fraction) -> str:
    """Format an exact rational for JSON output"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    """Parse '3', '-2' or '1/2' exactly"""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational number: {text!r}") from e


def parse_label_list(text: str) -> List[str]:
    """Split a comma separated list, dropping blanks"""
    return [part.strip() for part in text.split(",") if part.strip()]


def sorted_cells(cells: Iterable[frozenset]) -> List[tuple]:
    """Canonical order: by dimension, then lexicographic in sorted labels"""
    return sorted((tuple(sorted(c)) for c in cells), key=lambda t: (len(t), t))