import logging
from typing import Dict, Optional, Sequence, Tuple

from dualcx.arrangement import build_arrangement, initial_dual_complex, stratum_dimension, verify_general_position
from dualcx.blowup import run_construction
from dualcx.complexes import SimplicialComplex, f_vector, is_normal_pseudomanifold, vertex_degrees
from dualcx.criteria import cartier_singularity_criterion, rational_nef_obstructions, rational_singularity_criterion
from dualcx.group_complex import build_presentation_complex, cycles_from_file, parse_presentation, q_superperfect_report
from dualcx.homology import Complex, boundary_squares_to_zero, homology
from dualcx.local_models import (
    nodal_pair,
    resolve_after_z_blowup,
    singularity_chart_report,
    small_resolution_trace,
    strata_blowup_chart,
    z_blowup_model,
)
from dualcx.models import EMPTY, Ring
from dualcx.storage import complex_to_dict, load_cycles
from dualcx.surgery import double_cover_complex, verify_roundtrip
from dualcx.utils import format_fvector

logger = logging.getLogger(__name__)


class RealizationService:
    """Build the JSON reports behind each command.

    Every method returns (report, ok); ok False means a certification failed.
    """

    @staticmethod
    def realize(C: SimplicialComplex, n: Optional[int] = None, nodes: Optional[Sequence] = None) -> Tuple[Dict, bool]:
        trace = run_construction(C, n, nodes)
        logger.info(f"Realization finished in {len(trace.steps)} steps, certified={trace.certified}")
        return trace.to_dict(), trace.certified

    @staticmethod
    def homology_report(C: Complex, ring: Ring = Ring.Z) -> Tuple[Dict, bool]:
        closed = boundary_squares_to_zero(C)
        profile = homology(C, ring)
        report = profile.to_dict(ring)
        report["f_vector"] = list(f_vector(C).counts)
        report["euler_characteristic"] = f_vector(C).euler_characteristic()
        agrees = profile.euler_characteristic == report["euler_characteristic"]
        if not agrees:
            logger.error(f"Euler characteristic {report['euler_characteristic']} differs from the Betti sum")
        return report, closed and agrees

    @staticmethod
    def arrangement_report(
        labels: Sequence[str],
        n: int,
        nodes: Optional[Sequence] = None,
        check: bool = False,
    ) -> Tuple[Dict, bool]:
        A = build_arrangement(labels, n, nodes)
        report: Dict[str, object] = {"arrangement": A.to_dict()}
        if not check:
            return report, True

        general = verify_general_position(A)
        report["general_position"] = general.to_dict()
        if not general:
            return report, False

        # one representative per size; initial_dual_complex certifies all of them
        report["strata"] = [
            {"size": size, "dimension": _dimension_text(stratum_dimension(A, A.labels[:size]))}
            for size in range(1, min(len(A.labels), n + 2) + 1)
        ]
        skeleton = initial_dual_complex(A)
        report["initial_dual_complex"] = {**complex_to_dict(skeleton), "f_vector": list(f_vector(skeleton).counts)}
        return report, True

    @staticmethod
    def surgery_roundtrip(C: SimplicialComplex) -> Tuple[Dict, bool]:
        result = verify_roundtrip(C)
        return result.to_dict(), result.holds

    @staticmethod
    def surgery_double(C: SimplicialComplex) -> Tuple[Dict, bool]:
        return double_cover_complex(C).to_dict(), True

    @staticmethod
    def localmodel_resolve(r: int) -> Tuple[Dict, bool]:
        tree = small_resolution_trace(nodal_pair(r))
        return tree.to_dict(), tree.certified

    @staticmethod
    def localmodel_zblowup(r: int, resolve: bool = False) -> Tuple[Dict, bool]:
        if resolve:
            chart, tree = resolve_after_z_blowup(r)
            return {"smooth_chart": chart.to_dict(), "resolution": tree.to_dict()}, tree.certified
        chart, model = z_blowup_model(r)
        return {"smooth_chart": chart.to_dict(), "nodal_chart": model.to_dict()}, chart.smooth

    @staticmethod
    def localmodel_chart(n_branches: int, r_center: int) -> Tuple[Dict, bool]:
        result = strata_blowup_chart(n_branches, r_center)
        return result.to_dict(), result.star_removal_agrees

    @staticmethod
    def group_report(
        generators: Sequence[str],
        relators: Sequence[str],
        cycles_path: Optional[str] = None,
    ) -> Tuple[Dict, bool, SimplicialComplex]:
        P = parse_presentation(generators, relators)
        cycles = None
        if cycles_path:
            cycles = cycles_from_file(build_presentation_complex(P), load_cycles(cycles_path))
        report = q_superperfect_report(P, cycles)
        ok = report.h3_vanishes is not False
        return report.to_dict(), ok, report.simplicial

    @staticmethod
    def criteria_report(C: SimplicialComplex, n: Optional[int] = None) -> Tuple[Dict, bool]:
        n = C.dim if n is None else n
        obstructions = rational_nef_obstructions(C)
        report = {
            "f_vector": format_fvector(f_vector(C).counts),
            "rational_singularity": rational_singularity_criterion(C, n).to_dict(),
            "cartier_singularity": cartier_singularity_criterion(C, n).to_dict(),
            "pseudomanifold": is_normal_pseudomanifold(C).to_dict(),
            "vertex_degrees": vertex_degrees(C),
            "rational_nef_obstructions": [o.to_dict() for o in obstructions],
            "local_charts": singularity_chart_report(C),
        }
        return report, True


def _dimension_text(dimension) -> object:
    return "empty" if dimension is EMPTY else dimension
