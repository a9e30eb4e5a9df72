import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy import Mul, Poly, Symbol

from dualcx.complexes import SimplicialComplex, full_skeleton, remove_star
from dualcx.core.exceptions import CertificationError, InvalidInputError
from dualcx.models import ModelKind

logger = logging.getLogger(__name__)

# Coordinates not attached to a branch
Y_N = "yn"
Y_N1 = "yn1"


def _default_branches(r: int, prefix: str = "y") -> Tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, r + 1))


@dataclass(frozen=True)
class LocalModel:
    """Local equation shape of a pair (Y, D).

    SNC_PAIR: smooth Y, D = (product of branches = 0).
    NODAL_PAIR: Y = (product of branches = yn * yn1), D = (product of branches = yn1 = 0).
    split: branches carried by smooth factors split off as direct factors, each
    marked by its coordinate hyperplane.
    """
    kind: ModelKind
    branches: Tuple[str, ...] = ()
    split: Tuple[str, ...] = ()
    smooth_factors: int = 0

    def __post_init__(self):
        if self.kind is ModelKind.NODAL_PAIR and not self.branches:
            raise InvalidInputError("a nodal pair needs at least one branch")
        if len(set(self.branches) | set(self.split)) != len(self.branches) + len(self.split):
            raise InvalidInputError("branch labels must be distinct")
        if self.smooth_factors < len(self.split):
            raise InvalidInputError("every split branch lives on its own smooth factor")

    @property
    def r(self) -> int:
        return len(self.branches)

    @property
    def divisor_labels(self) -> Tuple[str, ...]:
        return tuple(sorted(self.branches + self.split))

    def is_snc_equivalent(self) -> bool:
        """SNC pairs, and nodal pairs with one branch whose ambient is a smooth graph"""
        return self.kind is ModelKind.SNC_PAIR or self.r == 1

    def ambient_polynomial(self) -> Optional[sympy.Expr]:
        """Defining polynomial of the ambient; None when it is smooth affine space"""
        if self.kind is ModelKind.SNC_PAIR:
            return None
        return Mul(*[Symbol(b) for b in self.branches]) - Symbol(Y_N) * Symbol(Y_N1)

    def equation(self) -> Dict[str, str]:
        product = "*".join(self.branches) or "1"
        if self.kind is ModelKind.SNC_PAIR:
            ambient = "smooth"
            divisor = f"({product} = 0)" if self.branches else "empty"
        else:
            ambient = f"({product} = {Y_N}*{Y_N1})"
            divisor = f"({product} = {Y_N1} = 0)"
        for label in self.split:
            divisor += f" + ({label} = 0 on a split factor)"
        if self.smooth_factors:
            ambient += f" x A^{self.smooth_factors}"
        return {"ambient": ambient, "divisor": divisor}

    def local_dual_complex(self) -> SimplicialComplex:
        """All divisor branches pass through the chart origin"""
        labels = self.divisor_labels
        if not labels:
            return SimplicialComplex(())
        return full_skeleton(labels, len(labels) - 1)

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind.value,
            "r": self.r,
            "branches": list(self.branches),
            "split": list(self.split),
            "smooth_factors": self.smooth_factors,
            "equation": self.equation(),
        }


def snc_pair(r: int, branches: Optional[Sequence[str]] = None) -> LocalModel:
    if r < 0:
        raise InvalidInputError(f"r must be >= 0, got {r}")
    labels = tuple(branches) if branches is not None else _default_branches(r)
    if len(labels) != r:
        raise InvalidInputError(f"{len(labels)} branch labels for r={r}")
    return LocalModel(ModelKind.SNC_PAIR, labels)


def nodal_pair(r: int, branches: Optional[Sequence[str]] = None) -> LocalModel:
    if r < 1:
        raise InvalidInputError(f"a nodal pair needs r >= 1, got {r}")
    labels = tuple(branches) if branches is not None else _default_branches(r)
    if len(labels) != r:
        raise InvalidInputError(f"{len(labels)} branch labels for r={r}")
    return LocalModel(ModelKind.NODAL_PAIR, labels)


@dataclass(frozen=True)
class SmoothChart:
    """A chart asserted smooth away from the divisor"""
    chart: str
    equation: str
    smooth: bool

    def to_dict(self) -> Dict[str, object]:
        return {"chart": self.chart, "equation": self.equation, "smooth": self.smooth}


def z_blowup_model(r: int) -> Tuple[SmoothChart, LocalModel]:
    """Blow up Z = D ∩ H for D = (y1*...*yr = 0) and H = (yn = 0)"""
    if r < 1:
        raise InvalidInputError(f"the blown-up intersection needs r >= 1, got {r}")
    branches = _default_branches(r)
    ys = [Symbol(b) for b in branches]
    s, t, yn = Symbol("s"), Symbol("t"), Symbol(Y_N)
    total = Mul(*ys) * s - yn * t

    # t = 1: the equation is solved for yn, a graph over the other coordinates
    t_chart = total.subs(t, 1)
    smooth = Poly(t_chart, yn).degree() == 1 and Poly(t_chart, yn).LC() == -1
    smooth_chart = SmoothChart("t", f"{Y_N} = {'*'.join(branches)}*s", smooth)
    if not smooth:
        raise CertificationError("t-chart of the blow-up is not a graph", witness=str(t_chart))

    # s = 1: y1*...*yr = yn*t with t playing the role of yn1
    s_chart = sympy.expand(total.subs(s, 1).subs(t, Symbol(Y_N1)))
    model = nodal_pair(r, branches)
    if sympy.expand(s_chart - model.ambient_polynomial()) != 0:
        raise CertificationError("s-chart is not the nodal model", witness=str(s_chart))
    logger.debug(f"Chart s of the blow-up of Z with r={r}: {model.equation()['ambient']}")
    return smooth_chart, model


def component_blowup(model: LocalModel) -> Tuple[LocalModel, LocalModel]:
    """Blow up the last nodal branch (yr = yn1 = 0); returns the two charts"""
    if model.kind is not ModelKind.NODAL_PAIR:
        raise InvalidInputError(f"component blow-up needs a nodal pair, got {model.kind.value}")

    *rest, last = model.branches
    ys = {b: Symbol(b) for b in model.branches}
    yn, yn1 = Symbol(Y_N), Symbol(Y_N1)
    fresh = Symbol(f"{last}'")
    equation = model.ambient_polynomial()

    # chart 1: yr = yr' * yn1, strict transform is linear in yn
    strict = sympy.cancel(equation.subs(ys[last], fresh * yn1) / yn1)
    poly = Poly(strict, yn)
    if poly.degree() != 1 or not poly.LC().is_number:
        raise CertificationError("first chart of the component blow-up is singular", witness=str(strict))
    first = LocalModel(ModelKind.SNC_PAIR, (last,), model.split, model.smooth_factors)

    # chart 2: yn1 = yn1' * yr, the yr coordinate splits off
    strict = sympy.cancel(equation.subs(yn1, Symbol(f"{Y_N1}'") * ys[last]) / ys[last])
    if rest:
        second = LocalModel(ModelKind.NODAL_PAIR, tuple(rest), model.split + (last,), model.smooth_factors + 1)
        expected = second.ambient_polynomial().subs(yn1, Symbol(f"{Y_N1}'"))
    else:
        second = LocalModel(ModelKind.SNC_PAIR, (), model.split + (last,), model.smooth_factors + 1)
        expected = 1 - yn * Symbol(f"{Y_N1}'")
    if sympy.expand(strict - expected) != 0:
        raise CertificationError("second chart of the component blow-up has the wrong shape", witness=str(strict))

    logger.debug(f"Chart split after blowing up {last}: r {model.r} -> {second.r}")
    return first, second


@dataclass
class ChartNode:
    model: LocalModel
    blown_up: Optional[str] = None
    children: List["ChartNode"] = field(default_factory=list)

    def leaves(self) -> List[LocalModel]:
        if not self.children:
            return [self.model]
        return [leaf for child in self.children for leaf in child.leaves()]

    def depth(self) -> int:
        return 1 + max((child.depth() for child in self.children), default=-1)

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {"model": self.model.to_dict()}
        if self.children:
            data["blown_up"] = self.blown_up
            data["charts"] = [child.to_dict() for child in self.children]
        return data


@dataclass
class ChartTree:
    root: ChartNode
    order: List[str]
    certified: bool

    @property
    def depth(self) -> int:
        return self.root.depth()

    def leaves(self) -> List[LocalModel]:
        return self.root.leaves()

    def to_dict(self) -> Dict[str, object]:
        leaves = self.leaves()
        return {
            "depth": self.depth,
            "leaf_count": len(leaves),
            "all_leaves_snc": all(leaf.kind is ModelKind.SNC_PAIR for leaf in leaves),
            "order": list(self.order),
            "dual_complex_unchanged": self.certified,
            "tree": self.root.to_dict(),
        }


def _union(complexes: Sequence[SimplicialComplex]) -> SimplicialComplex:
    vertices = sorted({v for C in complexes for v in C.vertices})
    return SimplicialComplex(vertices, {cell for C in complexes for cell in C.cells})


def small_resolution_trace(model: LocalModel) -> ChartTree:
    """Blow up nodal branches one at a time until every chart is an SNC pair"""
    if model.kind is not ModelKind.NODAL_PAIR:
        raise InvalidInputError(f"small resolution starts from a nodal pair, got {model.kind.value}")

    root = ChartNode(model)
    order: List[str] = []
    certified = True
    node = root
    while node.model.kind is ModelKind.NODAL_PAIR:
        first, second = component_blowup(node.model)
        node.blown_up = node.model.branches[-1]
        node.children = [ChartNode(first), ChartNode(second)]
        order.append(node.blown_up)

        # the charts together see exactly the simplex on the parent's branches
        glued = _union([first.local_dual_complex(), second.local_dual_complex()])
        if glued != node.model.local_dual_complex():
            logger.error(f"Chart dual complexes after blowing up {node.blown_up} do not glue back")
            certified = False
        node = node.children[1]

    tree = ChartTree(root, order, certified)
    if tree.depth != model.r:
        raise CertificationError(f"resolution depth {tree.depth} differs from r={model.r}")
    return tree


def resolve_after_z_blowup(r: int) -> Tuple[SmoothChart, ChartTree]:
    """Two-stage local construction: blow up D ∩ H, then resolve the nodal chart"""
    smooth_chart, model = z_blowup_model(r)
    return smooth_chart, small_resolution_trace(model)


@dataclass(frozen=True)
class StrataChartResult:
    n_branches: int
    r_center: int
    before: Tuple[str, ...]
    after: Tuple[str, ...]
    chart_equation: str
    dropped: Tuple[str, ...]
    star_removal_agrees: bool
    degenerate: bool

    def to_dict(self) -> Dict[str, object]:
        return {
            "n_branches": self.n_branches,
            "r_center": self.r_center,
            "before": list(self.before),
            "after": list(self.after),
            "chart_equation": self.chart_equation,
            "dropped": list(self.dropped),
            "star_removal_agrees": self.star_removal_agrees,
            "degenerate": self.degenerate,
        }


def _strict_branches(n_branches: int, r_center: int, chart: int) -> Tuple[Tuple[str, ...], str]:
    xs = [Symbol(f"x{i}") for i in range(1, n_branches + 1)]
    center = xs[:r_center]
    pivot = xs[chart - 1]
    primed = {x: Symbol(f"{x.name}'") for x in center if x != pivot}
    total = Mul(*xs).subs({x: p * pivot for x, p in primed.items()}, simultaneous=True)
    multiplicity = Poly(Mul(*xs), *center).total_degree()
    strict = sympy.cancel(total / pivot ** multiplicity)
    if strict.has(pivot):
        raise CertificationError("exceptional coordinate survives in the strict transform", witness=str(strict))
    _, factors = sympy.factor_list(strict)
    names = tuple(sorted(str(f) for f, _ in factors))
    equation = f"{'*'.join(names) or '1'} = 0"
    return names, equation


def strata_blowup_chart(n_branches: int, r_center: int) -> StrataChartResult:
    """Blow up (x1 = ... = xr = 0) on (x1*...*xn = 0) and read off the branches in the xr chart"""
    if n_branches < 1 or not 1 <= r_center <= n_branches:
        raise InvalidInputError(f"need 1 <= r_center <= n_branches, got ({n_branches}, {r_center})")

    before = tuple(f"x{i}" for i in range(1, n_branches + 1))
    after, equation = _strict_branches(n_branches, r_center, r_center)
    degenerate = r_center == 1
    if degenerate:
        # blowing up a Cartier divisor is an isomorphism; the exceptional divisor replaces x1
        after, dropped = before, ()
    else:
        unprimed = {name.rstrip("'") for name in after}
        dropped = tuple(b for b in before if b not in unprimed)

    # union over the charts x1..xr of the simplices on the surviving branches
    charts = []
    for chart in range(1, r_center + 1):
        names, _ = _strict_branches(n_branches, r_center, chart)
        labels = sorted(name.rstrip("'") for name in names)
        charts.append(full_skeleton(labels, len(labels) - 1) if labels else SimplicialComplex(()))
    simplex = full_skeleton(before, n_branches - 1)
    agrees = _union(charts) == remove_star(simplex, before[:r_center])

    return StrataChartResult(
        n_branches=n_branches,
        r_center=r_center,
        before=before,
        after=after,
        chart_equation=equation,
        dropped=dropped,
        star_removal_agrees=agrees,
        degenerate=degenerate,
    )


def singularity_chart_report(C: SimplicialComplex) -> List[Dict[str, object]]:
    """Resolution data of the nodal chart at points where r components of D meet"""
    if C.is_empty():
        raise InvalidInputError("chart report needs a nonempty complex")
    report = []
    for r in range(1, C.dim + 2):
        tree = small_resolution_trace(nodal_pair(r))
        report.append({
            "r": r,
            "strata": len(C.cells_of_dim(r - 1)),
            "depth": tree.depth,
            "leaf_count": len(tree.leaves()),
            "dual_complex_unchanged": tree.certified,
        })
    return report
