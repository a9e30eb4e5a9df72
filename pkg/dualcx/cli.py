import argparse
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from dualcx import __version__
from dualcx.core.config import Config
from dualcx.core.exceptions import CertificationError, InvalidInputError
from dualcx.core.logging_setup import setup_logging
from dualcx.models import Ring
from dualcx.services.realization_service import RealizationService
from dualcx.storage import dumps, load_complex, load_delta_complex, save_complex, save_json
from dualcx.utils import parse_fraction, parse_label_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CERTIFICATION = 2


@dataclass
class RunConfig:
    """Resolved command line options"""
    subcommand: str
    action: Optional[str] = None
    inputs: List[str] = field(default_factory=list)
    ambient_dim: Optional[int] = None
    nodes: Optional[List[Fraction]] = None
    trace: Optional[str] = None
    ring: Ring = Ring.Z
    seed: int = 0
    labels: List[str] = field(default_factory=list)
    dim: Optional[int] = None
    check: bool = False
    branches: Optional[int] = None
    center: Optional[int] = None
    resolve: bool = False
    generators: List[str] = field(default_factory=list)
    relators: List[str] = field(default_factory=list)
    cycles: Optional[str] = None
    emit_complex: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        nodes = None
        if getattr(args, "nodes", None):
            try:
                nodes = [parse_fraction(text) for text in parse_label_list(args.nodes)]
            except ValueError as e:
                raise InvalidInputError(str(e)) from e
        relators = [r for text in getattr(args, "rels", None) or [] for r in parse_label_list(text)]
        inputs = [args.complex] if getattr(args, "complex", None) else []
        return cls(
            subcommand=args.command,
            action=getattr(args, "action", None),
            inputs=inputs,
            ambient_dim=getattr(args, "ambient_dim", None),
            nodes=nodes,
            trace=getattr(args, "trace", None),
            ring=Ring(getattr(args, "ring", "Z")),
            seed=args.seed if args.seed is not None else Config.SEED,
            labels=parse_label_list(getattr(args, "labels", "") or ""),
            dim=getattr(args, "dim", None),
            check=getattr(args, "check", False),
            branches=getattr(args, "branches", None),
            center=getattr(args, "center", None),
            resolve=getattr(args, "resolve", False),
            generators=parse_label_list(getattr(args, "gens", "") or ""),
            relators=relators,
            cycles=getattr(args, "cycles", None),
            emit_complex=getattr(args, "emit_complex", None),
        )


@dataclass
class CommandResult:
    report: Dict
    ok: bool
    summary: str


# Handlers

def handle_realize(cfg: RunConfig) -> CommandResult:
    C = load_complex(cfg.inputs[0])
    report, ok = RealizationService.realize(C, cfg.ambient_dim, cfg.nodes)
    if cfg.trace:
        save_json(cfg.trace, report)
    steps = len(report["steps"])
    return CommandResult(report, ok, f"realize: {steps} steps, certificate {'holds' if ok else 'FAILED'}")


def handle_homology(cfg: RunConfig) -> CommandResult:
    C = load_delta_complex(cfg.inputs[0])
    report, ok = RealizationService.homology_report(C, cfg.ring)
    return CommandResult(report, ok, f"homology over {cfg.ring.value}: betti {report['betti']}")


def handle_arrangement(cfg: RunConfig) -> CommandResult:
    if not cfg.labels:
        raise InvalidInputError("--labels is required")
    if cfg.dim is None:
        raise InvalidInputError("--dim is required")
    report, ok = RealizationService.arrangement_report(cfg.labels, cfg.dim, cfg.nodes, cfg.check)
    return CommandResult(report, ok, f"arrangement of {len(cfg.labels)} hyperplanes in P^{cfg.dim + 1}")


def handle_surgery(cfg: RunConfig) -> CommandResult:
    C = load_complex(cfg.inputs[0])
    if cfg.action == "double":
        report, ok = RealizationService.surgery_double(C)
        return CommandResult(report, ok, f"doubled {len(report['copies'])} top cells")
    report, ok = RealizationService.surgery_roundtrip(C)
    return CommandResult(report, ok, f"roundtrip over {report['choices_checked']} choices: {'holds' if ok else 'FAILED'}")


def handle_localmodel(cfg: RunConfig) -> CommandResult:
    if cfg.branches is None:
        raise InvalidInputError("--branches is required")
    if cfg.action == "chart":
        if cfg.center is None:
            raise InvalidInputError("--center is required for chart")
        report, ok = RealizationService.localmodel_chart(cfg.branches, cfg.center)
        return CommandResult(report, ok, f"chart equation {report['chart_equation']}")
    if cfg.action == "zblowup":
        report, ok = RealizationService.localmodel_zblowup(cfg.branches, cfg.resolve)
        return CommandResult(report, ok, f"blow-up of D ∩ H with r={cfg.branches}")
    report, ok = RealizationService.localmodel_resolve(cfg.branches)
    return CommandResult(report, ok, f"small resolution of depth {report['depth']} with {report['leaf_count']} charts")


def handle_group(cfg: RunConfig) -> CommandResult:
    if not cfg.generators:
        raise InvalidInputError("--gens is required")
    report, ok, simplicial = RealizationService.group_report(cfg.generators, cfg.relators, cfg.cycles)
    if cfg.emit_complex:
        save_complex(cfg.emit_complex, simplicial)
    return CommandResult(report, ok, f"q_superperfect={report['q_superperfect']} q_acyclic={report['q_acyclic']}")


def handle_criteria(cfg: RunConfig) -> CommandResult:
    C = load_complex(cfg.inputs[0])
    report, ok = RealizationService.criteria_report(C, cfg.ambient_dim)
    return CommandResult(report, ok, f"rational singularity criterion holds: {report['rational_singularity']['holds']}")


HANDLERS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "realize": handle_realize,
    "homology": handle_homology,
    "arrangement": handle_arrangement,
    "surgery": handle_surgery,
    "localmodel": handle_localmodel,
    "group": handle_group,
    "criteria": handle_criteria,
}


class _Parser(argparse.ArgumentParser):
    """Usage errors count as invalid input"""

    def error(self, message):
        raise InvalidInputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dualcx", description="Realize simplicial complexes as dual complexes of snc configurations")
    parser.add_argument("--version", action="version", version=f"dualcx {__version__}")
    parser.add_argument("--seed", type=int, default=None, help="seed for sampled checks")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    commands = parser.add_subparsers(dest="command", required=True)

    realize = commands.add_parser("realize", help="run the blow-up construction")
    realize.add_argument("complex")
    realize.add_argument("--ambient-dim", type=int, default=None)
    realize.add_argument("--trace", default=None, help="also write the trace to this file")
    realize.add_argument("--nodes", default=None, help="comma separated rational nodes")

    hom = commands.add_parser("homology", help="integral or rational homology")
    hom.add_argument("complex")
    hom.add_argument("--ring", choices=[r.value for r in Ring], default=Ring.Z.value)

    arr = commands.add_parser("arrangement", help="Vandermonde hyperplane arrangement")
    arr.add_argument("--labels", required=True)
    arr.add_argument("--dim", type=int, required=True)
    arr.add_argument("--nodes", default=None)
    arr.add_argument("--check", action="store_true")

    surgery = commands.add_parser("surgery", help="double cover surgery")
    surgery.add_argument("action", choices=["roundtrip", "double"])
    surgery.add_argument("complex")

    local = commands.add_parser("localmodel", help="local chart computations")
    local.add_argument("action", choices=["resolve", "zblowup", "chart"])
    local.add_argument("--branches", type=int, required=True)
    local.add_argument("--center", type=int, default=None)
    local.add_argument("--resolve", action="store_true", help="zblowup: resolve the nodal chart too")

    group = commands.add_parser("group", help="presentation complex report")
    group.add_argument("--gens", required=True)
    group.add_argument("--rels", action="append", default=[], help="relator words, uppercase is inverse")
    group.add_argument("--cycles", default=None)
    group.add_argument("--emit-complex", default=None)

    crit = commands.add_parser("criteria", help="singularity criteria and obstructions")
    crit.add_argument("complex")
    crit.add_argument("--ambient-dim", type=int, default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the exit code"""
    try:
        args = build_parser().parse_args(argv)
    except InvalidInputError as e:
        sys.stderr.write(f"dualcx: {e}\n")
        return EXIT_INVALID

    setup_logging(args.log_level)
    for problem in Config.validate():
        logger.warning(f"Configuration: {problem}")

    try:
        cfg = RunConfig.from_args(args)
        Config.SEED = cfg.seed
        result = HANDLERS[cfg.subcommand](cfg)
    except CertificationError as e:
        logger.error(f"Certification failed: {e}")
        return EXIT_CERTIFICATION
    except (InvalidInputError, ValueError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INVALID

    sys.stdout.write(dumps(result.report))
    sys.stderr.write(f"{result.summary}\n")
    return EXIT_OK if result.ok else EXIT_CERTIFICATION


def run():
    sys.exit(main())
