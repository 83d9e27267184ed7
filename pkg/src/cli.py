"""
Command-line surface

Every command prints one CommandResult JSON object on stdout; logs go to
stderr. Exit codes: 0 pass, 1 check or verification failure, 2 input error.

Usage:
    python -m src.main check tests/fixtures/t_f2_t3.json
    python -m src.main pi tests/fixtures/t_f2_t3.json --n 1 --oracle
    python -m src.main defrep z2.json trivial.json --ring t^2
    python -m src.main verify --suite pi --seed 1
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Optional

from .ainfty import DGAlgebraPresentation, InftyMorphism, ShiftedAInftyAlgebra, check_morphism, check_stasheff
from .commutator import commutator
from .constructions import twist_algebra
from .defrep import ArtinLocalRing, classify_deformations
from .documents import (
    algebra_from_document,
    algebra_to_document,
    dga_from_document,
    group_from_document,
    load_document,
    morphism_from_document,
    morphism_to_document,
    parse_document,
    parse_vector_argument,
    representation_from_document,
    table_models,
)
from .exceptions import DocumentParseError, EngineError, InputError
from .homotopy_ops import StrictPullback, factorize, is_weak_equivalence_morphism
from .logging_config import get_logger
from .maurer_cartan import enumerate_mc, gauge_orbits, solve_mc_symbolic
from .metrics import render_metrics
from .models import CommandResult, DocumentKind
from .nerve import GroupPresentation, Nerve, pi0_matches_gauge, pi_n_oracle, pi_n_theorem
from .transfer import transfer
from .verification import SUITES, run_reproducer, run_suite

logger = get_logger(__name__)

# (ok, result payload)
Outcome = tuple[bool, dict[str, Any]]

_ALGEBRA_KINDS = [DocumentKind.AINFTY.value, DocumentKind.DGA.value]

# ============================================================
# Loading
# ============================================================

def _algebra(path: str) -> ShiftedAInftyAlgebra:
    return algebra_from_document(load_document(path, _ALGEBRA_KINDS))


def _dga(path: str) -> DGAlgebraPresentation:
    document = load_document(path, [DocumentKind.DGA.value])
    return dga_from_document(document)


def _morphism(path: str) -> InftyMorphism:
    return morphism_from_document(load_document(path, [DocumentKind.MORPHISM.value]))


def _dump(model) -> dict[str, Any]:
    return model.model_dump(mode="json")


def _summary(A: ShiftedAInftyAlgebra) -> dict[str, Any]:
    return {
        "label": A.label,
        "characteristic": A.field.characteristic,
        "dimension": A.dimension,
        "nilpotency": A.nilpotency,
        "arities": sorted(A.operations),
    }


def _group(G: GroupPresentation) -> dict[str, Any]:
    return {
        "order": G.order,
        "abelian": G.is_abelian,
        "cyclic": G.is_cyclic,
        "element_orders": G.order_profile(),
        "elements": G.labels,
        "identity": G.labels[G.identity],
        "table": G.table,
    }

# ============================================================
# Commands
# ============================================================

def cmd_check(args: argparse.Namespace) -> Outcome:
    document = load_document(args.document, _ALGEBRA_KINDS + [DocumentKind.MORPHISM.value])
    if getattr(document, "kind", None) in (DocumentKind.MORPHISM, DocumentKind.MORPHISM.value):
        phi = morphism_from_document(document)
        ok = check_morphism(phi)
        return ok, {
            "kind": "morphism",
            "morphism": ok,
            "strict": phi.is_strict,
            "weak_equivalence": is_weak_equivalence_morphism(phi),
        }
    A = algebra_from_document(document)
    ok = check_stasheff(A)
    return ok, {"kind": "algebra", "stasheff": ok, **_summary(A)}


def cmd_mc(args: argparse.Namespace) -> Outcome:
    A = _algebra(args.document)
    if not A.field.is_finite:
        variety = solve_mc_symbolic(A)
        return True, {
            "parameters": [str(p) for p in variety.parameters],
            "constraints": [str(c) for c in variety.constraints],
            "point": {A.space.names[i]: str(v) for i, v in sorted(variety.point.items())},
        }
    elements = enumerate_mc(A)
    return True, {"count": len(elements), "elements": [A.space.format_vector(a) for a in elements]}


def cmd_nerve(args: argparse.Namespace) -> Outcome:
    A = _algebra(args.document)
    nerve = Nerve(A)
    simplices = nerve.simplices(args.dim)
    rendered = [
        {
            "phi" + "".join(str(v) for v in label): A.space.format_vector(component)
            for label, component in nerve.components(x).items()
        }
        for x in simplices
    ]
    return True, {"dimension": args.dim, "count": len(simplices), "simplices": rendered}


def cmd_pi(args: argparse.Namespace) -> Outcome:
    A = _algebra(args.document)
    basepoint = parse_vector_argument(A.space, args.basepoint)
    compute = pi_n_oracle if args.oracle else pi_n_theorem
    G = compute(A, args.n, basepoint)
    return True, {"n": args.n, "method": "oracle" if args.oracle else "theorem", "group": _group(G)}


def cmd_gauge(args: argparse.Namespace) -> Outcome:
    C = _dga(args.document)
    orbits = gauge_orbits(C)
    matches = pi0_matches_gauge(C)
    return matches, {
        "orbits": [[C.space.format_vector(x) for x in orbit] for orbit in orbits],
        "matches_pi0": matches,
    }


def cmd_pullback(args: argparse.Namespace) -> Outcome:
    pullback = StrictPullback(_morphism(args.phi), _morphism(args.theta))
    ok = pullback.check_conjugation()
    return ok, {
        "algebra": _dump(algebra_to_document(pullback.algebra)),
        "first": _dump(morphism_to_document(pullback.first)),
        "second": _dump(morphism_to_document(pullback.second)),
        "conjugation": ok,
    }


def cmd_factorize(args: argparse.Namespace) -> Outcome:
    result = factorize(_morphism(args.theta))
    return True, {
        "weak_equivalence": _dump(morphism_to_document(result.weak_equivalence)),
        "fibration": _dump(morphism_to_document(result.fibration)),
        "fibration_is_acyclic": result.fibration_is_acyclic,
    }


def cmd_twist(args: argparse.Namespace) -> Outcome:
    A = _algebra(args.document)
    alpha = parse_vector_argument(A.space, args.alpha)
    twisted = twist_algebra(A, alpha)
    return True, {"algebra": _dump(algebra_to_document(twisted))}


def cmd_commutator(args: argparse.Namespace) -> Outcome:
    A = _algebra(args.document)
    L = commutator(A, check=True)
    tables = {k: op.table for k, op in L.brackets.items()}
    return True, {"brackets": [_dump(t) for t in table_models(L.space, tables)]}


def cmd_defrep(args: argparse.Namespace) -> Outcome:
    group = group_from_document(load_document(args.group, [DocumentKind.GROUP.value]))
    representation = representation_from_document(
        load_document(args.representation, [DocumentKind.REPRESENTATION.value]), group
    )
    ring = ArtinLocalRing.parse(representation.field, args.ring)
    result = classify_deformations(representation, ring, args.top_degree)
    space = result.complex.space
    return result.agrees, {
        "ring": args.ring,
        "counts": {
            "gauge": result.counts[0],
            "nerve": result.counts[1],
            "transferred": result.counts[2],
        },
        "agrees": result.agrees,
        "classes": [[space.format_vector(v) for v in members] for members in result.nerve_classes],
        "gauge_to_nerve": result.gauge_to_nerve,
        "transferred_to_nerve": result.transferred_to_nerve,
    }


def cmd_transfer(args: argparse.Namespace) -> Outcome:
    result = transfer(_algebra(args.document))
    ok = result.is_weak_equivalence
    return ok, {
        "algebra": _dump(algebra_to_document(result.algebra)),
        "morphism": _dump(morphism_to_document(result.morphism)),
        "weak_equivalence": ok,
    }


def cmd_verify(args: argparse.Namespace) -> Outcome:
    if args.reproducer:
        try:
            raw = json.loads(Path(args.reproducer).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise DocumentParseError(f"Cannot read reproducer: {e}", {"file": args.reproducer}) from None
        # a whole failing CheckVerdict is accepted as well as the bare document
        if isinstance(raw, dict) and isinstance(raw.get("reproducer"), dict):
            raw = raw["reproducer"]
        report = run_reproducer(args.suite, parse_document(json.dumps(raw)))
    else:
        report = run_suite(args.suite, args.seed, args.instances, workers=args.workers)
    return report.passed, {"report": _dump(report), "summary": report.summary()}


COMMANDS: dict[str, Callable[[argparse.Namespace], Outcome]] = {
    "check": cmd_check,
    "mc": cmd_mc,
    "nerve": cmd_nerve,
    "pi": cmd_pi,
    "gauge": cmd_gauge,
    "pullback": cmd_pullback,
    "factorize": cmd_factorize,
    "twist": cmd_twist,
    "commutator": cmd_commutator,
    "defrep": cmd_defrep,
    "transfer": cmd_transfer,
    "verify": cmd_verify,
}

# ============================================================
# Parser
# ============================================================

class _Parser(argparse.ArgumentParser):
    """argparse that raises InputError instead of exiting"""

    def error(self, message: str):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ainf-nerve", description="Exact computations with filtered A-infinity algebras")
    parser.add_argument("--metrics-file", help="Write Prometheus metrics here after the command")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("check", help="Validate an algebra or morphism document")
    p.add_argument("document")

    p = sub.add_parser("mc", help="Maurer-Cartan elements")
    p.add_argument("document")

    p = sub.add_parser("nerve", help="Simplices of the nerve at one level")
    p.add_argument("document")
    p.add_argument("--dim", type=int, required=True)

    p = sub.add_parser("pi", help="Homotopy group of the nerve")
    p.add_argument("document")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="Compute from simplicial definitions")
    p.add_argument("--basepoint", help="MC element as name=c,... or a JSON object")

    p = sub.add_parser("gauge", help="Gauge orbits of a dg algebra")
    p.add_argument("document")

    p = sub.add_parser("pullback", help="Pullback of a strict fibration")
    p.add_argument("phi")
    p.add_argument("theta")

    p = sub.add_parser("factorize", help="Weak equivalence followed by a fibration")
    p.add_argument("theta")

    p = sub.add_parser("twist", help="Twist an algebra by an MC element")
    p.add_argument("document")
    p.add_argument("--alpha", required=True)

    p = sub.add_parser("commutator", help="Commutator L-infinity algebra (characteristic 0)")
    p.add_argument("document")

    p = sub.add_parser("defrep", help="Classify deformations of a representation")
    p.add_argument("group")
    p.add_argument("representation")
    p.add_argument("--ring", required=True, help="t^N")
    p.add_argument("--top-degree", type=int, default=None)

    p = sub.add_parser("transfer", help="Transfer the structure to cohomology")
    p.add_argument("document")

    p = sub.add_parser("verify", help="Run a verification suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--reproducer", help="Re-run the suite's checks on one document")
    return parser


def _emit(result: CommandResult) -> None:
    sys.stdout.write(json.dumps(result.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n")


def run(argv: Optional[list[str]] = None) -> int:
    """Parse, dispatch, print; returns the exit code"""
    command = "unknown"
    metrics_file = None
    try:
        args = build_parser().parse_args(argv)
        command, metrics_file = args.command, args.metrics_file
        logger.info("command_started", command=command)
        ok, payload = COMMANDS[command](args)
        _emit(CommandResult(command=command, ok=ok, result=payload))
        code = 0 if ok else 1
    except EngineError as e:
        logger.error("command_failed", command=command, error_code=e.error_code, exit_code=e.exit_code)
        _emit(CommandResult(command=command, ok=False, error=e.to_dict()))
        code = e.exit_code
    if metrics_file:
        Path(metrics_file).write_bytes(render_metrics())
    logger.info("command_finished", command=command, exit_code=code)
    return code
