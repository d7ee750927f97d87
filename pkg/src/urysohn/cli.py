"""Command-line interface.

Every subcommand prints a short human-readable summary followed by a
machine-readable JSON report (sorted keys, rationals as lowest-terms strings).
Output is byte-identical across reruns with the same inputs and seeds.

Exit codes: 0 success, 1 validation or verification failure, 2 budget
exceeded, 3 parse or usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from . import docio
from .admissibility import check_admissible, realize, universality_audit
from .builder import build_rational_urysohn
from .core import format_rational, rational
from .equivariant import orbit_extension
from .errors import (
    BudgetExceeded,
    DegenerateVector,
    NotAdmissible,
    ParameterError,
    ShapeError,
    UrysohnError,
)
from .globalization import globalize, verify_certificate
from .isometry import hall_stage, isometry_group, partial_isometries
from .toeplitz import billiard_chain, build_toeplitz_universal, phi_of

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_vector(text: str) -> tuple:
    try:
        return tuple(rational(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad vector {text!r}: {exc}") from exc


def _parse_perm(text: str) -> tuple:
    try:
        return tuple(int(part.strip()) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad permutation {text!r}: {exc}") from exc


def _parse_stages(text: str) -> tuple:
    stages = []
    for chunk in text.split(";"):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 3:
            raise UsageError(f"stage {chunk!r} is not of the form n,D,B")
        try:
            stages.append((int(parts[0]), int(parts[1]), rational(parts[2])))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad stage {chunk!r}: {exc}") from exc
    return tuple(stages)


def _load_space(path: str):
    """Load and validate a matrix document; returns (space or None, report)."""
    return docio.document_to_space(docio.load_path(path))


def _emit(out, human: List[str], rep: dict) -> None:
    for line in human:
        print(line, file=out)
    out.write(docio.dumps(rep))


def _violations_json(report) -> list:
    return [
        {
            "kind": v.kind,
            "witness": list(v.witness),
            "values": [format_rational(x) for x in v.values],
        }
        for v in report.violations
    ]


# ---------------------------------------------------------------------------
# Subcommand handlers.  Each returns (exit code, human lines, report body).


def _cmd_validate(args):
    space, report = _load_space(args.file)
    body = {"valid": report.valid, "violations": _violations_json(report)}
    if space is not None:
        body["matrix"] = docio.space_to_document(space)
        return EXIT_OK, [f"valid metric on {space.n} points"], body
    return EXIT_INVALID, [report.render()], body


def _cmd_isogroup(args):
    space, report = _load_space(args.file)
    if space is None:
        return EXIT_INVALID, [report.render()], {"valid": False}
    group = isometry_group(space)
    body = {
        "order": group.order,
        "elements": [list(g) for g in group.elements],
    }
    return EXIT_OK, [f"isometry group of order {group.order}"], body


def _cmd_pisocount(args):
    space, report = _load_space(args.file)
    if space is None:
        return EXIT_INVALID, [report.render()], {"valid": False}
    pisos = partial_isometries(space)
    by_size: dict = {}
    for p in pisos:
        by_size[len(p.mapping)] = by_size.get(len(p.mapping), 0) + 1
    body = {
        "count": len(pisos),
        "by_domain_size": {str(k): by_size[k] for k in sorted(by_size)},
    }
    return EXIT_OK, [f"{len(pisos)} partial isometries"], body


def _cmd_extend(args):
    space, report = _load_space(args.file)
    if space is None:
        return EXIT_INVALID, [report.render()], {"valid": False}
    vec = _parse_vector(args.vector)
    if len(vec) != space.n:
        raise UsageError(f"vector length {len(vec)} != point count {space.n}")
    ok, pair, which = check_admissible(space, vec)
    if not ok:
        body = {
            "admissible": False,
            "violation": {"pair": list(pair), "which": which},
        }
        return (
            EXIT_INVALID,
            [f"vector is not admissible: {which} inequality fails at pair {pair}"],
            body,
        )
    extended = realize(space, vec)
    body = {"admissible": True, "matrix": docio.space_to_document(extended)}
    return EXIT_OK, [f"extended to {extended.n} points"], body


def _cmd_orbit_extend(args):
    space, report = _load_space(args.file)
    if space is None:
        return EXIT_INVALID, [report.render()], {"valid": False}
    vec = _parse_vector(args.vector)
    if len(vec) != space.n:
        raise UsageError(f"vector length {len(vec)} != point count {space.n}")
    group = isometry_group(space)
    ext = orbit_extension(space, group, vec)
    orbit_size = ext.extension.n - space.n
    body = {
        "group_order": group.order,
        "orbit_size": orbit_size,
        "cosets": [
            {"new_point": idx, "representative": list(rep)}
            for idx, rep in ext.coset_map
        ],
        "matrix": docio.space_to_document(ext.extension),
    }
    return (
        EXIT_OK,
        [f"orbit of size {orbit_size} under group of order {group.order}"],
        body,
    )


def _cmd_build(args):
    stages = _parse_stages(args.stages)
    result = build_rational_urysohn(
        stages, mode=args.mode, seed=args.seed, budget=args.budget
    )
    body = {
        "complete": result.complete,
        "stages_completed": result.stages_completed,
        "points": result.space.n,
        "matrix": docio.space_to_document(result.space),
    }
    if not result.complete:
        return (
            EXIT_BUDGET,
            [f"budget exhausted after {result.stages_completed} stages "
             f"({result.space.n} points)"],
            body,
        )
    return (
        EXIT_OK,
        [f"built {result.space.n} points through {result.stages_completed} stages"],
        body,
    )


def _cmd_audit(args):
    space, report = _load_space(args.file)
    if space is None:
        return EXIT_INVALID, [report.render()], {"valid": False}
    depth = args.depth if args.depth is not None else space.n
    audit = universality_audit(space, args.n, args.den, rational(args.bound), depth)
    body = {
        "passed": audit.passed,
        "n": audit.n,
        "denominator_bound": audit.denominator_bound,
        "value_bound": format_rational(audit.value_bound),
        "depth": audit.depth,
        "unrealized": [
            [format_rational(v) for v in vec] for vec in audit.unrealized
        ],
    }
    code = EXIT_OK if audit.passed else EXIT_INVALID
    return code, [audit.render()], body


def _cmd_toeplitz(args):
    stages = _parse_stages(args.stages)
    result = build_toeplitz_universal(
        stages, mode=args.mode, seed=args.seed, budget=args.budget
    )
    induced = result.metric.induced_space()
    body = {
        "complete": result.complete,
        "stages_completed": result.stages_completed,
        "phi": [format_rational(v) for v in result.metric.phi],
        "matrix": docio.space_to_document(induced),
        "unrealized": [
            [format_rational(v) for v in vec] for vec in result.unrealized
        ],
    }
    if not result.complete:
        return (
            EXIT_BUDGET,
            [f"budget exhausted after {result.stages_completed} stages "
             f"({len(result.metric.phi)} phi values)"],
            body,
        )
    return (
        EXIT_OK,
        [f"built phi of length {len(result.metric.phi)} through "
         f"{result.stages_completed} stages"],
        body,
    )


def _cmd_billiard(args):
    space, report = _load_space(args.file)
    if space is None:
        return EXIT_INVALID, [report.render()], {"valid": False}
    extraction = phi_of(space)
    if not extraction.ok:
        (i1, j1), (i2, j2) = extraction.witness
        body = {
            "toeplitz": False,
            "witness": [[i1, j1], [i2, j2]],
        }
        return (
            EXIT_INVALID,
            [f"matrix is not constant on diagonals: entries ({i1},{j1}) and "
             f"({i2},{j2}) differ"],
            body,
        )
    x = _parse_vector(getattr(args, "from"))
    y = _parse_vector(args.to)
    chain = billiard_chain(extraction.metric, x, y)
    body = {
        "toeplitz": True,
        "order": extraction.metric.order,
        "columns": len(chain.vectors),
        "chain": [[format_rational(v) for v in vec] for vec in chain.vectors],
    }
    return EXIT_OK, [f"chain of {len(chain.vectors)} columns"], body


def _cmd_globalize(args):
    space, report = _load_space(args.file)
    if space is None:
        return EXIT_INVALID, [report.render()], {"valid": False}
    cert = globalize(space, args.budget)
    cert_doc = docio.certificate_to_document(cert)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(docio.dumps(cert_doc))
    body = {
        "added_points": cert.added_points,
        "host_points": cert.host.n,
        "certificate": cert_doc,
    }
    return (
        EXIT_OK,
        [f"globalized with {cert.added_points} added points "
         f"(host has {cert.host.n})"],
        body,
    )


def _cmd_verify_cert(args):
    doc = docio.load_path(args.file)
    if isinstance(doc, dict) and "result" in doc and "provenance" in doc:
        doc = doc["result"].get("certificate", doc)
    cert = docio.document_to_certificate(doc)
    report = verify_certificate(cert)
    body = {"valid": report.valid, "issues": list(report.issues)}
    code = EXIT_OK if report.valid else EXIT_INVALID
    return code, [report.render()], body


def _cmd_hall(args):
    stage = hall_stage(args.n)
    body = {
        "n": args.n,
        "target_degree": stage.target_degree,
        "group_order": len(stage.source_elements),
    }
    human = [f"stage {args.n}: Sym({args.n}) embeds in Sym({stage.target_degree})"]
    if args.element:
        g = _parse_perm(args.element)
        if sorted(g) != list(range(args.n)):
            raise UsageError(f"element is not a permutation of 0..{args.n - 1}")
        image = stage.embed(g)
        body["element"] = list(g)
        body["image"] = list(image)
        human.append(f"image has degree {len(image)}")
    return EXIT_OK, human, body


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="urysohn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a matrix document is a metric")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("isogroup", help="isometry group of a space")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_isogroup)

    p = sub.add_parser("pisocount", help="count partial isometries")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_pisocount)

    p = sub.add_parser("extend", help="realize an admissible vector")
    p.add_argument("file")
    p.add_argument("--vector", required=True, help="comma-separated rationals")
    p.set_defaults(handler=_cmd_extend)

    p = sub.add_parser("orbit-extend", help="extend by a full isometry orbit")
    p.add_argument("file")
    p.add_argument("--vector", required=True, help="comma-separated rationals")
    p.set_defaults(handler=_cmd_orbit_extend)

    p = sub.add_parser("build", help="grow a universal rational prefix")
    p.add_argument("--stages", required=True, help="n,D,B;n,D,B;...")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("deterministic", "random"),
                   default="deterministic")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("audit", help="exact universality audit")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--den", type=int, required=True)
    p.add_argument("--bound", required=True)
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(handler=_cmd_audit)

    p = sub.add_parser("toeplitz", help="grow a universal Toeplitz metric")
    p.add_argument("--stages", required=True, help="n,D,B;n,D,B;...")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("deterministic", "random"),
                   default="deterministic")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(handler=_cmd_toeplitz)

    p = sub.add_parser("billiard", help="chain between admissible vectors")
    p.add_argument("file")
    p.add_argument("--from", required=True, help="comma-separated rationals")
    p.add_argument("--to", required=True, help="comma-separated rationals")
    p.set_defaults(handler=_cmd_billiard)

    p = sub.add_parser("globalize", help="extend partial isometries globally")
    p.add_argument("file")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--out", default=None, help="write the bare certificate here")
    p.set_defaults(handler=_cmd_globalize)

    p = sub.add_parser("verify-cert", help="verify a globalization certificate")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_verify_cert)

    p = sub.add_parser("hall", help="symmetric-group tower stage")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--element", default=None, help="comma-separated permutation")
    p.set_defaults(handler=_cmd_hall)

    return parser


def _provenance_params(args) -> dict:
    skip = {"command", "handler"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        out[key] = value if isinstance(value, (int, str, bool)) else str(value)
    return out


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    seed = getattr(args, "seed", None)
    try:
        code, human, body = args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except docio.DocumentError as exc:
        print(f"document error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, ShapeError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NotAdmissible, DegenerateVector) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UrysohnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    rep = docio.report(args.command, _provenance_params(args), seed, body)
    _emit(out, human, rep)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
