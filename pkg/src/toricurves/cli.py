"""Command-line entry point.

Subcommands cover fan analysis, Mobius data, map-space classes,
Tamagawa numbers, convergence reports, and the finite-field oracle.
Output is text by default and JSON with --format json; JSON is the
authoritative form.  Nothing is printed until the computation has
finished, so failures never leave partial output behind.

Exit statuses: 0 success, 1 usage, 2 validation or unreadable input,
3 enumeration budget exceeded, 4 internal consistency tripwire.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys
import time

from . import FIXTURE_NAMES, fixture_fan
from .errors import BudgetError, FanValidationError, InternalCheckError
from .grothendieck import MINUS_INFINITY, ONE, SeriesCap
from .toric import (
    Fan,
    class_of_variety,
    eff_dual_contains,
    enumerate_cones,
    parse_fan,
    pattern_set,
    picard_data,
    validate,
)
from .mobius import fan_mobius_polynomial, local_identity_check, mobius_table
from .eulerprod import global_mobius
from .moduli import (
    JetCondition,
    constrained_main_term,
    convergence_report,
    hom_class,
    normalized_hom_class,
    tamagawa,
)
from . import oracle as oracle_mod

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _load_fan(source: str) -> Fan:
    path = pathlib.Path(source)
    if path.exists():
        doc = json.loads(path.read_text())
        return parse_fan(doc)
    stem = path.stem if path.suffix == ".json" else source
    if "/" not in source and stem in FIXTURE_NAMES:
        return fixture_fan(stem)
    raise FanValidationError(f"cannot read fan description {source!r}")


def _parse_degree(text: str, nrays: int) -> tuple[int, ...]:
    try:
        entries = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"degree {text!r} is not a comma-separated integer list")
    if len(entries) != nrays:
        raise ValueError(
            f"degree has {len(entries)} entries, fan has {nrays} rays"
        )
    if any(x < 0 for x in entries):
        raise ValueError("degree entries must be nonnegative")
    return entries


def _parse_jet(text: str, p: int, nrays: int) -> oracle_mod.JetSpec:
    """Parse "point,order[,c0:c1:...,... one group per ray]"."""
    tokens = text.split(",")
    if len(tokens) < 2:
        raise ValueError("jet needs at least 'point,order'")
    point = None if tokens[0] in ("inf", "oo") else int(tokens[0]) % p
    order = int(tokens[1])
    rest = tokens[2:]
    if not rest:
        return oracle_mod.JetSpec.identity(nrays, point, order)
    if len(rest) != nrays:
        raise ValueError(
            f"jet target has {len(rest)} components, fan has {nrays} rays"
        )
    target = tuple(
        tuple(int(c) % p for c in group.split(":")) for group in rest
    )
    return oracle_mod.JetSpec(point, order, target)


def _parse_points(text: str) -> list[tuple[tuple[int, int], int]]:
    """Parse "x0:x1@m,x0:x1@m,..." into ((x0, x1), m) pairs."""
    out = []
    for chunk in text.split(","):
        if "@" in chunk:
            coords, order = chunk.rsplit("@", 1)
        else:
            coords, order = chunk, "0"
        x0, x1 = (int(tok) for tok in coords.split(":"))
        out.append(((x0, x1), int(order)))
    return out


def _fmt_delta(delta) -> str:
    return "-inf" if delta is MINUS_INFINITY else str(delta)


def cmd_analyze(args):
    fan = _load_fan(args.fan)
    report = validate(fan, seed=args.seed)
    if not (report.smooth and report.complete):
        raise FanValidationError(
            "fan is not smooth and complete: " + "; ".join(report.details)
        )
    pats = pattern_set(fan)
    pd = picard_data(fan)
    cls = class_of_variety(fan)
    table = mobius_table(pats)
    poly = fan_mobius_polynomial(fan)
    identity_ok = local_identity_check(fan)
    payload = {
        "validation": report.to_json(),
        "f_vector": list(enumerate_cones(fan)),
        "dim": fan.dim,
        "picard_rank": pd.rank,
        "class": str(cls),
        "primitive_collections": sorted(sorted(s) for s in pats.minimal),
        "mobius": table.to_json(),
        "polynomial": str(poly),
        "local_identity": identity_ok,
    }
    lines = [
        f"smooth: {report.smooth}  complete: {report.complete}",
        f"f-vector: {payload['f_vector']}",
        f"dim: {fan.dim}  picard rank: {pd.rank}",
        f"class: {cls}",
        f"primitive collections: {payload['primitive_collections']}",
        f"P = {poly}",
        f"local identity: {'holds' if identity_ok else 'FAILS'}",
    ]
    return payload, "\n".join(lines)


def cmd_mobius(args):
    fan = _load_fan(args.fan)
    table = mobius_table(pattern_set(fan))
    poly = fan_mobius_polynomial(fan)
    payload = {
        "mobius": table.to_json(),
        "polynomial": str(poly),
    }
    lines = [f"P = {poly}"]
    if args.cap is not None:
        gm = global_mobius(
            fan, 0, SeriesCap.total_cap(fan.nrays, args.cap)
        )
        payload["global"] = gm.to_json()
        lines.append(f"global coefficients to total degree {args.cap}:")
        for e, value in gm.items():
            if value:
                lines.append(f"  mu{e} = {value}")
    else:
        for n, v in table.nonzero():
            lines.append(f"  mu{n} = {v}")
    return payload, "\n".join(lines)


def cmd_hom(args):
    fan = _load_fan(args.fan)
    d = _parse_degree(args.degree, fan.nrays)
    if not eff_dual_contains(fan, d):
        payload = {
            "degree": list(d),
            "empty": True,
            "reason": "degree not in Eff^v",
        }
        return payload, "empty: degree not in Eff^v"
    cls = normalized_hom_class(fan, d) if args.normalized else hom_class(fan, d)
    payload = {
        "degree": list(d),
        "normalized": bool(args.normalized),
        "class": str(cls),
        "coeffs": cls.to_json(),
        "virtual_dimension": None
        if cls.virtual_dimension is MINUS_INFINITY
        else cls.virtual_dimension,
    }
    return payload, str(cls)


def cmd_tamagawa(args):
    fan = _load_fan(args.fan)
    series = tamagawa(fan, args.order)
    payload = {
        "order": args.order,
        "series": str(series.known),
        "floor": series.floor,
        "coeffs": series.to_json(),
    }
    return payload, str(series)


def cmd_converge(args):
    fan = _load_fan(args.fan)
    d = _parse_degree(args.degree, fan.nrays)
    rep = convergence_report(fan, d, args.order)
    payload = rep.to_json()
    payload["bound_float"] = float(rep.bound)
    text = (
        f"{rep.status}: degree {list(d)} delta_dim "
        f"{_fmt_delta(rep.delta_dim)} bound {float(rep.bound)}"
    )
    return payload, text


def cmd_oracle(args):
    fan = _load_fan(args.fan)
    if args.degree is None and args.config is None:
        raise ValueError("pass --degree (maps) or --config (configurations)")
    if args.degree is not None and args.config is not None:
        raise ValueError("pass only one of --degree and --config")
    if args.jet is not None:
        if args.degree is None:
            raise ValueError("--jet requires --degree")
        d = _parse_degree(args.degree, fan.nrays)
        jet = _parse_jet(args.jet, args.p, fan.nrays)
        start = time.perf_counter()
        count = oracle_mod.ff_constrained_count(
            args.p, fan, d, jet, budget=args.budget, jobs=args.jobs
        )
        elapsed = int((time.perf_counter() - start) * 1000)
        payload = {
            "p": args.p,
            "e_or_d": list(d),
            "jet": {
                "point": "inf" if jet.point is None else jet.point,
                "order": jet.order,
                "target": [list(c) for c in jet.target],
            },
            "count": str(count),
            "elapsed_ms": elapsed,
        }
        return payload, f"constrained count {count} ({elapsed} ms)"
    if args.degree is not None:
        d = _parse_degree(args.degree, fan.nrays)
        rep = oracle_mod.oracle_compare(
            args.p, fan, d=d, budget=args.budget, jobs=args.jobs
        )
    else:
        e = _parse_degree(args.config, fan.nrays)
        rep = oracle_mod.oracle_compare(
            args.p, fan, e=e, budget=args.budget, jobs=args.jobs
        )
    verdict = "equal" if rep.equal else "MISMATCH"
    text = (
        f"{verdict}: brute {rep.brute} predicted {rep.predicted} "
        f"({rep.elapsed_ms} ms)"
    )
    return rep.to_json(), text


def cmd_constrained(args):
    fan = _load_fan(args.fan)
    if args.points:
        specs = _parse_points(args.points)
        if args.mode == "torus":
            jc = JetCondition(
                tuple((tuple(pt), order) for pt, order in specs), ONE, 0
            )
        else:
            jc = JetCondition.full_jets(fan, specs)
    else:
        jc = JetCondition.empty()
    series = constrained_main_term(fan, jc, args.order)
    payload = {
        "order": args.order,
        "jet_condition": jc.to_json(),
        "series": str(series.known),
        "floor": series.floor,
        "coeffs": series.to_json(),
    }
    return payload, str(series)


def build_parser() -> _Parser:
    parser = _Parser(prog="toricurves", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("fan", help="fan JSON file or bundled fixture name")
    common.add_argument(
        "--format", choices=("text", "json"), default="text",
        help="output format (JSON is authoritative)",
    )
    common.add_argument(
        "--seed", type=int, default=0,
        help="seed for the completeness sampling in validation",
    )
    common.add_argument(
        "--jobs", type=int, default=1, help="worker processes for enumeration"
    )
    common.add_argument(
        "--budget", type=int, default=None,
        help="enumeration budget (default TORICURVES_BUDGET or 10^8)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="validation, combinatorics, Mobius data")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mobius", parents=[common],
                       help="local Mobius table and polynomial")
    p.add_argument("--cap", type=int, default=None,
                   help="also list global coefficients to this total degree")
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("hom", parents=[common],
                       help="class of the space of maps of one multidegree")
    p.add_argument("--degree", required=True,
                   help="comma-separated multidegree, one entry per ray")
    p.add_argument("--normalized", action="store_true",
                   help="divide by L^|d|")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("tamagawa", parents=[common],
                       help="Tamagawa number truncated at an Euler order")
    p.add_argument("--order", type=int, required=True,
                   help="Euler-product truncation order")
    p.set_defaults(func=cmd_tamagawa)

    p = sub.add_parser("converge", parents=[common],
                       help="compare one normalized class to the limit")
    p.add_argument("--degree", required=True)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("oracle", parents=[common],
                       help="finite-field brute-force comparison")
    p.add_argument("--p", type=int, required=True, help="prime, one of 2 3 5 7")
    p.add_argument("--degree", default=None,
                   help="compare the space of maps at this multidegree")
    p.add_argument("--config", default=None,
                   help="compare the configuration class at this multidegree")
    p.add_argument("--jet", default=None,
                   help="constrained count: 'point,order[,c0:c1...,per ray]'")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("constrained", parents=[common],
                       help="main term of the jet-constrained prediction")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--points", default=None,
                   help="marked points 'x0:x1@m,...' (default none)")
    p.add_argument("--mode", choices=("torus", "full"), default="torus",
                   help="torus: one prescribed jet; full: whole jet space")
    p.set_defaults(func=cmd_constrained)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, text = args.func(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (FanValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
