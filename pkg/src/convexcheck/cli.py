"""Command-line front end: fixture suites, checks, reductions, falsification.

Exact scalars cross the boundary as 'p' or 'p/q' strings; decimal notation is
rejected so nothing is ever silently rounded. Reports are deterministic JSON
(schema convexcheck/1): equal configurations produce byte-identical documents
apart from the timestamp field. The environment variable CONVEXCHECK_SEED
overrides the configured seed, including --seed.

Exit codes: 0 expected outcome, 2 usage or domain error, 3 unexpected
mathematical outcome (fixture profile mismatch or a certificate that fails
validation).
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from fractions import Fraction

from . import __version__
from .checkers import (
    Pass,
    SamplePlan,
    Violation,
    convex_check,
    default_lambda_grid,
    falsify_quasiconvex,
    family_quasiconvex_check,
    lambda_range,
    quasiconvex_check,
    radial_stability_check,
)
from .errors import ConvexCheckError, PointOutsideDomain
from .functionals import fixture_record
from .geometry import (
    Point,
    PointSource,
    Simplex,
    barycentric,
    classify_point,
    sample_flat_points,
)
from .reduction import (
    case_a_bound,
    case_b_bound,
    validate_certificate,
    verify_convexity_via_theorem,
)
from .functionals import pair
from .report import (
    build_report,
    certificate_json,
    dumps_report,
    plan_json,
    point_json,
    theorem_json,
    verdict_json,
)

ENV_SEED = "CONVEXCHECK_SEED"

_SCALAR_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_scalar(text: str) -> Fraction:
    """Parse an exact 'p' or 'p/q' scalar; decimal notation is rejected."""
    s = text.strip()
    if not _SCALAR_RE.match(s):
        raise ValueError(f"not an exact rational: {text!r} (write p or p/q; decimals are rejected)")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def parse_point(text: str) -> Point:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError(f"empty point {text!r}")
    return Point(tuple(parse_scalar(p) for p in parts))


def parse_scalar_list(text: str) -> tuple[Fraction, ...]:
    return tuple(parse_scalar(p) for p in text.split(",") if p.strip())


def _seed_from(args) -> int:
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{ENV_SEED} must be an integer, got {env!r}") from None
    return args.seed


def _plan_from(args) -> SamplePlan:
    t_grid = parse_scalar_list(args.t_grid) if args.t_grid else None
    source = (
        PointSource.SEEDED_RANDOM_BARYCENTRIC
        if args.point_source == "random"
        else PointSource.VERTEX_HULL_GRID
    )
    kwargs = {"pair_count": args.pairs, "seed": _seed_from(args), "point_source": source}
    if t_grid is not None:
        kwargs["t_grid"] = t_grid
    return SamplePlan(**kwargs)


def _emit(args, report: dict) -> None:
    text = dumps_report(report)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _base_config(args, command: str, plan: SamplePlan | None = None, **extra) -> dict:
    config: dict = {"command": command, "fixture": args.name}
    if plan is not None:
        config["plan"] = plan_json(plan)
    config.update(extra)
    return config


def _summary_value(verdict) -> str:
    if isinstance(verdict, Pass):
        return "yes"
    if isinstance(verdict, Violation):
        return "no"
    return "unverified"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_fixture(args) -> int:
    fx = fixture_record(args.name)
    domain, oracle, form = fx.domain, fx.oracle, fx.functional
    plan = _plan_from(args)
    lambdas = (
        parse_scalar_list(args.lambda_grid)
        if args.lambda_grid
        else lambda_range(-10, 10, Fraction(1, 2))
    )

    convexity = convex_check(oracle, domain, plan)
    family = family_quasiconvex_check(oracle, form, domain, lambdas, plan)
    family_entries = [
        {"lambda": str(lam), "verdict": verdict_json(v)} for lam, v in family.items()
    ]
    family_all_pass = all(isinstance(v, Pass) for v in family.values())

    flats = sample_flat_points(domain, count=12)
    vertices = domain.vertex_list() or ()
    stability_entries = []
    stability_failed = False
    for z in flats:
        for w in vertices:
            if w == z:
                continue
            verdict = radial_stability_check(oracle, domain, z, w, depth=args.depth)
            stability_entries.append(
                {"z": point_json(z), "w": point_json(w), "verdict": verdict_json(verdict, estimate=True)}
            )
            if isinstance(verdict, Violation):
                stability_failed = True

    found = falsify_quasiconvex(oracle, form, domain, default_lambda_grid(), plan)
    falsifier = (
        {"found": True, "lambda": str(found[0]), "violation": verdict_json(found[1])}
        if found
        else {"found": False}
    )

    theorem = verify_convexity_via_theorem(oracle, form, domain, plan, stability_depth=args.depth)

    expected = fx.profile
    matched = (
        isinstance(convexity, Pass) == expected.convex
        and family_all_pass == expected.family_all_pass
        and (found is not None) == expected.falsifier_finds
        and stability_failed == expected.stability_fails
        and (theorem.overall == "refuted") == (not expected.convex)
    )

    if family_all_pass:
        family_summary = "yes-over-grid"
    elif any(isinstance(v, Violation) for v in family.values()):
        family_summary = "no"
    else:
        family_summary = "unverified-over-grid"

    body = {
        "verdicts": {
            "convex": verdict_json(convexity),
            "family": family_entries,
            "stability": stability_entries,
            "falsifier": falsifier,
            "theorem": theorem_json(theorem, include_certificates=args.certificates),
        },
        "summary": {
            "convex": _summary_value(convexity),
            "family_quasiconvex": family_summary,
            "stability": stability_entries,
        },
        "profile": {
            "expected": {
                "convex": expected.convex,
                "family_all_pass": expected.family_all_pass,
                "falsifier_finds": expected.falsifier_finds,
                "stability_fails": expected.stability_fails,
            },
            "matched": matched,
        },
    }
    config = _base_config(
        args, "fixture", plan, lambda_grid=[str(x) for x in lambdas], depth=args.depth
    )
    _emit(args, build_report(__version__, config, body))
    return 0 if matched else 3


def _cmd_check(args, which: str) -> int:
    fx = fixture_record(args.name)
    plan = _plan_from(args)
    if which == "quasiconvex":
        verdict = quasiconvex_check(fx.oracle, fx.domain, plan)
    else:
        verdict = convex_check(fx.oracle, fx.domain, plan)
    config = _base_config(args, f"check-{which}", plan)
    _emit(args, build_report(__version__, config, {"verdicts": {which: verdict_json(verdict)}}))
    return 0


def _cmd_check_family(args) -> int:
    fx = fixture_record(args.name)
    plan = _plan_from(args)
    lambdas = (
        parse_scalar_list(args.lambda_grid)
        if args.lambda_grid
        else lambda_range(-10, 10, Fraction(1, 2))
    )
    family = family_quasiconvex_check(fx.oracle, fx.functional, fx.domain, lambdas, plan)
    entries = [{"lambda": str(lam), "verdict": verdict_json(v)} for lam, v in family.items()]
    config = _base_config(args, "check-family", plan, lambda_grid=[str(x) for x in lambdas])
    _emit(args, build_report(__version__, config, {"verdicts": {"family": entries}}))
    return 0


def _cmd_check_stability(args) -> int:
    fx = fixture_record(args.name)
    z = parse_point(args.z)
    w = parse_point(args.w)
    verdict = radial_stability_check(fx.oracle, fx.domain, z, w, depth=args.depth)
    config = _base_config(
        args, "check-stability", None, z=point_json(z), w=point_json(w), depth=args.depth
    )
    body = {"verdicts": {"stability": verdict_json(verdict, estimate=True)}}
    _emit(args, build_report(__version__, config, body))
    return 0


def _cmd_falsify(args) -> int:
    fx = fixture_record(args.name)
    plan = _plan_from(args)
    grid = parse_scalar_list(args.lambda_grid) if args.lambda_grid else default_lambda_grid()
    found = falsify_quasiconvex(fx.oracle, fx.functional, fx.domain, grid, plan)
    falsifier = (
        {"found": True, "lambda": str(found[0]), "violation": verdict_json(found[1])}
        if found
        else {"found": False}
    )
    config = _base_config(args, "falsify", plan, lambda_grid=[str(x) for x in grid])
    _emit(args, build_report(__version__, config, {"verdicts": {"falsifier": falsifier}}))
    return 0


def _cmd_reduce(args) -> int:
    fx = fixture_record(args.name)
    u = parse_point(args.u)
    v = parse_point(args.v)
    t = parse_scalar(args.t)
    if not (fx.domain.contains(u) and fx.domain.contains(v)):
        raise PointOutsideDomain("u and v must lie in the fixture domain")
    if not 0 < t < 1:
        raise ValueError(f"t={t} outside ]0, 1[")
    if pair(fx.functional, u - v) != 0:
        cert = case_a_bound(fx.oracle, fx.functional, u, v, t)
    else:
        cert = case_b_bound(fx.oracle, fx.functional, fx.domain, u, v, t, stability_depth=args.depth)
    valid = validate_certificate(cert, fx.oracle, fx.functional)
    config = _base_config(
        args, "reduce", None, u=point_json(u), v=point_json(v), t=str(t), depth=args.depth
    )
    body = {"certificate": certificate_json(cert), "valid": valid}
    _emit(args, build_report(__version__, config, body))
    return 0 if valid else 3


def _cmd_classify(args) -> int:
    fx = fixture_record(args.name)
    p = parse_point(args.point)
    cls = classify_point(fx.domain, p)
    coords = None
    if isinstance(fx.domain, Simplex):
        try:
            coords = [str(b) for b in barycentric(fx.domain, p)]
        except ConvexCheckError:
            coords = None
    config = _base_config(args, "classify", None, point=point_json(p))
    body = {"verdicts": {"class": cls.value, "barycentric": coords}}
    _emit(args, build_report(__version__, config, body))
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_plan_flags(sub) -> None:
    sub.add_argument("--pairs", type=int, default=80, help="number of generated point pairs")
    sub.add_argument("--t-grid", default=None, help="comma list of chord parameters, e.g. 1/4,1/2,3/4")
    sub.add_argument("--seed", type=int, default=0, help="sampling seed (CONVEXCHECK_SEED overrides)")
    sub.add_argument(
        "--point-source",
        choices=("grid", "random"),
        default="grid",
        help="vertex-hull grid (default) or seeded random combinations",
    )


def _add_common_flags(sub) -> None:
    sub.add_argument("--json", default=None, metavar="PATH", help="write the report to PATH")
    sub.add_argument("--depth", type=int, default=20, help="dyadic depth for stability estimates")
    sub.add_argument("--certificates", action="store_true", help="include full certificate traces")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convexcheck",
        description="Exact convexity analysis through quasiconvexity of perturbed families.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    def sub(name, handler, help_text, plan=True, lambdas=False):
        s = subs.add_parser(name, help=help_text)
        s.add_argument("name", help="fixture name")
        if plan:
            _add_plan_flags(s)
        if lambdas:
            s.add_argument("--lambda-grid", default=None, help="comma list of exact coefficients")
        _add_common_flags(s)
        s.set_defaults(handler=handler)
        return s

    sub("fixture", _cmd_fixture, "run the full suite for a bundled fixture", lambdas=True)
    sub("check-quasiconvex", lambda a: _cmd_check(a, "quasiconvex"), "sampled quasiconvexity check")
    sub("check-convex", lambda a: _cmd_check(a, "convex"), "sampled convexity check")
    sub("check-family", _cmd_check_family, "per-coefficient family quasiconvexity", lambdas=True)

    stab = subs.add_parser("check-stability", help="dyadic stability estimate at z toward w")
    stab.add_argument("name")
    stab.add_argument("z", help="point, e.g. 1/2,1/2")
    stab.add_argument("w", help="point, e.g. 0,0")
    _add_common_flags(stab)
    stab.set_defaults(handler=_cmd_check_stability)

    sub("falsify", _cmd_falsify, "search the coefficient grid for a family violation", lambdas=True)

    red = subs.add_parser("reduce", help="produce and validate one certificate")
    red.add_argument("name")
    red.add_argument("u", help="point, e.g. 1,0")
    red.add_argument("v", help="point, e.g. 0,1")
    red.add_argument("t", help="chord parameter in ]0,1[, e.g. 1/2")
    _add_common_flags(red)
    red.set_defaults(handler=_cmd_reduce)

    cls = subs.add_parser("classify", help="classify a point of the fixture domain")
    cls.add_argument("name")
    cls.add_argument("point", help="point, e.g. 1/4,1/4")
    _add_common_flags(cls)
    cls.set_defaults(handler=_cmd_classify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ConvexCheckError, ValueError, OSError) as exc:
        print(f"convexcheck: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
