"""JSON report rendering with exact 'p/q' scalars (schema convexcheck/1).

Every scalar crosses the boundary as an exact fraction string; no float ever
appears in a report for the exact domains. Key order is sorted and array order
is semantic, so equal inputs render byte-identical documents apart from the
timestamp field.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone

from .checkers import Inconclusive, Pass, SamplePlan, Verdict, Violation
from .functionals import ConstancyCheck, LinearFunctional
from .geometry import Point, as_scalar
from .reduction import (
    CaseA,
    CaseAStep,
    CaseBStep,
    Certificate,
    LimitStep,
    Refutation,
    StabilityLimsup,
    TheoremReport,
)

SCHEMA = "convexcheck/1"


def scalar_str(value) -> str:
    return str(as_scalar(value))


def point_json(p: Point) -> list[str]:
    return [str(c) for c in p.coords]


def functional_json(c: LinearFunctional) -> list[str]:
    return [str(k) for k in c.coeffs]


def verdict_json(v: Verdict, estimate: bool = False) -> dict:
    if isinstance(v, Pass):
        out: dict = {"kind": "pass", "checked": v.checked}
    elif isinstance(v, Violation):
        out = {
            "kind": "violation",
            "u": point_json(v.u),
            "v": point_json(v.v),
            "t": str(v.t),
            "lhs": str(v.lhs),
            "rhs": str(v.rhs),
        }
    elif isinstance(v, Inconclusive):
        out = {"kind": "inconclusive", "reason": v.reason}
    else:
        raise TypeError(f"not a verdict: {type(v).__name__}")
    if estimate:
        out["estimate"] = True
    return out


def constancy_json(check: ConstancyCheck) -> dict:
    out: dict = {"constant": check.constant}
    if check.witness is not None:
        out["witness"] = [point_json(check.witness[0]), point_json(check.witness[1])]
        out["pairings"] = [str(check.pairings[0]), str(check.pairings[1])]
    return out


def plan_json(plan: SamplePlan) -> dict:
    return {
        "pair_count": plan.pair_count,
        "t_grid": [str(t) for t in plan.t_grid],
        "seed": plan.seed,
        "point_source": plan.point_source.value,
        "explicit_pairs": [[point_json(u), point_json(v)] for u, v in plan.explicit_pairs],
    }


def _case_a_step_json(step: CaseAStep) -> dict:
    return {
        "lambda": str(step.lam),
        "u": point_json(step.u),
        "v": point_json(step.v),
        "t": str(step.t),
        "z": point_json(step.z),
        "f_u": str(step.f_u),
        "f_v": str(step.f_v),
        "f_z": str(step.f_z),
        "g_u": str(step.g_u),
        "g_v": str(step.g_v),
        "g_z": str(step.g_z),
        "quasiconvexity_holds": step.quasiconvexity_holds,
    }


def _case_b_step_json(step: CaseBStep) -> dict:
    return {
        "s": str(step.s),
        "t_s": str(step.t_s),
        "v_s": point_json(step.v_s),
        "z_ts": point_json(step.z_ts),
        "outer": _case_a_step_json(step.outer),
        "inner": _case_a_step_json(step.inner),
        "chained_lhs": str(step.chained_lhs),
        "chained_rhs": str(step.chained_rhs),
        "residual": str(step.residual),
    }


def _limit_json(limit: LimitStep) -> dict:
    mech = limit.mechanism
    if isinstance(mech, StabilityLimsup):
        mechanism = {
            "kind": "stability-limsup",
            "depth": mech.depth,
            "estimate": verdict_json(mech.estimate, estimate=True),
        }
    else:
        mechanism = {
            "kind": "inner-continuity",
            "w_prime": point_json(mech.w_prime) if mech.w_prime is not None else None,
        }
    return {
        "z_t_class": limit.z_t_class.value,
        "mechanism": mechanism,
        "residual_bound": str(limit.residual_bound),
    }


def refutation_json(ref: Refutation) -> dict:
    return {
        "kind": ref.kind,
        "lambda": str(ref.lam) if ref.lam is not None else None,
        "u": point_json(ref.u),
        "v": point_json(ref.v),
        "t": str(ref.t),
        "lhs": str(ref.lhs),
        "rhs": str(ref.rhs),
    }


def certificate_json(cert: Certificate) -> dict:
    if isinstance(cert.case, CaseA):
        case = {"kind": "A", "lambda": str(cert.case.lam), "step": _case_a_step_json(cert.case.step)}
    else:
        case = {
            "kind": "B",
            "w": point_json(cert.case.w),
            "s_sequence": [str(s) for s in cert.case.s_sequence],
            "steps": [_case_b_step_json(s) for s in cert.case.steps],
            "limit": _limit_json(cert.case.limit),
        }
    return {
        "triple": {"u": point_json(cert.u), "v": point_json(cert.v), "t": str(cert.t)},
        "case": case,
        "conclusion": {
            "lhs": str(cert.conclusion.lhs),
            "rhs": str(cert.conclusion.rhs),
            "holds": cert.conclusion.holds,
        },
        "assumptions": sorted(cert.assumptions),
        "status": cert.status.value,
        "refutation": refutation_json(cert.refutation) if cert.refutation else None,
    }


def theorem_json(report: TheoremReport, include_certificates: bool = False) -> dict:
    counts = {"verified": 0, "conditionally-verified": 0, "refuted": 0}
    for cert in report.certificates:
        counts[cert.status.value] += 1
    out: dict = {
        "overall": report.overall,
        "counts": counts,
        "triples": len(report.certificates),
        "conclusion_mismatches": report.conclusion_mismatches,
        "first_refutation": refutation_json(report.first_refutation)
        if report.first_refutation
        else None,
        "stability_assumed": [
            {"z": point_json(z), "estimate": verdict_json(v, estimate=True)}
            for z, v in report.stability_assumed
        ],
    }
    if include_certificates:
        out["certificates"] = [certificate_json(c) for c in report.certificates]
    return out


def build_report(tool_version: str, config: dict, body: dict) -> dict:
    return {
        "schema": SCHEMA,
        "tool_version": tool_version,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config": config,
        **body,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
