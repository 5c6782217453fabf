"""JSON shapes for verdicts, analyses, pair reports and censuses.

Every integer that can outgrow 64 bits is written as a decimal string.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .census import CensusReport
from .certify import LevelBound, Theorem1Result, Verdict
from .cospectral import RroMatrix

SCHEMA_NAMES = ("analysis", "pair", "census", "snf")


def load_schema(name: str) -> dict:
    text = resources.files("dgscert.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def bound_json(b: LevelBound | None) -> dict | None:
    if b is None:
        return None
    return {
        "divisor": str(b.divisor),
        "complete": b.complete,
        "dn": str(b.dn),
        "provenance": [
            {
                "prime": str(p.prime),
                "exponent_in_dn": p.exponent_in_dn,
                "exponent_in_bound": p.exponent_in_bound,
                "rule": p.rule,
                "rank": p.rank,
            }
            for p in b.provenance
        ],
    }


def theorem1_json(t: Theorem1Result | None) -> dict | None:
    if t is None:
        return None
    return {
        "certified": t.certified,
        "reason": t.reason,
        "quotient": None if t.quotient is None else str(t.quotient),
    }


def verdict_json(v: Verdict) -> dict:
    return {
        "kind": v.kind.value,
        "reason": v.reason,
        "bound": bound_json(v.bound),
        "det_w": None if v.det_w is None else str(v.det_w),
        "snf": None if v.snf is None else [str(x) for x in v.snf],
        "notes": list(v.notes),
    }


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def q_json(rq: RroMatrix) -> list[list[str]]:
    return [[fraction_str(x) for x in row] for row in rq.q.rows]


def census_json(r: CensusReport) -> dict:
    return {
        "n": r.n,
        "total_graphs": r.total_graphs,
        "classes": r.classes,
        "checks": dict(r.checks),
        "buckets": r.buckets,
        "verdict_audit": r.verdict_audit,
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
