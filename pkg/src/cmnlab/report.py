"""Machine-readable report documents: JSON serialization with 17-significant
-digit floats (round-trip exact for doubles) and a flat CSV export."""

from __future__ import annotations

import hashlib
import json
import math

SCHEMA_VERSION = 1
TOOL_VERSION = "0.1.0"


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent=0) -> str:
    """Serialize dicts/lists/scalars to JSON, printing every float with 17
    significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(f"{inner}{dumps(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def input_digest(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()


def bound_report_to_dict(r):
    return {
        "partition": r.partition_label(),
        "criterion": r.criterion,
        "value": r.value,
        "bound": r.bound,
        "violated": r.violated,
        "saturated": r.saturated,
        "preconditions_met": r.preconditions_met,
        "reason": r.reason,
    }


def verdict_to_dict(v):
    return {
        "dims": list(v.dims),
        "reports": [bound_report_to_dict(r) for r in v.reports],
        "reduced": [
            {"kept_parties": list(keep), "verdict": verdict_to_dict(sub)}
            for keep, sub in v.reduced
        ],
        "not_fully_separable": v.not_fully_separable,
        "bi_entangled_partitions": list(v.bi_entangled_partitions),
    }


def discord_result_to_dict(res, partition_label):
    return {
        "partition": partition_label,
        "value": res.value,
        "evaluations": res.evaluations,
        "converged": res.converged,
    }


def audit_report_to_dict(r):
    return {
        "family": r.family,
        "criterion": r.criterion,
        "trials": r.trials,
        "violations": r.violations,
        "worst_margin": r.worst_margin,
        "seed": r.seed,
    }


def document(kind, digest, body, timing=None):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "kind": kind,
        "input_digest": digest,
    }
    doc.update(body)
    if timing is not None:
        doc["timing_seconds"] = timing
    return doc


def verdict_to_csv_rows(v):
    """One row per (partition, criterion), recursing into reductions."""
    rows = []
    for r in v.all_reports():
        rows.append(
            [
                r.partition_label(),
                r.criterion,
                _format_float(r.value).strip('"'),
                _format_float(r.bound).strip('"'),
                str(r.violated).lower(),
                str(r.saturated).lower(),
                str(r.preconditions_met).lower(),
            ]
        )
    return rows
