import attrs
from jsonschema import validate

from ..classify import class_rank
from ..models import family_case


def sig(value):
    """Fixed numeric formatting: 9 significant digits."""
    return float(f"{float(value):.9g}")


# REPORT SCHEMA
_number = {"type": "number"}
_count = {"type": "integer", "minimum": 0}
_ratio = {"type": "number", "minimum": 0, "maximum": 1}
_label = {"type": "string", "pattern": "^(A[1-3]|B[12]|C|D[1-5]|E|F[12]|G|H|I[1-4]|J)$"}
_point = {
    "type": "object",
    "required": ["rho", "z"],
    "properties": {"rho": {"type": "number", "minimum": 0}, "z": _number},
}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "Workspace classification report",
    "type": "object",
    "required": [
        "tool_version", "input_parameters", "family_case", "group_label", "class_rank",
        "verdict", "metrics", "buckets", "regions", "nodes", "cusps", "cuspidal", "grid",
    ],
    "properties": {
        "tool_version": {"type": "string"},
        "input_parameters": {
            "type": "object",
            "required": ["d2", "d3", "d4", "r2", "r3"],
            "additionalProperties": {"type": "number", "minimum": 0},
        },
        "family_case": {"type": "string", "enum": list("ABCDEFGHIJ")},
        "group_label": _label,
        "class_rank": {"type": "integer", "enum": [1, 2, 3]},
        "verdict": {
            "type": "object",
            "required": ["analytic_label", "analytic_rule", "numeric_label", "agreement", "warnings"],
            "properties": {
                "analytic_label": {"oneOf": [_label, {"type": "null"}]},
                "analytic_rule": {"type": "string"},
                "numeric_label": _label,
                "agreement": {"type": "boolean"},
                "warnings": {"type": "array", "items": {"type": "string"}},
            },
        },
        "metrics": {
            "type": "object",
            "required": ["node_count", "cusp_count", "void_count", "quaternary_ratio", "hole_ratio", "feasible_ratio"],
            "properties": {
                "node_count": _count,
                "cusp_count": _count,
                "void_count": _count,
                "quaternary_ratio": _ratio,
                "hole_ratio": _ratio,
                "feasible_ratio": _ratio,
            },
        },
        "buckets": {"type": "object", "additionalProperties": {"type": "string"}},
        "regions": {"type": "object", "additionalProperties": _count},
        "nodes": {"type": "array", "items": {**_point, "required": ["rho", "z", "preimages"]}},
        "cusps": {"type": "array", "items": _point},
        "cuspidal": {"type": "boolean"},
        "grid": {
            "type": "object",
            "required": ["resolution", "rmax", "trace_resolution", "aspect_resolution"],
            "properties": {
                "resolution": _count,
                "rmax": _number,
                "trace_resolution": _count,
                "aspect_resolution": _count,
            },
        },
    },
}


def build_report(verdict, version):
    analysis = verdict.analysis
    p = analysis.params
    measured = analysis.metrics
    report = {
        "tool_version": version,
        "input_parameters": {name: sig(value) for name, value in p.as_dict().items()},
        "family_case": family_case(p).name,
        "group_label": verdict.label.value,
        "class_rank": class_rank(verdict.label),
        "verdict": {
            "analytic_label": verdict.analytic.label.value if verdict.analytic.label else None,
            "analytic_rule": verdict.analytic.rule,
            "numeric_label": verdict.numeric.value,
            "agreement": verdict.agreement,
            "warnings": list(verdict.warnings),
        },
        "metrics": {
            name: sig(value) if isinstance(value, float) else value
            for name, value in attrs.asdict(measured).items()
        },
        "buckets": measured.buckets,
        "regions": {str(count): regions for count, regions in sorted(analysis.regions.items())},
        "nodes": [
            {
                "rho": sig(node.location.rho),
                "z": sig(node.location.z),
                "preimages": [[sig(v) for v in pre] for pre in node.preimages],
            }
            for node in analysis.nodes
        ],
        "cusps": [{"rho": sig(c.location.rho), "z": sig(c.location.z)} for c in analysis.cusps],
        "cuspidal": bool(analysis.cusps),
        "grid": {
            "resolution": analysis.field.grid.resolution,
            "rmax": sig(analysis.field.grid.rmax),
            "trace_resolution": analysis.trace_resolution,
            "aspect_resolution": analysis.aspect_resolution,
        },
    }
    validate(instance=report, schema=REPORT_SCHEMA)
    return report
