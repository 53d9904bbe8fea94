"""Line-oriented key: value reports with typed fields.

Every report opens with ``format: <version>`` and ``kind: <kind>``; the
remaining keys come from the kind's schema, in schema order.  Optional
fields are omitted when absent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError
from .perm import Permutation, format_cycles, format_pair

__all__ = [
    "REPORT_FORMAT",
    "Report",
    "format_report",
    "parse_report",
    "write_report",
    "read_report",
    "classification_report",
    "witness_report",
    "corpus_report",
]

REPORT_FORMAT = "ncreport/1"


def _ints_fmt(v):
    return " ".join(map(str, v))


def _ints_parse(s):
    return tuple(int(t) for t in s.split()) if s.strip() else ()


def _bool_parse(s):
    if s == "true":
        return True
    if s == "false":
        return False
    raise ValueError(f"expected true or false, got {s!r}")


def _sched_fmt(v):
    return " ".join(f"{m}={i}" for m, i in v)


def _sched_parse(s):
    out = []
    for tok in s.split():
        m, _, i = tok.partition("=")
        out.append((int(m), int(i)))
    return tuple(out)


def _float_parse(s):
    return float(s)


_TYPES = {
    "str": (str, lambda s: s),
    "int": (str, int),
    "bool": (lambda v: "true" if v else "false", _bool_parse),
    "ints": (_ints_fmt, _ints_parse),
    "schedule": (_sched_fmt, _sched_parse),
    "float": (lambda v: f"{v:.3f}", _float_parse),
}

# kind -> [(field, type, required)]
SCHEMAS = {
    "classification": [
        ("group", "str", True),
        ("pair", "str", True),
        ("orders", "ints", True),
        ("delta", "int", True),
        ("index_gamma", "int", True),
        ("cusp_widths", "ints", True),
        ("level", "int", True),
        ("schedule", "schedule", False),
        ("modulus_used", "int", False),
        ("stable_from", "int", False),
        ("index_closure", "int", True),
        ("verdict", "str", True),
        ("criterion_verdict", "bool", False),
        ("wall_time", "float", False),
    ],
    "witness": [
        ("group", "str", True),
        ("x", "str", True),
        ("y", "str", True),
        ("orders", "ints", True),
        ("delta", "int", True),
        ("generates", "bool", True),
        ("frobenius_count", "int", False),
        ("smooth_for", "str", False),
        ("conjugation", "str", False),
        ("seed", "int", False),
        ("iteration", "int", False),
        ("certificate", "str", False),
    ],
    "corpus": [
        ("group", "str", True),
        ("mode", "str", True),
        ("expect", "str", True),
        ("classes", "int", True),
        ("orbit_sizes", "ints", True),
        ("orbit_levels", "ints", True),
        ("orbit_closure_indices", "ints", True),
        ("stable_from", "ints", True),
        ("congruence", "int", True),
        ("noncongruence", "int", True),
        ("totally_noncongruence", "int", True),
        ("coprime_classes", "int", True),
        ("status", "str", True),
    ],
}


@dataclass
class Report:
    kind: str
    fields: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in SCHEMAS:
            raise FormatError(f"unknown report kind {self.kind!r}")

    def __getitem__(self, key):
        return self.fields[key]

    def get(self, key, default=None):
        return self.fields.get(key, default)


def format_report(r: Report) -> str:
    lines = [f"format: {REPORT_FORMAT}", f"kind: {r.kind}"]
    known = set()
    for name, typ, required in SCHEMAS[r.kind]:
        known.add(name)
        if name not in r.fields or r.fields[name] is None:
            if required:
                raise FormatError(f"{r.kind} report is missing required field {name!r}")
            continue
        lines.append(f"{name}: {_TYPES[typ][0](r.fields[name])}")
    extra = set(r.fields) - known
    if extra:
        raise FormatError(f"fields not in the {r.kind} schema: {sorted(extra)}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Report:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        key, sep, value = raw.partition(":")
        if not sep:
            raise FormatError(f"line {lineno}: expected 'key: value'")
        entries.append((lineno, key.strip(), value.strip()))
    if len(entries) < 2 or entries[0][1] != "format":
        raise FormatError("line 1: report must start with a format field")
    if entries[0][2] != REPORT_FORMAT:
        raise FormatError(f"line {entries[0][0]}: unsupported report version {entries[0][2]!r}")
    if entries[1][1] != "kind":
        raise FormatError(f"line {entries[1][0]}: expected kind field")
    kind = entries[1][2]
    if kind not in SCHEMAS:
        raise FormatError(f"line {entries[1][0]}: unknown report kind {kind!r}")
    schema = {name: (typ, req) for name, typ, req in SCHEMAS[kind]}
    fields = {}
    for lineno, key, value in entries[2:]:
        if key not in schema:
            raise FormatError(f"line {lineno}: unknown field {key!r}")
        if key in fields:
            raise FormatError(f"line {lineno}: duplicate field {key!r}")
        try:
            fields[key] = _TYPES[schema[key][0]][1](value)
        except ValueError as exc:
            raise FormatError(f"line {lineno}: bad value for {key}: {exc}") from None
    missing = [n for n, (_, req) in schema.items() if req and n not in fields]
    if missing:
        raise FormatError(f"{kind} report is missing required field(s): {', '.join(missing)}")
    return Report(kind, fields)


def write_report(r: Report, path) -> None:
    Path(path).write_text(format_report(r), encoding="utf-8")


def read_report(path) -> Report:
    return parse_report(Path(path).read_text(encoding="utf-8"))


def classification_report(group_id, x, y, result, wall_time=None) -> Report:
    x, y = Permutation(x, check=False), Permutation(y, check=False)
    r, s, t = x.order(), y.order(), (x * y).order()
    f = {
        "group": group_id,
        "pair": format_pair(x, y),
        "orders": (r, s, t),
        "delta": math.gcd(r * s, r * t, s * t),
        "index_gamma": result.index_gamma,
        "cusp_widths": tuple(result.cusp_widths),
        "level": result.level,
        "schedule": tuple(result.schedule) or None,
        "modulus_used": result.modulus_used,
        "stable_from": result.stable_from,
        "index_closure": result.index_closure,
        "verdict": result.verdict,
        "criterion_verdict": result.criterion_verdict,
        "wall_time": None if wall_time is None else round(wall_time, 3),
    }
    return Report("classification", {k: v for k, v in f.items() if v is not None})


def witness_report(group_id, x, y, report, **extra) -> Report:
    """``report`` is a WitnessReport; extra keys are optional witness fields."""
    f = {
        "group": group_id,
        "x": format_cycles(x),
        "y": format_cycles(y),
        "orders": tuple(report.orders),
        "delta": report.delta,
        "generates": report.generates,
        "frobenius_count": report.frobenius.count if report.frobenius is not None else None,
    }
    f.update(extra)
    return Report("witness", {k: v for k, v in f.items() if v is not None})


def corpus_report(**fields) -> Report:
    return Report("corpus", fields)
