"""Manifest-driven classification runs over a fixed set of groups."""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .catalog import build, parse_spec
from .errors import AuditMismatch, FormatError
from .group import PermGroup
from .modular import (
    ModularOrbit,
    PresentationClass,
    congruence_closure,
    orbit_and_coset_table,
    paper_criterion,
    presentation_classes,
)
from .reports import Report, corpus_report

__all__ = ["CorpusEntry", "read_manifest", "default_manifest", "classify_classes", "run_entry", "corpus_run"]

EXPECTATIONS = ("congruence", "noncongruence")


@dataclass(frozen=True)
class CorpusEntry:
    group: str
    mode: str
    expect: str

    @property
    def sample_size(self) -> int | None:
        if self.mode == "exhaustive":
            return None
        return int(self.mode.split(":", 1)[1])


def parse_manifest(text: str) -> list[CorpusEntry]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"manifest line {lineno}: expected 'group mode expect'")
        group, mode, expect = parts
        try:
            parse_spec(group)
        except ValueError as exc:
            raise FormatError(f"manifest line {lineno}: {exc}") from None
        if mode != "exhaustive" and not (mode.startswith("sample:") and mode[7:].isdigit()):
            raise FormatError(f"manifest line {lineno}: bad mode {mode!r}")
        if expect not in EXPECTATIONS:
            raise FormatError(f"manifest line {lineno}: bad expectation {expect!r}")
        out.append(CorpusEntry(group, mode, expect))
    return out


def default_manifest() -> str:
    return (resources.files("noncongruence") / "data" / "corpus.manifest").read_text(encoding="utf-8")


def read_manifest(path=None) -> list[CorpusEntry]:
    text = default_manifest() if path is None else Path(path).read_text(encoding="utf-8")
    return parse_manifest(text)


@dataclass
class OrbitVerdict:
    orbit: ModularOrbit
    level: int
    index_closure: int
    stable_from: int
    verdict: str


def classify_classes(g: PermGroup, classes, max_orbit=None, modulus_cap=None):
    """Verdict per class, running the closure once per orbit and auditing the criterion.

    Returns (per-class list of (class, OrbitVerdict, criterion), orbits in discovery order).
    """
    seen: dict = {}
    orbits: list[OrbitVerdict] = []
    out = []
    for x, y in classes:
        key = (tuple(x), tuple(y))
        ov = seen.get(key)
        if ov is None:
            o = orbit_and_coset_table(g, PresentationClass(g, x, y), max_orbit)
            res = congruence_closure(o, modulus_cap=modulus_cap)
            ov = OrbitVerdict(o, res.level, res.index_closure, res.stable_from, res.verdict)
            orbits.append(ov)
            for p in o.points:
                seen[p] = ov
        crit = paper_criterion(g, x, y)
        if crit and ov.verdict != "totally-noncongruence":
            raise AuditMismatch(f"coprime class {key} lies in a {ov.verdict} orbit")
        out.append(((x, y), ov, crit))
    return out, orbits


def run_entry(entry: CorpusEntry, seed: int = 0, max_orbit=None, modulus_cap=None) -> Report:
    g = build(entry.group)
    classes = presentation_classes(g)
    if entry.sample_size is not None and entry.sample_size < len(classes):
        rng = random.Random(f"{seed}:{entry.group}")
        classes = sorted(rng.sample(classes, entry.sample_size))
    rows, orbits = classify_classes(g, classes, max_orbit, modulus_cap)
    verdicts = [ov.verdict for _, ov, _ in rows]
    counts = {v: verdicts.count(v) for v in ("congruence", "noncongruence", "totally-noncongruence")}
    if entry.expect == "congruence":
        ok = counts["congruence"] == len(rows)
    else:
        ok = counts["congruence"] == 0
    return corpus_report(
        group=entry.group,
        mode=entry.mode,
        expect=entry.expect,
        classes=len(rows),
        orbit_sizes=tuple(len(ov.orbit) for ov in orbits),
        orbit_levels=tuple(ov.level for ov in orbits),
        orbit_closure_indices=tuple(ov.index_closure for ov in orbits),
        stable_from=tuple(ov.stable_from for ov in orbits),
        congruence=counts["congruence"],
        noncongruence=counts["noncongruence"],
        totally_noncongruence=counts["totally-noncongruence"],
        coprime_classes=sum(1 for _, _, c in rows if c),
        status="pass" if ok else "fail",
    )


def corpus_run(manifest=None, seed: int = 0, max_orbit=None, modulus_cap=None) -> list[Report]:
    entries = read_manifest(manifest) if not isinstance(manifest, list) else manifest
    return [run_entry(e, seed, max_orbit, modulus_cap) for e in entries]
