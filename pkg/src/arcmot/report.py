"""Verification plumbing: equality checkers and structured reports.

A Checker decides mathematical equality of two exact values in one of
three modes: "exact" (cross multiplication), "modp" (random evaluation in
a large prime field, deterministic per seed), or "both" (the exact verdict,
with the modp verdict required to agree).  Exact verdicts are cached by
the structural identity of the operands, so re-running a suite under
several seeds pays the exact cost once.

Reports are deterministic: cells are kept in insertion order (suites
iterate canonically), and serialization zeroes the timing field unless
explicitly asked for timed output, so two runs with the same configuration
and seed produce byte-identical JSON.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .kernel import (
    DEFAULT_PRIME,
    FactoredRational,
    emit,
    rat_eq_exact,
    rat_eq_modp,
)

__all__ = ["Checker", "CellCheck", "VerificationReport"]


_EXACT_CACHE: dict[tuple[FactoredRational, FactoredRational], bool] = {}


def _exact_cached(x: FactoredRational, y: FactoredRational) -> bool:
    key = (x, y)
    verdict = _EXACT_CACHE.get(key)
    if verdict is None:
        verdict = rat_eq_exact(x, y)
        _EXACT_CACHE[key] = verdict
        _EXACT_CACHE[(y, x)] = verdict
    return verdict


class Checker:
    """Equality strategy shared by a verification run."""

    MODES = ("exact", "modp", "both")

    def __init__(self, mode: str = "exact", seed: int = 0, trials: int = 6,
                 prime: int = DEFAULT_PRIME):
        if mode not in self.MODES:
            raise ValueError(f"unknown mode {mode!r}; pick from {self.MODES}")
        self.mode = mode
        self.seed = seed
        self.trials = trials
        self.prime = prime
        self.disagreements: list[str] = []

    def eq(self, x: FactoredRational, y: FactoredRational) -> bool:
        if self.mode == "exact":
            return _exact_cached(x, y)
        if self.mode == "modp":
            return rat_eq_modp(x, y, trials=self.trials, seed=self.seed,
                               prime=self.prime)
        exact = _exact_cached(x, y)
        modp = rat_eq_modp(x, y, trials=self.trials, seed=self.seed,
                           prime=self.prime)
        if exact != modp:
            self.disagreements.append(
                f"exact={exact} modp={modp} on {emit(x)} vs {emit(y)}")
            return False
        return exact


@dataclass
class CellCheck:
    """Outcome of one identity instance."""

    indices: tuple
    passed: bool
    mode: str
    millis: float
    detail: str | None = None  # both sides, serialized, on failure


@dataclass
class VerificationReport:
    """All cells checked for one named identity."""

    identity: str
    cells: list[CellCheck] = field(default_factory=list)
    notes: tuple[str, ...] = ()

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.cells)

    @property
    def counts(self) -> tuple[int, int]:
        passed = sum(1 for c in self.cells if c.passed)
        return passed, len(self.cells) - passed

    def first_failure(self) -> CellCheck | None:
        for c in self.cells:
            if not c.passed:
                return c
        return None

    def check(self, indices: tuple, fn, mode: str,
              detail_fn=None) -> bool:
        """Run fn() as the cell at `indices`, timing it; on failure attach
        detail_fn() if provided."""
        start = time.perf_counter()
        passed = bool(fn())
        millis = (time.perf_counter() - start) * 1000.0
        detail = None
        if not passed and detail_fn is not None:
            detail = detail_fn()
        self.cells.append(CellCheck(indices, passed, mode, millis, detail))
        return passed

    def to_doc(self, timed: bool = False) -> dict:
        passed, failed = self.counts
        doc: dict = {
            "identity": self.identity,
            "summary": {"cells": len(self.cells), "passed": passed,
                        "failed": failed},
        }
        if self.notes:
            doc["notes"] = list(self.notes)
        cells = []
        for c in self.cells:
            cell: dict = {
                "cell": list(c.indices),
                "pass": c.passed,
                "mode": c.mode,
                "millis": round(c.millis, 3) if timed else 0,
            }
            if c.detail is not None:
                cell["detail"] = c.detail
            cells.append(cell)
        doc["cells"] = cells
        return doc

    def to_json(self, timed: bool = False) -> str:
        return json.dumps(self.to_doc(timed=timed), separators=(",", ":"))


def reports_to_json(reports: list[VerificationReport],
                    timed: bool = False) -> str:
    """One JSON document for a whole run."""
    doc = {
        "pass": all(r.all_passed for r in reports),
        "reports": [r.to_doc(timed=timed) for r in reports],
    }
    return json.dumps(doc, separators=(",", ":"), indent=None)
