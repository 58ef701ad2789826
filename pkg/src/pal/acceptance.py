"""The ten acceptance checks, shared by the test suite and scripts/run_acceptance.py."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .corpus import builtin_corpus
from .report import Report
from .suites import (
    counit_suite,
    default_corpus,
    dna_sanity_suite,
    goldblatt_image_suite,
    infrastructure_suite,
    pat_invariance_suite,
    preservation_suite,
    tau_rho_suite,
    theta_fixpoint_suite,
    translation_theorem_suite,
    unit_iso_suite,
)
from .translate import BUILTIN_TRANSLATIONS, builtin_translation


def _per_translation(name: str, fn) -> Report:
    rep = Report(name)
    for t in BUILTIN_TRANSLATIONS:
        tr = builtin_translation(t)
        sub = fn(tr, default_corpus(tr))
        rep.extend(sub, prefix=f"{t}/")
        if sub.extra:
            rep.extra[t] = sub.extra
    return rep


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    seconds: float  # time budget
    run: Callable[[], Report]


CRITERIA = (
    Criterion(1, "translation theorem, 2 vars, depth 3, all builtins", 300, lambda: _per_translation("translation-theorem", translation_theorem_suite)),
    Criterion(2, "theta carrier equals selector fixpoints", 30, lambda: _per_translation("theta-fixpoint", theta_fixpoint_suite)),
    Criterion(3, "unit isomorphism and envelope implication clause", 60, lambda: unit_iso_suite(builtin_corpus("poset_heyting", 4))),
    Criterion(4, "counit embedding fixing opens", 60, lambda: counit_suite(builtin_corpus("preorder_s4", 3))),
    Criterion(5, "regular elements of KTB algebras form ortholattices", 30, lambda: goldblatt_image_suite(builtin_corpus("rs_ktb", 3))),
    Criterion(6, "regular-valuation invariance", 120, pat_invariance_suite),
    Criterion(7, "preservation under core superalgebras and products", 60, preservation_suite),
    Criterion(8, "least companion closure equals core closure", 60, lambda: tau_rho_suite(builtin_corpus("poset_heyting", 4), builtin_corpus("preorder_s4", 3))),
    Criterion(9, "double-negation sanity pair", 5, dna_sanity_suite),
    Criterion(10, "parser round trip, axioms, congruences", 60, infrastructure_suite),
)


@dataclass
class Outcome:
    criterion: Criterion
    report: Report
    seconds: float

    @property
    def passed(self) -> bool:
        return self.report.agreement and self.seconds <= self.criterion.seconds

    def line(self) -> str:
        c = self.criterion
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {c.number:2d} {status}  {len(self.report.checks):5d} checks  {self.seconds:7.2f} s (budget {c.seconds:g} s)  {c.title}"


def run_criterion(c: Criterion) -> Outcome:
    start = time.perf_counter()
    rep = c.run()
    return Outcome(c, rep, time.perf_counter() - start)
