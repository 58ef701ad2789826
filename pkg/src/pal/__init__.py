"""Finite-algebra toolkit for selective translations between propositional logics.

Formulas and signatures live in ``pal.lang``, finite algebras in
``pal.algebra``, frame-based corpora in ``pal.corpus``, translations in
``pal.translate``, regular valuations in ``pal.polyatomic``, the
regular-element functor and Boolean envelope in ``pal.adjoint``, companion
maps in ``pal.companions`` and the named verification suites in
``pal.suites``.
"""

from .adjoint import boolean_envelope, theta_image
from .algebra import FiniteAlgebra, validates, validity_witness
from .corpus import builtin_algebra, builtin_corpus, load_algebra, save_algebra
from .lang import parse_formula, render_formula
from .polyatomic import pat_validates, regular_elements, regular_subalgebra
from .suites import SUITES, run_suite
from .translate import apply_translation, builtin_translation

__version__ = "0.1.0"

__all__ = [
    "FiniteAlgebra",
    "SUITES",
    "apply_translation",
    "boolean_envelope",
    "builtin_algebra",
    "builtin_corpus",
    "builtin_translation",
    "load_algebra",
    "parse_formula",
    "pat_validates",
    "regular_elements",
    "regular_subalgebra",
    "render_formula",
    "run_suite",
    "save_algebra",
    "theta_image",
    "validates",
    "validity_witness",
]
