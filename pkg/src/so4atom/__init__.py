"""Exact verification kernel for the hidden SO(4) symmetry of
Coulomb-type Hamiltonians, with and without spin coupling.

Layers: exact scalars (:mod:`so4atom.scalars`), the noncommutative
operator algebra (:mod:`so4atom.operators`), a small expression language
(:mod:`so4atom.lang`), the identity catalog and runner
(:mod:`so4atom.catalog`), potential re-derivation from closure
constraints (:mod:`so4atom.ansatz`), an independent numeric spot-check
oracle (:mod:`so4atom.oracle`), and a radial eigensolver that confirms
the closed-form spectrum (:mod:`so4atom.spectrum`)."""

__version__ = "0.1.0"

from so4atom.operators import OperatorExpr, SpinMode, VecExpr  # noqa: F401
from so4atom.scalars import ScalarCoeff, SymbolRegistry  # noqa: F401
