"""Numeric confirmation of catalog identities on random wavefunctions.

Every canonical monomial acts concretely: position factors multiply, the
radial power becomes |r|^m, each momentum factor is -i*hbar times the
corresponding derivative, and spin components act as hbar/2 times Pauli
matrices on a two-component spinor.  Derivatives come from exact Taylor
jets of the test state (polynomial times Gaussian), so there is no
finite-difference error anywhere; the only noise left is float roundoff,
which is why a passing identity sits around 1e-15 and the tolerance is a
comfortable 1e-8.

Reports are deterministic for a given seed.  Relative residuals are
normalized by the largest single-monomial contribution of the left side at
the same point, so massive cancellations are scored honestly.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .errors import UsageError
from .jets import Jet
from .operators import SpinMode, VecExpr
from . import catalog, lang

__all__ = [
    "DEFAULT_BINDINGS",
    "TestState",
    "ResidualReport",
    "default_states",
    "sample_points",
    "state_jets",
    "apply",
    "residual",
    "default_battery",
    "run_battery",
]

DEFAULT_BINDINGS = {"hbar": 1.0, "M": 1.0, "kappa": 1.0, "k1": -1.0, "k2": 0.2}

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_QUAD_KEYS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
              (2, 0, 0), (0, 2, 0), (0, 0, 2),
              (1, 1, 0), (1, 0, 1), (0, 1, 1))


@dataclass(frozen=True)
class TestState:
    """Polynomial times Gaussian, one polynomial per spinor component."""
    gaussian_width: float
    center: tuple
    poly_coeffs: tuple     # two dicts {(i,j,k): complex}, total degree <= 2
    spinor: tuple          # two complex weights, not both zero


@dataclass(frozen=True)
class ResidualReport:
    check_id: str
    num_points: int
    max_abs_residual: float
    max_rel_residual: float
    seed: int


def default_states(count=5, seed=42):
    rng = random.Random(seed)
    states = []
    for _ in range(count):
        width = rng.uniform(0.7, 1.5)
        center = tuple(rng.uniform(-0.5, 0.5) for _ in range(3))
        polys = []
        for _comp in range(2):
            polys.append({key: complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                          for key in _QUAD_KEYS})
        while True:
            spinor = (complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                      complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
            if max(abs(spinor[0]), abs(spinor[1])) > 0.3:
                break
        states.append(TestState(width, center, tuple(polys), spinor))
    return states


def sample_points(state, count, rng):
    """Directions uniform on the sphere, radii in a shell clear of the origin."""
    lo = max(0.5, 0.3 * state.gaussian_width)
    points = []
    while len(points) < count:
        v = (rng.gauss(0, 1), rng.gauss(0, 1), rng.gauss(0, 1))
        norm = sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)
        if norm < 1e-9:
            continue
        radius = rng.uniform(lo, 3.0)
        points.append(tuple(radius * c / norm for c in v))
    return points


def state_jets(state, point, order):
    """Taylor jets of both spinor components around the point."""
    quad = Jet.constant(order, 0.0)
    for u in range(3):
        d = Jet.variable(order, u, point[u]) - Jet.constant(order, state.center[u])
        quad = quad + d * d
    gauss = quad.scale(-1.0 / (2.0 * state.gaussian_width ** 2)).exp()
    return tuple(
        (Jet.from_poly(order, state.poly_coeffs[comp], point) * gauss)
        .scale(state.spinor[comp])
        for comp in range(2)
    )


def _spin_matrix(spin_word, hbar):
    mat = np.eye(2, dtype=complex)
    for u in range(3):
        if spin_word[u]:
            base = (hbar / 2.0) * _SIGMA[u]
            for _ in range(spin_word[u]):
                mat = mat @ base
    return mat


def _compile(expr, bindings):
    """Freeze an operator expression into plain numeric monomial data."""
    hbar = bindings["hbar"]
    rows = []
    for m in expr.monomials():
        coeff = m.coeff.evaluate(bindings)
        degree = sum(m.mom_exps)
        factor = coeff * (-1j * hbar) ** degree
        rows.append((factor, m.pos_exps, m.rad_exp, m.mom_exps,
                     _spin_matrix(m.spin_word, hbar)))
    return rows


def _eval_compiled(rows, jets, point, radius):
    total = np.zeros(2, dtype=complex)
    largest = 0.0
    for factor, pos, rad, alpha, mat in rows:
        scale = factor
        if pos != (0, 0, 0):
            scale *= point[0] ** pos[0] * point[1] ** pos[1] * point[2] ** pos[2]
        if rad:
            scale *= radius ** rad
        deriv = np.array([jets[0].partial(alpha), jets[1].partial(alpha)])
        term = scale * (mat @ deriv)
        total += term
        mag = abs(term[0]) + abs(term[1])
        if mag > largest:
            largest = mag
    return total, largest


def _momentum_order(expr):
    if isinstance(expr, VecExpr):
        return max(c.momentum_order() for c in expr.components)
    return expr.momentum_order()


def apply(expr, state, point, bindings=None, mu=None, order=None):
    """Act with expr on the state's wavefunction; returns a complex 2-vector."""
    merged = dict(DEFAULT_BINDINGS)
    if bindings:
        merged.update(bindings)
    if mu is not None:
        expr = expr.substitute("mu", Fraction(mu))
    need = _momentum_order(expr)
    if order is None:
        order = need
    elif order < need:
        raise UsageError("jet order %d below the momentum degree %d" % (order, need))
    jets = state_jets(state, point, order)
    radius = sqrt(point[0] ** 2 + point[1] ** 2 + point[2] ** 2)
    if isinstance(expr, VecExpr):
        raise UsageError("apply acts with one component at a time")
    rows = _compile(expr, merged)
    value, _ = _eval_compiled(rows, jets, point, radius)
    return value


def _components(expr, like=None):
    if isinstance(expr, VecExpr):
        return list(expr.components)
    if like is not None and isinstance(like, VecExpr):
        # scalar zero standing in for a vector right-hand side
        return [expr, expr, expr]
    return [expr]


def _mu_values(policy):
    if policy == "0":
        return (0,)
    if policy == "1":
        return (1,)
    return (0, 1)


def residual(spec, states=None, points_per_state=20, seed=42, bindings=None):
    """Max residual of one identity over states x points, both couplings."""
    merged = dict(DEFAULT_BINDINGS)
    if bindings:
        merged.update(bindings)
    if states is None:
        states = default_states(5, seed)
    suite = catalog.get_suite(spec.suite)
    env = suite.env(SpinMode.ABSTRACT)
    lhs = lang.elaborate(spec.lhs, env)
    rhs = lang.elaborate(spec.rhs, env)
    lhs_parts = _components(lhs, like=rhs)
    rhs_parts = _components(rhs, like=lhs)
    if len(lhs_parts) != len(rhs_parts):
        raise UsageError("check %s mixes vector and scalar sides" % spec.check_id)

    max_abs = 0.0
    max_rel = 0.0
    num_points = 0
    for mu in _mu_values(spec.mu_policy):
        sides = []
        order = 0
        for le, re in zip(lhs_parts, rhs_parts):
            le = le.substitute("mu", Fraction(mu))
            re = re.substitute("mu", Fraction(mu))
            order = max(order, _momentum_order(le), _momentum_order(re))
            sides.append((_compile(le, merged), _compile(re, merged)))
        rng = random.Random(seed)
        for state in states:
            for point in sample_points(state, points_per_state, rng):
                jets = state_jets(state, point, order)
                radius = sqrt(point[0] ** 2 + point[1] ** 2 + point[2] ** 2)
                num_points += 1
                for lrows, rrows in sides:
                    lval, lmax = _eval_compiled(lrows, jets, point, radius)
                    rval, _ = _eval_compiled(rrows, jets, point, radius)
                    gap = abs(lval[0] - rval[0]) + abs(lval[1] - rval[1])
                    max_abs = max(max_abs, gap)
                    max_rel = max(max_rel, gap / lmax if lmax > 0 else gap)
    return ResidualReport(spec.check_id, num_points, max_abs, max_rel, seed)


# checks the numeric battery runs by default: every equation from the two
# spin-free suites, and a representative slice of the larger two
_BATTERY_EXTRA = {
    "theorem": (
        "J_recast", "JJ_cov_xy", "JPi_cov_xy", "JPixJ_cov_xy", "Jr_cov_xy",
        "JS_cov_xy", "RxR_master", "V_from_constraint", "h_constraint_inner",
        "RR_closure", "J_Ham", "R_Ham", "J_Pisq", "J2_Ham", "Jz_Ham",
        "Pi_r_cc_xx", "Pi_rinv", "Pi_rinv2", "PiPi_field", "Pi_comm_Pisq",
        "PiJ_anticross", "Pi_rS_lemma", "PiPi_field_printed", "Pi_Pisq_printed",
    ),
    "spectrum_algebra": (
        "Sr_conserved", "J_dot_R", "R_dot_J", "R2_expansion", "JR_cov_xy",
    ),
}


def default_battery():
    """(suite, check_id) pairs for the standard numeric sweep."""
    pairs = []
    for name in ("so3", "so4", "inverse"):
        for spec in catalog.get_suite(name).checks:
            if spec.relation == "==":
                pairs.append((name, spec.check_id))
    for name in ("theorem", "spectrum_algebra"):
        suite = catalog.get_suite(name)
        for cid in _BATTERY_EXTRA[name]:
            suite.spec(cid)
            pairs.append((name, cid))
    return tuple(pairs)


def run_battery(pairs=None, states=None, points_per_state=20, seed=42, bindings=None):
    pairs = pairs or default_battery()
    if states is None:
        states = default_states(5, seed)
    reports = []
    for suite_name, cid in pairs:
        spec = catalog.get_suite(suite_name).spec(cid)
        reports.append(residual(spec, states=states,
                                points_per_state=points_per_state,
                                seed=seed, bindings=bindings))
    return reports
