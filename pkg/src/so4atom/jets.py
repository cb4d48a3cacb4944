"""Truncated Taylor jets in three variables.

A Jet stores the coefficients of a function's expansion around a base point,
up to a fixed total order: terms[(ax, ay, az)] is the coefficient of
dx^ax dy^ay dz^az.  Products truncate; exp and fractional powers compose
through the nilpotent part, so every coefficient is exact for the inputs we
build (polynomials, Gaussians, powers of |r|).  The mixed partial of order
alpha at the base point is alpha! times the stored coefficient, which is how
the numeric side differentiates wavefunctions without finite differencing.
"""

from fractions import Fraction
from math import factorial

__all__ = ["Jet", "alpha_factorial"]


def alpha_factorial(alpha):
    ax, ay, az = alpha
    return factorial(ax) * factorial(ay) * factorial(az)


def _keys(order):
    for ax in range(order + 1):
        for ay in range(order + 1 - ax):
            for az in range(order + 1 - ax - ay):
                yield (ax, ay, az)


class Jet:
    __slots__ = ("order", "terms")

    def __init__(self, order, terms=None):
        if order < 0:
            raise ValueError("jet order must be nonnegative")
        self.order = order
        self.terms = {}
        if terms:
            for key, val in terms.items():
                if sum(key) <= order and val != 0:
                    self.terms[key] = complex(val)

    @classmethod
    def constant(cls, order, value):
        return cls(order, {(0, 0, 0): value})

    @classmethod
    def variable(cls, order, axis, base):
        """base + dx_axis as a jet."""
        unit = [0, 0, 0]
        unit[axis] = 1
        return cls(order, {(0, 0, 0): base, tuple(unit): 1.0})

    @classmethod
    def from_poly(cls, order, coeffs, point):
        """A polynomial sum c_ijk x^i y^j z^k expanded around point."""
        out = cls.constant(order, 0.0)
        vars_ = [cls.variable(order, u, point[u]) for u in range(3)]
        powers = [_power_table(v, max((k[u] for k in coeffs), default=0))
                  for u, v in enumerate(vars_)]
        for (i, j, k), c in coeffs.items():
            term = powers[0][i] * powers[1][j] * powers[2][k]
            out = out + term.scale(c)
        return out

    def value(self):
        return self.terms.get((0, 0, 0), 0.0 + 0.0j)

    def partial(self, alpha):
        """Mixed partial of order alpha evaluated at the base point."""
        return self.terms.get(tuple(alpha), 0.0 + 0.0j) * alpha_factorial(alpha)

    def scale(self, factor):
        return Jet(self.order, {k: v * factor for k, v in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return Jet(min(self.order, other.order), out)

    def __sub__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return self + other.scale(-1.0)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        order = min(self.order, other.order)
        out = {}
        for (a1, a2, a3), v in self.terms.items():
            for (b1, b2, b3), w in other.terms.items():
                key = (a1 + b1, a2 + b2, a3 + b3)
                if key[0] + key[1] + key[2] <= order:
                    out[key] = out.get(key, 0.0) + v * w
        return Jet(order, out)

    def _nilpotent_split(self):
        c0 = self.value()
        rest = {k: v for k, v in self.terms.items() if k != (0, 0, 0)}
        return c0, Jet(self.order, rest)

    def exp(self):
        from cmath import exp as cexp
        c0, delta = self._nilpotent_split()
        out = Jet.constant(self.order, 1.0)
        power = Jet.constant(self.order, 1.0)
        for k in range(1, self.order + 1):
            power = power * delta
            out = out + power.scale(1.0 / factorial(k))
        return out.scale(cexp(c0))

    def fractional_power(self, exponent):
        """(c0 + delta)^exponent via the binomial series; c0 must not vanish."""
        exponent = Fraction(exponent)
        c0, delta = self._nilpotent_split()
        if c0 == 0:
            raise ValueError("fractional power needs a nonzero base value")
        base = complex(c0) ** float(exponent)
        ratio = delta.scale(1.0 / c0)
        out = Jet.constant(self.order, 1.0)
        power = Jet.constant(self.order, 1.0)
        coeff = Fraction(1)
        for k in range(1, self.order + 1):
            coeff = coeff * (exponent - (k - 1)) / k
            power = power * ratio
            out = out + power.scale(float(coeff))
        return out.scale(base)

    def __repr__(self):
        inner = ", ".join("%s: %.6g%+.6gj" % (k, v.real, v.imag)
                          for k, v in sorted(self.terms.items()))
        return "Jet(order=%d, {%s})" % (self.order, inner)


def _power_table(jet, top):
    table = [Jet.constant(jet.order, 1.0)]
    for _ in range(top):
        table.append(table[-1] * jet)
    return table
