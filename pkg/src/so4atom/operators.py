"""Noncommutative operator algebra on a canonical monomial basis.

Generators: three positions r_u, a radial power r^m (any integer m),
three momenta p_u, three spin components S_u.  Canonical monomials are

    r_x^px r_y^py r_z^pz  r^rad  p_x^mx p_y^my p_z^mz  S_x^sx S_y^sy S_z^sz

stored as 10-tuples of integer exponents with exact scalar coefficients
(:class:`so4atom.scalars.ScalarCoeff`).  The defining relations:

    [r_u, p_v] = i hbar delta_uv        [S_u, S_v] = i hbar eps_uvw S_w
    [p_u, r^m] = -i hbar m r^(m-2) r_u  (spin commutes with r, p, r^m)

Positions and radial powers commute with each other, which makes the
basis redundant: r^2 and r_x^2 + r_y^2 + r_z^2 are the same element.
Construction therefore runs a merge pass that collapses an equal
coefficient triple (r_x^2 + r_y^2 + r_z^2) X into r^2 X, and zero
testing reduces to a genuine normal form in the quotient ring (see
``_quotient_terms``).  Evaluation at r = 0 is never attempted; negative
radial powers are formal Laurent data.

Spin has two modes.  Abstract: spin words are free modulo the su(2)
relations only.  Spin-1/2: words carry the extra relation
S_u S_v = (hbar^2/4) delta_uv + (i hbar/2) eps_uvw S_w, so total spin
degree stays <= 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from so4atom import _kernel as K
from so4atom.errors import DomainError, UsageError
from so4atom.scalars import HBAR_INDEX, ScalarCoeff, SymbolRegistry

_ZERO_SIG = (0, 0, 0, 0, 0, 0, 0, 0, 0, 0)


class SpinMode(enum.Enum):
    ABSTRACT = "abstract"
    SPIN_HALF = "half"


@dataclass(frozen=True)
class Monomial:
    """One canonical basis word with its coefficient."""

    coeff: ScalarCoeff
    pos_exps: tuple
    rad_exp: int
    mom_exps: tuple
    spin_word: tuple


def _check_compat(a, b):
    if a.registry is not b.registry:
        raise UsageError("operands belong to different symbol registries")
    if a.mode is not b.mode:
        raise UsageError("operands have different spin modes")


def _acc_raw(out, sig, raw):
    cur = out.get(sig)
    if cur is None:
        out[sig] = dict(raw)
    else:
        merged = K.sc_add_raw(cur, raw)
        if merged:
            out[sig] = merged
        else:
            del out[sig]


def _merge_radial(terms):
    """Collapse equal-coefficient (r_x^2 + r_y^2 + r_z^2) X triples into
    r^2 X.  Deterministic: scan signatures in sorted order, restart after
    each rewrite.  Mixed monomials that do not match the full pattern are
    left alone; completeness is the zero test's job."""
    changed = True
    while changed:
        changed = False
        for sig in sorted(terms):
            px = sig[0]
            if px < 2:
                continue
            c = terms[sig]
            rest = sig[3:]
            sy = (px - 2, sig[1] + 2, sig[2]) + rest
            sz = (px - 2, sig[1], sig[2] + 2) + rest
            if sy == sig or sz == sig:
                continue
            if terms.get(sy) == c and terms.get(sz) == c:
                del terms[sig], terms[sy], terms[sz]
                tgt = (px - 2, sig[1], sig[2], sig[3] + 2) + sig[4:]
                _acc_raw(terms, tgt, c)
                changed = True
                break
    return terms


def _quotient_terms(terms):
    """Rewrite to the true normal form of the quotient by r^2 = sum r_u^2
    (with r inverted).  Basis: monomials with rad <= 1, and rad <= -1
    only when the r_x exponent is <= 1.  Empty result iff the element is
    zero, which makes this a complete zero test."""
    out = {}
    work = [(sig, dict(c)) for sig, c in terms.items()]
    while work:
        sig, c = work.pop()
        px, py, pz, m = sig[0], sig[1], sig[2], sig[3]
        rest = sig[4:]
        if m >= 2:
            delta = m & 1
            e = (m - delta) // 2
            for i in range(e + 1):
                for j in range(e - i + 1):
                    k = e - i - j
                    w = comb(e, i) * comb(e - i, j)
                    scaled = {}
                    K.sc_iadd_scaled(scaled, c, (w, 0, 1), HBAR_INDEX, 0)
                    _acc_raw(out, (px + 2 * i, py + 2 * j, pz + 2 * k, delta) + rest, scaled)
        elif m <= -1 and px >= 2:
            # r_x^2 r^m = r^(m+2) - r_y^2 r^m - r_z^2 r^m
            neg = K.sc_neg_raw(c)
            work.append(((px - 2, py, pz, m + 2) + rest, dict(c)))
            work.append(((px - 2, py + 2, pz, m) + rest, dict(neg)))
            work.append(((px - 2, py, pz + 2, m) + rest, neg))
        else:
            _acc_raw(out, sig, c)
    return out


class OperatorExpr:
    """Finite sum of canonical monomials.  Immutable by convention."""

    __slots__ = ("registry", "mode", "_terms")

    def __init__(self, registry, mode, terms, *, _canonical=False):
        self.registry = registry
        self.mode = mode
        if not _canonical:
            terms = _merge_radial({s: c for s, c in terms.items() if c})
        self._terms = terms

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, registry, mode=SpinMode.ABSTRACT):
        return cls(registry, mode, {}, _canonical=True)

    @classmethod
    def from_scalar(cls, coeff: ScalarCoeff, mode=SpinMode.ABSTRACT):
        if coeff.is_zero():
            return cls.zero(coeff.registry, mode)
        return cls(coeff.registry, mode, {_ZERO_SIG: dict(coeff.raw())}, _canonical=True)

    @classmethod
    def one(cls, registry, mode=SpinMode.ABSTRACT):
        return cls.from_scalar(ScalarCoeff.one(registry), mode)

    @classmethod
    def generator(cls, registry, kind, axis=None, mode=SpinMode.ABSTRACT):
        """kind in {'pos', 'mom', 'spin'} with axis 0..2."""
        offset = {"pos": 0, "mom": 4, "spin": 7}[kind]
        sig = list(_ZERO_SIG)
        sig[offset + axis] = 1
        return cls(
            registry, mode, {tuple(sig): {(): (1, 0, 1)}}, _canonical=True
        )

    @classmethod
    def radial_power(cls, registry, m, mode=SpinMode.ABSTRACT):
        if m == 0:
            return cls.one(registry, mode)
        sig = (0, 0, 0, m, 0, 0, 0, 0, 0, 0)
        terms = {sig: {(): (1, 0, 1)}}
        if m >= 2:
            # r^2 alone is canonical; the merge pass never expands it.
            return cls(registry, mode, terms, _canonical=True)
        return cls(registry, mode, terms, _canonical=True)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = OperatorExpr.from_scalar(
                ScalarCoeff.from_rational(self.registry, other), self.mode
            )
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        _check_compat(self, other)
        out = {s: dict(c) for s, c in self._terms.items()}
        for sig, c in other._terms.items():
            _acc_raw(out, sig, c)
        return OperatorExpr(self.registry, self.mode, out)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = OperatorExpr.from_scalar(
                ScalarCoeff.from_rational(self.registry, other), self.mode
            )
        return self + (-other)

    def __neg__(self):
        return OperatorExpr(
            self.registry,
            self.mode,
            {s: K.sc_neg_raw(c) for s, c in self._terms.items()},
            _canonical=True,
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(ScalarCoeff.from_rational(self.registry, other))
        if isinstance(other, ScalarCoeff):
            return self.scaled(other)
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        _check_compat(self, other)
        raw = K.expr_mul(
            self._terms, other._terms, self.mode is SpinMode.SPIN_HALF, HBAR_INDEX
        )
        return OperatorExpr(self.registry, self.mode, raw)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(ScalarCoeff.from_rational(self.registry, other))
        if isinstance(other, ScalarCoeff):
            return self.scaled(other)
        return NotImplemented

    def scaled(self, coeff):
        if isinstance(coeff, (int, Fraction)):
            coeff = ScalarCoeff.from_rational(self.registry, coeff)
        if coeff.registry is not self.registry:
            raise UsageError("operands belong to different symbol registries")
        raw = coeff.raw()
        out = {}
        for sig, c in self._terms.items():
            merged = K.sc_mul_raw(c, raw)
            if merged:
                out[sig] = merged
        return OperatorExpr(self.registry, self.mode, out)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise UsageError("operator powers must be integers")
        if n < 0:
            return self.try_invert() ** (-n)
        out = OperatorExpr.one(self.registry, self.mode)
        for _ in range(n):
            out = out * self
        return out

    def try_invert(self) -> "OperatorExpr":
        """Inverse of a single-monomial expression whose word involves at
        most the radial power (anything else has no inverse here)."""
        if len(self._terms) != 1:
            raise DomainError("only single-term expressions are invertible")
        (sig, c), = self._terms.items()
        if any(sig[i] for i in (0, 1, 2, 4, 5, 6, 7, 8, 9)):
            raise DomainError(
                "inverse exists only for scalar multiples of radial powers"
            )
        inv = ScalarCoeff(self.registry, dict(c)).invert()
        return OperatorExpr(
            self.registry,
            self.mode,
            {(0, 0, 0, -sig[3], 0, 0, 0, 0, 0, 0): dict(inv.raw())},
            _canonical=True,
        )

    # -- substitution -------------------------------------------------

    def substitute(self, name, value) -> "OperatorExpr":
        out = {}
        for sig, c in self._terms.items():
            c2 = ScalarCoeff(self.registry, c).substitute(name, value)
            if not c2.is_zero():
                out[sig] = dict(c2.raw())
        return OperatorExpr(self.registry, self.mode, out)

    def substitute_even_powers(self, name, value: ScalarCoeff) -> "OperatorExpr":
        out = {}
        for sig, c in self._terms.items():
            c2 = ScalarCoeff(self.registry, c).substitute_even_powers(name, value)
            if not c2.is_zero():
                out[sig] = dict(c2.raw())
        return OperatorExpr(self.registry, self.mode, out)

    # -- spin reduction -----------------------------------------------

    def reduce_spin_half(self) -> "OperatorExpr":
        if self.mode is SpinMode.SPIN_HALF:
            return self
        out = {}
        for sig, c in self._terms.items():
            word = sig[7:10]
            if word == (0, 0, 0):
                _acc_raw(out, sig, c)
                continue
            for w in K.spin_word_half(word):
                sig2 = sig[:7] + (w[0], w[1], w[2])
                tgt = out.setdefault(sig2, {})
                K.sc_iadd_scaled(tgt, c, (w[3], w[4], w[5]), HBAR_INDEX, w[6])
                if not tgt:
                    del out[sig2]
        return OperatorExpr(self.registry, SpinMode.SPIN_HALF, out)

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        if not self._terms:
            return True
        return not _quotient_terms(self._terms)

    def equivalent(self, other) -> bool:
        _check_compat(self, other)
        return (self - other).is_zero()

    def monomials(self):
        for sig in sorted(self._terms):
            yield Monomial(
                coeff=ScalarCoeff(self.registry, self._terms[sig]),
                pos_exps=sig[0:3],
                rad_exp=sig[3],
                mom_exps=sig[4:7],
                spin_word=sig[7:10],
            )

    def term_count(self):
        return len(self._terms)

    def momentum_order(self):
        return max((sig[4] + sig[5] + sig[6] for sig in self._terms), default=0)

    def spin_degree(self):
        return max((sig[7] + sig[8] + sig[9] for sig in self._terms), default=0)

    def max_radial_growth(self):
        """Largest rad_exp + position degree over all terms; products may
        shuffle between the two but never increase the total."""
        return max(
            (sig[3] + sig[0] + sig[1] + sig[2] for sig in self._terms), default=0
        )

    def raw_terms(self):
        return self._terms

    def __eq__(self, other):
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return (
            self.registry is other.registry
            and self.mode is other.mode
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash(tuple(sorted((s, frozenset(c.items())) for s, c in self._terms.items())))

    def __str__(self):
        if not self._terms:
            return "0"
        glyphs = ("x", "y", "z", None, "px", "py", "pz", "Sx", "Sy", "Sz")
        parts = []
        for sig in sorted(self._terms):
            c = ScalarCoeff(self.registry, self._terms[sig])
            word = []
            for i, g in enumerate(glyphs):
                if i == 3:
                    if sig[3]:
                        word.append(f"r^{sig[3]}" if sig[3] != 1 else "r")
                    continue
                if sig[i]:
                    word.append(f"{g}^{sig[i]}" if sig[i] != 1 else g)
            cs = str(c)
            if len(c.raw()) > 1 or ("+" in cs and not cs.startswith("(")):
                cs = f"({cs})"
            parts.append(f"{cs}*{' '.join(word)}" if word else cs)
        return " + ".join(parts)

    def __repr__(self):
        return f"OperatorExpr({self})"


# ---------------------------------------------------------------------------
# Vectors: triples of operator expressions


class VecExpr:
    __slots__ = ("x", "y", "z")

    def __init__(self, x, y, z):
        self.x = x
        self.y = y
        self.z = z

    @property
    def components(self):
        return (self.x, self.y, self.z)

    def component(self, axis):
        if axis in ("x", "y", "z"):
            axis = "xyz".index(axis)
        return self.components[axis]

    @property
    def registry(self):
        return self.x.registry

    @property
    def mode(self):
        return self.x.mode

    def map(self, fn):
        return VecExpr(fn(self.x), fn(self.y), fn(self.z))

    def __add__(self, other):
        if not isinstance(other, VecExpr):
            return NotImplemented
        return VecExpr(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        if not isinstance(other, VecExpr):
            return NotImplemented
        return VecExpr(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self):
        return self.map(lambda c: -c)

    def __mul__(self, other):
        # vector times operator, componentwise on the right
        if isinstance(other, VecExpr):
            raise UsageError("use cross() or dot() for vector-vector products")
        return self.map(lambda c: c * other)

    def __rmul__(self, other):
        if isinstance(other, VecExpr):
            raise UsageError("use cross() or dot() for vector-vector products")
        if isinstance(other, (int, Fraction, ScalarCoeff)):
            return self.map(lambda c: c * other)
        return self.map(lambda c: other * c)

    def scaled(self, coeff):
        return self.map(lambda c: c.scaled(coeff))

    def substitute(self, name, value):
        return self.map(lambda c: c.substitute(name, value))

    def reduce_spin_half(self):
        return self.map(lambda c: c.reduce_spin_half())

    def is_zero(self):
        return self.x.is_zero() and self.y.is_zero() and self.z.is_zero()

    def __str__(self):
        return f"({self.x}, {self.y}, {self.z})"


# ---------------------------------------------------------------------------
# Spec-level operations


def mul(a, b):
    return a * b


def scale(coeff, a):
    if isinstance(a, VecExpr):
        return a.map(lambda c: c.scaled(coeff) if isinstance(coeff, ScalarCoeff) else c * coeff)
    if isinstance(coeff, ScalarCoeff):
        return a.scaled(coeff)
    return a * coeff


def commutator(a, b):
    """[a, b].  Vector arguments distribute componentwise on that side."""
    if isinstance(a, VecExpr) and isinstance(b, VecExpr):
        raise UsageError("commutator of two vectors is not defined; take components")
    if isinstance(a, VecExpr):
        return a.map(lambda c: commutator(c, b))
    if isinstance(b, VecExpr):
        return b.map(lambda c: commutator(a, c))
    return a * b - b * a


def cross(a: VecExpr, b: VecExpr) -> VecExpr:
    """Componentwise cross product; factors of a stay left of b."""
    return VecExpr(
        a.y * b.z - a.z * b.y,
        a.z * b.x - a.x * b.z,
        a.x * b.y - a.y * b.x,
    )


def dot(a: VecExpr, b: VecExpr) -> OperatorExpr:
    return a.x * b.x + a.y * b.y + a.z * b.z


def is_zero(a) -> bool:
    return a.is_zero()


def reduce_spin_half(a):
    return a.reduce_spin_half()


# ---------------------------------------------------------------------------
# Generator shorthands


def position_vec(reg, mode=SpinMode.ABSTRACT):
    return VecExpr(*(OperatorExpr.generator(reg, "pos", u, mode) for u in range(3)))


def momentum_vec(reg, mode=SpinMode.ABSTRACT):
    return VecExpr(*(OperatorExpr.generator(reg, "mom", u, mode) for u in range(3)))


def spin_vec(reg, mode=SpinMode.ABSTRACT):
    return VecExpr(*(OperatorExpr.generator(reg, "spin", u, mode) for u in range(3)))


def orbital_vec(reg, mode=SpinMode.ABSTRACT):
    return cross(position_vec(reg, mode), momentum_vec(reg, mode))


def radial_power(reg, m, mode=SpinMode.ABSTRACT):
    return OperatorExpr.radial_power(reg, m, mode)


def unit_radial_vec(reg, mode=SpinMode.ABSTRACT):
    rinv = radial_power(reg, -1, mode)
    return position_vec(reg, mode) * rinv
