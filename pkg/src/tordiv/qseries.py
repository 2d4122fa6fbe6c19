"""Truncated q-expansions with exact rational coefficients.

A :class:`QSeries` knows every coefficient with exponent in
``[floor, precision)``. Products lose precision according to
``min(a.precision + b.floor, b.precision + a.floor)`` and
:func:`constant_term` refuses to answer when exponent 0 is not covered.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Dict, Hashable, Iterable, Optional, Tuple

Rat = Fraction


class PrecisionError(ArithmeticError):
    """Requested data lies beyond the known precision."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class QSeries:
    """Scalar truncated expansion ``sum c_e q^e`` for ``floor <= e < precision``."""

    coeffs: Dict[Fraction, Fraction]
    precision: Fraction
    floor: Fraction = Fraction(0)

    def __post_init__(self):
        prec = _frac(self.precision)
        flo = _frac(self.floor)
        clean = {}
        for e, c in self.coeffs.items():
            e, c = _frac(e), _frac(c)
            if c == 0 or e >= prec:
                continue
            if e < flo:
                raise ValueError(f"exponent {e} below floor {flo}")
            clean[e] = clean.get(e, Fraction(0)) + c
        object.__setattr__(self, "coeffs", {e: c for e, c in sorted(clean.items()) if c})
        object.__setattr__(self, "precision", prec)
        object.__setattr__(self, "floor", flo)

    @classmethod
    def zero(cls, precision=10**9, floor=0) -> "QSeries":
        return cls({}, precision, floor)

    @classmethod
    def constant(cls, c, precision=10**9) -> "QSeries":
        return cls({Fraction(0): c}, precision, 0)

    def coefficient(self, e) -> Fraction:
        e = _frac(e)
        if e >= self.precision:
            raise PrecisionError(f"exponent {e} beyond precision {self.precision}")
        return self.coeffs.get(e, Fraction(0))

    def __add__(self, other: "QSeries") -> "QSeries":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return QSeries(out, min(self.precision, other.precision), min(self.floor, other.floor))

    def __neg__(self) -> "QSeries":
        return self.scale(-1)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, k) -> "QSeries":
        k = _frac(k)
        return QSeries({e: k * c for e, c in self.coeffs.items()}, self.precision, self.floor)

    def __mul__(self, other: "QSeries") -> "QSeries":
        prec = min(self.precision + other.floor, other.precision + self.floor)
        out: Dict[Fraction, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e < prec:
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
        return QSeries(out, prec, self.floor + other.floor)

    def q_d_dq(self) -> "QSeries":
        return QSeries({e: e * c for e, c in self.coeffs.items()}, self.precision, self.floor)

    def truncate(self, precision) -> "QSeries":
        return QSeries(self.coeffs, min(self.precision, _frac(precision)), self.floor)


def constant_term(a: QSeries) -> Fraction:
    """Coefficient of ``q^0``; a hard error if exponent 0 is not covered."""
    if a.precision <= 0:
        raise PrecisionError(f"constant term requested at precision {a.precision}")
    if a.floor > 0:
        return Fraction(0)
    return a.coeffs.get(Fraction(0), Fraction(0))


def eisenstein_E2(precision) -> QSeries:
    """Holomorphic part ``1 - 24 sum sigma_1(n) q^n``."""
    precision = _frac(precision)
    top = -((-precision.numerator) // precision.denominator)  # ceil
    coeffs = {Fraction(0): Fraction(1)}
    for n in range(1, top):
        s = sum(d for d in range(1, n + 1) if n % d == 0)
        coeffs[Fraction(n)] = Fraction(-24 * s)
    return QSeries(coeffs, precision, 0)


@dataclass(frozen=True)
class VVQExpansion:
    """Vector valued truncated expansion.

    Attributes:
        components: Maps a component key (a discriminant group element or a
            tuple of such) to ``{exponent: coefficient}``.
        precision: Coefficients are complete for exponents below this.
        floor: No exponent lies below this.
    """

    components: Dict[Hashable, Dict[Fraction, Fraction]]
    precision: Fraction
    floor: Fraction = Fraction(0)

    def __post_init__(self):
        prec, flo = _frac(self.precision), _frac(self.floor)
        comps = {}
        for k, terms in self.components.items():
            s = QSeries(terms, prec, flo).coeffs
            if s:
                comps[k] = s
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "precision", prec)
        object.__setattr__(self, "floor", flo)

    @property
    def denominator(self) -> int:
        d = 1
        for terms in self.components.values():
            for e in terms:
                d = lcm(d, e.denominator)
        return d

    def component(self, key) -> QSeries:
        return QSeries(self.components.get(key, {}), self.precision, self.floor)

    def coefficient(self, e, key) -> Fraction:
        return self.component(key).coefficient(e)

    def scale(self, k) -> "VVQExpansion":
        k = _frac(k)
        return VVQExpansion(
            {key: {e: k * c for e, c in t.items()} for key, t in self.components.items()},
            self.precision,
            self.floor,
        )

    def __add__(self, other: "VVQExpansion") -> "VVQExpansion":
        keys = set(self.components) | set(other.components)
        comps = {k: (self.component(k) + other.component(k)).coeffs for k in keys}
        return VVQExpansion(comps, min(self.precision, other.precision), min(self.floor, other.floor))

    def __neg__(self) -> "VVQExpansion":
        return self.scale(-1)

    def __sub__(self, other: "VVQExpansion") -> "VVQExpansion":
        return self + (-other)

    def q_d_dq(self) -> "VVQExpansion":
        return VVQExpansion(
            {k: {e: e * c for e, c in t.items()} for k, t in self.components.items()},
            self.precision,
            self.floor,
        )

    def map_components(self, f: Callable[[Hashable], Iterable[Hashable]]) -> "VVQExpansion":
        """Push coefficients along ``key -> f(key)`` (a multi-valued map)."""
        out: Dict[Hashable, Dict[Fraction, Fraction]] = {}
        for k, terms in self.components.items():
            for k2 in f(k):
                t = out.setdefault(k2, {})
                for e, c in terms.items():
                    t[e] = t.get(e, Fraction(0)) + c
        return VVQExpansion(out, self.precision, self.floor)

    def truncate(self, precision) -> "VVQExpansion":
        return VVQExpansion(self.components, min(self.precision, _frac(precision)), self.floor)


def pair(a: VVQExpansion, b) -> QSeries:
    """Bilinear pairing ``sum_gamma a_gamma b_gamma`` as a scalar series."""
    if isinstance(b, PrincipalPart):
        b = b.to_expansion()
    prec = min(a.precision + b.floor, b.precision + a.floor)
    total = QSeries({}, prec, a.floor + b.floor)
    for k in set(a.components) & set(b.components):
        total = total + (a.component(k) * b.component(k))
    return QSeries(total.coeffs, prec, a.floor + b.floor)


def partial_pair(a: VVQExpansion, b: VVQExpansion, position: int = -1) -> VVQExpansion:
    """Contract the ``position`` entry of ``a``'s tuple keys against ``b``.

    ``a`` has keys ``(x_0, ..., x_k)``; the result has the remaining entries
    as key (a bare element when one entry is left).
    """
    prec = min(a.precision + b.floor, b.precision + a.floor)
    flo = a.floor + b.floor
    out: Dict[Hashable, QSeries] = {}
    for key, terms in a.components.items():
        idx = position % len(key)
        r = key[idx]
        if r not in b.components:
            continue
        rest = key[:idx] + key[idx + 1:]
        rest = rest[0] if len(rest) == 1 else rest
        prod = QSeries(terms, a.precision, a.floor) * b.component(r)
        out[rest] = out.get(rest, QSeries({}, prec, flo)) + prod
    return VVQExpansion({k: v.coeffs for k, v in out.items()}, prec, flo)


@dataclass
class PrincipalPart:
    """Principal part and constant terms of an input form ``F``.

    Attributes:
        negative: ``{(mu, m): c}`` meaning ``c q^{-m} e_mu`` with ``m > 0``.
        constant: ``{mu: c}`` meaning ``c q^0 e_mu``; ``None`` when unknown.
        extended: Optional further coefficients ``{(mu, l): c}`` with
            ``0 < l < extended_precision``.
        extended_precision: Precision of the whole expansion when
            ``extended`` is given.
        step: Every exponent of ``F`` lies in ``(1/step) Z``; used to state
            the precision of the bare principal part.
    """

    negative: Dict[Tuple[Tuple[int, ...], Fraction], Fraction] = field(default_factory=dict)
    constant: Optional[Dict[Tuple[int, ...], Fraction]] = field(default_factory=dict)
    extended: Dict[Tuple[Tuple[int, ...], Fraction], Fraction] = field(default_factory=dict)
    extended_precision: Optional[Fraction] = None
    step: int = 1

    def __post_init__(self):
        self.negative = {(tuple(mu), _frac(m)): _frac(c) for (mu, m), c in self.negative.items() if c}
        if self.constant is not None:
            self.constant = {tuple(mu): _frac(c) for mu, c in self.constant.items() if c}
        self.extended = {(tuple(mu), _frac(l)): _frac(c) for (mu, l), c in self.extended.items() if c}
        for (_, m) in self.negative:
            if m <= 0:
                raise ValueError("principal part exponents must be negative (m > 0)")

    @property
    def c00(self) -> Fraction:
        for mu, c in (self.constant or {}).items():
            if not any(mu):
                return c
        return Fraction(0)

    def max_order(self) -> Fraction:
        return max((m for (_, m) in self.negative), default=Fraction(0))

    def precision(self) -> Fraction:
        if self.extended_precision is not None:
            return _frac(self.extended_precision)
        return Fraction(1, self.step)

    def constant_part(self) -> "PrincipalPart":
        """Only the exponent zero terms (empty if unknown)."""
        return PrincipalPart({}, dict(self.constant or {}), step=self.step)

    def to_expansion(self) -> VVQExpansion:
        comps: Dict[Hashable, Dict[Fraction, Fraction]] = {}
        for (mu, m), c in self.negative.items():
            t = comps.setdefault(mu, {})
            t[-m] = t.get(-m, Fraction(0)) + c
        for mu, c in (self.constant or {}).items():
            t = comps.setdefault(mu, {})
            t[Fraction(0)] = t.get(Fraction(0), Fraction(0)) + c
        for (mu, l), c in self.extended.items():
            t = comps.setdefault(mu, {})
            t[l] = t.get(l, Fraction(0)) + c
        return VVQExpansion(comps, self.precision(), -self.max_order())

    def __add__(self, other: "PrincipalPart") -> "PrincipalPart":
        def merge(a, b):
            out = dict(a)
            for k, v in b.items():
                out[k] = out.get(k, Fraction(0)) + v
            return out

        ext_prec = None
        if self.extended_precision is not None and other.extended_precision is not None:
            ext_prec = min(self.extended_precision, other.extended_precision)
        const = None
        if self.constant is not None and other.constant is not None:
            const = merge(self.constant, other.constant)
        return PrincipalPart(
            merge(self.negative, other.negative),
            const,
            merge(self.extended, other.extended) if ext_prec is not None else {},
            ext_prec,
            lcm(self.step, other.step),
        )

    def scale(self, k) -> "PrincipalPart":
        k = _frac(k)
        return PrincipalPart(
            {key: k * c for key, c in self.negative.items()},
            None if self.constant is None else {key: k * c for key, c in self.constant.items()},
            {key: k * c for key, c in self.extended.items()},
            self.extended_precision,
            self.step,
        )

    def validate(self, disc, integral: bool = False) -> None:
        """Check ``m = q(mu) mod 1`` and the symmetry ``c(mu) = c(-mu)``.

        With ``integral`` the negative coefficients must also be integers.
        """
        for (mu, m), c in self.negative.items():
            if len(mu) != len(disc.cyclic_orders) or disc.normalize(mu) != mu:
                raise ValueError(f"principal part element {mu} is not a reduced group element")
            if (m - disc.q(mu)) % 1 != 0:
                raise ValueError(f"exponent -{m} incompatible with q({mu}) = {disc.q(mu)}")
            if self.negative.get((disc.neg(mu), m), Fraction(0)) != c:
                raise ValueError(f"symmetry c(mu,-m) = c(-mu,-m) violated at mu={mu}, m={m}")
            if integral and c.denominator != 1:
                raise ValueError(f"principal part coefficient at mu={mu}, m={m} is not integral")
        for mu, c in (self.constant or {}).items():
            if disc.q(mu) != 0:
                raise ValueError(f"constant term at {mu} requires q(mu) = 0")
            if self.constant.get(disc.neg(mu), Fraction(0)) != c:
                raise ValueError(f"symmetry of constant terms violated at mu={mu}")
        for (mu, l), c in self.extended.items():
            if (l + disc.q(mu)) % 1 != 0:
                raise ValueError(f"extended exponent {l} incompatible with q({mu})")

    def is_symmetric(self, disc) -> bool:
        try:
            self.validate(disc)
        except ValueError:
            return False
        return True
