"""Boundary multiplicities, toroidal special divisors and Borcherds divisors.

Every value here is an exact rational. Inner-ray multiplicities are only
produced when the omitted Petersson term has been certified away, either by
declaring the cusp form space trivial or by declaring ``F`` weakly
holomorphic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .hurwitz import gamma0_plus, hurwitz_H, zagier_plus
from .isotropic import Rank1CuspData, Rank2CuspData
from .lattice import Element, coset_representation_count
from .qseries import (
    PrecisionError,
    PrincipalPart,
    VVQExpansion,
    constant_term,
    eisenstein_E2,
    pair,
    partial_pair,
)
from .theta import theta_definite, theta_K_omega

PETERSSON_ASSUMPTION = (
    "regularized Petersson term omitted: F declared weakly holomorphic or the cusp form space declared trivial"
)
COMPLETENESS_ASSUMPTION = "representative lists of J, I and inner-ray orbits declared complete by the user"
MULTIPLIER_ASSUMPTION = "multiplier system of the Borcherds product not checked"
GPLUS_ASSUMPTION = "G_N^+ is the Hurwitz class number series unless overridden; other choices may shift inner-ray values"
GPLUS_NONMODULAR_WARNING = (
    "Hurwitz G_N^+ is not modular for N > 1; inner-ray values for such N follow the closed form, "
    "use g_plus = gamma0 for the modular choice"
)
GPLUS_CHOICES = ("hurwitz", "gamma0")


class UncertifiedError(RuntimeError):
    """A computation needs an assumption that has not been declared."""


class PathMismatchError(ArithmeticError):
    """The two evaluations of a boundary coefficient disagree."""


# ---------------------------------------------------------------- keys


@dataclass(frozen=True, order=True)
class DivisorKey:
    """``Z(m, mu)``, ``B_J(label)`` or ``B_{I,omega}(cusp, ray)``."""

    kind: str
    m: Fraction = Fraction(0)
    mu: Tuple[int, ...] = ()
    label: str = ""
    ray: str = ""

    def to_json(self) -> dict:
        if self.kind == "Z":
            return {"type": "Z", "m": [self.m.numerator, self.m.denominator], "mu": list(self.mu)}
        if self.kind == "BJ":
            return {"type": "BJ", "label": self.label}
        return {"type": "BIomega", "cusp": self.label, "ray": self.ray}

    def __str__(self) -> str:
        if self.kind == "Z":
            return f"Z({self.m},{list(self.mu)})"
        if self.kind == "BJ":
            return f"B_J[{self.label}]"
        return f"B_I,omega[{self.label},{self.ray}]"


def Z(m, mu) -> DivisorKey:
    return DivisorKey("Z", Fraction(m), tuple(mu))


def BJ(label: str) -> DivisorKey:
    return DivisorKey("BJ", label=label)


def BIomega(cusp: str, ray: str) -> DivisorKey:
    return DivisorKey("BIomega", label=cusp, ray=ray)


@dataclass
class FormalDivisor:
    """Finite rational combination of :class:`DivisorKey` terms."""

    terms: Dict[DivisorKey, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: Fraction(v) for k, v in self.terms.items() if v}

    def add(self, key: DivisorKey, c) -> None:
        c = Fraction(c)
        v = self.terms.get(key, Fraction(0)) + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "FormalDivisor") -> "FormalDivisor":
        out = FormalDivisor(dict(self.terms))
        for k, v in other.terms.items():
            out.add(k, v)
        return out

    def scale(self, c) -> "FormalDivisor":
        return FormalDivisor({k: Fraction(c) * v for k, v in self.terms.items()})

    def __sub__(self, other: "FormalDivisor") -> "FormalDivisor":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalDivisor) and self.terms == other.terms

    def coefficient(self, key: DivisorKey) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def to_json(self) -> list:
        return [
            {"key": k.to_json(), "coeff": [v.numerator, v.denominator]}
            for k, v in sorted(self.terms.items())
        ]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*{k}" for k, v in sorted(self.terms.items()))


# ------------------------------------------------------- datum


@dataclass
class CompactificationDatum:
    """Boundary data of a toroidal compactification.

    Attributes:
        ambient: The lattice ``L``.
        rank1: Rank one cusp representatives.
        inner_rays: Per rank one cusp label, the inner ray representatives.
        rank2: Rank two cusp representatives.
        cusp_space_trivial: User assertion enabling inner-ray multiplicities
            for harmonic input.
        g_plus_overrides: User supplied ``G_N^+`` keyed by ``N``.
        g_plus_choice: Built-in ``G_N^+`` when no override is given:
            ``"hurwitz"`` (:func:`zagier_plus`) or ``"gamma0"``
            (:func:`gamma0_plus`).
    """

    ambient: object
    rank1: List[Rank1CuspData] = field(default_factory=list)
    inner_rays: Dict[str, List[Tuple[Tuple[int, ...], str]]] = field(default_factory=dict)
    rank2: List[Rank2CuspData] = field(default_factory=list)
    cusp_space_trivial: bool = False
    g_plus_overrides: Dict[int, VVQExpansion] = field(default_factory=dict)
    g_plus_choice: str = "hurwitz"

    def validate(self) -> None:
        if self.g_plus_choice not in GPLUS_CHOICES:
            raise ValueError(f"g_plus_choice must be one of {GPLUS_CHOICES}")
        for r1 in self.rank1:
            if r1.ambient.gram != self.ambient.gram:
                raise ValueError(f"cusp {r1.label} lives on a different lattice")
            for omega, lab in self.inner_rays.get(r1.label, []):
                n2 = r1.K.norm(omega)
                if n2 >= 0 or n2 % 2:
                    raise ValueError(f"inner ray {lab} does not have norm -2N < 0")
                if not r1.same_negative_cone(omega):
                    raise ValueError(f"inner ray {lab} lies in the wrong cone")
        for r2 in self.rank2:
            if r2.ambient.gram != self.ambient.gram:
                raise ValueError(f"cusp {r2.label} lives on a different lattice")

    def g_plus(self, N: int, prec) -> VVQExpansion:
        if N in self.g_plus_overrides:
            G = self.g_plus_overrides[N]
            if G.precision < Fraction(prec):
                raise PrecisionError(f"G_{N}^+ override has precision {G.precision} < {prec}")
            return G
        build = gamma0_plus if self.g_plus_choice == "gamma0" else zagier_plus
        try:
            return build(N, prec)
        except ValueError:
            raise UncertifiedError(
                f"no built-in G_N^+ for composite N = {N}; supply g_plus_overrides[{N}] (an expansion file)"
            ) from None

    def g_plus_notes(self) -> List[str]:
        """Assumption strings for the ``G_N^+`` actually used."""
        Ns = sorted(
            {inner_ray_N(r1, w) for r1 in self.rank1 for w, _ in self.inner_rays.get(r1.label, [])}
        )
        if not Ns:
            return []
        notes = [GPLUS_ASSUMPTION + f" (built-in choice: {self.g_plus_choice})"]
        if self.g_plus_choice == "hurwitz" and any(N > 1 and N not in self.g_plus_overrides for N in Ns):
            notes.append(GPLUS_NONMODULAR_WARNING)
        return notes


# --------------------------------------------------------- mult_J


def _check_m_mu(disc, m: Fraction, mu: Element) -> None:
    if m <= 0:
        raise ValueError("m must be positive")
    if (m - disc.q(mu)) % 1 != 0:
        raise ValueError(f"m = {m} is not congruent to q(mu) = {disc.q(mu)} mod 1")


def mult_J(r2: Rank2CuspData, m, mu: Sequence[int]) -> Fraction:
    """``(2m/(n-2)) #{beta in p_D mu : beta^2 = 2m}``, or 0 off the domain."""
    m = Fraction(m)
    disc = r2.ambient.discriminant
    mu = disc.normalize(mu)
    _check_m_mu(disc, m, mu)
    n = r2.n
    if n <= 2:
        raise ValueError("mult_J needs n >= 3; use borcherds_boundary_J with constant terms for n = 2")
    if not r2.perpendicular_to_dual_J(mu):
        return Fraction(0)
    delta = r2.p_D(mu)
    if delta is None:
        return Fraction(0)
    return Fraction(2) * m / (n - 2) * coset_representation_count(r2.D, delta, m)


def up_theta_D(r2: Rank2CuspData, prec) -> VVQExpansion:
    """``up^L_D(Theta_D)`` up to ``prec``."""
    th = theta_definite(r2.D, prec)
    return th.map_components(lambda d: r2.fiber(d))


def borcherds_boundary_J_paths(r2: Rank2CuspData, F: PrincipalPart) -> Dict[str, Fraction]:
    """Both evaluations of the ``B_J`` coefficient that are available.

    ``"E2"`` needs the constant terms of ``F`` (``F.constant`` not ``None``);
    ``"qdq"`` needs ``n >= 3``.
    """
    prec = F.max_order() + 1
    up = up_theta_D(r2, prec)
    out: Dict[str, Fraction] = {}
    if F.constant is not None:
        val = constant_term(eisenstein_E2(prec) * pair(up, F))
        out["E2"] = val / 24
    n = r2.n
    if n >= 3:
        out["qdq"] = constant_term(pair(up.q_d_dq(), F)) / (n - 2)
    return out


def borcherds_boundary_J(r2: Rank2CuspData, F: PrincipalPart) -> Fraction:
    """Coefficient of ``B_J`` in the divisor of the Borcherds product of ``F``.

    When both paths are available they must agree exactly; a mismatch means
    the supplied constant terms do not belong to a modular form.
    """
    paths = borcherds_boundary_J_paths(r2, F)
    if not paths:
        raise ValueError("n = 2 needs the constant terms of F for the E2 path")
    vals = set(paths.values())
    if len(vals) > 1:
        raise PathMismatchError(f"B_J paths disagree: {paths}")
    return vals.pop()


# ---------------------------------------------------- mult_I_omega


def inner_ray_N(r1: Rank1CuspData, omega) -> int:
    n2 = r1.K.norm(omega)
    if n2 >= 0 or n2 % 2:
        raise ValueError("omega must have norm -2N < 0")
    return -n2 // 2


def inner_ray_constant_term(r1: Rank1CuspData, omega, F: PrincipalPart, G_plus: Optional[VVQExpansion] = None) -> Fraction:
    """``CT(<<up Theta_{K,omega}, G_N^+>_N, F>_L)``."""
    N = inner_ray_N(r1, omega)
    prec = F.max_order() + 1
    if G_plus is None:
        G_plus = zagier_plus(N, prec)
    theta = theta_K_omega(r1, omega, prec)
    inner = partial_pair(theta, G_plus, position=-1)
    up = inner.map_components(lambda d: r1.fiber(d))
    return constant_term(pair(up, F))


def mult_I_omega(
    r1: Rank1CuspData,
    omega,
    F: PrincipalPart,
    G_plus: Optional[VVQExpansion] = None,
    certified: bool = False,
) -> Fraction:
    """``-CT(<<up Theta_{K,omega}, G_N^+>_N, F>_L)``.

    With ``F = F_{m,mu}``, principal part ``q^{-m}(e_mu + e_{-mu})`` plus its
    constant term, this is ``mult_{I,omega}(m, mu)``: the prefactor
    ``|omega|/(8 sqrt(2) pi)`` cancels against ``-8 pi/sqrt(N)``.
    ``certified`` must be set to acknowledge the omitted Petersson term.
    """
    if not certified:
        raise UncertifiedError(PETERSSON_ASSUMPTION + " (not certified)")
    return -inner_ray_constant_term(r1, omega, F, G_plus)


def mult_I_omega_affine(r1: Rank1CuspData, omega, m, mu, G_plus=None, certified: bool = False) -> Tuple[Fraction, Fraction]:
    """``mult_{I,omega}(m, mu)`` as ``a + b*c0`` with symbolic ``c0 = c(0,0)``.

    Returns ``(a, b)``, evaluated on ``q^{-m}(e_mu + e_{-mu}) + c0 e_0``.
    """
    disc = r1.ambient.discriminant
    m = Fraction(m)
    mu = disc.normalize(mu)
    _check_m_mu(disc, m, mu)
    F0 = fmmu_principal_part(disc, m, mu, c0=0)
    F1 = fmmu_principal_part(disc, m, mu, c0=1)
    a = mult_I_omega(r1, omega, F0, G_plus, certified)
    b = mult_I_omega(r1, omega, F1, G_plus, certified) - a
    return a, b


def fmmu_principal_part(disc, m, mu, c0=None) -> PrincipalPart:
    """Principal part ``q^{-m}(e_mu + e_{-mu})`` with optional constant ``c0 e_0``."""
    m = Fraction(m)
    mu = disc.normalize(mu)
    neg: Dict = {}
    for x in {mu, disc.neg(mu)}:
        neg[(x, m)] = neg.get((x, m), Fraction(0)) + 1
    if mu == disc.neg(mu):
        neg[(mu, m)] = Fraction(2)
    const = None if c0 is None else {disc.zero(): Fraction(c0)}
    return PrincipalPart(negative=neg, constant=const, step=_level(disc))


def _level(disc) -> int:
    from math import lcm

    d = 1
    for a in disc.elements():
        d = lcm(d, disc.q(a).denominator)
    return d


def siegel_closed_form(r1: Rank1CuspData, omega, m, mu) -> Tuple[Fraction, Fraction]:
    """``-c0/12 + sum_{lambda in K*/Z omega} H(12m - 6 lambda_perp^2)`` as ``(a, b)``.

    Only meaningful for ``N = 3``; the sum runs over all classes of ``K*``.
    """
    N = inner_ray_N(r1, omega)
    m = Fraction(m)
    theta = theta_K_omega(r1, omega, m + 1)
    total = Fraction(0)
    for _, terms in theta.components.items():
        for e, c in terms.items():
            d = 4 * N * m - 2 * N * 2 * e  # 12m - 6 lambda_perp^2 for N = 3
            if d.denominator == 1 and d >= 0:
                total += c * hurwitz_H(int(d))
    return total, Fraction(-1, 12)


# --------------------------------------------------------- ztor


def ztor_divisor(
    datum: CompactificationDatum,
    m,
    mu,
    c0: Optional[Fraction] = None,
    affine: bool = False,
):
    """``Z^tor(m, mu)`` as a :class:`FormalDivisor`.

    Inner-ray terms need ``datum.cusp_space_trivial``. With ``affine`` the
    inner-ray coefficients are returned as ``(a, b)`` pairs in a separate
    dict meaning ``a + b c0``; otherwise ``c0`` must be given when inner rays
    are present.
    """
    L = datum.ambient
    disc = L.discriminant
    m = Fraction(m)
    mu = disc.normalize(mu)
    _check_m_mu(disc, m, mu)
    D = FormalDivisor({Z(m, mu): 1})
    symbolic: Dict[DivisorKey, Tuple[Fraction, Fraction]] = {}
    for r2 in datum.rank2:
        D.add(BJ(r2.label), mult_J(r2, m, mu))
    for r1 in datum.rank1:
        rays = datum.inner_rays.get(r1.label, [])
        if not rays:
            continue
        if not datum.cusp_space_trivial:
            raise UncertifiedError(PETERSSON_ASSUMPTION + " (set cusp_space_trivial)")
        # only mu perpendicular to I_{L*}/I contribute
        if not r1.in_L_star_I(mu):
            continue
        for omega, lab in rays:
            G = datum.g_plus(inner_ray_N(r1, omega), m + 1)
            a, b = mult_I_omega_affine(r1, omega, m, mu, G, certified=True)
            key = BIomega(r1.label, lab)
            if affine:
                symbolic[key] = (a, b)
            else:
                if c0 is None:
                    raise ValueError("constant term c0 of F_{m,mu} is required for inner-ray terms")
                D.add(key, a + b * Fraction(c0))
    if affine:
        return D, symbolic
    return D


# ---------------------------------------------------- Borcherds


@dataclass
class BorcherdsResult:
    weight: Fraction
    divisor: FormalDivisor
    assumptions: List[str]
    b_j_paths: Dict[str, Dict[str, Fraction]] = field(default_factory=dict)


def borcherds_divisor(datum: CompactificationDatum, F: PrincipalPart) -> BorcherdsResult:
    """Weight ``c(0,0)/2`` and the toroidal divisor of the Borcherds product."""
    L = datum.ambient
    disc = L.discriminant
    F.validate(disc, integral=True)
    assumptions = [COMPLETENESS_ASSUMPTION, MULTIPLIER_ASSUMPTION]
    weight = (F.c00 if F.constant is not None else Fraction(0)) / 2
    if F.constant is None:
        assumptions.append("constant terms of F not supplied; weight reported as 0 and the E2 path skipped")
    D = FormalDivisor()
    for (mu, m), c in sorted(F.negative.items()):
        D.add(Z(m, mu), c / 2)
    paths: Dict[str, Dict[str, Fraction]] = {}
    for r2 in datum.rank2:
        paths[r2.label] = borcherds_boundary_J_paths(r2, F)
        D.add(BJ(r2.label), borcherds_boundary_J(r2, F))
    if any(datum.inner_rays.get(r1.label) for r1 in datum.rank1):
        if F.constant is None:
            raise UncertifiedError("inner-ray terms need the constant terms of F")
        assumptions.append(PETERSSON_ASSUMPTION)
        assumptions.extend(datum.g_plus_notes())
    for r1 in datum.rank1:
        for omega, lab in datum.inner_rays.get(r1.label, []):
            N = inner_ray_N(r1, omega)
            G = datum.g_plus(N, F.max_order() + 1)
            D.add(BIomega(r1.label, lab), -inner_ray_constant_term(r1, omega, F, G))
    return BorcherdsResult(weight, D, assumptions, paths)


def serre_relation(datum: CompactificationDatum, F: PrincipalPart) -> FormalDivisor:
    """``sum c(mu,-m) Z^tor(m, mu)``, the relation that vanishes in CH^1.

    The ``Z`` and ``B_J`` parts are summed from :func:`ztor_divisor`. The
    individual constant terms of the ``F_{m,mu}`` are not known, only that
    they add up to ``2 c(., 0)`` since ``F = (1/2) sum c F_{m,mu}``; the
    inner-ray coefficients therefore combine the principal parts of the
    ``Z^tor(m, mu)`` with one evaluation on the constant part ``2 F_0``.
    """
    disc = datum.ambient.discriminant
    F.validate(disc, integral=True)
    total = FormalDivisor()
    has_inner = any(datum.inner_rays.get(r1.label) for r1 in datum.rank1)
    if has_inner and F.constant is None:
        raise UncertifiedError("inner-ray terms need the constant terms of F")
    for (mu, m), c in sorted(F.negative.items()):
        if has_inner:
            z, sym = ztor_divisor(datum, m, mu, affine=True)
            for key, (a, _) in sym.items():
                z.add(key, a)
        else:
            z = ztor_divisor(datum, m, mu)
        total = total + z.scale(c)
    if has_inner:
        const = F.constant_part().scale(2)
        for r1 in datum.rank1:
            for omega, lab in datum.inner_rays.get(r1.label, []):
                G = datum.g_plus(inner_ray_N(r1, omega), F.max_order() + 1)
                total.add(BIomega(r1.label, lab), -inner_ray_constant_term(r1, omega, const, G))
    return total


def serre_pairing(a: Dict[Tuple[Tuple[int, ...], Fraction], Fraction], F: PrincipalPart) -> Fraction:
    """``sum c(mu, -l) a(mu, l)`` over ``l >= 0``.

    ``a`` holds coefficients of a holomorphic form at non-negative exponents;
    ``F`` must know its coefficients at ``-l`` for every ``l`` in the support.
    """
    total = Fraction(0)
    for (mu, l), v in a.items():
        l = Fraction(l)
        mu = tuple(mu)
        if l < 0:
            raise ValueError("support of a must have non-negative exponents")
        if l == 0:
            if F.constant is None:
                raise PrecisionError("constant terms of F are required")
            total += F.constant.get(mu, Fraction(0)) * Fraction(v)
        else:
            total += F.negative.get((mu, l), Fraction(0)) * Fraction(v)
    return total
